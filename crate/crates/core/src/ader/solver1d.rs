use super::predictor::{check, iterate, residual_1d, Workspace};
use super::riemann::{path_jump_unchecked, rusanov_with_speed, PathQuadrature};
use super::{compute_time_step, source_time_step, SchemeConfig, SpaceTimeBasis};
use crate::bathymetry::BathymetryField1D;
use crate::dg::{ElementSolution, Mesh1D, NodalBasis};
use crate::error::{Error, Result};
use crate::model::{Axis, Equations, Normal, H_MIN};

/// ADER-DG time stepper on a 1D Cartesian mesh.
///
/// Non-periodic edges are transmissive. The ghost state is the mean of the
/// adjacent cell at each time node, with the depth shifted so the free
/// surface (not the depth) is extrapolated; the ghost bottom equals the
/// interior trace. Copying the trace itself lets a uniform stretching mode
/// (`h` flat, `hu` linear) pass the edge undamped.
#[derive(Debug, Clone)]
pub struct Solver1D<E: Equations<NV>, const NV: usize> {
    eq: E,
    mesh: Mesh1D,
    st: SpaceTimeBasis,
    bathy: BathymetryField1D,
    config: SchemeConfig,
    periodic: bool,
    solution: ElementSolution<NV>,
    time: f64,
    steps: usize,
    boundary_inflow: f64,
    max_iterations_used: usize,
    path: PathQuadrature,
    diff: Vec<f64>,
    ws: Workspace<NV>,
    avg_flux: Vec<[f64; NV]>,
    avg_vol: Vec<[f64; NV]>,
    trace_l: Vec<[f64; NV]>,
    trace_r: Vec<[f64; NV]>,
    edge_mean: [Vec<[f64; NV]>; 2],
    face_left_cell: Vec<[f64; NV]>,
    face_right_cell: Vec<[f64; NV]>,
}

impl<E: Equations<NV>, const NV: usize> Solver1D<E, NV> {
    pub fn new(
        eq: E,
        mesh: Mesh1D,
        basis: NodalBasis,
        bathy: BathymetryField1D,
        config: SchemeConfig,
        periodic: bool,
        initial: ElementSolution<NV>,
    ) -> Result<Self> {
        config.validate()?;
        let n = basis.len();
        if initial.cells() != mesh.cells || initial.nodes_per_cell() != n || bathy.cells() != mesh.cells {
            return Err(Error::Incompatible("initial data or bathymetry does not match the mesh/basis".into()));
        }
        check_depth(&initial, 0.0)?;
        let cells = mesh.cells;
        let diff = basis.diff().to_vec();
        let st = SpaceTimeBasis::new(basis)?;
        Ok(Self {
            eq,
            mesh,
            st,
            bathy,
            path: PathQuadrature::new(config.path_points),
            config,
            periodic,
            solution: initial,
            time: 0.0,
            steps: 0,
            boundary_inflow: 0.0,
            max_iterations_used: 0,
            diff,
            ws: Workspace::new(n * n),
            avg_flux: vec![[0.0; NV]; cells * n],
            avg_vol: vec![[0.0; NV]; cells * n],
            trace_l: vec![[0.0; NV]; cells * n],
            trace_r: vec![[0.0; NV]; cells * n],
            edge_mean: [vec![[0.0; NV]; n], vec![[0.0; NV]; n]],
            face_left_cell: vec![[0.0; NV]; cells + 1],
            face_right_cell: vec![[0.0; NV]; cells + 1],
        })
    }

    pub fn equations(&self) -> &E {
        &self.eq
    }

    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    pub fn basis(&self) -> &NodalBasis {
        self.st.basis()
    }

    pub fn bathymetry(&self) -> &BathymetryField1D {
        &self.bathy
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.config
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    pub fn solution(&self) -> &ElementSolution<NV> {
        &self.solution
    }

    /// Mutable access for relaxation blending between steps.
    pub fn solution_mut(&mut self) -> &mut ElementSolution<NV> {
        &mut self.solution
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Net mass that entered through the domain edges so far.
    pub fn boundary_inflow(&self) -> f64 {
        self.boundary_inflow
    }

    /// Largest predictor iteration count of the last step.
    pub fn max_iterations_used(&self) -> usize {
        self.max_iterations_used
    }

    pub fn stable_dt(&self) -> Result<f64> {
        let cfl = compute_time_step(&self.eq, &self.solution, &[self.mesh.dx()], self.st.basis(), self.config.cfl)
            .map_err(|e| match e {
                Error::NonFiniteSpeed { .. } => Error::NonFiniteSpeed { time: self.time },
                other => other,
            })?;
        Ok(cfl.min(source_time_step(&self.eq, &self.solution, self.config.source_safety)))
    }

    /// Advances by exactly `dt`.
    pub fn step(&mut self, dt: f64) -> Result<()> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParams(format!("time step must be positive, got {dt}")));
        }
        self.predict(dt)?;
        self.correct(dt)?;
        self.time += dt;
        self.steps += 1;
        Ok(())
    }

    fn predict(&mut self, dt: f64) -> Result<()> {
        let n = self.st.basis().len();
        let inv_dx = 1.0 / self.mesh.dx();
        let tol = self.config.predictor_tol;
        let max_iter = self.config.max_iterations(self.st.degree());
        let wt = self.st.time_weights();
        let (fl, fr) = (self.st.basis().left(), self.st.basis().right());
        let d = &self.diff;
        self.max_iterations_used = 0;
        for i in 0..self.mesh.cells {
            let u = self.solution.cell(i);
            let dzb = self.bathy.dzb(i);
            let eq = &self.eq;
            let stats = iterate(&self.st, u, dt, tol, max_iter, &mut self.ws, |ws| residual_1d(eq, d, n, dzb, inv_dx, ws));
            check(stats, tol, i)?;
            self.max_iterations_used = self.max_iterations_used.max(stats.iterations);
            let ws = &mut self.ws;
            for (node, q) in ws.q.iter().enumerate() {
                if !(q[0] > H_MIN) {
                    return Err(Error::DepthFloor { cell: i, node: node % n, h: q[0], time: self.time });
                }
            }
            for (f, q) in ws.f.iter_mut().zip(&ws.q) {
                *f = eq.flux(q, Axis::X);
            }
            let avg_flux = &mut self.avg_flux[i * n..(i + 1) * n];
            let avg_vol = &mut self.avg_vol[i * n..(i + 1) * n];
            avg_flux.iter_mut().chain(avg_vol.iter_mut()).for_each(|v| *v = [0.0; NV]);
            for a in 0..n {
                let row = a * n;
                let mut ql = [0.0; NV];
                let mut qr = [0.0; NV];
                for k in 0..n {
                    let q = &ws.q[row + k];
                    let mut dq = [0.0; NV];
                    for l in 0..n {
                        let c = d[k * n + l] * inv_dx;
                        let v = &ws.q[row + l];
                        for m in 0..NV {
                            dq[m] += c * v[m];
                        }
                    }
                    let b = eq.ncp(q, &dq, dzb[k], Axis::X);
                    let s = eq.source(q);
                    let f = &ws.f[row + k];
                    for m in 0..NV {
                        avg_vol[k][m] += wt[a] * (s[m] - b[m]);
                        avg_flux[k][m] += wt[a] * f[m];
                        ql[m] += fl[k] * q[m];
                        qr[m] += fr[k] * q[m];
                    }
                }
                self.trace_l[i * n + a] = ql;
                self.trace_r[i * n + a] = qr;
            }
            if !self.periodic && (i == 0 || i + 1 == self.mesh.cells) {
                let w = self.st.basis().weights();
                let zbar: f64 = w.iter().zip(self.bathy.zb(i)).map(|(w, z)| w * z).sum();
                let mut mean = vec![[0.0; NV]; n];
                for (a, ma) in mean.iter_mut().enumerate() {
                    for k in 0..n {
                        let q = &ws.q[a * n + k];
                        for m in 0..NV {
                            ma[m] += w[k] * q[m];
                        }
                    }
                }
                for side in 0..2 {
                    let touches = if side == 0 { i == 0 } else { i + 1 == self.mesh.cells };
                    if !touches {
                        continue;
                    }
                    let zface = if side == 0 { self.bathy.left_trace(i) } else { self.bathy.right_trace(i) };
                    for (g, ma) in self.edge_mean[side].iter_mut().zip(&mean) {
                        *g = *ma;
                        g[0] += zbar - zface;
                    }
                }
            }
        }
        Ok(())
    }

    fn correct(&mut self, dt: f64) -> Result<()> {
        let n = self.st.basis().len();
        let cells = self.mesh.cells;
        let wt = self.st.time_weights();
        for face in 0..=cells {
            let (left, right) = match (face, self.periodic) {
                (0, true) => (Some(cells - 1), Some(0)),
                (f, true) if f == cells => (Some(cells - 1), Some(0)),
                (0, false) => (None, Some(0)),
                (f, false) if f == cells => (Some(cells - 1), None),
                (f, _) => (Some(f - 1), Some(f)),
            };
            let zm = left.map(|c| self.bathy.right_trace(c));
            let zp = right.map(|c| self.bathy.left_trace(c));
            let dzb = match (zm, zp) {
                (Some(a), Some(b)) => b - a,
                _ => 0.0,
            };
            let mut g_acc = [0.0; NV];
            let mut j_acc = [0.0; NV];
            for a in 0..n {
                let qm = match left {
                    Some(c) => self.trace_r[c * n + a],
                    None => self.edge_mean[0][a],
                };
                let qp = match right {
                    Some(c) => self.trace_l[c * n + a],
                    None => self.edge_mean[1][a],
                };
                let s = self.interface_speed(&qm, &qp, face)?;
                let g = rusanov_with_speed(&self.eq, &qm, &qp, Normal::PLUS_X, s);
                let j = path_jump_unchecked(&self.eq, &qm, &qp, dzb, Normal::PLUS_X, &self.path);
                for m in 0..NV {
                    g_acc[m] += wt[a] * g[m];
                    j_acc[m] += wt[a] * j[m];
                }
            }
            let mut to_left = [0.0; NV];
            let mut to_right = [0.0; NV];
            for m in 0..NV {
                to_left[m] = g_acc[m] + j_acc[m];
                to_right[m] = -g_acc[m] + j_acc[m];
            }
            self.face_left_cell[face] = to_left;
            self.face_right_cell[face] = to_right;
            if !self.periodic {
                if face == 0 {
                    self.boundary_inflow += dt * g_acc[0];
                } else if face == cells {
                    self.boundary_inflow -= dt * g_acc[0];
                }
            }
        }
        let basis = self.st.basis();
        let (w, fl, fr) = (basis.weights(), basis.left(), basis.right());
        let d = &self.diff;
        let dx = self.mesh.dx();
        for i in 0..cells {
            let (right_face, left_face) = (i + 1, i);
            let phi_r = self.face_left_cell[right_face];
            let phi_l = if self.periodic && i == 0 { self.face_right_cell[cells] } else { self.face_right_cell[left_face] };
            let fbar = &self.avg_flux[i * n..(i + 1) * n];
            let vbar = &self.avg_vol[i * n..(i + 1) * n];
            let cell = self.solution.cell_mut(i);
            for k in 0..n {
                let c = dt / (dx * w[k]);
                let mut vol = [0.0; NV];
                for j in 0..n {
                    let coef = w[j] * d[j * n + k];
                    for m in 0..NV {
                        vol[m] += coef * fbar[j][m];
                    }
                }
                for m in 0..NV {
                    cell[k][m] += c * (vol[m] - fr[k] * phi_r[m] - fl[k] * phi_l[m]) + dt * vbar[k][m];
                }
            }
        }
        check_depth(&self.solution, self.time + dt)
    }

    #[inline]
    fn interface_speed(&self, qm: &[f64; NV], qp: &[f64; NV], _face: usize) -> Result<f64> {
        let rm = self.eq.radicand(qm);
        let rp = self.eq.radicand(qp);
        if !(rm > 0.0 && rp > 0.0) {
            return crate::model::max_signal_speed(&self.eq, qm, qp, Normal::PLUS_X);
        }
        let um = self.eq.velocity(qm, Axis::X).abs();
        let up = self.eq.velocity(qp, Axis::X).abs();
        Ok((um + rm.sqrt()).max(up + rp.sqrt()))
    }

    /// `sum_cells int h dx`.
    pub fn total_mass(&self) -> f64 {
        let w = self.st.basis().weights();
        let dx = self.mesh.dx();
        (0..self.mesh.cells).map(|i| self.solution.cell(i).iter().zip(w).map(|(q, w)| w * q[0]).sum::<f64>() * dx).sum()
    }

    /// `sum_cells int E dx` with the nodal quadrature.
    pub fn total_energy(&self) -> f64 {
        let w = self.st.basis().weights();
        let dx = self.mesh.dx();
        (0..self.mesh.cells)
            .map(|i| {
                let zb = self.bathy.zb(i);
                self.solution.cell(i).iter().zip(w).zip(zb).map(|((q, w), z)| w * self.eq.energy(q, *z)).sum::<f64>() * dx
            })
            .sum()
    }

    /// L2 norms over the domain of the residuals `sigma + h du/dx` and
    /// `w - sigma/2 - u dz_b/dx`, using the in-cell polynomial derivative.
    pub fn constraint_residual_norms(&self) -> (f64, f64) {
        let basis = self.st.basis();
        let n = basis.len();
        let w = basis.weights();
        let d = &self.diff;
        let dx = self.mesh.dx();
        let mut acc = (0.0, 0.0);
        let mut u = vec![0.0; n];
        for i in 0..self.mesh.cells {
            let cell = self.solution.cell(i);
            let dzb = self.bathy.dzb(i);
            for (uk, q) in u.iter_mut().zip(cell) {
                *uk = self.eq.velocity(q, Axis::X);
            }
            for k in 0..n {
                let du: f64 = (0..n).map(|l| d[k * n + l] * u[l]).sum::<f64>() / dx;
                let prim = self.eq.primitive(&cell[k]);
                let (rs, rw) = crate::model::constraint_residuals(&prim, du, prim.u * dzb[k]);
                acc.0 += w[k] * dx * rs * rs;
                acc.1 += w[k] * dx * rw * rw;
            }
        }
        (acc.0.sqrt(), acc.1.sqrt())
    }

    /// Free surface `h + z_b` at `x`.
    pub fn free_surface(&self, x: f64) -> Result<f64> {
        let q = crate::dg::eval_at(&self.solution, &self.mesh, self.st.basis(), x)?;
        Ok(q[0] + self.bathy.eval(&self.mesh, self.st.basis(), x)?)
    }
}

fn check_depth<const NV: usize>(sol: &ElementSolution<NV>, time: f64) -> Result<()> {
    let n = sol.nodes_per_cell();
    for (idx, q) in sol.data().iter().enumerate() {
        if !(q[0] > H_MIN) || q.iter().any(|v| !v.is_finite()) {
            return Err(Error::DepthFloor { cell: idx / n, node: idx % n, h: q[0], time });
        }
    }
    Ok(())
}
