use super::predictor::{check, iterate, residual_2d, Workspace};
use super::riemann::{path_jump_unchecked, rusanov_with_speed, PathQuadrature};
use super::{compute_time_step, source_time_step, SchemeConfig, SpaceTimeBasis};
use crate::bathymetry::BathymetryField2D;
use crate::dg::{ElementSolution, Mesh2D, NodalBasis};
use crate::error::{Error, Result};
use crate::model::{Axis, Equations, Normal, H_MIN};

const LEFT: usize = 0;
const RIGHT: usize = 1;
const BOTTOM: usize = 2;
const TOP: usize = 3;

/// ADER-DG time stepper on a 2D Cartesian mesh. Non-periodic sides are
/// transmissive, with the ghost built as in [`super::Solver1D`] from the
/// cell mean along the face normal, one value per along-face node.
#[derive(Debug, Clone)]
pub struct Solver2D<E: Equations<NV>, const NV: usize> {
    eq: E,
    mesh: Mesh2D,
    st: SpaceTimeBasis,
    bathy: BathymetryField2D,
    config: SchemeConfig,
    periodic: [bool; 2],
    solution: ElementSolution<NV>,
    time: f64,
    steps: usize,
    path: PathQuadrature,
    diff: Vec<f64>,
    ws: Workspace<NV>,
    avg_fx: Vec<[f64; NV]>,
    avg_fy: Vec<[f64; NV]>,
    avg_vol: Vec<[f64; NV]>,
    /// Per cell, per side, per `(a, m)`: predictor trace at temporal node `a`
    /// and along-face node `m`.
    traces: Vec<[f64; NV]>,
    /// Per cell, per direction, per `(a, m)`: mean along the x-line `j = m`
    /// (direction 0) or the y-line `i = m` (direction 1).
    means: Vec<[f64; NV]>,
    /// Time-averaged face terms per x-face and along-face node, for the cell
    /// on the left (`G + J`) and on the right (`-G + J`).
    xface: Vec<([f64; NV], [f64; NV])>,
    yface: Vec<([f64; NV], [f64; NV])>,
}

impl<E: Equations<NV>, const NV: usize> Solver2D<E, NV> {
    pub fn new(
        eq: E,
        mesh: Mesh2D,
        basis: NodalBasis,
        bathy: BathymetryField2D,
        config: SchemeConfig,
        periodic: [bool; 2],
        initial: ElementSolution<NV>,
    ) -> Result<Self> {
        config.validate()?;
        if E::DIM != 2 {
            return Err(Error::Incompatible("the 2D solver needs a two-dimensional system".into()));
        }
        let n = basis.len();
        let cells = mesh.cells();
        if initial.cells() != cells || initial.nodes_per_cell() != n * n {
            return Err(Error::Incompatible("initial data does not match the 2D mesh/basis".into()));
        }
        check_depth(&initial, 0.0)?;
        let (nx, ny) = (mesh.x.cells, mesh.y.cells);
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
            diff,
            ws: Workspace::new(n * n * n),
            avg_fx: vec![[0.0; NV]; cells * n * n],
            avg_fy: vec![[0.0; NV]; cells * n * n],
            avg_vol: vec![[0.0; NV]; cells * n * n],
            traces: vec![[0.0; NV]; cells * 4 * n * n],
            means: vec![[0.0; NV]; cells * 2 * n * n],
            xface: vec![([0.0; NV], [0.0; NV]); (nx + 1) * ny * n],
            yface: vec![([0.0; NV], [0.0; NV]); nx * (ny + 1) * n],
        })
    }

    pub fn equations(&self) -> &E {
        &self.eq
    }

    pub fn mesh(&self) -> &Mesh2D {
        &self.mesh
    }

    pub fn basis(&self) -> &NodalBasis {
        self.st.basis()
    }

    pub fn bathymetry(&self) -> &BathymetryField2D {
        &self.bathy
    }

    pub fn solution(&self) -> &ElementSolution<NV> {
        &self.solution
    }

    pub fn solution_mut(&mut self) -> &mut ElementSolution<NV> {
        &mut self.solution
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn stable_dt(&self) -> Result<f64> {
        let cfl = compute_time_step(&self.eq, &self.solution, &[self.mesh.x.dx(), self.mesh.y.dx()], self.st.basis(), self.config.cfl)
            .map_err(|e| match e {
                Error::NonFiniteSpeed { .. } => Error::NonFiniteSpeed { time: self.time },
                other => other,
            })?;
        Ok(cfl.min(source_time_step(&self.eq, &self.solution, self.config.source_safety)))
    }

    pub fn step(&mut self, dt: f64) -> Result<()> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParams(format!("time step must be positive, got {dt}")));
        }
        self.predict(dt)?;
        self.faces()?;
        self.correct(dt)?;
        self.time += dt;
        self.steps += 1;
        Ok(())
    }

    fn predict(&mut self, dt: f64) -> Result<()> {
        let n = self.st.basis().len();
        let m2 = n * n;
        let (inv_dx, inv_dy) = (1.0 / self.mesh.x.dx(), 1.0 / self.mesh.y.dx());
        let tol = self.config.predictor_tol;
        let max_iter = self.config.max_iterations(self.st.degree());
        let wt = self.st.time_weights();
        let (fl, fr) = (self.st.basis().left(), self.st.basis().right());
        let d = &self.diff;
        for c in 0..self.mesh.cells() {
            let u = self.solution.cell(c);
            let (dzx, dzy) = (self.bathy.dzb_dx(c), self.bathy.dzb_dy(c));
            let eq = &self.eq;
            let stats = iterate(&self.st, u, dt, tol, max_iter, &mut self.ws, |ws| {
                residual_2d(eq, d, n, dzx, dzy, inv_dx, inv_dy, ws)
            });
            check(stats, tol, c)?;
            let ws = &mut self.ws;
            for (node, q) in ws.q.iter().enumerate() {
                if !(q[0] > H_MIN) {
                    return Err(Error::DepthFloor { cell: c, node: node % m2, h: q[0], time: self.time });
                }
            }
            for ((f, g), q) in ws.f.iter_mut().zip(ws.g.iter_mut()).zip(&ws.q) {
                *f = eq.flux(q, Axis::X);
                *g = eq.flux(q, Axis::Y);
            }
            let fx = &mut self.avg_fx[c * m2..(c + 1) * m2];
            let fy = &mut self.avg_fy[c * m2..(c + 1) * m2];
            let vol = &mut self.avg_vol[c * m2..(c + 1) * m2];
            fx.iter_mut().chain(fy.iter_mut()).chain(vol.iter_mut()).for_each(|v| *v = [0.0; NV]);
            let tr = &mut self.traces[c * 4 * m2..(c + 1) * 4 * m2];
            tr.iter_mut().for_each(|v| *v = [0.0; NV]);
            let mn = &mut self.means[c * 2 * m2..(c + 1) * 2 * m2];
            mn.iter_mut().for_each(|v| *v = [0.0; NV]);
            let wq = self.st.basis().weights();
            for a in 0..n {
                let base = a * m2;
                for j in 0..n {
                    for i in 0..n {
                        let k = j * n + i;
                        let q = &ws.q[base + k];
                        let mut dqx = [0.0; NV];
                        let mut dqy = [0.0; NV];
                        for l in 0..n {
                            let cx = d[i * n + l] * inv_dx;
                            let cy = d[j * n + l] * inv_dy;
                            let qx = &ws.q[base + j * n + l];
                            let qy = &ws.q[base + l * n + i];
                            for m in 0..NV {
                                dqx[m] += cx * qx[m];
                                dqy[m] += cy * qy[m];
                            }
                        }
                        let bx = eq.ncp(q, &dqx, dzx[k], Axis::X);
                        let by = eq.ncp(q, &dqy, dzy[k], Axis::Y);
                        let s = eq.source(q);
                        let (f, g) = (&ws.f[base + k], &ws.g[base + k]);
                        let w = wt[a];
                        for m in 0..NV {
                            vol[k][m] += w * (s[m] - bx[m] - by[m]);
                            fx[k][m] += w * f[m];
                            fy[k][m] += w * g[m];
                        }
                        // traces: x-faces indexed by j, y-faces by i
                        let (l_, r_, b_, t_) = (
                            LEFT * m2 + a * n + j,
                            RIGHT * m2 + a * n + j,
                            BOTTOM * m2 + a * n + i,
                            TOP * m2 + a * n + i,
                        );
                        for m in 0..NV {
                            tr[l_][m] += fl[i] * q[m];
                            tr[r_][m] += fr[i] * q[m];
                            tr[b_][m] += fl[j] * q[m];
                            tr[t_][m] += fr[j] * q[m];
                            mn[a * n + j][m] += wq[i] * q[m];
                            mn[m2 + a * n + i][m] += wq[j] * q[m];
                        }
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    fn trace(&self, cell: usize, side: usize, a: usize, m: usize) -> &[f64; NV] {
        let n = self.st.basis().len();
        &self.traces[cell * 4 * n * n + side * n * n + a * n + m]
    }

    /// Ghost state beyond `side` of `cell` at time node `a`, along-face node `m`.
    fn ghost(&self, cell: usize, side: usize, a: usize, m: usize) -> [f64; NV] {
        let n = self.st.basis().len();
        let m2 = n * n;
        let dir = if side == LEFT || side == RIGHT { 0 } else { 1 };
        let mut g = self.means[cell * 2 * m2 + dir * m2 + a * n + m];
        let w = self.st.basis().weights();
        let zb = self.bathy.zb(cell);
        let zbar: f64 = if dir == 0 {
            (0..n).map(|i| w[i] * zb[m * n + i]).sum()
        } else {
            (0..n).map(|j| w[j] * zb[j * n + m]).sum()
        };
        g[0] += zbar - self.bathy.face(cell, side)[m];
        g
    }

    /// Time-averaged `(G + J, -G + J)` for an interface between `minus` (with
    /// side `side_m`) and `plus` (side `side_p`); `None` means transmissive.
    #[allow(clippy::too_many_arguments)]
    fn face_terms(
        &self,
        minus: Option<usize>,
        plus: Option<usize>,
        side_m: usize,
        side_p: usize,
        m: usize,
        normal: Normal,
    ) -> Result<([f64; NV], [f64; NV])> {
        let n = self.st.basis().len();
        let wt = self.st.time_weights();
        let zm = minus.map(|c| self.bathy.face(c, side_m)[m]);
        let zp = plus.map(|c| self.bathy.face(c, side_p)[m]);
        let dzb = match (zm, zp) {
            (Some(a), Some(b)) => b - a,
            _ => 0.0,
        };
        let mut g_acc = [0.0; NV];
        let mut j_acc = [0.0; NV];
        for a in 0..n {
            let qm = match minus {
                Some(c) => *self.trace(c, side_m, a, m),
                None => self.ghost(plus.unwrap(), side_p, a, m),
            };
            let qp = match plus {
                Some(c) => *self.trace(c, side_p, a, m),
                None => self.ghost(minus.unwrap(), side_m, a, m),
            };
            let rm = self.eq.radicand(&qm);
            let rp = self.eq.radicand(&qp);
            if !(rm > 0.0 && rp > 0.0) {
                crate::model::max_signal_speed(&self.eq, &qm, &qp, normal)?;
            }
            let s = self.eq.signal_speed(&qm, normal).max(self.eq.signal_speed(&qp, normal));
            let g = rusanov_with_speed(&self.eq, &qm, &qp, normal, s);
            let j = path_jump_unchecked(&self.eq, &qm, &qp, dzb, normal, &self.path);
            for k in 0..NV {
                g_acc[k] += wt[a] * g[k];
                j_acc[k] += wt[a] * j[k];
            }
        }
        let mut to_minus = [0.0; NV];
        let mut to_plus = [0.0; NV];
        for k in 0..NV {
            to_minus[k] = g_acc[k] + j_acc[k];
            to_plus[k] = -g_acc[k] + j_acc[k];
        }
        Ok((to_minus, to_plus))
    }

    fn faces(&mut self) -> Result<()> {
        let n = self.st.basis().len();
        let (nx, ny) = (self.mesh.x.cells, self.mesh.y.cells);
        for iy in 0..ny {
            for f in 0..=nx {
                let (minus, plus) = neighbours(f, nx, self.periodic[0]);
                let minus = minus.map(|ix| self.mesh.cell_index(ix, iy));
                let plus = plus.map(|ix| self.mesh.cell_index(ix, iy));
                for m in 0..n {
                    let t = self.face_terms(minus, plus, RIGHT, LEFT, m, Normal::PLUS_X)?;
                    self.xface[(iy * (nx + 1) + f) * n + m] = t;
                }
            }
        }
        for f in 0..=ny {
            let (minus, plus) = neighbours(f, ny, self.periodic[1]);
            for ix in 0..nx {
                let minus = minus.map(|iy| self.mesh.cell_index(ix, iy));
                let plus = plus.map(|iy| self.mesh.cell_index(ix, iy));
                for m in 0..n {
                    let t = self.face_terms(minus, plus, TOP, BOTTOM, m, Normal::PLUS_Y)?;
                    self.yface[(f * nx + ix) * n + m] = t;
                }
            }
        }
        Ok(())
    }

    fn correct(&mut self, dt: f64) -> Result<()> {
        let basis = self.st.basis();
        let n = basis.len();
        let m2 = n * n;
        let (w, fl, fr) = (basis.weights(), basis.left(), basis.right());
        let d = &self.diff;
        let (dx, dy) = (self.mesh.x.dx(), self.mesh.y.dx());
        let (nx, ny) = (self.mesh.x.cells, self.mesh.y.cells);
        for iy in 0..ny {
            for ix in 0..nx {
                let c = self.mesh.cell_index(ix, iy);
                let fx = &self.avg_fx[c * m2..(c + 1) * m2];
                let fy = &self.avg_fy[c * m2..(c + 1) * m2];
                let vol = &self.avg_vol[c * m2..(c + 1) * m2];
                let left = &self.xface[(iy * (nx + 1) + ix) * n..(iy * (nx + 1) + ix + 1) * n];
                let right = &self.xface[(iy * (nx + 1) + ix + 1) * n..(iy * (nx + 1) + ix + 2) * n];
                let bottom = &self.yface[(iy * nx + ix) * n..(iy * nx + ix + 1) * n];
                let top = &self.yface[((iy + 1) * nx + ix) * n..((iy + 1) * nx + ix + 1) * n];
                let cell = self.solution.cell_mut(c);
                for j in 0..n {
                    for i in 0..n {
                        let k = j * n + i;
                        let cx = dt / (dx * w[i]);
                        let cy = dt / (dy * w[j]);
                        let mut vx = [0.0; NV];
                        let mut vy = [0.0; NV];
                        for l in 0..n {
                            let ax = w[l] * d[l * n + i];
                            let ay = w[l] * d[l * n + j];
                            let px = &fx[j * n + l];
                            let py = &fy[l * n + i];
                            for m in 0..NV {
                                vx[m] += ax * px[m];
                                vy[m] += ay * py[m];
                            }
                        }
                        let (pr, pl) = (&right[j].0, &left[j].1);
                        let (pt, pb) = (&top[i].0, &bottom[i].1);
                        for m in 0..NV {
                            cell[k][m] += cx * (vx[m] - fr[i] * pr[m] - fl[i] * pl[m])
                                + cy * (vy[m] - fr[j] * pt[m] - fl[j] * pb[m])
                                + dt * vol[k][m];
                        }
                    }
                }
            }
        }
        check_depth(&self.solution, self.time + dt)
    }

    pub fn total_mass(&self) -> f64 {
        let w = self.st.basis().weights();
        let n = w.len();
        let area = self.mesh.x.dx() * self.mesh.y.dx();
        self.solution
            .data()
            .chunks(n * n)
            .map(|cell| {
                cell.iter().enumerate().map(|(k, q)| w[k % n] * w[k / n] * q[0]).sum::<f64>() * area
            })
            .sum()
    }

    pub fn total_energy(&self) -> f64 {
        let w = self.st.basis().weights();
        let n = w.len();
        let area = self.mesh.x.dx() * self.mesh.y.dx();
        (0..self.mesh.cells())
            .map(|c| {
                let zb = self.bathy.zb(c);
                self.solution
                    .cell(c)
                    .iter()
                    .enumerate()
                    .map(|(k, q)| w[k % n] * w[k / n] * self.eq.energy(q, zb[k]))
                    .sum::<f64>()
                    * area
            })
            .sum()
    }

    pub fn free_surface(&self, x: f64, y: f64) -> Result<f64> {
        let q = crate::dg::eval_at_2d(&self.solution, &self.mesh, self.st.basis(), x, y)?;
        Ok(q[0] + self.bathy.eval(&self.mesh, self.st.basis(), x, y)?)
    }
}

fn neighbours(face: usize, cells: usize, periodic: bool) -> (Option<usize>, Option<usize>) {
    match (face, periodic) {
        (0, true) => (Some(cells - 1), Some(0)),
        (f, true) if f == cells => (Some(cells - 1), Some(0)),
        (0, false) => (None, Some(0)),
        (f, false) if f == cells => (Some(cells - 1), None),
        (f, _) => (Some(f - 1), Some(f)),
    }
}

fn check_depth<const NV: usize>(sol: &ElementSolution<NV>, time: f64) -> Result<()> {
    let m = sol.nodes_per_cell();
    for (idx, q) in sol.data().iter().enumerate() {
        if !(q[0] > H_MIN) || q.iter().any(|v| !v.is_finite()) {
            return Err(Error::DepthFloor { cell: idx / m, node: idx % m, h: q[0], time });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bathymetry::{project_to_field_2d, BathymetryProfile};
    use crate::dg::{l2_project_2d, Mesh1D};
    use crate::model::{FullSgn2D, PhysParams};

    fn mesh() -> Mesh2D {
        Mesh2D::new(Mesh1D::new(-3.0, 3.0, 6).unwrap(), Mesh1D::new(-2.0, 2.0, 4).unwrap())
    }

    #[test]
    fn lake_at_rest_over_bump_is_preserved() {
        let eq = FullSgn2D::new(PhysParams::new(9.81, 20.0).unwrap());
        let basis = NodalBasis::new(2).unwrap();
        let mesh = mesh();
        let bump = BathymetryProfile::GaussianBump { amplitude: 0.1, sigma: 1.0, center: (0.0, 0.0) };
        let bathy = project_to_field_2d(&bump, &mesh, &basis).unwrap();
        let mut init = ElementSolution::zeros(mesh.cells(), 9);
        for c in 0..mesh.cells() {
            for (q, z) in init.cell_mut(c).iter_mut().zip(bathy.zb(c)) {
                *q = eq.rest_state(0.25 - z);
            }
        }
        let mut s = Solver2D::new(eq, mesh, basis, bathy, SchemeConfig::default(), [false, false], init.clone()).unwrap();
        for _ in 0..10 {
            let dt = s.stable_dt().unwrap();
            s.step(dt).unwrap();
        }
        assert!(s.solution().max_abs_diff(&init) < 1e-12);
    }

    #[test]
    fn periodic_mass_and_y_invariance() {
        // x-only data on a doubly periodic mesh stays independent of y
        let eq = FullSgn2D::new(PhysParams::new(9.81, 10.0).unwrap());
        let basis = NodalBasis::new(2).unwrap();
        let mesh = mesh();
        let bathy = project_to_field_2d(&BathymetryProfile::Flat { z0: 0.0 }, &mesh, &basis).unwrap();
        let tau = std::f64::consts::TAU;
        let init = l2_project_2d(&mesh, &basis, |x, _| {
            let h = 1.0 + 0.05 * (tau * x / 6.0).cos();
            [h, 0.1 * h, 0.0, 0.0, 0.0, 0.0, 0.0]
        });
        let mut s = Solver2D::new(eq, mesh.clone(), basis, bathy, SchemeConfig::default(), [true, true], init).unwrap();
        let m0 = s.total_mass();
        for _ in 0..10 {
            let dt = s.stable_dt().unwrap();
            s.step(dt).unwrap();
        }
        assert!(((s.total_mass() - m0) / m0).abs() < 1e-13);
        for ix in 0..6 {
            let a = s.solution().cell(mesh.cell_index(ix, 0)).to_vec();
            let b = s.solution().cell(mesh.cell_index(ix, 3)).to_vec();
            for (p, q) in a.iter().zip(&b) {
                for m in 0..7 {
                    assert!((p[m] - q[m]).abs() < 1e-13);
                }
                assert!(p[2].abs() < 1e-13);
            }
        }
    }
}
