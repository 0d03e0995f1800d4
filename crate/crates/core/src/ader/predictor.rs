use super::{SchemeConfig, SpaceTimeBasis};
use crate::error::{Error, Result};
use crate::model::{Axis, Equations};

/// Space-time nodal coefficients of one cell.
///
/// Node `(a, k)` sits at temporal node `a` and spatial node `k`, stored at
/// `a * M + k` with `M = (N + 1)^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictorSolution<const NV: usize> {
    spatial: usize,
    data: Vec<[f64; NV]>,
}

impl<const NV: usize> PredictorSolution<NV> {
    pub fn spatial_nodes(&self) -> usize {
        self.spatial
    }

    pub fn time_nodes(&self) -> usize {
        self.data.len() / self.spatial
    }

    /// Coefficient at temporal node `a`, spatial node `k`.
    pub fn at(&self, a: usize, k: usize) -> &[f64; NV] {
        &self.data[a * self.spatial + k]
    }

    pub fn data(&self) -> &[[f64; NV]] {
        &self.data
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictorStats {
    pub iterations: usize,
    /// Relative increment of the first iteration.
    pub first_increment: f64,
    /// Relative increment of the last iteration.
    pub last_increment: f64,
}

/// Relative increments below this are round-off stagnation, not divergence.
const STAGNATION_FLOOR: f64 = 1e-9;

impl PredictorStats {
    fn diverged(&self, tol: f64) -> bool {
        let floor = tol.max(STAGNATION_FLOOR);
        !self.last_increment.is_finite() || (self.last_increment > floor && self.last_increment > self.first_increment)
    }
}

/// Scratch space for the fixed-point iteration.
#[derive(Debug, Clone)]
pub(crate) struct Workspace<const NV: usize> {
    pub q: Vec<[f64; NV]>,
    pub f: Vec<[f64; NV]>,
    pub g: Vec<[f64; NV]>,
    pub r: Vec<[f64; NV]>,
}

impl<const NV: usize> Workspace<NV> {
    pub fn new(len: usize) -> Self {
        Self { q: vec![[0.0; NV]; len], f: vec![[0.0; NV]; len], g: vec![[0.0; NV]; len], r: vec![[0.0; NV]; len] }
    }
}

/// Space-time residual `-dF/dx - B dq/dx + S` of a 1D cell, written to `ws.r`.
#[inline]
pub(crate) fn residual_1d<E: Equations<NV>, const NV: usize>(
    eq: &E,
    d: &[f64],
    n: usize,
    dzb: &[f64],
    inv_dx: f64,
    ws: &mut Workspace<NV>,
) {
    for (f, q) in ws.f.iter_mut().zip(&ws.q) {
        *f = eq.flux(q, Axis::X);
    }
    for a in 0..n {
        let row = a * n;
        for k in 0..n {
            let mut df = [0.0; NV];
            let mut dq = [0.0; NV];
            for l in 0..n {
                let dkl = d[k * n + l] * inv_dx;
                let fl = &ws.f[row + l];
                let ql = &ws.q[row + l];
                for m in 0..NV {
                    df[m] += dkl * fl[m];
                    dq[m] += dkl * ql[m];
                }
            }
            let q = &ws.q[row + k];
            let b = eq.ncp(q, &dq, dzb[k], Axis::X);
            let s = eq.source(q);
            let r = &mut ws.r[row + k];
            for m in 0..NV {
                r[m] = s[m] - df[m] - b[m];
            }
        }
    }
}

/// Space-time residual of a 2D cell, written to `ws.r`.
#[inline]
#[allow(clippy::too_many_arguments)]
pub(crate) fn residual_2d<E: Equations<NV>, const NV: usize>(
    eq: &E,
    d: &[f64],
    n: usize,
    dzb_dx: &[f64],
    dzb_dy: &[f64],
    inv_dx: f64,
    inv_dy: f64,
    ws: &mut Workspace<NV>,
) {
    let m2 = n * n;
    for ((f, g), q) in ws.f.iter_mut().zip(ws.g.iter_mut()).zip(&ws.q) {
        *f = eq.flux(q, Axis::X);
        *g = eq.flux(q, Axis::Y);
    }
    for a in 0..n {
        let base = a * m2;
        for j in 0..n {
            for i in 0..n {
                let mut dfx = [0.0; NV];
                let mut dqx = [0.0; NV];
                let mut dgy = [0.0; NV];
                let mut dqy = [0.0; NV];
                for l in 0..n {
                    let cx = d[i * n + l] * inv_dx;
                    let cy = d[j * n + l] * inv_dy;
                    let px = base + j * n + l;
                    let py = base + l * n + i;
                    let (fx, qx) = (&ws.f[px], &ws.q[px]);
                    let (gy, qy) = (&ws.g[py], &ws.q[py]);
                    for m in 0..NV {
                        dfx[m] += cx * fx[m];
                        dqx[m] += cx * qx[m];
                        dgy[m] += cy * gy[m];
                        dqy[m] += cy * qy[m];
                    }
                }
                let k = j * n + i;
                let q = &ws.q[base + k];
                let bx = eq.ncp(q, &dqx, dzb_dx[k], Axis::X);
                let by = eq.ncp(q, &dqy, dzb_dy[k], Axis::Y);
                let s = eq.source(q);
                let r = &mut ws.r[base + k];
                for m in 0..NV {
                    r[m] = s[m] - dfx[m] - dgy[m] - bx[m] - by[m];
                }
            }
        }
    }
}

/// Fixed-point iteration `q <- u + dt K1^{-1} W R(q)` starting from `q = u`.
#[inline]
pub(crate) fn iterate<const NV: usize>(
    st: &SpaceTimeBasis,
    u: &[[f64; NV]],
    dt: f64,
    tol: f64,
    max_iter: usize,
    ws: &mut Workspace<NV>,
    mut residual: impl FnMut(&mut Workspace<NV>),
) -> PredictorStats {
    let n = st.basis().len();
    let m = u.len();
    let ik1w = st.ik1w();
    for a in 0..n {
        ws.q[a * m..(a + 1) * m].copy_from_slice(u);
    }
    let mut stats = PredictorStats { iterations: 0, first_increment: f64::NAN, last_increment: f64::NAN };
    for it in 1..=max_iter {
        residual(ws);
        let mut inc = 0.0f64;
        let mut scale = 0.0f64;
        for a in 0..n {
            for k in 0..m {
                let mut v = u[k];
                for b in 0..n {
                    let c = dt * ik1w[a * n + b];
                    let r = &ws.r[b * m + k];
                    for c_ in 0..NV {
                        v[c_] += c * r[c_];
                    }
                }
                let old = &mut ws.q[a * m + k];
                for c_ in 0..NV {
                    inc = inc.max((v[c_] - old[c_]).abs());
                    scale = scale.max(v[c_].abs());
                }
                *old = v;
            }
        }
        let rel = if scale > 0.0 { inc / scale } else { inc };
        let rel = if rel.is_finite() { rel } else { f64::INFINITY };
        stats.iterations = it;
        if it == 1 {
            stats.first_increment = rel;
        }
        stats.last_increment = rel;
        if rel <= tol || !rel.is_finite() {
            break;
        }
    }
    stats
}

pub(crate) fn check(stats: PredictorStats, tol: f64, cell: usize) -> Result<()> {
    if stats.diverged(tol) {
        Err(Error::PredictorDiverged { cell, iterations: stats.iterations, increment: stats.last_increment })
    } else {
        Ok(())
    }
}

fn validate_cell<const NV: usize>(cell: &[[f64; NV]], dt: f64) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParams(format!("time step must be positive, got {dt}")));
    }
    for q in cell {
        crate::model::validate_depth(q[0])?;
    }
    Ok(())
}

/// Element-local space-time predictor of a 1D cell.
///
/// `dzb` holds the nodal bottom slope of the cell. Fails only if the
/// fixed-point iteration diverges; hitting the iteration cap with a
/// contracting increment is accepted.
pub fn local_predictor<E: Equations<NV>, const NV: usize>(
    eq: &E,
    st: &SpaceTimeBasis,
    cell: &[[f64; NV]],
    dzb: &[f64],
    dx: f64,
    dt: f64,
    config: &SchemeConfig,
) -> Result<(PredictorSolution<NV>, PredictorStats)> {
    let n = st.basis().len();
    if cell.len() != n || dzb.len() != n {
        return Err(Error::Incompatible("cell data does not match the basis".into()));
    }
    validate_cell(cell, dt)?;
    let mut ws = Workspace::new(n * n);
    let d = st.basis().diff().to_vec();
    let stats = iterate(st, cell, dt, config.predictor_tol, config.max_iterations(st.degree()), &mut ws, |ws| {
        residual_1d(eq, &d, n, dzb, 1.0 / dx, ws)
    });
    check(stats, config.predictor_tol, 0)?;
    Ok((PredictorSolution { spatial: n, data: ws.q }, stats))
}

/// Element-local space-time predictor of a 2D cell (node `j * (N + 1) + i`).
#[allow(clippy::too_many_arguments)]
pub fn local_predictor_2d<E: Equations<NV>, const NV: usize>(
    eq: &E,
    st: &SpaceTimeBasis,
    cell: &[[f64; NV]],
    dzb_dx: &[f64],
    dzb_dy: &[f64],
    spacing: (f64, f64),
    dt: f64,
    config: &SchemeConfig,
) -> Result<(PredictorSolution<NV>, PredictorStats)> {
    let n = st.basis().len();
    let m = n * n;
    if cell.len() != m || dzb_dx.len() != m || dzb_dy.len() != m {
        return Err(Error::Incompatible("cell data does not match the tensor basis".into()));
    }
    validate_cell(cell, dt)?;
    let mut ws = Workspace::new(n * m);
    let d = st.basis().diff().to_vec();
    let stats = iterate(st, cell, dt, config.predictor_tol, config.max_iterations(st.degree()), &mut ws, |ws| {
        residual_2d(eq, &d, n, dzb_dx, dzb_dy, 1.0 / spacing.0, 1.0 / spacing.1, ws)
    });
    check(stats, config.predictor_tol, 0)?;
    Ok((PredictorSolution { spatial: m, data: ws.q }, stats))
}
