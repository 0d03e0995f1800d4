//! One-step ADER-DG: element-local space-time predictor followed by a fully
//! discrete corrector with Rusanov fluxes and path-conservative jumps.
//!
//! A step is two-phase. Every cell's predictor is computed from the data at
//! `t^n` first; the corrector then reads the predictors of a cell and its face
//! neighbours and writes only that cell.

mod predictor;
mod riemann;
mod solver1d;
mod solver2d;
mod spacetime;

pub use predictor::{local_predictor, local_predictor_2d, PredictorSolution, PredictorStats};
pub use riemann::{path_jump, rusanov_flux, PathQuadrature};
pub use solver1d::Solver1D;
pub use solver2d::Solver2D;
pub use spacetime::SpaceTimeBasis;

use crate::dg::{ElementSolution, NodalBasis};
use crate::error::{Error, Result};
use crate::model::{Axis, Equations};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RiemannSolver {
    #[default]
    Rusanov,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub cfl: f64,
    /// Relative increment `max|dq| / max|q|` that stops the predictor iteration.
    pub predictor_tol: f64,
    /// Iteration cap; `None` means `N + 3`.
    pub predictor_max_iter: Option<usize>,
    /// Gauss-Legendre points along the segment path.
    pub path_points: usize,
    pub riemann: RiemannSolver,
    /// Bound on `dt * omega` with `omega` the largest source frequency.
    /// The capped fixed-point iteration amplifies source oscillations once
    /// `dt * omega` exceeds roughly 1.2 (for N = 0..5).
    pub source_safety: f64,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        Self { cfl: 0.45, predictor_tol: 1e-12, predictor_max_iter: None, path_points: 3, riemann: RiemannSolver::Rusanov, source_safety: 0.9 }
    }
}

impl SchemeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidParams(format!("CFL number must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.predictor_tol > 0.0) {
            return Err(Error::InvalidParams(format!("predictor tolerance must be positive, got {}", self.predictor_tol)));
        }
        if !(self.source_safety > 0.0) {
            return Err(Error::InvalidParams(format!("source safety factor must be positive, got {}", self.source_safety)));
        }
        if self.predictor_max_iter == Some(0) {
            return Err(Error::InvalidParams("predictor needs at least one iteration".into()));
        }
        if self.path_points == 0 {
            return Err(Error::InvalidParams("path quadrature needs at least one point".into()));
        }
        Ok(())
    }

    pub fn max_iterations(&self, degree: usize) -> usize {
        self.predictor_max_iter.unwrap_or(degree + 3)
    }
}

/// Largest admissible step: `CFL * min(dx, dy) / ((2N + 1) * sum_axes s_axis)`
/// where `s_axis` is the largest `|u_axis| + sqrt(p + g h + c^2)` over all
/// nodes.
pub fn compute_time_step<E: Equations<NV>, const NV: usize>(
    eq: &E,
    solution: &ElementSolution<NV>,
    spacing: &[f64],
    basis: &NodalBasis,
    cfl: f64,
) -> Result<f64> {
    let mut speeds = [0.0f64; 2];
    for q in solution.data() {
        let r = eq.radicand(q);
        if !(q[0] > 0.0) || !(r > 0.0) {
            crate::model::max_signal_speed(eq, q, q, crate::model::Normal::PLUS_X)?;
        }
        let a = r.sqrt();
        for (d, s) in speeds.iter_mut().enumerate().take(E::DIM) {
            let axis = if d == 0 { Axis::X } else { Axis::Y };
            *s = s.max(eq.velocity(q, axis).abs() + a);
        }
    }
    let total: f64 = speeds[..E::DIM].iter().sum();
    let h = spacing.iter().copied().fold(f64::INFINITY, f64::min);
    let dt = cfl * h / ((2 * basis.degree() + 1) as f64 * total);
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::NonFiniteSpeed { time: f64::NAN });
    }
    Ok(dt)
}

/// Step bound from the stiffness of the algebraic source:
/// `safety / max omega`, infinite for source-free systems.
pub fn source_time_step<E: Equations<NV>, const NV: usize>(
    eq: &E,
    solution: &ElementSolution<NV>,
    safety: f64,
) -> f64 {
    let omega = solution.data().iter().map(|q| eq.source_frequency(q)).fold(0.0, f64::max);
    if omega > 0.0 {
        safety / omega
    } else {
        f64::INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::{l2_project, Mesh1D};
    use crate::model::{FullSgn1D, PhysParams};

    #[test]
    fn time_step_examples() {
        let eq = FullSgn1D::new(PhysParams::new(9.81, 20.0).unwrap());
        let mesh = Mesh1D::new(0.0, 10.0, 10).unwrap();
        for (degree, expected) in [(0usize, 0.9 / 409.81f64.sqrt()), (3, 0.9 / 409.81f64.sqrt() / 7.0)] {
            let b = NodalBasis::new(degree).unwrap();
            let sol = l2_project(&mesh, &b, |_| eq.rest_state(1.0));
            let dt = compute_time_step(&eq, &sol, &[mesh.dx()], &b, 0.9).unwrap();
            assert!((dt - expected).abs() < 1e-15);
        }
        assert!((0.9 / 409.81f64.sqrt() - 0.044_458).abs() < 1e-6);
        assert!((0.9 / 409.81f64.sqrt() / 7.0 - 0.006_351_2).abs() < 1e-7);
    }

    #[test]
    fn time_step_halves_with_doubled_c() {
        let b = NodalBasis::new(2).unwrap();
        let mesh = Mesh1D::new(0.0, 1.0, 4).unwrap();
        let dts: Vec<f64> = [200.0, 400.0]
            .iter()
            .map(|&c| {
                let eq = FullSgn1D::new(PhysParams::new(9.81, c).unwrap());
                let sol = l2_project(&mesh, &b, |_| eq.rest_state(1.0));
                compute_time_step(&eq, &sol, &[mesh.dx()], &b, 0.45).unwrap()
            })
            .collect();
        assert!((dts[0] / dts[1] - 2.0).abs() < 1e-3);
    }

    #[test]
    fn source_bound() {
        let eq = FullSgn1D::new(PhysParams::new(9.81, 20.0).unwrap());
        let mesh = Mesh1D::new(0.0, 10.0, 10).unwrap();
        let sol = l2_project(&mesh, &NodalBasis::new(0).unwrap(), |_| eq.rest_state(1.0));
        let dt = source_time_step(&eq, &sol, 0.5);
        assert!((dt * 20.0 * (18.0 + 6.0 * 7f64.sqrt()).sqrt() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        assert!(SchemeConfig::default().validate().is_ok());
        assert!(SchemeConfig { cfl: 1.5, ..Default::default() }.validate().is_err());
        assert!(SchemeConfig { predictor_tol: 0.0, ..Default::default() }.validate().is_err());
        assert_eq!(SchemeConfig::default().max_iterations(3), 6);
    }
}
