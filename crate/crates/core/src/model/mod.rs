//! Continuous model: states, fluxes, non-conservative products, sources,
//! eigenstructure, energy and constraint residuals.
//!
//! Every system is written in the form
//!
//! ```text
//! dU/dt + div F(U) + B(U) . grad U = S(U)
//! ```
//!
//! where `B(U) . grad U` only ever involves the depth gradient and the
//! bottom-slope gradient. The bottom elevation `z_b` is therefore passed next
//! to the state instead of being carried as an extra unknown.

pub mod eigen;
mod full;
mod full2d;
mod mild;
mod state;

pub use eigen::{eigenvalues, eigenvectors, quasilinear_matrix};
pub use full::FullSgn1D;
pub use full2d::FullSgn2D;
pub use mild::MildBottom1D;
pub use state::{ConservedState1D, ConservedState2D, MildState1D, PrimitiveState, StateGradient};

use crate::error::{Error, Result};

/// Smallest admissible nodal depth.
pub const H_MIN: f64 = 1e-10;

/// Gravitational acceleration and artificial sound speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    pub g: f64,
    pub c: f64,
}

impl PhysParams {
    pub fn new(g: f64, c: f64) -> Result<Self> {
        if !(g.is_finite() && g > 0.0) {
            return Err(Error::InvalidParams(format!("g must be positive and finite, got {g}")));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidParams(format!("c must be positive and finite, got {c}")));
        }
        Ok(Self { g, c })
    }

    #[inline]
    pub fn c2(&self) -> f64 {
        self.c * self.c
    }
}

impl Default for PhysParams {
    fn default() -> Self {
        Self { g: 9.81, c: 20.0 }
    }
}

/// Which hyperbolic system is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelVariant {
    /// Full reformulation without the mild-bottom assumption (6 unknowns in 1D, 7 in 2D).
    FullSgn,
    /// Mild-bottom reformulation with unknowns `(h, hu, hw, hp)` in 1D.
    MildBottom,
}

impl ModelVariant {
    pub fn name(self) -> &'static str {
        match self {
            ModelVariant::FullSgn => "full",
            ModelVariant::MildBottom => "mild",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "full" | "fullsgn" | "full-sgn" => Ok(ModelVariant::FullSgn),
            "mild" | "mildbottom" | "mild-bottom" => Ok(ModelVariant::MildBottom),
            other => Err(Error::Config(format!("unknown model variant '{other}' (expected 'full' or 'mild')"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X = 0,
    Y = 1,
}

impl Axis {
    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }
}

/// Unit normal in the `(x, y)` plane. One-dimensional systems only look at `nx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normal {
    pub nx: f64,
    pub ny: f64,
}

impl Normal {
    pub const PLUS_X: Normal = Normal { nx: 1.0, ny: 0.0 };
    pub const MINUS_X: Normal = Normal { nx: -1.0, ny: 0.0 };
    pub const PLUS_Y: Normal = Normal { nx: 0.0, ny: 1.0 };
    pub const MINUS_Y: Normal = Normal { nx: 0.0, ny: -1.0 };

    pub fn new(nx: f64, ny: f64) -> Result<Self> {
        let norm = (nx * nx + ny * ny).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Incompatible(format!("normal ({nx}, {ny}) has no direction")));
        }
        Ok(Self { nx: nx / norm, ny: ny / norm })
    }

    pub fn flipped(self) -> Self {
        Self { nx: -self.nx, ny: -self.ny }
    }
}

/// A hyperbolic system with `NV` conserved unknowns.
///
/// The kernel methods assume a valid state (positive depth) and never fail;
/// the checked free functions of this module validate first.
pub trait Equations<const NV: usize>: Copy + Send + Sync + 'static {
    /// Spatial dimension of the system (1 or 2).
    const DIM: usize;
    /// Column names of the conserved unknowns.
    const NAMES: [&'static str; NV];

    fn params(&self) -> PhysParams;

    fn variant(&self) -> ModelVariant;

    /// Physical flux along one axis.
    fn flux(&self, q: &[f64; NV], axis: Axis) -> [f64; NV];

    /// `B_axis(q) . dq` where `dq` is the gradient of the conserved state along
    /// `axis` and `dzb` the bottom slope along the same axis.
    fn ncp(&self, q: &[f64; NV], dq: &[f64; NV], dzb: f64, axis: Axis) -> [f64; NV];

    fn source(&self, q: &[f64; NV]) -> [f64; NV];

    /// Velocity component along `axis`.
    fn velocity(&self, q: &[f64; NV], axis: Axis) -> f64;

    /// `p + g h + c^2`, the radicand of the acoustic eigenvalues.
    fn radicand(&self, q: &[f64; NV]) -> f64;

    /// Largest angular frequency of the linearised algebraic source at fixed
    /// depth (its Jacobian has purely imaginary eigenvalues).
    #[inline]
    fn source_frequency(&self, _q: &[f64; NV]) -> f64 {
        0.0
    }

    fn energy(&self, q: &[f64; NV], zb: f64) -> f64;

    fn primitive(&self, q: &[f64; NV]) -> PrimitiveState;

    fn from_primitive(&self, p: &PrimitiveState) -> [f64; NV];

    /// Largest characteristic speed magnitude along a unit normal.
    #[inline]
    fn signal_speed(&self, q: &[f64; NV], n: Normal) -> f64 {
        let un = self.velocity(q, Axis::X) * n.nx
            + if Self::DIM > 1 { self.velocity(q, Axis::Y) * n.ny } else { 0.0 };
        un.abs() + self.radicand(q).sqrt()
    }

    /// `F(q) . n`.
    #[inline]
    fn normal_flux(&self, q: &[f64; NV], n: Normal) -> [f64; NV] {
        let mut f = self.flux(q, Axis::X);
        if n.nx != 1.0 {
            f.iter_mut().for_each(|v| *v *= n.nx);
        }
        if Self::DIM > 1 && n.ny != 0.0 {
            let g = self.flux(q, Axis::Y);
            for (a, b) in f.iter_mut().zip(g) {
                *a += n.ny * b;
            }
        }
        f
    }

    /// `(B(q) . n) dq` for a jump `dq` and bottom jump `dzb`.
    #[inline]
    fn normal_ncp(&self, q: &[f64; NV], dq: &[f64; NV], dzb: f64, n: Normal) -> [f64; NV] {
        let mut b = self.ncp(q, dq, dzb, Axis::X);
        if n.nx != 1.0 {
            b.iter_mut().for_each(|v| *v *= n.nx);
        }
        if Self::DIM > 1 && n.ny != 0.0 {
            let by = self.ncp(q, dq, dzb, Axis::Y);
            for (a, v) in b.iter_mut().zip(by) {
                *a += n.ny * v;
            }
        }
        b
    }

    /// Energy flux along `axis`: `u_axis (E + g h^2 / 2 + h p)`.
    #[inline]
    fn energy_flux(&self, q: &[f64; NV], zb: f64, axis: Axis) -> f64 {
        let prim = self.primitive(q);
        let u = self.velocity(q, axis);
        let g = self.params().g;
        u * self.energy(q, zb) + u * (0.5 * g * prim.h * prim.h) + u * prim.h * prim.p
    }

    /// State with depth `h` and every other unknown zero.
    #[inline]
    fn rest_state(&self, h: f64) -> [f64; NV] {
        let mut q = [0.0; NV];
        q[0] = h;
        q
    }
}

/// Rejects states that the kernels cannot evaluate.
pub fn validate_depth(h: f64) -> Result<()> {
    if h.is_finite() && h > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveDepth { h })
    }
}

fn validate_radicand<E: Equations<NV>, const NV: usize>(eq: &E, q: &[f64; NV]) -> Result<f64> {
    validate_depth(q[0])?;
    let r = eq.radicand(q);
    if r.is_finite() && r > 0.0 {
        Ok(r)
    } else {
        Err(Error::ModelBreakdown { radicand: r, h: q[0], p: eq.primitive(q).p })
    }
}

pub fn flux<E: Equations<NV>, const NV: usize>(eq: &E, q: &[f64; NV], axis: Axis) -> Result<[f64; NV]> {
    validate_depth(q[0])?;
    Ok(eq.flux(q, axis))
}

/// `B(U) . grad U`, summed over the spatial dimensions of the system.
pub fn noncons_product<E: Equations<NV>, const NV: usize>(
    eq: &E,
    q: &[f64; NV],
    grad: &StateGradient<NV>,
) -> Result<[f64; NV]> {
    validate_depth(q[0])?;
    let mut out = eq.ncp(q, &grad.dx, grad.dzb_dx, Axis::X);
    if E::DIM > 1 {
        let by = eq.ncp(q, &grad.dy, grad.dzb_dy, Axis::Y);
        for (a, b) in out.iter_mut().zip(by) {
            *a += b;
        }
    }
    Ok(out)
}

pub fn source<E: Equations<NV>, const NV: usize>(eq: &E, q: &[f64; NV]) -> Result<[f64; NV]> {
    validate_depth(q[0])?;
    Ok(eq.source(q))
}

/// Largest `|u.n| + sqrt(p + g h + c^2)` over the two interface states.
pub fn max_signal_speed<E: Equations<NV>, const NV: usize>(
    eq: &E,
    left: &[f64; NV],
    right: &[f64; NV],
    n: Normal,
) -> Result<f64> {
    validate_radicand(eq, left)?;
    validate_radicand(eq, right)?;
    Ok(eq.signal_speed(left, n).max(eq.signal_speed(right, n)))
}

pub fn energy_density<E: Equations<NV>, const NV: usize>(eq: &E, q: &[f64; NV], zb: f64) -> Result<f64> {
    validate_depth(q[0])?;
    Ok(eq.energy(q, zb))
}

pub fn energy_flux<E: Equations<NV>, const NV: usize>(eq: &E, q: &[f64; NV], zb: f64, axis: Axis) -> Result<f64> {
    validate_depth(q[0])?;
    Ok(eq.energy_flux(q, zb, axis))
}

/// Residuals `(sigma + h div u, w - sigma/2 - u . grad z_b)` of the two
/// algebraic constraints that the relaxation system recovers as `c -> inf`.
///
/// `div_u` is the velocity divergence and `u_dot_grad_zb` the advective bottom
/// slope, both evaluated by the caller from the discrete solution.
pub fn constraint_residuals(prim: &PrimitiveState, div_u: f64, u_dot_grad_zb: f64) -> (f64, f64) {
    let r_sigma = prim.sigma + prim.h * div_u;
    let r_w = prim.w - 0.5 * prim.sigma - u_dot_grad_zb;
    (r_sigma, r_w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_validation() {
        assert!(PhysParams::new(9.81, 20.0).is_ok());
        assert!(PhysParams::new(0.0, 20.0).is_err());
        assert!(PhysParams::new(9.81, -1.0).is_err());
        assert!(PhysParams::new(9.81, f64::INFINITY).is_err());
    }

    #[test]
    fn constraint_residual_examples() {
        let prim = PrimitiveState { h: 1.0, sigma: -0.1, ..PrimitiveState::default() };
        let (rs, _) = constraint_residuals(&prim, 0.2, 0.0);
        assert!((rs - 0.1).abs() < 1e-15);

        // sigma = -h du/dx exactly
        let prim = PrimitiveState { h: 2.0, sigma: -0.6, ..PrimitiveState::default() };
        assert_eq!(constraint_residuals(&prim, 0.3, 0.0).0, 0.0);

        // flat bottom, u = 0, w = sigma / 2
        let prim = PrimitiveState { h: 1.0, sigma: 0.4, w: 0.2, ..PrimitiveState::default() };
        assert_eq!(constraint_residuals(&prim, 0.0, 0.0).1, 0.0);
    }

    #[test]
    fn non_positive_depth_is_rejected() {
        let eq = FullSgn1D::new(PhysParams::default());
        let q = [0.0, 1.0, 0.0, 0.0, 0.0, 0.0];
        assert!(matches!(flux(&eq, &q, Axis::X), Err(Error::NonPositiveDepth { .. })));
        assert!(source(&eq, &[-1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn negative_radicand_reports_state() {
        let eq = FullSgn1D::new(PhysParams::new(9.81, 1.0).unwrap());
        // p = -20 makes p + g h + c^2 negative
        let q = [1.0, 0.0, 0.0, 0.0, -20.0, 0.0];
        match max_signal_speed(&eq, &q, &q, Normal::PLUS_X) {
            Err(Error::ModelBreakdown { radicand, h, p }) => {
                assert!(radicand < 0.0);
                assert_eq!(h, 1.0);
                assert_eq!(p, -20.0);
            }
            other => panic!("expected breakdown, got {other:?}"),
        }
    }
}
