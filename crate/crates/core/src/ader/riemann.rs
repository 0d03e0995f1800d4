use crate::dg::quadrature::gauss_legendre;
use crate::error::Result;
use crate::model::{max_signal_speed, validate_depth, Equations, Normal};

/// Gauss-Legendre rule on the segment parameter `s in [0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathQuadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl PathQuadrature {
    pub fn new(points: usize) -> Self {
        let (nodes, weights) = gauss_legendre(points.max(1));
        Self { nodes, weights }
    }
}

/// `1/2 (F(q-) + F(q+)) . n - 1/2 s_max (q+ - q-)`.
pub fn rusanov_flux<E: Equations<NV>, const NV: usize>(
    eq: &E,
    q_minus: &[f64; NV],
    q_plus: &[f64; NV],
    n: Normal,
) -> Result<[f64; NV]> {
    let s = max_signal_speed(eq, q_minus, q_plus, n)?;
    Ok(rusanov_with_speed(eq, q_minus, q_plus, n, s))
}

#[inline]
pub(crate) fn rusanov_with_speed<E: Equations<NV>, const NV: usize>(
    eq: &E,
    q_minus: &[f64; NV],
    q_plus: &[f64; NV],
    n: Normal,
    s: f64,
) -> [f64; NV] {
    let fm = eq.normal_flux(q_minus, n);
    let fp = eq.normal_flux(q_plus, n);
    let mut g = [0.0; NV];
    for m in 0..NV {
        g[m] = 0.5 * (fm[m] + fp[m]) - 0.5 * s * (q_plus[m] - q_minus[m]);
    }
    g
}

/// Path-conservative jump `1/2 (int_0^1 B(psi(s)) . n ds) (q+ - q-)` along the
/// straight segment in `(q, z_b)`.
pub fn path_jump<E: Equations<NV>, const NV: usize>(
    eq: &E,
    q_minus: &[f64; NV],
    q_plus: &[f64; NV],
    zb_minus: f64,
    zb_plus: f64,
    n: Normal,
    quad: &PathQuadrature,
) -> Result<[f64; NV]> {
    validate_depth(q_minus[0])?;
    validate_depth(q_plus[0])?;
    Ok(path_jump_unchecked(eq, q_minus, q_plus, zb_plus - zb_minus, n, quad))
}

#[inline]
pub(crate) fn path_jump_unchecked<E: Equations<NV>, const NV: usize>(
    eq: &E,
    q_minus: &[f64; NV],
    q_plus: &[f64; NV],
    dzb: f64,
    n: Normal,
    quad: &PathQuadrature,
) -> [f64; NV] {
    let mut dq = [0.0; NV];
    for m in 0..NV {
        dq[m] = q_plus[m] - q_minus[m];
    }
    let mut out = [0.0; NV];
    if dzb == 0.0 && dq.iter().all(|v| *v == 0.0) {
        return out;
    }
    for (&s, &w) in quad.nodes.iter().zip(&quad.weights) {
        let mut psi = [0.0; NV];
        for m in 0..NV {
            psi[m] = q_minus[m] + s * dq[m];
        }
        let b = eq.normal_ncp(&psi, &dq, dzb, n);
        for m in 0..NV {
            out[m] += 0.5 * w * b[m];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FullSgn1D, FullSgn2D, PhysParams};

    fn eq() -> FullSgn1D {
        FullSgn1D::new(PhysParams::new(9.81, 20.0).unwrap())
    }

    #[test]
    fn consistency_with_physical_flux() {
        let e = eq();
        let q = [1.2, 0.3, 0.01, -0.02, 0.4, 0.1];
        let g = rusanov_flux(&e, &q, &q, Normal::PLUS_X).unwrap();
        assert_eq!(g, e.flux(&q, crate::model::Axis::X));
    }

    #[test]
    fn still_water_depth_jump() {
        let e = eq();
        let qm = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        let qp = [1.1, 0.0, 0.0, 0.0, 0.0, 0.0];
        let s = (9.81f64 * 1.1 + 400.0).sqrt();
        let g = rusanov_flux(&e, &qm, &qp, Normal::PLUS_X).unwrap();
        assert!((g[0] + 0.5 * s * 0.1).abs() < 1e-14);
    }

    #[test]
    fn antisymmetry_under_swap_and_flip() {
        let e = FullSgn2D::new(PhysParams::new(9.81, 20.0).unwrap());
        let qm = [1.0, 0.2, -0.1, 0.01, 0.02, 0.3, 0.1];
        let qp = [0.9, -0.1, 0.3, 0.0, -0.02, 0.1, 0.2];
        let n = Normal::new(0.6, 0.8).unwrap();
        let a = rusanov_flux(&e, &qm, &qp, n).unwrap();
        let b = rusanov_flux(&e, &qp, &qm, n.flipped()).unwrap();
        for m in 0..7 {
            assert!((a[m] + b[m]).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_jump_gives_zero() {
        let e = eq();
        let q = [1.0, 0.3, 0.0, 0.0, 0.2, 0.0];
        let j = path_jump(&e, &q, &q, 0.1, 0.1, Normal::PLUS_X, &PathQuadrature::new(3)).unwrap();
        assert_eq!(j, [0.0; 6]);
    }

    #[test]
    fn bottom_pressure_row_matches_analytic_segment_integral() {
        let e = eq();
        let u = 0.4;
        let qm = [1.0, u, 0.0, 0.0, 0.0, 0.0];
        let qp = [1.0, u, 0.0, 0.0, 0.0, 0.0];
        let (zm, zp) = (0.02, 0.07);
        let j = path_jump(&e, &qm, &qp, zm, zp, Normal::PLUS_X, &PathQuadrature::new(3)).unwrap();
        let exact = -6.0 * 400.0 * u * (zp - zm) / 2.0;
        assert!((j[5] - exact).abs() < 1e-14 * exact.abs().max(1.0));
    }

    #[test]
    fn hydrostatic_row_matches_analytic_integral() {
        // depth and bottom change at rest: row 2 is g h dh + g h dzb integrated along h(s).
        let e = eq();
        let qm = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        let qp = [1.2, 0.0, 0.0, 0.0, 0.0, 0.0];
        let (dh, dz) = (0.2, -0.1);
        let j = path_jump(&e, &qm, &qp, 0.5, 0.5 + dz, Normal::PLUS_X, &PathQuadrature::new(3)).unwrap();
        let hbar = 1.1;
        let exact = 0.5 * 9.81 * hbar * (dh + dz);
        assert!((j[1] - exact).abs() < 1e-14);
    }
}
