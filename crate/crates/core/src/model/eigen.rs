use super::{validate_radicand, Equations, FullSgn1D, Normal};
use crate::error::Result;

/// Eigenvalues of `A(U) . n`, index-stable: the first `NV - 2` entries are the
/// advective speed `u . n`, followed by `u . n + a` and `u . n - a` with
/// `a = sqrt(p + g h + c^2)`.
///
/// For the 1D full model the ordering matches [`eigenvectors`].
pub fn eigenvalues<E: Equations<NV>, const NV: usize>(eq: &E, q: &[f64; NV], n: Normal) -> Result<[f64; NV]> {
    let radicand = validate_radicand(eq, q)?;
    let a = radicand.sqrt();
    let mut un = eq.velocity(q, super::Axis::X) * n.nx;
    if E::DIM > 1 {
        un += eq.velocity(q, super::Axis::Y) * n.ny;
    }
    let mut out = [un; NV];
    out[NV - 2] = un + a;
    out[NV - 1] = un - a;
    Ok(out)
}

/// Right eigenvectors `r_1 .. r_6` of the 1D full quasilinear matrix.
pub fn eigenvectors(eq: &FullSgn1D, q: &[f64; 6]) -> Result<[[f64; 6]; 6]> {
    let radicand = validate_radicand(eq, q)?;
    let a = radicand.sqrt();
    let prim = eq.primitive(q);
    let g = eq.params.g;
    let c2 = eq.params.c2();
    Ok([
        [0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        [1.0, prim.u, 0.0, 0.0, -g * prim.h, 0.0],
        [1.0, prim.u + a, prim.w, prim.sigma, prim.p + c2, prim.pb],
        [1.0, prim.u - a, prim.w, prim.sigma, prim.p + c2, prim.pb],
    ])
}

/// Quasilinear matrix `A(U) = dF/dU + B(U)` of the 1D full model, row-major.
///
/// Only the depth column of `B` enters; the bottom-slope terms act on `z_b`,
/// which is not an unknown.
pub fn quasilinear_matrix(eq: &FullSgn1D, q: &[f64; 6]) -> [[f64; 6]; 6] {
    let prim = eq.primitive(q);
    let (u, w, s, p, pb) = (prim.u, prim.w, prim.sigma, prim.p, prim.pb);
    let g = eq.params.g;
    let c2 = eq.params.c2();
    let h = prim.h;
    [
        [0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        [-u * u + g * h, 2.0 * u, 0.0, 0.0, 1.0, 0.0],
        [-u * w, w, u, 0.0, 0.0, 0.0],
        [-u * s, s, 0.0, u, 0.0, 0.0],
        [-u * p - c2 * u, p + c2, 0.0, 0.0, u, 0.0],
        [-u * pb, pb, 0.0, 0.0, 0.0, u],
    ]
}
