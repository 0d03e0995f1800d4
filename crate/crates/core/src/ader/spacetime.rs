use nalgebra::DMatrix;

use crate::dg::NodalBasis;
use crate::error::{Error, Result};

/// Spatial nodal basis extended by a temporal Gauss-Legendre basis of the same
/// degree on the reference step `t = t^n + tau dt`.
///
/// The element-local weak problem in time reads
/// `K1 q = F0 u^n + dt W R(q)` per spatial node, with
/// `K1_ab = phi_a(1) phi_b(1) - w_b phi_a'(tau_b)`, `F0_a = phi_a(0)` and
/// `W = diag(w)`. Since `K1 1 = F0`, the fixed point is
/// `q = u^n + dt K1^{-1} W R(q)`.
#[derive(Debug, Clone)]
pub struct SpaceTimeBasis {
    basis: NodalBasis,
    k1: Vec<f64>,
    ik1w: Vec<f64>,
    radius: f64,
}

impl SpaceTimeBasis {
    pub fn new(basis: NodalBasis) -> Result<Self> {
        let n = basis.len();
        let d = basis.diff();
        let fr = basis.right();
        let w = basis.weights();
        let mut k1 = vec![0.0; n * n];
        for a in 0..n {
            for b in 0..n {
                k1[a * n + b] = fr[a] * fr[b] - w[b] * d[b * n + a];
            }
        }
        let inv = DMatrix::from_row_slice(n, n, &k1)
            .try_inverse()
            .ok_or_else(|| Error::Incompatible("singular temporal stiffness matrix".into()))?;
        let mut ik1w = vec![0.0; n * n];
        for a in 0..n {
            for b in 0..n {
                ik1w[a * n + b] = inv[(a, b)] * w[b];
            }
        }
        let radius = DMatrix::from_row_slice(n, n, &ik1w).complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max);
        Ok(Self { basis, k1, ik1w, radius })
    }

    /// Spectral radius of `K1^{-1} W`: the fixed point contracts on a linear
    /// source of frequency `omega` when `dt * omega * radius < 1`.
    pub fn picard_radius(&self) -> f64 {
        self.radius
    }

    pub fn degree(&self) -> usize {
        self.basis.degree()
    }

    pub fn basis(&self) -> &NodalBasis {
        &self.basis
    }

    /// Temporal nodes (identical to the spatial ones).
    pub fn time_nodes(&self) -> &[f64] {
        self.basis.nodes()
    }

    pub fn time_weights(&self) -> &[f64] {
        self.basis.weights()
    }

    /// Row-major `K1`.
    pub fn k1(&self) -> &[f64] {
        &self.k1
    }

    /// Row-major `K1^{-1} W`.
    #[inline]
    pub fn ik1w(&self) -> &[f64] {
        &self.ik1w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k1_rows_sum_to_left_values() {
        for degree in 0..=6 {
            let st = SpaceTimeBasis::new(NodalBasis::new(degree).unwrap()).unwrap();
            let n = degree + 1;
            for a in 0..n {
                let s: f64 = st.k1()[a * n..(a + 1) * n].iter().sum();
                assert!((s - st.basis().left()[a]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn linear_ode_is_integrated_exactly_for_polynomial_forcing() {
        // q' = 1 has q(tau) = u + dt tau; the weak solution must reproduce it.
        let st = SpaceTimeBasis::new(NodalBasis::new(2).unwrap()).unwrap();
        let n = 3;
        for a in 0..n {
            let v: f64 = (0..n).map(|b| st.ik1w()[a * n + b]).sum();
            assert!((v - st.time_nodes()[a]).abs() < 1e-13);
        }
    }
}
