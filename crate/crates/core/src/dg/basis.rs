use super::quadrature::gauss_legendre;
use crate::error::{Error, Result};

pub const MAX_DEGREE: usize = 9;

/// Lagrange basis of degree `N` through the `N + 1` Gauss-Legendre points of
/// the unit interval.
#[derive(Debug, Clone)]
pub struct NodalBasis {
    degree: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    bary: Vec<f64>,
    /// `diff[k * n + l] = phi_l'(xi_k)`
    diff: Vec<f64>,
    left: Vec<f64>,
    right: Vec<f64>,
}

impl NodalBasis {
    pub fn new(degree: usize) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(degree));
        }
        let (nodes, weights) = gauss_legendre(degree + 1);
        let bary = barycentric_weights(&nodes);
        let diff = differentiation_matrix(&nodes, &bary);
        let left = lagrange_values(&nodes, &bary, 0.0);
        let right = lagrange_values(&nodes, &bary, 1.0);
        Ok(Self { degree, nodes, weights, bary, diff, left, right })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of nodes, `N + 1`.
    #[inline]
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    #[inline]
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    #[inline]
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Row-major `D[k][l] = phi_l'(xi_k)` on the reference interval.
    #[inline]
    pub fn diff(&self) -> &[f64] {
        &self.diff
    }

    /// `phi_l(0)`.
    #[inline]
    pub fn left(&self) -> &[f64] {
        &self.left
    }

    /// `phi_l(1)`.
    #[inline]
    pub fn right(&self) -> &[f64] {
        &self.right
    }

    /// Values of every basis function at `xi`.
    pub fn values_at(&self, xi: f64) -> Vec<f64> {
        lagrange_values(&self.nodes, &self.bary, xi)
    }

    /// Row-major matrix `M[p][l] = phi_l(points[p])`.
    pub fn interpolation_matrix(&self, points: &[f64]) -> Vec<f64> {
        points.iter().flat_map(|&x| self.values_at(x)).collect()
    }

    /// Applies the differentiation matrix to nodal samples.
    pub fn differentiate(&self, values: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n).map(|k| (0..n).map(|l| self.diff[k * n + l] * values[l]).sum()).collect()
    }
}

pub(crate) fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    nodes
        .iter()
        .enumerate()
        .map(|(j, &xj)| {
            let prod: f64 = nodes.iter().enumerate().filter(|&(m, _)| m != j).map(|(_, &xm)| xj - xm).product();
            1.0 / prod
        })
        .collect()
}

/// Lagrange basis values at `x` through `nodes`, exact (Kronecker) at nodes.
pub(crate) fn lagrange_values(nodes: &[f64], bary: &[f64], x: f64) -> Vec<f64> {
    if let Some(k) = nodes.iter().position(|&xk| xk == x) {
        let mut v = vec![0.0; nodes.len()];
        v[k] = 1.0;
        return v;
    }
    // product form stays accurate at arbitrary points for these small degrees
    nodes
        .iter()
        .enumerate()
        .map(|(l, _)| {
            let num: f64 = nodes.iter().enumerate().filter(|&(m, _)| m != l).map(|(_, &xm)| x - xm).product();
            num * bary[l]
        })
        .collect()
}

fn differentiation_matrix(nodes: &[f64], bary: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let mut d = vec![0.0; n * n];
    for k in 0..n {
        let mut diag = 0.0;
        for l in 0..n {
            if l != k {
                let v = bary[l] / bary[k] / (nodes[k] - nodes[l]);
                d[k * n + l] = v;
                diag -= v;
            }
        }
        d[k * n + k] = diag;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_bounds() {
        assert!(NodalBasis::new(9).is_ok());
        assert!(matches!(NodalBasis::new(10), Err(Error::UnsupportedDegree(10))));
    }

    #[test]
    fn kronecker_property() {
        let b = NodalBasis::new(4).unwrap();
        for (k, &x) in b.nodes().iter().enumerate() {
            let v = b.values_at(x);
            for (l, &vl) in v.iter().enumerate() {
                assert_eq!(vl, if l == k { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn differentiation_is_exact_on_monomials() {
        for degree in 0..=MAX_DEGREE {
            let b = NodalBasis::new(degree).unwrap();
            for k in 0..=degree {
                let samples: Vec<f64> = b.nodes().iter().map(|x| x.powi(k as i32)).collect();
                let d = b.differentiate(&samples);
                for (x, dv) in b.nodes().iter().zip(d) {
                    let exact = if k == 0 { 0.0 } else { k as f64 * x.powi(k as i32 - 1) };
                    assert!((dv - exact).abs() < 1e-12, "N={degree} k={k}");
                }
            }
        }
    }

    #[test]
    fn boundary_extrapolation_reproduces_polynomials() {
        let b = NodalBasis::new(3).unwrap();
        let samples: Vec<f64> = b.nodes().iter().map(|x| 1.0 + 2.0 * x - x * x * x).collect();
        let at0: f64 = b.left().iter().zip(&samples).map(|(a, s)| a * s).sum();
        let at1: f64 = b.right().iter().zip(&samples).map(|(a, s)| a * s).sum();
        assert!((at0 - 1.0).abs() < 1e-14);
        assert!((at1 - 2.0).abs() < 1e-14);
    }
}
