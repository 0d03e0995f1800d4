use super::quadrature::gauss_legendre;
use super::{ElementSolution, Mesh1D, Mesh2D, NodalBasis};
use crate::error::{Error, Result};

/// L2 distance between a 1D solution and an analytic reference, per output
/// quantity. Both sides are mapped through `extract` at `N + 2` Gauss points
/// per cell.
pub fn l2_error_with<const NV: usize, const M: usize>(
    sol: &ElementSolution<NV>,
    mesh: &Mesh1D,
    basis: &NodalBasis,
    reference: impl Fn(f64) -> [f64; M],
    extract: impl Fn(&[f64; NV]) -> [f64; M],
) -> Result<[f64; M]> {
    check_1d(sol, mesh, basis)?;
    let (pts, wts) = gauss_legendre(basis.degree() + 2);
    let interp = basis.interpolation_matrix(&pts);
    let n = basis.len();
    let dx = mesh.dx();
    let mut acc = [0.0; M];
    for i in 0..mesh.cells {
        let cell = sol.cell(i);
        for (p, (&xi, &w)) in pts.iter().zip(&wts).enumerate() {
            let mut q = [0.0; NV];
            for (l, ql) in cell.iter().enumerate() {
                let phi = interp[p * n + l];
                for (a, b) in q.iter_mut().zip(ql) {
                    *a += phi * b;
                }
            }
            let num = extract(&q);
            let exact = reference(mesh.to_physical(i, xi));
            for m in 0..M {
                let d = num[m] - exact[m];
                acc[m] += w * dx * d * d;
            }
        }
    }
    Ok(acc.map(f64::sqrt))
}

/// L2 error of the conserved components against an analytic reference.
pub fn l2_error<const NV: usize>(
    sol: &ElementSolution<NV>,
    mesh: &Mesh1D,
    basis: &NodalBasis,
    reference: impl Fn(f64) -> [f64; NV],
) -> Result<[f64; NV]> {
    l2_error_with(sol, mesh, basis, reference, |q| *q)
}

/// L2 distance between two solutions on the same mesh and basis, using the
/// nodal quadrature.
pub fn l2_difference<const NV: usize>(
    a: &ElementSolution<NV>,
    b: &ElementSolution<NV>,
    mesh: &Mesh1D,
    basis: &NodalBasis,
) -> Result<[f64; NV]> {
    check_1d(a, mesh, basis)?;
    check_1d(b, mesh, basis)?;
    let dx = mesh.dx();
    let mut acc = [0.0; NV];
    for i in 0..mesh.cells {
        for ((qa, qb), w) in a.cell(i).iter().zip(b.cell(i)).zip(basis.weights()) {
            for m in 0..NV {
                let d = qa[m] - qb[m];
                acc[m] += w * dx * d * d;
            }
        }
    }
    Ok(acc.map(f64::sqrt))
}

/// 2D counterpart of [`l2_error_with`], oversampled on `(N + 2)^2` points.
pub fn l2_error_2d_with<const NV: usize, const M: usize>(
    sol: &ElementSolution<NV>,
    mesh: &Mesh2D,
    basis: &NodalBasis,
    reference: impl Fn(f64, f64) -> [f64; M],
    extract: impl Fn(&[f64; NV]) -> [f64; M],
) -> Result<[f64; M]> {
    let n = basis.len();
    if sol.cells() != mesh.cells() || sol.nodes_per_cell() != n * n {
        return Err(Error::Incompatible("solution does not match the 2D mesh/basis".into()));
    }
    let (pts, wts) = gauss_legendre(basis.degree() + 2);
    let interp = basis.interpolation_matrix(&pts);
    let area = mesh.x.dx() * mesh.y.dx();
    let mut acc = [0.0; M];
    for iy in 0..mesh.y.cells {
        for ix in 0..mesh.x.cells {
            let cell = sol.cell(mesh.cell_index(ix, iy));
            for (py, &eta) in pts.iter().enumerate() {
                for (px, &xi) in pts.iter().enumerate() {
                    let mut q = [0.0; NV];
                    for j in 0..n {
                        for i in 0..n {
                            let phi = interp[px * n + i] * interp[py * n + j];
                            for (a, b) in q.iter_mut().zip(&cell[j * n + i]) {
                                *a += phi * b;
                            }
                        }
                    }
                    let num = extract(&q);
                    let exact = reference(mesh.x.to_physical(ix, xi), mesh.y.to_physical(iy, eta));
                    let w = wts[px] * wts[py] * area;
                    for m in 0..M {
                        let d = num[m] - exact[m];
                        acc[m] += w * d * d;
                    }
                }
            }
        }
    }
    Ok(acc.map(f64::sqrt))
}

fn check_1d<const NV: usize>(sol: &ElementSolution<NV>, mesh: &Mesh1D, basis: &NodalBasis) -> Result<()> {
    if sol.cells() != mesh.cells || sol.nodes_per_cell() != basis.len() {
        return Err(Error::Incompatible(format!(
            "solution has {} cells x {} nodes, mesh/basis expect {} x {}",
            sol.cells(),
            sol.nodes_per_cell(),
            mesh.cells,
            basis.len()
        )));
    }
    Ok(())
}

/// Observed orders `ln(e_i / e_{i+1}) / ln(n_{i+1} / n_i)` between consecutive
/// entries.
pub fn convergence_order(errors: &[f64], mesh_sizes: &[usize]) -> Result<Vec<f64>> {
    if errors.len() != mesh_sizes.len() {
        return Err(Error::Incompatible("errors and mesh sizes differ in length".into()));
    }
    if errors.len() < 2 {
        return Err(Error::Incompatible("need at least two entries".into()));
    }
    (0..errors.len() - 1)
        .map(|i| {
            let (e0, e1) = (errors[i], errors[i + 1]);
            let (n0, n1) = (mesh_sizes[i] as f64, mesh_sizes[i + 1] as f64);
            if !(e0 > 0.0 && e1 > 0.0) || !e0.is_finite() || !e1.is_finite() {
                return Err(Error::UndefinedOrder { index: i, next: i + 1, reason: "non-positive error".into() });
            }
            if n0 == n1 {
                return Err(Error::UndefinedOrder { index: i, next: i + 1, reason: "identical mesh sizes".into() });
            }
            Ok((e0 / e1).ln() / (n1 / n0).ln())
        })
        .collect()
}
