use super::{Mesh1D, Mesh2D, NodalBasis};
use crate::error::{Error, Result};

/// Nodal DG coefficients of every cell, stored cell-major.
///
/// In 2D the local node index is `j * (N + 1) + i` with `i` along `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementSolution<const NV: usize> {
    nodes_per_cell: usize,
    data: Vec<[f64; NV]>,
}

impl<const NV: usize> ElementSolution<NV> {
    pub fn zeros(cells: usize, nodes_per_cell: usize) -> Self {
        Self { nodes_per_cell, data: vec![[0.0; NV]; cells * nodes_per_cell] }
    }

    pub fn from_data(nodes_per_cell: usize, data: Vec<[f64; NV]>) -> Result<Self> {
        if nodes_per_cell == 0 || data.len() % nodes_per_cell != 0 {
            return Err(Error::Incompatible(format!(
                "{} nodal states do not split into cells of {nodes_per_cell}",
                data.len()
            )));
        }
        Ok(Self { nodes_per_cell, data })
    }

    #[inline]
    pub fn cells(&self) -> usize {
        self.data.len() / self.nodes_per_cell
    }

    #[inline]
    pub fn nodes_per_cell(&self) -> usize {
        self.nodes_per_cell
    }

    #[inline]
    pub fn cell(&self, i: usize) -> &[[f64; NV]] {
        &self.data[i * self.nodes_per_cell..(i + 1) * self.nodes_per_cell]
    }

    #[inline]
    pub fn cell_mut(&mut self, i: usize) -> &mut [[f64; NV]] {
        &mut self.data[i * self.nodes_per_cell..(i + 1) * self.nodes_per_cell]
    }

    #[inline]
    pub fn data(&self) -> &[[f64; NV]] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [[f64; NV]] {
        &mut self.data
    }

    /// Largest componentwise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }
}

/// Collocation projection of `f` onto the nodal space of a 1D mesh.
pub fn l2_project<const NV: usize>(mesh: &Mesh1D, basis: &NodalBasis, f: impl Fn(f64) -> [f64; NV]) -> ElementSolution<NV> {
    let n = basis.len();
    let mut sol = ElementSolution::zeros(mesh.cells, n);
    for i in 0..mesh.cells {
        for (k, q) in sol.cell_mut(i).iter_mut().enumerate() {
            *q = f(mesh.to_physical(i, basis.nodes()[k]));
        }
    }
    sol
}

/// Collocation projection on a 2D mesh.
pub fn l2_project_2d<const NV: usize>(
    mesh: &Mesh2D,
    basis: &NodalBasis,
    f: impl Fn(f64, f64) -> [f64; NV],
) -> ElementSolution<NV> {
    let n = basis.len();
    let mut sol = ElementSolution::zeros(mesh.cells(), n * n);
    for iy in 0..mesh.y.cells {
        for ix in 0..mesh.x.cells {
            let cell = sol.cell_mut(mesh.cell_index(ix, iy));
            for j in 0..n {
                let y = mesh.y.to_physical(iy, basis.nodes()[j]);
                for i in 0..n {
                    cell[j * n + i] = f(mesh.x.to_physical(ix, basis.nodes()[i]), y);
                }
            }
        }
    }
    sol
}

/// Evaluates a nodal cell polynomial at reference coordinate `xi`.
pub fn eval_cell<const NV: usize>(basis: &NodalBasis, cell: &[[f64; NV]], xi: f64) -> [f64; NV] {
    let phi = basis.values_at(xi);
    let mut out = [0.0; NV];
    for (p, q) in phi.iter().zip(cell) {
        for (o, v) in out.iter_mut().zip(q) {
            *o += p * v;
        }
    }
    out
}

pub fn eval_cell_2d<const NV: usize>(basis: &NodalBasis, cell: &[[f64; NV]], xi: f64, eta: f64) -> [f64; NV] {
    let n = basis.len();
    let px = basis.values_at(xi);
    let py = basis.values_at(eta);
    let mut out = [0.0; NV];
    for j in 0..n {
        for i in 0..n {
            let w = px[i] * py[j];
            if w == 0.0 {
                continue;
            }
            for (o, v) in out.iter_mut().zip(&cell[j * n + i]) {
                *o += w * v;
            }
        }
    }
    out
}

/// Point evaluation of a 1D solution.
pub fn eval_at<const NV: usize>(sol: &ElementSolution<NV>, mesh: &Mesh1D, basis: &NodalBasis, x: f64) -> Result<[f64; NV]> {
    let (i, xi) = mesh.locate(x).ok_or(Error::OutsideDomain { x, y: 0.0 })?;
    Ok(eval_cell(basis, sol.cell(i), xi))
}

/// Point evaluation of a 2D solution.
pub fn eval_at_2d<const NV: usize>(
    sol: &ElementSolution<NV>,
    mesh: &Mesh2D,
    basis: &NodalBasis,
    x: f64,
    y: f64,
) -> Result<[f64; NV]> {
    let ((ix, iy), (xi, eta)) = mesh.locate(x, y).ok_or(Error::OutsideDomain { x, y })?;
    Ok(eval_cell_2d(basis, sol.cell(mesh.cell_index(ix, iy)), xi, eta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_projection() {
        let m = Mesh1D::new(0.0, 2.0, 5).unwrap();
        let b = NodalBasis::new(3).unwrap();
        let s = l2_project(&m, &b, |_| [3.5, -1.0]);
        assert!(s.data().iter().all(|q| *q == [3.5, -1.0]));
    }

    #[test]
    fn polynomial_projection_is_exact() {
        let m = Mesh1D::new(-1.0, 3.0, 4).unwrap();
        let b = NodalBasis::new(3).unwrap();
        let f = |x: f64| [1.0 - x + 0.5 * x.powi(3)];
        let s = l2_project(&m, &b, f);
        for &x in &[-1.0, -0.3, 0.0, 1.234, 2.9, 3.0] {
            let v = eval_at(&s, &m, &b, x).unwrap();
            assert!((v[0] - f(x)[0]).abs() < 1e-13);
        }
        assert!(eval_at(&s, &m, &b, 3.5).is_err());
    }

    #[test]
    fn evaluation_at_nodes_is_exact() {
        let m = Mesh2D::new(Mesh1D::new(0.0, 1.0, 3).unwrap(), Mesh1D::new(-1.0, 1.0, 2).unwrap());
        let b = NodalBasis::new(2).unwrap();
        let s = l2_project_2d(&m, &b, |x, y| [(x * 7.0).sin() + y.exp()]);
        let cell = s.cell(m.cell_index(1, 1));
        for j in 0..3 {
            for i in 0..3 {
                let v = eval_cell_2d(&b, cell, b.nodes()[i], b.nodes()[j]);
                assert_eq!(v, cell[j * 3 + i]);
            }
        }
    }
}
