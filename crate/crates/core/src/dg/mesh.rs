use crate::error::{Error, Result};

/// Uniform partition of `[min, max]` into `cells` elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh1D {
    pub min: f64,
    pub max: f64,
    pub cells: usize,
}

impl Mesh1D {
    pub fn new(min: f64, max: f64, cells: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && max > min) {
            return Err(Error::Incompatible(format!("invalid interval [{min}, {max}]")));
        }
        if cells == 0 {
            return Err(Error::Incompatible("mesh needs at least one cell".into()));
        }
        Ok(Self { min, max, cells })
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        (self.max - self.min) / self.cells as f64
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.max - self.min
    }

    /// Left edge of cell `i`.
    #[inline]
    pub fn left_edge(&self, i: usize) -> f64 {
        self.min + i as f64 * self.dx()
    }

    #[inline]
    pub fn barycenter(&self, i: usize) -> f64 {
        self.min + (i as f64 + 0.5) * self.dx()
    }

    /// Affine reference map `x = x_i - dx/2 + xi dx`.
    #[inline]
    pub fn to_physical(&self, i: usize, xi: f64) -> f64 {
        self.barycenter(i) - 0.5 * self.dx() + xi * self.dx()
    }

    /// Containing cell and reference coordinate of `x`. The right end of the
    /// domain belongs to the last cell.
    pub fn locate(&self, x: f64) -> Option<(usize, f64)> {
        if !(x >= self.min && x <= self.max) {
            return None;
        }
        let s = (x - self.min) / self.dx();
        let i = (s.floor() as usize).min(self.cells - 1);
        Some((i, s - i as f64))
    }
}

/// Tensor-product Cartesian mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh2D {
    pub x: Mesh1D,
    pub y: Mesh1D,
}

impl Mesh2D {
    pub fn new(x: Mesh1D, y: Mesh1D) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn cells(&self) -> usize {
        self.x.cells * self.y.cells
    }

    /// Linear cell index, `x` fastest.
    #[inline]
    pub fn cell_index(&self, ix: usize, iy: usize) -> usize {
        iy * self.x.cells + ix
    }

    pub fn locate(&self, x: f64, y: f64) -> Option<((usize, usize), (f64, f64))> {
        let (ix, xi) = self.x.locate(x)?;
        let (iy, eta) = self.y.locate(y)?;
        Some(((ix, iy), (xi, eta)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_and_barycenters() {
        let m = Mesh1D::new(-50.0, 50.0, 100).unwrap();
        assert_eq!(m.dx(), 1.0);
        assert_eq!(m.barycenter(0), -49.5);
        assert_eq!(m.to_physical(3, 0.0), -47.0);
        assert_eq!(m.locate(50.0), Some((99, 1.0)));
        assert_eq!(m.locate(-50.0), Some((0, 0.0)));
        assert!(m.locate(50.1).is_none());
        assert!(Mesh1D::new(1.0, 0.0, 3).is_err());
        assert!(Mesh1D::new(0.0, 1.0, 0).is_err());
    }
}
