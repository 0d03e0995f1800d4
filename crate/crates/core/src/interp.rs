//! Monotone piecewise-cubic Hermite interpolation (PCHIP).

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidTable("abscissae and values differ in length".into()));
        }
        if x.len() < 2 {
            return Err(Error::InvalidTable("need at least two samples".into()));
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::InvalidTable("non-finite sample".into()));
        }
        if let Some(k) = x.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidTable(format!(
                "abscissae must increase strictly ({} then {})",
                x[k],
                x[k + 1]
            )));
        }
        let d = pchip_slopes(&x, &y);
        Ok(Self { x, y, d })
    }

    pub fn min(&self) -> f64 {
        self.x[0]
    }

    pub fn max(&self) -> f64 {
        self.x[self.x.len() - 1]
    }

    fn segment(&self, x: f64) -> usize {
        match self.x.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(k) => k.min(self.x.len() - 2),
            Err(k) => k.saturating_sub(1).min(self.x.len() - 2),
        }
    }

    fn check(&self, x: f64) -> Result<()> {
        if x >= self.min() && x <= self.max() {
            Ok(())
        } else {
            Err(Error::Extrapolation { x, min: self.min(), max: self.max() })
        }
    }

    /// Value at `x`; errors outside the sample range.
    pub fn eval(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(self.eval_unchecked(x))
    }

    /// Derivative at `x`; errors outside the sample range.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        let k = self.segment(x);
        let h = self.x[k + 1] - self.x[k];
        let t = (x - self.x[k]) / h;
        let (y0, y1, d0, d1) = (self.y[k], self.y[k + 1], self.d[k], self.d[k + 1]);
        let dh00 = 6.0 * t * t - 6.0 * t;
        let dh10 = 3.0 * t * t - 4.0 * t + 1.0;
        let dh01 = -dh00;
        let dh11 = 3.0 * t * t - 2.0 * t;
        Ok((dh00 * y0 + dh01 * y1) / h + dh10 * d0 + dh11 * d1)
    }

    /// Value at `x` clamped into the sample range.
    pub fn eval_clamped(&self, x: f64) -> f64 {
        self.eval_unchecked(x.clamp(self.min(), self.max()))
    }

    fn eval_unchecked(&self, x: f64) -> f64 {
        let k = self.segment(x);
        let h = self.x[k + 1] - self.x[k];
        let t = (x - self.x[k]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.y[k] + h10 * h * self.d[k] + h01 * self.y[k + 1] + h11 * h * self.d[k + 1]
    }
}

fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let m: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    if n == 2 {
        return vec![m[0], m[0]];
    }
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        if m[k - 1] * m[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / m[k - 1] + w2 / m[k]);
        }
    }
    d[0] = end_slope(h[0], h[1], m[0], m[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], m[n - 2], m[n - 3]);
    d
}

fn end_slope(h0: f64, h1: f64, m0: f64, m1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if d.signum() != m0.signum() || m0 == 0.0 {
        0.0
    } else if m0.signum() != m1.signum() && d.abs() > 3.0 * m0.abs() {
        3.0 * m0
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reproduces_linear_data() {
        let p = MonotoneCubic::new(vec![0.0, 1.0, 2.5, 4.0], vec![1.0, 3.0, 6.0, 9.0]).unwrap();
        for &x in &[0.0, 0.3, 1.0, 2.0, 3.9, 4.0] {
            assert!((p.eval(x).unwrap() - (1.0 + 2.0 * x)).abs() < 1e-13);
            assert!((p.derivative(x).unwrap() - 2.0).abs() < 1e-12);
        }
        assert!(matches!(p.eval(4.1), Err(Error::Extrapolation { .. })));
        assert_eq!(p.eval_clamped(10.0), 9.0);
    }

    #[test]
    fn rejects_non_increasing_abscissae() {
        assert!(MonotoneCubic::new(vec![0.0, 0.0, 1.0], vec![0.0, 1.0, 2.0]).is_err());
        assert!(MonotoneCubic::new(vec![0.0], vec![0.0]).is_err());
    }

    #[test]
    fn no_overshoot_at_step() {
        let p = MonotoneCubic::new(vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 0.0, 1.0, 1.0]).unwrap();
        for k in 0..=300 {
            let v = p.eval(k as f64 / 100.0).unwrap();
            assert!((-1e-15..=1.0 + 1e-15).contains(&v));
        }
    }

    proptest! {
        #[test]
        fn monotone_data_gives_monotone_interpolant(
            steps in proptest::collection::vec((0.01f64..2.0, 0.0f64..3.0), 2..12)
        ) {
            let mut x = vec![0.0];
            let mut y = vec![0.0];
            for (dx, dy) in &steps {
                x.push(x.last().unwrap() + dx);
                y.push(y.last().unwrap() + dy);
            }
            let p = MonotoneCubic::new(x.clone(), y.clone()).unwrap();
            let mut prev = f64::NEG_INFINITY;
            let top = *x.last().unwrap();
            for k in 0..=400 {
                let v = p.eval((top * k as f64 / 400.0).min(top)).unwrap();
                prop_assert!(v >= prev - 1e-12);
                prev = v;
            }
            for (xi, yi) in x.iter().zip(&y) {
                prop_assert!((p.eval(*xi).unwrap() - yi).abs() < 1e-12);
            }
        }
    }
}
