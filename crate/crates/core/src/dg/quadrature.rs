//! Gauss-Legendre and Gauss-Lobatto rules on the unit interval.

use std::f64::consts::PI;

/// Legendre polynomial `P_n(x)` and its derivative.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    // P_n' from the three-term relation; valid away from |x| = 1.
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// `count`-point Gauss-Legendre rule mapped to `[0, 1]`. Weights sum to 1.
pub fn gauss_legendre(count: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(count > 0, "a quadrature rule needs at least one point");
    let n = count;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x is the i-th largest root on [-1, 1]
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.5;
    }
    (nodes, weights)
}

/// `count`-point Gauss-Lobatto rule mapped to `[0, 1]`, endpoints included.
pub fn gauss_lobatto(count: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(count >= 2, "a Lobatto rule needs at least two points");
    let n = count - 1;
    let nf = n as f64;
    let mut nodes = vec![0.0; count];
    let mut weights = vec![0.0; count];
    nodes[count - 1] = 1.0;
    let w_end = 1.0 / (nf * (nf + 1.0));
    weights[0] = w_end;
    weights[count - 1] = w_end;
    // Interior nodes are the roots of P_n'. Newton with P_n'' from the ODE
    // (1 - x^2) P_n'' = 2 x P_n' - n (n + 1) P_n.
    for i in 1..n {
        let mut x = -(PI * i as f64 / nf).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let ddp = (2.0 * x * dp - nf * (nf + 1.0) * p) / (1.0 - x * x);
            let dx = dp / ddp;
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        let (p, _) = legendre(n, x);
        nodes[i] = 0.5 * (1.0 + x);
        weights[i] = 1.0 / (nf * (nf + 1.0) * p * p);
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_rule() {
        let (x, w) = gauss_legendre(2);
        assert!((x[0] - 0.211_324_865_405_187_1).abs() < 1e-15);
        assert!((x[1] - 0.788_675_134_594_812_9).abs() < 1e-15);
        assert!(w.iter().all(|v| (v - 0.5).abs() < 1e-15));
        let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
        assert!((q - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn midpoint_rule() {
        assert_eq!(gauss_legendre(1), (vec![0.5], vec![1.0]));
    }

    #[test]
    fn gauss_exactness() {
        for n in 1..=12 {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            for d in 0..=(2 * n - 1) {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(d as i32)).sum();
                assert!((q - 1.0 / (d as f64 + 1.0)).abs() < 1e-13, "n={n} degree {d}");
            }
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn lobatto_exactness() {
        for count in 2..=11 {
            let (x, w) = gauss_lobatto(count);
            assert_eq!((x[0], x[count - 1]), (0.0, 1.0));
            for d in 0..=(2 * count - 3) {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(d as i32)).sum();
                assert!((q - 1.0 / (d as f64 + 1.0)).abs() < 1e-13, "count={count} degree {d}");
            }
        }
    }
}
