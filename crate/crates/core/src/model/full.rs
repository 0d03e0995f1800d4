use super::{Axis, Equations, ModelVariant, PhysParams, PrimitiveState};

/// Full hyperbolic system in 1D, `U = (h, hu, hw, h sigma, h p, h p_b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullSgn1D {
    pub params: PhysParams,
}

impl FullSgn1D {
    pub fn new(params: PhysParams) -> Self {
        Self { params }
    }
}

impl Equations<6> for FullSgn1D {
    const DIM: usize = 1;
    const NAMES: [&'static str; 6] = ["h", "hu", "hw", "hsigma", "hp", "hpb"];

    fn params(&self) -> PhysParams {
        self.params
    }

    fn variant(&self) -> ModelVariant {
        ModelVariant::FullSgn
    }

    #[inline]
    fn flux(&self, q: &[f64; 6], axis: Axis) -> [f64; 6] {
        if axis == Axis::Y {
            return [0.0; 6];
        }
        let c2 = self.params.c2();
        let hu = q[1];
        let u = hu / q[0];
        [hu, hu * u + q[4], u * q[2], u * q[3], u * q[4] + hu * c2, u * q[5]]
    }

    #[inline]
    fn ncp(&self, q: &[f64; 6], dq: &[f64; 6], dzb: f64, axis: Axis) -> [f64; 6] {
        if axis == Axis::Y {
            return [0.0; 6];
        }
        let PhysParams { g, .. } = self.params;
        let c2 = self.params.c2();
        let h = q[0];
        let u = q[1] / h;
        let pb = q[5] / h;
        let dh = dq[0];
        [0.0, g * h * dh + (g * h + pb) * dzb, 0.0, 0.0, -c2 * u * dh, -6.0 * c2 * u * dzb]
    }

    #[inline]
    fn source(&self, q: &[f64; 6]) -> [f64; 6] {
        let c2 = self.params.c2();
        let inv_h = 1.0 / q[0];
        let w = q[2] * inv_h;
        let sigma = q[3] * inv_h;
        let p = q[4] * inv_h;
        let pb = q[5] * inv_h;
        [0.0, 0.0, pb, -6.0 * pb + 12.0 * p, -c2 * sigma, -6.0 * c2 * (w - 0.5 * sigma)]
    }

    #[inline]
    fn velocity(&self, q: &[f64; 6], axis: Axis) -> f64 {
        match axis {
            Axis::X => q[1] / q[0],
            Axis::Y => 0.0,
        }
    }

    #[inline]
    fn source_frequency(&self, q: &[f64; 6]) -> f64 {
        // the source couples (w, sigma, p, p_b) with characteristic polynomial
        // lambda^4 + 36 (c/h)^2 lambda^2 + 72 (c/h)^4
        (18.0 + 6.0 * 7f64.sqrt()).sqrt() * self.params.c / q[0]
    }

    #[inline]
    fn radicand(&self, q: &[f64; 6]) -> f64 {
        q[4] / q[0] + self.params.g * q[0] + self.params.c2()
    }

    fn energy(&self, q: &[f64; 6], zb: f64) -> f64 {
        let p = self.primitive(q);
        let c2 = self.params.c2();
        0.5 * p.h
            * (p.u * p.u
                + p.w * p.w
                + self.params.g * (p.h + 2.0 * zb)
                + p.sigma * p.sigma / 12.0
                + p.p * p.p / c2
                + p.pb * p.pb / (6.0 * c2))
    }

    fn primitive(&self, q: &[f64; 6]) -> PrimitiveState {
        let h = q[0];
        PrimitiveState { h, u: q[1] / h, v: 0.0, w: q[2] / h, sigma: q[3] / h, p: q[4] / h, pb: q[5] / h }
    }

    fn from_primitive(&self, p: &PrimitiveState) -> [f64; 6] {
        let h = p.h;
        [h, h * p.u, h * p.w, h * p.sigma, h * p.p, h * p.pb]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{self, Normal, StateGradient};

    fn eq() -> FullSgn1D {
        FullSgn1D::new(PhysParams::new(9.81, 20.0).unwrap())
    }

    #[test]
    fn flux_examples() {
        let f = eq().flux(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0], Axis::X);
        assert_eq!(f, [0.0; 6]);
        let f = eq().flux(&[1.0, 1.0, 0.0, 0.0, 0.0, 0.0], Axis::X);
        assert_eq!(f, [1.0, 1.0, 0.0, 0.0, 400.0, 0.0]);
    }

    #[test]
    fn ncp_examples() {
        let e = eq();
        let q = [1.0, 0.3, 0.2, 0.1, 0.4, 0.5];
        assert_eq!(e.ncp(&q, &[0.0, 1.0, 1.0, 1.0, 1.0, 1.0], 0.0, Axis::X), [0.0; 6]);

        let q = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        let b = e.ncp(&q, &[0.1, 0.0, 0.0, 0.0, 0.0, 0.0], 0.2, Axis::X);
        assert!((b[1] - 2.943).abs() < 1e-14);
        assert_eq!([b[0], b[2], b[3], b[4], b[5]], [0.0; 5]);

        let q = [1.0, 2.0, 0.0, 0.0, 0.0, 0.0];
        let b = e.ncp(&q, &[0.5, 0.0, 0.0, 0.0, 0.0, 0.0], 0.0, Axis::X);
        assert!((b[4] + 400.0).abs() < 1e-12);
    }

    #[test]
    fn source_examples() {
        let e = eq();
        assert_eq!(e.source(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]), [0.0; 6]);
        // p_b = 1, p = 0.5
        assert_eq!(e.source(&[1.0, 0.0, 0.0, 0.0, 0.5, 1.0]), [0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        // sigma = 0.1, w = 0.05
        let s = e.source(&[1.0, 0.0, 0.05, 0.1, 0.0, 0.0]);
        assert!((s[4] + 40.0).abs() < 1e-12);
        assert!(s[5].abs() < 1e-12);
        assert_eq!([s[0], s[1], s[2], s[3]], [0.0; 4]);
    }

    #[test]
    fn energy_examples() {
        let e = eq();
        let rest = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        assert!((e.energy(&rest, 0.0) - 4.905).abs() < 1e-14);
        assert!(e.energy(&[1e-12, 0.0, 0.0, 0.0, 0.0, 0.0], 0.0) < 1e-10);

        let q = [1.3, 0.2, 0.1, -0.05, 0.0, 0.0];
        let doubled = FullSgn1D::new(PhysParams::new(9.81, 40.0).unwrap());
        assert_eq!(e.energy(&q, 0.1), doubled.energy(&q, 0.1));

        let moving = [1.0, 1.0, 0.0, 0.0, 0.0, 0.0];
        assert!((e.energy_flux(&moving, 0.0, Axis::X) - 10.31).abs() < 1e-13);
        assert_eq!(e.energy_flux(&rest, 0.3, Axis::X), 0.0);
        let back = [1.0, -1.0, 0.0, 0.0, 0.0, 0.0];
        assert_eq!(e.energy_flux(&back, 0.0, Axis::X), -e.energy_flux(&moving, 0.0, Axis::X));
    }

    #[test]
    fn signal_speed_examples() {
        let e = eq();
        let still = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        let s = model::max_signal_speed(&e, &still, &still, Normal::PLUS_X).unwrap();
        assert!((s - 409.81f64.sqrt()).abs() < 1e-12);
        assert!((s - 20.2438).abs() < 1e-4);

        let left = [1.0, 1.0, 0.0, 0.0, 0.0, 0.0];
        let right = [1.0, -3.0, 0.0, 0.0, 0.0, 0.0];
        let s = model::max_signal_speed(&e, &left, &right, Normal::PLUS_X).unwrap();
        assert!((s - (3.0 + 409.81f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn zero_velocity_zero_pressure_is_stationary() {
        let e = eq();
        let q = [1.7, 0.0, 0.0, 0.0, 0.0, 0.0];
        let grad = StateGradient::zero();
        assert_eq!(model::flux(&e, &q, Axis::X).unwrap(), [0.0; 6]);
        assert_eq!(model::noncons_product(&e, &q, &grad).unwrap(), [0.0; 6]);
        assert_eq!(model::source(&e, &q).unwrap(), [0.0; 6]);
    }
}
