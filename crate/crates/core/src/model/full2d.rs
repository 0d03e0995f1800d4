use super::{Axis, Equations, ModelVariant, PhysParams, PrimitiveState};

/// Full hyperbolic system in 2D, `U = (h, hu, hv, hw, h sigma, h p, h p_b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullSgn2D {
    pub params: PhysParams,
}

impl FullSgn2D {
    pub fn new(params: PhysParams) -> Self {
        Self { params }
    }
}

impl Equations<7> for FullSgn2D {
    const DIM: usize = 2;
    const NAMES: [&'static str; 7] = ["h", "hu", "hv", "hw", "hsigma", "hp", "hpb"];

    fn params(&self) -> PhysParams {
        self.params
    }

    fn variant(&self) -> ModelVariant {
        ModelVariant::FullSgn
    }

    #[inline]
    fn flux(&self, q: &[f64; 7], axis: Axis) -> [f64; 7] {
        let c2 = self.params.c2();
        let inv_h = 1.0 / q[0];
        match axis {
            Axis::X => {
                let hu = q[1];
                let u = hu * inv_h;
                [hu, hu * u + q[5], u * q[2], u * q[3], u * q[4], u * q[5] + hu * c2, u * q[6]]
            }
            Axis::Y => {
                let hv = q[2];
                let v = hv * inv_h;
                [hv, v * q[1], hv * v + q[5], v * q[3], v * q[4], v * q[5] + hv * c2, v * q[6]]
            }
        }
    }

    #[inline]
    fn ncp(&self, q: &[f64; 7], dq: &[f64; 7], dzb: f64, axis: Axis) -> [f64; 7] {
        let g = self.params.g;
        let c2 = self.params.c2();
        let h = q[0];
        let pb = q[6] / h;
        let dh = dq[0];
        let slope = g * h * dh + (g * h + pb) * dzb;
        match axis {
            Axis::X => {
                let u = q[1] / h;
                [0.0, slope, 0.0, 0.0, 0.0, -c2 * u * dh, -6.0 * c2 * u * dzb]
            }
            Axis::Y => {
                let v = q[2] / h;
                [0.0, 0.0, slope, 0.0, 0.0, -c2 * v * dh, -6.0 * c2 * v * dzb]
            }
        }
    }

    #[inline]
    fn source(&self, q: &[f64; 7]) -> [f64; 7] {
        let c2 = self.params.c2();
        let inv_h = 1.0 / q[0];
        let w = q[3] * inv_h;
        let sigma = q[4] * inv_h;
        let p = q[5] * inv_h;
        let pb = q[6] * inv_h;
        [0.0, 0.0, 0.0, pb, -6.0 * pb + 12.0 * p, -c2 * sigma, -6.0 * c2 * (w - 0.5 * sigma)]
    }

    #[inline]
    fn velocity(&self, q: &[f64; 7], axis: Axis) -> f64 {
        q[1 + axis.index()] / q[0]
    }

    #[inline]
    fn source_frequency(&self, q: &[f64; 7]) -> f64 {
        // the source couples (w, sigma, p, p_b) with characteristic polynomial
        // lambda^4 + 36 (c/h)^2 lambda^2 + 72 (c/h)^4
        (18.0 + 6.0 * 7f64.sqrt()).sqrt() * self.params.c / q[0]
    }

    #[inline]
    fn radicand(&self, q: &[f64; 7]) -> f64 {
        q[5] / q[0] + self.params.g * q[0] + self.params.c2()
    }

    fn energy(&self, q: &[f64; 7], zb: f64) -> f64 {
        let p = self.primitive(q);
        let c2 = self.params.c2();
        0.5 * p.h
            * (p.u * p.u
                + p.v * p.v
                + p.w * p.w
                + self.params.g * (p.h + 2.0 * zb)
                + p.sigma * p.sigma / 12.0
                + p.p * p.p / c2
                + p.pb * p.pb / (6.0 * c2))
    }

    fn primitive(&self, q: &[f64; 7]) -> PrimitiveState {
        let h = q[0];
        PrimitiveState { h, u: q[1] / h, v: q[2] / h, w: q[3] / h, sigma: q[4] / h, p: q[5] / h, pb: q[6] / h }
    }

    fn from_primitive(&self, p: &PrimitiveState) -> [f64; 7] {
        let h = p.h;
        [h, h * p.u, h * p.v, h * p.w, h * p.sigma, h * p.p, h * p.pb]
    }
}
