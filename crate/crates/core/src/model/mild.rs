use super::{Axis, Equations, ModelVariant, PhysParams, PrimitiveState};

/// Mild-bottom hyperbolic system in 1D, `U = (h, hu, hw, h p)`.
///
/// The pressure equation is written with the same flux `hu (p + c^2)` as the
/// full model; the remainder of `c^2 h u_x` becomes the non-conservative
/// term `-c^2 u h_x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MildBottom1D {
    pub params: PhysParams,
}

impl MildBottom1D {
    pub fn new(params: PhysParams) -> Self {
        Self { params }
    }
}

impl Equations<4> for MildBottom1D {
    const DIM: usize = 1;
    const NAMES: [&'static str; 4] = ["h", "hu", "hw", "hp"];

    fn params(&self) -> PhysParams {
        self.params
    }

    fn variant(&self) -> ModelVariant {
        ModelVariant::MildBottom
    }

    #[inline]
    fn flux(&self, q: &[f64; 4], axis: Axis) -> [f64; 4] {
        if axis == Axis::Y {
            return [0.0; 4];
        }
        let hu = q[1];
        let u = hu / q[0];
        [hu, hu * u + q[3], u * q[2], u * q[3] + hu * self.params.c2()]
    }

    #[inline]
    fn ncp(&self, q: &[f64; 4], dq: &[f64; 4], dzb: f64, axis: Axis) -> [f64; 4] {
        if axis == Axis::Y {
            return [0.0; 4];
        }
        let g = self.params.g;
        let c2 = self.params.c2();
        let h = q[0];
        let u = q[1] / h;
        let p = q[3] / h;
        let dh = dq[0];
        [0.0, g * h * dh + (g * h + 1.5 * p) * dzb, 0.0, -c2 * u * dh - 2.0 * c2 * u * dzb]
    }

    #[inline]
    fn source(&self, q: &[f64; 4]) -> [f64; 4] {
        let inv_h = 1.0 / q[0];
        [0.0, 0.0, 1.5 * q[3] * inv_h, -2.0 * self.params.c2() * q[2] * inv_h]
    }

    #[inline]
    fn velocity(&self, q: &[f64; 4], axis: Axis) -> f64 {
        match axis {
            Axis::X => q[1] / q[0],
            Axis::Y => 0.0,
        }
    }

    #[inline]
    fn source_frequency(&self, q: &[f64; 4]) -> f64 {
        3f64.sqrt() * self.params.c / q[0]
    }

    #[inline]
    fn radicand(&self, q: &[f64; 4]) -> f64 {
        q[3] / q[0] + self.params.g * q[0] + self.params.c2()
    }

    fn energy(&self, q: &[f64; 4], zb: f64) -> f64 {
        let p = self.primitive(q);
        0.5 * p.h * (p.u * p.u + p.w * p.w + self.params.g * (p.h + 2.0 * zb) + p.p * p.p / self.params.c2())
    }

    fn primitive(&self, q: &[f64; 4]) -> PrimitiveState {
        let h = q[0];
        PrimitiveState { h, u: q[1] / h, w: q[2] / h, p: q[3] / h, ..PrimitiveState::default() }
    }

    fn from_primitive(&self, p: &PrimitiveState) -> [f64; 4] {
        [p.h, p.h * p.u, p.h * p.w, p.h * p.p]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flux_example() {
        let e = MildBottom1D::new(PhysParams::new(9.81, 20.0).unwrap());
        assert_eq!(e.flux(&[2.0, 2.0, 0.0, 4.0], Axis::X), [2.0, 6.0, 0.0, 804.0]);
    }

    #[test]
    fn source_uses_three_halves_pressure() {
        let e = MildBottom1D::new(PhysParams::new(9.81, 20.0).unwrap());
        let s = e.source(&[2.0, 0.0, 0.2, 1.0]);
        assert_eq!(s, [0.0, 0.0, 0.75, -2.0 * 400.0 * 0.1]);
    }

    #[test]
    fn pressure_equation_recovers_constraint_form() {
        // d/dt(hp) = -[d/dx(hu(p + c^2)) - c^2 u h_x - 2 c^2 u zb_x] - 2 c^2 w
        //           = -d/dx(hup) - c^2 (h u_x + 2 (w - u zb_x))
        let e = MildBottom1D::new(PhysParams::new(9.81, 3.0).unwrap());
        let (h, u, w, p) = (1.2_f64, 0.4_f64, 0.05_f64, 0.3_f64);
        let (hx, ux, px, zbx) = (0.1_f64, -0.2_f64, 0.02_f64, 0.3_f64);
        let q = [h, h * u, h * w, h * p];
        let dq = [hx, hx * u + h * ux, 0.0, hx * p + h * px];
        let div_flux = (hx * u + h * ux) * (p + 9.0) + h * u * px;
        let lhs = -(div_flux + e.ncp(&q, &dq, zbx, Axis::X)[3]) + e.source(&q)[3];
        let hup_x = hx * u * p + h * ux * p + h * u * px;
        let rhs = -hup_x - 9.0 * (h * ux + 2.0 * (w - u * zbx));
        assert!((lhs - rhs).abs() < 1e-12, "{lhs} vs {rhs}");
    }
}
