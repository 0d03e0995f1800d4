//! Traveling-wave initial data exact for the hyperbolic model.
//!
//! With `U(x, t) = U(zeta)`, `zeta = x - V t`, the system becomes the ODE
//! `(A(U) - V I) U' = S(U)`. Starting next to the rest state with a tiny
//! pressure seed, the trajectory follows the unstable manifold, reaches a
//! crest and returns. The orbit is reversible (`h, hu, hp, hpb` even and
//! `hw, h sigma` odd about the crest), so only the rising branch is integrated
//! and the falling branch is its mirror image.

use std::cell::RefCell;
use std::rc::Rc;
use std::path::Path;

use nalgebra::{Matrix6, Vector6};
use ode_solvers::{Dop853, System};

use crate::dg::{l2_project, ElementSolution, Mesh1D, NodalBasis};
use crate::error::{Error, Result};
use crate::model::{eigenvalues, quasilinear_matrix, Equations, FullSgn1D, Normal, PhysParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonParams {
    pub h0: f64,
    /// Target amplitude; only used to pick the speed `V = sqrt(g (A + H0))`.
    pub amplitude: f64,
    pub speed: f64,
    pub g: f64,
    pub c: f64,
    pub epsilon: f64,
    pub zeta_span: (f64, f64),
    pub x0: f64,
    pub rtol: f64,
    /// Spacing of the stored dense output.
    pub output_step: f64,
}

impl SolitonParams {
    /// Speed from the amplitude, `V = sqrt(g (A + H0))`, with a `1e-8` seed.
    pub fn new(h0: f64, amplitude: f64, g: f64, c: f64) -> Self {
        Self {
            h0,
            amplitude,
            speed: (g * (amplitude + h0)).sqrt(),
            g,
            c,
            epsilon: 1e-8,
            zeta_span: (0.0, 100.0),
            x0: 0.0,
            rtol: 1e-12,
            output_step: 5e-3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        PhysParams::new(self.g, self.c)?;
        if !(self.h0 > 0.0 && self.h0.is_finite()) {
            return bad(format!("still depth must be positive, got {}", self.h0));
        }
        if !(self.speed * self.speed > self.g * self.h0) {
            return bad(format!("similarity speed {} is not supercritical (sqrt(g H0) = {})", self.speed, (self.g * self.h0).sqrt()));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1e-3) {
            return bad(format!("pressure seed must be positive and tiny, got {}", self.epsilon));
        }
        if !(self.zeta_span.1 > self.zeta_span.0) {
            return bad("empty integration span".into());
        }
        if !(self.rtol > 0.0 && self.output_step > 0.0) {
            return bad("tolerance and output step must be positive".into());
        }
        Ok(())
    }

    fn equations(&self) -> Result<FullSgn1D> {
        Ok(FullSgn1D::new(PhysParams::new(self.g, self.c)?))
    }

    pub fn rest_state(&self) -> [f64; 6] {
        [self.h0, 0.0, 0.0, 0.0, 0.0, 0.0]
    }
}

/// `U' = (A(U) - V I)^{-1} S(U)` by LU with partial pivoting.
pub fn ode_rhs(u: &[f64; 6], params: &SolitonParams) -> Result<[f64; 6]> {
    let eq = params.equations()?;
    crate::model::validate_depth(u[0])?;
    rhs(&eq, params.speed, u)
}

fn rhs(eq: &FullSgn1D, speed: f64, u: &[f64; 6]) -> Result<[f64; 6]> {
    let a = quasilinear_matrix(eq, u);
    let mut m = Matrix6::from_fn(|i, j| a[i][j]);
    for i in 0..6 {
        m[(i, i)] -= speed;
    }
    let s = Vector6::from_column_slice(&eq.source(u));
    let lu = m.lu();
    match lu.solve(&s) {
        Some(x) if x.iter().all(|v| v.is_finite()) => Ok([x[0], x[1], x[2], x[3], x[4], x[5]]),
        _ => {
            let lam = eigenvalues(eq, u, Normal::PLUS_X)?;
            let (eigenvalue, gap) = lam
                .iter()
                .map(|l| (*l, (l - speed).abs()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap_or((f64::NAN, f64::NAN));
            Err(Error::Resonance { eigenvalue, gap })
        }
    }
}

struct Similarity {
    eq: FullSgn1D,
    speed: f64,
    h0: f64,
    crest_seen: Option<f64>,
    error: Rc<RefCell<Option<Error>>>,
}

impl System<f64, Vector6<f64>> for Similarity {
    fn system(&self, _x: f64, y: &Vector6<f64>, dy: &mut Vector6<f64>) {
        let u = [y[0], y[1], y[2], y[3], y[4], y[5]];
        match crate::model::validate_depth(u[0]).and_then(|_| rhs(&self.eq, self.speed, &u)) {
            Ok(d) => dy.copy_from_slice(&d),
            Err(e) => {
                dy.fill(0.0);
                self.error.borrow_mut().get_or_insert(e);
            }
        }
    }

    fn solout(&mut self, x: f64, y: &Vector6<f64>, dy: &Vector6<f64>) -> bool {
        if self.error.borrow().is_some() {
            return true;
        }
        if self.crest_seen.is_none() && dy[0] < 0.0 && y[0] - self.h0 > 1e-6 {
            self.crest_seen = Some(x);
        }
        // keep a short stretch past the crest for the interpolation stencil
        matches!(self.crest_seen, Some(xc) if x > xc + 0.5)
    }
}

const STENCIL: usize = 9;

/// Dense representation of `U(zeta)` with `zeta` measured from the crest.
#[derive(Debug, Clone, PartialEq)]
pub struct SolitonProfile {
    params: SolitonParams,
    start: f64,
    step: f64,
    states: Vec<[f64; 6]>,
    /// Crest position in integration coordinates; `None` if no wave developed.
    crest: Option<f64>,
    amplitude: f64,
}

/// Integrates the similarity ODE from `(H0, 0, 0, 0, epsilon, 0)`.
pub fn integrate_profile(params: &SolitonParams) -> Result<SolitonProfile> {
    params.validate()?;
    let eq = params.equations()?;
    let (z0, z1) = params.zeta_span;
    let mut y0 = params.rest_state();
    y0[4] = params.epsilon;
    let error = Rc::new(RefCell::new(None));
    let system = Similarity { eq, speed: params.speed, h0: params.h0, crest_seen: None, error: Rc::clone(&error) };
    let mut solver = Dop853::new(system, z0, z1, params.output_step, Vector6::from_column_slice(&y0), params.rtol, 1e-14);
    let integration = solver.integrate();
    let states: Vec<[f64; 6]> = solver.y_out().iter().map(|y| [y[0], y[1], y[2], y[3], y[4], y[5]]).collect();
    if let Some(e) = error.borrow_mut().take() {
        return Err(e);
    }
    if let Err(e) = integration {
        return Err(Error::Soliton(format!("integrator failed: {e}")));
    }
    if states.len() < STENCIL {
        return Err(Error::Soliton("integration span too short for dense output".into()));
    }
    for s in &states {
        if s.iter().any(|v| !v.is_finite()) || s[0] <= 0.0 {
            return Err(Error::Soliton("trajectory blew up".into()));
        }
        rhs(&eq, params.speed, s)?;
    }
    let mut profile =
        SolitonProfile { params: *params, start: z0, step: params.output_step, states, crest: None, amplitude: 0.0 };
    profile.crest = profile.locate_crest(&eq)?;
    match profile.crest {
        Some(zc) => profile.amplitude = profile.interp(zc)[0] - params.h0,
        None => {
            let last = profile.states.last().unwrap();
            let dev = last.iter().zip(params.rest_state()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            if dev > 1e-6 {
                return Err(Error::Soliton(format!(
                    "no crest within zeta in [{z0}, {z1}] and the trajectory did not stay at rest (deviation {dev:e})"
                )));
            }
            profile.amplitude = profile.states.iter().map(|s| s[0] - params.h0).fold(0.0, f64::max);
        }
    }
    Ok(profile)
}

impl SolitonProfile {
    pub fn params(&self) -> &SolitonParams {
        &self.params
    }

    /// Computed amplitude `max(h) - H0`.
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn speed(&self) -> f64 {
        self.params.speed
    }

    /// Distance from the crest to either end of the symmetric profile.
    pub fn half_width(&self) -> f64 {
        match self.crest {
            Some(zc) => zc - self.start,
            None => 0.0,
        }
    }

    pub fn has_crest(&self) -> bool {
        self.crest.is_some()
    }

    fn end(&self) -> f64 {
        self.start + self.step * (self.states.len() - 1) as f64
    }

    /// Degree-8 Lagrange interpolation of the stored trajectory at
    /// integration coordinate `s`.
    fn interp(&self, s: f64) -> [f64; 6] {
        let len = self.states.len();
        let t = (s - self.start) / self.step;
        let k = (t.floor().max(0.0) as usize).min(len - 1);
        let first = k.saturating_sub(STENCIL / 2 - 1).min(len - STENCIL);
        let mut out = [0.0; 6];
        for a in 0..STENCIL {
            let ta = (first + a) as f64;
            if (t - ta).abs() < 1e-14 {
                return self.states[first + a];
            }
        }
        for a in 0..STENCIL {
            let ta = (first + a) as f64;
            let mut w = 1.0;
            for b in 0..STENCIL {
                if b != a {
                    let tb = (first + b) as f64;
                    w *= (t - tb) / (ta - tb);
                }
            }
            for (o, v) in out.iter_mut().zip(&self.states[first + a]) {
                *o += w * v;
            }
        }
        out
    }

    fn locate_crest(&self, eq: &FullSgn1D) -> Result<Option<f64>> {
        let dh = |s: f64| rhs(eq, self.params.speed, &self.interp(s)).map(|d| d[0]);
        let h0 = self.params.h0;
        for k in 0..self.states.len() - 1 {
            let (a, b) = (&self.states[k], &self.states[k + 1]);
            if a[0] - h0 < 1e-6 {
                continue;
            }
            let (za, zb) = (self.start + k as f64 * self.step, self.start + (k + 1) as f64 * self.step);
            let (fa, fb) = (dh(za)?, dh(zb)?);
            if fa > 0.0 && fb <= 0.0 && b[0] > h0 {
                let (mut lo, mut hi) = (za, zb);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if dh(mid)? > 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return Ok(Some(0.5 * (lo + hi)));
            }
        }
        Ok(None)
    }

    /// `U` at distance `zeta` from the crest; the far-field rest state outside
    /// the stored span.
    pub fn eval(&self, zeta: f64) -> [f64; 6] {
        match self.crest {
            Some(zc) => {
                if zeta <= 0.0 {
                    let s = zc + zeta;
                    if s < self.start {
                        self.params.rest_state()
                    } else {
                        self.interp(s)
                    }
                } else {
                    let m = self.eval(-zeta);
                    [m[0], m[1], -m[2], -m[3], m[4], m[5]]
                }
            }
            None => {
                let s = zeta + self.start;
                if s < self.start || s > self.end() {
                    self.params.rest_state()
                } else {
                    self.interp(s)
                }
            }
        }
    }

    /// Profile with crest at `center` on a periodic domain of length `period`.
    pub fn eval_periodic(&self, x: f64, center: f64, period: f64) -> [f64; 6] {
        let d = (x - center).rem_euclid(period);
        let d = if d >= 0.5 * period { d - period } else { d };
        self.eval(d)
    }

    /// Rows `(zeta, h, hu, hw, h sigma, hp, hpb)` across the profile.
    pub fn table(&self) -> Vec<[f64; 7]> {
        let hw = self.half_width();
        let n = (2.0 * hw / self.step).round() as usize;
        (0..=n)
            .map(|k| {
                let z = -hw + k as f64 * self.step;
                let u = self.eval(z);
                [z, u[0], u[1], u[2], u[3], u[4], u[5]]
            })
            .collect()
    }

    pub fn export_csv(&self, path: &Path) -> Result<()> {
        let header = ["zeta", "h", "hu", "hw", "hsigma", "hp", "hpb"];
        crate::io::write_table(path, &header, self.table().iter().map(|r| r.to_vec()))
    }
}

/// Nodal sampling of `U(x - x0)`.
pub fn sample_initial_condition(profile: &SolitonProfile, mesh: &Mesh1D, basis: &NodalBasis, x0: f64) -> ElementSolution<6> {
    l2_project(mesh, basis, |x| profile.eval(x - x0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn benchmark() -> SolitonParams {
        SolitonParams::new(1.0, 0.2, 9.81, 20.0)
    }

    #[test]
    fn rest_is_a_fixed_point() {
        let d = ode_rhs(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0], &benchmark()).unwrap();
        assert_eq!(d, [0.0; 6]);
    }

    #[test]
    fn seed_derivative_matches_explicit_inverse() {
        let p = benchmark();
        let u = [1.0, 0.0, 0.0, 0.0, p.epsilon, 0.0];
        let d = ode_rhs(&u, &p).unwrap();
        let eq = p.equations().unwrap();
        let a = quasilinear_matrix(&eq, &u);
        let m = Matrix6::from_fn(|i, j| a[i][j] - if i == j { p.speed } else { 0.0 });
        let inv = m.try_inverse().unwrap();
        for i in 0..6 {
            let expected = 12.0 * p.epsilon * inv[(i, 3)];
            assert!((d[i] - expected).abs() < 1e-20 + 1e-12 * expected.abs(), "{i}");
        }
    }

    #[test]
    fn defining_identity_on_random_states() {
        use proptest::test_runner::{Config, TestRunner};
        let p = benchmark();
        let eq = p.equations().unwrap();
        let mut runner = TestRunner::new(Config { cases: 200, ..Config::default() });
        runner
            .run(&(0.5f64..1.5, -0.5f64..0.5, -0.2f64..0.2, -0.2f64..0.2, -0.5f64..0.5, -0.5f64..0.5), |(h, u, w, s, pp, pb)| {
                let q = [h, h * u, h * w, h * s, h * pp, h * pb];
                let d = ode_rhs(&q, &p).unwrap();
                let a = quasilinear_matrix(&eq, &q);
                let src = eq.source(&q);
                for i in 0..6 {
                    let lhs: f64 = (0..6).map(|j| (a[i][j] - if i == j { p.speed } else { 0.0 }) * d[j]).sum();
                    let scale = 1.0 + src[i].abs() + (0..6).map(|j| (a[i][j] * d[j]).abs()).sum::<f64>();
                    proptest::prop_assert!((lhs - src[i]).abs() <= 1e-12 * scale);
                }
                Ok(())
            })
            .unwrap();
    }

    #[test]
    fn resonance_is_reported() {
        let mut p = benchmark();
        // u + sqrt(p + g h + c^2) for a moving state equal to V
        let q = [1.0, 1.0, 0.0, 0.0, 0.0, 0.0];
        p.speed = 1.0;
        assert!(matches!(ode_rhs(&q, &p), Err(Error::Resonance { .. })));
    }

    #[test]
    fn benchmark_profile() {
        let prof = integrate_profile(&benchmark()).unwrap();
        assert!((prof.amplitude() - 0.2).abs() < 0.02, "{}", prof.amplitude());
        assert!((prof.eval(0.0)[0] - 1.0 - prof.amplitude()).abs() < 1e-14);
        let hw = prof.half_width();
        for z in [-hw, hw] {
            let u = prof.eval(z);
            let dev = u.iter().zip(benchmark().rest_state()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(dev < 1e-6, "{dev}");
        }
        // symmetry
        for z in [0.3, 2.0, 7.5] {
            let (a, b) = (prof.eval(-z), prof.eval(z));
            assert_eq!([a[0], a[1], a[4], a[5]], [b[0], b[1], b[4], b[5]]);
            assert_eq!([a[2], a[3]], [-b[2], -b[3]]);
        }
    }

    #[test]
    fn dense_output_satisfies_the_ode() {
        let p = benchmark();
        let prof = integrate_profile(&p).unwrap();
        let e = 1e-3;
        for z in [-12.0, -4.0, -1.0, -0.3] {
            let d = ode_rhs(&prof.eval(z), &p).unwrap();
            let (a, b) = (prof.eval(z + e), prof.eval(z - e));
            for i in 0..6 {
                let fd = (a[i] - b[i]) / (2.0 * e);
                assert!((fd - d[i]).abs() < 1e-6, "zeta {z}, component {i}: {fd} vs {}", d[i]);
            }
        }
    }

    #[test]
    fn vanishing_seed_stays_at_rest() {
        let mut p = benchmark();
        p.epsilon = 1e-40;
        p.zeta_span = (0.0, 40.0);
        let prof = integrate_profile(&p).unwrap();
        assert!(!prof.has_crest());
        assert!(prof.amplitude() < 1e-9);
        for z in [0.0, 10.0, 39.0] {
            assert!((prof.eval(z)[0] - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn refinement_changes_samples_negligibly() {
        let p = benchmark();
        let fine = SolitonParams { rtol: 1e-13, output_step: 2.5e-3, ..p };
        let (a, b) = (integrate_profile(&p).unwrap(), integrate_profile(&fine).unwrap());
        let mut worst = 0.0f64;
        for k in 0..400 {
            let z = -20.0 + 0.1 * k as f64;
            worst = worst.max((a.eval(z)[0] - b.eval(z)[0]).abs());
        }
        assert!(worst < 1e-10, "{worst}");
    }

    #[test]
    fn sampling_and_translation() {
        let prof = integrate_profile(&benchmark()).unwrap();
        let mesh = Mesh1D::new(-50.0, 50.0, 100).unwrap();
        let basis = NodalBasis::new(3).unwrap();
        let s0 = sample_initial_condition(&prof, &mesh, &basis, 0.0);
        let s5 = sample_initial_condition(&prof, &mesh, &basis, 5.0);
        for i in 0..95 {
            for k in 0..4 {
                assert_eq!(s0.cell(i)[k], s5.cell(i + 5)[k]);
            }
        }
        for q in s0.cell(0).iter().chain(s0.cell(99)) {
            assert!((q[0] - 1.0).abs() < 1e-6);
        }
    }
}
