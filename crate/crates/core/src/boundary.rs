//! Domain-edge conditions: periodic pairing, transmissive ghosts and
//! relaxation zones that blend the solution toward a target state after
//! every step (wavemaker on the inflow side, absorber on the outflow side).

use std::f64::consts::PI;
use std::path::Path;

use crate::bathymetry::BathymetryField1D;
use crate::dg::{ElementSolution, Mesh1D};
use crate::error::{Error, Result};
use crate::interp::MonotoneCubic;
use crate::model::{Equations, PrimitiveState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryKind {
    Periodic,
    Transmissive,
    Relaxation(RelaxationZone),
}

impl BoundaryKind {
    pub fn is_periodic(&self) -> bool {
        matches!(self, BoundaryKind::Periodic)
    }

    pub fn name(&self) -> &'static str {
        match self {
            BoundaryKind::Periodic => "periodic",
            BoundaryKind::Transmissive => "transmissive",
            BoundaryKind::Relaxation(z) => match z.target {
                TargetProvider::Absorbing => "absorbing",
                _ => "wavemaker",
            },
        }
    }
}

/// Checks that periodic sides come in pairs.
pub fn validate_pair(left: &BoundaryKind, right: &BoundaryKind) -> Result<()> {
    if left.is_periodic() != right.is_periodic() {
        return Err(Error::InvalidScenario(format!(
            "periodic boundaries must be paired (left {}, right {})",
            left.name(),
            right.name()
        )));
    }
    for (kind, side) in [(left, Side::Left), (right, Side::Right)] {
        if let BoundaryKind::Relaxation(z) = kind {
            if z.side != side {
                return Err(Error::InvalidScenario(format!("relaxation zone for the {:?} side placed on the other side", z.side)));
            }
        }
    }
    Ok(())
}

/// Ghost state beyond an edge. `opposite` is the trace on the far side of a
/// periodic domain. Relaxation edges behave as transmissive ones; the zone
/// itself acts through [`RelaxationZone::apply`].
pub fn ghost_state<const NV: usize>(interior: &[f64; NV], opposite: Option<&[f64; NV]>, kind: &BoundaryKind) -> Result<[f64; NV]> {
    match kind {
        BoundaryKind::Periodic => {
            opposite.copied().ok_or_else(|| Error::Incompatible("periodic ghost needs the opposite-side trace".into()))
        }
        BoundaryKind::Transmissive | BoundaryKind::Relaxation(_) => Ok(*interior),
    }
}

/// `m = sqrt(1 - (d / L)^2)`, 1 next to the computational domain and 0 at the
/// outer end of the zone.
pub fn relaxation_weight(d: f64, length: f64) -> Result<f64> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::Relaxation(format!("relaxation length must be positive, got {length}")));
    }
    let slack = 1e-12 * length;
    if !(d >= -slack && d <= length + slack) {
        return Err(Error::Relaxation(format!("distance {d} outside the zone [0, {length}]")));
    }
    let r = (d / length).clamp(0.0, 1.0);
    Ok((1.0 - r * r).sqrt())
}

/// `m * numerical + (1 - m) * target`, componentwise.
pub fn blend_state<const NV: usize>(numerical: &[f64; NV], target: &[f64; NV], m: f64) -> Result<[f64; NV]> {
    if !(0.0..=1.0).contains(&m) {
        return Err(Error::Relaxation(format!("blend weight {m} outside [0, 1]")));
    }
    if m == 1.0 {
        return Ok(*numerical);
    }
    // written around the target so equal inputs come back bit-identical
    let mut out = *target;
    for k in 0..NV {
        out[k] += m * (numerical[k] - target[k]);
    }
    Ok(out)
}

/// Sampled inflow amplitude `A*(t)`, interpolated by a monotone cubic and
/// clamped to the sampled range.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetSeries {
    table: MonotoneCubic,
    shift: f64,
}

impl TargetSeries {
    pub fn new(times: Vec<f64>, amplitudes: Vec<f64>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::Relaxation("empty target series".into()));
        }
        let table = MonotoneCubic::new(times, amplitudes).map_err(|e| Error::Relaxation(format!("target series: {e}")))?;
        Ok(Self { table, shift: 0.0 })
    }

    /// Two columns `(t, A*)`, header optional.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let (t, a) = crate::io::read_two_columns(path)?;
        Self::new(t, a)
    }

    /// Series evaluated at `t + shift`.
    pub fn with_shift(mut self, shift: f64) -> Self {
        self.shift = shift;
        self
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// Shifts the series so its first positive local maximum sits at `t = 0`.
    pub fn aligned_to_first_crest(self, samples: &[(f64, f64)]) -> Self {
        let crest = samples
            .windows(3)
            .find(|w| w[1].1 > 0.0 && w[1].1 >= w[0].1 && w[1].1 > w[2].1)
            .map(|w| w[1].0)
            .unwrap_or(self.table.min());
        self.with_shift(crest)
    }

    pub fn amplitude(&self, t: f64) -> f64 {
        self.table.eval_clamped(t + self.shift)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TargetProvider {
    /// Rest state for all times.
    Absorbing,
    Series(TargetSeries),
    /// `A*(t) = amplitude sin(2 pi t / period)`.
    Synthetic { amplitude: f64, period: f64 },
}

impl TargetProvider {
    /// Regular waves of 1 cm amplitude and 2.02 s period.
    pub fn default_inflow() -> Self {
        TargetProvider::Synthetic { amplitude: 0.01, period: 2.02 }
    }

    pub fn amplitude(&self, t: f64) -> f64 {
        match self {
            TargetProvider::Absorbing => 0.0,
            TargetProvider::Series(s) => s.amplitude(t),
            TargetProvider::Synthetic { amplitude, period } => amplitude * (2.0 * PI * t / period).sin(),
        }
    }
}

/// Target state `h* = H + A* - z_b`, `u* = sqrt(g H) A* / h*`, all other
/// unknowns zero.
pub fn wavemaker_target<E: Equations<NV>, const NV: usize>(
    eq: &E,
    amplitude: f64,
    still_depth: f64,
    zb: f64,
) -> Result<[f64; NV]> {
    let h = still_depth + amplitude - zb;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Relaxation(format!("target depth {h} is not positive")));
    }
    let u = (eq.params().g * still_depth).sqrt() * amplitude / h;
    Ok(eq.from_primitive(&PrimitiveState { h, u, ..PrimitiveState::default() }))
}

/// Relaxation time used by the built-in absorbing zones.
pub const ABSORBER_TIME_SCALE: f64 = 0.02;

/// Band of real mesh cells outside the computational domain, from `edge` to
/// `edge -/+ length`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxationZone {
    pub side: Side,
    /// Computational-domain boundary adjoining the zone.
    pub edge: f64,
    pub length: f64,
    pub still_depth: f64,
    pub target: TargetProvider,
    /// When set, the per-step weight is `m^(dt / tau)`, so the damping per
    /// unit time no longer depends on the step size. `None` blends with `m`
    /// after every step.
    pub time_scale: Option<f64>,
}

impl RelaxationZone {
    pub fn new(side: Side, edge: f64, length: f64, still_depth: f64, target: TargetProvider) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::Relaxation(format!("relaxation length must be positive, got {length}")));
        }
        if !(still_depth > 0.0) {
            return Err(Error::Relaxation(format!("still depth must be positive, got {still_depth}")));
        }
        Ok(Self { side, edge, length, still_depth, target, time_scale: None })
    }

    pub fn with_time_scale(mut self, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::Relaxation(format!("relaxation time scale must be positive, got {tau}")));
        }
        self.time_scale = Some(tau);
        Ok(self)
    }

    /// Blend weight for a cell at distance `d` after a step of length `dt`.
    pub fn step_weight(&self, d: f64, dt: f64) -> Result<f64> {
        let m = relaxation_weight(d, self.length)?;
        Ok(match self.time_scale {
            Some(tau) if m > 0.0 => m.powf(dt / tau).clamp(0.0, 1.0),
            _ => m,
        })
    }

    /// Distance from `x` to the domain edge if `x` lies in the zone.
    pub fn distance(&self, x: f64) -> Option<f64> {
        let d = match self.side {
            Side::Left => self.edge - x,
            Side::Right => x - self.edge,
        };
        (d > 0.0 && d <= self.length * (1.0 + 1e-12)).then_some(d.min(self.length))
    }

    pub fn target_state<E: Equations<NV>, const NV: usize>(&self, eq: &E, t: f64, zb: f64) -> Result<[f64; NV]> {
        wavemaker_target(eq, self.target.amplitude(t), self.still_depth, zb)
    }

    /// Blends every cell whose barycentre lies in the zone toward the target
    /// at time `t`, after a step of length `dt`. Returns the number of cells
    /// touched.
    pub fn apply<E: Equations<NV>, const NV: usize>(
        &self,
        eq: &E,
        solution: &mut ElementSolution<NV>,
        mesh: &Mesh1D,
        bathy: &BathymetryField1D,
        t: f64,
        dt: f64,
    ) -> Result<usize> {
        let mut touched = 0;
        for i in 0..mesh.cells {
            let Some(d) = self.distance(mesh.to_physical(i, 0.5)) else { continue };
            let m = self.step_weight(d, dt)?;
            for (q, zb) in solution.cell_mut(i).iter_mut().zip(bathy.zb(i)) {
                let target = self.target_state(eq, t, *zb)?;
                *q = blend_state(q, &target, m)?;
            }
            touched += 1;
        }
        Ok(touched)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FullSgn1D, PhysParams};

    fn eq() -> FullSgn1D {
        FullSgn1D::new(PhysParams::new(9.81, 20.0).unwrap())
    }

    #[test]
    fn ghosts() {
        let q = [0.4, 0.1, 0.0, 0.01, 0.2, 0.0];
        let p = [0.5, 0.0, 0.0, 0.0, 0.0, 0.0];
        assert_eq!(ghost_state(&q, None, &BoundaryKind::Transmissive).unwrap(), q);
        assert_eq!(ghost_state(&q, Some(&p), &BoundaryKind::Periodic).unwrap(), p);
        assert!(ghost_state(&q, None, &BoundaryKind::Periodic).is_err());
        let rest = eq().rest_state(0.4);
        assert_eq!(ghost_state(&rest, None, &BoundaryKind::Transmissive).unwrap(), rest);
    }

    #[test]
    fn weights() {
        assert_eq!(relaxation_weight(0.0, 10.0).unwrap(), 1.0);
        assert_eq!(relaxation_weight(10.0, 10.0).unwrap(), 0.0);
        assert!((relaxation_weight(5.0, 10.0).unwrap() - 0.75f64.sqrt()).abs() < 1e-15);
        assert!(relaxation_weight(10.5, 10.0).is_err());
        assert!(relaxation_weight(-0.1, 10.0).is_err());
    }

    #[test]
    fn blending() {
        let a = [0.42, 0.1];
        let b = [0.40, 0.0];
        assert_eq!(blend_state(&a, &b, 1.0).unwrap(), a);
        assert_eq!(blend_state(&a, &b, 0.0).unwrap(), b);
        assert!((blend_state(&a, &b, 0.5).unwrap()[0] - 0.41).abs() < 1e-15);
        assert_eq!(blend_state(&a, &a, 0.3).unwrap(), a);
        assert!(blend_state(&a, &b, 1.2).is_err());
    }

    #[test]
    fn targets() {
        let e = eq();
        let rest: [f64; 6] = wavemaker_target(&e, 0.0, 0.4, 0.0).unwrap();
        assert_eq!(rest, [0.4, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let q: [f64; 6] = wavemaker_target(&e, 0.01, 0.4, 0.0).unwrap();
        assert!((q[0] - 0.41).abs() < 1e-15);
        assert!((q[1] / q[0] - 0.048315).abs() < 1e-6);
        let absorber = RelaxationZone::new(Side::Right, 40.0, 10.0, 0.4, TargetProvider::Absorbing).unwrap();
        for t in [0.0, 1.3, 100.0] {
            assert_eq!(absorber.target_state(&e, t, 0.0).unwrap(), rest);
        }
    }

    #[test]
    fn series_interpolation_and_shift() {
        let t: Vec<f64> = (0..=40).map(|k| 0.1 * k as f64).collect();
        let a: Vec<f64> = t.iter().map(|t| 0.01 * (2.0 * PI * (t - 0.5) / 2.02).sin()).collect();
        let samples: Vec<(f64, f64)> = t.iter().copied().zip(a.iter().copied()).collect();
        let s = TargetSeries::new(t, a).unwrap();
        assert!((s.amplitude(1.0) - 0.01 * (2.0 * PI * 0.5 / 2.02).sin()).abs() < 1e-5);
        assert_eq!(s.amplitude(-5.0), s.amplitude(0.0));
        let aligned = s.aligned_to_first_crest(&samples);
        // first crest at 0.5 + 2.02 / 4 = 1.005, sampled at 1.0
        assert!((aligned.shift() - 1.0).abs() < 1e-12);
        assert!(TargetSeries::new(vec![], vec![]).is_err());
        assert!(TargetSeries::new(vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn zone_geometry() {
        let z = RelaxationZone::new(Side::Left, 0.0, 10.0, 0.4, TargetProvider::default_inflow()).unwrap();
        assert_eq!(z.distance(-2.5), Some(2.5));
        assert_eq!(z.distance(0.5), None);
        assert_eq!(z.distance(-10.5), None);
        assert!(RelaxationZone::new(Side::Left, 0.0, 0.0, 0.4, TargetProvider::Absorbing).is_err());
        assert_eq!(z.step_weight(5.0, 1e-3).unwrap(), 0.75f64.sqrt());
        let zt = z.clone().with_time_scale(2e-3).unwrap();
        assert!((zt.step_weight(5.0, 1e-3).unwrap() - 0.75f64.powf(0.25)).abs() < 1e-15);
        assert_eq!(zt.step_weight(10.0, 1e-3).unwrap(), 0.0);
        assert_eq!(zt.step_weight(0.0, 1e-3).unwrap(), 1.0);
        assert!(z.clone().with_time_scale(0.0).is_err());
        let inflow = TargetProvider::default_inflow();
        assert!((inflow.amplitude(2.02 / 4.0) - 0.01).abs() < 1e-15);
        let bad = BoundaryKind::Relaxation(z.clone());
        assert!(validate_pair(&BoundaryKind::Periodic, &BoundaryKind::Transmissive).is_err());
        assert!(validate_pair(&bad, &BoundaryKind::Transmissive).is_ok());
        assert!(validate_pair(&BoundaryKind::Transmissive, &bad).is_err());
    }
}
