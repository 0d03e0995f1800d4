//! Built-in benchmarks, the time loop, gauges, energy monitoring,
//! convergence studies and the full-vs-mild comparison.

mod gauges;
mod run;
mod study;

use std::fmt;
use std::sync::Arc;

use crate::ader::SchemeConfig;
use crate::bathymetry::BathymetryProfile;
use crate::boundary::{validate_pair, ABSORBER_TIME_SCALE, BoundaryKind, RelaxationZone, Side, TargetProvider};
use crate::error::{Error, Result};
use crate::model::{ModelVariant, PhysParams, PrimitiveState};

pub use gauges::{detect_crests, record_gauges, total_variation, Crest, GaugeSeries, GaugeSpec};
pub use run::{
    run, ConservationLedger, EnergySample, ResidualSample, RunOverrides, RunReport, Simulation, Snapshot,
};
pub use study::{
    compare_models, convergence_study, ConvergenceRow, ConvergenceTable, ModelComparison, TV_WINDOW,
};

/// Names accepted by [`builtin_scenario`].
pub const BUILTIN_NAMES: [&str; 4] = ["soliton-flat", "soliton-step", "submerged-bar", "gaussian-2d"];

/// Computational domain. `y` is `None` in 1D.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub x: [f64; 2],
    pub y: Option<[f64; 2]>,
}

impl Domain {
    pub fn line(a: f64, b: f64) -> Self {
        Self { x: [a, b], y: None }
    }

    pub fn rect(x: [f64; 2], y: [f64; 2]) -> Self {
        Self { x, y: Some(y) }
    }

    pub fn dimension(&self) -> usize {
        if self.y.is_some() {
            2
        } else {
            1
        }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let inside = |r: [f64; 2], v: f64| v >= r[0] && v <= r[1];
        inside(self.x, x) && self.y.map_or(true, |r| inside(r, y))
    }
}

/// Closure returning primitive fields over flat reference depth; the run
/// subtracts the bottom from `h`.
pub type InitialFn = Arc<dyn Fn(f64, f64) -> PrimitiveState + Send + Sync>;

#[derive(Clone)]
pub enum InitialCondition {
    /// Lake at rest at the scenario's still depth.
    Rest,
    /// Solitary wave of the given nominal amplitude centred at `x0`, moving
    /// in `+x`. In 2D it is a plane wave.
    Soliton { amplitude: f64, x0: f64 },
    Custom(InitialFn),
}

impl fmt::Debug for InitialCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialCondition::Rest => write!(f, "Rest"),
            InitialCondition::Soliton { amplitude, x0 } => {
                f.debug_struct("Soliton").field("amplitude", amplitude).field("x0", x0).finish()
            }
            InitialCondition::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl InitialCondition {
    pub fn describe(&self) -> String {
        match self {
            InitialCondition::Rest => "rest".into(),
            InitialCondition::Soliton { amplitude, x0 } => format!("soliton(A={amplitude}, x0={x0})"),
            InitialCondition::Custom(_) => "custom".into(),
        }
    }
}

/// How often diagnostics are taken. Counts are in steps; 0 disables.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputCadence {
    pub gauge_every: usize,
    pub energy_every: usize,
    pub residual_every: usize,
    /// Times at which the loop lands exactly and stores a snapshot.
    pub snapshot_times: Vec<f64>,
}

impl Default for OutputCadence {
    fn default() -> Self {
        Self { gauge_every: 1, energy_every: 1, residual_every: 10, snapshot_times: Vec::new() }
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    /// Physical domain. Relaxation zones lie outside it.
    pub domain: Domain,
    /// Cells along x and y (the y entry is ignored in 1D). They cover the
    /// domain plus any relaxation zone.
    pub cells: [usize; 2],
    pub degree: usize,
    pub model: ModelVariant,
    pub params: PhysParams,
    pub scheme: SchemeConfig,
    pub bathymetry: BathymetryProfile,
    /// Reference depth `H` for rest data and `A/H`.
    pub still_depth: f64,
    pub initial: InitialCondition,
    /// `[left, right]` along x.
    pub boundaries_x: [BoundaryKind; 2],
    /// `[bottom, top]` along y, ignored in 1D.
    pub boundaries_y: [BoundaryKind; 2],
    pub t_end: f64,
    pub gauges: Vec<GaugeSpec>,
    pub output: OutputCadence,
}

impl Scenario {
    pub fn dimension(&self) -> usize {
        self.domain.dimension()
    }

    /// Mesh extent along x: the domain widened by relaxation zones.
    pub fn mesh_extent_x(&self) -> [f64; 2] {
        let mut ext = self.domain.x;
        for kind in &self.boundaries_x {
            if let BoundaryKind::Relaxation(z) = kind {
                match z.side {
                    Side::Left => ext[0] = ext[0].min(z.edge - z.length),
                    Side::Right => ext[1] = ext[1].max(z.edge + z.length),
                }
            }
        }
        ext
    }

    pub fn relaxation_zones(&self) -> impl Iterator<Item = &RelaxationZone> {
        self.boundaries_x.iter().filter_map(|k| match k {
            BoundaryKind::Relaxation(z) => Some(z),
            _ => None,
        })
    }

    pub fn is_periodic_x(&self) -> bool {
        self.boundaries_x[0].is_periodic()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidScenario(format!("{}: {m}", self.name)));
        let [a, b] = self.domain.x;
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return bad(format!("empty x range [{a}, {b}]"));
        }
        if let Some([c, d]) = self.domain.y {
            if !(c < d) {
                return bad(format!("empty y range [{c}, {d}]"));
            }
        }
        if self.cells[0] == 0 || (self.dimension() == 2 && self.cells[1] == 0) {
            return bad("mesh needs at least one cell per direction".into());
        }
        if !(self.still_depth > 0.0 && self.still_depth.is_finite()) {
            return bad(format!("still depth must be positive, got {}", self.still_depth));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end must be non-negative, got {}", self.t_end));
        }
        // rebuild through the checked constructor
        PhysParams::new(self.params.g, self.params.c)?;
        self.scheme.validate()?;
        validate_pair(&self.boundaries_x[0], &self.boundaries_x[1])?;
        for (kind, side) in self.boundaries_x.iter().zip([Side::Left, Side::Right]) {
            if let BoundaryKind::Relaxation(z) = kind {
                let expected = if side == Side::Left { a } else { b };
                if (z.edge - expected).abs() > 1e-12 * (1.0 + expected.abs()) {
                    return bad(format!("relaxation zone edge {} does not touch the domain edge {expected}", z.edge));
                }
            }
        }
        if self.dimension() == 2 {
            validate_pair(&self.boundaries_y[0], &self.boundaries_y[1])?;
            let all = self.boundaries_x.iter().chain(&self.boundaries_y);
            if all.clone().any(|k| matches!(k, BoundaryKind::Relaxation(_))) {
                return bad("relaxation zones are one-dimensional only".into());
            }
            if self.model == ModelVariant::MildBottom {
                return bad("the mild-bottom variant is one-dimensional only".into());
            }
        }
        for g in &self.gauges {
            if !self.domain.contains(g.x, g.y) {
                return Err(Error::OutsideDomain { x: g.x, y: g.y });
            }
        }
        if self.output.snapshot_times.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return bad("snapshot times must be finite and non-negative".into());
        }
        Ok(())
    }
}

fn gauge_line(xs: &[f64]) -> Vec<GaugeSpec> {
    xs.iter().map(|&x| GaugeSpec::new(format!("x={x}"), x, 0.0)).collect()
}

/// One of the four benchmark set-ups.
pub fn builtin_scenario(name: &str) -> Result<Scenario> {
    let g = 9.81;
    let scheme = SchemeConfig::default();
    let s = match name {
        "soliton-flat" => Scenario {
            name: name.into(),
            domain: Domain::line(-50.0, 50.0),
            cells: [100, 1],
            degree: 3,
            model: ModelVariant::FullSgn,
            params: PhysParams::new(g, 20.0)?,
            scheme,
            bathymetry: BathymetryProfile::Flat { z0: 0.0 },
            still_depth: 1.0,
            initial: InitialCondition::Soliton { amplitude: 0.2, x0: 0.0 },
            boundaries_x: [BoundaryKind::Periodic, BoundaryKind::Periodic],
            boundaries_y: [BoundaryKind::Periodic, BoundaryKind::Periodic],
            t_end: 2.0,
            gauges: gauge_line(&[0.0, 10.0]),
            output: OutputCadence::default(),
        },
        "soliton-step" => Scenario {
            name: name.into(),
            domain: Domain::line(-16.0, 17.0),
            cells: [4342, 1],
            degree: 3,
            model: ModelVariant::FullSgn,
            params: PhysParams::new(g, 5.0)?,
            scheme,
            bathymetry: BathymetryProfile::standard_step(),
            still_depth: 0.2,
            initial: InitialCondition::Soliton { amplitude: 0.0365, x0: -3.0 },
            boundaries_x: [BoundaryKind::Transmissive, BoundaryKind::Transmissive],
            boundaries_y: [BoundaryKind::Transmissive, BoundaryKind::Transmissive],
            t_end: 10.74,
            gauges: gauge_line(&[-9.0, -6.0, -3.0, 3.0, 6.0, 9.0]),
            output: OutputCadence { snapshot_times: vec![8.0, 10.0], ..OutputCadence::default() },
        },
        "submerged-bar" => {
            let h = 0.4;
            let left = RelaxationZone::new(Side::Left, 0.0, 10.0, h, TargetProvider::default_inflow())?;
            let right = RelaxationZone::new(Side::Right, 40.0, 10.0, h, TargetProvider::Absorbing)?
                .with_time_scale(ABSORBER_TIME_SCALE)?;
            Scenario {
                name: name.into(),
                domain: Domain::line(0.0, 40.0),
                cells: [1200, 1],
                degree: 3,
                model: ModelVariant::FullSgn,
                params: PhysParams::new(g, 5.0)?,
                scheme,
                bathymetry: BathymetryProfile::standard_bar(),
                still_depth: h,
                initial: InitialCondition::Rest,
                boundaries_x: [BoundaryKind::Relaxation(left), BoundaryKind::Relaxation(right)],
                boundaries_y: [BoundaryKind::Transmissive, BoundaryKind::Transmissive],
                t_end: 40.0,
                gauges: [("S1", 10.8), ("S2", 12.8), ("S3", 13.8), ("S4", 14.8), ("S5", 16.0), ("S6", 17.6)]
                    .iter()
                    .map(|&(n, x)| GaugeSpec::new(n, x, 0.0))
                    .collect(),
                output: OutputCadence::default(),
            }
        }
        "gaussian-2d" => Scenario {
            name: name.into(),
            domain: Domain::rect([-5.0, 35.0], [-20.0, 20.0]),
            cells: [200, 200],
            degree: 3,
            model: ModelVariant::FullSgn,
            params: PhysParams::new(g, 5.0)?,
            scheme,
            bathymetry: BathymetryProfile::GaussianBump { amplitude: 0.1, sigma: 1.0, center: (0.0, 0.0) },
            still_depth: 0.25,
            initial: InitialCondition::Soliton { amplitude: 0.1, x0: -3.0 },
            boundaries_x: [BoundaryKind::Transmissive, BoundaryKind::Transmissive],
            boundaries_y: [BoundaryKind::Transmissive, BoundaryKind::Transmissive],
            t_end: 12.0,
            gauges: gauge_line(&[0.0, 5.0, 10.0]),
            output: OutputCadence {
                energy_every: 10,
                gauge_every: 1,
                residual_every: 0,
                snapshot_times: vec![3.0, 6.0, 9.0, 12.0],
            },
        },
        other => {
            return Err(Error::UnknownScenario { name: other.into(), available: BUILTIN_NAMES.join(", ") });
        }
    };
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_are_valid() {
        for name in BUILTIN_NAMES {
            let s = builtin_scenario(name).unwrap();
            s.validate().unwrap();
            assert_eq!(s.name, name);
        }
    }

    #[test]
    fn builtin_parameters() {
        let s = builtin_scenario("soliton-flat").unwrap();
        assert_eq!(s.params.c, 20.0);
        assert_eq!(s.still_depth, 1.0);
        assert!(matches!(s.initial, InitialCondition::Soliton { amplitude, .. } if amplitude == 0.2));
        assert!(s.is_periodic_x());

        let s = builtin_scenario("soliton-step").unwrap();
        assert_eq!(s.t_end, 10.74);
        assert!(matches!(s.boundaries_x[0], BoundaryKind::Transmissive));
        assert_eq!(s.cells[0], 4342);
        assert_eq!(s.gauges.len(), 6);

        let s = builtin_scenario("gaussian-2d").unwrap();
        assert_eq!(s.still_depth, 0.25);
        assert_eq!(s.t_end, 12.0);
        assert_eq!(s.dimension(), 2);

        let s = builtin_scenario("submerged-bar").unwrap();
        assert_eq!(s.mesh_extent_x(), [-10.0, 50.0]);
        assert_eq!(s.relaxation_zones().count(), 2);
        assert!((s.gauges[5].x - 17.6).abs() < 1e-15);
    }

    #[test]
    fn unknown_name_lists_builtins() {
        let err = builtin_scenario("soliton-flt").unwrap_err().to_string();
        for name in BUILTIN_NAMES {
            assert!(err.contains(name), "{err}");
        }
    }

    #[test]
    fn inconsistent_scenarios_are_rejected() {
        let mut s = builtin_scenario("soliton-flat").unwrap();
        s.boundaries_x[1] = BoundaryKind::Transmissive;
        assert!(s.validate().is_err());

        let mut s = builtin_scenario("soliton-step").unwrap();
        s.gauges.push(GaugeSpec::new("out", 20.0, 0.0));
        assert!(matches!(s.validate(), Err(Error::OutsideDomain { .. })));

        let mut s = builtin_scenario("gaussian-2d").unwrap();
        s.model = ModelVariant::MildBottom;
        assert!(s.validate().is_err());
    }
}
