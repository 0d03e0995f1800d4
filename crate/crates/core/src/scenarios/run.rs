use std::time::{Duration, Instant};

use super::gauges::{record_gauges, GaugeSeries};
use super::{InitialCondition, InitialFn, Scenario};
use crate::ader::{Solver1D, Solver2D};
use crate::bathymetry::{project_to_field, project_to_field_2d, BathymetryField1D};
use crate::boundary::{BoundaryKind, RelaxationZone, TargetProvider, TargetSeries};
use crate::dg::{eval_at, eval_at_2d, ElementSolution, Mesh1D, Mesh2D, NodalBasis};
use crate::error::{Error, Result};
use crate::model::{Equations, FullSgn1D, FullSgn2D, MildBottom1D, ModelVariant, PhysParams, PrimitiveState};
use crate::soliton::{integrate_profile, SolitonParams};

/// A running solver for one of the supported systems.
#[derive(Debug, Clone)]
pub enum Simulation {
    Full1D(Solver1D<FullSgn1D, 6>),
    Mild1D(Solver1D<MildBottom1D, 4>),
    Full2D(Solver2D<FullSgn2D, 7>),
}

macro_rules! each {
    ($sim:expr, $s:ident => $body:expr) => {
        match $sim {
            Simulation::Full1D($s) => $body,
            Simulation::Mild1D($s) => $body,
            Simulation::Full2D($s) => $body,
        }
    };
}

macro_rules! each_1d {
    ($sim:expr, $s:ident => $body:expr, $other:expr) => {
        match $sim {
            Simulation::Full1D($s) => $body,
            Simulation::Mild1D($s) => $body,
            Simulation::Full2D(_) => $other,
        }
    };
}

impl Simulation {
    /// Builds meshes, bathymetry and initial data for `scenario`.
    pub fn build(scenario: &Scenario) -> Result<Self> {
        scenario.validate()?;
        let basis = NodalBasis::new(scenario.degree)?;
        let init = initial_fields(scenario)?;
        let p = scenario.params;
        let ext = scenario.mesh_extent_x();
        let mesh_x = Mesh1D::new(ext[0], ext[1], scenario.cells[0])?;
        let periodic_x = scenario.is_periodic_x();
        match (scenario.dimension(), scenario.model) {
            (1, ModelVariant::FullSgn) => {
                let eq = FullSgn1D::new(p);
                let bathy = project_to_field(&scenario.bathymetry, &mesh_x, &basis)?;
                let u0 = initial_1d(&eq, &mesh_x, &basis, &bathy, &init);
                Ok(Simulation::Full1D(Solver1D::new(eq, mesh_x, basis, bathy, scenario.scheme, periodic_x, u0)?))
            }
            (1, ModelVariant::MildBottom) => {
                let eq = MildBottom1D::new(p);
                let bathy = project_to_field(&scenario.bathymetry, &mesh_x, &basis)?;
                let u0 = initial_1d(&eq, &mesh_x, &basis, &bathy, &init);
                Ok(Simulation::Mild1D(Solver1D::new(eq, mesh_x, basis, bathy, scenario.scheme, periodic_x, u0)?))
            }
            (2, ModelVariant::FullSgn) => {
                let [c, d] = scenario.domain.y.unwrap_or([0.0, 1.0]);
                let mesh = Mesh2D::new(mesh_x, Mesh1D::new(c, d, scenario.cells[1])?);
                let eq = FullSgn2D::new(p);
                let bathy = project_to_field_2d(&scenario.bathymetry, &mesh, &basis)?;
                let n = basis.len();
                let mut u0 = ElementSolution::zeros(mesh.cells(), n * n);
                for iy in 0..mesh.y.cells {
                    for ix in 0..mesh.x.cells {
                        let cell = mesh.cell_index(ix, iy);
                        let zb = bathy.zb(cell);
                        for (k, q) in u0.cell_mut(cell).iter_mut().enumerate() {
                            let x = mesh.x.to_physical(ix, basis.nodes()[k % n]);
                            let y = mesh.y.to_physical(iy, basis.nodes()[k / n]);
                            let mut prim = init(x, y);
                            prim.h -= zb[k];
                            *q = eq.from_primitive(&prim);
                        }
                    }
                }
                let periodic = [periodic_x, scenario.boundaries_y[0].is_periodic()];
                Ok(Simulation::Full2D(Solver2D::new(eq, mesh, basis, bathy, scenario.scheme, periodic, u0)?))
            }
            (dim, model) => {
                Err(Error::InvalidScenario(format!("no {dim}D solver for the {} model", model.name())))
            }
        }
    }

    pub fn time(&self) -> f64 {
        each!(self, s => s.time())
    }

    pub fn steps(&self) -> usize {
        each!(self, s => s.steps())
    }

    pub fn stable_dt(&self) -> Result<f64> {
        each!(self, s => s.stable_dt())
    }

    pub fn step(&mut self, dt: f64) -> Result<()> {
        each!(self, s => s.step(dt))
    }

    pub fn total_mass(&self) -> f64 {
        each!(self, s => s.total_mass())
    }

    pub fn total_energy(&self) -> f64 {
        each!(self, s => s.total_energy())
    }

    pub fn params(&self) -> PhysParams {
        each!(self, s => s.equations().params())
    }

    /// Mass that entered through transmissive edges (1D only).
    pub fn boundary_inflow(&self) -> Option<f64> {
        each_1d!(self, s => Some(s.boundary_inflow()), None)
    }

    /// L2 norms of the two constraint residuals (1D only).
    pub fn constraint_residuals(&self) -> Option<(f64, f64)> {
        each_1d!(self, s => Some(s.constraint_residual_norms()), None)
    }

    /// Depth and free surface at a point.
    pub fn sample_depth(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        match self {
            Simulation::Full1D(s) => {
                let h = eval_at(s.solution(), s.mesh(), s.basis(), x)?[0];
                Ok((h, h + s.bathymetry().eval(s.mesh(), s.basis(), x)?))
            }
            Simulation::Mild1D(s) => {
                let h = eval_at(s.solution(), s.mesh(), s.basis(), x)?[0];
                Ok((h, h + s.bathymetry().eval(s.mesh(), s.basis(), x)?))
            }
            Simulation::Full2D(s) => {
                let h = eval_at_2d(s.solution(), s.mesh(), s.basis(), x, y)?[0];
                Ok((h, h + s.bathymetry().eval(s.mesh(), s.basis(), x, y)?))
            }
        }
    }

    /// Primitive fields at a point.
    pub fn sample_primitive(&self, x: f64, y: f64) -> Result<PrimitiveState> {
        match self {
            Simulation::Full1D(s) => Ok(s.equations().primitive(&eval_at(s.solution(), s.mesh(), s.basis(), x)?)),
            Simulation::Mild1D(s) => Ok(s.equations().primitive(&eval_at(s.solution(), s.mesh(), s.basis(), x)?)),
            Simulation::Full2D(s) => {
                Ok(s.equations().primitive(&eval_at_2d(s.solution(), s.mesh(), s.basis(), x, y)?))
            }
        }
    }

    /// `(x, eta)` at every nodal abscissa, in increasing `x`. In 2D the
    /// profile is taken along the line `y`.
    pub fn profile(&self, y: f64) -> Result<Vec<[f64; 2]>> {
        match self {
            Simulation::Full1D(s) => Ok(nodal_profile(s.solution(), s.mesh(), s.basis(), s.bathymetry())),
            Simulation::Mild1D(s) => Ok(nodal_profile(s.solution(), s.mesh(), s.basis(), s.bathymetry())),
            Simulation::Full2D(s) => {
                let mesh = s.mesh();
                let nodes = s.basis().nodes();
                let mut out = Vec::with_capacity(mesh.x.cells * nodes.len());
                for i in 0..mesh.x.cells {
                    for &xi in nodes {
                        let x = mesh.x.to_physical(i, xi);
                        out.push([x, s.free_surface(x, y)?]);
                    }
                }
                Ok(out)
            }
        }
    }

    /// `(x, y, h, eta)` at every node (2D only).
    pub fn field_2d(&self) -> Option<Vec<[f64; 4]>> {
        let Simulation::Full2D(s) = self else { return None };
        let mesh = s.mesh();
        let nodes = s.basis().nodes();
        let n = nodes.len();
        let mut out = Vec::with_capacity(mesh.cells() * n * n);
        for iy in 0..mesh.y.cells {
            for ix in 0..mesh.x.cells {
                let c = mesh.cell_index(ix, iy);
                let zb = s.bathymetry().zb(c);
                for (k, q) in s.solution().cell(c).iter().enumerate() {
                    let x = mesh.x.to_physical(ix, nodes[k % n]);
                    let y = mesh.y.to_physical(iy, nodes[k / n]);
                    out.push([x, y, q[0], q[0] + zb[k]]);
                }
            }
        }
        Some(out)
    }

    /// Blends the relaxation zones toward their targets at time `t`.
    /// Returns the mass change the blending caused.
    pub fn apply_zones(&mut self, zones: &[&RelaxationZone], t: f64, dt: f64) -> Result<f64> {
        if zones.is_empty() {
            return Ok(0.0);
        }
        let before = self.total_mass();
        match self {
            Simulation::Full1D(s) => apply_1d(s, zones, t, dt)?,
            Simulation::Mild1D(s) => apply_1d(s, zones, t, dt)?,
            Simulation::Full2D(_) => {
                return Err(Error::InvalidScenario("relaxation zones are one-dimensional only".into()));
            }
        }
        Ok(self.total_mass() - before)
    }
}

fn apply_1d<E: Equations<NV>, const NV: usize>(
    s: &mut Solver1D<E, NV>,
    zones: &[&RelaxationZone],
    t: f64,
    dt: f64,
) -> Result<()> {
    let eq = *s.equations();
    let mesh = *s.mesh();
    let bathy = s.bathymetry().clone();
    for z in zones {
        z.apply(&eq, s.solution_mut(), &mesh, &bathy, t, dt)?;
    }
    Ok(())
}

fn nodal_profile<const NV: usize>(
    sol: &ElementSolution<NV>,
    mesh: &Mesh1D,
    basis: &NodalBasis,
    bathy: &BathymetryField1D,
) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(sol.data().len());
    for i in 0..mesh.cells {
        for ((q, &xi), zb) in sol.cell(i).iter().zip(basis.nodes()).zip(bathy.zb(i)) {
            out.push([mesh.to_physical(i, xi), q[0] + zb]);
        }
    }
    out
}

/// Primitive fields over a flat bottom at the still depth. The depth is
/// reduced by the nodal bottom afterwards, so the far field is exactly at
/// rest over any bathymetry.
fn initial_fields(scenario: &Scenario) -> Result<InitialFn> {
    let depth = scenario.still_depth;
    match &scenario.initial {
        InitialCondition::Rest => Ok(std::sync::Arc::new(move |_, _| PrimitiveState { h: depth, ..Default::default() })),
        InitialCondition::Soliton { amplitude, x0 } => {
            let p = scenario.params;
            let profile = integrate_profile(&SolitonParams::new(depth, *amplitude, p.g, p.c))?;
            let full = FullSgn1D::new(p);
            let x0 = *x0;
            let period = scenario.is_periodic_x().then(|| scenario.domain.x[1] - scenario.domain.x[0]);
            Ok(std::sync::Arc::new(move |x, _| {
                let q = match period {
                    Some(len) => profile.eval_periodic(x, x0, len),
                    None => profile.eval(x - x0),
                };
                full.primitive(&q)
            }))
        }
        InitialCondition::Custom(f) => Ok(f.clone()),
    }
}

fn initial_1d<E: Equations<NV>, const NV: usize>(
    eq: &E,
    mesh: &Mesh1D,
    basis: &NodalBasis,
    bathy: &BathymetryField1D,
    init: &InitialFn,
) -> ElementSolution<NV> {
    let mut u0 = ElementSolution::zeros(mesh.cells, basis.len());
    for i in 0..mesh.cells {
        let zb = bathy.zb(i);
        for (k, q) in u0.cell_mut(i).iter_mut().enumerate() {
            let mut prim = init(mesh.to_physical(i, basis.nodes()[k]), 0.0);
            prim.h -= zb[k];
            *q = eq.from_primitive(&prim);
        }
    }
    u0
}

/// Selective replacement of scenario parameters.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOverrides {
    pub cells_x: Option<usize>,
    pub cells_y: Option<usize>,
    pub degree: Option<usize>,
    pub c: Option<f64>,
    pub cfl: Option<f64>,
    pub t_end: Option<f64>,
    pub model: Option<ModelVariant>,
    /// Replaces the inflow of every wavemaker zone.
    pub inflow: Option<TargetSeries>,
    /// Time shift of the inflow series.
    pub inflow_shift: Option<f64>,
    pub snapshot_times: Option<Vec<f64>>,
}

impl Scenario {
    pub fn with_overrides(&self, o: &RunOverrides) -> Result<Scenario> {
        let mut s = self.clone();
        if let Some(n) = o.cells_x {
            s.cells[0] = n;
        }
        if let Some(n) = o.cells_y {
            s.cells[1] = n;
        }
        if let Some(n) = o.degree {
            s.degree = n;
        }
        if let Some(c) = o.c {
            s.params = PhysParams::new(s.params.g, c)?;
        }
        if let Some(cfl) = o.cfl {
            s.scheme.cfl = cfl;
        }
        if let Some(t) = o.t_end {
            s.t_end = t;
        }
        if let Some(m) = o.model {
            s.model = m;
        }
        if let Some(times) = &o.snapshot_times {
            s.output.snapshot_times = times.clone();
        }
        if o.inflow.is_some() || o.inflow_shift.is_some() {
            for kind in s.boundaries_x.iter_mut() {
                let BoundaryKind::Relaxation(z) = kind else { continue };
                if z.target == TargetProvider::Absorbing {
                    continue;
                }
                if let Some(series) = &o.inflow {
                    z.target = TargetProvider::Series(series.clone());
                }
                if let (Some(shift), TargetProvider::Series(series)) = (o.inflow_shift, &mut z.target) {
                    *series = series.clone().with_shift(shift);
                }
            }
        }
        s.validate()?;
        Ok(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySample {
    pub time: f64,
    pub energy: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualSample {
    pub time: f64,
    /// `|| sigma + h u_x ||`.
    pub sigma: f64,
    /// `|| w - sigma / 2 - u z_b' ||`.
    pub w: f64,
}

/// Mass and energy bookkeeping of a run. Relative quantities are scaled by
/// the initial totals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservationLedger {
    pub initial_mass: f64,
    pub final_mass: f64,
    /// Net mass through transmissive edges, when the solver tracks it.
    pub boundary_inflow: Option<f64>,
    /// Net mass added by relaxation blending.
    pub relaxation_mass: f64,
    pub mass_drift: f64,
    /// `(M_end - M_0 - inflow - relaxation) / M_0`.
    pub mass_balance: Option<f64>,
    pub initial_energy: f64,
    pub final_energy: f64,
    pub energy_drift: f64,
    /// Largest increase between consecutive energy samples, relative.
    pub max_energy_increase: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    /// `(x, eta)`; along `y = 0` (or the domain centre line) in 2D.
    pub profile: Vec<[f64; 2]>,
    /// `(x, y, h, eta)` at every node, 2D only.
    pub field: Option<Vec<[f64; 4]>>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub scenario: Scenario,
    pub wall_time: Duration,
    pub steps: usize,
    pub simulation: Simulation,
    pub energy: Vec<EnergySample>,
    pub residuals: Vec<ResidualSample>,
    pub ledger: ConservationLedger,
    pub gauges: Vec<GaugeSeries>,
    pub snapshots: Vec<Snapshot>,
}

impl RunReport {
    pub fn snapshot_at(&self, t: f64) -> Option<&Snapshot> {
        self.snapshots.iter().find(|s| (s.time - t).abs() <= 1e-9 * (1.0 + t.abs()))
    }
}

fn centre_line(s: &Scenario) -> f64 {
    match s.domain.y {
        Some([c, d]) if c <= 0.0 && d >= 0.0 => 0.0,
        Some([c, d]) => 0.5 * (c + d),
        None => 0.0,
    }
}

fn take_snapshot(sim: &Simulation, scenario: &Scenario) -> Result<Snapshot> {
    Ok(Snapshot { time: sim.time(), profile: sim.profile(centre_line(scenario))?, field: sim.field_2d() })
}

/// Runs `scenario` with `overrides` applied until `t_end`.
pub fn run(scenario: &Scenario, overrides: &RunOverrides) -> Result<RunReport> {
    let scenario = scenario.with_overrides(overrides)?;
    let clock = Instant::now();
    let mut sim = Simulation::build(&scenario)?;
    let zones: Vec<&RelaxationZone> = scenario.relaxation_zones().collect();
    let out = &scenario.output;
    let t_end = scenario.t_end;
    let eps = 1e-12 * t_end.max(1.0);

    let mut events: Vec<f64> = out.snapshot_times.iter().copied().filter(|&t| t > eps && t < t_end - eps).collect();
    if t_end > eps {
        events.push(t_end);
    }
    events.sort_by(f64::total_cmp);
    events.dedup();
    let snapshot_at_end = t_end > eps && out.snapshot_times.iter().any(|&t| (t - t_end).abs() <= eps);

    let mut gauges: Vec<GaugeSeries> = scenario.gauges.iter().cloned().map(GaugeSeries::new).collect();
    let mut energy = Vec::new();
    let mut residuals = Vec::new();
    let mut snapshots = Vec::new();
    let mut relaxation_mass = 0.0;

    let sample_energy = |sim: &Simulation, energy: &mut Vec<EnergySample>| {
        energy.push(EnergySample { time: sim.time(), energy: sim.total_energy(), mass: sim.total_mass() });
    };
    let sample_residual = |sim: &Simulation, residuals: &mut Vec<ResidualSample>| {
        if let Some((sigma, w)) = sim.constraint_residuals() {
            residuals.push(ResidualSample { time: sim.time(), sigma, w });
        }
    };

    sample_energy(&sim, &mut energy);
    if out.residual_every > 0 {
        sample_residual(&sim, &mut residuals);
    }
    record_gauges(&sim, &mut gauges, scenario.still_depth, 0.0)?;
    if out.snapshot_times.iter().any(|&t| t <= eps) {
        snapshots.push(take_snapshot(&sim, &scenario)?);
    }

    let fail = |sim: &Simulation, e: Error| Error::Run {
        scenario: scenario.name.clone(),
        step: sim.steps() + 1,
        time: sim.time(),
        source: Box::new(e),
    };

    let mut next = 0;
    while next < events.len() {
        let target = events[next];
        let dt_max = sim.stable_dt().map_err(|e| fail(&sim, e))?;
        let remaining = target - sim.time();
        let lands = dt_max >= remaining - eps;
        let dt = if lands { remaining } else { dt_max };
        sim.step(dt).map_err(|e| fail(&sim, e))?;
        let t = sim.time();
        relaxation_mass += sim.apply_zones(&zones, t, dt).map_err(|e| fail(&sim, e))?;
        let n = sim.steps();
        let last = lands && next + 1 == events.len();
        if last || (out.energy_every > 0 && n % out.energy_every == 0) {
            sample_energy(&sim, &mut energy);
        }
        if out.residual_every > 0 && (last || n % out.residual_every == 0) {
            sample_residual(&sim, &mut residuals);
        }
        if last || (out.gauge_every > 0 && n % out.gauge_every == 0) {
            record_gauges(&sim, &mut gauges, scenario.still_depth, t)?;
        }
        if lands {
            if !last || snapshot_at_end {
                snapshots.push(take_snapshot(&sim, &scenario)?);
            }
            next += 1;
        }
    }

    let first = energy[0];
    let lastm = energy[energy.len() - 1];
    let scale_e = first.energy.abs().max(f64::MIN_POSITIVE);
    let max_increase = energy.windows(2).map(|w| (w[1].energy - w[0].energy) / scale_e).fold(f64::NEG_INFINITY, f64::max);
    let inflow = sim.boundary_inflow();
    let ledger = ConservationLedger {
        initial_mass: first.mass,
        final_mass: lastm.mass,
        boundary_inflow: inflow,
        relaxation_mass,
        mass_drift: (lastm.mass - first.mass) / first.mass,
        mass_balance: inflow.map(|f| (lastm.mass - first.mass - f - relaxation_mass) / first.mass),
        initial_energy: first.energy,
        final_energy: lastm.energy,
        energy_drift: (lastm.energy - first.energy) / scale_e,
        max_energy_increase: if energy.len() > 1 { max_increase } else { 0.0 },
    };
    let finite = [ledger.mass_drift, ledger.energy_drift, ledger.max_energy_increase, ledger.relaxation_mass]
        .iter()
        .all(|v| v.is_finite())
        && ledger.mass_balance.map_or(true, f64::is_finite);
    if !finite {
        return Err(Error::Run {
            scenario: scenario.name.clone(),
            step: sim.steps(),
            time: sim.time(),
            source: Box::new(Error::InvalidScenario("conservation ledger is not finite".into())),
        });
    }
    Ok(RunReport {
        steps: sim.steps(),
        wall_time: clock.elapsed(),
        scenario,
        simulation: sim,
        energy,
        residuals,
        ledger,
        gauges,
        snapshots,
    })
}
