use std::fmt::Write as _;
use std::time::Duration;

use super::gauges::total_variation;
use super::run::{run, RunOverrides, Simulation};
use super::{InitialCondition, Scenario};
use crate::dg::l2_error_with;
use crate::error::{Error, Result};
use crate::model::{Equations, FullSgn1D, ModelVariant};
use crate::soliton::{integrate_profile, SolitonParams};

/// Window around the step over which the oscillation of `eta` is measured.
pub const TV_WINDOW: [f64; 2] = [-1.0, 1.0];

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub cells: usize,
    /// L2 errors of `h`, `u` and `p` against the translated profile.
    pub errors: [f64; 3],
    /// Orders with respect to the previous row. `None` on the first row and
    /// wherever the order is undefined (equal meshes, zero error).
    pub orders: [Option<f64>; 3],
    pub steps: usize,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub scenario: String,
    pub degree: usize,
    pub t_end: f64,
    pub rows: Vec<ConvergenceRow>,
    /// Cause of the abort when a sub-run failed; `rows` holds the meshes
    /// completed before it.
    pub failure: Option<String>,
}

impl ConvergenceTable {
    /// Smallest defined order over all variables and rows.
    pub fn min_order(&self) -> Option<f64> {
        self.rows.iter().flat_map(|r| r.orders.iter().flatten().copied()).reduce(f64::min)
    }

    /// True if some row after the first has an undefined order.
    pub fn has_undefined_orders(&self) -> bool {
        self.rows.iter().skip(1).any(|r| r.orders.iter().any(Option::is_none))
    }

    /// CSV with one row per mesh; undefined orders are written as
    /// `undefined`, the first row's orders as `-`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("N_x,L2_h,O_h,L2_u,O_u,L2_p,O_p\n");
        for (i, r) in self.rows.iter().enumerate() {
            let _ = write!(s, "{}", r.cells);
            for (e, o) in r.errors.iter().zip(&r.orders) {
                let order = match (i, o) {
                    (0, _) => "-".to_string(),
                    (_, Some(v)) => format!("{v:.16e}"),
                    (_, None) => "undefined".to_string(),
                };
                let _ = write!(s, ",{e:.16e},{order}");
            }
            s.push('\n');
        }
        s
    }
}

fn order(e0: f64, e1: f64, n0: usize, n1: usize) -> Option<f64> {
    let ok = e0 > 0.0 && e1 > 0.0 && e0.is_finite() && e1.is_finite() && n0 != n1;
    ok.then(|| (e0 / e1).ln() / (n1 as f64 / n0 as f64).ln())
}

/// Runs the soliton scenario on each mesh at degree `degree` and measures
/// the error against the exactly translated profile.
pub fn convergence_study(base: &Scenario, degree: usize, meshes: &[usize]) -> Result<ConvergenceTable> {
    let InitialCondition::Soliton { amplitude, x0 } = base.initial else {
        return Err(Error::InvalidScenario(format!("{}: convergence needs soliton initial data", base.name)));
    };
    if base.dimension() != 1 || base.model != ModelVariant::FullSgn {
        return Err(Error::InvalidScenario("convergence studies run the 1D full model".into()));
    }
    if meshes.is_empty() {
        return Err(Error::InvalidScenario("empty mesh list".into()));
    }
    let p = base.params;
    let profile = integrate_profile(&SolitonParams::new(base.still_depth, amplitude, p.g, p.c))?;
    let full = FullSgn1D::new(p);
    let centre = x0 + profile.speed() * base.t_end;
    let period = base.is_periodic_x().then(|| base.domain.x[1] - base.domain.x[0]);
    let mut table = ConvergenceTable {
        scenario: base.name.clone(),
        degree,
        t_end: base.t_end,
        rows: Vec::new(),
        failure: None,
    };
    for &cells in meshes {
        let o = RunOverrides { cells_x: Some(cells), degree: Some(degree), ..Default::default() };
        let mut s = base.clone();
        // diagnostics are not needed here
        s.gauges.clear();
        s.output = super::OutputCadence { gauge_every: 0, energy_every: 0, residual_every: 0, snapshot_times: vec![] };
        let report = match run(&s, &o) {
            Ok(r) => r,
            Err(e) => {
                table.failure = Some(format!("N_x = {cells}: {e}"));
                return Ok(table);
            }
        };
        let Simulation::Full1D(sol) = &report.simulation else { unreachable!("1D full model checked above") };
        let errors = l2_error_with(
            sol.solution(),
            sol.mesh(),
            sol.basis(),
            |x| {
                let q = match period {
                    Some(len) => profile.eval_periodic(x, centre, len),
                    None => profile.eval(x - centre),
                };
                let w = full.primitive(&q);
                [w.h, w.u, w.p]
            },
            |q| {
                let w = full.primitive(q);
                [w.h, w.u, w.p]
            },
        )?;
        let orders = match table.rows.last() {
            Some(prev) => [0, 1, 2].map(|k| order(prev.errors[k], errors[k], prev.cells, cells)),
            None => [None; 3],
        };
        table.rows.push(ConvergenceRow { cells, errors, orders, steps: report.steps, wall_time: report.wall_time });
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelComparison {
    pub time: f64,
    pub window: [f64; 2],
    pub tv_full: f64,
    pub tv_mild: f64,
    /// `tv_mild / tv_full`, `None` when both are zero to round-off.
    pub ratio: Option<f64>,
    pub degenerate: bool,
}

/// Runs the full and mild-bottom models on the same mesh and degree and
/// compares the total variation of `eta` over `window` at the final time.
pub fn compare_models(scenario: &Scenario, overrides: &RunOverrides, window: [f64; 2]) -> Result<ModelComparison> {
    if scenario.dimension() != 1 {
        return Err(Error::InvalidScenario("model comparison is one-dimensional".into()));
    }
    let tv = |model| -> Result<(f64, f64)> {
        let o = RunOverrides { model: Some(model), ..overrides.clone() };
        let mut s = scenario.clone();
        s.output = super::OutputCadence { gauge_every: 0, energy_every: 0, residual_every: 0, snapshot_times: vec![] };
        s.gauges.clear();
        let r = run(&s, &o)?;
        let eta: Vec<f64> = r
            .simulation
            .profile(0.0)?
            .into_iter()
            .filter(|p| p[0] >= window[0] && p[0] <= window[1])
            .map(|p| p[1])
            .collect();
        Ok((total_variation(&eta), r.simulation.time()))
    };
    let (tv_full, time) = tv(ModelVariant::FullSgn)?;
    let (tv_mild, _) = tv(ModelVariant::MildBottom)?;
    let floor = 1e-12 * scenario.still_depth;
    let degenerate = tv_full <= floor && tv_mild <= floor;
    let ratio = (!degenerate && tv_full > 0.0).then(|| tv_mild / tv_full);
    Ok(ModelComparison { time, window, tv_full, tv_mild, ratio, degenerate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::builtin_scenario;

    #[test]
    fn orders_flag_identical_meshes() {
        assert!(order(1e-3, 1e-4, 10, 10).is_none());
        assert!(order(1e-3, 0.0, 10, 20).is_none());
        assert!((order(1.0, 0.25, 10, 20).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn first_order_limit() {
        let mut s = builtin_scenario("soliton-flat").unwrap();
        s.t_end = 0.5;
        let t = convergence_study(&s, 0, &[400, 800]).unwrap();
        let o = t.rows[1].orders[0].unwrap();
        assert!(o > 0.6 && o < 1.3, "{o}");
    }

    #[test]
    fn repeated_mesh_is_flagged() {
        let mut s = builtin_scenario("soliton-flat").unwrap();
        s.t_end = 0.05;
        let t = convergence_study(&s, 1, &[30, 30]).unwrap();
        assert!(t.failure.is_none(), "{:?}", t.failure);
        assert!(t.has_undefined_orders());
        assert!(t.to_csv().contains("undefined"));
    }

    #[test]
    fn rest_comparison_is_degenerate() {
        let mut s = builtin_scenario("soliton-step").unwrap();
        s.initial = InitialCondition::Rest;
        s.cells = [66, 1];
        s.t_end = 0.1;
        let c = compare_models(&s, &RunOverrides::default(), TV_WINDOW).unwrap();
        assert!(c.degenerate);
        assert!(c.ratio.is_none());
    }

    #[test]
    fn non_soliton_base_is_rejected() {
        let s = builtin_scenario("submerged-bar").unwrap();
        assert!(convergence_study(&s, 3, &[10, 20]).is_err());
    }
}
