use std::path::{Path, PathBuf};

use super::config::{OutputToggles, RunConfig};
use super::csvio::write_table;
use crate::error::{Error, Result};
use crate::scenarios::{ConvergenceTable, InitialCondition, RunReport};
use crate::soliton::{integrate_profile, SolitonParams};

/// Paths written by [`write_report`], in creation order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WrittenFiles {
    pub paths: Vec<PathBuf>,
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(d) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        ensure_dir(d)?;
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn snapshot_name(t: f64) -> String {
    format!("snapshot_t{t:09.4}.csv")
}

/// Writes every enabled artifact of a finished run into `config.output_dir`
/// together with `manifest.ini` and `summary.txt`.
pub fn write_report(config: &RunConfig, report: &RunReport) -> Result<WrittenFiles> {
    let dir = &config.output_dir;
    ensure_dir(dir)?;
    let mut out = WrittenFiles::default();
    let mut put = |name: &str, f: &mut dyn FnMut(&Path) -> Result<()>| -> Result<()> {
        let p = dir.join(name);
        f(&p)?;
        out.paths.push(p);
        Ok(())
    };
    let o: OutputToggles = config.outputs;

    put("manifest.ini", &mut |p| write_text(p, &config.manifest()?))?;

    if o.gauges && !report.gauges.is_empty() {
        put("gauges.csv", &mut |p| {
            let mut header = vec!["t".to_string()];
            for g in &report.gauges {
                header.push(format!("{}_eta", g.spec.name));
                header.push(format!("{}_AH", g.spec.name));
            }
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let rows = (0..report.gauges[0].len()).map(|k| {
                let mut row = vec![report.gauges[0].times[k]];
                for g in &report.gauges {
                    row.push(g.eta[k]);
                    row.push(g.a_over_h[k]);
                }
                row
            });
            write_table(p, &header, rows)
        })?;
    }
    if o.energy && !report.energy.is_empty() {
        put("energy.csv", &mut |p| {
            write_table(p, &["t", "E_total", "mass"], report.energy.iter().map(|e| vec![e.time, e.energy, e.mass]))
        })?;
    }
    if o.residuals && !report.residuals.is_empty() {
        put("residuals.csv", &mut |p| {
            write_table(
                p,
                &["t", "sigma_residual", "w_residual"],
                report.residuals.iter().map(|r| vec![r.time, r.sigma, r.w]),
            )
        })?;
    }
    if o.snapshots {
        for snap in &report.snapshots {
            put(&snapshot_name(snap.time), &mut |p| match &snap.field {
                Some(field) => write_table(p, &["x", "y", "h", "eta"], field.iter().map(|r| r.to_vec())),
                None => write_table(p, &["x", "eta"], snap.profile.iter().map(|r| r.to_vec())),
            })?;
        }
    }
    if o.profile {
        if let InitialCondition::Soliton { amplitude, .. } = report.scenario.initial {
            let s = &report.scenario;
            let params = SolitonParams::new(s.still_depth, amplitude, s.params.g, s.params.c);
            put("soliton_profile.csv", &mut |p| write_soliton_profile(&params, p))?;
        }
    }
    put("summary.txt", &mut |p| write_text(p, &summary(report)))?;
    Ok(out)
}

fn summary(r: &RunReport) -> String {
    let l = &r.ledger;
    let s = &r.scenario;
    let mut t = String::new();
    t.push_str(&format!("scenario        {}\n", s.name));
    t.push_str(&format!("model           {}\n", s.model.name()));
    t.push_str(&format!("degree          {}\n", s.degree));
    t.push_str(&format!("cells           {} x {}\n", s.cells[0], s.cells[1]));
    t.push_str(&format!("final time      {:.16e}\n", r.simulation.time()));
    t.push_str(&format!("steps           {}\n", r.steps));
    t.push_str(&format!("wall time [s]   {:.3}\n", r.wall_time.as_secs_f64()));
    t.push_str(&format!("mass            {:.16e} -> {:.16e}\n", l.initial_mass, l.final_mass));
    t.push_str(&format!("mass drift      {:.3e}\n", l.mass_drift));
    if let Some(b) = l.mass_balance {
        t.push_str(&format!("mass balance    {b:.3e}\n"));
    }
    t.push_str(&format!("energy          {:.16e} -> {:.16e}\n", l.initial_energy, l.final_energy));
    t.push_str(&format!("energy drift    {:.3e}\n", l.energy_drift));
    t.push_str(&format!("max dE/E0 step  {:.3e}\n", l.max_energy_increase));
    for g in &r.gauges {
        if let Some((time, a)) = g.peak() {
            t.push_str(&format!("gauge {:<9} peak A/H {a:.6} at t = {time:.4}\n", g.spec.name));
        }
    }
    t
}

/// Samples the soliton profile and writes `zeta, h, u, w, sigma, p, p_b`.
pub fn write_soliton_profile(params: &SolitonParams, path: &Path) -> Result<()> {
    integrate_profile(params)?.export_csv(path)
}

pub fn write_convergence(table: &ConvergenceTable, path: &Path) -> Result<()> {
    write_text(path, &table.to_csv())
}
