use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sgn_core::error::{Error, Result};
use sgn_core::io::{
    parse_list, read_config, write_convergence, write_report, write_soliton_profile, ConfigMap, RunConfig,
    OUTPUT_DIR_ENV,
};
use sgn_core::scenarios::{builtin_scenario, compare_models, convergence_study, run, RunOverrides, BUILTIN_NAMES, TV_WINDOW};
use sgn_core::soliton::SolitonParams;

#[derive(Parser)]
#[command(name = "sgn", version, about = "ADER-DG solver for the hyperbolic Serre-Green-Naghdi equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its time series, snapshots and manifest.
    Run(RunArgs),
    /// Mesh refinement study on a soliton scenario.
    Convergence {
        #[arg(long, default_value = "soliton-flat")]
        scenario: String,
        #[arg(long, default_value_t = 3)]
        degree: usize,
        /// Comma-separated list of cell counts.
        #[arg(long, default_value = "80,100,120,140,160")]
        meshes: String,
        #[arg(long)]
        t_end: Option<f64>,
        /// CSV destination; printed to stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compare full and mild-bottom models by the total variation of the
    /// free surface over a window.
    CompareModels {
        #[arg(long, default_value = "soliton-step")]
        scenario: String,
        #[arg(long)]
        cells: Option<usize>,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = TV_WINDOW)]
        window: Vec<f64>,
    },
    /// Write the solitary-wave profile to CSV.
    ExportSoliton {
        #[arg(long = "H0", default_value_t = 1.0)]
        h0: f64,
        #[arg(long = "A", default_value_t = 0.2)]
        amplitude: f64,
        #[arg(long, default_value_t = 20.0)]
        c: f64,
        #[arg(long, default_value_t = 9.81)]
        g: f64,
        #[arg(long, default_value = "soliton_profile.csv")]
        output: PathBuf,
    },
    /// Print the built-in scenario names.
    ListScenarios,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    scenario: Option<String>,
    /// Configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    cells: Option<usize>,
    #[arg(long)]
    cells_y: Option<usize>,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    /// `full` or `mild`.
    #[arg(long)]
    model: Option<String>,
    /// Comma-separated snapshot times.
    #[arg(long)]
    snapshots: Option<String>,
    #[arg(long, help = format!("Output directory [default: ${OUTPUT_DIR_ENV} or ./output]"))]
    output: Option<PathBuf>,
    /// Two-column CSV (t, A*) driving the wavemaker zone.
    #[arg(long)]
    inflow: Option<PathBuf>,
    /// Time shift applied to the inflow series.
    #[arg(long, allow_hyphen_values = true)]
    inflow_shift: Option<f64>,
    /// Shift the inflow series so its first crest lands at t = 0.
    #[arg(long)]
    inflow_align: bool,
    #[arg(long)]
    no_snapshots: bool,
    #[arg(long)]
    no_gauges: bool,
    #[arg(long)]
    no_energy: bool,
    #[arg(long)]
    no_residuals: bool,
    /// Also write the initial soliton profile.
    #[arg(long)]
    export_profile: bool,
}

impl RunArgs {
    fn flags(&self) -> Result<ConfigMap> {
        let mut m = ConfigMap::new();
        let mut opt = |k: &str, v: Option<String>| -> Result<()> {
            match v {
                Some(v) => m.set(k, v),
                None => Ok(()),
            }
        };
        opt("run.scenario", self.scenario.clone())?;
        opt("mesh.cells", self.cells.map(|v| v.to_string()))?;
        opt("mesh.cells_y", self.cells_y.map(|v| v.to_string()))?;
        opt("mesh.degree", self.degree.map(|v| v.to_string()))?;
        opt("physics.c", self.c.map(|v| format!("{v:e}")))?;
        opt("physics.model", self.model.clone())?;
        opt("scheme.cfl", self.cfl.map(|v| format!("{v:e}")))?;
        opt("time.t_end", self.t_end.map(|v| format!("{v:e}")))?;
        opt("time.snapshots", self.snapshots.clone())?;
        opt("output.dir", self.output.as_ref().map(|p| p.display().to_string()))?;
        opt("inflow.file", self.inflow.as_ref().map(|p| p.display().to_string()))?;
        opt("inflow.shift", self.inflow_shift.map(|v| format!("{v:e}")))?;
        opt("inflow.align", self.inflow_align.then(|| "true".into()))?;
        opt("output.snapshots", self.no_snapshots.then(|| "false".into()))?;
        opt("output.gauges", self.no_gauges.then(|| "false".into()))?;
        opt("output.energy", self.no_energy.then(|| "false".into()))?;
        opt("output.residuals", self.no_residuals.then(|| "false".into()))?;
        opt("output.profile", self.export_profile.then(|| "true".into()))?;
        Ok(m)
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let file = args.config.as_deref().map(read_config).transpose()?;
            let cfg = RunConfig::resolve(file.as_ref(), &args.flags()?)?;
            let scenario = cfg.scenario()?;
            let report = run(&scenario, &cfg.overrides)?;
            let files = write_report(&cfg, &report)?;
            let l = &report.ledger;
            println!(
                "{}: t = {:.6}, {} steps, mass drift {:.2e}, energy drift {:.2e}",
                scenario.name,
                report.simulation.time(),
                report.steps,
                l.mass_drift,
                l.energy_drift
            );
            println!("wrote {} files to {}", files.paths.len(), cfg.output_dir.display());
        }
        Command::Convergence { scenario, degree, meshes, t_end, output } => {
            let meshes = parse_list::<usize>("meshes", &meshes)?;
            let base = builtin_scenario(&scenario)?.with_overrides(&RunOverrides { t_end, ..Default::default() })?;
            let table = convergence_study(&base, degree, &meshes)?;
            match &output {
                Some(p) => write_convergence(&table, p)?,
                None => print!("{}", table.to_csv()),
            }
            if let Some(f) = table.failure {
                return Err(Error::InvalidScenario(format!("convergence study aborted: {f}")));
            }
        }
        Command::CompareModels { scenario, cells, degree, t_end, window } => {
            let s = builtin_scenario(&scenario)?;
            let o = RunOverrides { cells_x: cells, degree, t_end, ..Default::default() };
            let cmp = compare_models(&s, &o, [window[0], window[1]])?;
            println!("t,TV_full,TV_mild,ratio");
            let ratio = cmp.ratio.map_or("undefined".to_string(), |r| format!("{r:.16e}"));
            println!("{:.16e},{:.16e},{:.16e},{ratio}", cmp.time, cmp.tv_full, cmp.tv_mild);
        }
        Command::ExportSoliton { h0, amplitude, c, g, output } => {
            let params = SolitonParams::new(h0, amplitude, g, c);
            params.validate()?;
            write_soliton_profile(&params, &output)?;
            println!("wrote {}", output.display());
        }
        Command::ListScenarios => {
            for name in BUILTIN_NAMES {
                println!("{name}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.to_string().replace('\n', " "));
            ExitCode::FAILURE
        }
    }
}
