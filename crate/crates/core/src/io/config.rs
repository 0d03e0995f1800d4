//! Flat `key = value` configuration with `[section]` headers.
//!
//! Keys are addressed as `section.key`; keys before any header belong to
//! `run`. Command-line flags are translated into the same key space, so the
//! precedence flags > file > scenario defaults is a plain map merge.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::boundary::TargetSeries;
use crate::error::{Error, Result};
use crate::model::ModelVariant;
use crate::scenarios::{builtin_scenario, RunOverrides, Scenario, BUILTIN_NAMES};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "SGN_OUTPUT_DIR";

const KNOWN_KEYS: [&str; 18] = [
    "run.scenario",
    "mesh.cells",
    "mesh.cells_y",
    "mesh.degree",
    "physics.c",
    "physics.model",
    "scheme.cfl",
    "time.t_end",
    "time.snapshots",
    "output.dir",
    "output.snapshots",
    "output.gauges",
    "output.energy",
    "output.profile",
    "inflow.file",
    "inflow.shift",
    "inflow.align",
    "output.residuals",
];

/// Parsed key/value pairs with the line each came from.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigMap {
    entries: BTreeMap<String, (String, usize)>,
}

impl ConfigMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a value given on the command line (line 0). Later flags
    /// replace earlier ones.
    pub fn set(&mut self, key: &str, value: impl ToString) -> Result<()> {
        check_key(key)?;
        self.entries.insert(key.to_string(), (value.to_string(), 0));
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries of `over` replace those of `self`.
    pub fn merged_with(&self, over: &ConfigMap) -> ConfigMap {
        let mut out = self.clone();
        for (k, v) in &over.entries {
            out.entries.insert(k.clone(), v.clone());
        }
        out
    }
}

fn suggestion(key: &str) -> String {
    let best = KNOWN_KEYS
        .iter()
        .map(|k| (strsim::jaro_winkler(key, k), *k))
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .filter(|(score, _)| *score > 0.7);
    match best {
        Some((_, k)) => format!("; did you mean '{k}'?"),
        None => String::new(),
    }
}

fn check_key(key: &str) -> Result<()> {
    if KNOWN_KEYS.contains(&key) {
        Ok(())
    } else {
        Err(Error::Config(format!("unknown key '{key}'{}", suggestion(key))))
    }
}

/// Parses the configuration text. Duplicate keys are a conflict.
pub fn parse_config_str(text: &str) -> Result<ConfigMap> {
    let mut map = ConfigMap::new();
    let mut section = "run".to_string();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split(['#', ';']).next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .map(str::trim)
                .filter(|n| !n.is_empty() && !n.contains(char::is_whitespace))
                .ok_or_else(|| Error::Config(format!("line {line_no}: malformed section header '{line}'")))?;
            section = name.to_ascii_lowercase();
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {line_no}: expected 'key = value', got '{line}'")))?;
        let k = k.trim().to_ascii_lowercase();
        if k.is_empty() {
            return Err(Error::Config(format!("line {line_no}: empty key")));
        }
        let key = format!("{section}.{k}");
        check_key(&key).map_err(|e| Error::Config(format!("line {line_no}: {}", strip_prefix(&e))))?;
        if let Some((_, first)) = map.entries.get(&key) {
            return Err(Error::Config(format!("line {line_no}: key '{key}' conflicts with line {first}")));
        }
        map.entries.insert(key, (v.trim().to_string(), line_no));
    }
    Ok(map)
}

fn strip_prefix(e: &Error) -> String {
    match e {
        Error::Config(m) => m.clone(),
        other => other.to_string(),
    }
}

pub fn read_config(path: &Path) -> Result<ConfigMap> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_str(&text).map_err(|e| Error::Config(format!("{}: {}", path.display(), strip_prefix(&e))))
}

/// Which artifacts a run writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutputToggles {
    pub snapshots: bool,
    pub gauges: bool,
    pub energy: bool,
    pub residuals: bool,
    /// Soliton profile table, when the initial data is a soliton.
    pub profile: bool,
}

impl Default for OutputToggles {
    fn default() -> Self {
        Self { snapshots: true, gauges: true, energy: true, residuals: true, profile: false }
    }
}

/// A fully resolved run request.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scenario_name: String,
    pub overrides: RunOverrides,
    pub output_dir: PathBuf,
    pub outputs: OutputToggles,
    pub inflow_file: Option<PathBuf>,
    /// Shift the inflow series so its first crest lands at `t = 0`.
    pub inflow_align: bool,
}

fn parse_num<T: std::str::FromStr>(map: &ConfigMap, key: &str) -> Result<Option<T>> {
    map.get(key)
        .map(|v| v.parse::<T>().map_err(|_| Error::Config(format!("'{key}': cannot parse '{v}'"))))
        .transpose()
}

fn parse_bool(map: &ConfigMap, key: &str) -> Result<Option<bool>> {
    map.get(key)
        .map(|v| match v.to_ascii_lowercase().as_str() {
            "true" | "yes" | "on" | "1" => Ok(true),
            "false" | "no" | "off" | "0" => Ok(false),
            _ => Err(Error::Config(format!("'{key}': expected a boolean, got '{v}'"))),
        })
        .transpose()
}

/// Comma-separated list of numbers; an empty value is an empty list.
pub fn parse_list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|_| Error::Config(format!("'{key}': cannot parse list entry '{s}'"))))
        .collect()
}

fn unknown_scenario(name: &str) -> Error {
    let close = BUILTIN_NAMES
        .iter()
        .map(|n| (strsim::levenshtein(name, n), *n))
        .min()
        .filter(|(d, _)| *d <= 3)
        .map(|(_, n)| format!(" (did you mean '{n}'?)"))
        .unwrap_or_default();
    Error::UnknownScenario { name: name.to_string(), available: format!("{}{close}", BUILTIN_NAMES.join(", ")) }
}

impl RunConfig {
    /// Resolves `file` and `flags` (which take precedence).
    pub fn resolve(file: Option<&ConfigMap>, flags: &ConfigMap) -> Result<RunConfig> {
        let map = file.cloned().unwrap_or_default().merged_with(flags);
        let scenario_name = map
            .get("run.scenario")
            .ok_or_else(|| Error::Config("no scenario given (set 'scenario' or pass --scenario)".into()))?
            .to_string();
        if !BUILTIN_NAMES.contains(&scenario_name.as_str()) {
            return Err(unknown_scenario(&scenario_name));
        }
        let model = map.get("physics.model").map(ModelVariant::parse).transpose()?;
        let snapshot_times = map.get("time.snapshots").map(|v| parse_list::<f64>("time.snapshots", v)).transpose()?;
        let inflow_file = map.get("inflow.file").filter(|v| !v.is_empty()).map(PathBuf::from);
        let inflow_align = parse_bool(&map, "inflow.align")?.unwrap_or(false);
        let inflow_shift: Option<f64> = parse_num(&map, "inflow.shift")?;
        if inflow_align && inflow_shift.is_some() {
            return Err(Error::Config("'inflow.align' and 'inflow.shift' conflict; give one".into()));
        }
        let inflow = match &inflow_file {
            Some(p) => {
                let series = TargetSeries::from_csv(p)?;
                Some(if inflow_align {
                    let (t, a) = crate::io::read_two_columns(p)?;
                    let samples: Vec<(f64, f64)> = t.into_iter().zip(a).collect();
                    series.aligned_to_first_crest(&samples)
                } else {
                    series
                })
            }
            None => None,
        };
        let overrides = RunOverrides {
            cells_x: parse_num(&map, "mesh.cells")?,
            cells_y: parse_num(&map, "mesh.cells_y")?,
            degree: parse_num(&map, "mesh.degree")?,
            c: parse_num(&map, "physics.c")?,
            cfl: parse_num(&map, "scheme.cfl")?,
            t_end: parse_num(&map, "time.t_end")?,
            model,
            inflow,
            inflow_shift,
            snapshot_times,
        };
        let output_dir = match map.get("output.dir") {
            Some(d) => PathBuf::from(d),
            None => std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("output")),
        };
        let d = OutputToggles::default();
        let outputs = OutputToggles {
            snapshots: parse_bool(&map, "output.snapshots")?.unwrap_or(d.snapshots),
            gauges: parse_bool(&map, "output.gauges")?.unwrap_or(d.gauges),
            energy: parse_bool(&map, "output.energy")?.unwrap_or(d.energy),
            residuals: parse_bool(&map, "output.residuals")?.unwrap_or(d.residuals),
            profile: parse_bool(&map, "output.profile")?.unwrap_or(d.profile),
        };
        // catch bad overrides before any work is done
        builtin_scenario(&scenario_name)?.with_overrides(&overrides)?;
        Ok(RunConfig { scenario_name, overrides, output_dir, outputs, inflow_file, inflow_align })
    }

    /// The scenario with every override applied.
    pub fn scenario(&self) -> Result<Scenario> {
        builtin_scenario(&self.scenario_name)?.with_overrides(&self.overrides)
    }

    /// Manifest text listing every resolved value. Feeding it back through
    /// [`parse_config_str`] and [`RunConfig::resolve`] reproduces the run.
    pub fn manifest(&self) -> Result<String> {
        let s = self.scenario()?;
        let f = |v: f64| format!("{v:.16e}");
        let b = |v: bool| if v { "true" } else { "false" };
        let mut out = String::new();
        out.push_str("# resolved run parameters\n");
        out.push_str(&format!("[run]\nscenario = {}\n\n", s.name));
        out.push_str(&format!("[mesh]\ncells = {}\n", s.cells[0]));
        if s.dimension() == 2 {
            out.push_str(&format!("cells_y = {}\n", s.cells[1]));
        }
        out.push_str(&format!("degree = {}\n\n", s.degree));
        out.push_str(&format!("[physics]\nc = {}\nmodel = {}\n\n", f(s.params.c), s.model.name()));
        out.push_str(&format!("[scheme]\ncfl = {}\n\n", f(s.scheme.cfl)));
        let snaps: Vec<String> = s.output.snapshot_times.iter().map(|&t| f(t)).collect();
        out.push_str(&format!("[time]\nt_end = {}\nsnapshots = {}\n\n", f(s.t_end), snaps.join(", ")));
        let o = &self.outputs;
        out.push_str(&format!(
            "[output]\ndir = {}\nsnapshots = {}\ngauges = {}\nenergy = {}\nresiduals = {}\nprofile = {}\n",
            self.output_dir.display(),
            b(o.snapshots),
            b(o.gauges),
            b(o.energy),
            b(o.residuals),
            b(o.profile)
        ));
        if let Some(p) = &self.inflow_file {
            out.push_str(&format!("\n[inflow]\nfile = {}\n", p.display()));
            if self.inflow_align {
                out.push_str("align = true\n");
            } else if let Some(shift) = self.overrides.inflow_shift {
                out.push_str(&format!("shift = {}\n", f(shift)));
            }
        } else if let Some(shift) = self.overrides.inflow_shift {
            out.push_str(&format!("\n[inflow]\nshift = {}\n", f(shift)));
        }
        Ok(out)
    }
}
