//! Configuration parsing, CSV emission and run manifests.

mod config;
mod csvio;
mod emit;

pub use config::{parse_config_str, parse_list, read_config, ConfigMap, OutputToggles, RunConfig, OUTPUT_DIR_ENV};
pub use csvio::{read_two_columns, write_table};
pub use emit::{write_convergence, write_report, write_soliton_profile, WrittenFiles};
