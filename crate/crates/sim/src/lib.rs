//! Seeded parameter sweeps over the edge-resource auction, plus the
//! configuration and output formats shared with the `edge-auction` CLI.

pub mod config;
pub mod instance;
pub mod output;
pub mod sweep;

pub use config::{FlatConfig, Scenario};
pub use instance::{generate_instance, RNG_ALGORITHM};
pub use output::{emit_results, Format};
pub use sweep::{
    run_sweep, run_sweep_serial, GridMean, InstancePoint, SweepParam, SweepResult, SweepSpec,
};

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid sweep: {0}")]
    InvalidSpec(String),

    #[error("invalid configuration: {0}")]
    Config(#[from] edge_auction::Error),

    #[error("instance {instance_index} at {param} = {grid_value} failed: {source}")]
    Instance {
        param: &'static str,
        grid_value: f64,
        instance_index: usize,
        source: edge_auction::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
}

pub type Result<T, E = SimError> = std::result::Result<T, E>;
