//! Scenario files, parameter sweeps and deterministic output.

mod config;
mod emit;
mod sweep;

use std::path::PathBuf;

pub use config::{
    default_time_span, parse_config, ConfigDraft, ConfigError, Format, Issue, Mode, Origin, OutputSpec, Physics,
    ScenarioConfig, SectorSpec, Setting, SweepSpec, ThetaSpec, DEFAULT_OMEGAS, DEFAULT_POINTS, DEFAULT_SECTOR,
    DEFAULT_SIN2_THETA,
};
pub use emit::{emit, write_output};
pub use sweep::{
    grid, run_sweep, Cell, SweepOutcome, SweepTable, COMPARE_COLUMNS, QFT_COLUMNS, QM_COLUMNS, VERIFY_COLUMNS,
};

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Domain(#[from] crate::Error),
    #[error("sweep produced no rows")]
    EmptySweep,
    #[error("non-finite value in column `{column}`, row {row}")]
    NonFinite { column: String, row: usize },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("serialization failed: {0}")]
    Serialize(String),
}

/// Runs a scenario and serializes it in the configured format.
pub fn render(cfg: &ScenarioConfig) -> Result<(SweepOutcome, Vec<u8>), ScenarioError> {
    let outcome = run_sweep(cfg)?;
    let bytes = emit(&outcome.table, cfg.output.format)?;
    Ok((outcome, bytes))
}
