//! Experiment plumbing: scenario files, single runs, sweeps and reports.

pub mod instances;
pub mod report;
pub mod run;
pub mod scenario;
pub mod sweep;

pub use report::{emit_report, emit_sweep, Format};
pub use run::{run_experiment, ReportRow, RunReport, Totals};
pub use scenario::{load_scenario, parse_scenario, save_scenario, ScenarioConfig, Traffic};
pub use sweep::{parse_grid, sweep, Grid, SweepOutcome, SweepPoint, SweepSummary};

use thiserror::Error;

use crate::error::Error;

/// Errors raised while loading or running scenarios, carrying enough context
/// to point at the offending file, line or grid point.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {error}")]
    Io { path: String, error: std::io::Error },

    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}{}: {field}: {error}", line.map(|l| format!(":{l}")).unwrap_or_default())]
    Invalid {
        path: String,
        line: Option<usize>,
        field: String,
        error: Error,
    },

    #[error("scenario {scenario:?}: {error}")]
    Run { scenario: String, error: Error },

    #[error("bad grid spec: {0}")]
    Grid(String),
}

impl HarnessError {
    /// The underlying model error, when there is one.
    pub fn model_error(&self) -> Option<&Error> {
        match self {
            HarnessError::Invalid { error, .. } | HarnessError::Run { error, .. } => Some(error),
            _ => None,
        }
    }
}
