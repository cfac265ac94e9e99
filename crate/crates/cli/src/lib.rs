//! Scenario runner for isoflow-core: reads a TOML configuration, builds the
//! named constructions from the catalog, runs their checks and renders a
//! deterministic text report.

pub mod catalog;
pub mod config;
pub mod error;
pub mod params;
pub mod render;

use isoflow_core::numlin::Tolerances;
use isoflow_core::{CheckEntry, Error, Report};

use catalog::{Catalog, Failure};
use config::ScenarioSpec;
pub use error::CliError;
use params::Params;

/// Exit status of the runner.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Pass = 0,
    CheckFailure = 1,
    Usage = 2,
}

#[derive(Clone, Debug)]
pub struct ScenarioOutcome {
    pub name: String,
    pub construction: String,
    pub params: Params,
    pub tolerances: Tolerances,
    pub report: Report,
}

/// Core errors that reflect bad parameters rather than a failed check.
fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidInput(_) | Error::DimensionMismatch(_) | Error::InvalidRegion(_) | Error::InvalidShift(_)
    )
}

fn aborted_entry(e: &Error) -> CheckEntry {
    let id = match e {
        Error::WindowTooSmall(_) => "window_too_small",
        Error::PreconditionFailed(_) => "precondition_failed",
        _ => "internal_inconsistency",
    };
    CheckEntry::new(id, f64::INFINITY, Vec::new(), false).with_note(e.to_string())
}

pub fn run_scenario(catalog: &Catalog, spec: &ScenarioSpec) -> Result<ScenarioOutcome, CliError> {
    let construction = catalog.get(&spec.construction).ok_or_else(|| {
        CliError::Config(format!("[{}]: unknown construction `{}`", spec.name, spec.construction))
    })?;
    let params = Params::resolve(&spec.name, construction.params(), &spec.params)?;
    let report = match construction.run(&params, &spec.tolerances) {
        Ok(r) => r,
        Err(Failure::Config(e)) => return Err(e),
        Err(Failure::Core(e)) if is_input_error(&e) => {
            return Err(CliError::Config(format!("[{}]: {e}", spec.name)));
        }
        Err(Failure::Core(e)) => {
            let mut r = Report::new();
            r.push(aborted_entry(&e));
            r
        }
    };
    Ok(ScenarioOutcome {
        name: spec.name.clone(),
        construction: spec.construction.clone(),
        params,
        tolerances: spec.tolerances,
        report,
    })
}

/// Parses and runs every scenario of `text` in order. `tol` replaces the
/// absolute residual tolerance of every scenario.
pub fn run_config(catalog: &Catalog, text: &str, tol: Option<f64>) -> Result<Vec<ScenarioOutcome>, CliError> {
    let mut specs = config::parse_config(text)?;
    if let Some(t) = tol {
        for s in &mut specs {
            s.tolerances.resid_abs = t;
            s.tolerances
                .validate()
                .map_err(|e| CliError::Config(format!("--tol: {e}")))?;
        }
    }
    specs.iter().map(|s| run_scenario(catalog, s)).collect()
}

pub fn exit_for(outcomes: &[ScenarioOutcome]) -> Exit {
    if outcomes.iter().all(|o| o.report.passed()) {
        Exit::Pass
    } else {
        Exit::CheckFailure
    }
}
