//! Named constructions the runner can build. Each one declares its
//! parameter schema and turns resolved parameters into a report.

mod blocks;
mod commutants;
mod duals;
mod shifts;

pub use blocks::{four_block_dual_setup, four_block_pair};
pub use commutants::resolution_defect;
pub use duals::simultaneous_setup;

use isoflow_core::numlin::Tolerances;
use isoflow_core::{Error, Report};

use crate::error::CliError;
use crate::params::{ParamSpec, Params};

/// Why a construction produced no report.
#[derive(Debug)]
pub enum Failure {
    Config(CliError),
    Core(Error),
}

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        Failure::Config(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

pub trait Construction: Send + Sync {
    fn name(&self) -> &'static str;
    /// The result this construction exercises.
    fn anchor(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn params(&self) -> &'static [ParamSpec];
    fn run(&self, params: &Params, tol: &Tolerances) -> Result<Report, Failure>;
}

/// Registry of constructions, looked up by name, listed in registration
/// order.
pub struct Catalog {
    entries: Vec<Box<dyn Construction>>,
}

impl Catalog {
    pub fn empty() -> Self {
        Catalog { entries: Vec::new() }
    }

    pub fn standard() -> Self {
        let mut c = Catalog::empty();
        c.register(Box::new(shifts::HalflineShift));
        c.register(Box::new(shifts::Bishift));
        c.register(Box::new(shifts::ModifiedBishift));
        c.register(Box::new(blocks::FourBlockDc));
        c.register(Box::new(blocks::FourBlockDdc));
        c.register(Box::new(commutants::CommutantE));
        c.register(Box::new(commutants::CommutantMz));
        c.register(Box::new(shifts::Bcl));
        c.register(Box::new(duals::DualExample));
        c.register(Box::new(duals::DoubleDual));
        c.register(Box::new(duals::Simultaneous));
        c
    }

    /// Adds a construction; a later registration under an existing name
    /// replaces the earlier one in place.
    pub fn register(&mut self, c: Box<dyn Construction>) {
        match self.entries.iter().position(|e| e.name() == c.name()) {
            Some(i) => self.entries[i] = c,
            None => self.entries.push(c),
        }
    }

    pub fn get(&self, name: &str) -> Option<&dyn Construction> {
        self.entries.iter().find(|e| e.name() == name).map(|b| b.as_ref())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Construction> {
        self.entries.iter().map(|b| b.as_ref())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Default for Catalog {
    fn default() -> Self {
        Catalog::standard()
    }
}

/// Prefixes every check id of `report` with `prefix.`.
pub(crate) fn prefixed(prefix: &str, report: Report) -> Report {
    let mut out = Report::new();
    for mut e in report.entries {
        e.check_id = format!("{prefix}.{}", e.check_id);
        out.push(e);
    }
    out
}
