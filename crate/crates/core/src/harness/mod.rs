//! Exhaustive checks of the theorems, lemmas and worked examples on small
//! instances, reported as [`CheckReport`]s.

pub mod dictionary;
pub mod enumerate;
pub mod examples;
pub mod ribbon_checks;
pub mod theorems;

use serde_json::Value;
use thiserror::Error;

use crate::bridge::BridgeError;
use crate::delta::DeltaError;
use crate::mm::MmError;
use crate::report::CheckReport;
use crate::ribbon::RibbonError;

/// Frozen regression constants produced by the independent oracle.
pub const FIXTURE: &str = include_str!("../../tests/fixtures/regression.json");

pub fn fixture() -> Value {
    serde_json::from_str(FIXTURE).expect("fixture is valid JSON")
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("ground set of size {0} is beyond exhaustive enumeration; a sample budget is required")]
    NeedsSampleBudget(usize),
    #[error("{what} of {got} exceeds the bound {max}")]
    Bound { what: &'static str, max: usize, got: usize },
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error(transparent)]
    Delta(#[from] DeltaError),
    #[error(transparent)]
    Mm(#[from] MmError),
    #[error(transparent)]
    Bridge(#[from] BridgeError),
    #[error(transparent)]
    Ribbon(#[from] RibbonError),
}

/// Every check runnable by name.
pub const CHECK_NAMES: [&str; 12] = [
    "paper-q",
    "ribbon-counterexample",
    "chain-even",
    "chain-vf-safe",
    "splitter",
    "ribbon-compat",
    "ribbon-chain",
    "correspondence",
    "axioms",
    "lemmas",
    "matroid",
    "nontight-search",
];

/// Instance sizes for each family of checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    /// Delta-matroids fed through `Q₂`.
    pub q2: usize,
    /// Vf-safe delta-matroids fed through `Q₃`.
    pub q3: usize,
    pub matroid: usize,
    pub ribbon_vertices: usize,
    pub ribbon_edges: usize,
    pub nontight: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Self {
            q2: 4,
            q3: 3,
            matroid: 4,
            ribbon_vertices: 3,
            ribbon_edges: 3,
            nontight: 4,
        }
    }
}

impl Bounds {
    /// The same bound for every size.
    pub fn uniform(n: usize) -> Self {
        Self {
            q2: n,
            q3: n,
            matroid: n,
            ribbon_vertices: n,
            ribbon_edges: n,
            nontight: n,
        }
    }
}

/// Runs the named check.
pub fn run_check(name: &str, b: &Bounds) -> Result<CheckReport, HarnessError> {
    match name {
        "paper-q" => Ok(examples::run_paper_example()),
        "ribbon-counterexample" => Ok(examples::run_counterexample_ribbon()),
        "chain-even" => theorems::chain_even(b.q2),
        "chain-vf-safe" => theorems::chain_vf_safe(b.q3),
        "splitter" => theorems::splitter(b.q2, b.q3),
        "ribbon-compat" => ribbon_checks::ribbon_compat(b.ribbon_vertices, b.ribbon_edges),
        "ribbon-chain" => ribbon_checks::ribbon_chain(b.ribbon_vertices, b.ribbon_edges),
        "correspondence" => dictionary::correspondence(b.q2, b.q3),
        "axioms" => dictionary::axioms(b.q2, b.q3),
        "lemmas" => dictionary::lemmas(b.q2, b.q3),
        "matroid" => theorems::matroid_specializations(b.matroid),
        "nontight-search" => theorems::search_nontight_chain_violation(b.nontight, &fixture()),
        other => Err(HarnessError::UnknownCheck(other.to_string())),
    }
}
