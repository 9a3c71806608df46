//! Mode-directed inverse entailment: saturate a seed example into a bottom
//! clause, then search its subsets for the best consistent generalisation.

mod bottom;
mod modes;
mod search;

use std::time::Instant;

use thiserror::Error;

use crate::logic::{Atom, Clause, ExampleSet, Program, DEFAULT_DEPTH_BOUND};

pub use bottom::{saturate, BottomClause, BottomLiteral};
pub use modes::{ModeDecl, ModeKind, Placemarker, Polarity, Recall};
pub use search::{chain_valid, search_clause, Coverage, ScoredClause, SearchResult, TraceRecord};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MdieError {
    #[error("no head mode declared for {0}")]
    NoHeadMode(String),
    #[error("seed example {0} is not ground")]
    SeedNotGround(String),
    #[error("no clause covers a positive within the noise limit")]
    NoConsistentClause,
    #[error("search deadline passed")]
    TimedOut,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_body_literals: usize,
    /// Negatives a clause may cover and still be accepted.
    pub noise: usize,
    /// Search stops generating refinements after this many nodes.
    pub max_nodes: usize,
    pub variable_depth: usize,
    /// Cap on bottom clause body length.
    pub max_bottom_literals: usize,
    /// Step bound for coverage and saturation proofs.
    pub depth_bound: usize,
    pub deadline: Option<Instant>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_body_literals: 4,
            noise: 0,
            max_nodes: 5000,
            variable_depth: 2,
            max_bottom_literals: 64,
            depth_bound: DEFAULT_DEPTH_BOUND,
            deadline: None,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct CoverResult {
    pub clauses: Vec<Clause>,
    /// Positives no learned clause covers.
    pub uncovered: Vec<Atom>,
    pub trace: Vec<TraceRecord>,
    pub timed_out: bool,
}

/// Greedy set cover: take the first uncovered positive as seed, saturate,
/// search, keep the clause and drop the positives it covers. Seeds with no
/// acceptable clause are reported in `uncovered`.
pub fn cover_loop(bk: &Program, examples: &ExampleSet, modes: &[ModeDecl], config: &SearchConfig) -> CoverResult {
    let mut result = CoverResult::default();
    let mut remaining: Vec<Atom> = examples.positives.clone();
    let mut cov = Coverage::new(bk, config.depth_bound);
    while let Some(seed) = remaining.first().cloned() {
        let outcome = saturate(&seed, bk, modes, config).and_then(|bottom| {
            search_clause(&bottom, bk, &ExampleSet::new(remaining.clone(), examples.negatives.clone()), config)
        });
        match outcome {
            Ok(found) => {
                result.trace.extend(found.trace);
                let clause = found.best.clause;
                let before = remaining.len();
                remaining.retain(|e| !cov.covers(&clause, e));
                if remaining.first() == Some(&seed) {
                    remaining.remove(0);
                    result.uncovered.push(seed);
                }
                if remaining.len() < before {
                    result.clauses.push(clause);
                }
            }
            Err(MdieError::TimedOut) => {
                result.timed_out = true;
                return result;
            }
            Err(_) => {
                remaining.remove(0);
                result.uncovered.push(seed);
            }
        }
    }
    result
}
