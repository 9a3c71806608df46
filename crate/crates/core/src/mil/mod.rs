//! Meta-interpretive learning: hypotheses are built by instantiating
//! second-order metarules while proving the positive examples.

mod engine;
mod metarule;
pub mod sign;

pub use engine::{meta_prove, mil_learn, mil_learn_outcome, Hypothesis, MILConfig, MilOutcome};
pub use metarule::{project, MetaAtom, MetaSub, Metarule, PredSlot, ProjectError};
