//! Learning human-readable traffic-sign rules with inductive logic
//! programming, plus the synthetic sign imagery and feature extraction
//! used to evaluate them under adversarial perturbation.

pub mod logic;
pub mod lptext;
pub mod factext;
pub mod harness;
pub mod mdie;
pub mod mil;
pub mod scene;

pub use logic::{Atom, Clause, ExampleSet, Program, Substitution, Term};
