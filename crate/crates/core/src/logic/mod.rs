//! First-order definite clauses, unification with occurs check, and
//! depth-bounded SLD resolution.

mod program;
mod prove;
mod subst;
mod term;

pub use program::Program;
pub use prove::{covers, covers_with, prove, Answer, Prover, Renamer, Solutions, DEFAULT_DEPTH_BOUND};
pub use subst::{is_variant, unify, unify_atoms, Bindings, Substitution};
pub use term::{sym, Atom, Clause, Const, ExampleSet, Sym, Term, Var};
pub(crate) use term::canonical_var_name;
