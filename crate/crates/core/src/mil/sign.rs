//! Adapting the binary `traffic_sign(Sign, Class)` target to dyadic
//! metarules. Examples `traffic_sign(s, stop_sign)` are learned as
//! `stop_sign(s, stop)`, and the result is reconnected through
//! `traffic_sign(X, stop_sign) :- stop_sign(X, stop)`.

use super::engine::{mil_learn_outcome, Hypothesis, MILConfig, MilOutcome};
use super::metarule::Metarule;
use crate::logic::{sym, Atom, Bindings, Clause, Const, ExampleSet, Program, Renamer, Term};

pub const SIGN_TARGET: &str = "traffic_sign";

/// The legend keyword a class is anchored on: `stop_sign` gives `stop`.
pub fn class_keyword(class: &str) -> &str {
    class.strip_suffix("_sign").unwrap_or(class)
}

/// The class constant shared by all examples, when they are all
/// `traffic_sign(_, Class)` atoms for one class.
pub fn sign_class(examples: &ExampleSet) -> Option<String> {
    let mut class: Option<String> = None;
    for a in examples.positives.iter().chain(&examples.negatives) {
        if a.pred.as_ref() != SIGN_TARGET || a.args.len() != 2 {
            return None;
        }
        let Term::Const(Const::Sym(c)) = &a.args[1] else { return None };
        match &class {
            None => class = Some(c.to_string()),
            Some(k) if k.as_str() == c.as_ref() => {}
            Some(_) => return None,
        }
    }
    class
}

fn to_internal(atom: &Atom, class: &str) -> Atom {
    Atom::new(class, vec![atom.args[0].clone(), Term::sym(class_keyword(class))])
}

pub fn internal_examples(examples: &ExampleSet, class: &str) -> ExampleSet {
    ExampleSet::new(
        examples.positives.iter().map(|a| to_internal(a, class)).collect(),
        examples.negatives.iter().map(|a| to_internal(a, class)).collect(),
    )
}

pub fn bridge_clause(class: &str) -> Clause {
    Clause::new(
        Atom::new(SIGN_TARGET, vec![Term::var("X"), Term::sym(class)]),
        vec![Atom::new(class, vec![Term::var("X"), Term::sym(class_keyword(class))])],
    )
}

/// Rewrites `hypothesis` over the internal target into clauses for
/// `traffic_sign`. Internal clauses are unfolded into the bridge when none
/// is recursive; otherwise the bridge is kept alongside them.
pub fn unfold_bridge(hypothesis: &[Clause], class: &str) -> Vec<Clause> {
    let internal = sym(class);
    let recursive = hypothesis.iter().any(|c| c.body.iter().any(|b| b.pred == internal));
    let bridge = bridge_clause(class);
    if recursive {
        let mut out = vec![bridge];
        out.extend(hypothesis.iter().cloned());
        return out;
    }
    let (mut unfolded, mut rest) = (Vec::new(), Vec::new());
    for c in hypothesis {
        if c.head.pred != internal {
            rest.push(c.clone());
            continue;
        }
        let c = Renamer::new().rename_clause(c);
        let mut b = Bindings::new();
        if b.unify_atoms(&c.head, &bridge.body[0]) {
            let body = c.body.iter().map(|a| b.resolve_atom(a)).collect();
            unfolded.push(Clause::new(b.resolve_atom(&bridge.head), body).canonical());
        }
    }
    unfolded.append(&mut rest);
    unfolded
}

/// Learns a `traffic_sign(_, Class)` rule through the dyadic bridge. The
/// result's clauses are over `traffic_sign`; its metasubs are over the
/// internal target.
pub fn learn_sign_rule(bk: &Program, examples: &ExampleSet, metarules: &[Metarule], config: &MILConfig) -> MilOutcome {
    let Some(class) = sign_class(examples) else { return MilOutcome::NotFound };
    let internal = internal_examples(examples, &class);
    match mil_learn_outcome(bk, &internal, metarules, config) {
        MilOutcome::Found(h) => MilOutcome::Found(Hypothesis {
            clauses: unfold_bridge(&h.clauses, &class),
            metasubs: h.metasubs,
        }),
        other => other,
    }
}

/// The metarules used for the sign task.
pub const SIGN_METARULES: &str = "\
identify: P(x,y) :- Q(x,y).
inverse: P(x,y) :- Q(y,x).
precon: P(x,y) :- Q(x), R(x,y).
postcon: P(x,y) :- Q(x,y), R(y).
chain: P(x,y) :- Q(x,z), R(z,y).
recursion: P(x,y) :- Q(x,z), P(z,y).
";
