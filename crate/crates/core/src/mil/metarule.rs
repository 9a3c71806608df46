use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::logic::{sym, Atom, Clause, Sym, Term};

/// Predicate position of a metarule literal: a second-order variable
/// (`P`, `Q`, ...) or a fixed predicate symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PredSlot {
    Var(Sym),
    Fixed(Sym),
}

/// A literal template such as `Q(x,z)`; arguments are first-order variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MetaAtom {
    pub pred: PredSlot,
    pub args: Vec<Sym>,
}

/// A second-order clause template.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Metarule {
    pub name: Sym,
    pub head: MetaAtom,
    pub body: Vec<MetaAtom>,
    /// Optional explicit precedence pairs `(higher, lower)` over predicate
    /// variables. Empty means the learner's default ordering applies.
    pub order: Vec<(Sym, Sym)>,
}

impl Metarule {
    /// Second-order variables in order of first occurrence, head first.
    pub fn pred_vars(&self) -> Vec<Sym> {
        let mut out: Vec<Sym> = Vec::new();
        for a in std::iter::once(&self.head).chain(&self.body) {
            if let PredSlot::Var(v) = &a.pred {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
        }
        out
    }

    pub fn first_order_vars(&self) -> Vec<Sym> {
        let mut out: Vec<Sym> = Vec::new();
        for a in std::iter::once(&self.head).chain(&self.body) {
            for v in &a.args {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
        }
        out
    }

    /// True when the head's predicate variable reappears in the body.
    pub fn is_recursive(&self) -> bool {
        self.body.iter().any(|b| b.pred == self.head.pred)
    }
}

/// A metarule instantiation: the symbols bound to its predicate variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MetaSub {
    pub metarule: Sym,
    pub bindings: BTreeMap<Sym, Sym>,
}

impl MetaSub {
    pub fn new(metarule: &str, bindings: &[(&str, &str)]) -> Self {
        MetaSub { metarule: sym(metarule), bindings: bindings.iter().map(|(k, v)| (sym(k), sym(v))).collect() }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProjectError {
    #[error("metarule '{0}' is not in the metarule set")]
    UnknownMetarule(String),
    #[error("second-order variable {var} of metarule '{metarule}' is unbound")]
    UnboundSecondOrderVariable { metarule: String, var: String },
}

/// Upper-cased first-order variable name, so `x` becomes clause variable `X`.
fn clause_var(name: &str) -> Term {
    Term::var(&name.to_uppercase())
}

impl MetaSub {
    /// The clause obtained by substituting the bound symbols into `rule`.
    pub fn to_clause(&self, rule: &Metarule) -> Result<Clause, ProjectError> {
        let inst = |a: &MetaAtom| -> Result<Atom, ProjectError> {
            let pred = match &a.pred {
                PredSlot::Fixed(p) => p.clone(),
                PredSlot::Var(v) => self.bindings.get(v).cloned().ok_or_else(|| {
                    ProjectError::UnboundSecondOrderVariable { metarule: rule.name.to_string(), var: v.to_string() }
                })?,
            };
            Ok(Atom { pred, args: a.args.iter().map(|x| clause_var(x)).collect() })
        };
        Ok(Clause::new(inst(&rule.head)?, rule.body.iter().map(inst).collect::<Result<_, _>>()?))
    }
}

/// Turns metasubs into clauses, ordered by metarule name then bindings.
pub fn project(metasubs: &[MetaSub], metarules: &[Metarule]) -> Result<Vec<Clause>, ProjectError> {
    let mut sorted: Vec<&MetaSub> = metasubs.iter().collect();
    sorted.sort();
    sorted.dedup();
    sorted
        .into_iter()
        .map(|ms| {
            let rule = metarules
                .iter()
                .find(|m| m.name == ms.metarule)
                .ok_or_else(|| ProjectError::UnknownMetarule(ms.metarule.to_string()))?;
            ms.to_clause(rule)
        })
        .collect()
}

impl fmt::Display for PredSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredSlot::Var(v) | PredSlot::Fixed(v) => f.write_str(v),
        }
    }
}

impl fmt::Display for MetaAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.pred, self.args.join(","))
    }
}

impl fmt::Display for Metarule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name, self.head)?;
        if !self.body.is_empty() {
            f.write_str(" :- ")?;
            for (i, b) in self.body.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{b}")?;
            }
        }
        if !self.order.is_empty() {
            f.write_str(" | ")?;
            for (i, (hi, lo)) in self.order.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{hi} > {lo}")?;
            }
        }
        f.write_str(".")
    }
}

impl fmt::Display for MetaSub {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{", self.metarule)?;
        for (i, (k, v)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}->{v}")?;
        }
        f.write_str("}")
    }
}
