use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Interned-ish symbol. Cheap to clone, compared by content.
pub type Sym = Arc<str>;

pub fn sym(s: &str) -> Sym {
    Arc::from(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Const {
    Sym(Sym),
    Int(i64),
}

/// A logic variable. `gen` is zero for variables written in source text and
/// a fresh positive number for renamed copies produced during proof search.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub name: Sym,
    pub gen: u32,
}

impl Var {
    pub fn new(name: &str) -> Self {
        Var { name: sym(name), gen: 0 }
    }

    pub fn renamed(&self, gen: u32) -> Self {
        Var { name: self.name.clone(), gen }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    Const(Const),
    /// Functor applied to one or more arguments; arity is part of identity.
    Compound(Sym, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Var::new(name))
    }

    pub fn sym(name: &str) -> Term {
        Term::Const(Const::Sym(sym(name)))
    }

    pub fn int(value: i64) -> Term {
        Term::Const(Const::Int(value))
    }

    /// Builds a compound term. Panics on an empty argument list, since
    /// zero-arity compounds are represented as constants.
    pub fn compound(functor: &str, args: Vec<Term>) -> Term {
        assert!(!args.is_empty(), "compound terms need at least one argument");
        Term::Compound(sym(functor), args)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::Compound(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn as_const(&self) -> Option<&Const> {
        match self {
            Term::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<Var>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Const(_) => {}
            Term::Compound(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn map_vars(&self, f: &mut impl FnMut(&Var) -> Term) -> Term {
        match self {
            Term::Var(v) => f(v),
            Term::Const(_) => self.clone(),
            Term::Compound(name, args) => {
                Term::Compound(name.clone(), args.iter().map(|a| a.map_vars(f)).collect())
            }
        }
    }

    fn depth(&self) -> usize {
        match self {
            Term::Compound(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
            _ => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub pred: Sym,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: &str, args: Vec<Term>) -> Self {
        Atom { pred: sym(pred), args }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn key(&self) -> (Sym, usize) {
        (self.pred.clone(), self.args.len())
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.args.iter().for_each(|a| a.collect_vars(&mut out));
        out
    }

    pub fn map_vars(&self, f: &mut impl FnMut(&Var) -> Term) -> Atom {
        Atom { pred: self.pred.clone(), args: self.args.iter().map(|a| a.map_vars(f)).collect() }
    }

    pub fn max_term_depth(&self) -> usize {
        self.args.iter().map(Term::depth).max().unwrap_or(0)
    }
}

/// A definite clause: one head atom and a (possibly empty) conjunctive body.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    pub head: Atom,
    pub body: Vec<Atom>,
}

impl Clause {
    pub fn new(head: Atom, body: Vec<Atom>) -> Self {
        Clause { head, body }
    }

    pub fn fact(head: Atom) -> Self {
        Clause { head, body: Vec::new() }
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty()
    }

    pub fn is_ground_fact(&self) -> bool {
        self.body.is_empty() && self.head.is_ground()
    }

    /// Variables in order of first occurrence, head first.
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        for atom in std::iter::once(&self.head).chain(&self.body) {
            atom.args.iter().for_each(|a| a.collect_vars(&mut out));
        }
        out
    }

    pub fn map_vars(&self, f: &mut impl FnMut(&Var) -> Term) -> Clause {
        Clause {
            head: self.head.map_vars(f),
            body: self.body.iter().map(|a| a.map_vars(f)).collect(),
        }
    }

    /// Renames every variable to `A`, `B`, ... in order of first occurrence.
    /// Two clauses are alpha-equivalent iff their canonical forms are equal.
    pub fn canonical(&self) -> Clause {
        let vars = self.vars();
        self.map_vars(&mut |v| {
            let idx = vars.iter().position(|w| w == v).unwrap();
            Term::var(&canonical_var_name(idx))
        })
    }

    pub fn predicates(&self) -> BTreeSet<(Sym, usize)> {
        std::iter::once(&self.head).chain(&self.body).map(Atom::key).collect()
    }
}

pub(crate) fn canonical_var_name(idx: usize) -> String {
    let letter = (b'A' + (idx % 26) as u8) as char;
    if idx < 26 {
        letter.to_string()
    } else {
        format!("{}{}", letter, idx / 26)
    }
}

/// Labelled positive and negative examples, all ground.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExampleSet {
    pub positives: Vec<Atom>,
    pub negatives: Vec<Atom>,
}

impl ExampleSet {
    pub fn new(positives: Vec<Atom>, negatives: Vec<Atom>) -> Self {
        ExampleSet { positives, negatives }
    }

    pub fn is_empty(&self) -> bool {
        self.positives.is_empty() && self.negatives.is_empty()
    }

    pub fn len(&self) -> usize {
        self.positives.len() + self.negatives.len()
    }

    pub fn all_ground(&self) -> bool {
        self.positives.iter().chain(&self.negatives).all(Atom::is_ground)
    }

    /// True when some atom is labelled both positive and negative.
    pub fn is_contradictory(&self) -> bool {
        self.positives.iter().any(|p| self.negatives.contains(p))
    }
}

impl fmt::Display for Const {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Const::Sym(s) => f.write_str(s),
            Const::Int(i) => write!(f, "{i}"),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gen == 0 {
            f.write_str(&self.name)
        } else {
            write!(f, "{}_{}", self.name, self.gen)
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => v.fmt(f),
            Term::Const(c) => c.fmt(f),
            Term::Compound(name, args) => {
                write!(f, "{name}(")?;
                write_args(f, args)?;
                f.write_str(")")
            }
        }
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pred)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            write_args(f, &self.args)?;
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.body.is_empty() {
            f.write_str(" :- ")?;
            for (i, b) in self.body.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{b}")?;
            }
        }
        f.write_str(".")
    }
}
