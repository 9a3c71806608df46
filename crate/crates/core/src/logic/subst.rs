use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::term::{Atom, Term, Var};

/// An idempotent substitution: no bound variable occurs in any binding's
/// right-hand side, and no variable is bound to itself.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<Var, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn get(&self, var: &Var) -> Option<&Term> {
        self.bindings.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.bindings.iter()
    }

    pub fn apply(&self, term: &Term) -> Term {
        term.map_vars(&mut |v| self.bindings.get(v).cloned().unwrap_or_else(|| Term::Var(v.clone())))
    }

    pub fn apply_atom(&self, atom: &Atom) -> Atom {
        Atom { pred: atom.pred.clone(), args: atom.args.iter().map(|t| self.apply(t)).collect() }
    }

    /// Builds a substitution from raw pairs, resolving chains so the result
    /// is idempotent. Returns `None` if the pairs are cyclic.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, Term)>) -> Option<Self> {
        let mut b = Bindings::new();
        for (v, t) in pairs {
            if !b.unify(&Term::Var(v), &t) {
                return None;
            }
        }
        Some(b.to_substitution())
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v} -> {t}")?;
        }
        f.write_str("}")
    }
}

/// Triangular binding store used during search. Bindings may chain through
/// other variables; `resolve` fully dereferences.
#[derive(Clone, Debug, Default)]
pub struct Bindings {
    map: HashMap<Var, Term>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn walk<'a>(&'a self, mut term: &'a Term) -> &'a Term {
        while let Term::Var(v) = term {
            match self.map.get(v) {
                Some(next) => term = next,
                None => break,
            }
        }
        term
    }

    pub fn resolve(&self, term: &Term) -> Term {
        match self.walk(term) {
            Term::Compound(name, args) => {
                Term::Compound(name.clone(), args.iter().map(|a| self.resolve(a)).collect())
            }
            other => other.clone(),
        }
    }

    pub fn resolve_atom(&self, atom: &Atom) -> Atom {
        Atom { pred: atom.pred.clone(), args: atom.args.iter().map(|t| self.resolve(t)).collect() }
    }

    fn occurs(&self, var: &Var, term: &Term) -> bool {
        match self.walk(term) {
            Term::Var(v) => v == var,
            Term::Const(_) => false,
            Term::Compound(_, args) => args.iter().any(|a| self.occurs(var, a)),
        }
    }

    /// Unifies two terms under the current bindings, with occurs check.
    /// On failure the store may hold partial bindings; callers discard it.
    pub fn unify(&mut self, a: &Term, b: &Term) -> bool {
        let a = self.walk(a).clone();
        let b = self.walk(b).clone();
        match (&a, &b) {
            (Term::Var(x), Term::Var(y)) if x == y => true,
            (Term::Var(x), other) | (other, Term::Var(x)) => {
                if self.occurs(x, other) {
                    return false;
                }
                self.map.insert(x.clone(), other.clone());
                true
            }
            (Term::Const(x), Term::Const(y)) => x == y,
            (Term::Compound(f, xs), Term::Compound(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.unify(x, y))
            }
            _ => false,
        }
    }

    pub fn unify_atoms(&mut self, a: &Atom, b: &Atom) -> bool {
        a.pred == b.pred
            && a.args.len() == b.args.len()
            && a.args.iter().zip(&b.args).all(|(x, y)| self.unify(x, y))
    }

    pub fn to_substitution(&self) -> Substitution {
        let mut bindings = BTreeMap::new();
        for v in self.map.keys() {
            let t = self.resolve(&Term::Var(v.clone()));
            if t != Term::Var(v.clone()) {
                bindings.insert(v.clone(), t);
            }
        }
        Substitution { bindings }
    }

    /// The fully resolved bindings of just the given variables.
    pub fn restrict(&self, vars: &[Var]) -> Substitution {
        let mut bindings = BTreeMap::new();
        for v in vars {
            let t = self.resolve(&Term::Var(v.clone()));
            if t != Term::Var(v.clone()) {
                bindings.insert(v.clone(), t);
            }
        }
        Substitution { bindings }
    }
}

/// Most general unifier of two terms, if one exists.
pub fn unify(a: &Term, b: &Term) -> Option<Substitution> {
    let mut bindings = Bindings::new();
    bindings.unify(a, b).then(|| bindings.to_substitution())
}

pub fn unify_atoms(a: &Atom, b: &Atom) -> Option<Substitution> {
    let mut bindings = Bindings::new();
    bindings.unify_atoms(a, b).then(|| bindings.to_substitution())
}

/// True when `a` and `b` differ only by a bijective renaming of variables.
pub fn is_variant(a: &Atom, b: &Atom) -> bool {
    if a.pred != b.pred || a.args.len() != b.args.len() {
        return false;
    }
    let mut fwd: HashMap<&Var, &Var> = HashMap::new();
    let mut bwd: HashMap<&Var, &Var> = HashMap::new();
    a.args.iter().zip(&b.args).all(|(x, y)| variant_terms(x, y, &mut fwd, &mut bwd))
}

fn variant_terms<'a>(
    x: &'a Term,
    y: &'a Term,
    fwd: &mut HashMap<&'a Var, &'a Var>,
    bwd: &mut HashMap<&'a Var, &'a Var>,
) -> bool {
    match (x, y) {
        (Term::Var(u), Term::Var(v)) => {
            let f = *fwd.entry(u).or_insert(v);
            let b = *bwd.entry(v).or_insert(u);
            f == v && b == u
        }
        (Term::Const(c), Term::Const(d)) => c == d,
        (Term::Compound(f, xs), Term::Compound(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(a, b)| variant_terms(a, b, fwd, bwd))
        }
        _ => false,
    }
}
