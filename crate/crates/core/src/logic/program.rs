use std::collections::HashMap;

use super::term::{Atom, Clause, Sym, Term};

type PredKey = (Sym, usize);

/// An ordered clause store with a first-argument index over ground facts.
#[derive(Clone, Debug, Default)]
pub struct Program {
    clauses: Vec<Clause>,
    /// Non-fact clauses (and non-ground facts) per predicate, in program order.
    rules: HashMap<PredKey, Vec<usize>>,
    /// Ground facts per predicate, in program order.
    facts: HashMap<PredKey, Vec<usize>>,
    /// Ground facts keyed by (predicate, arity, first argument).
    fact_index: HashMap<(Sym, usize, Option<Term>), Vec<usize>>,
}

impl Program {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_clauses(clauses: impl IntoIterator<Item = Clause>) -> Self {
        let mut p = Program::new();
        for c in clauses {
            p.push(c);
        }
        p
    }

    pub fn push(&mut self, clause: Clause) {
        let idx = self.clauses.len();
        let key = clause.head.key();
        if clause.is_ground_fact() {
            self.facts.entry(key.clone()).or_default().push(idx);
            let first = clause.head.args.first().cloned();
            self.fact_index.entry((key.0, key.1, first)).or_default().push(idx);
        } else {
            self.rules.entry(key).or_default().push(idx);
        }
        self.clauses.push(clause);
    }

    pub fn extend(&mut self, clauses: impl IntoIterator<Item = Clause>) {
        for c in clauses {
            self.push(c);
        }
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Ground facts whose (predicate, arity, first argument) match.
    pub fn indexed_facts(&self, pred: &str, arity: usize, first: Option<&Term>) -> impl Iterator<Item = &Clause> {
        self.fact_index
            .get(&(Sym::from(pred), arity, first.cloned()))
            .into_iter()
            .flatten()
            .map(move |&i| &self.clauses[i])
    }

    /// Ground facts of a predicate in program order.
    pub fn facts_of(&self, pred: &str, arity: usize) -> impl Iterator<Item = &Atom> {
        self.facts
            .get(&(Sym::from(pred), arity))
            .into_iter()
            .flatten()
            .map(move |&i| &self.clauses[i].head)
    }

    /// Number of ground facts held in the first-argument index.
    pub fn indexed_fact_count(&self) -> usize {
        self.fact_index.values().map(Vec::len).sum()
    }

    /// Clauses that may resolve with a goal whose first argument (already
    /// dereferenced) is `first`, in program order.
    pub fn candidates(&self, pred: &Sym, arity: usize, first: Option<&Term>) -> Vec<&Clause> {
        let key = (pred.clone(), arity);
        let rules: &[usize] = self.rules.get(&key).map(Vec::as_slice).unwrap_or(&[]);
        let facts: &[usize] = match first {
            Some(t) if t.is_ground() => self
                .fact_index
                .get(&(pred.clone(), arity, Some(t.clone())))
                .map(Vec::as_slice)
                .unwrap_or(&[]),
            None if arity == 0 => {
                self.fact_index.get(&(pred.clone(), 0, None)).map(Vec::as_slice).unwrap_or(&[])
            }
            _ => self.facts.get(&key).map(Vec::as_slice).unwrap_or(&[]),
        };
        merge_sorted(rules, facts).into_iter().map(|i| &self.clauses[i]).collect()
    }

    /// Predicates in order of first appearance.
    pub fn predicates(&self) -> Vec<(Sym, usize)> {
        let mut out: Vec<(Sym, usize)> = Vec::new();
        for c in &self.clauses {
            let k = c.head.key();
            if !out.contains(&k) {
                out.push(k);
            }
        }
        out
    }
}

fn merge_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl FromIterator<Clause> for Program {
    fn from_iter<I: IntoIterator<Item = Clause>>(iter: I) -> Self {
        Program::from_clauses(iter)
    }
}
