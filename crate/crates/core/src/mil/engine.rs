use std::collections::BTreeSet;
use std::time::Instant;

use super::metarule::{project, MetaSub, Metarule, PredSlot};
use crate::logic::{sym, Atom, Bindings, Clause, ExampleSet, Program, Prover, Substitution, Sym, DEFAULT_DEPTH_BOUND};

#[derive(Clone, Debug)]
pub struct MILConfig {
    /// Largest hypothesis tried by iterative deepening.
    pub max_clauses: usize,
    /// Step bound for background proofs, and nesting bound for abductive
    /// proofs of target or invented goals.
    pub depth_bound: usize,
    pub enable_invention: bool,
    /// Invented predicates are named `<prefix>_1`, `<prefix>_2`, ...; the
    /// target predicate's name when `None`.
    pub invented_prefix: Option<String>,
    pub deadline: Option<Instant>,
}

impl Default for MILConfig {
    fn default() -> Self {
        MILConfig {
            max_clauses: 3,
            depth_bound: DEFAULT_DEPTH_BOUND,
            enable_invention: true,
            invented_prefix: None,
            deadline: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypothesis {
    pub metasubs: Vec<MetaSub>,
    pub clauses: Vec<Clause>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MilOutcome {
    Found(Hypothesis),
    NotFound,
    TimedOut,
}

type Store = Vec<MetaSub>;

/// Predicate symbols available to second-order variables, highest first:
/// the target, then invented predicates, then background predicates in
/// declaration order.
struct Signature {
    target: (Sym, usize),
    invented: Vec<Sym>,
    bk: Vec<(Sym, usize)>,
}

impl Signature {
    fn rank(&self, pred: &Sym) -> Option<usize> {
        if *pred == self.target.0 {
            return Some(0);
        }
        if let Some(i) = self.invented.iter().position(|p| p == pred) {
            return Some(1 + i);
        }
        self.bk.iter().position(|(p, _)| p == pred).map(|i| 1 + self.invented.len() + i)
    }

    fn is_meta(&self, pred: &Sym) -> bool {
        *pred == self.target.0 || self.invented.contains(pred)
    }
}

struct Learner<'a> {
    metarules: &'a [Metarule],
    prover: Prover<'a>,
    sig: Signature,
    config: &'a MILConfig,
    ticks: u64,
    timed_out: bool,
}

type Cont<'k, 'a> = &'k mut dyn FnMut(&mut Learner<'a>, Bindings, Store) -> bool;

impl<'a> Learner<'a> {
    fn new(bk: &'a Program, metarules: &'a [Metarule], target: (Sym, usize), config: &'a MILConfig) -> Self {
        let prefix = config.invented_prefix.clone().unwrap_or_else(|| target.0.to_string());
        let invented = if config.enable_invention {
            (1..config.max_clauses).map(|i| sym(&format!("{prefix}_{i}"))).collect()
        } else {
            Vec::new()
        };
        let bk_preds = bk.predicates().into_iter().filter(|(p, _)| *p != target.0).collect();
        Learner {
            metarules,
            prover: Prover::new(vec![bk]),
            sig: Signature { target, invented, bk: bk_preds },
            config,
            ticks: 0,
            timed_out: false,
        }
    }

    fn out_of_time(&mut self) -> bool {
        if self.timed_out {
            return true;
        }
        self.ticks += 1;
        if self.ticks % 256 == 0 {
            if let Some(d) = self.config.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                }
            }
        }
        self.timed_out
    }

    /// Proves `goals` left to right, calling `k` on each solution. Returns
    /// true as soon as `k` does.
    fn prove_conj(&mut self, goals: &[Atom], b: Bindings, store: Store, limit: usize, depth: usize, k: Cont<'_, 'a>) -> bool {
        let Some((first, rest)) = goals.split_first() else {
            return k(self, b, store);
        };
        let rest = rest.to_vec();
        let mut next = |me: &mut Learner<'a>, b: Bindings, store: Store| me.prove_conj(&rest, b, store, limit, depth, k);
        self.prove_atom(first, b, store, limit, depth, &mut next)
    }

    fn prove_atom(&mut self, goal: &Atom, b: Bindings, store: Store, limit: usize, depth: usize, k: Cont<'_, 'a>) -> bool {
        if self.out_of_time() {
            return true;
        }
        let goal = b.resolve_atom(goal);
        if !self.sig.is_meta(&goal.pred) {
            let answers = self.prover.answers(&goal, self.config.depth_bound);
            for ans in answers.iter() {
                let inst = self.prover.renamer().rename_atom(&ans.instance);
                let mut nb = b.clone();
                if nb.unify_atoms(&goal, &inst) && k(self, nb, store.clone()) {
                    return true;
                }
            }
            return false;
        }
        if depth >= self.config.depth_bound {
            return false;
        }
        // Clauses already in the store cost nothing.
        for ms in store.clone() {
            let rule = self.rule(&ms.metarule);
            if let Some(c) = self.instantiate(rule, &ms, &goal, &b) {
                if self.prove_conj(&c.0, c.1, store.clone(), limit, depth + 1, k) {
                    return true;
                }
            }
        }
        if store.len() >= limit {
            return false;
        }
        for rule in self.metarules {
            for ms in self.candidate_metasubs(rule, &goal, &store, limit) {
                if store.contains(&ms) {
                    continue;
                }
                if let Some(c) = self.instantiate(rule, &ms, &goal, &b) {
                    let mut s = store.clone();
                    s.push(ms);
                    if self.prove_conj(&c.0, c.1, s, limit, depth + 1, k) {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn rule(&self, name: &Sym) -> &'a Metarule {
        self.metarules.iter().find(|m| m.name == *name).expect("metasub names a known metarule")
    }

    /// Renames the projected clause apart and unifies its head with `goal`.
    fn instantiate(&mut self, rule: &Metarule, ms: &MetaSub, goal: &Atom, b: &Bindings) -> Option<(Vec<Atom>, Bindings)> {
        let clause = ms.to_clause(rule).ok()?;
        if clause.head.key() != goal.key() {
            return None;
        }
        let clause = self.prover.renamer().rename_clause(&clause);
        let mut nb = b.clone();
        nb.unify_atoms(&clause.head, goal).then_some((clause.body, nb))
    }

    /// Second-order bindings for `rule` whose head predicate is `goal`'s,
    /// respecting arity and the predicate ordering, in signature order.
    fn candidate_metasubs(&self, rule: &Metarule, goal: &Atom, store: &Store, limit: usize) -> Vec<MetaSub> {
        if rule.head.args.len() != goal.args.len() {
            return Vec::new();
        }
        let head_var = match &rule.head.pred {
            PredSlot::Var(v) => v.clone(),
            PredSlot::Fixed(p) => {
                if *p != goal.pred {
                    return Vec::new();
                }
                sym("")
            }
        };
        let head_rank = self.sig.rank(&goal.pred).unwrap_or(0);
        // Invented symbols usable as body predicates: those already heading a
        // stored clause, plus the next fresh one if the budget leaves room.
        let used_inv: BTreeSet<Sym> = store
            .iter()
            .flat_map(|m| m.bindings.values().cloned())
            .filter(|p| self.sig.invented.contains(p))
            .collect();
        let mut inv_ok: Vec<Sym> = self.sig.invented.iter().filter(|p| used_inv.contains(*p)).cloned().collect();
        if store.len() + 2 <= limit {
            if let Some(fresh) = self.sig.invented.iter().find(|p| !used_inv.contains(*p)) {
                inv_ok.push(fresh.clone());
            }
        }

        let mut slots: Vec<(Sym, usize)> = Vec::new();
        for a in &rule.body {
            if let PredSlot::Var(v) = &a.pred {
                if *v != head_var && !slots.iter().any(|(s, _)| s == v) {
                    slots.push((v.clone(), a.args.len()));
                }
            }
        }
        let options: Vec<Vec<Sym>> = slots
            .iter()
            .map(|(_, arity)| {
                let mut opts: Vec<Sym> = Vec::new();
                for p in std::iter::once(&self.sig.target.0).filter(|_| self.sig.target.1 == *arity).chain(&inv_ok) {
                    opts.push(p.clone());
                }
                for (p, a) in &self.sig.bk {
                    if a == arity {
                        opts.push(p.clone());
                    }
                }
                opts.retain(|p| self.order_allows(rule, head_rank, p));
                opts
            })
            .collect();

        let mut out = Vec::new();
        let mut choice = vec![0usize; slots.len()];
        if options.iter().any(Vec::is_empty) {
            return out;
        }
        loop {
            let mut bindings = std::collections::BTreeMap::new();
            if !head_var.is_empty() {
                bindings.insert(head_var.clone(), goal.pred.clone());
            }
            for (i, (v, _)) in slots.iter().enumerate() {
                bindings.insert(v.clone(), options[i][choice[i]].clone());
            }
            let ms = MetaSub { metarule: rule.name.clone(), bindings };
            if self.explicit_order_holds(rule, &ms) {
                out.push(ms);
            }
            // Odometer, last slot fastest.
            let mut i = slots.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < options[i].len() {
                    break;
                }
                choice[i] = 0;
            }
        }
    }

    /// Default ordering: a body predicate variable other than the head's
    /// must be bound strictly below the head predicate. Rules carrying an
    /// explicit `|` annotation are checked by `explicit_order_holds` instead.
    fn order_allows(&self, rule: &Metarule, head_rank: usize, pred: &Sym) -> bool {
        if !rule.order.is_empty() {
            return true;
        }
        match self.sig.rank(pred) {
            Some(r) => r > head_rank,
            None => false,
        }
    }

    fn explicit_order_holds(&self, rule: &Metarule, ms: &MetaSub) -> bool {
        rule.order.iter().all(|(hi, lo)| match (ms.bindings.get(hi), ms.bindings.get(lo)) {
            (Some(h), Some(l)) => match (self.sig.rank(h), self.sig.rank(l)) {
                (Some(rh), Some(rl)) => rh < rl,
                _ => false,
            },
            _ => true,
        })
    }

    fn consistent(&mut self, bk: &Program, store: &Store, negatives: &[Atom]) -> bool {
        let Ok(clauses) = project(store, self.metarules) else { return false };
        let hyp = Program::from_clauses(clauses);
        let mut prover = Prover::new(vec![bk, &hyp]);
        negatives.iter().all(|n| prover.answers(n, self.config.depth_bound).is_empty())
    }
}

/// Abductive proof of `goal`: every way of proving it from `bk` and the
/// clauses of `store`, abducing new metasubs while the store holds fewer
/// than `remaining`. Each result pairs the answer substitution with the
/// store it needed.
pub fn meta_prove(
    goal: &Atom,
    bk: &Program,
    metarules: &[Metarule],
    store: &BTreeSet<MetaSub>,
    remaining: usize,
    config: &MILConfig,
) -> Vec<(Substitution, BTreeSet<MetaSub>)> {
    // A goal over a background predicate is proved from the background.
    let target = if bk.predicates().contains(&goal.key()) { (sym(""), 0) } else { goal.key() };
    let mut learner = Learner::new(bk, metarules, target, config);
    let vars = goal.vars();
    let mut out: Vec<(Substitution, BTreeSet<MetaSub>)> = Vec::new();
    let start: Store = store.iter().cloned().collect();
    let mut collect = |_: &mut Learner<'_>, b: Bindings, s: Store| {
        let item = (b.restrict(&vars), s.into_iter().collect());
        if !out.contains(&item) {
            out.push(item);
        }
        false
    };
    learner.prove_atom(goal, Bindings::new(), start, remaining, 0, &mut collect);
    out
}

fn target_of(examples: &ExampleSet) -> Option<(Sym, usize)> {
    let mut keys = examples.positives.iter().chain(&examples.negatives).map(Atom::key);
    let first = keys.next()?;
    keys.all(|k| k == first).then_some(first)
}

/// Learns a hypothesis that, with `bk`, entails every positive and no
/// negative example. Tries 1, 2, ... `max_clauses` clauses and returns the
/// first hypothesis found at the smallest size.
pub fn mil_learn(bk: &Program, examples: &ExampleSet, metarules: &[Metarule], config: &MILConfig) -> Option<Hypothesis> {
    match mil_learn_outcome(bk, examples, metarules, config) {
        MilOutcome::Found(h) => Some(h),
        _ => None,
    }
}

pub fn mil_learn_outcome(bk: &Program, examples: &ExampleSet, metarules: &[Metarule], config: &MILConfig) -> MilOutcome {
    if examples.positives.is_empty() || config.max_clauses == 0 || examples.is_contradictory() {
        return MilOutcome::NotFound;
    }
    let Some(target) = target_of(examples) else { return MilOutcome::NotFound };
    let mut learner = Learner::new(bk, metarules, target, config);
    for limit in 1..=config.max_clauses {
        let mut found: Option<Store> = None;
        let negatives = examples.negatives.clone();
        let positives = examples.positives.clone();
        prove_examples(&mut learner, bk, &positives, &negatives, Vec::new(), limit, &mut found);
        if learner.timed_out {
            return MilOutcome::TimedOut;
        }
        if let Some(store) = found {
            let clauses = project(&store, metarules).expect("abduced metasubs are total");
            return MilOutcome::Found(Hypothesis { metasubs: store, clauses });
        }
    }
    MilOutcome::NotFound
}

fn prove_examples<'a>(
    learner: &mut Learner<'a>,
    bk: &'a Program,
    positives: &[Atom],
    negatives: &[Atom],
    store: Store,
    limit: usize,
    found: &mut Option<Store>,
) -> bool {
    let Some((first, rest)) = positives.split_first() else {
        if learner.consistent(bk, &store, negatives) {
            *found = Some(store);
            return true;
        }
        return false;
    };
    let mut next = |me: &mut Learner<'a>, _b: Bindings, s: Store| prove_examples(me, bk, rest, negatives, s, limit, found);
    learner.prove_atom(first, Bindings::new(), store, limit, 0, &mut next)
}
