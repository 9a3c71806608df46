use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use serde::Serialize;

use super::bottom::BottomClause;
use super::{MdieError, SearchConfig};
use crate::logic::{Atom, Bindings, Clause, ExampleSet, Program, Prover, Var};

/// One expanded search node, as written to the JSON-lines trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub node: usize,
    pub clause: String,
    pub pos: usize,
    pub neg: usize,
    pub score: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoredClause {
    pub clause: Clause,
    /// Indices into the bottom clause body, in clause order.
    pub literals: Vec<usize>,
    pub pos: usize,
    pub neg: usize,
    pub score: i64,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub best: ScoredClause,
    pub nodes: usize,
    pub trace: Vec<TraceRecord>,
}

struct Node {
    id: usize,
    literals: Vec<usize>,
    pos: usize,
    neg: usize,
    score: i64,
}

impl Node {
    /// Better nodes compare greater: higher score, then fewer literals,
    /// then earlier generation.
    fn rank(&self, other: &Node) -> Ordering {
        self.score
            .cmp(&other.score)
            .then(other.literals.len().cmp(&self.literals.len()))
            .then(other.id.cmp(&self.id))
    }
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank(other)
    }
}

/// Clause coverage against a fixed background, sharing one prover.
pub struct Coverage<'a> {
    prover: Prover<'a>,
    depth_bound: usize,
}

impl<'a> Coverage<'a> {
    pub fn new(bk: &'a Program, depth_bound: usize) -> Self {
        Coverage { prover: Prover::new(vec![bk]), depth_bound }
    }

    /// Whether `clause` alone, over the background, entails `example`.
    pub fn covers(&mut self, clause: &Clause, example: &Atom) -> bool {
        let mut b = Bindings::new();
        if !b.unify_atoms(&clause.head, example) {
            return false;
        }
        let mut out = Vec::new();
        self.prover.solve_conj(&clause.body, b, self.depth_bound.saturating_sub(1), 0, &mut out);
        !out.is_empty()
    }

    pub fn count(&mut self, clause: &Clause, examples: &[Atom]) -> usize {
        examples.iter().filter(|e| self.covers(clause, e)).count()
    }
}

/// True when every input variable of each chosen literal is bound by the
/// head or by an output of an earlier chosen literal.
pub fn chain_valid(bottom: &BottomClause, literals: &[usize]) -> bool {
    let mut bound: Vec<&Var> = bottom.head_inputs.iter().collect();
    for &i in literals {
        let lit = &bottom.body[i];
        if !lit.inputs.iter().all(|v| bound.contains(&v)) {
            return false;
        }
        bound.extend(lit.outputs.iter());
    }
    true
}

fn score(pos: usize, neg: usize, len: usize) -> i64 {
    pos as i64 - neg as i64 - len as i64
}

/// Best-first search over chain-valid, order-preserving subsets of the
/// bottom clause body, scored by P - N - L. Returns the best clause that
/// covers at least one positive and at most `noise` negatives.
pub fn search_clause(
    bottom: &BottomClause,
    bk: &Program,
    examples: &ExampleSet,
    config: &SearchConfig,
) -> Result<SearchResult, MdieError> {
    let mut cov = Coverage::new(bk, config.depth_bound);
    let evaluate = |lits: &[usize], cov: &mut Coverage<'_>| {
        let c = bottom.subclause(lits);
        (cov.count(&c, &examples.positives), cov.count(&c, &examples.negatives))
    };

    let mut trace = Vec::new();
    let mut next_id = 0usize;
    let mut open = BinaryHeap::new();
    let (p, n) = evaluate(&[], &mut cov);
    open.push(Node { id: next_id, literals: Vec::new(), pos: p, neg: n, score: score(p, n, 0) });
    next_id += 1;

    let mut best: Option<Node> = None;
    while let Some(node) = open.pop() {
        if config.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(MdieError::TimedOut);
        }
        trace.push(TraceRecord {
            node: node.id,
            clause: bottom.subclause(&node.literals).canonical().to_string(),
            pos: node.pos,
            neg: node.neg,
            score: node.score,
        });
        let acceptable = node.pos >= 1 && node.neg <= config.noise;
        if acceptable && best.as_ref().map_or(true, |b| node.rank(b) == Ordering::Greater) {
            best = Some(Node { literals: node.literals.clone(), ..node });
        }
        // Refinements add literals, so they cover no more positives and
        // cost at least one more literal.
        let ceiling = score(node.pos, 0, node.literals.len() + 1);
        if node.literals.len() >= config.max_body_literals
            || node.pos == 0
            || best.as_ref().is_some_and(|b| ceiling <= b.score)
        {
            continue;
        }
        let start = node.literals.last().map_or(0, |&l| l + 1);
        for k in start..bottom.body.len() {
            if next_id >= config.max_nodes {
                break;
            }
            let mut lits = node.literals.clone();
            lits.push(k);
            if !chain_valid(bottom, &lits) {
                continue;
            }
            let (p, n) = evaluate(&lits, &mut cov);
            let s = score(p, n, lits.len());
            open.push(Node { id: next_id, literals: lits, pos: p, neg: n, score: s });
            next_id += 1;
        }
    }

    let best = best.ok_or(MdieError::NoConsistentClause)?;
    Ok(SearchResult {
        best: ScoredClause {
            clause: bottom.subclause(&best.literals).canonical(),
            literals: best.literals,
            pos: best.pos,
            neg: best.neg,
            score: best.score,
        },
        nodes: next_id,
        trace,
    })
}
