use std::collections::BTreeMap;
use std::fmt;

use super::modes::{ModeDecl, ModeKind, Polarity};
use super::{MdieError, SearchConfig};
use crate::logic::{canonical_var_name, Atom, Clause, Program, Prover, Sym, Term, Var};

/// One body literal of a bottom clause with its variable roles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BottomLiteral {
    pub atom: Atom,
    pub inputs: Vec<Var>,
    pub outputs: Vec<Var>,
}

/// The most specific clause for a seed example, lifted to variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BottomClause {
    pub head: Atom,
    pub body: Vec<BottomLiteral>,
    pub var_types: BTreeMap<Var, Sym>,
    pub depth_of: BTreeMap<Var, usize>,
    /// The ground term each variable stands for in the seed.
    pub seed_terms: BTreeMap<Var, Term>,
    /// Variables bound by the head's input slots.
    pub head_inputs: Vec<Var>,
}

impl BottomClause {
    pub fn clause(&self) -> Clause {
        Clause::new(self.head.clone(), self.body.iter().map(|l| l.atom.clone()).collect())
    }

    /// Clause using the body literals at `indices`, in that order.
    pub fn subclause(&self, indices: &[usize]) -> Clause {
        Clause::new(self.head.clone(), indices.iter().map(|&i| self.body[i].atom.clone()).collect())
    }
}

impl fmt::Display for BottomClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.clause().fmt(f)
    }
}

struct Known {
    term: Term,
    type_name: Sym,
    var: Var,
    depth: usize,
}

struct Lifter {
    known: Vec<Known>,
}

impl Lifter {
    fn lookup(&self, term: &Term, type_name: &Sym) -> Option<&Known> {
        self.known.iter().find(|k| k.term == *term && k.type_name == *type_name)
    }

    fn var_for(&mut self, term: &Term, type_name: &Sym, depth: usize) -> Var {
        if let Some(k) = self.lookup(term, type_name) {
            return k.var.clone();
        }
        let var = Var::new(&canonical_var_name(self.known.len()));
        self.known.push(Known { term: term.clone(), type_name: type_name.clone(), var: var.clone(), depth });
        var
    }
}

/// Builds the bottom clause of `seed`: layer by layer up to the variable
/// depth, every body mode is queried against `bk` with each combination of
/// known input terms, keeping up to `recall` answers each.
pub fn saturate(seed: &Atom, bk: &Program, modes: &[ModeDecl], config: &SearchConfig) -> Result<BottomClause, MdieError> {
    if !seed.is_ground() {
        return Err(MdieError::SeedNotGround(seed.to_string()));
    }
    let head_mode = modes
        .iter()
        .find(|m| m.kind == ModeKind::Head && m.pred == seed.pred && m.arity() == seed.args.len())
        .ok_or_else(|| MdieError::NoHeadMode(format!("{}/{}", seed.pred, seed.args.len())))?;

    let mut lifter = Lifter { known: Vec::new() };
    let mut head_args = Vec::new();
    let mut head_inputs = Vec::new();
    for (t, pm) in seed.args.iter().zip(&head_mode.args) {
        match pm.polarity {
            Polarity::Constant => head_args.push(t.clone()),
            Polarity::Input | Polarity::Output => {
                let v = lifter.var_for(t, &pm.type_name, 0);
                if pm.polarity == Polarity::Input && !head_inputs.contains(&v) {
                    head_inputs.push(v.clone());
                }
                head_args.push(Term::Var(v));
            }
        }
    }
    let head = Atom { pred: seed.pred.clone(), args: head_args };

    let mut prover = Prover::new(vec![bk]);
    let mut body: Vec<BottomLiteral> = Vec::new();
    for layer in 0..config.variable_depth {
        for mode in modes.iter().filter(|m| m.kind == ModeKind::Body) {
            for inputs in input_combinations(&lifter, mode, layer) {
                let query = Atom {
                    pred: mode.pred.clone(),
                    args: (0..mode.arity())
                        .map(|i| match inputs.iter().find(|(j, _)| *j == i) {
                            Some((_, t)) => t.clone(),
                            None => Term::var(&format!("Q{i}")),
                        })
                        .collect(),
                };
                let answers = prover.answers(&query, config.depth_bound);
                for ans in answers.iter().filter(|a| a.instance.is_ground()).take(mode.recall.limit()) {
                    let mut args = Vec::new();
                    let (mut ins, mut outs) = (Vec::new(), Vec::new());
                    for (t, pm) in ans.instance.args.iter().zip(&mode.args) {
                        match pm.polarity {
                            Polarity::Constant => args.push(t.clone()),
                            Polarity::Input => {
                                let v = lifter.lookup(t, &pm.type_name).expect("input term is known").var.clone();
                                ins.push(v.clone());
                                args.push(Term::Var(v));
                            }
                            Polarity::Output => {
                                let v = lifter.var_for(t, &pm.type_name, layer + 1);
                                outs.push(v.clone());
                                args.push(Term::Var(v));
                            }
                        }
                    }
                    let atom = Atom { pred: mode.pred.clone(), args };
                    if body.len() < config.max_bottom_literals && !body.iter().any(|l| l.atom == atom) {
                        body.push(BottomLiteral { atom, inputs: ins, outputs: outs });
                    }
                }
            }
        }
    }

    let mut var_types = BTreeMap::new();
    let mut depth_of = BTreeMap::new();
    let mut seed_terms = BTreeMap::new();
    for k in &lifter.known {
        var_types.insert(k.var.clone(), k.type_name.clone());
        depth_of.insert(k.var.clone(), k.depth);
        seed_terms.insert(k.var.clone(), k.term.clone());
    }
    Ok(BottomClause { head, body, var_types, depth_of, seed_terms, head_inputs })
}

/// Assignments of known ground terms to the input slots of `mode`, using
/// terms of depth ≤ `layer` with at least one at exactly `layer`, so each
/// combination is queried in one layer only.
fn input_combinations(lifter: &Lifter, mode: &ModeDecl, layer: usize) -> Vec<Vec<(usize, Term)>> {
    let slots: Vec<usize> = mode.positions(Polarity::Input).collect();
    if slots.is_empty() {
        return if layer == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let choices: Vec<Vec<&Known>> = slots
        .iter()
        .map(|&i| {
            lifter.known.iter().filter(|k| k.type_name == mode.args[i].type_name && k.depth <= layer).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut pick: Vec<&Known> = Vec::new();
    fn rec<'k>(
        choices: &[Vec<&'k Known>],
        slots: &[usize],
        layer: usize,
        pick: &mut Vec<&'k Known>,
        out: &mut Vec<Vec<(usize, Term)>>,
    ) {
        if pick.len() == slots.len() {
            if pick.iter().any(|k| k.depth == layer) {
                out.push(slots.iter().zip(pick.iter()).map(|(&i, k)| (i, k.term.clone())).collect());
            }
            return;
        }
        for k in &choices[pick.len()] {
            pick.push(k);
            rec(choices, slots, layer, pick, out);
            pick.pop();
        }
    }
    rec(&choices, &slots, layer, &mut pick, &mut out);
    out
}
