use std::collections::HashMap;
use std::rc::Rc;

use super::program::Program;
use super::subst::{Bindings, Substitution};
use super::term::{Atom, Clause, Term, Var};

pub const DEFAULT_DEPTH_BOUND: usize = 100;

/// Hands out fresh variable generations, never reused within one proof.
#[derive(Debug, Default)]
pub struct Renamer {
    next: u32,
}

impl Renamer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh(&mut self) -> u32 {
        self.next += 1;
        self.next
    }

    pub fn rename_clause(&mut self, clause: &Clause) -> Clause {
        let gen = self.fresh();
        clause.map_vars(&mut |v| Term::Var(v.renamed(gen)))
    }

    /// Renames the variables of a canonical answer instance apart. The
    /// result shares no variable with any canonical key or clause copy.
    pub fn rename_atom(&mut self, atom: &Atom) -> Atom {
        let base = self.next;
        let mut seen: Vec<Var> = Vec::new();
        let renamed = atom.map_vars(&mut |v| {
            let i = match seen.iter().position(|w| w == v) {
                Some(i) => i,
                None => {
                    seen.push(v.clone());
                    seen.len() - 1
                }
            };
            Term::Var(Var { name: "~".into(), gen: base + 1 + i as u32 })
        });
        self.next = base + seen.len() as u32;
        renamed
    }
}

/// One answer to a goal: the instantiated goal, and the fewest resolution
/// steps of any refutation producing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Answer {
    pub instance: Atom,
    pub steps: usize,
}

/// Renames every variable of `atom` to an anonymous canonical variable, in
/// order of first occurrence, so that variants map to the same key.
fn canonical_atom(atom: &Atom) -> Atom {
    let vars = atom.vars();
    atom.map_vars(&mut |v| {
        let i = vars.iter().position(|w| w == v).unwrap();
        Term::Var(Var { name: "#".into(), gen: i as u32 })
    })
}

/// SLD resolution engine over layered programs (searched in layer order,
/// clause order within a layer, body left to right).
///
/// Answer sets are memoized per (goal variant, remaining step budget): the
/// answers of a goal within `b` steps depend on nothing else, so repeated
/// subgoals are solved once. The answer sets are exactly those of plain
/// depth-first SLD under the same step bound, without re-deriving the same
/// answer along exponentially many branches. Each distinct answer is
/// reported once, in order of discovery.
pub struct Prover<'a> {
    layers: Vec<&'a Program>,
    memo: HashMap<(Atom, usize), Rc<Vec<Answer>>>,
    renamer: Renamer,
}

impl<'a> Prover<'a> {
    pub fn new(layers: Vec<&'a Program>) -> Self {
        Prover { layers, memo: HashMap::new(), renamer: Renamer::new() }
    }

    pub fn renamer(&mut self) -> &mut Renamer {
        &mut self.renamer
    }

    /// All answers to `goal` derivable within `budget` resolution steps.
    /// Instances are canonical; rename them apart before unifying.
    pub fn answers(&mut self, goal: &Atom, budget: usize) -> Rc<Vec<Answer>> {
        let key = canonical_atom(goal);
        if budget == 0 {
            return Rc::new(Vec::new());
        }
        if let Some(hit) = self.memo.get(&(key.clone(), budget)) {
            return hit.clone();
        }
        let mut found: Vec<Answer> = Vec::new();
        let layers = self.layers.clone();
        for layer in layers {
            for clause in layer.candidates(&key.pred, key.args.len(), key.args.first()) {
                let renamed = if clause.is_ground_fact() { clause.clone() } else { self.renamer.rename_clause(clause) };
                let mut bindings = Bindings::new();
                if !bindings.unify_atoms(&key, &renamed.head) {
                    continue;
                }
                let mut solved = Vec::new();
                self.solve_conj(&renamed.body, bindings, budget - 1, 0, &mut solved);
                for (b, steps) in solved {
                    let instance = canonical_atom(&b.resolve_atom(&key));
                    let steps = steps + 1;
                    match found.iter_mut().find(|a| a.instance == instance) {
                        Some(existing) => existing.steps = existing.steps.min(steps),
                        None => found.push(Answer { instance, steps }),
                    }
                }
            }
        }
        let found = Rc::new(found);
        self.memo.insert((key, budget), found.clone());
        found
    }

    /// Solves `atoms` left to right under `bindings` within `budget` steps;
    /// pushes each solution with the steps it consumed (plus `used`).
    pub fn solve_conj(
        &mut self,
        atoms: &[Atom],
        bindings: Bindings,
        budget: usize,
        used: usize,
        out: &mut Vec<(Bindings, usize)>,
    ) {
        let Some((first, rest)) = atoms.split_first() else {
            out.push((bindings, used));
            return;
        };
        let goal = bindings.resolve_atom(first);
        let answers = self.answers(&goal, budget);
        for ans in answers.iter() {
            let inst = self.renamer.rename_atom(&ans.instance);
            let mut b = bindings.clone();
            if b.unify_atoms(&goal, &inst) {
                self.solve_conj(rest, b, budget - ans.steps, used + ans.steps, out);
            }
        }
    }
}

struct Frame {
    index: usize,
    bindings: Bindings,
    budget: usize,
    goal: Atom,
    answers: Rc<Vec<Answer>>,
    next: usize,
}

/// Pull-based stream of answer substitutions to a conjunctive query.
/// Answers of each conjunct are produced on demand, left to right.
pub struct Solutions<'a> {
    prover: Prover<'a>,
    goals: Vec<Atom>,
    query_vars: Vec<Var>,
    stack: Vec<Frame>,
    bound: usize,
    started: bool,
}

impl<'a> Solutions<'a> {
    pub fn new(layers: Vec<&'a Program>, goals: &[Atom], depth_bound: usize) -> Self {
        let mut query_vars = Vec::new();
        for g in goals {
            for v in g.vars() {
                if !query_vars.contains(&v) {
                    query_vars.push(v);
                }
            }
        }
        Solutions {
            prover: Prover::new(layers),
            goals: goals.to_vec(),
            query_vars,
            stack: Vec::new(),
            bound: depth_bound,
            started: false,
        }
    }

    fn push_frame(&mut self, index: usize, bindings: Bindings, budget: usize) {
        let goal = bindings.resolve_atom(&self.goals[index]);
        let answers = self.prover.answers(&goal, budget);
        self.stack.push(Frame { index, bindings, budget, goal, answers, next: 0 });
    }

    fn next_bindings(&mut self) -> Option<Bindings> {
        if !self.started {
            self.started = true;
            if self.goals.is_empty() {
                return Some(Bindings::new());
            }
            self.push_frame(0, Bindings::new(), self.bound);
        }
        while let Some(top) = self.stack.last_mut() {
            if top.next >= top.answers.len() {
                self.stack.pop();
                continue;
            }
            let ans = top.answers[top.next].clone();
            top.next += 1;
            let (index, budget) = (top.index, top.budget);
            let goal = top.goal.clone();
            let mut bindings = top.bindings.clone();
            let inst = self.prover.renamer.rename_atom(&ans.instance);
            if !bindings.unify_atoms(&goal, &inst) {
                continue;
            }
            if index + 1 == self.goals.len() {
                return Some(bindings);
            }
            self.push_frame(index + 1, bindings, budget - ans.steps);
        }
        None
    }
}

impl Iterator for Solutions<'_> {
    type Item = Substitution;

    fn next(&mut self) -> Option<Substitution> {
        self.next_bindings().map(|b| b.restrict(&self.query_vars))
    }
}

/// Enumerates answer substitutions for `goals` against `program`, each
/// distinct answer once, within `depth_bound` resolution steps.
pub fn prove<'a>(program: &'a Program, goals: &[Atom], depth_bound: usize) -> Solutions<'a> {
    assert!(depth_bound >= 1, "depth bound must be at least one resolution step");
    Solutions::new(vec![program], goals, depth_bound)
}

/// Whether background knowledge plus hypothesis entails the ground example.
pub fn covers(bk: &Program, hypothesis: &[Clause], example: &Atom, depth_bound: usize) -> bool {
    let hyp = Program::from_clauses(hypothesis.iter().cloned());
    covers_with(bk, &hyp, example, depth_bound)
}

/// As [`covers`], with the hypothesis already compiled into a program.
pub fn covers_with(bk: &Program, hypothesis: &Program, example: &Atom, depth_bound: usize) -> bool {
    !Prover::new(vec![bk, hypothesis]).answers(example, depth_bound).is_empty()
}
