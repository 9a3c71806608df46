#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::Rng;
use signilp::logic::{Atom, Clause, Program, Term};

pub const CONSTANTS: [&str; 4] = ["a", "b", "c", "d"];
pub const VARIABLES: [&str; 3] = ["X", "Y", "Z"];

/// A random function-free program with at most `max_preds` predicates
/// (arity 1 or 2), `max_consts` constants and `max_clauses` clauses.
pub fn random_program(rng: &mut StdRng, max_preds: usize, max_consts: usize, max_clauses: usize) -> (Program, Vec<(String, usize)>, Vec<String>) {
    let npreds = rng.gen_range(1..=max_preds);
    let preds: Vec<(String, usize)> = (0..npreds).map(|i| (format!("p{i}"), rng.gen_range(1..=2))).collect();
    let nconsts = rng.gen_range(1..=max_consts);
    let consts: Vec<String> = CONSTANTS[..nconsts].iter().map(|s| s.to_string()).collect();
    let nclauses = rng.gen_range(1..=max_clauses);
    let mut clauses = Vec::new();
    for _ in 0..nclauses {
        let body_len = if rng.gen_bool(0.5) { 0 } else { rng.gen_range(1..=2) };
        let term = |rng: &mut StdRng, allow_var: bool| {
            if allow_var && rng.gen_bool(0.6) {
                Term::var(VARIABLES[rng.gen_range(0..VARIABLES.len())])
            } else {
                Term::sym(&consts[rng.gen_range(0..consts.len())])
            }
        };
        let atom = |rng: &mut StdRng, allow_var: bool| {
            let (p, n) = &preds[rng.gen_range(0..preds.len())];
            Atom::new(p, (0..*n).map(|_| term(rng, allow_var)).collect())
        };
        let head = atom(rng, body_len > 0);
        let body = (0..body_len).map(|_| atom(rng, true)).collect();
        clauses.push(Clause::new(head, body));
    }
    (Program::from_clauses(clauses), preds, consts)
}

pub fn herbrand_base(preds: &[(String, usize)], consts: &[String]) -> Vec<Atom> {
    let mut out = Vec::new();
    for (p, n) in preds {
        if *n == 1 {
            for c in consts {
                out.push(Atom::new(p, vec![Term::sym(c)]));
            }
        } else {
            for c in consts {
                for d in consts {
                    out.push(Atom::new(p, vec![Term::sym(c), Term::sym(d)]));
                }
            }
        }
    }
    out
}

/// Least fixpoint of the immediate-consequence operator over the ground
/// instantiation of the program (naive bottom-up evaluation).
pub fn least_fixpoint(program: &Program, consts: &[String]) -> BTreeSet<Atom> {
    let mut ground_rules: Vec<(Atom, Vec<Atom>)> = Vec::new();
    for clause in program.clauses() {
        let vars = clause.vars();
        let mut idx = vec![0usize; vars.len()];
        loop {
            let inst = clause.map_vars(&mut |v| {
                let i = vars.iter().position(|w| w == v).unwrap();
                Term::sym(&consts[idx[i]])
            });
            ground_rules.push((inst.head, inst.body));
            // odometer over constant assignments
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < consts.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    let mut model = BTreeSet::new();
    loop {
        let mut changed = false;
        for (head, body) in &ground_rules {
            if !model.contains(head) && body.iter().all(|b| model.contains(b)) {
                model.insert(head.clone());
                changed = true;
            }
        }
        if !changed {
            return model;
        }
    }
}
