mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::SeedableRng;
use signilp::logic::prove;

#[test]
fn provable_ground_atoms_match_least_fixpoint() {
    let start = Instant::now();
    for seed in 0..200u64 {
        let mut rng = StdRng::seed_from_u64(seed);
        let (program, preds, consts) = common::random_program(&mut rng, 3, 4, 6);
        let base = common::herbrand_base(&preds, &consts);
        let bound = base.len().max(20);
        let expected = common::least_fixpoint(&program, &consts);
        let t = Instant::now();
        let proved: BTreeSet<_> =
            base.iter().filter(|a| prove(&program, std::slice::from_ref(*a), bound).next().is_some()).cloned().collect();
        if t.elapsed().as_millis() > 200 {
            eprintln!("seed {seed}: {:?} for {} clauses", t.elapsed(), program.len());
        }
        assert_eq!(proved, expected, "seed {seed}");
    }
    eprintln!("total {:?}", start.elapsed());
}
