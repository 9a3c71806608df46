use signilp::logic::{covers, Atom, Clause, ExampleSet, Program};
use signilp::lptext::{parse_atom, parse_clause, parse_modes, parse_program};
use signilp::mdie::{
    chain_valid, cover_loop, saturate, search_clause, BottomClause, MdieError, ModeDecl, SearchConfig,
};

const MODES: &str = include_str!("../data/sign.modes");

fn modes() -> Vec<ModeDecl> {
    parse_modes(MODES).unwrap()
}

fn atom(s: &str) -> Atom {
    parse_atom(s).unwrap()
}

fn bk_table() -> Program {
    parse_program(
        "color(p1,red). color(p1,white). shape(p1,octagon). has_word(p1,p1_w1). closely_match(p1_w1,stop).
         color(n1,red). color(n1,white). shape(n1,circle). number(n1,n1_d1). digits(n1_d1,30).",
    )
    .unwrap()
}

fn body_strings(b: &BottomClause) -> Vec<String> {
    b.body.iter().map(|l| l.atom.to_string()).collect()
}

#[test]
fn saturating_p1_gives_its_five_features() {
    let b = saturate(&atom("traffic_sign(p1,stop_sign)"), &bk_table(), &modes(), &SearchConfig::default()).unwrap();
    assert_eq!(b.head.to_string(), "traffic_sign(A,stop_sign)");
    assert_eq!(
        body_strings(&b),
        ["color(A,red)", "color(A,white)", "shape(A,octagon)", "has_word(A,B)", "closely_match(B,stop)"]
    );
}

#[test]
fn saturating_n1_chains_digits_through_number() {
    let b = saturate(&atom("traffic_sign(n1,stop_sign)"), &bk_table(), &modes(), &SearchConfig::default()).unwrap();
    let body = body_strings(&b);
    assert!(body.contains(&"number(A,B)".to_string()));
    assert!(body.contains(&"digits(B,30)".to_string()));
    let num = body.iter().position(|s| s == "number(A,B)").unwrap();
    let dig = body.iter().position(|s| s == "digits(B,30)").unwrap();
    assert!(num < dig);
}

#[test]
fn empty_background_gives_empty_body() {
    let b = saturate(&atom("traffic_sign(p1,stop_sign)"), &Program::new(), &modes(), &SearchConfig::default()).unwrap();
    assert!(b.body.is_empty());
}

#[test]
fn saturation_errors() {
    let cfg = SearchConfig::default();
    assert!(matches!(saturate(&atom("other(p1)"), &bk_table(), &modes(), &cfg), Err(MdieError::NoHeadMode(_))));
    assert!(matches!(
        saturate(&atom("traffic_sign(X,stop_sign)"), &bk_table(), &modes(), &cfg),
        Err(MdieError::SeedNotGround(_))
    ));
}

#[test]
fn variable_depth_one_stops_before_chained_literals() {
    let cfg = SearchConfig { variable_depth: 1, ..SearchConfig::default() };
    let b = saturate(&atom("traffic_sign(p1,stop_sign)"), &bk_table(), &modes(), &cfg).unwrap();
    assert_eq!(body_strings(&b).len(), 4);
}

#[test]
fn bottom_clause_is_sound() {
    let bk = bk_table();
    for seed in ["traffic_sign(p1,stop_sign)", "traffic_sign(n1,stop_sign)"] {
        let b = saturate(&atom(seed), &bk, &modes(), &SearchConfig::default()).unwrap();
        for lit in &b.body {
            let ground = lit.atom.map_vars(&mut |v| b.seed_terms[v].clone());
            assert!(bk.clauses().iter().any(|c| c.head == ground), "{ground} not in bk");
        }
    }
}

#[test]
fn single_positive_with_empty_bottom_gives_bare_head() {
    let bottom = saturate(&atom("traffic_sign(p1,stop_sign)"), &Program::new(), &modes(), &SearchConfig::default()).unwrap();
    let ex = ExampleSet::new(vec![atom("traffic_sign(p1,stop_sign)")], vec![]);
    let r = search_clause(&bottom, &Program::new(), &ex, &SearchConfig::default()).unwrap();
    assert!(r.best.clause.body.is_empty());
    assert_eq!(r.best.clause.to_string(), "traffic_sign(A,stop_sign).");
}

fn stop(id: &str) -> String {
    format!(
        "color({id},red). color({id},white). shape({id},octagon). has_word({id},{id}_w1). closely_match({id}_w1,stop).\n"
    )
}

/// Octagonal red signs without a STOP legend, so shape alone is not enough.
fn octagon_decoy(id: &str) -> String {
    format!("color({id},red). color({id},white). shape({id},octagon). has_word({id},{id}_w1).\n")
}

fn speed(id: &str, v: i64) -> String {
    format!("color({id},red). color({id},white). shape({id},circle). number({id},{id}_d1). digits({id}_d1,{v}).\n")
}

#[test]
fn eight_and_eight_with_decoys_gives_the_listing_rule() {
    let mut text = String::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for i in 1..=8 {
        text += &stop(&format!("p{i}"));
        pos.push(atom(&format!("traffic_sign(p{i},stop_sign)")));
    }
    for i in 1..=8 {
        let id = format!("n{i}");
        text += &if i <= 4 { octagon_decoy(&id) } else { speed(&id, 30 + 10 * i as i64) };
        neg.push(atom(&format!("traffic_sign({id},stop_sign)")));
    }
    let bk = parse_program(&text).unwrap();
    let ex = ExampleSet::new(pos, neg);
    let bottom = saturate(&ex.positives[0], &bk, &modes(), &SearchConfig::default()).unwrap();
    let r = search_clause(&bottom, &bk, &ex, &SearchConfig::default()).unwrap();
    let listing = parse_clause("traffic_sign(A,stop_sign) :- has_word(A,A_w1), closely_match(A_w1,stop).").unwrap();
    assert_eq!(r.best.clause, listing.canonical());
    assert_eq!((r.best.pos, r.best.neg, r.best.score), (8, 0, 6));
    assert!(!r.trace.is_empty());
}

/// Every chain-valid ordered subset up to `max` literals, scored
/// independently with `covers`.
fn oracle_best(bottom: &BottomClause, bk: &Program, ex: &ExampleSet, max: usize) -> Option<(i64, usize, Clause)> {
    let n = bottom.body.len();
    let mut best: Option<(i64, usize, Clause)> = None;
    for mask in 0u32..(1 << n) {
        let lits: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        if lits.len() > max || !chain_valid(bottom, &lits) {
            continue;
        }
        let c = bottom.subclause(&lits);
        let p = ex.positives.iter().filter(|e| covers(bk, &[c.clone()], e, 100)).count();
        let ng = ex.negatives.iter().filter(|e| covers(bk, &[c.clone()], e, 100)).count();
        if p == 0 || ng > 0 {
            continue;
        }
        let s = p as i64 - ng as i64 - lits.len() as i64;
        let better = match &best {
            None => true,
            Some((bs, bl, _)) => s > *bs || (s == *bs && lits.len() < *bl),
        };
        if better {
            best = Some((s, lits.len(), c.canonical()));
        }
    }
    best
}

#[test]
fn search_agrees_with_exhaustive_subsets() {
    let tasks: Vec<(String, Vec<&str>, Vec<&str>)> = vec![
        (stop("a") + &stop("b") + &octagon_decoy("c") + &speed("d", 30), vec!["a", "b"], vec!["c", "d"]),
        (stop("a") + &speed("b", 30) + &speed("c", 50) + &speed("d", 30), vec!["b", "d"], vec!["a", "c"]),
        (octagon_decoy("a") + &stop("b") + &speed("c", 30) + &speed("d", 30), vec!["a", "b"], vec!["c", "d"]),
        (stop("a") + &stop("b") + &stop("c") + &speed("d", 60), vec!["a"], vec!["d"]),
    ];
    for (text, pos, neg) in tasks {
        let bk = parse_program(&text).unwrap();
        let mk = |ids: &[&str]| ids.iter().map(|i| atom(&format!("traffic_sign({i},stop_sign)"))).collect();
        let ex = ExampleSet::new(mk(&pos), mk(&neg));
        let cfg = SearchConfig::default();
        let bottom = saturate(&ex.positives[0], &bk, &modes(), &cfg).unwrap();
        let expected = oracle_best(&bottom, &bk, &ex, cfg.max_body_literals).expect("a consistent clause exists");
        let got = search_clause(&bottom, &bk, &ex, &cfg).unwrap().best;
        assert_eq!(got.score, expected.0, "{text}");
        assert_eq!(got.clause.body.len(), expected.1, "{text}");
        let gp = ex.positives.iter().filter(|e| covers(&bk, &[got.clause.clone()], e, 100)).count();
        assert_eq!(got.pos, gp);
    }
}

#[test]
fn no_consistent_clause_when_negative_is_indistinguishable() {
    let bk = parse_program(&(stop("a") + &stop("b"))).unwrap();
    let ex = ExampleSet::new(vec![atom("traffic_sign(a,stop_sign)")], vec![atom("traffic_sign(b,stop_sign)")]);
    let bottom = saturate(&ex.positives[0], &bk, &modes(), &SearchConfig::default()).unwrap();
    assert_eq!(search_clause(&bottom, &bk, &ex, &SearchConfig::default()).unwrap_err(), MdieError::NoConsistentClause);
}

#[test]
fn cover_loop_on_empty_positives_is_empty() {
    let r = cover_loop(&bk_table(), &ExampleSet::default(), &modes(), &SearchConfig::default());
    assert!(r.clauses.is_empty() && r.uncovered.is_empty());
}

#[test]
fn cover_loop_learns_one_clause_per_cluster() {
    // Cluster one reads STOP; cluster two is octagonal with no legend.
    let mut text = String::new();
    for i in 1..=3 {
        text += &stop(&format!("s{i}"));
        text += &format!("color(o{i},red). shape(o{i},octagon).\n");
    }
    for i in 1..=3 {
        text += &speed(&format!("n{i}"), 30 * i);
        text += &format!("color(m{i},blue). shape(m{i},rectangle). has_word(m{i},m{i}_w1).\n");
    }
    let bk = parse_program(&text).unwrap();
    let mut pos = Vec::new();
    for i in 1..=3 {
        pos.push(atom(&format!("traffic_sign(s{i},stop_sign)")));
        pos.push(atom(&format!("traffic_sign(o{i},stop_sign)")));
    }
    let neg: Vec<Atom> = (1..=3)
        .flat_map(|i| [format!("traffic_sign(n{i},stop_sign)"), format!("traffic_sign(m{i},stop_sign)")])
        .map(|s| atom(&s))
        .collect();
    let ex = ExampleSet::new(pos, neg);
    let cfg = SearchConfig::default();
    let r = cover_loop(&bk, &ex, &modes(), &cfg);
    assert!(r.uncovered.is_empty());
    for p in &ex.positives {
        assert!(covers(&bk, &r.clauses, p, 100), "{p} uncovered");
    }
    for n in &ex.negatives {
        assert!(!covers(&bk, &r.clauses, n, 100), "{n} covered");
    }
    assert!(r.clauses.len() <= 2, "{:?}", r.clauses);
}

#[test]
fn cover_loop_reports_uncoverable_seeds() {
    let bk = parse_program(&(stop("a") + &stop("b"))).unwrap();
    let ex = ExampleSet::new(vec![atom("traffic_sign(a,stop_sign)")], vec![atom("traffic_sign(b,stop_sign)")]);
    let r = cover_loop(&bk, &ex, &modes(), &SearchConfig::default());
    assert!(r.clauses.is_empty());
    assert_eq!(r.uncovered, ex.positives);
}
