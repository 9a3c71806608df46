use std::collections::BTreeSet;
use std::sync::OnceLock;

use signilp::factext::ExtractConfig;
use signilp::harness::{
    learning_curve, plot_svg_from_csv, robustness_eval, split, write_curve_csv, Corpus, Engine, ExperimentConfig,
    HarnessError, BUNDLED_METARULES, BUNDLED_MODES,
};
use signilp::lptext::{parse_metarules, parse_modes};
use signilp::mdie::ModeDecl;
use signilp::mil::Metarule;
use signilp::scene::{DatasetConfig, Variant, DEFAULT_SCALE};

fn corpus(pos: usize, neg: usize, variant: Variant, seed: u64) -> Corpus {
    let cfg = DatasetConfig { pos, neg, variant, seed, scale: DEFAULT_SCALE };
    Corpus::generate(&cfg, &ExtractConfig::default()).unwrap()
}

fn base() -> &'static Corpus {
    static C: OnceLock<Corpus> = OnceLock::new();
    C.get_or_init(|| corpus(20, 20, Variant::Base, 3))
}

fn bias() -> (Vec<ModeDecl>, Vec<Metarule>) {
    (parse_modes(BUNDLED_MODES).unwrap(), parse_metarules(BUNDLED_METARULES).unwrap())
}

fn config(engines: &[Engine], sizes: &[usize], repeats: usize) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(engines, sizes, repeats, 11);
    c.record_time = false;
    c
}

#[test]
fn mil_one_example_per_class_is_perfect() {
    let (modes, mrules) = bias();
    let report = learning_curve(&config(&[Engine::Mil], &[1], 5), base(), &modes, &mrules).unwrap();
    assert_eq!(report.runs.len(), 5);
    for r in &report.runs {
        assert!(!r.timed_out);
        assert_eq!(r.accuracy, 1.0, "repeat {} hypothesis {}", r.repeat_index, r.hypothesis);
        assert_eq!(r.predictions.len(), 38);
    }
}

#[test]
fn accuracy_matches_prediction_log() {
    let (modes, mrules) = bias();
    let report = learning_curve(&config(&[Engine::Mil, Engine::Mdie], &[1, 3], 4), base(), &modes, &mrules).unwrap();
    for r in &report.runs {
        if r.timed_out {
            continue;
        }
        let right = r.predictions.iter().filter(|p| p.positive == p.predicted).count();
        assert_eq!(r.accuracy, right as f64 / r.predictions.len() as f64);
    }
}

#[test]
fn too_few_signs_is_insufficient_data() {
    let (modes, mrules) = bias();
    let small = corpus(3, 3, Variant::Base, 1);
    let err = learning_curve(&config(&[Engine::Mil], &[3], 1), &small, &modes, &mrules).unwrap_err();
    assert!(matches!(err, HarnessError::InsufficientData { needed: 3, positives: 3, negatives: 3 }));
}

#[test]
fn split_is_balanced_disjoint_and_nested() {
    let c = base();
    for seed in 0..20 {
        let mut prev: BTreeSet<String> = BTreeSet::new();
        for n in 1..=8 {
            let (train, test) = split(c, n, seed);
            assert_eq!(train.iter().filter(|i| i.positive).count(), n);
            assert_eq!(train.iter().filter(|i| !i.positive).count(), n);
            assert_eq!(train.len() + test.len(), c.items.len());
            let tr: BTreeSet<String> = train.iter().map(|i| i.sign_id.clone()).collect();
            let te: BTreeSet<String> = test.iter().map(|i| i.sign_id.clone()).collect();
            assert!(tr.is_disjoint(&te));
            assert!(prev.is_subset(&tr));
            prev = tr;
        }
    }
}

#[test]
fn curve_csv_is_reproducible() {
    let (modes, mrules) = bias();
    let cfg = config(&[Engine::Mil, Engine::Mdie], &[1, 2], 3);
    let csv = || {
        let r = learning_curve(&cfg, base(), &modes, &mrules).unwrap();
        let mut buf = Vec::new();
        write_curve_csv(&r, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    };
    let a = csv();
    assert_eq!(a, csv());
    assert!(a.starts_with("engine,n,repeat,accuracy,time_ms,hypothesis,timed_out\n"));
    assert!(a.contains("baseline,2,mean,0.500000"));
}

#[test]
fn mdie_curve_rises_to_perfect() {
    let (modes, mrules) = bias();
    let sizes = [1, 2, 4, 8];
    let report = learning_curve(&config(&[Engine::Mdie, Engine::Mil], &sizes, 10), base(), &modes, &mrules).unwrap();
    let mdie: Vec<f64> = sizes.iter().map(|&n| report.mean_accuracy(Engine::Mdie, n).unwrap()).collect();
    for w in mdie.windows(2) {
        assert!(w[1] >= w[0] - 1e-9, "{mdie:?}");
    }
    assert_eq!(mdie[3], 1.0);
    for &n in &sizes {
        assert_eq!(report.mean_accuracy(Engine::Mil, n), Some(1.0));
    }
}

#[test]
fn learned_rule_survives_occlusion_variants() {
    let (modes, mrules) = bias();
    let report = learning_curve(&config(&[Engine::Mil], &[1], 1), base(), &modes, &mrules).unwrap();
    let hyp = signilp::lptext::parse_program(&report.runs[0].hypothesis).unwrap();
    let sets: Vec<(Variant, Corpus)> =
        [Variant::Base, Variant::Rp2Graffiti].iter().map(|&v| (v, corpus(10, 10, v, 5))).collect();
    let rows = robustness_eval(hyp.clauses(), &sets, signilp::logic::DEFAULT_DEPTH_BOUND);
    assert_eq!(rows.len(), 2);
    for r in &rows {
        assert_eq!(r.items, 20);
        assert_eq!(r.accuracy, 1.0, "{:?}", r.variant);
        assert_eq!(r.stop_accuracy, 1.0);
    }
    assert!(robustness_eval(hyp.clauses(), &[(Variant::Base, Corpus::default())], 10).is_empty());
}

const TWO_ENGINES: &str = "engine,n,repeat,accuracy,time_ms,hypothesis,timed_out
mil,1,0,1.0,0,h,false
mil,2,0,1.0,0,h,false
mdie,1,0,0.6,0,h,false
mdie,1,1,0.8,0,h,false
mdie,2,0,0.9,0,h,false
";

#[test]
fn plot_has_one_line_per_engine_plus_baseline() {
    let svg = plot_svg_from_csv(TWO_ENGINES).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 3);
    assert_eq!(svg.matches("class=\"baseline\"").count(), 1);
    assert_eq!(svg, plot_svg_from_csv(TWO_ENGINES).unwrap());
    // mdie n=1 averages to 0.7: y = 30 + 320 * 0.3
    assert!(svg.contains("60.00,126.00"), "{svg}");
}

#[test]
fn plot_rejects_empty_or_malformed_csv() {
    assert!(matches!(plot_svg_from_csv(""), Err(HarnessError::MalformedCsv(_))));
    assert!(matches!(plot_svg_from_csv("engine,n,repeat,accuracy\n"), Err(HarnessError::MalformedCsv(_))));
    assert!(matches!(plot_svg_from_csv("engine,n\nmil,1\n"), Err(HarnessError::MalformedCsv(_))));
}
