use std::io::Write;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::Serialize;

use super::{example_atom, Corpus, CorpusItem, Engine, ExperimentConfig, HarnessError};
use crate::logic::{Clause, ExampleSet, Program, Prover};
use crate::mdie::{cover_loop, ModeDecl, SearchConfig};
use crate::mil::sign::learn_sign_rule;
use crate::mil::{MILConfig, Metarule, MilOutcome};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prediction {
    pub sign_id: String,
    pub positive: bool,
    pub predicted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunResult {
    pub engine: Engine,
    pub train_size: usize,
    pub repeat_index: usize,
    pub accuracy: f64,
    pub hypothesis: String,
    pub learn_time_ms: u64,
    pub timed_out: bool,
    pub predictions: Vec<Prediction>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CurveReport {
    /// Sorted by engine, train size, repeat.
    pub runs: Vec<RunResult>,
}

impl CurveReport {
    pub fn mean_accuracy(&self, engine: Engine, n: usize) -> Option<f64> {
        let accs: Vec<f64> =
            self.runs.iter().filter(|r| r.engine == engine && r.train_size == n).map(|r| r.accuracy).collect();
        (!accs.is_empty()).then(|| accs.iter().sum::<f64>() / accs.len() as f64)
    }
}

pub enum LearnOutput {
    Hypothesis(Vec<Clause>),
    NoHypothesis,
    TimedOut,
}

/// Runs one engine on one training set.
pub fn learn(
    engine: Engine,
    bk: &Program,
    examples: &ExampleSet,
    modes: &[ModeDecl],
    metarules: &[Metarule],
    config: &ExperimentConfig,
    deadline: Option<Instant>,
) -> LearnOutput {
    match engine {
        Engine::Mil => {
            let cfg = MILConfig {
                max_clauses: config.mil.max_clauses,
                depth_bound: config.depth_bound,
                enable_invention: config.mil.enable_invention,
                invented_prefix: None,
                deadline,
            };
            match learn_sign_rule(bk, examples, metarules, &cfg) {
                MilOutcome::Found(h) => LearnOutput::Hypothesis(h.clauses),
                MilOutcome::NotFound => LearnOutput::NoHypothesis,
                MilOutcome::TimedOut => LearnOutput::TimedOut,
            }
        }
        Engine::Mdie => {
            let cfg = SearchConfig {
                max_body_literals: config.mdie.max_body_literals,
                noise: config.mdie.noise,
                max_nodes: config.mdie.max_nodes,
                variable_depth: config.mdie.variable_depth,
                depth_bound: config.depth_bound,
                deadline,
                ..SearchConfig::default()
            };
            let r = cover_loop(bk, examples, modes, &cfg);
            if r.timed_out {
                LearnOutput::TimedOut
            } else if r.clauses.is_empty() {
                LearnOutput::NoHypothesis
            } else {
                LearnOutput::Hypothesis(r.clauses)
            }
        }
    }
}

/// Predicts `stop_sign` for each item iff the hypothesis covers it.
pub fn predict(bk: &Program, hypothesis: &[Clause], items: &[&CorpusItem], depth_bound: usize) -> Vec<Prediction> {
    let hyp = Program::from_clauses(hypothesis.iter().cloned());
    let mut prover = Prover::new(vec![bk, &hyp]);
    items
        .iter()
        .map(|it| Prediction {
            sign_id: it.sign_id.clone(),
            positive: it.positive,
            predicted: !hypothesis.is_empty() && !prover.answers(&example_atom(&it.sign_id), depth_bound).is_empty(),
        })
        .collect()
}

fn hypothesis_text(clauses: &[Clause]) -> String {
    clauses.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

/// Train/test split for one repeat: `n` of each class for training, the
/// rest held out. Depends only on the seed, so every engine and size sees
/// nested splits of the same shuffle.
pub fn split<'a>(corpus: &'a Corpus, n: usize, seed: u64) -> (Vec<&'a CorpusItem>, Vec<&'a CorpusItem>) {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut pos = corpus.positives();
    let mut neg = corpus.negatives();
    pos.shuffle(&mut rng);
    neg.shuffle(&mut rng);
    let train: Vec<_> = pos[..n].iter().chain(&neg[..n]).copied().collect();
    let test: Vec<_> = pos[n..].iter().chain(&neg[n..]).copied().collect();
    (train, test)
}

fn run_one(
    engine: Engine,
    n: usize,
    repeat: usize,
    corpus: &Corpus,
    modes: &[ModeDecl],
    metarules: &[Metarule],
    config: &ExperimentConfig,
) -> RunResult {
    let (train, test) = split(corpus, n, config.seed.wrapping_add(repeat as u64));
    let examples = ExampleSet::new(
        train.iter().filter(|i| i.positive).map(|i| example_atom(&i.sign_id)).collect(),
        train.iter().filter(|i| !i.positive).map(|i| example_atom(&i.sign_id)).collect(),
    );
    let start = Instant::now();
    let deadline = start + Duration::from_millis(config.timeout_ms);
    let out = learn(engine, &corpus.bk, &examples, modes, metarules, config, Some(deadline));
    let elapsed = start.elapsed().as_millis() as u64;
    let (clauses, timed_out) = match out {
        LearnOutput::Hypothesis(c) => (c, false),
        LearnOutput::NoHypothesis => (Vec::new(), false),
        LearnOutput::TimedOut => (Vec::new(), true),
    };
    let predictions = predict(&corpus.bk, &clauses, &test, config.depth_bound);
    let correct = predictions.iter().filter(|p| p.positive == p.predicted).count();
    let accuracy = if timed_out {
        0.5
    } else if predictions.is_empty() {
        0.0
    } else {
        correct as f64 / predictions.len() as f64
    };
    RunResult {
        engine,
        train_size: n,
        repeat_index: repeat,
        accuracy,
        hypothesis: hypothesis_text(&clauses),
        learn_time_ms: if config.record_time { elapsed } else { 0 },
        timed_out,
        predictions,
    }
}

/// Every (engine, size, repeat) run of the experiment.
pub fn learning_curve(
    config: &ExperimentConfig,
    corpus: &Corpus,
    modes: &[ModeDecl],
    metarules: &[Metarule],
) -> Result<CurveReport, HarnessError> {
    config.validate()?;
    let needed = *config.train_sizes.iter().max().expect("validated non-empty");
    let (p, n) = (corpus.positives().len(), corpus.negatives().len());
    if p <= needed || n <= needed {
        return Err(HarnessError::InsufficientData { needed, positives: p, negatives: n });
    }
    let mut jobs = Vec::new();
    for e in config.engine_list() {
        for &size in &config.train_sizes {
            for r in 0..config.repeats {
                jobs.push((e, size, r));
            }
        }
    }
    let run = || -> Vec<RunResult> {
        jobs.par_iter().map(|&(e, size, r)| run_one(e, size, r, corpus, modes, metarules, config)).collect()
    };
    let mut runs = match config.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| HarnessError::Config(e.to_string()))?
            .install(run),
        None => run(),
    };
    runs.sort_by(|a, b| (a.engine, a.train_size, a.repeat_index).cmp(&(b.engine, b.train_size, b.repeat_index)));
    Ok(CurveReport { runs })
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// One row per run, then `mean` and `std` rows per (engine, size), then
/// the 0.5 balanced-guess baseline per size.
pub fn write_curve_csv(report: &CurveReport, out: impl Write) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["engine", "n", "repeat", "accuracy", "time_ms", "hypothesis", "timed_out"])?;
    for r in &report.runs {
        w.write_record([
            r.engine.name().to_string(),
            r.train_size.to_string(),
            r.repeat_index.to_string(),
            format!("{:.6}", r.accuracy),
            r.learn_time_ms.to_string(),
            r.hypothesis.clone(),
            r.timed_out.to_string(),
        ])?;
    }
    let mut groups: Vec<(Engine, usize)> = report.runs.iter().map(|r| (r.engine, r.train_size)).collect();
    groups.dedup();
    for &(e, n) in &groups {
        let sel: Vec<&RunResult> = report.runs.iter().filter(|r| r.engine == e && r.train_size == n).collect();
        let accs: Vec<f64> = sel.iter().map(|r| r.accuracy).collect();
        let times: Vec<f64> = sel.iter().map(|r| r.learn_time_ms as f64).collect();
        let (ma, sa) = mean_std(&accs);
        let (mt, st) = mean_std(&times);
        let timeouts = sel.iter().filter(|r| r.timed_out).count();
        for (label, a, t) in [("mean", ma, mt), ("std", sa, st)] {
            w.write_record([
                e.name().to_string(),
                n.to_string(),
                label.to_string(),
                format!("{a:.6}"),
                format!("{t:.1}"),
                String::new(),
                timeouts.to_string(),
            ])?;
        }
    }
    let mut sizes: Vec<usize> = groups.iter().map(|g| g.1).collect();
    sizes.sort_unstable();
    sizes.dedup();
    for n in sizes {
        w.write_record(["baseline", &n.to_string(), "mean", "0.500000", "0.0", "", "0"])?;
    }
    w.flush()?;
    Ok(())
}

/// The per-item prediction log behind every run's accuracy.
pub fn write_predictions_csv(report: &CurveReport, out: impl Write) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["engine", "n", "repeat", "sign_id", "label", "predicted"])?;
    for r in &report.runs {
        for p in &r.predictions {
            w.write_record([
                r.engine.name(),
                &r.train_size.to_string(),
                &r.repeat_index.to_string(),
                &p.sign_id,
                if p.positive { "stop_sign" } else { "other" },
                if p.predicted { "stop_sign" } else { "other" },
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
