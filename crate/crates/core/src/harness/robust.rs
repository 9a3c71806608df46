use std::io::Write;

use serde::Serialize;

use super::curve::predict;
use super::{Corpus, HarnessError};
use crate::logic::Clause;
use crate::scene::Variant;

/// Stop signs whose legend is more occluded than this are reported but
/// left out of the stop-sign accuracy.
pub const OCCLUSION_LIMIT: f64 = 0.4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RobustRow {
    pub variant: Variant,
    pub items: usize,
    pub correct: usize,
    pub accuracy: f64,
    pub stop_items: usize,
    pub stop_correct: usize,
    pub stop_accuracy: f64,
    /// Stop signs over the occlusion limit.
    pub excluded: usize,
    pub max_occlusion: f64,
}

/// Classifies every sign of every variant with `hypothesis`. Variants with
/// no signs produce no row.
pub fn robustness_eval(hypothesis: &[Clause], sets: &[(Variant, Corpus)], depth_bound: usize) -> Vec<RobustRow> {
    sets.iter()
        .filter(|(_, c)| !c.items.is_empty())
        .map(|(v, corpus)| {
            let items: Vec<_> = corpus.items.iter().collect();
            let preds = predict(&corpus.bk, hypothesis, &items, depth_bound);
            let correct = preds.iter().filter(|p| p.positive == p.predicted).count();
            let mut stop_items = 0;
            let mut stop_correct = 0;
            let mut excluded = 0;
            for (it, p) in items.iter().zip(&preds) {
                if !it.positive {
                    continue;
                }
                if it.occlusion > OCCLUSION_LIMIT {
                    excluded += 1;
                    continue;
                }
                stop_items += 1;
                stop_correct += p.predicted as usize;
            }
            let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
            RobustRow {
                variant: *v,
                items: items.len(),
                correct,
                accuracy: ratio(correct, items.len()),
                stop_items,
                stop_correct,
                stop_accuracy: ratio(stop_correct, stop_items),
                excluded,
                max_occlusion: items.iter().map(|i| i.occlusion).fold(0.0, f64::max),
            }
        })
        .collect()
}

pub fn write_robust_csv(rows: &[RobustRow], out: impl Write) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "variant",
        "items",
        "correct",
        "accuracy",
        "stop_items",
        "stop_correct",
        "stop_accuracy",
        "excluded",
        "max_occlusion",
    ])?;
    for r in rows {
        w.write_record([
            r.variant.name().to_string(),
            r.items.to_string(),
            r.correct.to_string(),
            format!("{:.4}", r.accuracy),
            r.stop_items.to_string(),
            r.stop_correct.to_string(),
            format!("{:.4}", r.stop_accuracy),
            r.excluded.to_string(),
            format!("{:.4}", r.max_occlusion),
        ])?;
    }
    w.flush()?;
    Ok(())
}
