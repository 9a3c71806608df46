//! Feature extraction from sign rasters into ground facts over
//! color/2, shape/2, has_word/2, closely_match/2, number/2 and digits/2.

mod color;
mod contour;
mod legend;

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use crate::logic::{Atom, Clause, Program, Term};
use crate::scene::{read_manifest, GlyphFont, NamedColor, PpmError, Raster, SceneError};

pub use color::{classify_colors, open_close, rgb_to_hsv, ColorConfig, ColorMask, HsvBox};
pub use contour::{
    approx_polygon, classify_polygon, components, detect_shape_poly, douglas_peucker, moore_trace, radius_cv,
    Component, ContourPoly, ShapeClass, CIRCLE_CV,
};
pub use legend::{letters_in_common, read_legend, sign_region, Token, TokenValue, ACCEPT_BITS};

pub const PREDICATES: [&str; 6] = ["color", "shape", "has_word", "closely_match", "number", "digits"];
pub const DEFAULT_LEXICON: [&str; 5] = ["stop", "yield", "exit", "info", "slow"];
pub const DEFAULT_EPSILON: f64 = 0.02;
/// Letters a token must share with a lexicon word to closely match it.
pub const MATCH_LETTERS: usize = 3;

#[derive(Debug, Error)]
pub enum FactextError {
    #[error("no pixels in the {0} mask")]
    EmptyMask(String),
    #[error("{path}: {source}")]
    Image { path: String, source: PpmError },
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub fn detect_shape(mask: &ColorMask, epsilon_frac: f64) -> Result<ShapeClass, FactextError> {
    detect_shape_poly(&mask.mask, mask.width, mask.height, mask.color, epsilon_frac).map(|r| r.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactSet {
    pub sign_id: String,
    pub facts: Vec<Atom>,
}

impl FactSet {
    pub fn to_program(&self) -> Program {
        Program::from_clauses(self.facts.iter().cloned().map(Clause::fact))
    }
}

fn fact(pred: &str, a: &str, b: Term) -> Atom {
    Atom::new(pred, vec![Term::sym(a), b])
}

pub fn emit_facts(
    sign_id: &str,
    colors: &[NamedColor],
    shape: Option<ShapeClass>,
    tokens: &[Token],
    lexicon: &[String],
) -> FactSet {
    let mut facts = Vec::new();
    for c in colors {
        facts.push(fact("color", sign_id, Term::sym(c.name())));
    }
    if let Some(s) = shape {
        facts.push(fact("shape", sign_id, Term::sym(&s.to_string())));
    }
    let (mut words, mut numbers) = (0, 0);
    for t in tokens {
        match &t.value {
            TokenValue::Word(text) => {
                words += 1;
                let w = format!("{sign_id}_w{words}");
                facts.push(fact("has_word", sign_id, Term::sym(&w)));
                for l in lexicon {
                    if letters_in_common(text, l) >= MATCH_LETTERS {
                        facts.push(fact("closely_match", &w, Term::sym(l)));
                    }
                }
            }
            TokenValue::Number(v) => {
                numbers += 1;
                let d = format!("{sign_id}_d{numbers}");
                facts.push(fact("number", sign_id, Term::sym(&d)));
                facts.push(fact("digits", &d, Term::int(*v as i64)));
            }
        }
    }
    FactSet { sign_id: sign_id.to_string(), facts }
}

#[derive(Clone, Debug)]
pub struct ExtractConfig {
    pub colors: ColorConfig,
    pub epsilon_frac: f64,
    pub lexicon: Vec<String>,
    pub font: GlyphFont,
}

impl Default for ExtractConfig {
    fn default() -> Self {
        ExtractConfig {
            colors: ColorConfig::default(),
            epsilon_frac: DEFAULT_EPSILON,
            lexicon: DEFAULT_LEXICON.iter().map(|s| s.to_string()).collect(),
            font: GlyphFont::standard(),
        }
    }
}

/// Everything the pipeline saw for one raster.
#[derive(Clone, Debug)]
pub struct Extraction {
    pub masks: Vec<ColorMask>,
    pub shape: Option<ShapeClass>,
    pub tokens: Vec<Token>,
    pub facts: FactSet,
}

pub fn extract_detailed(raster: &Raster, sign_id: &str, config: &ExtractConfig) -> Extraction {
    let masks = classify_colors(raster, &config.colors);
    let dominant = masks.iter().max_by(|a, b| a.count().cmp(&b.count()).then(b.color.cmp(&a.color)));
    let shape = dominant.and_then(|m| detect_shape(m, config.epsilon_frac).ok());
    let tokens = read_legend(raster, &config.font);
    let colors: Vec<NamedColor> = masks.iter().map(|m| m.color).collect();
    let facts = emit_facts(sign_id, &colors, shape, &tokens, &config.lexicon);
    Extraction { masks, shape, tokens, facts }
}

pub fn extract(raster: &Raster, sign_id: &str, config: &ExtractConfig) -> FactSet {
    extract_detailed(raster, sign_id, config).facts
}

/// Extracts every image listed in a manifest, in manifest order.
pub fn extract_manifest(dir: &Path, manifest: &Path, config: &ExtractConfig) -> Result<Vec<FactSet>, FactextError> {
    let entries = read_manifest(manifest)?;
    entries
        .par_iter()
        .map(|e| {
            let path = dir.join(&e.file);
            let data = fs::read(&path)?;
            let raster = Raster::from_ppm(&data)
                .map_err(|source| FactextError::Image { path: path.display().to_string(), source })?;
            Ok(extract(&raster, &e.sign_id, config))
        })
        .collect()
}

/// Background knowledge file: `sign/1` type facts, the extracted facts
/// and `known_word/1` for the lexicon.
pub fn facts_program(sets: &[FactSet], lexicon: &[String]) -> Program {
    let mut p = Program::new();
    for s in sets {
        p.push(Clause::fact(Atom::new("sign", vec![Term::sym(&s.sign_id)])));
    }
    for s in sets {
        p.extend(s.facts.iter().cloned().map(Clause::fact));
    }
    for w in lexicon {
        p.push(Clause::fact(Atom::new("known_word", vec![Term::sym(w)])));
    }
    p
}
