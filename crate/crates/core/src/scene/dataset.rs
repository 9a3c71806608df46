use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::palette::{NamedColor, Rgb};
use super::perturb::{perturb, Ellipse, Perturbation};
use super::raster::Raster;
use super::render::{render_layers, Legend, Rect, Rendered, Shape, SignGeometry, SignSpec};
use super::SceneError;

pub const STOP_LABEL: &str = "stop_sign";
pub const OTHER_LABEL: &str = "other";
pub const DEFAULT_SCALE: usize = 160;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Base,
    Rp2Subtle,
    Rp2Graffiti,
    Rp2Art,
    #[serde(alias = "advcam_stain")]
    Advcam,
}

impl Variant {
    pub const ALL: [Variant; 5] = [Variant::Base, Variant::Rp2Subtle, Variant::Rp2Graffiti, Variant::Rp2Art, Variant::Advcam];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Base => "base",
            Variant::Rp2Subtle => "rp2_subtle",
            Variant::Rp2Graffiti => "rp2_graffiti",
            Variant::Rp2Art => "rp2_art",
            Variant::Advcam => "advcam",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "advcam_stain" {
            return Ok(Variant::Advcam);
        }
        Variant::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| format!("unknown variant '{s}'"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetConfig {
    pub pos: usize,
    pub neg: usize,
    pub variant: Variant,
    pub seed: u64,
    #[serde(default = "default_scale")]
    pub scale: usize,
}

fn default_scale() -> usize {
    DEFAULT_SCALE
}

impl DatasetConfig {
    pub fn new(pos: usize, neg: usize, variant: Variant, seed: u64) -> Self {
        DatasetConfig { pos, neg, variant, seed, scale: DEFAULT_SCALE }
    }
}

#[derive(Clone, Debug)]
pub struct DatasetItem {
    pub spec: SignSpec,
    pub positive: bool,
    pub variant: Variant,
    pub perturbations: Vec<Perturbation>,
    pub occlusion: f64,
    pub severity: f64,
    pub raster: Raster,
}

impl DatasetItem {
    pub fn label(&self) -> &'static str {
        if self.positive {
            STOP_LABEL
        } else {
            OTHER_LABEL
        }
    }
}

/// One manifest.json entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub sign_id: String,
    pub file: String,
    pub label: String,
    pub variant: Variant,
    pub spec: SignSpec,
    pub occlusion: f64,
    pub severity: f64,
    #[serde(default)]
    pub perturbations: Vec<Perturbation>,
}

impl ManifestEntry {
    pub fn is_positive(&self) -> bool {
        self.label == STOP_LABEL
    }
}

struct Template {
    shape: Shape,
    fill: NamedColor,
    border: NamedColor,
    legend: Legend,
}

fn negative_templates() -> Vec<Template> {
    use NamedColor::*;
    let t = |shape, fill, border, legend| Template { shape, fill, border, legend };
    let word = |w: &str| Legend::Word(w.to_string());
    vec![
        t(Shape::Circle, White, Red, Legend::Number(30)),
        t(Shape::Circle, White, Red, Legend::Number(45)),
        t(Shape::Circle, White, Red, Legend::Number(60)),
        t(Shape::Circle, White, Red, Legend::Number(30)),
        t(Shape::Circle, White, Red, Legend::Number(45)),
        t(Shape::Triangle, White, Red, Legend::None),
        t(Shape::Triangle, White, Red, Legend::None),
        t(Shape::Rectangle, Blue, White, word("INFO")),
        t(Shape::Rectangle, Blue, White, word("INFO")),
        t(Shape::Rectangle, Blue, White, word("INFO")),
        t(Shape::Rectangle, Blue, White, word("INFO")),
        t(Shape::Rectangle, Green, White, word("EXIT")),
        t(Shape::Rectangle, Green, White, word("EXIT")),
        t(Shape::Diamond, Yellow, Black, Legend::None),
        t(Shape::Circle, Yellow, Red, Legend::Number(30)),
        t(Shape::Circle, Yellow, Red, Legend::Number(60)),
        t(Shape::Circle, Yellow, Red, Legend::Number(45)),
        t(Shape::Circle, Yellow, Red, Legend::Number(60)),
        t(Shape::Triangle, Yellow, Red, Legend::None),
        t(Shape::Triangle, Yellow, Red, Legend::None),
    ]
}

fn item_rng(seed: u64, index: usize) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed ^ (index as u64 + 1).wrapping_mul(0xA24B_AED4_963E_E407))
}

fn jittered_spec(rng: &mut Xoshiro256PlusPlus, id: String, t: &Template, scale: usize) -> SignSpec {
    let spread = (scale / 12) as i64;
    SignSpec {
        sign_id: id,
        shape: t.shape,
        fill_color: t.fill,
        border_color: t.border,
        legend: t.legend.clone(),
        rotation_deg: (rng.gen_range(-100..=100) as f64) / 10.0,
        scale: (scale as i64 + rng.gen_range(-spread..=spread)).max(1) as usize,
        jitter: 6,
        seed: rng.gen(),
    }
}

/// The specs of a dataset, positives first, without rendering.
pub fn dataset_specs(config: &DatasetConfig) -> Vec<SignSpec> {
    let templates = negative_templates();
    let mut order: Vec<usize> = (0..templates.len()).collect();
    order.shuffle(&mut Xoshiro256PlusPlus::seed_from_u64(config.seed));
    let stop = Template { shape: Shape::Octagon, fill: NamedColor::Red, border: NamedColor::White, legend: Legend::Word("STOP".into()) };
    let mut specs = Vec::with_capacity(config.pos + config.neg);
    for i in 0..config.pos {
        specs.push(jittered_spec(&mut item_rng(config.seed, i), format!("p{}", i + 1), &stop, config.scale));
    }
    for i in 0..config.neg {
        let t = &templates[order[i % order.len()]];
        specs.push(jittered_spec(&mut item_rng(config.seed, config.pos + i), format!("n{}", i + 1), t, config.scale));
    }
    specs
}

pub fn generate_dataset(config: &DatasetConfig) -> Result<Vec<DatasetItem>, SceneError> {
    let specs = dataset_specs(config);
    specs
        .into_par_iter()
        .enumerate()
        .map(|(i, spec)| {
            let rendered = render_layers(&spec)?;
            let mut rng = item_rng(config.seed ^ 0x5EED, i);
            let perturbations = layout(config.variant, &rendered, &mut rng);
            let out = perturb(&rendered, &perturbations, rng.gen());
            Ok(DatasetItem {
                positive: i < config.pos,
                spec,
                variant: config.variant,
                perturbations,
                occlusion: out.occlusion,
                severity: out.severity,
                raster: out.raster,
            })
        })
        .collect()
}

pub fn manifest(items: &[DatasetItem]) -> Vec<ManifestEntry> {
    items
        .iter()
        .map(|it| ManifestEntry {
            sign_id: it.spec.sign_id.clone(),
            file: format!("{}.ppm", it.spec.sign_id),
            label: it.label().to_string(),
            variant: it.variant,
            spec: it.spec.clone(),
            occlusion: it.occlusion,
            severity: it.severity,
            perturbations: it.perturbations.clone(),
        })
        .collect()
}

/// Writes one `<sign_id>.ppm` per item plus `manifest.json` into `dir`.
pub fn write_dataset(items: &[DatasetItem], dir: &Path) -> Result<(), SceneError> {
    fs::create_dir_all(dir)?;
    for it in items {
        fs::write(dir.join(format!("{}.ppm", it.spec.sign_id)), it.raster.to_ppm())?;
    }
    let json = serde_json::to_string_pretty(&manifest(items))?;
    fs::write(dir.join("manifest.json"), json + "\n")?;
    Ok(())
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>, SceneError> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

/// Legend box, or a small centred stand-in for signs without a legend.
fn anchor_box(r: &Rendered) -> (Rect, usize) {
    if let Some(b) = r.legend_box {
        return (b, r.cell);
    }
    let c = ((r.geometry.radius * 2.0) / 20.0).max(1.0) as usize;
    let (w, h) = (11 * c, 7 * c);
    let x = (r.geometry.cx - w as f64 / 2.0).round() as usize;
    let y = (r.geometry.cy - h as f64 / 2.0).round() as usize;
    (Rect { x, y, w, h }, c)
}

fn rect_inside(g: &SignGeometry, r: &Rect, margin: f64) -> bool {
    if r.w == 0 || r.h == 0 {
        return false;
    }
    let (x0, y0, x1, y1) = (r.x as f64, r.y as f64, (r.x + r.w) as f64, (r.y + r.h) as f64);
    [(x0, y0), (x1, y0), (x0, y1), (x1, y1)].iter().all(|&(x, y)| g.depth(x, y) >= margin)
}

/// Shrinks `r` about its horizontal centre, and then toward the edge named
/// by `keep_top`, until it lies `margin` inside the outline.
fn fit(g: &SignGeometry, mut r: Rect, margin: f64, keep_top: bool, min: usize) -> Option<Rect> {
    while !rect_inside(g, &r, margin) {
        if r.w > 2 * min + 2 && r.w >= r.h {
            r.x += 1;
            r.w -= 2;
        } else if r.h > min {
            r.h -= 1;
            if !keep_top {
                r.y += 1;
            }
        } else if r.w > min {
            r.x += 1;
            r.w = r.w.saturating_sub(2);
        } else {
            return None;
        }
    }
    Some(r)
}

const STAIN_COLORS: [Rgb; 4] = [[101, 67, 33], [85, 85, 40], [90, 80, 70], [60, 50, 40]];

fn layout(variant: Variant, r: &Rendered, rng: &mut Xoshiro256PlusPlus) -> Vec<Perturbation> {
    let g = &r.geometry;
    let (lb, c) = anchor_box(r);
    let margin = g.border + c as f64;
    let gap = c + 1;
    match variant {
        Variant::Base => vec![],
        Variant::Rp2Subtle => vec![Perturbation::SubtleNoise { amplitude: rng.gen_range(4..=8), seed: rng.gen() }],
        Variant::Rp2Graffiti => {
            // A black band over the legend's top or bottom cell row and a
            // white sticker clear of the legend on the other side.
            let black_top = rng.gen_bool(0.5);
            let bh = rng.gen_range(2 * c..=4 * c);
            let bw = lb.w + 2 * c;
            let bx = lb.x.saturating_sub(c);
            let black = if black_top {
                Rect { x: bx, y: (lb.y + c).saturating_sub(bh), w: bw, h: bh }
            } else {
                Rect { x: bx, y: lb.y + lb.h - c, w: bw, h: bh }
            };
            let wh = rng.gen_range(2 * c..=4 * c);
            let ww = lb.w * rng.gen_range(6..=9) / 10;
            let wx = lb.x + (lb.w - ww) / 2;
            let white = if black_top {
                Rect { x: wx, y: lb.y + lb.h + gap, w: ww, h: wh }
            } else {
                Rect { x: wx, y: lb.y.saturating_sub(gap + wh), w: ww, h: wh }
            };
            let mut out = Vec::new();
            if let Some(rect) = fit(g, black, margin, !black_top, c) {
                out.push(Perturbation::Sticker { rect, color: NamedColor::Black });
            }
            if let Some(rect) = fit(g, white, margin, black_top, c) {
                out.push(Perturbation::Sticker { rect, color: NamedColor::White });
            }
            out
        }
        Variant::Rp2Art => {
            let mut out = Vec::new();
            for (k, (dx, above)) in [(1usize, true), (3, true), (1, false), (3, false)].into_iter().enumerate() {
                let s = rng.gen_range(2 * c..=3 * c);
                let cx = lb.x + lb.w * dx / 4;
                let x = cx.saturating_sub(s / 2);
                let rect = if above {
                    Rect { x, y: lb.y.saturating_sub(gap + s), w: s, h: s }
                } else {
                    Rect { x, y: lb.y + lb.h + gap, w: s, h: s }
                };
                let color = if k % 2 == 0 { NamedColor::Black } else { NamedColor::White };
                if let Some(rect) = fit(g, rect, margin, !above, 1) {
                    out.push(Perturbation::Sticker { rect, color });
                }
            }
            out
        }
        Variant::Advcam => {
            let n = rng.gen_range(1..=3);
            (0..n)
                .filter_map(|k| {
                    let ry = rng.gen_range(1.5..=3.0) * c as f64;
                    let rx = ry * rng.gen_range(1.2..=2.0);
                    let above = k % 2 == 0;
                    let cx = lb.x as f64 + lb.w as f64 * rng.gen_range(0.25..=0.75);
                    let cy = if above { lb.y as f64 - 0.9 * ry } else { (lb.y + lb.h) as f64 + 0.9 * ry };
                    let e = Ellipse { cx, cy, rx, ry, angle_deg: 0.0 };
                    let ok = [(cx - rx, cy), (cx + rx, cy), (cx, cy - ry), (cx, cy + ry)]
                        .iter()
                        .all(|&(x, y)| g.depth(x, y) >= margin);
                    ok.then(|| Perturbation::Stain {
                        ellipse: e,
                        color: STAIN_COLORS[rng.gen_range(0..STAIN_COLORS.len())],
                        alpha: rng.gen_range(0.2..=0.45),
                    })
                })
                .collect()
        }
    }
}
