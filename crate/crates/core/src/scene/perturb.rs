use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use super::palette::{NamedColor, Rgb};
use super::raster::Raster;
use super::render::{Rect, Rendered};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ellipse {
    pub cx: f64,
    pub cy: f64,
    pub rx: f64,
    pub ry: f64,
    #[serde(default)]
    pub angle_deg: f64,
}

impl Ellipse {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let (s, c) = self.angle_deg.to_radians().sin_cos();
        let (dx, dy) = (x - self.cx, y - self.cy);
        let (u, v) = (dx * c + dy * s, -dx * s + dy * c);
        (u / self.rx).powi(2) + (v / self.ry).powi(2) <= 1.0
    }
}

/// An overlay drawn onto a rendered sign. Every kind only touches pixels
/// inside the sign outline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Perturbation {
    Sticker { rect: Rect, color: NamedColor },
    GraffitiStroke { polyline: Vec<[f64; 2]>, width: f64, color: NamedColor },
    Stain { ellipse: Ellipse, color: Rgb, alpha: f64 },
    /// Uniform integer noise in [-amplitude, amplitude] per channel.
    SubtleNoise { amplitude: u8, seed: u64 },
}

fn segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (vx, vy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = vx * vx + vy * vy;
    let t = if len2 == 0.0 { 0.0 } else { (((p[0] - a[0]) * vx + (p[1] - a[1]) * vy) / len2).clamp(0.0, 1.0) };
    (p[0] - a[0] - t * vx).hypot(p[1] - a[1] - t * vy)
}

impl Perturbation {
    /// A sticker of `severity` times `sign_area` pixels centred on `anchor`
    /// with width/height ratio `aspect`. Larger severities give rectangles
    /// containing the smaller ones.
    pub fn sticker_for_severity(
        anchor: (f64, f64),
        aspect: f64,
        severity: f64,
        sign_area: usize,
        color: NamedColor,
    ) -> Perturbation {
        let area = severity.clamp(0.0, 1.0) * sign_area as f64;
        let w = (area * aspect).sqrt();
        let h = w / aspect;
        let x0 = (anchor.0 - w / 2.0).round().max(0.0) as usize;
        let x1 = (anchor.0 + w / 2.0).round().max(0.0) as usize;
        let y0 = (anchor.1 - h / 2.0).round().max(0.0) as usize;
        let y1 = (anchor.1 + h / 2.0).round().max(0.0) as usize;
        Perturbation::Sticker { rect: Rect { x: x0, y: y0, w: x1 - x0, h: y1 - y0 }, color }
    }

    /// Whether the overlay covers pixel (x, y). Noise covers nothing.
    pub fn covers_pixel(&self, x: usize, y: usize) -> bool {
        let p = [x as f64 + 0.5, y as f64 + 0.5];
        match self {
            Perturbation::Sticker { rect, .. } => rect.contains(x, y),
            Perturbation::GraffitiStroke { polyline, width, .. } => match polyline.as_slice() {
                [] => false,
                [a] => segment_distance(p, *a, *a) <= width / 2.0,
                pts => pts.windows(2).any(|w| segment_distance(p, w[0], w[1]) <= width / 2.0),
            },
            Perturbation::Stain { ellipse, .. } => ellipse.contains(p[0], p[1]),
            Perturbation::SubtleNoise { .. } => false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Perturbed {
    pub raster: Raster,
    /// Glyph pixels covered by some overlay over all glyph pixels.
    pub occlusion: f64,
    /// Sign pixels affected over all sign pixels.
    pub severity: f64,
}

fn blend(px: Rgb, c: Rgb, alpha: f64) -> Rgb {
    let mut out = [0u8; 3];
    for i in 0..3 {
        out[i] = ((1.0 - alpha) * px[i] as f64 + alpha * c[i] as f64).round().clamp(0.0, 255.0) as u8;
    }
    out
}

/// Applies `perturbations` in order. Pixels outside the sign are never
/// modified.
pub fn perturb(rendered: &Rendered, perturbations: &[Perturbation], seed: u64) -> Perturbed {
    let mut raster = rendered.raster.clone();
    let width = raster.width;
    let mut covered = vec![false; raster.len()];
    let mut affected = vec![false; raster.len()];
    for (k, p) in perturbations.iter().enumerate() {
        if let Perturbation::SubtleNoise { amplitude, seed: s } = p {
            let a = *amplitude as i16;
            let mixed = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ s.rotate_left(17) ^ k as u64;
            let mut rng = Xoshiro256PlusPlus::seed_from_u64(mixed);
            for (i, px) in raster.pixels.iter_mut().enumerate() {
                if !rendered.sign_mask[i] {
                    continue;
                }
                for ch in px.iter_mut() {
                    let d: i16 = rng.gen_range(-a..=a);
                    *ch = (*ch as i16 + d).clamp(0, 255) as u8;
                }
                affected[i] |= a > 0;
            }
            continue;
        }
        for i in 0..raster.len() {
            let (x, y) = (i % width, i / width);
            if !rendered.sign_mask[i] || !p.covers_pixel(x, y) {
                continue;
            }
            let px = &mut raster.pixels[i];
            *px = match p {
                Perturbation::Sticker { color, .. } | Perturbation::GraffitiStroke { color, .. } => color.rgb(),
                Perturbation::Stain { color, alpha, .. } => blend(*px, *color, alpha.clamp(0.0, 1.0)),
                Perturbation::SubtleNoise { .. } => unreachable!(),
            };
            covered[i] = true;
            affected[i] = true;
        }
    }
    let glyphs = rendered.glyph_pixel_count();
    let hit = (0..covered.len()).filter(|&i| covered[i] && rendered.glyph_mask[i]).count();
    let sign = rendered.sign_mask.iter().filter(|b| **b).count();
    let touched = affected.iter().filter(|b| **b).count();
    Perturbed {
        raster,
        occlusion: if glyphs == 0 { 0.0 } else { hit as f64 / glyphs as f64 },
        severity: if sign == 0 { 0.0 } else { touched as f64 / sign as f64 },
    }
}
