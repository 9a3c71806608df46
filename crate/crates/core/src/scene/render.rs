use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use super::font::{GlyphFont, GLYPH_H, GLYPH_W};
use super::palette::{NamedColor, BACKGROUND};
use super::raster::Raster;
use super::SceneError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Octagon,
    Circle,
    Triangle,
    Diamond,
    Rectangle,
}

impl Shape {
    pub fn name(self) -> &'static str {
        match self {
            Shape::Octagon => "octagon",
            Shape::Circle => "circle",
            Shape::Triangle => "triangle",
            Shape::Diamond => "diamond",
            Shape::Rectangle => "rectangle",
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Shape {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Shape::Octagon, Shape::Circle, Shape::Triangle, Shape::Diamond, Shape::Rectangle]
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown shape '{s}'"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Legend {
    Word(String),
    Number(u32),
    None,
}

impl Legend {
    pub fn text(&self) -> Option<String> {
        match self {
            Legend::Word(w) => Some(w.to_ascii_uppercase()),
            Legend::Number(n) => Some(n.to_string()),
            Legend::None => None,
        }
    }
}

/// Everything needed to draw one sign. The legend is drawn in the border
/// colour; only the outline rotates, the legend stays upright.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignSpec {
    pub sign_id: String,
    pub shape: Shape,
    pub fill_color: NamedColor,
    pub border_color: NamedColor,
    pub legend: Legend,
    pub rotation_deg: f64,
    /// Diameter of the circumscribed circle, in pixels.
    pub scale: usize,
    /// Per-channel noise amplitude on sign pixels, at most 10.
    #[serde(default)]
    pub jitter: u8,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rect {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

impl Rect {
    pub fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x && x < self.x + self.w && y >= self.y && y < self.y + self.h
    }

    pub fn expand(&self, by: usize, width: usize, height: usize) -> Rect {
        let x = self.x.saturating_sub(by);
        let y = self.y.saturating_sub(by);
        Rect { x, y, w: (self.x + self.w + by).min(width) - x, h: (self.y + self.h + by).min(height) - y }
    }

    pub fn intersects(&self, o: &Rect) -> bool {
        self.x < o.x + o.w && o.x < self.x + self.w && self.y < o.y + o.h && o.y < self.y + self.h
    }
}

/// Outline geometry in raster coordinates (y grows downward).
#[derive(Clone, Debug, PartialEq)]
pub struct SignGeometry {
    pub shape: Shape,
    pub cx: f64,
    pub cy: f64,
    /// Circumradius.
    pub radius: f64,
    pub rotation: f64,
    pub border: f64,
    /// Inward edge normals' directions and distances from the centre.
    edges: Vec<(f64, f64, f64)>,
}

pub const BORDER_FRAC: f64 = 0.08;

impl SignGeometry {
    pub fn new(shape: Shape, scale: usize, rotation_deg: f64, side: usize) -> Self {
        let c = side as f64 / 2.0;
        let radius = scale as f64 / 2.0;
        let rotation = rotation_deg.to_radians();
        let mut edges = Vec::new();
        let mut regular = |n: usize, first_vertex: f64| {
            let apothem = radius * (PI / n as f64).cos();
            for k in 0..n {
                let mid = first_vertex + (2.0 * k as f64 + 1.0) * PI / n as f64 + rotation;
                edges.push((mid.cos(), mid.sin(), apothem));
            }
        };
        match shape {
            Shape::Octagon => regular(8, PI / 8.0),
            Shape::Triangle => regular(3, -PI / 2.0),
            Shape::Diamond => regular(4, 0.0),
            Shape::Circle => {}
            Shape::Rectangle => {
                let (hw, hh) = rect_half_extents(radius);
                for (k, d) in [hw, hh, hw, hh].into_iter().enumerate() {
                    let a = rotation + k as f64 * PI / 2.0;
                    edges.push((a.cos(), a.sin(), d));
                }
            }
        }
        SignGeometry { shape, cx: c, cy: c, radius, rotation, border: BORDER_FRAC * scale as f64, edges }
    }

    /// Distance from (x, y) to the outline, positive inside.
    pub fn depth(&self, x: f64, y: f64) -> f64 {
        let (dx, dy) = (x - self.cx, y - self.cy);
        if self.shape == Shape::Circle {
            return self.radius - dx.hypot(dy);
        }
        self.edges.iter().map(|&(nx, ny, d)| d - (dx * nx + dy * ny)).fold(f64::INFINITY, f64::min)
    }

    /// Depth at the centre of pixel (x, y).
    pub fn pixel_depth(&self, x: usize, y: usize) -> f64 {
        self.depth(x as f64 + 0.5, y as f64 + 0.5)
    }

    /// Radius of the largest circle about the centre inside the fill.
    pub fn inner_radius(&self) -> f64 {
        let a = if self.shape == Shape::Circle {
            self.radius
        } else {
            self.edges.iter().map(|e| e.2).fold(f64::INFINITY, f64::min)
        };
        a - self.border
    }
}

/// Half width and height of the 4:3 rectangle inscribed in the circle.
pub fn rect_half_extents(radius: f64) -> (f64, f64) {
    (0.8 * radius, 0.6 * radius)
}

pub fn raster_side(scale: usize) -> usize {
    scale + 2 * (scale / 10 + 2)
}

/// Glyph cell size for a legend of `chars` characters, or `None` if even
/// one-pixel cells would not fit.
pub fn legend_cell(geom: &SignGeometry, scale: usize, chars: usize) -> Option<usize> {
    if chars == 0 {
        return None;
    }
    let cols = (GLYPH_W + 1) * chars - 1;
    let s = scale as f64;
    let mut limit = (0.6 * s / GLYPH_H as f64).min(0.8 * s / cols as f64);
    if geom.shape == Shape::Rectangle {
        let (hw, hh) = rect_half_extents(geom.radius);
        limit = limit.min(0.8 * (2.0 * hw - 2.0 * geom.border) / cols as f64);
        limit = limit.min(0.8 * (2.0 * hh - 2.0 * geom.border) / GLYPH_H as f64);
    } else {
        // Keep the whole text box well inside the inscribed circle.
        let half_diag = 0.5 * ((cols * cols + GLYPH_H * GLYPH_H) as f64).sqrt();
        limit = limit.min(0.85 * geom.inner_radius() / half_diag);
    }
    let c = limit.floor();
    (c >= 1.0).then_some(c as usize)
}

/// A rendered sign plus the masks perturbation and tests need.
#[derive(Clone, Debug)]
pub struct Rendered {
    pub raster: Raster,
    pub geometry: SignGeometry,
    /// Pixels inside the outline.
    pub sign_mask: Vec<bool>,
    /// Pixels belonging to legend glyph strokes.
    pub glyph_mask: Vec<bool>,
    pub legend_box: Option<Rect>,
    pub cell: usize,
}

impl Rendered {
    pub fn glyph_pixel_count(&self) -> usize {
        self.glyph_mask.iter().filter(|b| **b).count()
    }
}

pub fn render(spec: &SignSpec) -> Result<Raster, SceneError> {
    render_layers(spec).map(|r| r.raster)
}

pub fn render_layers(spec: &SignSpec) -> Result<Rendered, SceneError> {
    render_with_font(spec, &GlyphFont::standard())
}

pub fn render_with_font(spec: &SignSpec, font: &GlyphFont) -> Result<Rendered, SceneError> {
    if spec.scale == 0 {
        return Err(SceneError::ZeroScale);
    }
    let side = raster_side(spec.scale);
    let geom = SignGeometry::new(spec.shape, spec.scale, spec.rotation_deg, side);
    let mut raster = Raster::new(side, side, BACKGROUND);
    let mut sign_mask = vec![false; side * side];
    let mut glyph_mask = vec![false; side * side];

    let (fill, border) = (spec.fill_color.rgb(), spec.border_color.rgb());
    for y in 0..side {
        for x in 0..side {
            let d = geom.pixel_depth(x, y);
            if d >= 0.0 {
                sign_mask[y * side + x] = true;
                raster.set(x, y, if d < geom.border { border } else { fill });
            }
        }
    }

    let mut legend_box = None;
    let mut cell = 0;
    if let Some(text) = spec.legend.text() {
        let n = text.chars().count();
        let c = legend_cell(&geom, spec.scale, n).ok_or_else(|| SceneError::LegendTooLong(text.clone()))?;
        let (w, h) = (((GLYPH_W + 1) * n - 1) * c, GLYPH_H * c);
        let x0 = (geom.cx - w as f64 / 2.0).round() as usize;
        let y0 = (geom.cy - h as f64 / 2.0).round() as usize;
        for (i, ch) in text.chars().enumerate() {
            let g = font.glyph(ch).ok_or(SceneError::NoGlyph(ch))?;
            for (gy, row) in g.iter().enumerate() {
                for (gx, on) in row.iter().enumerate() {
                    if !on {
                        continue;
                    }
                    let px = x0 + ((GLYPH_W + 1) * i + gx) * c;
                    let py = y0 + gy * c;
                    for y in py..py + c {
                        for x in px..px + c {
                            raster.set(x, y, border);
                            glyph_mask[y * side + x] = true;
                        }
                    }
                }
            }
        }
        legend_box = Some(Rect { x: x0, y: y0, w, h });
        cell = c;
    }

    if spec.jitter > 0 {
        let j = spec.jitter.min(10) as i16;
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(spec.seed);
        for (i, px) in raster.pixels.iter_mut().enumerate() {
            if !sign_mask[i] {
                continue;
            }
            for ch in px.iter_mut() {
                *ch = (*ch as i16 + rng.gen_range(-j..=j)).clamp(0, 255) as u8;
            }
        }
    }

    Ok(Rendered { raster, geometry: geom, sign_mask, glyph_mask, legend_box, cell })
}
