use serde::{Deserialize, Serialize};

use crate::scene::{NamedColor, Raster, Rgb};

/// Hue in degrees [0, 360), saturation and value in [0, 1].
pub fn rgb_to_hsv(px: Rgb) -> (f64, f64, f64) {
    let [r, g, b] = px.map(|c| c as f64 / 255.0);
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let delta = max - min;
    let h = if delta == 0.0 {
        0.0
    } else if max == r {
        60.0 * ((g - b) / delta).rem_euclid(6.0)
    } else if max == g {
        60.0 * ((b - r) / delta + 2.0)
    } else {
        60.0 * ((r - g) / delta + 4.0)
    };
    let s = if max == 0.0 { 0.0 } else { delta / max };
    (h, s, max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HsvBox {
    pub color: NamedColor,
    pub hue: Vec<[f64; 2]>,
    pub sat: [f64; 2],
    pub val: [f64; 2],
}

impl HsvBox {
    pub fn contains(&self, (h, s, v): (f64, f64, f64)) -> bool {
        self.hue.iter().any(|r| h >= r[0] && h <= r[1])
            && s >= self.sat[0]
            && s <= self.sat[1]
            && v >= self.val[0]
            && v <= self.val[1]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColorConfig {
    pub area_threshold: f64,
    pub boxes: Vec<HsvBox>,
}

impl Default for ColorConfig {
    fn default() -> Self {
        serde_json::from_str(include_str!("../../data/hsv.json")).expect("bundled hsv.json is valid")
    }
}

impl ColorConfig {
    pub fn classify(&self, px: Rgb) -> Option<NamedColor> {
        let hsv = rgb_to_hsv(px);
        self.boxes.iter().find(|b| b.contains(hsv)).map(|b| b.color)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ColorMask {
    pub color: NamedColor,
    pub width: usize,
    pub height: usize,
    pub mask: Vec<bool>,
    pub area_fraction: f64,
}

impl ColorMask {
    pub fn count(&self) -> usize {
        self.mask.iter().filter(|b| **b).count()
    }
}

/// 3×3 erosion (`min`) or dilation (`max`); neighbours outside the grid
/// are ignored.
fn morph(mask: &[bool], w: usize, h: usize, dilate: bool) -> Vec<bool> {
    let mut out = vec![false; mask.len()];
    for y in 0..h {
        for x in 0..w {
            let mut acc = !dilate;
            for ny in y.saturating_sub(1)..=(y + 1).min(h - 1) {
                for nx in x.saturating_sub(1)..=(x + 1).min(w - 1) {
                    let v = mask[ny * w + nx];
                    if dilate {
                        acc |= v;
                    } else {
                        acc &= v;
                    }
                }
            }
            out[y * w + x] = acc;
        }
    }
    out
}

pub fn open_close(mask: &[bool], w: usize, h: usize) -> Vec<bool> {
    if w == 0 || h == 0 {
        return mask.to_vec();
    }
    let opened = morph(&morph(mask, w, h, false), w, h, true);
    morph(&morph(&opened, w, h, true), w, h, false)
}

/// One mask per palette colour whose cleaned area reaches the threshold,
/// in palette order.
pub fn classify_colors(raster: &Raster, config: &ColorConfig) -> Vec<ColorMask> {
    let labels: Vec<Option<NamedColor>> = raster.pixels.iter().map(|p| config.classify(*p)).collect();
    let total = raster.len().max(1) as f64;
    NamedColor::ALL
        .iter()
        .filter_map(|&c| {
            let raw: Vec<bool> = labels.iter().map(|l| *l == Some(c)).collect();
            if !raw.iter().any(|b| *b) {
                return None;
            }
            let mask = open_close(&raw, raster.width, raster.height);
            let area_fraction = mask.iter().filter(|b| **b).count() as f64 / total;
            (area_fraction >= config.area_threshold).then_some(ColorMask {
                color: c,
                width: raster.width,
                height: raster.height,
                mask,
                area_fraction,
            })
        })
        .collect()
}
