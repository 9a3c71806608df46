use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::contour::{components, Component};
use crate::scene::{nearest, Glyph, GlyphFont, NamedColor, Raster, BACKGROUND, GLYPH_H, GLYPH_W};

/// Minimum bit agreement (out of 35) for a component to count as a glyph.
pub const ACCEPT_BITS: usize = 26;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum TokenValue {
    Word(String),
    Number(u64),
}

/// A run of characters read from one legend row. `raw` keeps rejected
/// positions as `?`; `scores` holds the best agreement per position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub value: TokenValue,
    pub raw: String,
    pub scores: Vec<usize>,
}

/// Size of the multiset intersection of the letters of `a` and `b`,
/// ignoring case.
pub fn letters_in_common(a: &str, b: &str) -> usize {
    let count = |s: &str| {
        let mut m = BTreeMap::new();
        for c in s.chars().filter(|c| c.is_ascii_alphabetic()) {
            *m.entry(c.to_ascii_uppercase()).or_insert(0usize) += 1;
        }
        m
    };
    let (ma, mb) = (count(a), count(b));
    ma.iter().map(|(c, n)| (*n).min(*mb.get(c).unwrap_or(&0))).sum()
}

/// Pixels belonging to the sign: the largest non-background region with
/// its holes filled.
pub fn sign_region(raster: &Raster) -> Vec<bool> {
    let (w, h) = (raster.width, raster.height);
    let fg: Vec<bool> = raster
        .pixels
        .iter()
        .map(|p| p.iter().zip(&BACKGROUND).any(|(a, b)| (*a as i16 - *b as i16).abs() > 24))
        .collect();
    let Some(main) = components(&fg, w, h).into_iter().max_by_key(|c| c.area()) else {
        return vec![false; raster.len()];
    };
    let mut solid = vec![false; raster.len()];
    for &i in &main.pixels {
        solid[i] = true;
    }
    // Flood the outside from the frame, 4-connected.
    let mut outside = vec![false; raster.len()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for y in 0..h {
        for x in 0..w {
            if (x == 0 || y == 0 || x == w - 1 || y == h - 1) && !solid[y * w + x] {
                outside[y * w + x] = true;
                queue.push_back(y * w + x);
            }
        }
    }
    while let Some(i) = queue.pop_front() {
        let (x, y) = (i % w, i / w);
        let mut visit = |j: usize| {
            if !solid[j] && !outside[j] {
                outside[j] = true;
                queue.push_back(j);
            }
        };
        if x > 0 {
            visit(i - 1);
        }
        if x + 1 < w {
            visit(i + 1);
        }
        if y > 0 {
            visit(i - w);
        }
        if y + 1 < h {
            visit(i + w);
        }
    }
    outside.iter().map(|o| !o).collect()
}

fn on_region_edge(region: &[bool], w: usize, h: usize, i: usize) -> bool {
    let (x, y) = (i % w, i / w);
    if x == 0 || y == 0 || x + 1 == w || y + 1 == h {
        return true;
    }
    [i - 1, i + 1, i - w, i + w, i - w - 1, i - w + 1, i + w - 1, i + w + 1].iter().any(|&j| !region[j])
}

fn majority(classes: impl Iterator<Item = Option<NamedColor>>) -> Option<NamedColor> {
    let mut counts = BTreeMap::new();
    for c in classes.flatten() {
        *counts.entry(c).or_insert(0usize) += 1;
    }
    counts.into_iter().max_by_key(|&(c, n)| (n, std::cmp::Reverse(c))).map(|(c, _)| c)
}

/// Most common horizontal run length (at least 2 pixels) over the given
/// components; ties go to the shorter run.
fn cell_size(comps: &[&Component], label: &[usize], w: usize) -> Option<usize> {
    let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
    for (k, c) in comps.iter().enumerate() {
        for y in c.y0..c.y1 {
            let mut run = 0;
            for x in c.x0..=c.x1 {
                if x < c.x1 && label[y * w + x] == k {
                    run += 1;
                } else {
                    if run >= 2 {
                        *hist.entry(run).or_insert(0) += 1;
                    }
                    run = 0;
                }
            }
        }
    }
    hist.into_iter().max_by_key(|&(len, n)| (n, std::cmp::Reverse(len))).map(|(len, _)| len)
}

fn union(a: &Component, b: &Component) -> Component {
    let mut pixels = a.pixels.clone();
    pixels.extend(&b.pixels);
    pixels.sort_unstable();
    Component { pixels, x0: a.x0.min(b.x0), y0: a.y0.min(b.y0), x1: a.x1.max(b.x1), y1: a.y1.max(b.y1) }
}

/// Best match over the plausible glyph-grid placements of `comp`, as
/// (score, known cells, char). Cells whose pixel is `hidden` count as
/// agreeing but not as known.
fn match_glyph(
    comp: &Component,
    own: &[bool],
    hidden: &[bool],
    (w, h): (usize, usize),
    c: usize,
    font: &GlyphFont,
) -> (usize, usize, char) {
    let mut origins_y = vec![comp.y0 as i64];
    let bottom = comp.y1 as i64 - (GLYPH_H * c) as i64;
    if bottom != comp.y0 as i64 {
        origins_y.push(bottom);
    }
    let mut best = (0, 0, '?');
    for &oy in &origins_y {
        for k in 0..GLYPH_W as i64 {
            let ox = comp.x0 as i64 - k * c as i64;
            if ox + ((GLYPH_W * c) as i64) < comp.x1 as i64 {
                continue;
            }
            let mut g: Glyph = [[false; GLYPH_W]; GLYPH_H];
            let mut unknown: Glyph = [[false; GLYPH_W]; GLYPH_H];
            for gy in 0..GLYPH_H {
                for gx in 0..GLYPH_W {
                    let px = ox + (gx * c + c / 2) as i64;
                    let py = oy + (gy * c + c / 2) as i64;
                    if px >= 0 && py >= 0 && (px as usize) < w && (py as usize) < h {
                        let i = py as usize * w + px as usize;
                        g[gy][gx] = own[i];
                        unknown[gy][gx] = hidden[i];
                    }
                }
            }
            let n_unknown = unknown.iter().flatten().filter(|b| **b).count();
            for (ch, glyph) in font.chars() {
                let mut s = 0;
                for gy in 0..GLYPH_H {
                    for gx in 0..GLYPH_W {
                        if unknown[gy][gx] || g[gy][gx] == glyph[gy][gx] {
                            s += 1;
                        }
                    }
                }
                if s > best.0 || (s == best.0 && GLYPH_W * GLYPH_H - n_unknown > best.1) {
                    best = (s, GLYPH_W * GLYPH_H - n_unknown, ch);
                }
            }
        }
    }
    best
}

fn make_token(chars: &[(char, usize)]) -> Option<Token> {
    let text: String = chars.iter().map(|p| p.0).filter(|c| *c != '?').collect();
    if text.chars().count() < 2 {
        return None;
    }
    let value = if text.chars().all(|c| c.is_ascii_digit()) {
        TokenValue::Number(text.parse().ok()?)
    } else {
        TokenValue::Word(text)
    };
    Some(Token { value, raw: chars.iter().map(|p| p.0).collect(), scores: chars.iter().map(|p| p.1).collect() })
}

/// Splits a row of read characters at letter/digit boundaries.
fn split_kinds(chars: &[(char, usize)]) -> Vec<Vec<(char, usize)>> {
    let mut out: Vec<Vec<(char, usize)>> = Vec::new();
    let mut kind = None;
    for &p in chars {
        let k = if p.0 == '?' { kind } else { Some(p.0.is_ascii_digit()) };
        if k != kind && kind.is_some() && p.0 != '?' {
            out.push(Vec::new());
        }
        if out.is_empty() {
            out.push(Vec::new());
        }
        out.last_mut().unwrap().push(p);
        kind = k;
    }
    out
}

/// Reads the legend drawn inside the sign: glyph-sized components of the
/// border colour that do not touch the sign's edge.
pub fn read_legend(raster: &Raster, font: &GlyphFont) -> Vec<Token> {
    let (w, h) = (raster.width, raster.height);
    let region = sign_region(raster);
    let classes: Vec<Option<NamedColor>> = raster.pixels.iter().map(|p| nearest(*p)).collect();
    let ring = majority((0..raster.len()).filter(|&i| region[i] && on_region_edge(&region, w, h, i)).map(|i| classes[i]));
    let fill = majority((0..raster.len()).filter(|&i| region[i]).map(|i| classes[i]));
    let Some(ink) = ring.filter(|r| Some(*r) != fill) else {
        return Vec::new();
    };
    let mask: Vec<bool> = (0..raster.len()).map(|i| region[i] && classes[i] == Some(ink)).collect();
    // Pixels painted over by something that is neither ink nor fill.
    let hidden: Vec<bool> =
        (0..raster.len()).map(|i| region[i] && classes[i] != Some(ink) && classes[i] != fill).collect();
    let comps: Vec<Component> = components(&mask, w, h)
        .into_iter()
        .filter(|c| !c.pixels.iter().any(|&i| on_region_edge(&region, w, h, i)))
        .collect();
    let textured: Vec<&Component> =
        comps.iter().filter(|c| c.height() >= 3 && (c.area() as f64) < 0.85 * (c.width() * c.height()) as f64).collect();
    let mut label = vec![usize::MAX; raster.len()];
    for (k, c) in textured.iter().enumerate() {
        for &i in &c.pixels {
            label[i] = k;
        }
    }
    let Some(c) = cell_size(&textured, &label, w) else {
        return Vec::new();
    };
    let (max_w, max_h) = (GLYPH_W * c + 1, GLYPH_H * c + 1);

    // Merge fragments that together still fit one glyph cell box.
    let mut parts: Vec<Component> = comps;
    loop {
        let mut merged = false;
        'outer: for i in 0..parts.len() {
            if parts[i].height() + c >= 5 * c {
                continue;
            }
            for j in i + 1..parts.len() {
                if parts[j].height() + c >= 5 * c {
                    continue;
                }
                let u = union(&parts[i], &parts[j]);
                if u.width() <= max_w && u.height() <= max_h {
                    parts[i] = u;
                    parts.remove(j);
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            break;
        }
    }

    let mut cands: Vec<Component> = parts
        .into_iter()
        .filter(|p| p.height() + c >= 5 * c && p.height() <= max_h + 1 && p.width() <= max_w + 1)
        .collect();
    cands.sort_by_key(|p| (p.y0 + p.y1, p.x0));

    // Group by vertical overlap into rows.
    let mut rows: Vec<(usize, usize, Vec<Component>)> = Vec::new();
    for p in cands {
        let row = rows.iter_mut().find(|(y0, y1, _)| {
            let overlap = (*y1).min(p.y1).saturating_sub((*y0).max(p.y0));
            2 * overlap >= (y1 - y0).min(p.height())
        });
        match row {
            Some(r) => {
                r.0 = r.0.min(p.y0);
                r.1 = r.1.max(p.y1);
                r.2.push(p);
            }
            None => rows.push((p.y0, p.y1, vec![p])),
        }
    }

    let mut tokens = Vec::new();
    for (_, _, mut members) in rows {
        members.sort_by_key(|p| p.x0);
        let mut chars: Vec<(char, usize)> = Vec::new();
        for p in &members {
            let mut own = vec![false; raster.len()];
            for &i in &p.pixels {
                own[i] = true;
            }
            let (score, known, ch) = match_glyph(p, &own, &hidden, (w, h), c, font);
            chars.push(if score >= ACCEPT_BITS && known >= ACCEPT_BITS { (ch, score) } else { ('?', score) });
        }
        for part in split_kinds(&chars) {
            tokens.extend(make_token(&part));
        }
    }
    tokens
}
