use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::FactextError;
use crate::scene::{NamedColor, Shape};

/// An 8-connected region of a mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub pixels: Vec<usize>,
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

impl Component {
    pub fn width(&self) -> usize {
        self.x1 - self.x0
    }

    pub fn height(&self) -> usize {
        self.y1 - self.y0
    }

    pub fn area(&self) -> usize {
        self.pixels.len()
    }
}

/// 8-connected components in raster-scan order of their first pixel.
pub fn components(mask: &[bool], w: usize, h: usize) -> Vec<Component> {
    let mut seen = vec![false; mask.len()];
    let mut out = Vec::new();
    for start in 0..mask.len() {
        if !mask[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut c = Component { pixels: Vec::new(), x0: usize::MAX, y0: usize::MAX, x1: 0, y1: 0 };
        while let Some(i) = queue.pop_front() {
            let (x, y) = (i % w, i / w);
            c.pixels.push(i);
            c.x0 = c.x0.min(x);
            c.y0 = c.y0.min(y);
            c.x1 = c.x1.max(x + 1);
            c.y1 = c.y1.max(y + 1);
            for ny in y.saturating_sub(1)..=(y + 1).min(h - 1) {
                for nx in x.saturating_sub(1)..=(x + 1).min(w - 1) {
                    let j = ny * w + nx;
                    if mask[j] && !seen[j] {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
        }
        c.pixels.sort_unstable();
        out.push(c);
    }
    out
}

/// Clockwise in image coordinates, starting west.
const DIRS: [(i64, i64); 8] = [(-1, 0), (-1, -1), (0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1)];

/// Outer boundary of the region containing the first set pixel of `mask`
/// in raster order, by Moore-neighbour tracing.
pub fn moore_trace(mask: &[bool], w: usize, h: usize) -> Vec<(usize, usize)> {
    let Some(start) = mask.iter().position(|b| *b) else {
        return Vec::new();
    };
    let inside = |x: i64, y: i64| x >= 0 && y >= 0 && (x as usize) < w && (y as usize) < h && mask[y as usize * w + x as usize];
    let s = ((start % w) as i64, (start / w) as i64);
    // From pixel p with backtrack direction b, the next boundary pixel and
    // its backtrack direction.
    let step = |p: (i64, i64), b: usize| -> Option<((i64, i64), usize)> {
        for i in 1..=8 {
            let d = (b + i) % 8;
            let q = (p.0 + DIRS[d].0, p.1 + DIRS[d].1);
            if inside(q.0, q.1) {
                let prev = DIRS[(d + 7) % 8];
                let rel = (prev.0 - DIRS[d].0, prev.1 - DIRS[d].1);
                let nb = DIRS.iter().position(|&o| o == rel).expect("adjacent offsets differ by a unit step");
                return Some((q, nb));
            }
        }
        None
    };
    let Some((first, b1)) = step(s, 0) else {
        return vec![(s.0 as usize, s.1 as usize)];
    };
    let mut out = vec![(s.0 as usize, s.1 as usize)];
    let (mut cur, mut b) = (first, b1);
    let limit = 4 * mask.len() + 8;
    while out.len() < limit {
        let (next, nb) = step(cur, b).expect("a traced pixel has a neighbour");
        if cur == s && next == first {
            break;
        }
        out.push((cur.0 as usize, cur.1 as usize));
        cur = next;
        b = nb;
    }
    out
}

fn point_segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (vx, vy) = (b.0 - a.0, b.1 - a.1);
    let len2 = vx * vx + vy * vy;
    if len2 == 0.0 {
        return (p.0 - a.0).hypot(p.1 - a.1);
    }
    let t = (((p.0 - a.0) * vx + (p.1 - a.1) * vy) / len2).clamp(0.0, 1.0);
    (p.0 - a.0 - t * vx).hypot(p.1 - a.1 - t * vy)
}

/// Douglas-Peucker over an open chain; both endpoints are kept.
pub fn douglas_peucker(pts: &[(f64, f64)], eps: f64) -> Vec<(f64, f64)> {
    if pts.len() < 3 {
        return pts.to_vec();
    }
    let (a, b) = (pts[0], pts[pts.len() - 1]);
    let (idx, dmax) = pts[1..pts.len() - 1]
        .iter()
        .enumerate()
        .map(|(i, p)| (i + 1, point_segment_distance(*p, a, b)))
        .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    if dmax <= eps {
        return vec![a, b];
    }
    let mut left = douglas_peucker(&pts[..=idx], eps);
    let right = douglas_peucker(&pts[idx..], eps);
    left.pop();
    left.extend(right);
    left
}

/// Simplified closed polygon of a traced boundary.
pub fn approx_polygon(boundary: &[(usize, usize)], eps_frac: f64) -> Vec<(f64, f64)> {
    let pts: Vec<(f64, f64)> = boundary.iter().map(|&(x, y)| (x as f64, y as f64)).collect();
    let n = pts.len();
    if n < 3 {
        return pts;
    }
    let perimeter: f64 = (0..n).map(|i| {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        (a.0 - b.0).hypot(a.1 - b.1)
    }).sum();
    let eps = eps_frac * perimeter;
    let (cx, cy) = centroid(&pts);
    let far = |from: (f64, f64)| {
        (0..n).max_by(|&i, &j| {
            let di = (pts[i].0 - from.0).hypot(pts[i].1 - from.1);
            let dj = (pts[j].0 - from.0).hypot(pts[j].1 - from.1);
            di.partial_cmp(&dj).unwrap().then(j.cmp(&i))
        }).unwrap()
    };
    let a = far((cx, cy));
    let b = far(pts[a]);
    let (lo, hi) = (a.min(b), a.max(b));
    let chain1: Vec<_> = pts[lo..=hi].to_vec();
    let chain2: Vec<_> = pts[hi..].iter().chain(&pts[..=lo]).copied().collect();
    let mut poly = douglas_peucker(&chain1, eps);
    poly.pop();
    let mut second = douglas_peucker(&chain2, eps);
    second.pop();
    poly.extend(second);
    // Drop vertices that sit on the line through their neighbours.
    loop {
        let m = poly.len();
        if m <= 3 {
            break;
        }
        let weakest = (0..m)
            .map(|i| (i, point_segment_distance(poly[i], poly[(i + m - 1) % m], poly[(i + 1) % m])))
            .min_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        if weakest.1 > eps {
            break;
        }
        poly.remove(weakest.0);
    }
    poly
}

fn centroid(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n)
}

/// Coefficient of variation of boundary distances from their centroid.
pub fn radius_cv(boundary: &[(usize, usize)]) -> f64 {
    let pts: Vec<(f64, f64)> = boundary.iter().map(|&(x, y)| (x as f64, y as f64)).collect();
    let (cx, cy) = centroid(&pts);
    let r: Vec<f64> = pts.iter().map(|p| (p.0 - cx).hypot(p.1 - cy)).collect();
    let mean = r.iter().sum::<f64>() / r.len() as f64;
    if mean == 0.0 {
        return f64::INFINITY;
    }
    let var = r.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / r.len() as f64;
    var.sqrt() / mean
}

pub const CIRCLE_CV: f64 = 0.012;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeClass {
    Known(Shape),
    Unknown,
}

impl fmt::Display for ShapeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeClass::Known(s) => write!(f, "{s}"),
            ShapeClass::Unknown => f.write_str("unknown"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContourPoly {
    pub vertices: Vec<(f64, f64)>,
    pub source_color: NamedColor,
}

fn axis_aligned(poly: &[(f64, f64)]) -> bool {
    let m = poly.len();
    (0..m).all(|i| {
        let (a, b) = (poly[i], poly[(i + 1) % m]);
        let ang = (b.1 - a.1).atan2(b.0 - a.0).to_degrees().rem_euclid(90.0);
        ang <= 25.0 || ang >= 65.0
    })
}

pub fn classify_polygon(poly: &[(f64, f64)]) -> ShapeClass {
    match poly.len() {
        3 => ShapeClass::Known(Shape::Triangle),
        4 if axis_aligned(poly) => ShapeClass::Known(Shape::Rectangle),
        4 => ShapeClass::Known(Shape::Diamond),
        8 => ShapeClass::Known(Shape::Octagon),
        n if n > 8 => ShapeClass::Known(Shape::Circle),
        _ => ShapeClass::Unknown,
    }
}

/// Shape of the largest region of `mask`, with its simplified outline.
pub fn detect_shape_poly(
    mask: &[bool],
    w: usize,
    h: usize,
    color: NamedColor,
    eps_frac: f64,
) -> Result<(ShapeClass, ContourPoly), FactextError> {
    let largest = components(mask, w, h).into_iter().max_by_key(|c| (c.area(), std::cmp::Reverse(c.pixels[0])));
    let Some(region) = largest else {
        return Err(FactextError::EmptyMask(color.to_string()));
    };
    let mut only = vec![false; mask.len()];
    for &i in &region.pixels {
        only[i] = true;
    }
    let boundary = moore_trace(&only, w, h);
    let poly = approx_polygon(&boundary, eps_frac);
    let class = if boundary.len() >= 16 && radius_cv(&boundary) < CIRCLE_CV {
        ShapeClass::Known(Shape::Circle)
    } else {
        classify_polygon(&poly)
    };
    Ok((class, ContourPoly { vertices: poly, source_color: color }))
}
