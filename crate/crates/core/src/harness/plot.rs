use std::collections::BTreeMap;
use std::fmt::Write;

use super::HarnessError;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 140.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const BASELINE: f64 = 0.5;

/// Mean accuracy per train size for each engine in a learning-curve CSV.
/// Uses the `mean` summary rows when present, otherwise averages the
/// per-repeat rows. The `baseline` pseudo-engine is skipped.
fn series(csv_text: &str) -> Result<BTreeMap<String, BTreeMap<usize, f64>>, HarnessError> {
    let mut rdr = csv::Reader::from_reader(csv_text.as_bytes());
    let headers = rdr.headers().map_err(|e| HarnessError::MalformedCsv(e.to_string()))?.clone();
    let col = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| HarnessError::MalformedCsv(format!("missing column '{name}'")))
    };
    let (ce, cn, cr, ca) = (col("engine")?, col("n")?, col("repeat")?, col("accuracy")?);
    let mut means: BTreeMap<String, BTreeMap<usize, f64>> = BTreeMap::new();
    let mut sums: BTreeMap<String, BTreeMap<usize, (f64, usize)>> = BTreeMap::new();
    let mut rows = 0;
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| HarnessError::MalformedCsv(e.to_string()))?;
        let field = |c: usize| rec.get(c).ok_or_else(|| HarnessError::MalformedCsv(format!("row {}: too few fields", i + 2)));
        let engine = field(ce)?.to_string();
        let n: usize = field(cn)?.parse().map_err(|_| HarnessError::MalformedCsv(format!("row {}: bad n", i + 2)))?;
        let acc: f64 =
            field(ca)?.parse().map_err(|_| HarnessError::MalformedCsv(format!("row {}: bad accuracy", i + 2)))?;
        rows += 1;
        if engine == "baseline" {
            continue;
        }
        match field(cr)? {
            "mean" => {
                means.entry(engine).or_default().insert(n, acc);
            }
            "std" => {}
            r => {
                r.parse::<usize>().map_err(|_| HarnessError::MalformedCsv(format!("row {}: bad repeat", i + 2)))?;
                let e = sums.entry(engine).or_default().entry(n).or_insert((0.0, 0));
                e.0 += acc;
                e.1 += 1;
            }
        }
    }
    if rows == 0 {
        return Err(HarnessError::MalformedCsv("no data rows".into()));
    }
    for (engine, by_n) in sums {
        let m = means.entry(engine).or_default();
        for (n, (s, k)) in by_n {
            m.entry(n).or_insert(s / k as f64);
        }
    }
    Ok(means)
}

pub fn plot_svg_from_csv(csv_text: &str) -> Result<String, HarnessError> {
    let s = series(csv_text)?;
    Ok(plot_svg(&s))
}

/// Line chart of mean accuracy against train size, one polyline per
/// engine plus the 0.5 baseline.
pub fn plot_svg(series: &BTreeMap<String, BTreeMap<usize, f64>>) -> String {
    let mut sizes: Vec<usize> = series.values().flat_map(|m| m.keys().copied()).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.is_empty() {
        sizes.push(1);
    }
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let x_of = |n: usize| {
        let i = sizes.iter().position(|&s| s == n).unwrap_or(0);
        if sizes.len() == 1 {
            LEFT + pw / 2.0
        } else {
            LEFT + pw * i as f64 / (sizes.len() - 1) as f64
        }
    };
    let y_of = |a: f64| TOP + ph * (1.0 - a.clamp(0.0, 1.0));

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let (x0, x1, y0, y1) = (LEFT, LEFT + pw, TOP, TOP + ph);
    let _ = writeln!(svg, r#"<line x1="{x0}" y1="{y1}" x2="{x1}" y2="{y1}" stroke="black"/>"#);
    let _ = writeln!(svg, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#);
    for k in 0..=5 {
        let a = k as f64 / 5.0;
        let y = y_of(a);
        let _ = writeln!(svg, r##"<line x1="{:.2}" y1="{y:.2}" x2="{x0}" y2="{y:.2}" stroke="#999"/>"##, x0 - 4.0);
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{a:.1}</text>"#, x0 - 8.0, y + 4.0);
    }
    for &n in &sizes {
        let x = x_of(n);
        let _ = writeln!(svg, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{n}</text>"#, y1 + 18.0);
    }
    let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">examples per class</text>"#, LEFT + pw / 2.0, HEIGHT - 10.0);
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{:.2}" text-anchor="middle" transform="rotate(-90 14 {:.2})">mean accuracy</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );

    let mut legend = Vec::new();
    for (i, (engine, by_n)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = by_n.iter().map(|(&n, &a)| format!("{:.2},{:.2}", x_of(n), y_of(a))).collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="series" data-engine="{engine}" fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            pts.join(" ")
        );
        for (&n, &a) in by_n {
            let _ = writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, x_of(n), y_of(a));
        }
        legend.push((engine.clone(), color, false));
    }
    let bpts: Vec<String> = sizes.iter().map(|&n| format!("{:.2},{:.2}", x_of(n), y_of(BASELINE))).collect();
    let bpts = if bpts.len() == 1 {
        vec![format!("{x0:.2},{:.2}", y_of(BASELINE)), format!("{x1:.2},{:.2}", y_of(BASELINE))]
    } else {
        bpts
    };
    let _ = writeln!(
        svg,
        r##"<polyline class="baseline" fill="none" stroke="#777" stroke-width="1.5" stroke-dasharray="6 4" points="{}"/>"##,
        bpts.join(" ")
    );
    legend.push(("baseline 0.5".into(), "#777", true));
    for (i, (name, color, dashed)) in legend.iter().enumerate() {
        let y = TOP + 10.0 + 20.0 * i as f64;
        let lx = x1 + 15.0;
        let dash = if *dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(svg, r#"<line x1="{lx:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="2"{dash}/>"#, lx + 24.0);
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}">{name}</text>"#, lx + 30.0, y + 4.0);
    }
    svg.push_str("</svg>\n");
    svg
}
