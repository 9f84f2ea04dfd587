//! Deterministic SVG plots of sweep files.

use std::fmt::Write as _;

use crate::csvio::SweepData;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 540.0;
const LEFT: f64 = 85.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;
const TICKS: usize = 5;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn span(values: impl Iterator<Item = f64>, empty: (f64, f64)) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        empty
    } else if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn axes(out: &mut String, f: &Frame, x_label: &str, y_label: &str) {
    let (x0, x1) = (f.px(f.x.0), f.px(f.x.1));
    let (y0, y1) = (f.py(f.y.0), f.py(f.y.1));
    let _ = writeln!(
        out,
        r#"<g stroke="black" stroke-width="1" fill="none"><path d="M{x0:.3} {y1:.3}V{y0:.3}H{x1:.3}"/></g>"#
    );
    let _ = writeln!(out, r#"<g font-family="sans-serif" font-size="11" fill="black">"#);
    for i in 0..TICKS {
        let t = i as f64 / (TICKS - 1) as f64;
        let xv = f.x.0 + t * (f.x.1 - f.x.0);
        let yv = f.y.0 + t * (f.y.1 - f.y.0);
        let (px, py) = (f.px(xv), f.py(yv));
        let _ = writeln!(
            out,
            r#"<line x1="{px:.3}" y1="{y0:.3}" x2="{px:.3}" y2="{:.3}" stroke="black"/><text x="{px:.3}" y="{:.3}" text-anchor="middle">{xv:.3}</text>"#,
            y0 + 4.0,
            y0 + 18.0
        );
        let _ = writeln!(
            out,
            r#"<line x1="{:.3}" y1="{py:.3}" x2="{x0:.3}" y2="{py:.3}" stroke="black"/><text x="{:.3}" y="{:.3}" text-anchor="end">{yv:.3}</text>"#,
            x0 - 4.0,
            x0 - 7.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">{x_label}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{:.3}" text-anchor="middle" transform="rotate(-90 14 {:.3})">{y_label}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );
    let _ = writeln!(out, "</g>");
}

fn radius(multiplicity: u64) -> f64 {
    (0.8 + 0.4 * (multiplicity.max(1) as f64).ln()).min(4.0)
}

pub fn render(data: &SweepData) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    match data {
        SweepData::Butterfly(rows) => {
            let frame = Frame {
                x: span(rows.iter().map(|r| r.0), (0.0, 1.0)),
                y: (0.0, 2.0),
            };
            axes(&mut out, &frame, "beta", "eigenvalue");
            let _ = writeln!(out, r#"<g fill="black">"#);
            for &(beta, value, mult) in rows {
                let _ = writeln!(
                    out,
                    r#"<circle cx="{:.3}" cy="{:.3}" r="{:.3}"/>"#,
                    frame.px(beta),
                    frame.py(value),
                    radius(mult)
                );
            }
            let _ = writeln!(out, "</g>");
        }
        SweepData::Fractal(rows) => {
            let hi = rows.iter().map(|r| r.2).fold(0.0, f64::max);
            let frame = Frame {
                x: span(rows.iter().map(|r| r.0), (0.0, 1.0)),
                y: (0.0, if hi > 0.0 { hi * 1.05 } else { 1.0 }),
            };
            axes(&mut out, &frame, "beta", "lambda");
            let ranks = rows.iter().map(|r| r.1).max().unwrap_or(0);
            let _ = writeln!(out, r#"<g fill="none" stroke-width="1.2">"#);
            for rank in 1..=ranks {
                let mut curve: Vec<(f64, f64)> =
                    rows.iter().filter(|r| r.1 == rank).map(|r| (r.0, r.2)).collect();
                curve.sort_by(|a, b| a.0.total_cmp(&b.0));
                if curve.is_empty() {
                    continue;
                }
                let points: Vec<String> = curve
                    .iter()
                    .map(|&(x, y)| format!("{:.3},{:.3}", frame.px(x), frame.py(y)))
                    .collect();
                let _ = writeln!(
                    out,
                    r#"<polyline stroke="{}" points="{}"/>"#,
                    PALETTE[(rank - 1) % PALETTE.len()],
                    points.join(" ")
                );
            }
            let _ = writeln!(out, "</g>");
        }
    }
    let _ = writeln!(out, "</svg>");
    out
}
