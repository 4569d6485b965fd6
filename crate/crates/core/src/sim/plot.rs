//! Minimal SVG line charts.

use std::fmt::Write as _;

use super::experiments::{ClassRates, MethodSummary};
use super::stats::ecdf;
use crate::allocation::Method;

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
    pub color: &'static str,
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

fn color_of(m: Method) -> &'static str {
    PALETTE[Method::ALL.iter().position(|&x| x == m).unwrap_or(0) % PALETTE.len()]
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders `series` on shared linear axes.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let (w, h) = (720.0, 480.0);
    let (left, right, top, bottom) = (70.0, 170.0, 40.0, 50.0);
    let pts = series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    y0 = y0.min(0.0);
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let pw = w - left - right;
    let ph = h - top - bottom;
    let sx = |x: f64| left + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| top + ph - (y - y0) / (y1 - y0) * ph;

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#, left + pw / 2.0, escape(title));
    let _ = writeln!(svg, r#"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    for i in 0..=5 {
        let fx = x0 + (x1 - x0) * i as f64 / 5.0;
        let fy = y0 + (y1 - y0) * i as f64 / 5.0;
        let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, sx(fx), top + ph + 18.0, tick(fx));
        let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, left - 6.0, sy(fy) + 4.0, tick(fy));
        let _ = writeln!(svg, r##"<line x1="{left}" x2="{:.1}" y1="{:.1}" y2="{:.1}" stroke="#ddd"/>"##, left + pw, sy(fy), sy(fy));
    }
    let _ = writeln!(svg, r#"<text x="{:.1}" y="{}" text-anchor="middle">{}</text>"#, left + pw / 2.0, h - 12.0, escape(x_label));
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        top + ph / 2.0,
        top + ph / 2.0,
        escape(y_label)
    );
    for (i, s) in series.iter().enumerate() {
        let path: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.1},{:.1}", sx(x), sy(y))).collect();
        let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(svg, r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="2"{dash}/>"#, path.join(" "), s.color);
        let ly = top + 14.0 + 18.0 * i as f64;
        let lx = left + pw + 12.0;
        let _ = writeln!(svg, r#"<line x1="{lx}" x2="{}" y1="{ly}" y2="{ly}" stroke="{}" stroke-width="2"{dash}/>"#, lx + 24.0, s.color);
        let _ = writeln!(svg, r#"<text x="{}" y="{}">{}</text>"#, lx + 30.0, ly + 4.0, escape(&s.name));
    }
    svg.push_str("</svg>\n");
    svg
}

fn tick(v: f64) -> String {
    if v.abs() >= 100.0 || v == v.round() {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

/// Mean rate (solid) and minimum rate (dashed) against `N`, one colour per method.
pub fn rates_chart(title: &str, summary: &[MethodSummary], units: &str) -> String {
    let mut methods: Vec<Method> = Vec::new();
    for s in summary {
        if !methods.contains(&s.method) {
            methods.push(s.method);
        }
    }
    let mut series = Vec::new();
    for m in methods {
        let rows: Vec<&MethodSummary> = summary.iter().filter(|s| s.method == m).collect();
        series.push(Series {
            name: format!("{m} mean"),
            points: rows.iter().map(|s| (s.n as f64, s.mean_rate)).collect(),
            dashed: false,
            color: color_of(m),
        });
        series.push(Series {
            name: format!("{m} min"),
            points: rows.iter().map(|s| (s.n as f64, s.mean_min_rate)).collect(),
            dashed: true,
            color: color_of(m),
        });
    }
    line_chart(title, "N (users)", &format!("rate [{units}]"), &series)
}

/// Empirical CDFs of per-user rates, one curve per method and class.
pub fn class_cdf_chart(title: &str, classes: &[ClassRates], units: &str) -> String {
    let series: Vec<Series> = classes
        .iter()
        .map(|c| Series {
            name: format!("{} b={}", c.method, c.b),
            points: ecdf(&c.rates),
            dashed: c.method != Method::Hungarian,
            color: PALETTE[(c.b - 1) % PALETTE.len()],
        })
        .collect();
    line_chart(title, &format!("rate [{units}]"), "CDF", &series)
}
