//! Text, CSV, JSON and SVG output of tail plots.

use std::fmt::Write as _;

use serde::Serialize;

use crate::tail_math::{alpha_for, tail_value};
use crate::variance_ci::CurvePoint;

/// `x` with 15 significant digits, positional where that stays readable.
pub fn sig15(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0.00000000000000".into();
    }
    let sci = format!("{x:.14e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    if (-5..15).contains(&exp) {
        format!("{x:.*}", (14 - exp) as usize)
    } else {
        sci
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlotRow {
    pub u: f64,
    pub m: usize,
    pub t_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// `None` where `t̂` has no finite tail index (e.g. `t̂ = 0`).
    pub alpha_hat: Option<f64>,
}

impl From<&CurvePoint> for PlotRow {
    fn from(p: &CurvePoint) -> Self {
        PlotRow {
            u: p.u,
            m: p.m,
            t_hat: p.t_hat,
            ci_lo: p.lo,
            ci_hi: p.hi,
            alpha_hat: alpha_for(p.t_hat).ok(),
        }
    }
}

pub const CSV_HEADER: [&str; 6] = ["u", "m", "t_hat", "ci_lo", "ci_hi", "alpha_hat"];

pub fn to_csv(rows: &[PlotRow]) -> Result<String, csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            sig15(r.u),
            r.m.to_string(),
            sig15(r.t_hat),
            sig15(r.ci_lo),
            sig15(r.ci_hi),
            r.alpha_hat.map(sig15).unwrap_or_default(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("ASCII output"))
}

#[derive(Debug, Serialize)]
pub struct PlotDocument<'a> {
    pub n: usize,
    pub level: f64,
    pub method: &'a str,
    pub points: &'a [PlotRow],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisMode {
    #[default]
    Linear,
    Log,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 730.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 440.0;
/// Tail indices marked on the right axis.
pub const ALPHA_TICKS: [f64; 5] = [0.5, 1.0, 1.5, 2.0, 3.0];

fn y_of(t: f64) -> f64 {
    BOTTOM - t.clamp(0.0, 1.0) * (BOTTOM - TOP)
}

struct XScale {
    lo: f64,
    hi: f64,
    log: bool,
}

impl XScale {
    fn new(rows: &[PlotRow], axis: AxisMode) -> Self {
        let lo = rows.first().map_or(1.0, |r| r.u);
        let hi = rows.last().map_or(2.0, |r| r.u);
        let log = axis == AxisMode::Log;
        let (lo, hi) = if log { (lo.log10(), hi.log10()) } else { (lo, hi) };
        let hi = if hi > lo { hi } else { lo + 1.0 };
        XScale { lo, hi, log }
    }

    fn x(&self, u: f64) -> f64 {
        let v = if self.log { u.log10() } else { u };
        LEFT + (v - self.lo) / (self.hi - self.lo) * (RIGHT - LEFT)
    }

    /// Tick positions in data units.
    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let first = self.lo.ceil() as i32;
            let last = self.hi.floor() as i32;
            let decades: Vec<f64> = (first..=last).map(|e| 10f64.powi(e)).collect();
            if decades.len() >= 2 {
                return decades;
            }
            return vec![10f64.powf(self.lo), 10f64.powf(self.hi)];
        }
        let span = self.hi - self.lo;
        let raw = span / 5.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0]
            .iter()
            .map(|s| s * mag)
            .find(|s| span / s <= 6.0)
            .unwrap_or(10.0 * mag);
        let mut t = (self.lo / step).ceil() * step;
        let mut out = Vec::new();
        while t <= self.hi + 1e-9 * step {
            out.push(t);
            t += step;
        }
        out
    }
}

fn label(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

fn polyline(out: &mut String, pts: &[(f64, f64)], extra: &str) {
    let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
    let _ = writeln!(
        out,
        r#"<polyline fill="none" stroke="black" stroke-width="1.5"{extra} points="{}"/>"#,
        coords.join(" ")
    );
}

/// Tail plot: `t̂` solid, interval bounds dashed, `t` on the left axis and
/// the corresponding tail index on the right.
pub fn to_svg(rows: &[PlotRow], axis: AxisMode, level: f64) -> String {
    let xs = XScale::new(rows, axis);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<rect x="{LEFT}" y="{TOP}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        RIGHT - LEFT,
        BOTTOM - TOP
    );
    for i in 0..=5 {
        let t = i as f64 / 5.0;
        let y = y_of(t);
        let _ = writeln!(out, r#"<line x1="{}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/>"#, LEFT - 5.0);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 8.0,
            y + 4.0,
            label(t)
        );
    }
    for a in ALPHA_TICKS {
        let y = y_of(tail_value(a).expect("positive tick"));
        let _ = writeln!(out, r#"<line x1="{RIGHT}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="black"/>"#, RIGHT + 5.0);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{:.2}" text-anchor="start">{}</text>"#,
            RIGHT + 8.0,
            y + 4.0,
            label(a)
        );
    }
    for u in xs.ticks() {
        let x = xs.x(u);
        let _ = writeln!(out, r#"<line x1="{x:.2}" y1="{BOTTOM}" x2="{x:.2}" y2="{}" stroke="black"/>"#, BOTTOM + 5.0);
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"#,
            BOTTOM + 20.0,
            label(u)
        );
    }
    let axis_name = if xs.log { "u (log scale)" } else { "u" };
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{axis_name}</text>"#, (LEFT + RIGHT) / 2.0, HEIGHT - 15.0);
    let _ = writeln!(
        out,
        r#"<text x="20" y="{0}" text-anchor="middle" transform="rotate(-90 20 {0})">t(u)</text>"#,
        (TOP + BOTTOM) / 2.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{0}" y="{1}" text-anchor="middle" transform="rotate(90 {0} {1})">alpha</text>"#,
        WIDTH - 15.0,
        (TOP + BOTTOM) / 2.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="20" text-anchor="end">{}% pointwise interval</text>"#,
        RIGHT,
        label(100.0 * level)
    );
    let pts = |f: fn(&PlotRow) -> f64| -> Vec<(f64, f64)> { rows.iter().map(|r| (xs.x(r.u), y_of(f(r)))).collect() };
    polyline(&mut out, &pts(|r| r.ci_lo), r#" stroke-dasharray="6 4""#);
    polyline(&mut out, &pts(|r| r.ci_hi), r#" stroke-dasharray="6 4""#);
    polyline(&mut out, &pts(|r| r.t_hat), "");
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_digits() {
        assert_eq!(sig15(0.22741127776021953), "0.227411277760220");
        assert_eq!(sig15(1.0 / 3.0), "0.333333333333333");
        assert_eq!(sig15(2.0), "2.00000000000000");
        assert_eq!(sig15(12345.678), "12345.6780000000");
        assert_eq!(sig15(9.9999999999999999), "10.0000000000000");
        assert_eq!(sig15(1.5e-9), "1.50000000000000e-9");
        assert_eq!(sig15(0.0), "0.00000000000000");
    }

    fn rows() -> Vec<PlotRow> {
        vec![
            PlotRow { u: 1.0, m: 3, t_hat: 0.42, ci_lo: 0.3, ci_hi: 0.5, alpha_hat: alpha_for(0.42).ok() },
            PlotRow { u: 2.0, m: 2, t_hat: 1.0 / 3.0, ci_lo: 1.0 / 3.0, ci_hi: 1.0 / 3.0, alpha_hat: alpha_for(1.0 / 3.0).ok() },
            PlotRow { u: 40.0, m: 2, t_hat: 0.0, ci_lo: 0.0, ci_hi: 0.0, alpha_hat: None },
        ]
    }

    #[test]
    fn csv_layout() {
        let csv = to_csv(&rows()).unwrap();
        let lines: Vec<&str> = csv.split('\n').collect();
        assert_eq!(lines[0], "u,m,t_hat,ci_lo,ci_hi,alpha_hat");
        assert!(lines[2].starts_with("2.00000000000000,2,0.333333333333333,"));
        assert!(lines[3].ends_with(",0.00000000000000,"));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn svg_elements() {
        let svg = to_svg(&rows(), AxisMode::Linear, 0.95);
        assert!(svg.starts_with("<svg") && svg.contains(r#"viewBox="0 0 800 500""#));
        assert_eq!(svg.matches(r#"stroke-dasharray="6 4""#).count(), 2);
        for a in ["0.5", "1", "1.5", "2", "3"] {
            assert!(svg.contains(&format!(">{a}</text>")));
        }
        let log = to_svg(&rows(), AxisMode::Log, 0.95);
        assert_ne!(svg, log);
        assert!(log.contains(">10</text>"));
    }
}
