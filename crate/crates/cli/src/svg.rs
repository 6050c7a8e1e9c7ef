//! Minimal SVG line charts.
//!
//! A figure is a vertical stack of panels. Each panel's `<g class="panel">`
//! carries its data-to-pixel mapping as attributes:
//!
//! ```text
//! data-x-scale="linear|log10" data-x-min data-x-max data-x-px0 data-x-px1
//! data-y-scale="linear|log10" data-y-min data-y-max data-y-px0 data-y-px1
//! ```
//!
//! and a point `(x, y)` is drawn at
//!
//! ```text
//! px = x_px0 + (f(x) - f(x_min)) / (f(x_max) - f(x_min)) * (x_px1 - x_px0)
//! ```
//!
//! (likewise for `y`), with `f` the identity or `log10`. Coordinates are
//! written at full `f64` precision, so the data can be recovered exactly up to
//! floating-point rounding of the affine map. Points that cannot be shown on
//! a log axis (non-positive values) break the polyline into segments.

use std::fmt::Write;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
#[error("cannot plot: {0}")]
pub struct PlotError(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log10,
}

impl Scale {
    fn name(self) -> &'static str {
        match self {
            Scale::Linear => "linear",
            Scale::Log10 => "log10",
        }
    }

    fn forward(self, v: f64) -> f64 {
        match self {
            Scale::Linear => v,
            Scale::Log10 => v.log10(),
        }
    }

    fn admits(self, v: f64) -> bool {
        v.is_finite() && (self == Scale::Linear || v > 0.0)
    }
}

#[derive(Debug, Clone)]
pub struct Axis {
    pub label: String,
    pub scale: Scale,
    /// Fixed `(min, max)`; derived from the data when `None`.
    pub range: Option<(f64, f64)>,
}

impl Axis {
    pub fn linear(label: &str) -> Self {
        Axis {
            label: label.into(),
            scale: Scale::Linear,
            range: None,
        }
    }

    pub fn log(label: &str) -> Self {
        Axis {
            label: label.into(),
            scale: Scale::Log10,
            range: None,
        }
    }

    pub fn with_range(mut self, lo: f64, hi: f64) -> Self {
        self.range = Some((lo, hi));
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Solid,
    Dashed,
}

#[derive(Debug, Clone)]
pub struct Curve {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub style: Style,
}

impl Curve {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Curve {
            label: label.into(),
            points,
            style: Style::Solid,
        }
    }

    pub fn dashed(mut self) -> Self {
        self.style = Style::Dashed;
        self
    }
}

#[derive(Debug, Clone)]
pub struct Panel {
    pub title: String,
    pub x: Axis,
    pub y: Axis,
    pub curves: Vec<Curve>,
}

#[derive(Debug, Clone, Default)]
pub struct Figure {
    pub title: String,
    /// Written into the document as an XML comment, one `key: value` per line.
    pub metadata: Vec<(String, String)>,
    pub panels: Vec<Panel>,
}

const WIDTH: f64 = 760.0;
const PANEL_HEIGHT: f64 = 340.0;
const HEADER: f64 = 40.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, Copy)]
struct Mapping {
    scale: Scale,
    min: f64,
    max: f64,
    px0: f64,
    px1: f64,
}

impl Mapping {
    fn map(&self, v: f64) -> f64 {
        let (a, b) = (self.scale.forward(self.min), self.scale.forward(self.max));
        self.px0 + (self.scale.forward(v) - a) / (b - a) * (self.px1 - self.px0)
    }
}

fn data_range(axis: &Axis, values: impl Iterator<Item = f64>) -> Result<(f64, f64), PlotError> {
    if let Some((lo, hi)) = axis.range {
        if !(axis.scale.admits(lo) && axis.scale.admits(hi) && lo < hi) {
            return Err(PlotError(format!("bad range [{lo}, {hi}] for axis `{}`", axis.label)));
        }
        return Ok((lo, hi));
    }
    let (lo, hi) = values
        .filter(|&v| axis.scale.admits(v))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if lo > hi {
        return Err(PlotError(format!("no plottable values for axis `{}`", axis.label)));
    }
    Ok(match axis.scale {
        Scale::Linear if lo == hi => (lo - 0.5, hi + 0.5),
        Scale::Linear => {
            let pad = 0.03 * (hi - lo);
            (lo - pad, hi + pad)
        }
        Scale::Log10 => {
            let (a, b) = (lo.log10().floor(), hi.log10().ceil());
            let b = if a == b { a + 1.0 } else { b };
            (10f64.powf(a), 10f64.powf(b))
        }
    })
}

fn ticks(m: &Mapping) -> Vec<f64> {
    match m.scale {
        Scale::Log10 => {
            let (a, b) = (m.min.log10().ceil() as i32, m.max.log10().floor() as i32);
            (a..=b).map(|k| 10f64.powi(k)).collect()
        }
        Scale::Linear => {
            let span = m.max - m.min;
            let raw = span / 5.0;
            let mag = 10f64.powf(raw.log10().floor());
            let step = [1.0, 2.0, 5.0, 10.0]
                .iter()
                .map(|f| f * mag)
                .find(|s| *s >= raw)
                .unwrap_or(10.0 * mag);
            let first = (m.min / step).ceil() as i64;
            let last = (m.max / step).floor() as i64;
            (first..=last).map(|k| k as f64 * step).collect()
        }
    }
}

fn tick_label(v: f64, scale: Scale) -> String {
    match scale {
        Scale::Log10 => format!("1e{}", v.log10().round() as i32),
        Scale::Linear if v == 0.0 => "0".into(),
        Scale::Linear if v.abs() >= 1e4 || v.abs() < 1e-3 => format!("{v:.1e}"),
        Scale::Linear => {
            let s = format!("{v:.4}");
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

impl Figure {
    pub fn render(&self) -> Result<String, PlotError> {
        if self.panels.is_empty() {
            return Err(PlotError("figure has no panels".into()));
        }
        let height = HEADER + PANEL_HEIGHT * self.panels.len() as f64;
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="12">"#
        );
        out.push_str("<!--\n");
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "{}: {}", k.replace("--", "- -"), v.replace("--", "- -"));
        }
        out.push_str("-->\n");
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        for (k, panel) in self.panels.iter().enumerate() {
            render_panel(&mut out, k, panel, HEADER + k as f64 * PANEL_HEIGHT)?;
        }
        out.push_str("</svg>\n");
        Ok(out)
    }
}

fn render_panel(out: &mut String, index: usize, p: &Panel, y_off: f64) -> Result<(), PlotError> {
    if p.curves.iter().all(|c| c.points.is_empty()) {
        return Err(PlotError(format!("panel `{}` has no data", p.title)));
    }
    let all = || p.curves.iter().flat_map(|c| c.points.iter().copied());
    let (x_lo, x_hi) = data_range(&p.x, all().map(|(x, _)| x))?;
    let (y_lo, y_hi) = data_range(&p.y, all().map(|(_, y)| y))?;
    let (left, right) = (LEFT, WIDTH - RIGHT);
    let (top, bottom) = (y_off + TOP, y_off + PANEL_HEIGHT - BOTTOM);
    let xm = Mapping { scale: p.x.scale, min: x_lo, max: x_hi, px0: left, px1: right };
    let ym = Mapping { scale: p.y.scale, min: y_lo, max: y_hi, px0: bottom, px1: top };

    let _ = writeln!(
        out,
        r#"<g class="panel" data-index="{index}" data-x-scale="{}" data-x-min="{}" data-x-max="{}" data-x-px0="{}" data-x-px1="{}" data-y-scale="{}" data-y-min="{}" data-y-max="{}" data-y-px0="{}" data-y-px1="{}">"#,
        xm.scale.name(), xm.min, xm.max, xm.px0, xm.px1,
        ym.scale.name(), ym.min, ym.max, ym.px0, ym.px1,
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="13">{}</text>"#,
        (left + right) / 2.0,
        top - 8.0,
        escape(&p.title)
    );
    let _ = writeln!(
        out,
        r#"<rect x="{left}" y="{top}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        right - left,
        bottom - top
    );
    for t in ticks(&xm) {
        let px = xm.map(t);
        let _ = writeln!(
            out,
            r##"<line x1="{px}" y1="{bottom}" x2="{px}" y2="{}" stroke="black"/><text x="{px}" y="{}" text-anchor="middle">{}</text>"##,
            bottom + 5.0,
            bottom + 18.0,
            tick_label(t, xm.scale)
        );
    }
    for t in ticks(&ym) {
        let py = ym.map(t);
        let _ = writeln!(
            out,
            r##"<line x1="{}" y1="{py}" x2="{left}" y2="{py}" stroke="black"/><text x="{}" y="{}" text-anchor="end">{}</text>"##,
            left - 5.0,
            left - 8.0,
            py + 4.0,
            tick_label(t, ym.scale)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (left + right) / 2.0,
        bottom + 36.0,
        escape(&p.x.label)
    );
    let _ = writeln!(
        out,
        r#"<text x="20" y="{}" text-anchor="middle" transform="rotate(-90 20 {})">{}</text>"#,
        (top + bottom) / 2.0,
        (top + bottom) / 2.0,
        escape(&p.y.label)
    );

    let _ = writeln!(
        out,
        r#"<clipPath id="clip{index}"><rect x="{left}" y="{top}" width="{}" height="{}"/></clipPath>"#,
        right - left,
        bottom - top
    );
    for (ci, c) in p.curves.iter().enumerate() {
        let color = PALETTE[ci % PALETTE.len()];
        let dash = match c.style {
            Style::Solid => "",
            Style::Dashed => r#" stroke-dasharray="6 4""#,
        };
        let class = match c.style {
            Style::Solid => "curve",
            Style::Dashed => "curve dashed",
        };
        let mut segments: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
        for &(x, y) in &c.points {
            if xm.scale.admits(x) && ym.scale.admits(y) {
                segments.last_mut().unwrap().push((xm.map(x), ym.map(y)));
            } else if !segments.last().unwrap().is_empty() {
                segments.push(Vec::new());
            }
        }
        for seg in segments.iter().filter(|s| !s.is_empty()) {
            let pts: Vec<String> = seg.iter().map(|(x, y)| format!("{x},{y}")).collect();
            let _ = writeln!(
                out,
                r#"<polyline class="{class}" data-curve="{ci}" data-label="{}" clip-path="url(#clip{index})" fill="none" stroke="{color}" stroke-width="1.2"{dash} points="{}"/>"#,
                escape(&c.label),
                pts.join(" ")
            );
        }
        let ly = top + 14.0 + 16.0 * ci as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="1.5"{dash}/><text x="{}" y="{}">{}</text>"#,
            right + 10.0,
            right + 34.0,
            right + 40.0,
            ly + 4.0,
            escape(&c.label)
        );
    }
    out.push_str("</g>\n");
    Ok(())
}
