//! Minimal SVG line charts: stacked panels with axes, tick labels and legends.

use std::fmt::Write;

use crate::estimation::{HurstEstimate, Quantity};
use crate::series::TimeSeries;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
];

#[derive(Debug, Clone)]
pub struct Line {
    pub label: String,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Draw as a step function (each value held until the next abscissa).
    pub step: bool,
}

impl Line {
    pub fn new(label: impl Into<String>, xs: Vec<f64>, ys: Vec<f64>) -> Self {
        Line {
            label: label.into(),
            xs,
            ys,
            step: false,
        }
    }

    pub fn steps(mut self) -> Self {
        self.step = true;
        self
    }
}

#[derive(Debug, Clone, Default)]
pub struct Panel {
    pub title: String,
    pub lines: Vec<Line>,
    /// Horizontal reference lines.
    pub rules: Vec<f64>,
    pub y_range: Option<(f64, f64)>,
}

impl Panel {
    pub fn new(title: impl Into<String>) -> Self {
        Panel {
            title: title.into(),
            ..Default::default()
        }
    }

    pub fn line(mut self, line: Line) -> Self {
        self.lines.push(line);
        self
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let (mut x0, mut x1, mut y0, mut y1) = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for l in &self.lines {
            for (&x, &y) in l.xs.iter().zip(&l.ys) {
                if x.is_finite() && y.is_finite() {
                    x0 = x0.min(x);
                    x1 = x1.max(x);
                    y0 = y0.min(y);
                    y1 = y1.max(y);
                }
            }
        }
        for r in &self.rules {
            y0 = y0.min(*r);
            y1 = y1.max(*r);
        }
        if let Some((a, b)) = self.y_range {
            y0 = a;
            y1 = b;
        }
        if !x0.is_finite() {
            return (0.0, 1.0, 0.0, 1.0);
        }
        if x1 <= x0 {
            x1 = x0 + 1.0;
        }
        if y1 <= y0 {
            y0 -= 0.5;
            y1 += 0.5;
        }
        (x0, x1, y0, y1)
    }
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// Render panels stacked vertically into one SVG document.
pub fn render(panels: &[Panel], width: u32, panel_height: u32) -> String {
    let (ml, mr, mt, mb) = (60.0, 150.0, 28.0, 30.0);
    let w = width as f64;
    let ph = panel_height as f64;
    let total_h = ph * panels.len().max(1) as f64;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{total_h}" viewBox="0 0 {width} {total_h}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (p, panel) in panels.iter().enumerate() {
        let top = p as f64 * ph;
        let (x0, x1, y0, y1) = panel.bounds();
        let (left, right) = (ml, w - mr);
        let (ptop, pbot) = (top + mt, top + ph - mb);
        let sx = |x: f64| left + (x - x0) / (x1 - x0) * (right - left);
        let sy = |y: f64| pbot - (y - y0) / (y1 - y0) * (pbot - ptop);
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">{}</text>"#,
            (left + right) / 2.0,
            top + 18.0,
            escape(&panel.title)
        );
        let _ = writeln!(
            svg,
            r##"<rect x="{left:.2}" y="{ptop:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#444"/>"##,
            right - left,
            pbot - ptop
        );
        for i in 0..=4 {
            let f = i as f64 / 4.0;
            let xv = x0 + f * (x1 - x0);
            let yv = y0 + f * (y1 - y0);
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                sx(xv),
                pbot + 14.0,
                tick_label(xv)
            );
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                left - 4.0,
                sy(yv) + 4.0,
                tick_label(yv)
            );
        }
        for r in &panel.rules {
            let _ = writeln!(
                svg,
                r##"<line x1="{left:.2}" x2="{right:.2}" y1="{0:.2}" y2="{0:.2}" stroke="#999" stroke-dasharray="4 3"/>"##,
                sy(*r)
            );
        }
        for (li, line) in panel.lines.iter().enumerate() {
            let color = PALETTE[li % PALETTE.len()];
            let mut pts = String::new();
            let mut prev: Option<f64> = None;
            for (&x, &y) in line.xs.iter().zip(&line.ys) {
                if !(x.is_finite() && y.is_finite()) {
                    continue;
                }
                if line.step {
                    if let Some(py) = prev {
                        let _ = write!(pts, "{:.2},{:.2} ", sx(x), sy(py));
                    }
                    prev = Some(y);
                }
                let _ = write!(pts, "{:.2},{:.2} ", sx(x), sy(y));
            }
            if line.step {
                if let Some(py) = prev {
                    let _ = write!(pts, "{:.2},{:.2}", right, sy(py));
                }
            }
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1" points="{}"/>"#,
                pts.trim_end()
            );
            let ly = ptop + 12.0 + 16.0 * li as f64;
            let _ = writeln!(
                svg,
                r#"<line x1="{:.2}" x2="{:.2}" y1="{ly:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
                right + 10.0,
                right + 30.0,
                right + 35.0,
                ly + 4.0,
                escape(&line.label)
            );
        }
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Path plot of a single series.
pub fn series_svg(x: &TimeSeries, title: &str) -> String {
    let panel = Panel::new(title).line(Line::new("X(t)", x.times().to_vec(), x.values().to_vec()));
    render(&[panel], 900, 360)
}

/// Series on top; raw and smoothed Hurst estimates with the local fractal dimension below.
pub fn estimate_svg(x: &TimeSeries, est: &HurstEstimate) -> String {
    let top =
        Panel::new("Realization").line(Line::new("X(t)", x.times().to_vec(), x.values().to_vec()));
    let as_hurst = |v: &[f64]| -> Vec<f64> {
        match est.quantity {
            Quantity::Hurst => v.to_vec(),
            Quantity::Lfd => v.iter().map(|d| 2.0 - d).collect(),
        }
    };
    let starts = est.interval_starts.clone();
    let raw = as_hurst(&est.raw);
    let best = est
        .smoothed
        .as_deref()
        .map_or_else(|| raw.clone(), as_hurst);
    let mut bottom = Panel::new("Hurst function and local fractal dimension")
        .line(Line::new("raw H", starts.clone(), raw).steps());
    if est.smoothed.is_some() {
        bottom = bottom.line(Line::new("smoothed H", starts.clone(), best.clone()).steps());
    }
    bottom =
        bottom.line(Line::new("LFD 2 - H", starts, best.iter().map(|h| 2.0 - h).collect()).steps());
    bottom.y_range = Some((0.0, 2.0));
    render(&[top, bottom], 900, 320)
}

/// RSI with reference thresholds above the price series.
pub fn rsi_svg(prices: &[f64], rsi: &[Option<f64>], overbought: f64, oversold: f64) -> String {
    let idx: Vec<f64> = (0..prices.len()).map(|i| i as f64).collect();
    let rsi_vals: Vec<f64> = rsi.iter().map(|v| v.unwrap_or(f64::NAN)).collect();
    let mut top = Panel::new("RSI").line(Line::new("RSI", idx.clone(), rsi_vals));
    top.rules = vec![overbought, oversold];
    top.y_range = Some((0.0, 100.0));
    let bottom = Panel::new("Price").line(Line::new("price", idx, prices.to_vec()));
    render(&[top, bottom], 900, 300)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_well_formed_document() {
        let x = TimeSeries::new(vec![0.0, 0.5, 1.0], vec![0.0, 1.0, -1.0]).unwrap();
        let svg = series_svg(&x, "a < b");
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("a &lt; b"));
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert_eq!(svg, series_svg(&x, "a < b"));
    }

    #[test]
    fn rsi_chart_skips_missing_values() {
        let svg = rsi_svg(
            &[1.0, 2.0, 1.5],
            &[None, Some(100.0), Some(66.0)],
            70.0,
            30.0,
        );
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg.matches("stroke-dasharray").count(), 2);
        assert!(!svg.contains("NaN"));
    }

    #[test]
    fn tick_labels() {
        assert_eq!(tick_label(0.25), "0.25");
        assert_eq!(tick_label(2.0), "2");
        assert_eq!(tick_label(-0.0001), "0");
    }
}
