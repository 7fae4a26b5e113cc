//! Minimal self-contained SVG line plots.
//!
//! A Δ(t) figure is a handful of polylines with axes, ticks and a legend;
//! hand-rolling the markup keeps the output byte-deterministic and the
//! dependency tree free of a plotting stack. Dotted series use a dash
//! pattern, mirroring the full-vs-dotted convention of the figure presets.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// One curve: equal-length sample vectors plus styling.
pub struct Series<'a> {
    pub label: &'a str,
    pub xs: &'a [f64],
    pub ys: &'a [f64],
    pub dotted: bool,
}

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 520.0;
const MARGIN_L: f64 = 72.0;
const MARGIN_R: f64 = 24.0;
const MARGIN_T: f64 = 48.0;
const MARGIN_B: f64 = 56.0;
const PALETTE: [&str; 6] = [
    "#111111", "#1f6fb2", "#c23b22", "#2e8b57", "#7b4fa6", "#b8860b",
];

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn fmt_tick(v: f64) -> String {
    if v.abs() < 1e-12 {
        return "0".into();
    }
    let mut s = format!("{v:.4}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

fn data_range(series: &[Series], pick_x: bool) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for s in series {
        let vals = if pick_x { s.xs } else { s.ys };
        for &v in vals {
            if !v.is_finite() {
                return Err(Error::InvalidArgument(
                    "non-finite sample in plot series".into(),
                ));
            }
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    if hi - lo < 1e-12 {
        // flat series: open a symmetric window so the line sits mid-plot
        let pad = lo.abs().max(1.0) * 0.05;
        return Ok((lo - pad, hi + pad));
    }
    let pad = (hi - lo) * 0.04;
    Ok((lo - pad, hi + pad))
}

/// Render the plot as an SVG document string.
pub fn render_svg(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series],
) -> Result<String> {
    if series.is_empty() {
        return Err(Error::InvalidArgument("no series to plot".into()));
    }
    for s in series {
        if s.xs.len() != s.ys.len() {
            return Err(Error::DimensionMismatch {
                expected: s.xs.len(),
                got: s.ys.len(),
            });
        }
        if s.xs.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "series `{}` needs at least two samples",
                s.label
            )));
        }
    }
    let (x0, x1) = data_range(series, true)?;
    let (y0, y1) = data_range(series, false)?;
    let px = |x: f64| MARGIN_L + (x - x0) / (x1 - x0) * (WIDTH - MARGIN_L - MARGIN_R);
    let py = |y: f64| HEIGHT - MARGIN_B - (y - y0) / (y1 - y0) * (HEIGHT - MARGIN_T - MARGIN_B);

    let mut svg = String::with_capacity(4096);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="28" font-family="sans-serif" font-size="17" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        xml_escape(title)
    );

    // gridlines and ticks
    const N_TICKS: usize = 6;
    for k in 0..N_TICKS {
        let f = k as f64 / (N_TICKS - 1) as f64;
        let xv = x0 + f * (x1 - x0);
        let yv = y0 + f * (y1 - y0);
        let xp = px(xv);
        let yp = py(yv);
        let _ = writeln!(
            svg,
            r##"<line x1="{MARGIN_L}" y1="{yp:.2}" x2="{:.2}" y2="{yp:.2}" stroke="#dddddd" stroke-width="1"/>"##,
            WIDTH - MARGIN_R
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{xp:.2}" y1="{:.2}" x2="{xp:.2}" y2="{:.2}" stroke="#444444" stroke-width="1"/>"##,
            HEIGHT - MARGIN_B,
            HEIGHT - MARGIN_B + 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{xp:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
            HEIGHT - MARGIN_B + 19.0,
            fmt_tick(xv)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="end">{}</text>"#,
            MARGIN_L - 8.0,
            yp + 4.0,
            fmt_tick(yv)
        );
    }

    // axes
    let _ = writeln!(
        svg,
        r##"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{:.1}" height="{:.1}" fill="none" stroke="#444444" stroke-width="1"/>"##,
        WIDTH - MARGIN_L - MARGIN_R,
        HEIGHT - MARGIN_T - MARGIN_B
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        (MARGIN_L + WIDTH - MARGIN_R) / 2.0,
        HEIGHT - 14.0,
        xml_escape(x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{:.1}" font-family="sans-serif" font-size="14" text-anchor="middle" transform="rotate(-90 20 {:.1})">{}</text>"#,
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
        xml_escape(y_label)
    );

    // curves
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let dash = if s.dotted {
            r#" stroke-dasharray="2 5""#
        } else {
            ""
        };
        let mut points = String::with_capacity(s.xs.len() * 14);
        for (x, y) in s.xs.iter().zip(s.ys) {
            let _ = write!(points, "{:.2},{:.2} ", px(*x), py(*y));
        }
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.6"{dash} points="{}"/>"#,
            points.trim_end()
        );
    }

    // legend
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = MARGIN_T + 16.0 + 18.0 * i as f64;
        let x = WIDTH - MARGIN_R - 150.0;
        let dash = if s.dotted {
            r#" stroke-dasharray="2 5""#
        } else {
            ""
        };
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="{color}" stroke-width="1.6"{dash}/>"#,
            x + 28.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12">{}</text>"#,
            x + 34.0,
            y + 4.0,
            xml_escape(s.label)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Render and write, creating parent directories as needed.
pub fn write_svg(
    path: &Path,
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series],
) -> Result<()> {
    let doc = render_svg(title, x_label, y_label, series)?;
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(path, doc)?;
    Ok(())
}
