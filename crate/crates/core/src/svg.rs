//! Standalone SVG line chart of a sweep curve: normalized conditional entropy
//! and boundary fraction against the bits level.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::sweep::SweepCurve;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 56.0;

const ENTROPY_COLOR: &str = "#1f77b4";
const BOUNDARY_COLOR: &str = "#d62728";

/// Renders `curve` as an SVG document. Output is byte-identical for identical
/// input.
pub fn emit_svg(curve: &SweepCurve) -> Result<String> {
    let points = &curve.points;
    if points.is_empty() {
        return Err(Error::InvalidArgument("cannot plot an empty curve".into()));
    }
    let first = points[0].bits_level as f64;
    let last = points[points.len() - 1].bits_level as f64;
    let (x_lo, x_hi) = if last > first {
        (first, last)
    } else {
        (first - 1.0, first + 1.0)
    };
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |b: f64| LEFT + (b - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |v: f64| TOP + (1.0 - v.clamp(0.0, 1.0)) * plot_h;

    let mut svg = String::new();
    // write! into a String cannot fail
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let title = if curve.attrs.is_empty() {
        "entropy and boundary over granularity".to_owned()
    } else {
        format!(
            "entropy and boundary over granularity ({})",
            curve.attrs.join(", ")
        )
    };
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(&title)
    );

    // axes
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, TOP + plot_h, TOP);
    let _ = writeln!(
        svg,
        r#"<g stroke="black" stroke-width="1"><line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}"/><line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}"/></g>"#
    );
    let _ = writeln!(svg, r#"<g font-size="10" fill="black">"#);
    for p in points {
        let x = sx(p.bits_level as f64);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            y0 + 4.0,
            y0 + 16.0,
            p.bits_level
        );
    }
    for i in 0..=4 {
        let v = f64::from(i) / 4.0;
        let y = sy(v);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{v:.2}</text>"#,
            x0 - 4.0,
            x0 - 6.0,
            y + 3.0
        );
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">bits level (2^b bins per numeric attribute)</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 14.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">fraction of maximum</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    let series: [(&str, &str, Vec<f64>); 2] = [
        (
            "normalized_conditional",
            ENTROPY_COLOR,
            points.iter().map(|p| p.normalized_conditional).collect(),
        ),
        (
            "boundary_fraction",
            BOUNDARY_COLOR,
            points.iter().map(|p| p.boundary_fraction).collect(),
        ),
    ];
    for (name, color, values) in &series {
        let coords: Vec<String> = points
            .iter()
            .zip(values)
            .map(|(p, &v)| format!("{:.2},{:.2}", sx(p.bits_level as f64), sy(v)))
            .collect();
        if coords.len() > 1 {
            let _ = writeln!(
                svg,
                r#"<polyline class="{name}" fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
                coords.join(" ")
            );
        }
        let _ = write!(svg, r#"<g class="{name}-markers" fill="{color}">"#);
        for c in &coords {
            let (cx, cy) = c.split_once(',').expect("formatted as x,y");
            let _ = write!(svg, r#"<circle cx="{cx}" cy="{cy}" r="3"/>"#);
        }
        let _ = writeln!(svg, "</g>");
    }

    // legend
    let lx = WIDTH - RIGHT - 170.0;
    for (i, (name, color, _)) in series.iter().enumerate() {
        let ly = TOP + 12.0 + 16.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{name}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
