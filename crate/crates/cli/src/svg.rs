//! SVG rendering of planar boundaries.
//!
//! Edges carrying values are colored by a linear map from the minimum
//! (blue, `rgb(0,0,255)`) to the maximum (red, `rgb(255,0,0)`), with a
//! gradient legend labelled by both ends. Coordinates are written with a
//! fixed number of decimals so identical input gives identical bytes.

use std::fmt::Write as _;

use convexity_core::{Error, PolygonBoundary, Result, Shape};

const PADDING: f64 = 0.05;
const CANVAS: f64 = 800.0;

fn color(t: f64) -> String {
    let r = (255.0 * t).round() as u8;
    format!("rgb({},0,{})", r, 255 - r)
}

/// Renders the polygon as a closed path, or as individually colored edges
/// when one value per edge is given.
pub fn render_svg(poly: &PolygonBoundary, values: Option<&[f64]>) -> Result<String> {
    let vs = poly.vertices();
    if let Some(v) = values {
        if v.len() != vs.len() {
            return Err(Error::BadParams(format!("{} values for {} edges", v.len(), vs.len())));
        }
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in vs {
        for k in 0..2 {
            lo[k] = lo[k].min(p.0[k]);
            hi[k] = hi[k].max(p.0[k]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let pad = PADDING * span;
    let (x0, y0) = (lo[0] - pad, lo[1] - pad);
    let (w, h) = (hi[0] - lo[0] + 2.0 * pad, hi[1] - lo[1] + 2.0 * pad);
    let stroke = span / 400.0;
    // y grows downward in SVG
    let pt = |i: usize| (vs[i].x(), y0 + h - (vs[i].y() - y0));
    let legend = if values.is_some() { 0.12 * h } else { 0.0 };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{:.0}" height="{:.0}" viewBox="{:.9} {:.9} {:.9} {:.9}">"#,
        CANVAS,
        CANVAS * (h + legend) / w,
        x0,
        y0,
        w,
        h + legend
    );
    match values {
        None => {
            let mut d = String::new();
            for i in 0..vs.len() {
                let (x, y) = pt(i);
                let _ = write!(d, "{}{:.9},{:.9} ", if i == 0 { "M" } else { "L" }, x, y);
            }
            d.push('Z');
            let _ = writeln!(s, r#"<path d="{d}" fill="none" stroke="black" stroke-width="{stroke:.9}"/>"#);
        }
        Some(v) => {
            let vmin = v.iter().copied().fold(f64::INFINITY, f64::min);
            let vmax = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let range = vmax - vmin;
            for (i, &val) in v.iter().enumerate() {
                let t = if range > 0.0 { (val - vmin) / range } else { 0.5 };
                let ((ax, ay), (bx, by)) = (pt(i), pt((i + 1) % vs.len()));
                let _ = writeln!(
                    s,
                    r#"<line x1="{ax:.9}" y1="{ay:.9}" x2="{bx:.9}" y2="{by:.9}" stroke="{}" stroke-width="{:.9}" stroke-linecap="round"/>"#,
                    color(t),
                    2.0 * stroke
                );
            }
            let (lx, ly, lw, lh) = (x0 + 0.1 * w, y0 + h + 0.2 * legend, 0.8 * w, 0.3 * legend);
            let font = 0.3 * legend;
            let _ = writeln!(
                s,
                r#"<defs><linearGradient id="map"><stop offset="0" stop-color="{}"/><stop offset="1" stop-color="{}"/></linearGradient></defs>"#,
                color(0.0),
                color(1.0)
            );
            let _ = writeln!(s, r#"<rect x="{lx:.9}" y="{ly:.9}" width="{lw:.9}" height="{lh:.9}" fill="url(#map)"/>"#);
            let ty = ly + lh + font;
            let _ = writeln!(
                s,
                r#"<text x="{lx:.9}" y="{ty:.9}" font-size="{font:.9}" font-family="monospace">min {vmin:.6}</text>"#
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.9}" y="{ty:.9}" font-size="{font:.9}" font-family="monospace" text-anchor="end">max {vmax:.6}</text>"#,
                lx + lw
            );
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn render_shape(shape: &Shape, values: Option<&[f64]>) -> Result<String> {
    match shape {
        Shape::Polygon(p) => render_svg(p, values),
        Shape::Mesh(_) => Err(Error::DimensionUnsupported(3)),
    }
}
