//! Hand-written SVG for region polygons and list-size heatmaps.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::rational::to_f64;
use crate::region::{Point, Region};

const WIDTH: f64 = 520.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 48.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

struct Frame {
    gamma_max: f64,
    delta_max: f64,
}

impl Frame {
    fn x(&self, gamma: f64) -> f64 {
        MARGIN + gamma / self.gamma_max * (WIDTH - 2.0 * MARGIN)
    }

    fn y(&self, delta: f64) -> f64 {
        HEIGHT - MARGIN - delta / self.delta_max * (HEIGHT - 2.0 * MARGIN)
    }

    fn axes(&self, out: &mut String) {
        let (x0, y0) = (self.x(0.0), self.y(0.0));
        let _ = write!(
            out,
            r##"<line x1="{x0}" y1="{y0}" x2="{:.2}" y2="{y0}" stroke="#333"/><line x1="{x0}" y1="{y0}" x2="{x0}" y2="{:.2}" stroke="#333"/>"##,
            self.x(self.gamma_max),
            self.y(self.delta_max)
        );
        let _ = write!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="13">γ (insertions) max {:.3}</text><text x="8" y="{:.2}" font-size="13">δ max {:.3}</text>"#,
            WIDTH / 2.0 - 60.0,
            HEIGHT - 12.0,
            self.gamma_max,
            MARGIN - 12.0,
            self.delta_max
        );
    }
}

fn open(out: &mut String) {
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    out.push_str(r#"<rect width="100%" height="100%" fill="white"/>"#);
}

/// A query point with its membership verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryPoint {
    pub point: Point,
    pub inside: bool,
}

/// Overlays the polygons `F_q` and marks each query point, filled when inside.
pub fn region_svg(regions: &[Region], points: &[QueryPoint]) -> Result<String> {
    if regions.is_empty() {
        return Err(invalid("nothing to plot"));
    }
    let all = regions
        .iter()
        .flat_map(|r| r.vertices.iter())
        .chain(points.iter().map(|p| &p.point));
    let (mut gamma_max, mut delta_max) = (0.0f64, 0.0f64);
    for p in all {
        gamma_max = gamma_max.max(to_f64(&p.gamma));
        delta_max = delta_max.max(to_f64(&p.delta));
    }
    let frame = Frame {
        gamma_max: gamma_max.max(1e-9) * 1.05,
        delta_max: delta_max.max(1e-9) * 1.05,
    };
    let mut out = String::new();
    open(&mut out);
    frame.axes(&mut out);
    for (k, region) in regions.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let pts: Vec<String> = region
            .vertices
            .iter()
            .map(|v| format!("{:.2},{:.2}", frame.x(to_f64(&v.gamma)), frame.y(to_f64(&v.delta))))
            .collect();
        let _ = write!(
            out,
            r#"<polygon points="{}" fill="{color}" fill-opacity="0.12" stroke="{color}" stroke-width="2"><title>F_{}</title></polygon>"#,
            pts.join(" "),
            region.q
        );
        let _ = write!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" fill="{color}">q={}</text>"#,
            WIDTH - MARGIN - 40.0,
            MARGIN + 16.0 * k as f64,
            region.q
        );
    }
    for p in points {
        let fill = if p.inside { "#111" } else { "white" };
        let _ = write!(
            out,
            r##"<circle cx="{:.2}" cy="{:.2}" r="4" fill="{fill}" stroke="#111"/>"##,
            frame.x(to_f64(&p.point.gamma)),
            frame.y(to_f64(&p.point.delta))
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// One heatmap cell at `(gamma, delta)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatCell {
    pub gamma: f64,
    pub delta: f64,
    pub value: f64,
}

/// Cells on a regular grid, colored from white (min) to dark red (max).
pub fn heatmap_svg(cells: &[HeatCell], title: &str) -> Result<String> {
    if cells.is_empty() {
        return Err(invalid("heatmap needs at least one cell"));
    }
    let mut gammas: Vec<f64> = cells.iter().map(|c| c.gamma).collect();
    let mut deltas: Vec<f64> = cells.iter().map(|c| c.delta).collect();
    for v in [&mut gammas, &mut deltas] {
        v.sort_by(f64::total_cmp);
        v.dedup();
    }
    let lo = cells.iter().map(|c| c.value).fold(f64::INFINITY, f64::min);
    let hi = cells.iter().map(|c| c.value).fold(f64::NEG_INFINITY, f64::max);
    let step = |v: &[f64]| if v.len() > 1 { v[1] - v[0] } else { 1.0 };
    let (dg, dd) = (step(&gammas), step(&deltas));
    let frame = Frame {
        gamma_max: gammas[gammas.len() - 1] + dg,
        delta_max: deltas[deltas.len() - 1] + dd,
    };
    let mut out = String::new();
    open(&mut out);
    for c in cells {
        let t = if hi > lo { (c.value - lo) / (hi - lo) } else { 0.0 };
        let shade = |full: f64| (255.0 - t * (255.0 - full)).round() as u8;
        let (x, y) = (frame.x(c.gamma), frame.y(c.delta + dd));
        let _ = write!(
            out,
            r#"<rect x="{x:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="rgb({},{},{})"><title>γ={} δ={} value={}</title></rect>"#,
            frame.x(c.gamma + dg) - x,
            frame.y(c.delta) - y,
            shade(140.0),
            shade(0.0),
            shade(0.0),
            c.gamma,
            c.delta,
            c.value
        );
    }
    frame.axes(&mut out);
    let _ = write!(
        out,
        r#"<text x="{MARGIN}" y="20" font-size="14">{} (min {lo}, max {hi})</text>"#,
        escape(title)
    );
    out.push_str("</svg>\n");
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
