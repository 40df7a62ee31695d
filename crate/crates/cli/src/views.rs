//! SVG and CSV views derived from a report.
//!
//! # SVG viewport
//!
//! Let `[x0, x1] × [y0, y1]` be the bounding box of the drawn points (the
//! polytope vertices, plus any overlay). A degenerate side of length zero
//! is widened to length one around its centre. Each side is then padded by
//! 5% of its length on both ends, and the padded box is mapped affinely onto
//! `viewBox="0 0 1 1"` with the second axis pointing up:
//!
//! ```text
//! X = (x - x0') / (x1' - x0'),   Y = 1 - (y - y0') / (y1' - y0')
//! ```
//!
//! The canvas is 512 × 512 pixels and coordinates are written with six
//! decimals. The only line that may vary between identical runs is the
//! optional `<!-- generated-at: SECONDS -->` comment after the root element,
//! present only when the timestamp is enabled.
//!
//! # CSV
//!
//! A header row, then one row per record; floats use the shortest decimal
//! that reads back to the same `f64`.

use std::fmt::Write as _;

const MARGIN: f64 = 0.05;

/// Affine map of a padded bounding box onto the unit square.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Viewport {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
}

impl Viewport {
    pub fn around<'a>(points: impl IntoIterator<Item = &'a [f64; 2]>) -> Viewport {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in points {
            for i in 0..2 {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        for i in 0..2 {
            if !lo[i].is_finite() || !hi[i].is_finite() {
                lo[i] = 0.0;
                hi[i] = 0.0;
            }
            if hi[i] - lo[i] <= 0.0 {
                let c = 0.5 * (lo[i] + hi[i]);
                lo[i] = c - 0.5;
                hi[i] = c + 0.5;
            }
            let pad = MARGIN * (hi[i] - lo[i]);
            lo[i] -= pad;
            hi[i] += pad;
        }
        Viewport { lo, hi }
    }

    pub fn map(&self, p: &[f64; 2]) -> [f64; 2] {
        [
            (p[0] - self.lo[0]) / (self.hi[0] - self.lo[0]),
            1.0 - (p[1] - self.lo[1]) / (self.hi[1] - self.lo[1]),
        ]
    }

    /// Size of a data-space extent in view units.
    pub fn scale(&self, d: [f64; 2]) -> [f64; 2] {
        [d[0] / (self.hi[0] - self.lo[0]), d[1] / (self.hi[1] - self.lo[1])]
    }
}

/// Convex polygon vertices in counterclockwise order around their centroid.
pub fn cyclic_order(vertices: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let n = vertices.len().max(1) as f64;
    let cx = vertices.iter().map(|p| p[0]).sum::<f64>() / n;
    let cy = vertices.iter().map(|p| p[1]).sum::<f64>() / n;
    let mut out = vertices.to_vec();
    out.sort_by(|a, b| {
        let ta = (a[1] - cy).atan2(a[0] - cx);
        let tb = (b[1] - cy).atan2(b[0] - cx);
        ta.total_cmp(&tb)
    });
    out
}

pub fn pair(v: &[f64]) -> [f64; 2] {
    [v[0], v.get(1).copied().unwrap_or(0.0)]
}

struct Svg {
    out: String,
    view: Viewport,
}

impl Svg {
    fn new(view: Viewport, title: &str, timestamp: Option<u64>) -> Svg {
        let mut out = String::new();
        out.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"512\" height=\"512\" viewBox=\"0 0 1 1\">\n");
        if let Some(t) = timestamp {
            let _ = writeln!(out, "<!-- generated-at: {t} -->");
        }
        let _ = writeln!(out, "<title>{}</title>", escape(title));
        let _ = writeln!(
            out,
            "<desc>viewport x [{}, {}] y [{}, {}]</desc>",
            num(view.lo[0]),
            num(view.hi[0]),
            num(view.lo[1]),
            num(view.hi[1])
        );
        out.push_str("<rect x=\"0\" y=\"0\" width=\"1\" height=\"1\" fill=\"white\"/>\n");
        Svg { out, view }
    }

    fn points_attr(&self, pts: &[[f64; 2]]) -> String {
        pts.iter()
            .map(|p| {
                let q = self.view.map(p);
                format!("{:.6},{:.6}", q[0], q[1])
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn polygon(&mut self, pts: &[[f64; 2]], fill: &str, stroke: &str) {
        let attr = self.points_attr(pts);
        let _ = writeln!(
            self.out,
            "<polygon points=\"{attr}\" fill=\"{fill}\" stroke=\"{stroke}\" stroke-width=\"0.003\"/>"
        );
    }

    fn polyline(&mut self, pts: &[[f64; 2]], stroke: &str) {
        let attr = self.points_attr(pts);
        let _ = writeln!(
            self.out,
            "<polyline points=\"{attr}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"0.004\"/>"
        );
    }

    fn dot(&mut self, p: &[f64; 2], r: f64, fill: &str) {
        let q = self.view.map(p);
        let _ = writeln!(
            self.out,
            "<circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"{r:.4}\" fill=\"{fill}\"/>",
            q[0], q[1]
        );
    }

    fn label(&mut self, p: &[f64; 2], text: &str) {
        let q = self.view.map(p);
        let _ = writeln!(
            self.out,
            "<text x=\"{:.6}\" y=\"{:.6}\" font-size=\"0.03\" fill=\"black\">{}</text>",
            q[0] + 0.015,
            q[1] - 0.015,
            escape(text)
        );
    }

    fn cell(&mut self, centre: &[f64; 2], size: [f64; 2], fill: &str) {
        let q = self.view.map(centre);
        let s = self.view.scale(size);
        let _ = writeln!(
            self.out,
            "<rect x=\"{:.6}\" y=\"{:.6}\" width=\"{:.6}\" height=\"{:.6}\" fill=\"{fill}\"/>",
            q[0] - 0.5 * s[0],
            q[1] - 0.5 * s[1],
            s[0],
            s[1]
        );
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Shortest decimal that reads back to `x`; integers without a fraction.
pub fn num(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x:?}")
    }
}

/// Filled polygon with its vertices, optional overlay points and an
/// optional marked point.
pub fn polygon_svg(
    title: &str,
    vertices: &[[f64; 2]],
    overlay: &[[f64; 2]],
    marked: Option<([f64; 2], &str)>,
    timestamp: Option<u64>,
) -> String {
    let view = Viewport::around(vertices.iter().chain(overlay));
    let mut svg = Svg::new(view, title, timestamp);
    let ring = cyclic_order(vertices);
    svg.polygon(&ring, "#c6dbef", "#08519c");
    for p in overlay {
        svg.dot(p, 0.004, "#636363");
    }
    for p in &ring {
        svg.dot(p, 0.008, "#08519c");
    }
    if let Some((p, text)) = marked {
        svg.dot(&p, 0.012, "#cb181d");
        svg.label(&p, text);
    }
    svg.finish()
}

fn ramp(t: f64) -> String {
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let (a, b) = ([44.0, 123.0, 182.0], [215.0, 25.0, 28.0]);
    let c: Vec<u8> = (0..3).map(|i| (a[i] + t * (b[i] - a[i])).round() as u8).collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// Heat map of enclosure midpoints over a planar grid of spacing `step`,
/// drawn over the outline of the rotation polygon.
pub fn heatmap_svg(
    title: &str,
    outline: &[[f64; 2]],
    cells: &[([f64; 2], f64)],
    step: [f64; 2],
    timestamp: Option<u64>,
) -> String {
    let view = Viewport::around(outline);
    let mut svg = Svg::new(view, title, timestamp);
    let lo = cells.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    let hi = cells.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    for (p, h) in cells {
        svg.cell(p, step, &ramp((h - lo) / span));
    }
    svg.polygon(&cyclic_order(outline), "none", "#08519c");
    svg.finish()
}

/// Curves of the lower and upper bounds against a one-dimensional `w`.
pub fn curves_svg(title: &str, lower: &[[f64; 2]], upper: &[[f64; 2]], timestamp: Option<u64>) -> String {
    let view = Viewport::around(lower.iter().chain(upper));
    let mut svg = Svg::new(view, title, timestamp);
    svg.polyline(lower, "#08519c");
    svg.polyline(upper, "#cb181d");
    svg.finish()
}

/// CSV with a header row.
pub fn csv(header: &[String], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.iter().map(|x| num(*x)).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}
