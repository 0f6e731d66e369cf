//! Standalone SVG 1.1 figures: the table, a folded trajectory, and the
//! unfolded straight line across mirrored copies of the table.
//!
//! Coordinates are printed with [`QElement::to_decimal`]; floats are used only
//! to size the view box.

use std::fmt::Write;

use crate::billiard::{Table, Trajectory};
use crate::geometry::Point;
use crate::qfield::QElement;
use crate::unfolding::UnfoldedLine;

pub const DEFAULT_DIGITS: usize = 12;

const TABLE_STYLE: &str = r##"fill="#f4f1e8" stroke="#333333" stroke-width="1.5" vector-effect="non-scaling-stroke""##;
const COPY_STYLE: &str = r##"fill="#eef3f8" fill-opacity="0.6" stroke="#7a8ca0" stroke-width="1" vector-effect="non-scaling-stroke""##;
const PATH_STYLE: &str = r##"fill="none" stroke="#c0392b" stroke-width="1.5" vector-effect="non-scaling-stroke""##;

struct Canvas {
    body: String,
    digits: usize,
    min: (f64, f64),
    max: (f64, f64),
}

impl Canvas {
    fn new(digits: usize) -> Self {
        Self {
            body: String::new(),
            digits,
            min: (f64::INFINITY, f64::INFINITY),
            max: (f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    fn coord(&mut self, p: &Point) -> String {
        let (x, y) = p.to_f64();
        self.min = (self.min.0.min(x), self.min.1.min(y));
        self.max = (self.max.0.max(x), self.max.1.max(y));
        format!("{},{}", p.x.to_decimal(self.digits), p.y.to_decimal(self.digits))
    }

    fn closed_path<'a>(&mut self, vertices: impl IntoIterator<Item = &'a Point>, style: &str) {
        let pts: Vec<String> = vertices.into_iter().map(|p| self.coord(p)).collect();
        let d = format!("M {} Z", pts.join(" L "));
        let _ = writeln!(self.body, r#"  <path d="{d}" {style}/>"#);
    }

    fn polyline<'a>(&mut self, vertices: impl IntoIterator<Item = &'a Point>) {
        let pts: Vec<String> = vertices.into_iter().map(|p| self.coord(p)).collect();
        let _ = writeln!(self.body, r#"  <polyline points="{}" {PATH_STYLE}/>"#, pts.join(" "));
    }

    fn marker(&mut self, p: &Point, label: &str) {
        let at = self.coord(p);
        let (x, y) = at.split_once(',').expect("x,y");
        let _ = writeln!(
            self.body,
            r##"  <circle cx="{x}" cy="{y}" r="0.04" fill="#1f4e79"><title>{label}</title></circle>"##
        );
    }

    fn finish(self) -> String {
        let margin = 0.1 * (self.max.0 - self.min.0).max(self.max.1 - self.min.1).max(1.0);
        let (x0, x1) = (self.min.0 - margin, self.max.0 + margin);
        let (y0, y1) = (self.min.1 - margin, self.max.1 + margin);
        let (w, h) = (x1 - x0, y1 - y0);
        let px = 600.0;
        let (width, height) = if w >= h { (px, px * h / w) } else { (px * w / h, px) };
        // y grows upward in the model, downward in SVG
        format!(
            concat!(
                "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
                "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" ",
                "width=\"{:.0}\" height=\"{:.0}\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\">\n",
                "<g transform=\"scale(1,-1)\">\n{}</g>\n</svg>\n"
            ),
            width, height, x0, -y1, w, h, self.body
        )
    }
}

fn draw_table(canvas: &mut Canvas, table: &Table) {
    canvas.closed_path(table.polygon().vertices(), TABLE_STYLE);
}

fn draw_marks(canvas: &mut Canvas, table: &Table) {
    canvas.marker(table.origin(), "O");
    canvas.marker(table.target(), "A");
}

/// The table outline with `O` and `A` marked.
pub fn render_table(table: &Table, digits: usize) -> String {
    let mut c = Canvas::new(digits);
    draw_table(&mut c, table);
    draw_marks(&mut c, table);
    c.finish()
}

/// The table with a folded trajectory drawn as one polyline.
pub fn render_trajectory(table: &Table, traj: &Trajectory, digits: usize) -> String {
    let mut c = Canvas::new(digits);
    draw_table(&mut c, table);
    c.polyline(traj.points());
    draw_marks(&mut c, table);
    c.finish()
}

/// One mirrored table copy per link of `traj`, with the straight unfolded
/// trajectory through them.
pub fn render_unfolded(table: &Table, traj: &Trajectory, line: &UnfoldedLine, digits: usize) -> String {
    let mut c = Canvas::new(digits);
    for copy in &line.copies {
        let image: Vec<Point> = table.polygon().vertices().iter().map(|v| copy.apply_point(v)).collect();
        c.closed_path(&image, COPY_STYLE);
    }
    let vertices = line.vertices(traj);
    c.polyline(&vertices);
    c.marker(&line.origin, "O");
    c.marker(&line.terminal, "A (unfolded)");
    c.finish()
}

/// A trajectory that ends in a corner: the path up to the offending point.
pub fn render_corner(table: &Table, start: &Point, bounces: &[Point], corner: &Point, digits: usize) -> String {
    let mut c = Canvas::new(digits);
    draw_table(&mut c, table);
    c.polyline(std::iter::once(start).chain(bounces).chain(std::iter::once(corner)));
    c.marker(corner, "corner");
    c.finish()
}

/// Decimal rendering helper for reports.
pub fn decimal(x: &QElement, digits: usize) -> String {
    x.to_decimal(digits)
}
