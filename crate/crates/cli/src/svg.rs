//! Static SVG renderings. Coordinates are exact until the final decimal
//! conversion, so the output is byte-for-byte reproducible.

use std::fmt::Write;

use monoseq::duality::{direction_to_vertical, PointSet, VerticalPosition};
use monoseq::format::to_decimal;
use monoseq::sequences::PathSet;
use monoseq::{Direction, Rat};

const SIZE: i64 = 600;
const MARGIN: i64 = 40;
const COLORS: [&str; 8] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

struct Frame {
    digits: usize,
    x0: Rat,
    y0: Rat,
    sx: Rat,
    sy: Rat,
}

impl Frame {
    /// Maps `[x0, x1] x [y0, y1]` onto the drawing area, flipping y.
    fn new(x: (Rat, Rat), y: (Rat, Rat), uniform: bool, digits: usize) -> Frame {
        let inner = Rat::from(SIZE - 2 * MARGIN);
        let span = |lo: &Rat, hi: &Rat| {
            let s = hi - lo;
            if s.is_zero() {
                Rat::one()
            } else {
                s
            }
        };
        let (wx, wy) = (span(&x.0, &x.1), span(&y.0, &y.1));
        let (sx, sy) = if uniform {
            let s = &inner / if wx > wy { &wx } else { &wy };
            (s.clone(), s)
        } else {
            (&inner / &wx, &inner / &wy)
        };
        Frame { digits, x0: x.0, y0: y.0, sx, sy }
    }

    fn x(&self, x: &Rat) -> String {
        to_decimal(&(Rat::from(MARGIN) + (x - &self.x0) * &self.sx), self.digits)
    }

    fn y(&self, y: &Rat) -> String {
        to_decimal(&(Rat::from(SIZE - MARGIN) - (y - &self.y0) * &self.sy), self.digits)
    }
}

fn header(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    out.push_str(
        r##"<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" orient="auto-start-reverse"><path d="M0,0 L10,5 L0,10 z" fill="context-stroke"/></marker></defs>
<rect width="100%" height="100%" fill="white"/>
"##,
    );
}

fn bounds<'a>(vals: impl Iterator<Item = &'a Rat>) -> (Rat, Rat) {
    let mut it = vals;
    let first = it.next().cloned().unwrap_or_else(Rat::zero);
    it.fold((first.clone(), first), |(lo, hi), v| {
        (if *v < lo { v.clone() } else { lo }, if *v > hi { v.clone() } else { hi })
    })
}

/// Points, each path as a polyline in its own color, and one arrow per
/// direction in the legend.
pub fn primal(points: &PointSet, paths: &PathSet, dirs: &[Direction], digits: usize) -> String {
    let pts = points.points();
    let frame = Frame::new(
        bounds(pts.iter().map(|p| &p.x)),
        bounds(pts.iter().map(|p| &p.y)),
        true,
        digits,
    );
    let mut out = String::new();
    header(&mut out);
    for (i, p) in paths.paths().iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let coords: Vec<String> = p
            .order()
            .iter()
            .map(|&v| format!("{},{}", frame.x(&pts[v - 1].x), frame.y(&pts[v - 1].y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2" stroke-opacity="0.8" marker-end="url(#arrow)"/>"#,
            coords.join(" ")
        );
    }
    for (i, p) in pts.iter().enumerate() {
        let (x, y) = (frame.x(&p.x), frame.y(&p.y));
        let _ = writeln!(out, r#"<circle cx="{x}" cy="{y}" r="4" fill="black"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{y}" dx="6" dy="-6" font-family="sans-serif" font-size="12">{}</text>"#,
            i + 1
        );
    }
    // legend arrows; floats are fine here, the output is a picture
    for (i, d) in dirs.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let (dx, dy) = (d.dx.to_f64(), d.dy.to_f64());
        let len = (dx * dx + dy * dy).sqrt();
        let (cx, cy) = (20.0 + 40.0 * i as f64, 20.0);
        let (ex, ey) = (cx + 14.0 * dx / len, cy - 14.0 * dy / len);
        let _ = writeln!(
            out,
            r#"<line x1="{cx}" y1="{cy}" x2="{}" y2="{}" stroke="{color}" stroke-width="2" marker-end="url(#arrow)"/>"#,
            fmt_f64(ex, digits),
            fmt_f64(ey, digits)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn fmt_f64(v: f64, digits: usize) -> String {
    let s = format!("{:.*e}", digits.saturating_sub(1), v);
    let parsed: f64 = s.parse().unwrap_or(v);
    if parsed == 0.0 {
        "0".into()
    } else {
        format!("{parsed}")
    }
}

/// The dual arrangement: point `(a, b)` becomes `y = a x - b`, and each
/// direction with a finite dual position becomes a dashed vertical line.
pub fn dual(points: &PointSet, dirs: &[Direction], digits: usize) -> String {
    let lines = points.dual_lines();
    let xs: Vec<Rat> = dirs
        .iter()
        .filter_map(|d| match direction_to_vertical(d) {
            VerticalPosition::Finite(x) => Some(x),
            VerticalPosition::AtInfinity => None,
        })
        .collect();
    let (lo, hi) = bounds(xs.iter());
    let (x0, x1) = (lo - Rat::one(), hi + Rat::one());
    let ends: Vec<Rat> = lines.iter().flat_map(|l| [l.eval(&x0), l.eval(&x1)]).collect();
    let frame = Frame::new((x0.clone(), x1.clone()), bounds(ends.iter()), false, digits);

    let mut out = String::new();
    header(&mut out);
    for (i, l) in lines.iter().enumerate() {
        let (ya, yb) = (l.eval(&x0), l.eval(&x1));
        let _ = writeln!(
            out,
            r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#333" stroke-width="1.5"/>"##,
            frame.x(&x0),
            frame.y(&ya),
            frame.x(&x1),
            frame.y(&yb)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" dx="4" font-family="sans-serif" font-size="12">{}</text>"#,
            frame.x(&x1),
            frame.y(&yb),
            i + 1
        );
    }
    // one vertical line per direction, labelled in input order
    let mut seen: Vec<Rat> = Vec::new();
    for (i, d) in dirs.iter().enumerate() {
        let VerticalPosition::Finite(x) = direction_to_vertical(d) else { continue };
        let color = COLORS[i % COLORS.len()];
        let at = frame.x(&x);
        let _ = writeln!(
            out,
            r#"<line x1="{at}" y1="{MARGIN}" x2="{at}" y2="{}" stroke="{color}" stroke-width="1.5" stroke-dasharray="6 4"/>"#,
            SIZE - MARGIN
        );
        let shift = 14 * seen.iter().filter(|s| **s == x).count();
        let _ = writeln!(
            out,
            r#"<text x="{at}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12" fill="{color}">φ{}</text>"#,
            MARGIN - 8 - shift as i64,
            i + 1
        );
        seen.push(x);
    }
    out.push_str("</svg>\n");
    out
}
