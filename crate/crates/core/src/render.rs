//! SVG and TikZ output of laid-out diagrams.

use std::fmt::Write as _;

use num_traits::{One, ToPrimitive};

use crate::diagram::{require_valid, DiagramLayout};
use crate::error::Result;
use crate::geometry::Q;
use crate::lattice::{Elem, FiniteLattice};

/// Pixels per layout unit.
pub const SCALE: f64 = 32.0;
const MARGIN: f64 = 24.0;
const RADIUS: f64 = 4.0;

/// Elements drawn as filled discs or as stars.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Marks {
    pub black: Vec<Elem>,
    pub stars: Vec<Elem>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Open,
    Black,
    Star,
}

fn shape(marks: Option<&Marks>, x: Elem) -> Shape {
    match marks {
        Some(m) if m.stars.contains(&x) => Shape::Star,
        Some(m) if m.black.contains(&x) => Shape::Black,
        _ => Shape::Open,
    }
}

fn f(q: Q) -> f64 {
    q.to_f64().expect("finite")
}

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn star_points(cx: f64, cy: f64, r: f64) -> String {
    (0..10)
        .map(|k| {
            let rad = if k % 2 == 0 { r } else { r * 0.45 };
            let a = std::f64::consts::PI * (k as f64) / 5.0 - std::f64::consts::FRAC_PI_2;
            format!("{},{}", num(cx + rad * a.cos()), num(cy + rad * a.sin()))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn emit_svg(l: &FiniteLattice, layout: &DiagramLayout, marks: Option<&Marks>) -> Result<String> {
    require_valid(l, layout)?;
    let xs: Vec<f64> = l.elements().map(|x| f(layout.pos(x).x)).collect();
    let ys: Vec<f64> = l.elements().map(|x| f(layout.pos(x).y)).collect();
    let min_x = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let max_x = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let max_y = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_y = ys.iter().copied().fold(f64::INFINITY, f64::min);
    let px = |x: Elem| MARGIN + SCALE * (xs[x] - min_x);
    let py = |x: Elem| MARGIN + SCALE * (max_y - ys[x]);
    let width = 2.0 * MARGIN + SCALE * (max_x - min_x);
    let height = 2.0 * MARGIN + SCALE * (max_y - min_y);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = num(width),
        h = num(height)
    );
    let _ = writeln!(out, r#"<g stroke="black" stroke-width="1.5">"#);
    for (a, b) in l.cover_pairs() {
        let _ =
            writeln!(out, r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, num(px(a)), num(py(a)), num(px(b)), num(py(b)));
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<g stroke="black" stroke-width="1">"#);
    for x in l.elements() {
        let (cx, cy) = (px(x), py(x));
        let _ = match shape(marks, x) {
            Shape::Open => writeln!(out, r#"<circle cx="{}" cy="{}" r="{RADIUS}" fill="white"/>"#, num(cx), num(cy)),
            Shape::Black => {
                writeln!(out, r#"<circle cx="{}" cy="{}" r="{}" fill="black"/>"#, num(cx), num(cy), RADIUS * 1.5)
            }
            Shape::Star => {
                writeln!(out, r#"<polygon points="{}" fill="black"/>"#, star_points(cx, cy, RADIUS * 2.0))
            }
        };
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<g font-family="serif" font-size="11">"#);
    for x in l.elements() {
        let _ = writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, num(px(x) + 7.0), num(py(x) + 4.0), escape(l.id(x)));
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    Ok(out)
}

fn tikz_coord(q: Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{{{}/{}}}", q.numer(), q.denom())
    }
}

fn tikz_name(x: Elem) -> String {
    format!("n{x}")
}

pub fn emit_tikz(l: &FiniteLattice, layout: &DiagramLayout, marks: Option<&Marks>) -> Result<String> {
    require_valid(l, layout)?;
    let mut out = String::new();
    out.push_str("\\documentclass[tikz]{standalone}\n\\begin{document}\n");
    out.push_str("\\begin{tikzpicture}[x=32pt,y=32pt]\n");
    for x in l.elements() {
        let p = layout.pos(x);
        let _ = writeln!(
            out,
            "\\coordinate ({}) at ({},{}); % {}",
            tikz_name(x),
            tikz_coord(p.x),
            tikz_coord(p.y),
            l.id(x)
        );
    }
    for (a, b) in l.cover_pairs() {
        let _ = writeln!(out, "\\draw ({}) -- ({});", tikz_name(a), tikz_name(b));
    }
    for x in l.elements() {
        let style = match shape(marks, x) {
            Shape::Open => "circle,draw,fill=white,inner sep=1.5pt",
            Shape::Black => "circle,draw,fill=black,inner sep=2.5pt",
            Shape::Star => "star,star points=5,draw,fill=black,inner sep=1.5pt",
        };
        let label = l.id(x).replace('_', "\\_");
        let _ = writeln!(out, "\\node[{style},label=right:{{\\scriptsize ${label}$}}] at ({}) {{}};", tikz_name(x));
    }
    out.push_str("\\end{tikzpicture}\n\\end{document}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::properties::builtin_pattern_p81;
    use crate::slim::{default_layout, grid};

    #[test]
    fn grid_svg() {
        let (l, layout) = grid(2, 2).unwrap();
        let svg = emit_svg(&l, &layout, None).unwrap();
        assert_eq!(svg.matches("<circle").count(), 4);
        assert_eq!(svg.matches("<line").count(), 4);
        assert_eq!(svg, emit_svg(&l, &layout, None).unwrap());
        assert!(svg.contains(r#"width="112" height="112""#));
    }

    #[test]
    fn marked_pattern() {
        let p = builtin_pattern_p81();
        let layout = default_layout(&p.k).unwrap();
        let marks = Marks { black: p.black.clone(), stars: p.stars.clone() };
        let svg = emit_svg(&p.k, &layout, Some(&marks)).unwrap();
        assert_eq!(svg.matches(r#"fill="black"/>"#).count(), 5);
        assert_eq!(svg.matches("<polygon").count(), 1);
        let tikz = emit_tikz(&p.k, &layout, Some(&marks)).unwrap();
        assert!(tikz.contains("\\coordinate (n0) at (0,0); % a"));
        assert_eq!(tikz.matches("\\draw").count(), 10);
        assert_eq!(tikz.matches("star points").count(), 1);
    }

    #[test]
    fn fractional_tikz_coordinates() {
        assert_eq!(tikz_coord(Q::new(1, 2)), "{1/2}");
        assert_eq!(tikz_coord(Q::from_integer(-3)), "-3");
    }
}
