//! SVG pictures of pre-fractal levels, drawn in the coordinates of `R^d`.
//!
//! Planar systems show the level-`n` enclosing discs over a deterministic
//! sample of the attractor. Systems on the line show one row of interval
//! hulls per level `1..=n`.

use std::fmt::Write as _;
use std::path::Path;

use selfsim_core::dimensions::attractor_sample;
use selfsim_core::{Attractor64, Error, Result};

const SAMPLE_POINTS: usize = 4096;
const WIDTH_PX: f64 = 800.0;
const ROW: f64 = 0.1;

pub fn render_levels(att: &Attractor64, n: usize, budget: usize) -> Result<String> {
    match att.dim() {
        1 => render_line(att, n, budget),
        2 => render_plane(att, n, budget),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

pub fn write_render(att: &Attractor64, n: usize, budget: usize, path: &Path) -> Result<()> {
    let svg = render_levels(att, n, budget)?;
    std::fs::write(path, svg).map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))
}

/// Endpoints of the convex hull of `K ⊂ R`. Each endpoint is the image of
/// an endpoint under some map, so it is a fixed point of a map or of a
/// composite of two, or the image of one of those under a map.
fn line_hull(att: &Attractor64) -> (f64, f64) {
    let maps = att.ifs().maps();
    let mut pts: Vec<f64> = vec![];
    for f in maps {
        pts.extend(f.fixed_point().map(|p| p[0]));
        for g in maps {
            pts.extend(f.compose(g).ok().and_then(|h| h.fixed_point()).map(|p| p[0]));
        }
    }
    let images: Vec<f64> = pts.iter().flat_map(|&p| maps.iter().map(move |f| f.apply(&[p]).unwrap()[0])).collect();
    pts.extend(images);
    pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| (lo.min(p), hi.max(p)))
}

fn header(out: &mut String, x0: f64, y0: f64, w: f64, h: f64, label: &str) {
    let height_px = (WIDTH_PX * h / w).clamp(40.0, 4000.0);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH_PX}" height="{height_px:.0}" viewBox="{x0} {y0} {w} {h}" preserveAspectRatio="none">"#
    );
    let _ = writeln!(out, "<title>{}</title>", escape(label));
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn render_line(att: &Attractor64, n: usize, budget: usize) -> Result<String> {
    let (lo, hi) = line_hull(att);
    let span = hi - lo;
    let pad = 0.02 * span;
    let mut out = String::new();
    header(&mut out, lo - pad, 0.0, span + 2.0 * pad, ROW * (n as f64 + 1.0), att.ifs().label());
    for level in 1..=n {
        let pieces = att.build_level(level, budget)?.pieces;
        let y = ROW * (level as f64 - 0.5);
        let _ = writeln!(out, r#"<g class="level" data-level="{level}">"#);
        for p in &pieces {
            let a = p.map.apply(&[lo])?[0];
            let b = p.map.apply(&[hi])?[0];
            let (x, w) = (a.min(b), (b - a).abs());
            let _ = writeln!(
                out,
                r#"<rect class="bar" data-word="{}" x="{x}" y="{y}" width="{w}" height="{}" fill="black"/>"#,
                p.word,
                ROW * 0.6
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn render_plane(att: &Attractor64, n: usize, budget: usize) -> Result<String> {
    let pieces = att.build_level(n, budget)?.pieces;
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &pieces {
        for i in 0..2 {
            lo[i] = lo[i].min(p.center[i] - p.radius);
            hi[i] = hi[i].max(p.center[i] + p.radius);
        }
    }
    let pad = 0.02 * (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let (w, h) = (hi[0] - lo[0] + 2.0 * pad, hi[1] - lo[1] + 2.0 * pad);
    let mut out = String::new();
    header(&mut out, lo[0] - pad, -hi[1] - pad, w, h, att.ifs().label());
    let stroke = w.max(h) / 1000.0;
    out.push_str(r#"<g transform="scale(1,-1)">"#);
    out.push('\n');
    let _ =
        writeln!(out, r#"<g class="level" data-level="{n}" fill="none" stroke="steelblue" stroke-width="{stroke}">"#);
    for p in &pieces {
        let _ = writeln!(
            out,
            r#"<circle data-word="{}" cx="{}" cy="{}" r="{}"/>"#,
            p.word, p.center[0], p.center[1], p.radius
        );
    }
    out.push_str("</g>\n");
    let mut q = 1;
    while att.k().pow(q as u32 + 1) <= SAMPLE_POINTS {
        q += 1;
    }
    let sample = attractor_sample(att, q, budget)?;
    let _ = writeln!(out, r#"<g class="sample" fill="black">"#);
    for x in &sample {
        let _ = writeln!(out, r#"<rect x="{}" y="{}" width="{stroke}" height="{stroke}"/>"#, x[0], x[1]);
    }
    out.push_str("</g>\n</g>\n</svg>\n");
    Ok(out)
}
