//! Minimal static SVG plots. Best effort only; nothing numeric depends on them.

use std::fmt::Write;

use num_complex::Complex64;

use crate::disk::PolarGrid;

const SIZE: f64 = 400.0;

fn to_px(z: Complex64, scale: f64) -> (f64, f64) {
    (SIZE / 2.0 + z.re * scale, SIZE / 2.0 - z.im * scale)
}

fn header(out: &mut String) {
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#);
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
}

/// Trace of a planar path, with the unit circle for reference. At most
/// `max_points` samples are drawn.
pub fn path_trace(points: &[Complex64], max_points: usize) -> String {
    let extent = points.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
    let scale = 0.45 * SIZE / extent;
    let mut out = String::new();
    header(&mut out);
    let _ = writeln!(out, r#"<circle cx="{c}" cy="{c}" r="{r}" fill="none" stroke="gray"/>"#, c = SIZE / 2.0, r = scale);
    let stride = (points.len() / max_points.max(1)).max(1);
    let mut poly = String::new();
    for z in points.iter().step_by(stride) {
        let (x, y) = to_px(*z, scale);
        let _ = write!(poly, "{x:.2},{y:.2} ");
    }
    let _ = writeln!(out, r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="0.5"/>"#, poly.trim_end());
    out.push_str("</svg>\n");
    out
}

/// Heat map of per-cell values on a polar grid, drawn as annular sectors.
pub fn density_heatmap(grid: PolarGrid, values: &[f64]) -> String {
    let scale = 0.45 * SIZE;
    let max = values.iter().cloned().fold(f64::MIN_POSITIVE, f64::max);
    let mut out = String::new();
    header(&mut out);
    for i in 0..grid.rings {
        let (r0, r1) = (grid.ring_edge(i), grid.ring_edge(i + 1));
        for j in 0..grid.sectors {
            let a0 = std::f64::consts::TAU * j as f64 / grid.sectors as f64;
            let a1 = std::f64::consts::TAU * (j + 1) as f64 / grid.sectors as f64;
            let shade = (255.0 * (1.0 - values[i * grid.sectors + j] / max).clamp(0.0, 1.0)) as u8;
            let p = |r: f64, a: f64| to_px(Complex64::from_polar(r, a), scale);
            let (x0, y0) = p(r1, a0);
            let (x1, y1) = p(r1, a1);
            let (x2, y2) = p(r0, a1);
            let (x3, y3) = p(r0, a0);
            let _ = writeln!(
                out,
                r#"<path d="M{x0:.2},{y0:.2} A{ro:.2},{ro:.2} 0 0 0 {x1:.2},{y1:.2} L{x2:.2},{y2:.2} A{ri:.2},{ri:.2} 0 0 1 {x3:.2},{y3:.2} Z" fill="rgb(255,{shade},{shade})"/>"#,
                ro = r1 * scale,
                ri = r0 * scale
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Line plot of `(x, y)` pairs, for convergence curves and boundary fields.
pub fn line_plot(xs: &[f64], ys: &[f64]) -> String {
    let mut out = String::new();
    header(&mut out);
    let finite: Vec<(f64, f64)> = xs.iter().zip(ys).map(|(a, b)| (*a, *b)).filter(|(a, b)| a.is_finite() && b.is_finite()).collect();
    if finite.is_empty() {
        out.push_str("</svg>\n");
        return out;
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for (x, y) in &finite {
        x0 = x0.min(*x);
        x1 = x1.max(*x);
        y0 = y0.min(*y);
        y1 = y1.max(*y);
    }
    let wx = (x1 - x0).max(1e-12);
    let wy = (y1 - y0).max(1e-12);
    let margin = 30.0;
    let span = SIZE - 2.0 * margin;
    let mut poly = String::new();
    for (x, y) in &finite {
        let px = margin + (x - x0) / wx * span;
        let py = SIZE - margin - (y - y0) / wy * span;
        let _ = write!(poly, "{px:.2},{py:.2} ");
    }
    let _ = writeln!(out, r#"<polyline points="{}" fill="none" stroke="black"/>"#, poly.trim_end());
    let _ = writeln!(out, r#"<text x="{margin}" y="{}" font-size="10">x {x0:.3} .. {x1:.3}, y {y0:.3e} .. {y1:.3e}</text>"#, SIZE - 8.0);
    out.push_str("</svg>\n");
    out
}
