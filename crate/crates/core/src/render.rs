//! SVG figures: earthquakes in the Poincaré disc (lamination leaves as
//! circular arcs orthogonal to the boundary, strata shaded), and circle
//! maps as graphs on the flat torus square. Output is plain SVG 1.1 text
//! with fixed six-decimal coordinates, so identical inputs produce
//! identical bytes.

use crate::earthquake::{eval_earthquake_located, EarthquakeMap, StratumLocator};
use crate::circlemap::PiecewiseMobiusCircleMap;
use crate::mobius::{H2Point, RP1Point};
use std::fmt::Write;

const TAU: f64 = std::f64::consts::TAU;
const SIZE: f64 = 512.0;
const RADIUS: f64 = 240.0;

fn disc_to_svg(x: f64, y: f64) -> (f64, f64) {
    (SIZE / 2.0 + RADIUS * x, SIZE / 2.0 - RADIUS * y)
}

fn fmt_pt(out: &mut String, x: f64, y: f64) {
    let _ = write!(out, "{x:.6},{y:.6}");
}

/// Path segment of the geodesic between two boundary angles: a diameter
/// when the endpoints are antipodal, otherwise the arc of the circle
/// orthogonal to the unit circle.
fn geodesic_path_to(theta1: f64, theta2: f64) -> String {
    let (e1x, e1y) = (theta1.cos(), theta1.sin());
    let (e2x, e2y) = (theta2.cos(), theta2.sin());
    let dot = e1x * e2x + e1y * e2y;
    let (sx, sy) = disc_to_svg(e2x, e2y);
    if dot < -1.0 + 1e-9 {
        // antipodal endpoints: straight diameter
        let mut s = String::from("L ");
        fmt_pt(&mut s, sx, sy);
        return s;
    }
    // orthocircle center (e1+e2)/(1+e1·e2) and radius √(|c|²−1)
    let cx = (e1x + e2x) / (1.0 + dot);
    let cy = (e1y + e2y) / (1.0 + dot);
    let r = (cx * cx + cy * cy - 1.0).max(0.0).sqrt() * RADIUS;
    // sweep: positive-angle direction in svg coordinates
    let (c_sx, c_sy) = disc_to_svg(cx, cy);
    let (p_sx, p_sy) = disc_to_svg(e1x, e1y);
    let (u1x, u1y) = (p_sx - c_sx, p_sy - c_sy);
    let (u2x, u2y) = (sx - c_sx, sy - c_sy);
    let sweep = if u1x * u2y - u1y * u2x > 0.0 { 1 } else { 0 };
    let mut s = String::new();
    let _ = write!(s, "A {r:.6} {r:.6} 0 0 {sweep} ");
    fmt_pt(&mut s, sx, sy);
    s
}

/// Arc of the unit circle from `theta1` counterclockwise to `theta2`.
fn circle_arc_to(theta1: f64, theta2: f64) -> String {
    let len = (theta2 - theta1).rem_euclid(TAU);
    let (sx, sy) = disc_to_svg(theta2.cos(), theta2.sin());
    let large = if len > std::f64::consts::PI { 1 } else { 0 };
    // counterclockwise in math coordinates is sweep 0 after the y-flip
    let mut s = String::new();
    let _ = write!(s, "A {RADIUS:.6} {RADIUS:.6} 0 {large} 0 ");
    fmt_pt(&mut s, sx, sy);
    s
}

fn move_to(theta: f64) -> String {
    let (sx, sy) = disc_to_svg(theta.cos(), theta.sin());
    let mut s = String::from("M ");
    fmt_pt(&mut s, sx, sy);
    s
}

fn stratum_fill(index: usize) -> String {
    let hue = (index * 71) % 360;
    format!("hsl({hue},70%,88%)")
}

/// Poincaré-disc picture of an earthquake: shaded strata, leaves as
/// geodesic arcs, optionally a dotted image of a reference grid under the
/// map.
pub fn render_earthquake(eq: &EarthquakeMap, overlay_image: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(
        s,
        r#"<circle cx="{:.6}" cy="{:.6}" r="{RADIUS:.6}" fill="white" stroke="black" stroke-width="1.5"/>"#,
        SIZE / 2.0,
        SIZE / 2.0
    );
    // shaded strata: walk each polygon boundary alternating circle arcs
    // (free edges) and geodesic arcs (leaf edges)
    for (si, stratum) in eq.strata.iter().enumerate() {
        let vs = &stratum.vertices;
        let fill = stratum_fill(si);
        if vs.is_empty() {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.6}" cy="{:.6}" r="{RADIUS:.6}" fill="{fill}"/>"#,
                SIZE / 2.0,
                SIZE / 2.0
            );
            continue;
        }
        let n = vs.len();
        let angles: Vec<f64> = vs.iter().map(|v| v.angle()).collect();
        let mut d = move_to(angles[0]);
        if n == 2 {
            // half-plane: circle arc v0 -> v1, then the geodesic back
            d.push(' ');
            d.push_str(&circle_arc_to(angles[0], angles[1]));
            d.push(' ');
            d.push_str(&geodesic_path_to(angles[1], angles[0]));
        } else {
            let is_leaf_edge = |a: &RP1Point<f64>, b: &RP1Point<f64>| {
                eq.leaves.iter().any(|l| {
                    let (p, q) = l.endpoints();
                    (a.approx_eq(&p, 1e-9) && b.approx_eq(&q, 1e-9))
                        || (a.approx_eq(&q, 1e-9) && b.approx_eq(&p, 1e-9))
                })
            };
            for k in 0..n {
                let j = (k + 1) % n;
                d.push(' ');
                if is_leaf_edge(&vs[k], &vs[j]) {
                    d.push_str(&geodesic_path_to(angles[k], angles[j]));
                } else {
                    d.push_str(&circle_arc_to(angles[k], angles[j]));
                }
            }
        }
        let _ = writeln!(s, r#"<path d="{d} Z" fill="{fill}" stroke="none"/>"#);
    }
    // leaves on top
    for leaf in &eq.leaves {
        let (a, b) = leaf.endpoints();
        let d = format!("{} {}", move_to(a.angle()), geodesic_path_to(a.angle(), b.angle()));
        let _ = writeln!(s, r##"<path d="{d}" fill="none" stroke="#b03030" stroke-width="2"/>"##);
    }
    if overlay_image {
        let loc = StratumLocator::new(eq);
        let steps = 13;
        for i in 1..steps {
            for j in 1..steps {
                let x = -0.92 + 1.84 * i as f64 / steps as f64;
                let y = -0.92 + 1.84 * j as f64 / steps as f64;
                if x * x + y * y >= 0.92 * 0.92 {
                    continue;
                }
                let z = match H2Point::from_disc(num_complex::Complex::new(x, y)) {
                    Ok(z) => z,
                    Err(_) => continue,
                };
                let w = eval_earthquake_located(eq, &loc, &z).to_disc();
                let (sx, sy) = disc_to_svg(w.re, w.im);
                let _ = writeln!(
                    s,
                    r##"<circle cx="{sx:.6}" cy="{sy:.6}" r="1.6" fill="#1f4e9c"/>"##
                );
            }
        }
    }
    let _ = writeln!(s, r#"<circle cx="{:.6}" cy="{:.6}" r="{RADIUS:.6}" fill="none" stroke="black" stroke-width="1.5"/>"#, SIZE/2.0, SIZE/2.0);
    s.push_str("</svg>\n");
    s
}

/// Graph of a circle map on the flat torus square: both axes are circle
/// angles normalized to `[0, 1)`; the diagonal is dashed for reference and
/// breakpoints are marked.
pub fn render_circle_map(f: &PiecewiseMobiusCircleMap) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let margin = 16.0;
    let span = SIZE - 2.0 * margin;
    let to_unit = |theta: f64| (theta + std::f64::consts::PI) / TAU;
    let to_svg = |u: f64, v: f64| (margin + span * u, SIZE - margin - span * v);
    let _ = writeln!(
        s,
        r#"<rect x="{margin:.6}" y="{margin:.6}" width="{span:.6}" height="{span:.6}" fill="white" stroke="black" stroke-width="1.5"/>"#
    );
    let (d0x, d0y) = to_svg(0.0, 0.0);
    let (d1x, d1y) = to_svg(1.0, 1.0);
    let _ = writeln!(
        s,
        r##"<line x1="{d0x:.6}" y1="{d0y:.6}" x2="{d1x:.6}" y2="{d1y:.6}" stroke="#999999" stroke-width="1" stroke-dasharray="4 4"/>"##
    );
    // polyline segments, split at horizontal/vertical wraps
    let n = 720;
    let mut current: Vec<(f64, f64)> = Vec::new();
    let mut paths: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..=n {
        let theta = -std::f64::consts::PI + TAU * k as f64 / n as f64;
        let x = RP1Point::from_angle(theta);
        let u = to_unit(x.angle()).clamp(0.0, 1.0);
        let v = to_unit(f.eval(&x).angle()).clamp(0.0, 1.0);
        if let Some((pu, pv)) = prev {
            if (u - pu).abs() > 0.5 || (v - pv).abs() > 0.5 {
                paths.push(std::mem::take(&mut current));
            }
        }
        current.push((u, v));
        prev = Some((u, v));
    }
    paths.push(current);
    for path in paths.iter().filter(|p| p.len() >= 2) {
        let mut d = String::from("M ");
        for (i, &(u, v)) in path.iter().enumerate() {
            let (sx, sy) = to_svg(u, v);
            if i > 0 {
                d.push_str(" L ");
            }
            fmt_pt(&mut d, sx, sy);
        }
        let _ = writeln!(s, r##"<path d="{d}" fill="none" stroke="#1f4e9c" stroke-width="2"/>"##);
    }
    for bp in f.breakpoints() {
        let u = to_unit(bp.angle());
        let v = to_unit(f.eval(bp).angle());
        let (sx, sy) = to_svg(u, v);
        let _ = writeln!(s, r##"<circle cx="{sx:.6}" cy="{sy:.6}" r="3" fill="#b03030"/>"##);
    }
    s.push_str("</svg>\n");
    s
}
