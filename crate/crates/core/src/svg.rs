//! SVG rendering for the two-variable case: tropical curves, log-space
//! clouds (optionally with a curve overlaid), and argument-space clouds
//! on the fundamental torus [0,2π)².
//!
//! Torus pictures draw overlay polygons along shortest geodesics and
//! split every segment that leaves the fundamental domain into its
//! visible pieces. All output is deterministic.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use crate::amoeba::{PointCloud, Space};
use crate::error::{Error, Result};
use crate::exact::{f64_of_integer, f64_of_rational};
use crate::tropical::TropicalHypersurface;

const VIEW: f64 = 720.0;
const MARGIN: f64 = 40.0;
const INNER: f64 = VIEW - 2.0 * MARGIN;

/// Affine world→screen transform for a bounding box (SVG y points down).
struct Frame {
    x0: f64,
    y0: f64,
    sx: f64,
    sy: f64,
}

impl Frame {
    fn new(bounds: &[(f64, f64)]) -> Result<Frame> {
        if bounds.len() != 2 {
            return Err(Error::invalid("SVG output requires exactly two variables"));
        }
        let (x0, x1) = bounds[0];
        let (y0, y1) = bounds[1];
        if !(x1 > x0 && y1 > y0) || !(x0.is_finite() && x1.is_finite() && y0.is_finite() && y1.is_finite()) {
            return Err(Error::invalid("SVG bounds must be finite with positive extent"));
        }
        Ok(Frame { x0, y0, sx: INNER / (x1 - x0), sy: INNER / (y1 - y0) })
    }

    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        (MARGIN + (x - self.x0) * self.sx, VIEW - MARGIN - (y - self.y0) * self.sy)
    }
}

fn open_svg(out: &mut String) {
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {VIEW} {VIEW}\" \
         width=\"{VIEW}\" height=\"{VIEW}\">\n\
         <rect x=\"0\" y=\"0\" width=\"{VIEW}\" height=\"{VIEW}\" fill=\"#ffffff\"/>\n"
    );
}

fn frame_rect(out: &mut String) {
    let _ = write!(
        out,
        "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{INNER}\" height=\"{INNER}\" \
         fill=\"none\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n"
    );
}

fn emit_segment(out: &mut String, frame: &Frame, a: (f64, f64), b: (f64, f64), stroke: &str, width: f64) {
    let (x1, y1) = frame.px(a.0, a.1);
    let (x2, y2) = frame.px(b.0, b.1);
    let _ = write!(
        out,
        "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" \
         stroke=\"{stroke}\" stroke-width=\"{width:.2}\" stroke-linecap=\"round\"/>\n"
    );
}

fn emit_dot(out: &mut String, frame: &Frame, p: (f64, f64), r: f64, fill: &str, opacity: f64) {
    let (cx, cy) = frame.px(p.0, p.1);
    let _ = write!(
        out,
        "<circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{r:.2}\" fill=\"{fill}\" fill-opacity=\"{opacity}\"/>\n"
    );
}

/// Clips the parameter range of `p + s·d` to the box; `None` when the
/// line misses it.
fn clip_param(p: (f64, f64), d: (f64, f64), mut lo: f64, mut hi: f64, bounds: &[(f64, f64)]) -> Option<(f64, f64)> {
    for (coord, dir, (min, max)) in [(p.0, d.0, bounds[0]), (p.1, d.1, bounds[1])] {
        if dir == 0.0 {
            if coord < min || coord > max {
                return None;
            }
            continue;
        }
        let (mut a, mut b) = ((min - coord) / dir, (max - coord) / dir);
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        lo = lo.max(a);
        hi = hi.min(b);
        if lo > hi {
            return None;
        }
    }
    Some((lo, hi))
}

fn cell_base(vertices: &[Vec<crate::exact::Q>]) -> (f64, f64) {
    (f64_of_rational(&vertices[0][0]), f64_of_rational(&vertices[0][1]))
}

/// Draws the 0- and 1-cells of a plane tropical curve clipped to `bounds`.
/// Edge thickness grows with the weight.
fn draw_curve(out: &mut String, frame: &Frame, gamma: &TropicalHypersurface, bounds: &[(f64, f64)]) -> Result<()> {
    if gamma.ambient_dim != 2 {
        return Err(Error::invalid("SVG output requires exactly two variables"));
    }
    const RAY_REACH: f64 = 1e6;
    for cell in gamma.cells_of_dim(1) {
        let width = 2.0 + 1.4 * (cell.weight - 1) as f64;
        let base = cell_base(&cell.vertices);
        if let Some(line) = cell.lines.first() {
            let d = (f64_of_integer(&line[0]), f64_of_integer(&line[1]));
            if let Some((lo, hi)) = clip_param(base, d, -RAY_REACH, RAY_REACH, bounds) {
                let a = (base.0 + lo * d.0, base.1 + lo * d.1);
                let b = (base.0 + hi * d.0, base.1 + hi * d.1);
                emit_segment(out, frame, a, b, "#b2182b", width);
            }
        } else if let Some(ray) = cell.rays.first() {
            let d = (f64_of_integer(&ray[0]), f64_of_integer(&ray[1]));
            if let Some((lo, hi)) = clip_param(base, d, 0.0, RAY_REACH, bounds) {
                let a = (base.0 + lo * d.0, base.1 + lo * d.1);
                let b = (base.0 + hi * d.0, base.1 + hi * d.1);
                emit_segment(out, frame, a, b, "#b2182b", width);
            }
        } else {
            let end = (
                f64_of_rational(&cell.vertices[1][0]),
                f64_of_rational(&cell.vertices[1][1]),
            );
            // Bounded edges are drawn whole; the frame crops overshoot.
            if let Some((lo, hi)) = clip_param(base, (end.0 - base.0, end.1 - base.1), 0.0, 1.0, bounds) {
                let a = (base.0 + lo * (end.0 - base.0), base.1 + lo * (end.1 - base.1));
                let b = (base.0 + hi * (end.0 - base.0), base.1 + hi * (end.1 - base.1));
                emit_segment(out, frame, a, b, "#b2182b", width);
            }
        }
    }
    for cell in gamma.cells_of_dim(0) {
        let p = cell_base(&cell.vertices);
        if p.0 >= bounds[0].0 && p.0 <= bounds[0].1 && p.1 >= bounds[1].0 && p.1 <= bounds[1].1 {
            emit_dot(out, frame, p, 4.0, "#1a1a1a", 1.0);
        }
    }
    Ok(())
}

/// Renders a plane tropical curve to a standalone SVG document.
pub fn svg_tropical_curve(gamma: &TropicalHypersurface, bounds: &[(f64, f64)]) -> Result<String> {
    let frame = Frame::new(bounds)?;
    let mut out = String::new();
    open_svg(&mut out);
    draw_curve(&mut out, &frame, gamma, bounds)?;
    frame_rect(&mut out);
    out.push_str("</svg>\n");
    Ok(out)
}

fn data_bounds(points: &[Vec<f64>]) -> Result<Vec<(f64, f64)>> {
    if points.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let mut b = vec![(f64::INFINITY, f64::NEG_INFINITY); 2];
    for p in points {
        for i in 0..2 {
            b[i].0 = b[i].0.min(p[i]);
            b[i].1 = b[i].1.max(p[i]);
        }
    }
    Ok(b
        .into_iter()
        .map(|(lo, hi)| {
            let pad = 0.1 * (hi - lo).max(1e-3);
            (lo - pad, hi + pad)
        })
        .collect())
}

/// Renders the log-space projection of a cloud, optionally with a
/// tropical curve drawn on top (the spine-overlay picture). When
/// `bounds` is `None` the viewport is fitted to the data.
pub fn svg_log_cloud(
    cloud: &PointCloud,
    curve: Option<&TropicalHypersurface>,
    bounds: Option<&[(f64, f64)]>,
) -> Result<String> {
    if cloud.dim() != 2 {
        return Err(Error::invalid("SVG output requires exactly two variables"));
    }
    let logs = match cloud.space() {
        Space::Arg => return Err(Error::invalid("argument clouds render on the torus, not log space")),
        _ => cloud.log_projection()?,
    };
    let owned;
    let bounds: &[(f64, f64)] = match bounds {
        Some(b) => b,
        None => {
            owned = data_bounds(logs.points())?;
            &owned
        }
    };
    let frame = Frame::new(bounds)?;
    let mut out = String::new();
    open_svg(&mut out);
    for p in logs.points() {
        if p[0] >= bounds[0].0 && p[0] <= bounds[0].1 && p[1] >= bounds[1].0 && p[1] <= bounds[1].1 {
            emit_dot(&mut out, &frame, (p[0], p[1]), 1.8, "#2166ac", 0.35);
        }
    }
    if let Some(gamma) = curve {
        draw_curve(&mut out, &frame, gamma, bounds)?;
    }
    frame_rect(&mut out);
    out.push_str("</svg>\n");
    Ok(out)
}

fn wrap_tau(x: f64) -> f64 {
    x.rem_euclid(TAU)
}

/// The straight segment between two torus points along the shortest
/// geodesic, cut into the pieces visible inside [0,2π)². Piece count is
/// 1 with no wrap, one more per fundamental-domain edge crossed.
pub fn torus_segment_pieces(a: (f64, f64), b: (f64, f64)) -> Vec<((f64, f64), (f64, f64))> {
    let a = (wrap_tau(a.0), wrap_tau(a.1));
    // Lift b next to a, coordinatewise.
    let lift = |from: f64, to: f64| {
        let mut d = to - from;
        while d > PI {
            d -= TAU;
        }
        while d < -PI {
            d += TAU;
        }
        from + d
    };
    let b = (lift(a.0, b.0), lift(a.1, b.1));
    let d = (b.0 - a.0, b.1 - a.1);
    // Parameter values where a coordinate crosses a multiple of 2π.
    let mut cuts = vec![0.0, 1.0];
    for (start, dir) in [(a.0, d.0), (a.1, d.1)] {
        if dir != 0.0 {
            for boundary in [0.0, TAU] {
                let t = (boundary - start) / dir;
                if t > 1e-12 && t < 1.0 - 1e-12 {
                    cuts.push(t);
                }
            }
        }
    }
    cuts.sort_by(|x, y| x.partial_cmp(y).expect("finite cut parameters"));
    cuts.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
    let mut pieces = Vec::new();
    for w in cuts.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        if t1 - t0 < 1e-12 {
            continue;
        }
        let mid = 0.5 * (t0 + t1);
        // Translate the whole sub-segment by the offset that brings its
        // midpoint into the fundamental domain.
        let shift = (
            TAU * ((a.0 + mid * d.0) / TAU).floor(),
            TAU * ((a.1 + mid * d.1) / TAU).floor(),
        );
        pieces.push((
            (a.0 + t0 * d.0 - shift.0, a.1 + t0 * d.1 - shift.1),
            (a.0 + t1 * d.0 - shift.0, a.1 + t1 * d.1 - shift.1),
        ));
    }
    pieces
}

/// Renders the argument-space projection of a cloud on the fundamental
/// torus, with optional closed overlay polygons (drawn wrap-split).
pub fn svg_arg_cloud(cloud: &PointCloud, overlay_polygons: &[Vec<(f64, f64)>]) -> Result<String> {
    if cloud.dim() != 2 {
        return Err(Error::invalid("SVG output requires exactly two variables"));
    }
    let args = match cloud.space() {
        Space::Log => return Err(Error::invalid("log clouds carry no argument data")),
        _ => cloud.arg_projection()?,
    };
    let bounds = [(0.0, TAU), (0.0, TAU)];
    let frame = Frame::new(&bounds)?;
    let mut out = String::new();
    open_svg(&mut out);
    for p in args.points() {
        emit_dot(&mut out, &frame, (wrap_tau(p[0]), wrap_tau(p[1])), 1.8, "#762a83", 0.35);
    }
    for polygon in overlay_polygons {
        for i in 0..polygon.len() {
            let a = polygon[i];
            let b = polygon[(i + 1) % polygon.len()];
            for (s, e) in torus_segment_pieces(a, b) {
                emit_segment(&mut out, &frame, s, e, "#e08214", 2.5);
            }
        }
    }
    frame_rect(&mut out);
    out.push_str("</svg>\n");
    Ok(out)
}

/// The two open complement triangles of a line's closed coamoeba, as
/// polygons in argument coordinates (matching
/// [`crate::amoeba::line_coamoeba_complement`]).
pub fn line_complement_triangles(alphas: &[f64; 3]) -> Vec<Vec<(f64, f64)>> {
    let c = (PI + alphas[2] - alphas[0], PI + alphas[2] - alphas[1]);
    vec![
        vec![c, (c.0 + PI, c.1), (c.0, c.1 + PI)],
        vec![c, (c.0 - PI, c.1), (c.0, c.1 - PI)],
    ]
}
