//! Hausdorff distances between point clouds and piecewise-linear curves,
//! plus the product metric on ℝⁿ × (S¹)ⁿ used for phase-space comparisons.
//!
//! Distances from a point to a tropical complex are exact for cells of
//! dimension ≤ 1 (vertices, segments, rays, lines): the point is projected
//! onto the cell's affine hull and the parameter is clamped to the cell
//! clipped by the bounding box. Complexes with higher-dimensional cells are
//! rejected rather than approximated silently.

use crate::error::{Error, Result};
use crate::exact::f64_of_rational;
use crate::tropical::{TropicalCell, TropicalHypersurface};

/// Default arclength step when densifying a curve inside a box.
pub const COMPLEX_SAMPLE_STEP: f64 = 0.005;

/// Distance between two angles on the unit circle: min(|Δθ|, 2π − |Δθ|).
pub fn torus_delta(a: f64, b: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let d = (a - b).rem_euclid(tau);
    d.min(tau - d)
}

/// Product metric on ℝⁿ × (S¹)ⁿ; points are `[x_1..x_n, θ_1..θ_n]`.
pub fn phase_distance(p: &[f64], q: &[f64], n: usize) -> f64 {
    debug_assert!(p.len() == 2 * n && q.len() == 2 * n);
    let mut s = 0.0;
    for i in 0..n {
        let d = p[i] - q[i];
        s += d * d;
    }
    for i in n..2 * n {
        let d = torus_delta(p[i], q[i]);
        s += d * d;
    }
    s.sqrt()
}

/// How distances between cloud points are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CloudMetric {
    /// Euclidean on all coordinates (log-coordinate clouds).
    Euclidean,
    /// Flat torus on all coordinates (argument clouds).
    Torus,
    /// Euclidean on the first n, torus on the last n (phase clouds).
    Phase(usize),
}

/// Distance between two points under the chosen metric.
pub fn metric_distance(metric: CloudMetric, p: &[f64], q: &[f64]) -> f64 {
    match metric {
        CloudMetric::Euclidean => {
            p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
        }
        CloudMetric::Torus => {
            p.iter().zip(q).map(|(a, b)| torus_delta(*a, *b).powi(2)).sum::<f64>().sqrt()
        }
        CloudMetric::Phase(n) => phase_distance(p, q, n),
    }
}

fn euclid(p: &[f64], q: &[f64]) -> f64 {
    metric_distance(CloudMetric::Euclidean, p, q)
}

pub fn in_box(p: &[f64], bounds: &[(f64, f64)]) -> bool {
    p.iter().zip(bounds).all(|(x, (lo, hi))| *x >= *lo && *x <= *hi)
}

/// The 1-cell as a parametrized line `v0 + s·d` with parameter range.
fn cell_parametrization(cell: &TropicalCell) -> (Vec<f64>, Vec<f64>, f64, f64) {
    let v0: Vec<f64> = cell.vertices[0].iter().map(f64_of_rational).collect();
    if cell.vertices.len() == 2 {
        let v1: Vec<f64> = cell.vertices[1].iter().map(f64_of_rational).collect();
        let d: Vec<f64> = v1.iter().zip(&v0).map(|(a, b)| a - b).collect();
        (v0, d, 0.0, 1.0)
    } else if !cell.rays.is_empty() {
        let d: Vec<f64> = cell.rays[0].iter().map(|z| crate::exact::f64_of_integer(z)).collect();
        (v0, d, 0.0, f64::INFINITY)
    } else {
        let d: Vec<f64> =
            cell.lines[0].iter().map(|z| crate::exact::f64_of_integer(z)).collect();
        (v0, d, f64::NEG_INFINITY, f64::INFINITY)
    }
}

/// Intersect the parameter range with the box constraints; `None` when the
/// clipped piece is empty.
fn clip_interval(
    v0: &[f64],
    d: &[f64],
    mut lo: f64,
    mut hi: f64,
    bounds: &[(f64, f64)],
) -> Option<(f64, f64)> {
    for i in 0..v0.len() {
        let (a, b) = bounds[i];
        if d[i] == 0.0 {
            if v0[i] < a || v0[i] > b {
                return None;
            }
        } else {
            let (s1, s2) = ((a - v0[i]) / d[i], (b - v0[i]) / d[i]);
            let (s1, s2) = if s1 <= s2 { (s1, s2) } else { (s2, s1) };
            lo = lo.max(s1);
            hi = hi.min(s2);
            if lo > hi {
                return None;
            }
        }
    }
    Some((lo, hi))
}

/// Exact distance from `p` to `cell ∩ box`; `None` when that set is empty.
/// Only cells of dimension ≤ 1 are supported.
pub fn point_to_cell_distance(
    p: &[f64],
    cell: &TropicalCell,
    bounds: &[(f64, f64)],
) -> Option<f64> {
    match cell.dim {
        0 => {
            let v: Vec<f64> = cell.vertices[0].iter().map(f64_of_rational).collect();
            in_box(&v, bounds).then(|| euclid(p, &v))
        }
        1 => {
            let (v0, d, lo, hi) = cell_parametrization(cell);
            let (lo, hi) = clip_interval(&v0, &d, lo, hi, bounds)?;
            let dd: f64 = d.iter().map(|x| x * x).sum();
            let proj: f64 =
                p.iter().zip(&v0).zip(&d).map(|((pi, vi), di)| (pi - vi) * di).sum::<f64>() / dd;
            let s = proj.clamp(lo, hi);
            let q: Vec<f64> = v0.iter().zip(&d).map(|(vi, di)| vi + s * di).collect();
            Some(euclid(p, &q))
        }
        _ => unreachable!("validated by callers"),
    }
}

fn require_curve(gamma: &TropicalHypersurface) -> Result<()> {
    if gamma.cells.iter().any(|c| c.dim > 1) {
        return Err(Error::invalid(
            "point-to-complex distance requires all cells of dimension ≤ 1 (a curve)",
        ));
    }
    Ok(())
}

/// Exact distance from a point to `Γ ∩ box` (curves only).
pub fn distance_to_complex(
    p: &[f64],
    gamma: &TropicalHypersurface,
    bounds: &[(f64, f64)],
) -> Result<f64> {
    require_curve(gamma)?;
    gamma
        .cells
        .iter()
        .filter_map(|c| point_to_cell_distance(p, c, bounds))
        .min_by(|a, b| a.total_cmp(b))
        .ok_or_else(|| Error::invalid("tropical complex does not meet the box"))
}

/// Dense point sample of `Γ ∩ box` (curves only) with arclength step ≈ `step`.
pub fn sample_complex_in_box(
    gamma: &TropicalHypersurface,
    bounds: &[(f64, f64)],
    step: f64,
) -> Result<Vec<Vec<f64>>> {
    require_curve(gamma)?;
    let mut out = Vec::new();
    for cell in &gamma.cells {
        match cell.dim {
            0 => {
                let v: Vec<f64> = cell.vertices[0].iter().map(f64_of_rational).collect();
                if in_box(&v, bounds) {
                    out.push(v);
                }
            }
            1 => {
                let (v0, d, lo, hi) = cell_parametrization(cell);
                let Some((lo, hi)) = clip_interval(&v0, &d, lo, hi, bounds) else {
                    continue;
                };
                let norm: f64 = d.iter().map(|x| x * x).sum::<f64>().sqrt();
                let span = (hi - lo) * norm;
                let pieces = (span / step).ceil().max(1.0) as usize;
                for k in 0..=pieces {
                    let s = lo + (hi - lo) * (k as f64) / (pieces as f64);
                    out.push(v0.iter().zip(&d).map(|(vi, di)| vi + s * di).collect());
                }
            }
            _ => unreachable!(),
        }
    }
    if out.is_empty() {
        return Err(Error::invalid("tropical complex does not meet the box"));
    }
    Ok(out)
}

/// Symmetric Hausdorff distance between `points ∩ box` and `Γ ∩ box`:
/// point→curve distances are exact per cell; the curve→points direction
/// densifies the curve at [`COMPLEX_SAMPLE_STEP`].
pub fn hausdorff_points_complex(
    points: &[Vec<f64>],
    gamma: &TropicalHypersurface,
    bounds: &[(f64, f64)],
) -> Result<f64> {
    let inside: Vec<&Vec<f64>> = points.iter().filter(|p| in_box(p, bounds)).collect();
    if inside.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let mut sup_cloud: f64 = 0.0;
    for p in &inside {
        sup_cloud = sup_cloud.max(distance_to_complex(p, gamma, bounds)?);
    }
    let curve = sample_complex_in_box(gamma, bounds, COMPLEX_SAMPLE_STEP)?;
    let mut sup_curve: f64 = 0.0;
    for q in &curve {
        let mut best = f64::INFINITY;
        for p in &inside {
            best = best.min(euclid(q, p));
            if best == 0.0 {
                break;
            }
        }
        sup_curve = sup_curve.max(best);
    }
    Ok(sup_cloud.max(sup_curve))
}

/// Symmetric Hausdorff distance between two finite point sets under the
/// chosen metric.
pub fn hausdorff_point_sets(
    a: &[Vec<f64>],
    b: &[Vec<f64>],
    metric: CloudMetric,
) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let directed = |from: &[Vec<f64>], to: &[Vec<f64>]| -> f64 {
        let mut sup: f64 = 0.0;
        for p in from {
            let mut best = f64::INFINITY;
            for q in to {
                best = best.min(metric_distance(metric, p, q));
            }
            sup = sup.max(best);
        }
        sup
    };
    Ok(directed(a, b).max(directed(b, a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use crate::lattice::LatticePoint;
    use crate::tropical::TropicalPolynomial;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};

    fn lp(coords: &[i64]) -> LatticePoint {
        LatticePoint::new(coords.to_vec())
    }

    /// Corner locus of max{0, x, y}: vertex at the origin and three rays
    /// in directions (0,−1), (−1,0), (1,1).
    fn standard_line() -> crate::tropical::TropicalHypersurface {
        let f = TropicalPolynomial::new([
            (lp(&[0, 0]), q(0, 1)),
            (lp(&[1, 0]), q(0, 1)),
            (lp(&[0, 1]), q(0, 1)),
        ])
        .unwrap();
        crate::tropical::corner_locus(&f).unwrap()
    }

    #[test]
    fn torus_metric_wraps() {
        assert_abs_diff_eq!(torus_delta(0.1, std::f64::consts::TAU - 0.1), 0.2, epsilon = 1e-12);
        assert_abs_diff_eq!(torus_delta(1.0, 2.5), 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(
            torus_delta(-0.3, 0.3),
            0.6,
            epsilon = 1e-12
        );
        // Never more than π.
        assert!(torus_delta(0.0, std::f64::consts::PI + 0.4) <= std::f64::consts::PI);
    }

    #[test]
    fn phase_metric_combines_blocks() {
        let p = [0.0, 0.0, 0.1, 0.0];
        let q_ = [3.0, 4.0, std::f64::consts::TAU - 0.1, 0.0];
        // Log block distance 5, torus block 0.2.
        assert_abs_diff_eq!(phase_distance(&p, &q_, 2), (25.0f64 + 0.04).sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn point_to_line_distances() {
        let gamma = standard_line();
        let bounds = [(-3.0, 3.0), (-3.0, 3.0)];
        // Nearest piece for (−1,−1) is either axis ray at distance 1; the
        // diagonal ray is clamped at the vertex (distance √2).
        assert_abs_diff_eq!(
            distance_to_complex(&[-1.0, -1.0], &gamma, &bounds).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        // (2,1) projects onto the diagonal ray interior at (1.5, 1.5).
        assert_abs_diff_eq!(
            distance_to_complex(&[2.0, 1.0], &gamma, &bounds).unwrap(),
            0.5f64.sqrt(),
            epsilon = 1e-12
        );
        // On the curve.
        assert_abs_diff_eq!(
            distance_to_complex(&[0.0, -2.0], &gamma, &bounds).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn box_clipping_removes_pieces() {
        let gamma = standard_line();
        // Box keeps only the diagonal ray piece x=y ∈ [1,3].
        let bounds = [(1.0, 3.0), (-3.0, 3.0)];
        assert_abs_diff_eq!(
            distance_to_complex(&[1.0, 0.0], &gamma, &bounds).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        // A box missed entirely errors (x ∈ [10,11] excludes both axis rays,
        // y ∈ [−2,−1] excludes the diagonal).
        assert!(distance_to_complex(&[0.0, 0.0], &gamma, &[(10.0, 11.0), (-2.0, -1.0)]).is_err());
    }

    #[test]
    fn curve_sampling_is_dense_and_on_curve() {
        let gamma = standard_line();
        let bounds = [(-3.0, 3.0), (-3.0, 3.0)];
        let pts = sample_complex_in_box(&gamma, &bounds, 0.01).unwrap();
        // Expected length: three rays of lengths 3, 3, 3√2 → ≥ 1000 samples.
        assert!(pts.len() > 1000);
        for p in &pts {
            assert!(in_box(p, &bounds));
            let d = distance_to_complex(p, &gamma, &bounds).unwrap();
            assert!(d <= 1e-9, "sampled point strayed off the curve: {d}");
        }
    }

    #[test]
    fn hausdorff_cloud_vs_curve() {
        let gamma = standard_line();
        let bounds = [(-3.0, 3.0), (-3.0, 3.0)];
        // A dense sample of the curve itself is at distance ≈ 0.
        let pts = sample_complex_in_box(&gamma, &bounds, 0.004).unwrap();
        let d = hausdorff_points_complex(&pts, &gamma, &bounds).unwrap();
        assert!(d <= 0.004, "self-distance {d} should be below the sampling step");
        // Shifting the cloud by (0.3, 0) moves the Hausdorff distance near 0.3.
        let shifted: Vec<Vec<f64>> =
            pts.iter().map(|p| vec![p[0] + 0.3, p[1]]).filter(|p| in_box(p, &bounds)).collect();
        let d = hausdorff_points_complex(&shifted, &gamma, &bounds).unwrap();
        assert!((0.2..=0.45).contains(&d), "shifted distance {d} out of range");
    }

    #[test]
    fn hausdorff_point_sets_axioms() {
        let one = vec![vec![0.0]];
        let other = vec![vec![1.0]];
        assert_abs_diff_eq!(
            hausdorff_point_sets(&one, &other, CloudMetric::Euclidean).unwrap(),
            1.0
        );
        assert_abs_diff_eq!(
            hausdorff_point_sets(&one, &one, CloudMetric::Euclidean).unwrap(),
            0.0
        );
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(5);
        let mut cloud = |k: usize| -> Vec<Vec<f64>> {
            (0..k).map(|_| (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect()
        };
        let (a, b, c) = (cloud(7), cloud(5), cloud(9));
        for m in [CloudMetric::Euclidean, CloudMetric::Torus] {
            let dab = hausdorff_point_sets(&a, &b, m).unwrap();
            let dba = hausdorff_point_sets(&b, &a, m).unwrap();
            assert_abs_diff_eq!(dab, dba, epsilon = 1e-12);
            let dac = hausdorff_point_sets(&a, &c, m).unwrap();
            let dcb = hausdorff_point_sets(&c, &b, m).unwrap();
            assert!(dab <= dac + dcb + 1e-12, "triangle inequality failed");
        }
        assert!(hausdorff_point_sets(&[], &a, CloudMetric::Euclidean).is_err());
    }
}
