//! The moment map of a lattice polytope, its reparametrization of ℝⁿ, and
//! the compactification of a tropical curve inside the polytope: Γ is
//! carried into the interior of Δ by Ψ, and each unbounded ray is followed
//! to its limit on the boundary, numerically, with a snap to the nearest
//! face.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::{f64_of_integer, f64_of_rational, Q};
use crate::hausdorff::sample_complex_in_box;
use crate::hull::{facets_full_dim, Facet};
use crate::lattice::{newton_polytope, LatticePoint, Polytope};
use crate::tropical::TropicalHypersurface;

/// Convergence tolerance when following a ray to the boundary.
const RAY_TOLERANCE: f64 = 1e-6;

/// A polytope together with its full set of lattice points, the weights of
/// the moment map.
#[derive(Debug, Clone)]
pub struct MomentData {
    pub polytope: Polytope,
    pub weights: Vec<LatticePoint>,
}

impl MomentData {
    /// Enumerates the lattice points of the polytope (never empty — the
    /// vertices themselves are lattice points).
    pub fn new(polytope: Polytope) -> Result<Self> {
        let weights = lattice_points_of(&polytope)?;
        if weights.is_empty() {
            return Err(Error::EmptySupport);
        }
        Ok(MomentData { polytope, weights })
    }

    /// Moment data for the Newton polytope of a support set.
    pub fn for_support(support: &[LatticePoint]) -> Result<Self> {
        MomentData::new(newton_polytope(support)?)
    }
}

/// All lattice points of a polytope, by scanning its bounding box.
pub fn lattice_points_of(polytope: &Polytope) -> Result<Vec<LatticePoint>> {
    let n = polytope.ambient_dim;
    let mut lo = vec![i64::MAX; n];
    let mut hi = vec![i64::MIN; n];
    for v in &polytope.vertices {
        for j in 0..n {
            lo[j] = lo[j].min(v.0[j]);
            hi[j] = hi[j].max(v.0[j]);
        }
    }
    let mut out = Vec::new();
    let mut current = lo.clone();
    'scan: loop {
        let p = LatticePoint::new(current.clone());
        if polytope.contains_lattice(&p) {
            out.push(p);
        }
        for j in 0..n {
            if current[j] < hi[j] {
                current[j] += 1;
                continue 'scan;
            }
            current[j] = lo[j];
        }
        break;
    }
    out.sort();
    Ok(out)
}

/// Normalized moment-map weights at log-coordinates `x`: proportional to
/// `e^{2<α,x>}` over the lattice points α, computed stably against the
/// largest exponent, summing to 1.
pub fn moment_weights(md: &MomentData, x: &[f64]) -> Result<Vec<f64>> {
    let n = md.polytope.ambient_dim;
    if x.len() != n {
        return Err(Error::invalid("dimension mismatch"));
    }
    if x.iter().any(|xi| !xi.is_finite()) {
        return Err(Error::invalid("non-finite coordinates"));
    }
    let exponents: Vec<f64> = md
        .weights
        .iter()
        .map(|alpha| 2.0 * alpha.0.iter().zip(x).map(|(a, xi)| (*a as f64) * xi).sum::<f64>())
        .collect();
    let m = exponents.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = exponents.iter().map(|s| (s - m).exp()).collect();
    let total: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|w| w / total).collect())
}

/// The reparametrization of ℝⁿ induced by the moment map: the convex
/// combination `Σ w_α(x) · α` of the lattice points, always interior to
/// the polytope.
pub fn psi(md: &MomentData, x: &[f64]) -> Result<Vec<f64>> {
    let n = md.polytope.ambient_dim;
    let weights = moment_weights(md, x)?;
    let mut out = vec![0.0; n];
    for (alpha, w) in md.weights.iter().zip(&weights) {
        for j in 0..n {
            out[j] += w * alpha.0[j] as f64;
        }
    }
    Ok(out)
}

/// The moment map on the torus: `μ(z) = Σ α·|z^α|² / Σ |z^α|²`, constant
/// on argument fibers, so it factors through the log moduli.
pub fn moment_map(md: &MomentData, z: &[Complex64]) -> Result<Vec<f64>> {
    let x: Vec<f64> = z
        .iter()
        .map(|zi| {
            let m = zi.norm();
            if m == 0.0 {
                return Err(Error::invalid("moment map needs torus points (nonzero coordinates)"));
            }
            Ok(m.ln())
        })
        .collect::<Result<_>>()?;
    psi(md, &x)
}

/// Where one unbounded ray of the curve lands on the polytope boundary.
#[derive(Debug, Clone)]
pub struct BoundaryLanding {
    /// Primitive direction of the ray.
    pub direction: Vec<i64>,
    /// Limit of Ψ along the ray (converged to `RAY_TOLERANCE`).
    pub raw: Vec<f64>,
    /// The limit projected onto the nearest facet's hyperplane.
    pub snapped: Vec<f64>,
    /// Index of that facet in the polytope's facet list.
    pub facet: usize,
}

/// A tropical curve carried into its polytope: interior sample points plus
/// one boundary landing per unbounded ray.
#[derive(Debug, Clone)]
pub struct CompactifiedCurve {
    /// Ψ-images of a dense sample of the curve (all strictly interior).
    pub points: Vec<Vec<f64>>,
    pub boundary: Vec<BoundaryLanding>,
}

/// Carries a tropical curve into its dual polytope: Ψ-images of a dense
/// sample (within `bounds`, at arclength `step`), and the limit of each
/// ray followed by parameter doubling until Ψ moves less than the
/// tolerance, snapped to the nearest face of Δ.
pub fn compactify_gamma(
    gamma: &TropicalHypersurface,
    md: &MomentData,
    bounds: &[(f64, f64)],
    step: f64,
) -> Result<CompactifiedCurve> {
    let n = gamma.ambient_dim;
    if md.polytope.ambient_dim != n || bounds.len() != n {
        return Err(Error::invalid("dimension mismatch"));
    }
    let delta = newton_polytope(&gamma.source.support())?;
    if delta.vertices != md.polytope.vertices {
        return Err(Error::invalid(
            "moment polytope must be the Newton polytope of the curve",
        ));
    }
    let samples = sample_complex_in_box(gamma, bounds, step)?;
    let points = samples
        .iter()
        .map(|p| psi(md, p))
        .collect::<Result<Vec<_>>>()?;
    let verts_q: Vec<Vec<Q>> = md.polytope.vertices.iter().map(|v| v.to_rational()).collect();
    let facets = facets_full_dim(&verts_q);
    let mut boundary = Vec::new();
    for cell in gamma.cells_of_dim(1) {
        if cell.rays.len() != 1 || cell.vertices.len() != 1 {
            continue; // bounded edges and lines have no boundary limit
        }
        let v: Vec<f64> = cell.vertices[0].iter().map(f64_of_rational).collect();
        let u: Vec<f64> = cell.rays[0].iter().map(f64_of_integer).collect();
        let at = |s: f64| -> Vec<f64> { v.iter().zip(&u).map(|(vi, ui)| vi + s * ui).collect() };
        let mut s = 1.0;
        let mut prev = psi(md, &at(s))?;
        let mut landed = None;
        for _ in 0..60 {
            s *= 2.0;
            let next = psi(md, &at(s))?;
            let moved: f64 = prev
                .iter()
                .zip(&next)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if moved < RAY_TOLERANCE {
                landed = Some(next);
                break;
            }
            prev = next;
        }
        let raw = landed.ok_or_else(|| {
            Error::NoConvergence("ray did not reach the polytope boundary".into())
        })?;
        let (facet, snapped) = snap_to_nearest_facet(&raw, &facets);
        let direction = cell
            .rays[0]
            .iter()
            .map(|c| {
                num_traits::ToPrimitive::to_i64(c)
                    .ok_or_else(|| Error::invalid("ray direction overflows i64"))
            })
            .collect::<Result<Vec<i64>>>()?;
        boundary.push(BoundaryLanding { direction, raw, snapped, facet });
    }
    Ok(CompactifiedCurve { points, boundary })
}

/// Projects a point onto the hyperplane of whichever facet it is closest
/// to, returning the facet index and the projection.
fn snap_to_nearest_facet(p: &[f64], facets: &[Facet]) -> (usize, Vec<f64>) {
    let mut best = (0usize, f64::INFINITY, Vec::new());
    for (i, facet) in facets.iter().enumerate() {
        let normal: Vec<f64> = facet.normal.iter().map(f64_of_integer).collect();
        let offset = f64_of_rational(&facet.offset);
        let nn: f64 = normal.iter().map(|a| a * a).sum();
        let gap = normal.iter().zip(p).map(|(a, b)| a * b).sum::<f64>() - offset;
        let dist = gap.abs() / nn.sqrt();
        if dist < best.1 {
            let proj: Vec<f64> =
                p.iter().zip(&normal).map(|(pi, ni)| pi - gap * ni / nn).collect();
            best = (i, dist, proj);
        }
    }
    (best.0, best.2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pants::standard_hyperplane;
    use crate::rng::derive_rng;
    use crate::tropical::corner_locus;
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    fn lp(coords: &[i64]) -> LatticePoint {
        LatticePoint::new(coords.to_vec())
    }

    fn simplex_data() -> MomentData {
        MomentData::for_support(&[lp(&[0, 0]), lp(&[1, 0]), lp(&[0, 1])]).unwrap()
    }

    #[test]
    fn lattice_point_enumeration() {
        let md = simplex_data();
        assert_eq!(md.weights, vec![lp(&[0, 0]), lp(&[0, 1]), lp(&[1, 0])]);
        // The dilated triangle 2Δ has six lattice points.
        let big = MomentData::for_support(&[lp(&[0, 0]), lp(&[2, 0]), lp(&[0, 2])]).unwrap();
        assert_eq!(big.weights.len(), 6);
        assert!(big.weights.contains(&lp(&[1, 1])));
        // Segment [0,1] on the line.
        let seg = MomentData::for_support(&[lp(&[0]), lp(&[1])]).unwrap();
        assert_eq!(seg.weights.len(), 2);
    }

    #[test]
    fn moment_map_examples() {
        // Δ = [0,1], z = 1: the midpoint.
        let seg = MomentData::for_support(&[lp(&[0]), lp(&[1])]).unwrap();
        let mu = moment_map(&seg, &[Complex64::new(1.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(mu[0], 0.5, epsilon = 1e-15);
        // 2-simplex, z = (1,1): barycenter.
        let md = simplex_data();
        let mu = moment_map(&md, &[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(mu[0], 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(mu[1], 1.0 / 3.0, epsilon = 1e-15);
        // Constant on argument fibers.
        let mu2 = moment_map(
            &md,
            &[Complex64::from_polar(1.0, 2.1), Complex64::from_polar(1.0, -0.4)],
        )
        .unwrap();
        assert_abs_diff_eq!(mu[0], mu2[0], epsilon = 1e-15);
        assert_abs_diff_eq!(mu[1], mu2[1], epsilon = 1e-15);
        // Dominant weight pulls to a vertex.
        let mu = psi(&md, &[12.0, 0.0]).unwrap();
        assert_abs_diff_eq!(mu[0], 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(mu[1], 0.0, epsilon = 1e-6);
        // Zero coordinate rejected.
        assert!(moment_map(&md, &[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn weights_normalize_and_image_stays_interior() {
        let md = MomentData::for_support(&[lp(&[0, 0]), lp(&[2, 0]), lp(&[0, 2])]).unwrap();
        let mut rng = derive_rng(77, 0);
        for _ in 0..200 {
            let x = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
            let w = moment_weights(&md, &x).unwrap();
            assert_abs_diff_eq!(w.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
            assert!(w.iter().all(|wi| *wi > 0.0));
            let mu = psi(&md, &x).unwrap();
            // Strictly inside the triangle {μ ≥ 0, μ₁+μ₂ ≤ 2}.
            assert!(mu[0] > 0.0 && mu[1] > 0.0 && mu[0] + mu[1] < 2.0, "left Δ: {mu:?}");
        }
    }

    #[test]
    fn one_dimensional_psi_is_monotone_and_injective() {
        let seg = MomentData::for_support(&[lp(&[0]), lp(&[1])]).unwrap();
        assert_abs_diff_eq!(psi(&seg, &[0.0]).unwrap()[0], 0.5, epsilon = 1e-15);
        let mut rng = derive_rng(78, 0);
        let mut xs: Vec<f64> = (0..100).map(|_| rng.gen_range(-8.0..8.0)).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let images: Vec<f64> = xs.iter().map(|x| psi(&seg, &[*x]).unwrap()[0]).collect();
        for i in 1..images.len() {
            if xs[i] - xs[i - 1] > 1e-6 {
                assert!(
                    images[i] - images[i - 1] > 1e-9,
                    "not injective near x = {}",
                    xs[i]
                );
            }
        }
    }

    #[test]
    fn psi_separates_plane_samples() {
        let md = simplex_data();
        let mut rng = derive_rng(79, 0);
        let points: Vec<[f64; 2]> =
            (0..60).map(|_| [rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0)]).collect();
        for i in 0..points.len() {
            for j in 0..i {
                let dx = (points[i][0] - points[j][0]).hypot(points[i][1] - points[j][1]);
                if dx > 1e-6 {
                    let a = psi(&md, &points[i]).unwrap();
                    let b = psi(&md, &points[j]).unwrap();
                    let dy = (a[0] - b[0]).hypot(a[1] - b[1]);
                    assert!(dy > 1e-9, "Ψ collapsed {:?} and {:?}", points[i], points[j]);
                }
            }
        }
    }

    #[test]
    fn standard_line_compactifies_onto_the_simplex() {
        let trop = standard_hyperplane(2).unwrap();
        let gamma = corner_locus(&trop).unwrap();
        let md = MomentData::for_support(&trop.support()).unwrap();
        let bounds = [(-4.0, 4.0), (-4.0, 4.0)];
        let curve = compactify_gamma(&gamma, &md, &bounds, 0.05).unwrap();
        // One landing per leg.
        assert_eq!(curve.boundary.len(), 3);
        let mut landings: Vec<(Vec<i64>, Vec<f64>)> = curve
            .boundary
            .iter()
            .map(|b| (b.direction.clone(), b.snapped.clone()))
            .collect();
        landings.sort_by(|a, b| a.0.cmp(&b.0));
        let expect = [
            (vec![-1, 0], [0.0, 0.5]),
            (vec![0, -1], [0.5, 0.0]),
            (vec![1, 1], [0.5, 0.5]),
        ];
        for ((dir, snapped), (edir, epoint)) in landings.iter().zip(&expect) {
            assert_eq!(dir, edir);
            assert_abs_diff_eq!(snapped[0], epoint[0], epsilon = 1e-5);
            assert_abs_diff_eq!(snapped[1], epoint[1], epsilon = 1e-5);
        }
        // Raw limits already meet the tolerance, so snapping moved little.
        for b in &curve.boundary {
            let moved: f64 = b
                .raw
                .iter()
                .zip(&b.snapped)
                .map(|(a, c)| (a - c) * (a - c))
                .sum::<f64>()
                .sqrt();
            assert!(moved < 1e-4, "snap moved too far: {moved}");
        }
        // Interior images stay strictly inside the simplex.
        assert!(!curve.points.is_empty());
        for p in &curve.points {
            assert!(p[0] > 0.0 && p[1] > 0.0 && p[0] + p[1] < 1.0, "image left Δ: {p:?}");
        }
        // The vertex maps to the barycenter.
        let bary = psi(&md, &[0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(bary[0], 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(bary[1], 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn compactification_checks_polytope_compatibility() {
        let trop = standard_hyperplane(2).unwrap();
        let gamma = corner_locus(&trop).unwrap();
        let square = MomentData::for_support(&[
            lp(&[0, 0]),
            lp(&[1, 0]),
            lp(&[0, 1]),
            lp(&[1, 1]),
        ])
        .unwrap();
        assert!(compactify_gamma(&gamma, &square, &[(-4.0, 4.0), (-4.0, 4.0)], 0.1).is_err());
    }
}
