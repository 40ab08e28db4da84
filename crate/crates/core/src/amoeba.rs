//! Numerical side of the degeneration: the stretched logarithm maps,
//! hypersurface sampling, amoeba/coamoeba point clouds, Hausdorff
//! comparisons, spine recovery from torus integrals, deformation families
//! with signed parameter exponents, and the localization check that
//! compares a family against its truncation near a dual vertex.
//!
//! Conventions fixed here once and used everywhere:
//! * The stretch parameter satisfies `t > 1`; degenerations are read as
//!   `t → ∞`, and `log_t = Log / log t`.
//! * A deformation family stores a signed exponent `E(α)` per term and
//!   evaluates to coefficient `ξ_α · t^{−E(α)}`; read as a polynomial over
//!   the series field, the coefficient of `α` is the monomial with exponent
//!   `E(α)`, so its valuation is `−E(α)` and the family's tropicalization
//!   has coefficient `−E(α)`. With exponents produced by [`pr_function`]
//!   (`E = −c_α` on recovered spine coefficients), the amoebas of
//!   `evaluate_at(t)` collapse onto the spine as `t` grows.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::exact::{self, f64_of_rational, Q, Z};
use crate::hausdorff::{self, CloudMetric};
use crate::hull;
use crate::lattice::{newton_polytope, LatticePoint, Lifting, Polytope, RegularSubdivision};
use crate::puiseux::{PuiseuxPolynomial, PuiseuxSeries};
use crate::rng::{derive_rng, derive_seed};
use crate::roots;
use crate::tropical::{corner_locus, TropicalHypersurface, TropicalPolynomial};

/// Largest denominator used when snapping Monte-Carlo estimates to exact
/// rationals for downstream exact duality.
pub const SNAP_DENOMINATOR: u64 = 1_000_000;

/// Relative residual threshold for accepting a refined hypersurface point.
const SAMPLE_RESIDUAL: f64 = 1e-12;

/// Fixed sample count and stream key for the order map (deterministic).
const ORDER_SAMPLES: usize = 4096;
const ORDER_STREAM: u64 = 0x6F72_6465_7221_0a11;

fn check_stretch(t: f64) -> Result<()> {
    if !(t > 1.0) || !t.is_finite() {
        return Err(Error::invalid("stretch parameter must satisfy t > 1"));
    }
    Ok(())
}

/// Coordinatewise log base t of moduli: `(log|z_1|, …, log|z_n|) / log t`.
pub fn log_t(z: &[Complex64], t: f64) -> Result<Vec<f64>> {
    check_stretch(t)?;
    z.iter()
        .map(|zi| {
            let m = zi.norm();
            if m == 0.0 {
                return Err(Error::invalid("log map needs nonzero coordinates"));
            }
            Ok(m.ln() / t.ln())
        })
        .collect()
}

/// The modulus-stretching diffeomorphism of the torus: arguments preserved,
/// moduli rescaled so that `Log(h_t(z)) = Log(z) / log t`.
pub fn h_t(z: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
    check_stretch(t)?;
    z.iter()
        .map(|zi| {
            let m = zi.norm();
            if m == 0.0 {
                return Err(Error::invalid("modulus stretch needs nonzero coordinates"));
            }
            Ok(Complex64::from_polar(m.powf(1.0 / t.ln()), zi.arg()))
        })
        .collect()
}

/// Coordinatewise argument in `[0, 2π)`.
pub fn arg_vec(z: &[Complex64]) -> Vec<f64> {
    z.iter().map(|zi| zi.arg().rem_euclid(std::f64::consts::TAU)).collect()
}

/// A Laurent polynomial with complex coefficients, `Σ a_α z^α`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPolynomial {
    terms: BTreeMap<LatticePoint, Complex64>,
}

impl ComplexPolynomial {
    /// Builds from (exponent, coefficient) pairs. Zero coefficients are
    /// dropped; duplicates and mixed dimensions are rejected; at least one
    /// nonzero term must remain.
    pub fn new(terms: impl IntoIterator<Item = (LatticePoint, Complex64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (p, c) in terms {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::invalid("non-finite coefficient"));
            }
            if c.norm() == 0.0 {
                continue;
            }
            if map.insert(p.clone(), c).is_some() {
                return Err(Error::invalid(format!("duplicate exponent {p:?}")));
            }
        }
        let poly = ComplexPolynomial { terms: map };
        if poly.terms.is_empty() {
            return Err(Error::EmptySupport);
        }
        let n = poly.ambient_dim();
        if poly.terms.keys().any(|p| p.dim() != n) {
            return Err(Error::invalid("mixed exponent dimensions"));
        }
        Ok(poly)
    }

    pub fn ambient_dim(&self) -> usize {
        self.terms.keys().next().map_or(0, |p| p.dim())
    }

    pub fn support(&self) -> Vec<LatticePoint> {
        self.terms.keys().cloned().collect()
    }

    pub fn coeff(&self, exponent: &LatticePoint) -> Option<Complex64> {
        self.terms.get(exponent).copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticePoint, &Complex64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Evaluation at a point of the torus (no coordinate may vanish when a
    /// negative exponent appears).
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, c) in &self.terms {
            acc += c * monomial_value(p, z);
        }
        acc
    }

    /// One-pass evaluation of `f` and of all the scaled derivatives
    /// `z_j ∂_j f = Σ α_j a_α z^α`.
    pub fn eval_with_log_derivatives(&self, z: &[Complex64]) -> (Complex64, Vec<Complex64>) {
        let n = self.ambient_dim();
        let mut f = Complex64::new(0.0, 0.0);
        let mut d = vec![Complex64::new(0.0, 0.0); n];
        for (p, c) in &self.terms {
            let m = c * monomial_value(p, z);
            f += m;
            for j in 0..n {
                d[j] += m * (p.0[j] as f64);
            }
        }
        (f, d)
    }

    /// Sum of absolute term values — the natural scale for residuals.
    pub fn eval_scale(&self, z: &[Complex64]) -> f64 {
        self.terms.iter().map(|(p, c)| (c * monomial_value(p, z)).norm()).sum()
    }

    pub fn newton_polytope(&self) -> Result<Polytope> {
        newton_polytope(&self.support())
    }

    /// Restriction of the support to the lattice points of a cell.
    pub fn truncate_to_cell(&self, cell: &Polytope) -> Result<ComplexPolynomial> {
        ComplexPolynomial::new(
            self.terms
                .iter()
                .filter(|(p, _)| cell.contains_lattice(p))
                .map(|(p, c)| (p.clone(), *c)),
        )
    }
}

fn monomial_value(p: &LatticePoint, z: &[Complex64]) -> Complex64 {
    let mut m = Complex64::new(1.0, 0.0);
    for (e, zi) in p.0.iter().zip(z) {
        if *e != 0 {
            m *= zi.powi(*e as i32);
        }
    }
    m
}

/// Which coordinates a point cloud lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    /// log-of-modulus coordinates, n per point.
    Log,
    /// arguments on the torus, n per point, each in `[0, 2π)`.
    Arg,
    /// both blocks: `[x_1..x_n, θ_1..θ_n]`, 2n per point.
    Phase,
}

/// Provenance record of a generated cloud.
#[derive(Debug, Clone)]
pub struct CloudMeta {
    pub t: f64,
    pub seed: u64,
    pub requested: usize,
    pub bounds: Option<Vec<(f64, f64)>>,
}

/// A finite set of points in one of the three cloud spaces.
#[derive(Debug, Clone)]
pub struct PointCloud {
    space: Space,
    dim: usize,
    points: Vec<Vec<f64>>,
    pub meta: CloudMeta,
}

impl PointCloud {
    pub fn new(space: Space, dim: usize, points: Vec<Vec<f64>>, meta: CloudMeta) -> Result<Self> {
        let width = match space {
            Space::Phase => 2 * dim,
            _ => dim,
        };
        if points.iter().any(|p| p.len() != width) {
            return Err(Error::invalid("point width does not match the declared space"));
        }
        Ok(PointCloud { space, dim, points, meta })
    }

    pub fn space(&self) -> Space {
        self.space
    }

    /// Ambient dimension n (phase points carry 2n coordinates).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The log-coordinate block (amoeba projection).
    pub fn log_projection(&self) -> Result<PointCloud> {
        match self.space {
            Space::Log => Ok(self.clone()),
            Space::Arg => Err(Error::invalid("argument cloud has no log projection")),
            Space::Phase => Ok(PointCloud {
                space: Space::Log,
                dim: self.dim,
                points: self.points.iter().map(|p| p[..self.dim].to_vec()).collect(),
                meta: self.meta.clone(),
            }),
        }
    }

    /// The argument block (coamoeba projection).
    pub fn arg_projection(&self) -> Result<PointCloud> {
        match self.space {
            Space::Arg => Ok(self.clone()),
            Space::Log => Err(Error::invalid("log cloud has no argument projection")),
            Space::Phase => Ok(PointCloud {
                space: Space::Arg,
                dim: self.dim,
                points: self.points.iter().map(|p| p[self.dim..].to_vec()).collect(),
                meta: self.meta.clone(),
            }),
        }
    }
}

/// Random points on `{f = 0}` in phase coordinates at stretch `t`.
///
/// Each of the `k` slices fixes all but one coordinate (the pivot rotates
/// round-robin with the sample index, so axis-parallel tentacles in every
/// direction get sampled): moduli are drawn as `t^x` with `x` uniform in the
/// box, arguments uniform on the circle, and the remaining univariate
/// polynomial is solved densely. Every root is Newton-refined to relative
/// residual ≤ 1e−12 and kept when its log-coordinate stays inside the box,
/// so a slice may contribute several points or none. Deterministic in
/// `seed`; slices where the polynomial degenerates to a monomial are
/// skipped; an entirely empty harvest is an error.
pub fn sample_hypersurface(
    f: &ComplexPolynomial,
    t: f64,
    bounds: &[(f64, f64)],
    k: usize,
    seed: u64,
) -> Result<PointCloud> {
    check_stretch(t)?;
    let n = f.ambient_dim();
    if bounds.len() != n {
        return Err(Error::invalid("box dimension does not match the polynomial"));
    }
    if k == 0 {
        return Err(Error::invalid("need at least one sample"));
    }
    let log_t_of = |m: f64| m.ln() / t.ln();
    let mut points = Vec::new();
    for i in 0..k {
        let mut rng = derive_rng(seed, i as u64);
        let pivot = i % n;
        let mut logs = vec![0.0; n];
        let mut args = vec![0.0; n];
        let mut z = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            if j == pivot {
                continue;
            }
            logs[j] = rng.gen_range(bounds[j].0..=bounds[j].1);
            args[j] = rng.gen_range(0.0..std::f64::consts::TAU);
            z[j] = Complex64::from_polar(t.powf(logs[j]), args[j]);
        }
        // Collapse to a univariate polynomial in the pivot coordinate.
        let mut uni: BTreeMap<i64, Complex64> = BTreeMap::new();
        for (p, c) in f.terms() {
            let mut m = *c;
            for (j, zj) in z.iter().enumerate() {
                if j != pivot && p.0[j] != 0 {
                    m *= zj.powi(p.0[j] as i32);
                }
            }
            *uni.entry(p.0[pivot]).or_insert(Complex64::new(0.0, 0.0)) += m;
        }
        uni.retain(|_, c| c.norm() > 0.0);
        if uni.len() < 2 {
            continue; // univariately constant or a monomial: no torus roots
        }
        let dmin = *uni.keys().next().expect("nonempty");
        let dmax = *uni.keys().next_back().expect("nonempty");
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (dmax - dmin) as usize + 1];
        for (d, c) in &uni {
            coeffs[(d - dmin) as usize] = *c;
        }
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        for c in &mut coeffs {
            *c /= scale;
        }
        for root in roots::roots(&coeffs) {
            if root.norm() == 0.0 {
                continue;
            }
            let Some(w) = refine_univariate(&coeffs, root) else { continue };
            let x = log_t_of(w.norm());
            if x < bounds[pivot].0 || x > bounds[pivot].1 {
                continue;
            }
            let mut point = logs.clone();
            point[pivot] = x;
            let mut th = args.clone();
            th[pivot] = w.arg().rem_euclid(std::f64::consts::TAU);
            point.extend(th);
            points.push(point);
        }
    }
    if points.is_empty() {
        return Err(Error::EmptyCloud);
    }
    PointCloud::new(
        Space::Phase,
        n,
        points,
        CloudMeta { t, seed, requested: k, bounds: Some(bounds.to_vec()) },
    )
}

/// Newton-polish a root of `Σ c_d w^d` until the residual is at most
/// `SAMPLE_RESIDUAL` times the sum of term magnitudes; `None` when stuck.
fn refine_univariate(coeffs: &[Complex64], mut w: Complex64) -> Option<Complex64> {
    for _ in 0..40 {
        let (p, dp) = roots::eval_with_derivative(coeffs, w);
        let scale: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(d, c)| c.norm() * w.norm().powi(d as i32))
            .sum();
        if p.norm() <= SAMPLE_RESIDUAL * scale {
            return Some(w);
        }
        if dp.norm() == 0.0 {
            return None;
        }
        w -= p / dp;
    }
    None
}

/// Symmetric Hausdorff distance between a log cloud (restricted to the box)
/// and a tropical curve clipped to the same box.
pub fn hausdorff_to_complex(
    cloud: &PointCloud,
    gamma: &TropicalHypersurface,
    bounds: &[(f64, f64)],
) -> Result<f64> {
    if cloud.space() != Space::Log {
        return Err(Error::invalid("Hausdorff comparison expects a log-coordinate cloud"));
    }
    hausdorff::hausdorff_points_complex(cloud.points(), gamma, bounds)
}

/// Symmetric Hausdorff distance between two clouds in the same space, with
/// the metric induced by that space. A box, when given, restricts log
/// coordinates (argument clouds are unconstrained).
pub fn hausdorff_between_clouds(
    a: &PointCloud,
    b: &PointCloud,
    bounds: Option<&[(f64, f64)]>,
) -> Result<f64> {
    if a.space() != b.space() || a.dim() != b.dim() {
        return Err(Error::invalid("clouds live in different spaces"));
    }
    let metric = match a.space() {
        Space::Log => CloudMetric::Euclidean,
        Space::Arg => CloudMetric::Torus,
        Space::Phase => CloudMetric::Phase(a.dim()),
    };
    let filter = |c: &PointCloud| -> Vec<Vec<f64>> {
        match (bounds, c.space()) {
            (Some(b), Space::Log) => {
                c.points().iter().filter(|p| hausdorff::in_box(p, b)).cloned().collect()
            }
            (Some(b), Space::Phase) => c
                .points()
                .iter()
                .filter(|p| hausdorff::in_box(&p[..c.dim()], b))
                .cloned()
                .collect(),
            _ => c.points().to_vec(),
        }
    };
    hausdorff::hausdorff_point_sets(&filter(a), &filter(b), metric)
}

/// Monte-Carlo torus average of `log|f| − <α, x>` over the fiber above `x`
/// (natural-log coordinates), with its standard error. This is the spine
/// coefficient `c_α` when `x` lies in the complement component of order `α`.
pub fn ronkin_coefficient(
    f: &ComplexPolynomial,
    alpha: &LatticePoint,
    x: &[f64],
    n_samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let n = f.ambient_dim();
    if x.len() != n || alpha.dim() != n {
        return Err(Error::invalid("dimension mismatch"));
    }
    if n_samples == 0 {
        return Err(Error::invalid("need at least one sample"));
    }
    let moduli: Vec<f64> = x.iter().map(|xi| xi.exp()).collect();
    let shift: f64 = alpha.0.iter().zip(x).map(|(a, xi)| (*a as f64) * xi).sum();
    let mut rng = derive_rng(seed, 0);
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    let mut kept = 0usize;
    let mut rejected = 0usize;
    while kept < n_samples {
        let z: Vec<Complex64> = moduli
            .iter()
            .map(|m| Complex64::from_polar(*m, rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect();
        let v = f.eval(&z).norm();
        if v < 1e-300 {
            rejected += 1;
            if rejected > 10 * n_samples {
                return Err(Error::invalid("x not in complement: the fiber keeps hitting zeros"));
            }
            continue;
        }
        let val = v.ln() - shift;
        sum += val;
        sumsq += val * val;
        kept += 1;
    }
    let mean = sum / n_samples as f64;
    let stderr = if n_samples >= 2 {
        let var = (sumsq - sum * sum / n_samples as f64) / (n_samples as f64 - 1.0);
        (var.max(0.0) / n_samples as f64).sqrt()
    } else {
        0.0
    };
    Ok((mean, stderr))
}

/// The order of the amoeba-complement component containing `x`: the rounded
/// torus average of `Re[z_j ∂_j f / f]`, with the rounding residual.
/// Deterministic (fixed internal sample stream).
pub fn order_map(f: &ComplexPolynomial, x: &[f64]) -> Result<(LatticePoint, f64)> {
    let n = f.ambient_dim();
    if x.len() != n {
        return Err(Error::invalid("dimension mismatch"));
    }
    let moduli: Vec<f64> = x.iter().map(|xi| xi.exp()).collect();
    let mut rng = derive_rng(ORDER_STREAM, 0);
    let mut acc = vec![0.0; n];
    let mut kept = 0usize;
    let mut rejected = 0usize;
    while kept < ORDER_SAMPLES {
        let z: Vec<Complex64> = moduli
            .iter()
            .map(|m| Complex64::from_polar(*m, rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect();
        let (fv, dv) = f.eval_with_log_derivatives(&z);
        if fv.norm() < 1e-300 {
            rejected += 1;
            if rejected > 10 * ORDER_SAMPLES {
                return Err(Error::AmbiguousOrder);
            }
            continue;
        }
        for j in 0..n {
            acc[j] += (dv[j] / fv).re;
        }
        kept += 1;
    }
    let mut rounded = Vec::with_capacity(n);
    let mut residual: f64 = 0.0;
    for a in &acc {
        let mean = a / ORDER_SAMPLES as f64;
        let r = mean.round();
        residual = residual.max((mean - r).abs());
        rounded.push(r as i64);
    }
    if residual > 0.2 {
        return Err(Error::AmbiguousOrder);
    }
    Ok((LatticePoint::new(rounded), residual))
}

/// One complement probe per vertex of the Newton polytope: `radius` times
/// the normalized sum of the outward normals of the facets at that vertex
/// (a direction interior to the vertex's normal cone). Requires a
/// full-dimensional Newton polytope.
pub fn default_probes(
    f: &ComplexPolynomial,
    radius: f64,
) -> Result<BTreeMap<LatticePoint, Vec<f64>>> {
    let delta = f.newton_polytope()?;
    let n = f.ambient_dim();
    if delta.dim != n {
        return Err(Error::invalid("default probes need a full-dimensional Newton polytope"));
    }
    let verts: Vec<Vec<Q>> = delta.vertices.iter().map(|v| v.to_rational()).collect();
    let facets = hull::facets_full_dim(&verts);
    let mut out = BTreeMap::new();
    for (vi, v) in delta.vertices.iter().enumerate() {
        let mut u = vec![0.0; n];
        for facet in facets.iter().filter(|fc| fc.points.contains(&vi)) {
            let nf: Vec<f64> = facet.normal.iter().map(exact::f64_of_integer).collect();
            let norm = nf.iter().map(|a| a * a).sum::<f64>().sqrt();
            for j in 0..n {
                u[j] += nf[j] / norm;
            }
        }
        let norm = u.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::invalid("degenerate normal cone"));
        }
        out.insert(v.clone(), u.into_iter().map(|a| radius * a / norm).collect());
    }
    Ok(out)
}

/// Monte-Carlo spine estimate: per-component coefficients with standard
/// errors, and the tropical polynomial with those coefficients snapped to
/// the simplest rational within four standard errors of each estimate
/// (falling back to the best approximation with denominator ≤
/// [`SNAP_DENOMINATOR`] if that simplest rational is itself huge).
#[derive(Debug, Clone)]
pub struct SpineResult {
    pub coefficients: BTreeMap<LatticePoint, (f64, f64)>,
    pub spine: TropicalPolynomial,
    /// Worst |estimate − snapped| over the coefficients.
    pub snap_error: f64,
}

/// Recovers the spine of the amoeba of `f` from torus integrals: one probe
/// point per complement order. Each probe is validated against
/// [`order_map`]; its coefficient is the torus average from
/// [`ronkin_coefficient`] with `n_samples` draws.
pub fn spine(
    f: &ComplexPolynomial,
    probes: &BTreeMap<LatticePoint, Vec<f64>>,
    n_samples: usize,
    seed: u64,
) -> Result<SpineResult> {
    if probes.is_empty() {
        return Err(Error::invalid("need at least one probe"));
    }
    let mut coefficients = BTreeMap::new();
    for (i, (alpha, x)) in probes.iter().enumerate() {
        let (ord, _) = order_map(f, x)?;
        if &ord != alpha {
            return Err(Error::invalid(format!(
                "probe for {alpha:?} lies in the complement component of order {ord:?}"
            )));
        }
        let (c, se) = ronkin_coefficient(f, alpha, x, n_samples, derive_seed(seed, i as u64))?;
        coefficients.insert(alpha.clone(), (c, se));
    }
    // Snap each estimate to the simplest rational the statistics cannot
    // rule out: the smallest-denominator rational within four standard
    // errors of the estimate. A plain best-approximation under a
    // denominator cap would faithfully reproduce the Monte-Carlo noise
    // instead of erasing it. If even the simplest candidate needs a huge
    // denominator (a genuinely irrational coefficient), fall back to the
    // best approximation under [`SNAP_DENOMINATOR`] so downstream exact
    // duality stays tractable.
    let mut snapped = Vec::with_capacity(coefficients.len());
    let mut snap_error = 0.0f64;
    for (alpha, (est, se)) in &coefficients {
        let tol = (4.0 * se).max(1e-7);
        let mut r = exact::simplest_in_interval(est - tol, est + tol);
        if r.denom() > &Z::from(SNAP_DENOMINATOR) {
            r = exact::approx_rational(*est, SNAP_DENOMINATOR).0;
        }
        snap_error = snap_error.max((est - f64_of_rational(&r)).abs());
        snapped.push((alpha.clone(), r));
    }
    let spine = TropicalPolynomial::new(snapped)?;
    Ok(SpineResult { coefficients, spine, snap_error })
}

/// The lifting that spreads spine coefficients to the full support: on
/// recovered orders it is `−c_α` (exact, from the snapped spine); every
/// other support point `α_j` takes its assigned cell's supporting
/// functional value plus the slack `s_j > 0`, landing it on or above the
/// lower hull so the induced subdivision is unchanged.
pub fn pr_function(
    spine: &SpineResult,
    tau: &RegularSubdivision,
    assignment: &BTreeMap<LatticePoint, usize>,
    s: &[Q],
) -> Result<Lifting> {
    if s.len() != assignment.len() {
        return Err(Error::invalid("need exactly one slack per assigned point"));
    }
    let mut lifting = Lifting::new();
    for (alpha, _) in &spine.coefficients {
        let c = spine
            .spine
            .coeff(alpha)
            .expect("spine polynomial carries every recovered coefficient");
        lifting.set(alpha.clone(), -c.clone());
    }
    for ((alpha, cell_idx), slack) in assignment.iter().zip(s) {
        if spine.coefficients.contains_key(alpha) {
            return Err(Error::invalid(format!(
                "{alpha:?} already carries a recovered spine coefficient"
            )));
        }
        let cell = tau
            .cells
            .get(*cell_idx)
            .ok_or_else(|| Error::invalid(format!("no cell with index {cell_idx}")))?;
        if !cell.polytope.contains_lattice(alpha) {
            return Err(Error::invalid(format!("{alpha:?} is not in its assigned cell")));
        }
        let value = RegularSubdivision::functional_value(cell, &alpha.to_rational()) + slack;
        lifting.set(alpha.clone(), value);
    }
    Ok(lifting)
}

/// A deformation family `Σ ξ_α t^{−E(α)} z^α` with exact signed exponents.
///
/// `E(α)` is lifting-oriented (e.g. the output of [`pr_function`], which is
/// `−c_α` on recovered orders): larger `E` means the term dies faster as
/// `t → ∞`. Read over the series field, the coefficient of `α` is the
/// monomial with exponent `E(α)`, so `val(coefficient) = −E(α)` and the
/// tropicalization has coefficient `−E(α)`.
#[derive(Debug, Clone)]
pub struct ViroFamily {
    base: BTreeMap<LatticePoint, Complex64>,
    exponents: BTreeMap<LatticePoint, Q>,
}

impl ViroFamily {
    /// Builds from matching base-coefficient and exponent maps.
    pub fn new(
        base: BTreeMap<LatticePoint, Complex64>,
        exponents: BTreeMap<LatticePoint, Q>,
    ) -> Result<Self> {
        let base: BTreeMap<LatticePoint, Complex64> =
            base.into_iter().filter(|(_, c)| c.norm() > 0.0).collect();
        if base.is_empty() {
            return Err(Error::EmptySupport);
        }
        if base.keys().any(|p| !exponents.contains_key(p))
            || exponents.keys().any(|p| !base.contains_key(p))
        {
            return Err(Error::invalid("base and exponents must share one support"));
        }
        let n = base.keys().next().expect("nonempty").dim();
        if base.keys().any(|p| p.dim() != n) {
            return Err(Error::invalid("mixed exponent dimensions"));
        }
        Ok(ViroFamily { base, exponents })
    }

    /// Family with the given base coefficients and exponents read from a
    /// lifting over exactly the base support.
    pub fn from_lifting(base: BTreeMap<LatticePoint, Complex64>, lifting: &Lifting) -> Result<Self> {
        let mut exponents = BTreeMap::new();
        for p in base.keys() {
            exponents.insert(p.clone(), lifting.get(p)?.clone());
        }
        ViroFamily::new(base, exponents)
    }

    pub fn support(&self) -> Vec<LatticePoint> {
        self.base.keys().cloned().collect()
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.keys().next().map_or(0, |p| p.dim())
    }

    pub fn base(&self) -> &BTreeMap<LatticePoint, Complex64> {
        &self.base
    }

    pub fn exponents(&self) -> &BTreeMap<LatticePoint, Q> {
        &self.exponents
    }

    /// The fiber at stretch `t`: coefficient `ξ_α · t^{−E(α)}`.
    pub fn evaluate_at(&self, t: f64) -> Result<ComplexPolynomial> {
        check_stretch(t)?;
        ComplexPolynomial::new(self.base.iter().map(|(p, c)| {
            let e = f64_of_rational(&self.exponents[p]);
            (p.clone(), c * t.powf(-e))
        }))
    }

    /// The family read over the series field: coefficient of `α` is the
    /// monomial `ξ_α u^{E(α)}` in the field's small variable `u`.
    pub fn as_puiseux(&self) -> PuiseuxPolynomial {
        PuiseuxPolynomial::new(self.base.iter().map(|(p, c)| {
            (p.clone(), PuiseuxSeries::monomial(*c, self.exponents[p].clone()))
        }))
        .expect("family support is nonempty")
    }

    /// Tropicalization: coefficient `−E(α)` at each support point.
    pub fn tropicalize(&self) -> Result<TropicalPolynomial> {
        self.as_puiseux().tropicalize()
    }

    /// Restriction of the support to the lattice points of a cell.
    pub fn truncate_to_cell(&self, cell: &Polytope) -> Result<ViroFamily> {
        let base: BTreeMap<LatticePoint, Complex64> = self
            .base
            .iter()
            .filter(|(p, _)| cell.contains_lattice(p))
            .map(|(p, c)| (p.clone(), *c))
            .collect();
        let exponents = self
            .exponents
            .iter()
            .filter(|(p, _)| cell.contains_lattice(p))
            .map(|(p, e)| (p.clone(), e.clone()))
            .collect();
        if base.is_empty() {
            return Err(Error::EmptySupport);
        }
        ViroFamily::new(base, exponents)
    }
}

/// The modulus rescaling attached to a cell functional: coordinatewise
/// `z_i ↦ z_i · t^{a_i}`, so `log_t` shifts by exactly `a`.
pub fn rescale_phi(z: &[Complex64], a: &[Q], t: f64) -> Result<Vec<Complex64>> {
    check_stretch(t)?;
    if z.len() != a.len() {
        return Err(Error::invalid("dimension mismatch"));
    }
    Ok(z.iter()
        .zip(a)
        .map(|(zi, ai)| zi * Complex64::new(t.powf(f64_of_rational(ai)), 0.0))
        .collect())
}

/// The corner-locus vertex dual to a full-dimensional cell of the
/// subdivision dual to `trop`.
pub fn dual_vertex_of_cell(trop: &TropicalPolynomial, cell: &Polytope) -> Result<Vec<Q>> {
    let locus = corner_locus(trop)?;
    for c in locus.cells_of_dim(0) {
        let marked = &locus.dual_faces[c.dual_face].marked;
        let poly = Polytope::from_points(marked)?;
        if poly.vertices == cell.vertices {
            return Ok(c.vertices[0].clone());
        }
    }
    Err(Error::invalid("cell is not dual to a vertex of the corner locus"))
}

/// Phase-space distance from a single torus point to the hypersurface of
/// `g`, as the best of the one-coordinate Newton projections: for each
/// coordinate in turn, all others are frozen and the one-variable equation
/// is polished to a true surface point, which witnesses an upper bound on
/// the distance. Coordinates are tried from the steepest logarithmic
/// derivative down; `None` when every projection stalls.
fn projection_distance(g: &ComplexPolynomial, z: &[Complex64], t: f64) -> Option<f64> {
    let n = g.ambient_dim();
    let p_from = |w: &[Complex64]| -> Vec<f64> {
        let mut p: Vec<f64> = w.iter().map(|wi| wi.norm().ln() / t.ln()).collect();
        p.extend(w.iter().map(|wi| wi.arg().rem_euclid(std::f64::consts::TAU)));
        p
    };
    let here = p_from(z);
    let (_, dv) = g.eval_with_log_derivatives(z);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        dv[b].norm().partial_cmp(&dv[a].norm()).expect("finite derivative norms")
    });
    let mut best: Option<f64> = None;
    for j in order {
        let mut w = z.to_vec();
        let mut done = false;
        for _ in 0..50 {
            let (fv, dv) = g.eval_with_log_derivatives(&w);
            if fv.norm() <= 1e-12 * g.eval_scale(&w) {
                done = true;
                break;
            }
            if dv[j].norm() == 0.0 {
                break;
            }
            // Newton step in log-coordinates of z_j: z_j ← z_j·e^{−f/(z_j ∂_j f)}.
            let step = fv / dv[j];
            let clamped = if step.norm() > 1.0 { step / step.norm() } else { step };
            w[j] *= (-clamped).exp();
        }
        if done {
            let d = hausdorff::phase_distance(&here, &p_from(&w), n);
            best = Some(best.map_or(d, |b: f64| b.min(d)));
        }
    }
    best
}

/// Distances from the family's hypersurface to its truncation near a
/// center, at one stretch value: each sample of `{evaluate_at(t) = 0}`
/// whose log block lies in the `r`-ball around `center` is projected onto
/// the truncated hypersurface, and the phase-space projection distances
/// are aggregated. Returns (max, mean, stderr of the mean).
pub fn localization_distance_at(
    family: &ViroFamily,
    cell: &Polytope,
    center: &[f64],
    r: f64,
    t: f64,
    k: usize,
    seed: u64,
) -> Result<(f64, f64, f64)> {
    let n = family.ambient_dim();
    if center.len() != n {
        return Err(Error::invalid("dimension mismatch"));
    }
    let bounds: Vec<(f64, f64)> = center.iter().map(|c| (c - r, c + r)).collect();
    let full = family.evaluate_at(t)?;
    let trunc = family.truncate_to_cell(cell)?.evaluate_at(t)?;
    let full_cloud = sample_hypersurface(&full, t, &bounds, k, seed)?;
    let ball: Vec<&Vec<f64>> = full_cloud
        .points()
        .iter()
        .filter(|p| {
            p[..n].iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt() <= r
        })
        .collect();
    if ball.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let mut max = 0.0f64;
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for p in &ball {
        let z: Vec<Complex64> =
            (0..n).map(|j| Complex64::from_polar(t.powf(p[j]), p[n + j])).collect();
        let d = projection_distance(&trunc, &z, t)
            .ok_or_else(|| Error::invalid("projection onto the truncated hypersurface stalled"))?;
        max = max.max(d);
        sum += d;
        sumsq += d * d;
    }
    let m = ball.len() as f64;
    let mean = sum / m;
    let stderr = if ball.len() >= 2 {
        let var = (sumsq - sum * sum / m) / (m - 1.0);
        (var.max(0.0) / m).sqrt()
    } else {
        0.0
    };
    Ok((max, mean, stderr))
}

/// Result of [`localization_check`]: one row per ladder value.
#[derive(Debug, Clone)]
pub struct LocalizationReport {
    pub center: Vec<f64>,
    pub ladder: Vec<f64>,
    pub max_distances: Vec<f64>,
    pub mean_distances: Vec<f64>,
    pub stderrs: Vec<f64>,
    pub epsilon: f64,
    /// Whether the final ladder value meets the ε bound.
    pub passed: bool,
}

/// Checks that near the dual vertex of `cell`, the family's hypersurface
/// is phase-space close to its truncation, with distances measured along a
/// stretch ladder. The comparison happens in (log_t, arguments)
/// coordinates, where the cell's rescaling map acts as an isometry, so the
/// ε-neighborhood statement is unchanged by it.
pub fn localization_check(
    family: &ViroFamily,
    cell: &Polytope,
    r: f64,
    ladder: &[f64],
    epsilon: f64,
    k: usize,
    seed: u64,
) -> Result<LocalizationReport> {
    if ladder.is_empty() {
        return Err(Error::invalid("empty stretch ladder"));
    }
    let center_q = dual_vertex_of_cell(&family.tropicalize()?, cell)?;
    let center: Vec<f64> = center_q.iter().map(f64_of_rational).collect();
    let mut max_distances = Vec::new();
    let mut mean_distances = Vec::new();
    let mut stderrs = Vec::new();
    for (i, &t) in ladder.iter().enumerate() {
        let (max, mean, se) =
            localization_distance_at(family, cell, &center, r, t, k, derive_seed(seed, i as u64))?;
        max_distances.push(max);
        mean_distances.push(mean);
        stderrs.push(se);
    }
    let passed = *max_distances.last().expect("nonempty ladder") <= epsilon;
    Ok(LocalizationReport {
        center,
        ladder: ladder.to_vec(),
        max_distances,
        mean_distances,
        stderrs,
        epsilon,
        passed,
    })
}

/// Whether `(θ_1, θ_2)` lies in the open complement of the closed coamoeba
/// of the line `e^{iα_1} z + e^{iα_2} w + e^{iα_3}`.
///
/// A point of the torus is in the closed coamoeba exactly when, after
/// recentering by `p = θ_1 + α_1 − α_3 − π` and `q = θ_2 + α_2 − α_3 − π`
/// (wrapped to `(−π, π]`), it satisfies `p·q ≤ 0` and `|p| + |q| ≤ π`; the
/// boundary equalities trace the three families of external lines.
pub fn line_coamoeba_complement(alphas: &[f64; 3], theta: &[f64; 2]) -> bool {
    let p = wrap_to_pi(theta[0] + alphas[0] - alphas[2] - std::f64::consts::PI);
    let q = wrap_to_pi(theta[1] + alphas[1] - alphas[2] - std::f64::consts::PI);
    let in_closure = p * q <= 0.0 && p.abs() + q.abs() <= std::f64::consts::PI;
    !in_closure
}

/// Wrap an angle into `(−π, π]`.
fn wrap_to_pi(x: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let y = x.rem_euclid(tau);
    if y > std::f64::consts::PI {
        y - tau
    } else {
        y
    }
}
