//! Truncated Puiseux series over complex coefficients.
//!
//! A series is a finite sum `Σ ξ_j t^j` with strictly increasing exact
//! rational exponents and nonzero complex coefficients, plus an explicit
//! truncation marker: either the series is known exactly, or it is known
//! modulo `O(t^order)`. Arithmetic propagates truncation soundly (a product
//! is only known to the order its factors allow). Exponents stay exact
//! rationals throughout, so valuations — the tropical data — carry no
//! floating error; only the complex coefficients are numeric.
//!
//! The valuation is `val(a) = −min exponent` with `val(0) = −∞`, its
//! complexification `w(a) = e^{val(a) + i·arg(leading coefficient)}`, and
//! `W` applies `w` coordinatewise. Tropicalization of a polynomial over
//! this field reads off `val` of every coefficient series.

use crate::error::{Error, Result};
use crate::exact::{self, Q};
use crate::lattice::LatticePoint;
use crate::rng::derive_rng;
use crate::roots;
use crate::tropical::TropicalPolynomial;
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use std::collections::BTreeMap;

/// How much of a series is known: everything, or terms below an exponent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Truncation {
    /// Known modulo `O(t^order)`: only exponents `< order` are meaningful.
    Order(Q),
    /// The series is exact (a finite sum with no hidden tail).
    Exact,
}

impl Truncation {
    fn bound(&self) -> Option<&Q> {
        match self {
            Truncation::Order(q) => Some(q),
            Truncation::Exact => None,
        }
    }

    fn min(a: &Truncation, b: &Truncation) -> Truncation {
        std::cmp::min(a, b).clone()
    }
}

/// A truncated Puiseux series.
#[derive(Debug, Clone, PartialEq)]
pub struct PuiseuxSeries {
    /// Strictly increasing exponents, nonzero coefficients.
    terms: Vec<(Q, Complex64)>,
    truncation: Truncation,
}

impl PuiseuxSeries {
    /// The exact zero series.
    pub fn zero() -> PuiseuxSeries {
        PuiseuxSeries { terms: Vec::new(), truncation: Truncation::Exact }
    }

    /// Zero up to `O(t^order)` — nothing known below the order.
    pub fn zero_to(order: Q) -> PuiseuxSeries {
        PuiseuxSeries { terms: Vec::new(), truncation: Truncation::Order(order) }
    }

    /// A single term `c · t^exp` (exact). The zero coefficient gives the
    /// exact zero series.
    pub fn monomial(c: Complex64, exp: Q) -> PuiseuxSeries {
        PuiseuxSeries::from_terms([(exp, c)], Truncation::Exact)
    }

    pub fn constant(c: Complex64) -> PuiseuxSeries {
        PuiseuxSeries::monomial(c, Q::zero())
    }

    pub fn one() -> PuiseuxSeries {
        PuiseuxSeries::constant(Complex64::new(1.0, 0.0))
    }

    /// Normalize a list of (exponent, coefficient) pairs: merge equal
    /// exponents, drop zero coefficients and anything at or above the
    /// truncation order.
    pub fn from_terms(
        pairs: impl IntoIterator<Item = (Q, Complex64)>,
        truncation: Truncation,
    ) -> PuiseuxSeries {
        let mut acc: BTreeMap<Q, Complex64> = BTreeMap::new();
        for (e, c) in pairs {
            *acc.entry(e).or_insert_with(|| Complex64::new(0.0, 0.0)) += c;
        }
        let terms: Vec<(Q, Complex64)> = acc
            .into_iter()
            .filter(|(e, c)| {
                c.norm() != 0.0
                    && truncation.bound().map_or(true, |b| e < b)
            })
            .collect();
        PuiseuxSeries { terms, truncation }
    }

    pub fn terms(&self) -> &[(Q, Complex64)] {
        &self.terms
    }

    pub fn truncation(&self) -> &Truncation {
        &self.truncation
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Leading (lowest-exponent) term.
    pub fn leading(&self) -> Option<(&Q, Complex64)> {
        self.terms.first().map(|(e, c)| (e, *c))
    }

    /// The valuation `−min exponent`; `None` encodes `−∞` (zero series).
    pub fn val(&self) -> Option<Q> {
        self.leading().map(|(e, _)| -e.clone())
    }

    /// Complexified valuation `w(a) = e^{val(a) + i·arg(ξ)}` where ξ is the
    /// leading coefficient.
    pub fn w(&self) -> Result<Complex64> {
        let Some((e, xi)) = self.leading() else {
            return Err(Error::WUndefinedAtZero);
        };
        let val = exact::f64_of_rational(&-e.clone());
        Ok(Complex64::from_polar(val.exp(), xi.arg()))
    }

    /// Keep only exponents `< order` and weaken the truncation marker
    /// accordingly.
    pub fn truncate_to(&self, order: &Q) -> PuiseuxSeries {
        PuiseuxSeries::from_terms(
            self.terms.iter().cloned(),
            Truncation::min(&self.truncation, &Truncation::Order(order.clone())),
        )
    }

    /// Drop terms whose magnitude is below `rel_eps` times the largest
    /// coefficient magnitude *at the same or a lower exponent* — floating
    /// cancellation noise control for iterative solvers.
    ///
    /// The cutoff must respect the grading: an expansion with a small
    /// convergence radius has genuinely geometric coefficient growth, so a
    /// cutoff relative to the global maximum would delete the small (and
    /// t-adically decisive) leading coefficients whenever the tail grows
    /// large. Noise at exponent `e` arises from cancellation among products
    /// of terms at exponents at most about `e`, so the prefix maximum is the
    /// right yardstick; in particular the leading term is never dropped.
    pub fn chop(&self, rel_eps: f64) -> PuiseuxSeries {
        let mut prefix_max = 0.0f64;
        PuiseuxSeries {
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| {
                    let keep = c.norm() > rel_eps * prefix_max;
                    if keep {
                        prefix_max = prefix_max.max(c.norm());
                    }
                    keep
                })
                .cloned()
                .collect(),
            truncation: self.truncation.clone(),
        }
    }

    pub fn neg(&self) -> PuiseuxSeries {
        PuiseuxSeries {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
            truncation: self.truncation.clone(),
        }
    }

    pub fn add(&self, other: &PuiseuxSeries) -> PuiseuxSeries {
        PuiseuxSeries::from_terms(
            self.terms.iter().cloned().chain(other.terms.iter().cloned()),
            Truncation::min(&self.truncation, &other.truncation),
        )
    }

    pub fn sub(&self, other: &PuiseuxSeries) -> PuiseuxSeries {
        self.add(&other.neg())
    }

    /// Multiply by a single term `c · t^exp` (no truncation loss).
    pub fn mul_monomial(&self, c: Complex64, exp: &Q) -> PuiseuxSeries {
        if c.norm() == 0.0 {
            return match self.truncation.bound() {
                None => PuiseuxSeries::zero(),
                Some(b) => PuiseuxSeries::zero_to(b + exp),
            };
        }
        let truncation = match self.truncation.bound() {
            None => Truncation::Exact,
            Some(b) => Truncation::Order(b + exp),
        };
        PuiseuxSeries {
            terms: self.terms.iter().map(|(e, x)| (e + exp, x * c)).collect(),
            truncation,
        }
    }

    /// Cauchy product with sound truncation: with `a` known mod `t^A` and
    /// leading exponent `la` (symmetrically `b`), the product is known mod
    /// `t^{min(A + lb, B + la)}`.
    pub fn mul(&self, other: &PuiseuxSeries) -> PuiseuxSeries {
        // An exactly-zero factor gives an exactly-zero product.
        if (self.is_zero() && self.truncation == Truncation::Exact)
            || (other.is_zero() && other.truncation == Truncation::Exact)
        {
            return PuiseuxSeries::zero();
        }
        let bound_via = |trunc: &Truncation, other_lead: Option<&Q>| -> Option<Q> {
            let b = trunc.bound()?;
            Some(match other_lead {
                Some(l) => b + l,
                // Multiplying by a zero series: only its truncation limits.
                None => b.clone(),
            })
        };
        let la = self.leading().map(|(e, _)| e.clone());
        let lb = other.leading().map(|(e, _)| e.clone());
        let t1 = bound_via(&self.truncation, lb.as_ref());
        let t2 = bound_via(&other.truncation, la.as_ref());
        let truncation = match (t1, t2) {
            (None, None) => Truncation::Exact,
            (Some(a), None) => Truncation::Order(a),
            (None, Some(b)) => Truncation::Order(b),
            (Some(a), Some(b)) => Truncation::Order(a.min(b)),
        };
        let mut pairs = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                pairs.push((ea + eb, ca * cb));
            }
        }
        PuiseuxSeries::from_terms(pairs, truncation)
    }

    pub fn pow(&self, k: u32) -> PuiseuxSeries {
        let mut acc = PuiseuxSeries::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse, computed to `O(t^order)` by the geometric
    /// series around the leading term. Errors on the zero series.
    pub fn inv_to(&self, order: &Q) -> Result<PuiseuxSeries> {
        let Some((l, xi)) = self.leading() else {
            return Err(Error::invalid("division by zero series"));
        };
        let l = l.clone();
        // u = a / (ξ t^l) − 1 has strictly positive leading exponent: the
        // constant term divides out to exactly 1.0 (true complex division,
        // not multiplication by a rounded reciprocal), so it cancels
        // without residue.
        let u = PuiseuxSeries {
            terms: self.terms[1..]
                .iter()
                .map(|(e, c)| (e - &l, c / xi))
                .collect(),
            truncation: match self.truncation.bound() {
                None => Truncation::Exact,
                Some(b) => Truncation::Order(b - &l),
            },
        };
        // Σ (−u)^k to absolute order `order + l`, then shift back.
        let sum_order = order + &l;
        let mut acc = PuiseuxSeries::one().truncate_to(&sum_order);
        if let Some((gamma, _)) = u.leading() {
            debug_assert!(gamma.is_positive(), "leading term did not normalize");
            let neg_u = u.neg().truncate_to(&sum_order);
            let mut term = PuiseuxSeries::one();
            loop {
                term = term.mul(&neg_u).truncate_to(&sum_order);
                if term.is_zero() {
                    break;
                }
                acc = acc.add(&term);
            }
        }
        let mut inv = PuiseuxSeries {
            terms: acc.terms.iter().map(|(e, c)| (e - &l, c / xi)).collect(),
            truncation: match acc.truncation.bound() {
                None => Truncation::Exact,
                Some(b) => Truncation::Order(b - &l),
            },
        };
        // The input's own truncation limits what the inverse can know:
        // a = ā + O(t^A) ⟹ 1/a = 1/ā + O(t^{A − 2l}).
        if let Some(a_bound) = self.truncation.bound() {
            let limit = a_bound - &l - &l;
            if limit < *order {
                inv = inv.truncate_to(&limit);
            }
        }
        Ok(inv.truncate_to(order))
    }

    /// Numeric evaluation at a real parameter value `t > 0`.
    pub fn eval_at(&self, t: f64) -> Complex64 {
        assert!(t > 0.0, "series evaluation needs t > 0");
        let lt = t.ln();
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            acc += c * (exact::f64_of_rational(e) * lt).exp();
        }
        acc
    }
}

/// Coordinatewise complexified valuation `W : (𝕂*)ⁿ → (ℂ*)ⁿ`.
pub fn w_vector(point: &[PuiseuxSeries]) -> Result<Vec<Complex64>> {
    point.iter().map(|a| a.w()).collect()
}

/// A polynomial over the Puiseux field: exponents in `Z^n`, coefficients
/// nonzero truncated series.
#[derive(Debug, Clone, PartialEq)]
pub struct PuiseuxPolynomial {
    terms: BTreeMap<LatticePoint, PuiseuxSeries>,
}

impl PuiseuxPolynomial {
    /// Build from (exponent, coefficient series) pairs. Zero series are
    /// dropped; at least one nonzero term must remain and exponents must
    /// share an ambient dimension.
    pub fn new(
        pairs: impl IntoIterator<Item = (LatticePoint, PuiseuxSeries)>,
    ) -> Result<PuiseuxPolynomial> {
        let terms: BTreeMap<LatticePoint, PuiseuxSeries> =
            pairs.into_iter().filter(|(_, s)| !s.is_zero()).collect();
        let Some(first) = terms.keys().next() else {
            return Err(Error::EmptySupport);
        };
        let n = first.dim();
        if terms.keys().any(|p| p.dim() != n) {
            return Err(Error::invalid("mixed exponent dimensions"));
        }
        Ok(PuiseuxPolynomial { terms })
    }

    pub fn ambient_dim(&self) -> usize {
        self.terms.keys().next().expect("nonempty").dim()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticePoint, &PuiseuxSeries)> {
        self.terms.iter()
    }

    pub fn support(&self) -> Vec<LatticePoint> {
        self.terms.keys().cloned().collect()
    }

    pub fn coeff(&self, exponent: &LatticePoint) -> Option<&PuiseuxSeries> {
        self.terms.get(exponent)
    }

    /// Kapranov tropicalization: the max-plus polynomial with coefficients
    /// `val(a_α)`.
    pub fn tropicalize(&self) -> Result<TropicalPolynomial> {
        TropicalPolynomial::new(self.terms.iter().map(|(p, s)| {
            (p.clone(), s.val().expect("coefficients are nonzero by construction"))
        }))
    }
}

/// Substitute fixed series for the first `n−1` variables, producing the
/// coefficients of the univariate polynomial in the last variable, keyed
/// by its degree. Requires every fixed coordinate to be nonzero.
fn substitute_all_but_last(
    g: &PuiseuxPolynomial,
    fixed: &[PuiseuxSeries],
    work_order: &Q,
) -> Result<BTreeMap<i64, PuiseuxSeries>> {
    let n = g.ambient_dim();
    assert_eq!(fixed.len(), n - 1, "need n−1 fixed coordinates");
    // Cache powers per coordinate, including inverses for negative degrees.
    let power = |base: &PuiseuxSeries, e: i64| -> Result<PuiseuxSeries> {
        if e >= 0 {
            Ok(base.pow(e as u32))
        } else {
            Ok(base.inv_to(work_order)?.pow((-e) as u32))
        }
    };
    let mut out: BTreeMap<i64, PuiseuxSeries> = BTreeMap::new();
    for (alpha, a) in g.terms() {
        let mut term = a.clone();
        for (i, z) in fixed.iter().enumerate() {
            term = term.mul(&power(z, alpha.0[i])?);
        }
        let d = alpha.0[n - 1];
        let entry = out.entry(d).or_insert_with(PuiseuxSeries::zero);
        *entry = entry.add(&term);
    }
    out.retain(|_, s| !s.is_zero());
    Ok(out)
}

/// Lower hull of Newton-polygon points `(degree, leading exponent)`,
/// returned as consecutive edge endpoint pairs with increasing degree.
fn newton_polygon_edges(points: &[(i64, Q)]) -> Vec<((i64, Q), (i64, Q))> {
    // Monotone chain on points already sorted by degree (BTreeMap order),
    // keeping the lower boundary only.
    let mut hull: Vec<(i64, Q)> = Vec::new();
    for p in points {
        while hull.len() >= 2 {
            let a = &hull[hull.len() - 2];
            let b = &hull[hull.len() - 1];
            let cross = (Q::from_integer(exact::z(b.0 - a.0)) * (&p.1 - &a.1))
                - (Q::from_integer(exact::z(p.0 - a.0)) * (&b.1 - &a.1));
            // cross > 0: b lies strictly below the chord a→p, a genuine
            // lower-hull vertex. Otherwise (above or collinear) drop it;
            // collinear points are recovered per edge afterwards.
            if cross.is_positive() {
                break;
            }
            hull.pop();
        }
        hull.push(p.clone());
    }
    hull.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect()
}

/// Relative separation below which two leading-term roots are considered
/// tied, making the instance non-generic for the first-order solver.
const GENERIC_ROOT_SEPARATION: f64 = 1e-8;

/// One Newton–Puiseux root of `Σ a_d(t) y^d`, truncated to `O(t^order)`.
///
/// Picks a branch uniformly at random among the Newton-polygon edge roots
/// (each edge contributes as many branches as its horizontal width), then
/// refines by Newton iteration in truncated series arithmetic. Errors with
/// [`Error::NonGeneric`] when an edge polynomial has (numerically) tied
/// roots, and with an invalid-input error when there is no nonzero root.
fn newton_puiseux_root(
    coeffs: &BTreeMap<i64, PuiseuxSeries>,
    order: &Q,
    rng: &mut ChaCha20Rng,
) -> Result<PuiseuxSeries> {
    if coeffs.len() < 2 {
        return Err(Error::invalid("no nonzero root: polynomial is a monomial in the last variable"));
    }
    let pts: Vec<(i64, Q)> = coeffs
        .iter()
        .map(|(&d, s)| (d, s.leading().expect("nonzero").0.clone()))
        .collect();
    // Leading coefficients for edge polynomials.
    let lead: BTreeMap<i64, Complex64> =
        coeffs.iter().map(|(&d, s)| (d, s.leading().expect("nonzero").1)).collect();
    let mut branches: Vec<(Q, Complex64)> = Vec::new();
    for ((d1, e1), (d2, e2)) in newton_polygon_edges(&pts) {
        // y ~ ξ t^μ cancels the edge terms: e + d·μ constant on the edge.
        let mu = (&e1 - &e2) / Q::from_integer(exact::z(d2 - d1));
        // Edge polynomial in ξ over the points on the edge.
        let on_edge: Vec<(i64, Complex64)> = pts
            .iter()
            .filter(|(d, e)| {
                let lhs = (e - &e1) * Q::from_integer(exact::z(d2 - d1));
                let rhs = (&e2 - &e1) * Q::from_integer(exact::z(d - d1));
                lhs == rhs && *d >= d1 && *d <= d2
            })
            .map(|(d, _)| (*d, lead[d]))
            .collect();
        let deg_span = (d2 - d1) as usize;
        let mut poly = vec![Complex64::new(0.0, 0.0); deg_span + 1];
        for (d, c) in &on_edge {
            poly[(d - d1) as usize] = *c;
        }
        let edge_roots = roots::roots(&poly);
        let scale = edge_roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
        for (i, zi) in edge_roots.iter().enumerate() {
            if zi.norm() <= GENERIC_ROOT_SEPARATION * scale {
                // A numerically-zero root of the edge polynomial means a
                // tied/degenerate leading term.
                return Err(Error::NonGeneric);
            }
            for zj in edge_roots.iter().take(i) {
                if (zi - zj).norm() <= GENERIC_ROOT_SEPARATION * scale {
                    return Err(Error::NonGeneric);
                }
            }
        }
        branches.extend(edge_roots.into_iter().map(|xi| (mu.clone(), xi)));
    }
    if branches.is_empty() {
        return Err(Error::invalid("no nonzero root on the Newton polygon"));
    }
    let (mu, xi) = branches[rng.gen_range(0..branches.len())].clone();

    // Newton iteration y ← y − p(y)/p'(y) in truncated arithmetic. The
    // working order leaves headroom above the requested truncation.
    let work_order = order + Q::from_integer(exact::z(4));
    let dmin = *coeffs.keys().next().expect("nonempty");
    let mut y = PuiseuxSeries::monomial(xi, mu.clone());
    let eval =
        |c: &BTreeMap<i64, PuiseuxSeries>, y: &PuiseuxSeries| -> Result<PuiseuxSeries> {
            // Negative degrees are handled by evaluating Σ a_d y^{d−dmin}
            // and multiplying by y^{dmin} afterwards.
            let mut acc = PuiseuxSeries::zero();
            let mut pw = PuiseuxSeries::one();
            let mut next = dmin;
            for (&d, a) in c {
                while next < d {
                    pw = pw.mul(y).truncate_to(&work_order);
                    next += 1;
                }
                acc = acc.add(&a.mul(&pw));
            }
            if dmin != 0 {
                let shift = if dmin > 0 {
                    y.pow(dmin as u32)
                } else {
                    y.inv_to(&work_order)?.pow((-dmin) as u32)
                };
                acc = acc.mul(&shift);
            }
            Ok(acc.truncate_to(&work_order).chop(NEWTON_CHOP))
        };
    let deriv: BTreeMap<i64, PuiseuxSeries> = coeffs
        .iter()
        .filter(|(&d, _)| d != 0)
        .map(|(&d, a)| (d - 1, a.mul_monomial(Complex64::new(d as f64, 0.0), &Q::zero())))
        .collect();
    let mut converged = false;
    for _ in 0..60 {
        let py = eval(coeffs, &y)?;
        if py.is_zero() {
            converged = true;
            break;
        }
        let dpy = eval(&deriv, &y)?;
        if dpy.is_zero() {
            return Err(Error::NonGeneric);
        }
        // Chop against the scale of the current approximant, not of the
        // correction itself: a correction made of pure cancellation noise
        // is its own maximum, so a relative cutoff would never clear it
        // and the loop could stall below the requested order. The yardstick
        // is graded per exponent (the approximant's prefix maximum at the
        // correction term's exponent): the approximant's tail may genuinely
        // grow geometrically, and a single global scale taken from it would
        // wipe out genuine low-order corrections.
        let raw = py.mul(&dpy.inv_to(&work_order)?).truncate_to(&work_order);
        let correction = PuiseuxSeries {
            terms: raw
                .terms
                .iter()
                .filter(|(e, c)| {
                    let prefix_max = y
                        .terms
                        .iter()
                        .take_while(|(ye, _)| ye <= e)
                        .map(|(_, yc)| yc.norm())
                        .fold(0.0, f64::max);
                    c.norm() > NEWTON_CHOP * prefix_max
                })
                .cloned()
                .collect(),
            truncation: raw.truncation.clone(),
        };
        if correction.is_zero() {
            converged = true;
            break;
        }
        // The correction must improve strictly higher-order terms.
        if correction.leading().map(|(e, _)| e <= &mu).unwrap_or(false) {
            return Err(Error::NonGeneric);
        }
        y = y.sub(&correction).chop(NEWTON_CHOP);
        if correction.leading().map(|(e, _)| e >= order).unwrap_or(true) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(
            "Newton–Puiseux refinement stalled before the requested order".into(),
        ));
    }
    Ok(y.truncate_to(order))
}

/// Relative magnitude below which Newton-iteration coefficients are
/// treated as floating cancellation noise.
const NEWTON_CHOP: f64 = 1e-11;

/// Solve the last variable of `g` over fixed first coordinates: one
/// Newton–Puiseux branch, chosen deterministically from `seed`.
pub fn solve_in_last_variable(
    g: &PuiseuxPolynomial,
    fixed: &[PuiseuxSeries],
    order: &Q,
    seed: u64,
) -> Result<PuiseuxSeries> {
    let work_order = order + Q::from_integer(exact::z(4));
    let coeffs = substitute_all_but_last(g, fixed, &work_order)?;
    let mut rng = derive_rng(seed, 0);
    newton_puiseux_root(&coeffs, order, &mut rng)
}

/// Random points of the hypersurface `{g = 0}` in `(𝕂*)ⁿ`, truncated to
/// `O(t^order)`: the first `n−1` coordinates are random small series, the
/// last is a Newton–Puiseux root of the resulting univariate polynomial.
/// Failures (non-generic slices, no roots) are reported per sample.
///
/// Requires `g` to genuinely depend on its last variable (at least two
/// distinct last-variable degrees in the support).
pub fn sample_puiseux_solutions(
    g: &PuiseuxPolynomial,
    k: usize,
    seed: u64,
    order: &Q,
) -> Result<Vec<Result<Vec<PuiseuxSeries>>>> {
    let n = g.ambient_dim();
    let degrees: Vec<i64> = g.support().iter().map(|p| p.0[n - 1]).collect();
    if degrees.iter().min() == degrees.iter().max() {
        return Err(Error::invalid("polynomial does not depend on its last variable"));
    }
    let work_order = order + Q::from_integer(exact::z(4));
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let mut rng = derive_rng(seed, i as u64);
        let fixed: Vec<PuiseuxSeries> = (0..n - 1).map(|_| random_coordinate(&mut rng)).collect();
        let sample = substitute_all_but_last(g, &fixed, &work_order)
            .and_then(|coeffs| newton_puiseux_root(&coeffs, order, &mut rng))
            .map(|root| {
                let mut point = fixed.clone();
                point.push(root);
                point
            });
        out.push(sample);
    }
    Ok(out)
}

/// A random nonzero truncated series: one or two terms with half-integer
/// exponents in [−2, 2] and coefficients in the annulus 0.5 ≤ |ξ| ≤ 2.
fn random_coordinate(rng: &mut ChaCha20Rng) -> PuiseuxSeries {
    fn random_coeff(rng: &mut ChaCha20Rng) -> Complex64 {
        let r = rng.gen_range(0.5..2.0);
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        Complex64::from_polar(r, theta)
    }
    let e0 = exact::q(rng.gen_range(-4..=4), 2);
    let c0 = random_coeff(rng);
    let mut terms = vec![(e0.clone(), c0)];
    if rng.gen_bool(0.5) {
        let step = exact::q(rng.gen_range(1..=3), 2);
        let c1 = random_coeff(rng);
        terms.push((&e0 + step, c1));
    }
    PuiseuxSeries::from_terms(terms, Truncation::Exact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn lp(coords: &[i64]) -> LatticePoint {
        LatticePoint::new(coords.to_vec())
    }

    #[test]
    fn valuation_examples() {
        // 3t^{−2} + t^{1/2} → val 2.
        let a = PuiseuxSeries::from_terms(
            [(q(-2, 1), c(3.0, 0.0)), (q(1, 2), c(1.0, 0.0))],
            Truncation::Exact,
        );
        assert_eq!(a.val(), Some(q(2, 1)));
        assert_eq!(PuiseuxSeries::zero().val(), None);
        assert_eq!(PuiseuxSeries::one().val(), Some(q(0, 1)));
    }

    #[test]
    fn arithmetic_examples() {
        // (t^{−1}) · (2t^{3}) = 2t^{2}, val −2.
        let a = PuiseuxSeries::monomial(c(1.0, 0.0), q(-1, 1));
        let b = PuiseuxSeries::monomial(c(2.0, 0.0), q(3, 1));
        let p = a.mul(&b);
        assert_eq!(p.terms(), &[(q(2, 1), c(2.0, 0.0))]);
        assert_eq!(p.val(), Some(q(-2, 1)));

        // Exact cancellation.
        let one = PuiseuxSeries::one();
        assert!(one.sub(&one).is_zero());

        // val(t^{−1} + t^{−2}) = 2 ≤ max{1, 2}.
        let s = PuiseuxSeries::monomial(c(1.0, 0.0), q(-1, 1))
            .add(&PuiseuxSeries::monomial(c(1.0, 0.0), q(-2, 1)));
        assert_eq!(s.val(), Some(q(2, 1)));
    }

    #[test]
    fn valuation_axioms_on_random_series() {
        let mut rng = derive_rng(99, 0);
        for i in 0..50 {
            let a = random_coordinate(&mut rng);
            let b = random_coordinate(&mut rng);
            let va = a.val().unwrap();
            let vb = b.val().unwrap();
            assert_eq!(a.mul(&b).val().unwrap(), &va + &vb, "iteration {i}");
            let s = a.add(&b);
            if let Some(vs) = s.val() {
                assert!(vs <= va.clone().max(vb.clone()));
            }
            if va != vb {
                assert_eq!(s.val(), Some(va.max(vb)));
            }
        }
    }

    #[test]
    fn truncation_propagates() {
        // (1 + O(t^5)) + 1: order stays 5.
        let a = PuiseuxSeries::from_terms([(q(0, 1), c(1.0, 0.0))], Truncation::Order(q(5, 1)));
        let s = a.add(&PuiseuxSeries::one());
        assert_eq!(s.truncation(), &Truncation::Order(q(5, 1)));
        // t^{3}·(1 + O(t^5)): product known mod t^{8}.
        let m = a.mul(&PuiseuxSeries::monomial(c(1.0, 0.0), q(3, 1)));
        assert_eq!(m.truncation(), &Truncation::Order(q(8, 1)));
        // Terms at or above the bound are dropped.
        let t9 = PuiseuxSeries::monomial(c(1.0, 0.0), q(9, 1));
        assert!(m.add(&t9).terms().iter().all(|(e, _)| e < &q(8, 1)));
    }

    #[test]
    fn w_examples() {
        // (1+i)t^{−1} → e^{1 + iπ/4}.
        let a = PuiseuxSeries::monomial(c(1.0, 1.0), q(-1, 1));
        let w = a.w().unwrap();
        assert_abs_diff_eq!(w.norm(), 1f64.exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(w.arg(), std::f64::consts::FRAC_PI_4, epsilon = 1e-12);

        assert_abs_diff_eq!(PuiseuxSeries::one().w().unwrap().re, 1.0, epsilon = 1e-12);

        // −t^{2} → e^{−2 + iπ}.
        let b = PuiseuxSeries::monomial(c(-1.0, 0.0), q(2, 1));
        let w = b.w().unwrap();
        assert_abs_diff_eq!(w.norm(), (-2f64).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(w.arg(), std::f64::consts::PI, epsilon = 1e-12);

        assert!(matches!(PuiseuxSeries::zero().w(), Err(Error::WUndefinedAtZero)));

        // Multiplicativity when leading terms don't cancel.
        let p = a.mul(&b).w().unwrap();
        let (wa, wb) = (a.w().unwrap(), b.w().unwrap());
        assert_abs_diff_eq!(p.norm(), wa.norm() * wb.norm(), epsilon = 1e-12);
        let darg = (p.arg() - wa.arg() - wb.arg()).rem_euclid(std::f64::consts::TAU);
        assert!(darg < 1e-9 || (std::f64::consts::TAU - darg) < 1e-9);
    }

    #[test]
    fn inverse_by_geometric_series() {
        // 1/(1 + t) = 1 − t + t² − … to order 6.
        let a = PuiseuxSeries::one().add(&PuiseuxSeries::monomial(c(1.0, 0.0), q(1, 1)));
        let inv = a.inv_to(&q(6, 1)).unwrap();
        for (k, (e, coeff)) in inv.terms().iter().enumerate() {
            assert_eq!(e, &q(k as i64, 1));
            assert_abs_diff_eq!(coeff.re, if k % 2 == 0 { 1.0 } else { -1.0 }, epsilon = 1e-12);
        }
        // a·a⁻¹ = 1 to the computed order.
        let prod = a.mul(&inv);
        assert_eq!(prod.leading().unwrap().0, &q(0, 1));
        assert!(prod.terms()[1..].iter().all(|(_, c)| c.norm() < 1e-12));

        // Monomial inverse shifts the exponent exactly.
        let m = PuiseuxSeries::monomial(c(2.0, 0.0), q(-3, 2));
        let mi = m.inv_to(&q(10, 1)).unwrap();
        assert_eq!(mi.terms(), &[(q(3, 2), c(0.5, 0.0))]);
    }

    #[test]
    fn tropicalization_reads_valuations() {
        // λ + z + w + zw with λ = t^{−1} → max{x, y, x+y, +1}.
        let lam = PuiseuxSeries::monomial(c(1.0, 0.0), q(-1, 1));
        let one = PuiseuxSeries::one;
        let g = PuiseuxPolynomial::new([
            (lp(&[0, 0]), lam),
            (lp(&[1, 0]), one()),
            (lp(&[0, 1]), one()),
            (lp(&[1, 1]), one()),
        ])
        .unwrap();
        let f = g.tropicalize().unwrap();
        assert_eq!(f.coeff(&lp(&[0, 0])), Some(&q(1, 1)));
        assert_eq!(f.coeff(&lp(&[1, 1])), Some(&q(0, 1)));

        // w − z² + 2z − t^{−log λ} at log λ = 3 → max{y, 2x, x, 3}.
        let g = PuiseuxPolynomial::new([
            (lp(&[0, 1]), one()),
            (lp(&[2, 0]), PuiseuxSeries::constant(c(-1.0, 0.0))),
            (lp(&[1, 0]), PuiseuxSeries::constant(c(2.0, 0.0))),
            (lp(&[0, 0]), PuiseuxSeries::monomial(c(-1.0, 0.0), q(-3, 1))),
        ])
        .unwrap();
        let f = g.tropicalize().unwrap();
        assert_eq!(f.coeff(&lp(&[0, 0])), Some(&q(3, 1)));
        assert_eq!(f.coeff(&lp(&[0, 1])), Some(&q(0, 1)));
        assert_eq!(f.coeff(&lp(&[2, 0])), Some(&q(0, 1)));
    }

    #[test]
    fn linear_root_is_exact() {
        // z + t = 0 → z = −t.
        let g = PuiseuxPolynomial::new([
            (lp(&[1]), PuiseuxSeries::one()),
            (lp(&[0]), PuiseuxSeries::monomial(c(1.0, 0.0), q(1, 1))),
        ])
        .unwrap();
        let samples = sample_puiseux_solutions(&g, 1, 42, &q(8, 1)).unwrap();
        let point = samples[0].as_ref().unwrap();
        assert_eq!(point.len(), 1);
        let z = &point[0];
        assert_eq!(z.terms().len(), 1);
        assert_eq!(z.terms()[0].0, q(1, 1));
        assert_abs_diff_eq!(z.terms()[0].1.re, -1.0, epsilon = 1e-12);
        assert_eq!(z.val(), Some(q(-1, 1)));
    }

    #[test]
    fn plane_solution_with_fixed_coordinate() {
        // 1 + z + w with z = t^{−1}: w = −1 − t^{−1}, val(w) = 1, and the
        // valuation vector (1, 1) lies on the ray of max{0, x, y}.
        let g = PuiseuxPolynomial::new([
            (lp(&[0, 0]), PuiseuxSeries::one()),
            (lp(&[1, 0]), PuiseuxSeries::one()),
            (lp(&[0, 1]), PuiseuxSeries::one()),
        ])
        .unwrap();
        let z = PuiseuxSeries::monomial(c(1.0, 0.0), q(-1, 1));
        let w = solve_in_last_variable(&g, &[z.clone()], &q(8, 1), 7).unwrap();
        assert_eq!(w.val(), Some(q(1, 1)));
        assert_eq!(w.terms().len(), 2);
        assert_abs_diff_eq!(w.terms()[0].1.re, -1.0, epsilon = 1e-11);
        assert_abs_diff_eq!(w.terms()[1].1.re, -1.0, epsilon = 1e-11);

        let trop = g.tropicalize().unwrap();
        let (_, argmax) = trop.eval_exact(&[z.val().unwrap(), w.val().unwrap()]);
        assert!(argmax.len() >= 2);
    }

    #[test]
    fn hyperbola_slice_lands_on_corner_locus() {
        // λ + z + w + zw with λ = t^{−1}, z fixed at 2: w = −(2 + t^{−1})/3,
        // val(w) = 1, and (0, 1) is on the corner locus of max{x,y,x+y,+1}.
        let g = PuiseuxPolynomial::new([
            (lp(&[0, 0]), PuiseuxSeries::monomial(c(1.0, 0.0), q(-1, 1))),
            (lp(&[1, 0]), PuiseuxSeries::one()),
            (lp(&[0, 1]), PuiseuxSeries::one()),
            (lp(&[1, 1]), PuiseuxSeries::one()),
        ])
        .unwrap();
        let z = PuiseuxSeries::constant(c(2.0, 0.0));
        let w = solve_in_last_variable(&g, &[z.clone()], &q(8, 1), 3).unwrap();
        assert_eq!(w.val(), Some(q(1, 1)));
        let trop = g.tropicalize().unwrap();
        let (_, argmax) = trop.eval_exact(&[q(0, 1), w.val().unwrap()]);
        assert!(argmax.len() >= 2, "valuation vector must land on the corner locus");
    }

    #[test]
    fn quadratic_branches() {
        // w² − z: fixing z = t² gives w = ±t; both branches appear across
        // seeds and refine exactly.
        let g = PuiseuxPolynomial::new([
            (lp(&[0, 2]), PuiseuxSeries::one()),
            (lp(&[1, 0]), PuiseuxSeries::constant(c(-1.0, 0.0))),
        ])
        .unwrap();
        let z = PuiseuxSeries::monomial(c(1.0, 0.0), q(2, 1));
        let mut seen = std::collections::BTreeSet::new();
        for seed in 0..8u64 {
            let w = solve_in_last_variable(&g, &[z.clone()], &q(8, 1), seed).unwrap();
            assert_eq!(w.terms().len(), 1);
            assert_eq!(w.terms()[0].0, q(1, 1));
            seen.insert(w.terms()[0].1.re.signum() as i64);
        }
        assert_eq!(seen.len(), 2, "both square-root branches should be sampled");
    }

    #[test]
    fn kapranov_property_on_random_samples() {
        // Random solutions of the hyperbola family land exactly on the
        // corner locus of the tropicalization.
        let g = PuiseuxPolynomial::new([
            (lp(&[0, 0]), PuiseuxSeries::monomial(c(1.0, 0.0), q(-1, 1))),
            (lp(&[1, 0]), PuiseuxSeries::one()),
            (lp(&[0, 1]), PuiseuxSeries::one()),
            (lp(&[1, 1]), PuiseuxSeries::one()),
        ])
        .unwrap();
        let trop = g.tropicalize().unwrap();
        let samples = sample_puiseux_solutions(&g, 25, 11, &q(6, 1)).unwrap();
        let mut ok = 0;
        for s in &samples {
            let Ok(point) = s else { continue };
            let vals: Vec<Q> = point.iter().map(|z| z.val().unwrap()).collect();
            let (_, argmax) = trop.eval_exact(&vals);
            assert!(argmax.len() >= 2, "sampled valuation vector off the corner locus");
            ok += 1;
        }
        assert!(ok >= 20, "expected mostly-generic samples, got {ok}/25");
    }

    #[test]
    fn geometric_coefficient_growth_does_not_break_refinement() {
        // A branch whose expansion has a small convergence radius: the
        // working series legitimately reach coefficients of 1e9 and beyond.
        // A noise cutoff relative to the global maximum used to delete the
        // O(1) leading term of the iterate and misreport the instance as
        // non-generic (or silently hop to a different branch); the graded
        // cutoff must keep every sample on its own branch.
        let g = PuiseuxPolynomial::new([
            (
                lp(&[0]),
                PuiseuxSeries::from_terms(
                    [
                        (q(1, 1), c(0.7138876923157849, -1.2655784711030975)),
                        (q(2, 1), c(-1.2289259898127864, 0.7653877904933858)),
                    ],
                    Truncation::Exact,
                ),
            ),
            (
                lp(&[1]),
                PuiseuxSeries::from_terms(
                    [
                        (q(0, 1), c(1.3846727295798562, -0.64700137554304)),
                        (q(2, 1), c(1.411002921584723, -0.31393114826914914)),
                    ],
                    Truncation::Exact,
                ),
            ),
            (
                lp(&[2]),
                PuiseuxSeries::from_terms(
                    [(q(-2, 3), c(-0.7748496997344329, 1.3860200863513503))],
                    Truncation::Exact,
                ),
            ),
            (
                lp(&[3]),
                PuiseuxSeries::from_terms(
                    [(q(0, 1), c(0.5704265952172817, -0.5302013775326146))],
                    Truncation::Exact,
                ),
            ),
        ])
        .unwrap();
        // Branch valuations from the Newton polygon of the support:
        // lower-hull edges give leading exponents 1, 2/3 and -2/3.
        let expected: Vec<Q> = vec![q(-1, 1), q(-2, 3), q(2, 3)];
        let samples = sample_puiseux_solutions(&g, 5, 9003, &q(6, 1)).unwrap();
        for sample in &samples {
            let root = sample.as_ref().expect("generic instance must refine");
            let v = root[0].val().unwrap();
            assert!(expected.contains(&v), "unexpected branch valuation {v}");
        }
    }

    #[test]
    fn monomial_last_variable_is_rejected() {
        let g = PuiseuxPolynomial::new([
            (lp(&[1, 1]), PuiseuxSeries::one()),
            (lp(&[0, 1]), PuiseuxSeries::one()),
        ])
        .unwrap();
        assert!(sample_puiseux_solutions(&g, 1, 0, &q(4, 1)).is_err());
    }
}
