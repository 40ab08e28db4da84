//! Max-plus tropical polynomials and their corner loci.
//!
//! A tropical polynomial is `g(x) = max_α { c_α + <α, x> }` over a finite
//! support of lattice exponents. Its *corner locus* — the set where the max
//! is achieved at least twice — is a weighted polyhedral complex Γ, dual to
//! the regular subdivision of the support induced by the lifting
//! `ν(α) = −c_α`: each k-cell of Γ corresponds to an (n−k)-dimensional face
//! of that subdivision (the cell's *active terms* are the face's marked
//! points), and each (n−1)-cell carries the lattice length of its dual edge
//! as weight. All of this is computed exactly from rational coefficients;
//! floating input must be snapped first (see [`TropicalPolynomial::from_float_coeffs`]).

use crate::error::{Error, Result};
use crate::exact::{self, Q, Z};
use crate::hull;
use crate::lattice::{self, LatticePoint, Lifting, RegularSubdivision};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Absolute tolerance for argmax ties when evaluating on floating input.
pub const EVAL_TIE_TOLERANCE: f64 = 1e-9;

/// A max-plus polynomial: finitely many terms `c_α + <α, x>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalPolynomial {
    terms: BTreeMap<LatticePoint, Q>,
}

impl TropicalPolynomial {
    /// Build from (exponent, coefficient) pairs. At least one term is
    /// required and all exponents must share one ambient dimension.
    /// Duplicate exponents keep the last coefficient given.
    pub fn new(terms: impl IntoIterator<Item = (LatticePoint, Q)>) -> Result<TropicalPolynomial> {
        let terms: BTreeMap<LatticePoint, Q> = terms.into_iter().collect();
        let Some(first) = terms.keys().next() else {
            return Err(Error::EmptySupport);
        };
        let n = first.dim();
        if terms.keys().any(|p| p.dim() != n) {
            return Err(Error::invalid("mixed exponent dimensions"));
        }
        Ok(TropicalPolynomial { terms })
    }

    /// Build from floating coefficients by snapping each to the nearest
    /// rational with denominator at most `max_denominator`. Returns the
    /// polynomial and the largest absolute snap error, so callers can
    /// report how much the exact object deviates from the float input.
    pub fn from_float_coeffs(
        pairs: &[(LatticePoint, f64)],
        max_denominator: u64,
    ) -> Result<(TropicalPolynomial, f64)> {
        let mut terms = BTreeMap::new();
        let mut worst: f64 = 0.0;
        for (p, c) in pairs {
            if !c.is_finite() {
                return Err(Error::invalid("non-finite coefficient"));
            }
            let (r, err) = exact::approx_rational(*c, max_denominator);
            worst = worst.max(err);
            if terms.insert(p.clone(), r).is_some() {
                return Err(Error::invalid(format!("duplicate exponent {p:?}")));
            }
        }
        Ok((TropicalPolynomial::new(terms)?, worst))
    }

    pub fn ambient_dim(&self) -> usize {
        self.terms.keys().next().expect("nonempty").dim()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn support(&self) -> Vec<LatticePoint> {
        self.terms.keys().cloned().collect()
    }

    pub fn coeff(&self, exponent: &LatticePoint) -> Option<&Q> {
        self.terms.get(exponent)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticePoint, &Q)> {
        self.terms.iter()
    }

    /// Evaluate at a floating point: the max value and the set of exponents
    /// achieving it within [`EVAL_TIE_TOLERANCE`] (absolute).
    pub fn eval(&self, x: &[f64]) -> (f64, Vec<LatticePoint>) {
        assert_eq!(x.len(), self.ambient_dim(), "point dimension mismatch");
        let vals: Vec<(f64, &LatticePoint)> = self
            .terms
            .iter()
            .map(|(p, c)| {
                let lin: f64 = p.0.iter().zip(x).map(|(&a, xi)| a as f64 * xi).sum();
                (exact::f64_of_rational(c) + lin, p)
            })
            .collect();
        let best = vals.iter().map(|(v, _)| *v).fold(f64::NEG_INFINITY, f64::max);
        let argmax = vals
            .iter()
            .filter(|(v, _)| best - v <= EVAL_TIE_TOLERANCE)
            .map(|(_, p)| (*p).clone())
            .collect();
        (best, argmax)
    }

    /// Evaluate at a rational point, exactly: ties are equalities.
    pub fn eval_exact(&self, x: &[Q]) -> (Q, Vec<LatticePoint>) {
        assert_eq!(x.len(), self.ambient_dim(), "point dimension mismatch");
        let mut best: Option<Q> = None;
        let mut argmax: Vec<LatticePoint> = Vec::new();
        for (p, c) in &self.terms {
            let v = c + exact::dot_zq(&p.0.iter().map(|&a| Z::from(a)).collect::<Vec<_>>(), x);
            match &best {
                Some(b) if &v < b => {}
                Some(b) if &v == b => argmax.push(p.clone()),
                _ => {
                    best = Some(v);
                    argmax = vec![p.clone()];
                }
            }
        }
        (best.expect("nonempty"), argmax)
    }

    /// The regular subdivision of the support induced by `ν(α) = −c_α`
    /// (lower-hull convention: duals of its faces tile the corner locus).
    pub fn dual_subdivision(&self) -> Result<RegularSubdivision> {
        let lifting = Lifting::from_pairs(self.terms.iter().map(|(p, c)| (p.clone(), -c)));
        lattice::regular_subdivision(&self.support(), &lifting)
    }
}

/// A face of the dual subdivision, recorded by its marked points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualFace {
    pub marked: Vec<LatticePoint>,
    pub dim: usize,
}

/// One cell of a tropical hypersurface, in exact V-description, together
/// with its affine hull and duality data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalCell {
    pub dim: usize,
    /// A point of the affine hull (the first vertex).
    pub affine_point: Vec<Q>,
    /// Saturated integer basis of the affine hull's direction space.
    pub affine_basis: Vec<Vec<Z>>,
    pub vertices: Vec<Vec<Q>>,
    /// Primitive integer generators of unbounded directions.
    pub rays: Vec<Vec<Z>>,
    /// Primitive integer basis of the lineality space, when the cell
    /// contains whole lines.
    pub lines: Vec<Vec<Z>>,
    /// The argmax set on the cell's relative interior, sorted.
    pub active_terms: Vec<LatticePoint>,
    /// Lattice length of the dual edge when `dim == n−1`; 1 otherwise.
    pub weight: i64,
    /// Index of the dual face in [`TropicalHypersurface::dual_faces`].
    pub dual_face: usize,
}

/// The corner locus of a tropical polynomial as a weighted polyhedral
/// complex with full duality bookkeeping.
#[derive(Debug, Clone)]
pub struct TropicalHypersurface {
    pub source: TropicalPolynomial,
    pub ambient_dim: usize,
    pub dual: RegularSubdivision,
    pub dual_faces: Vec<DualFace>,
    pub cells: Vec<TropicalCell>,
}

fn zdiff(a: &LatticePoint, b: &LatticePoint) -> Vec<Z> {
    a.0.iter().zip(&b.0).map(|(&x, &y)| Z::from(x) - Z::from(y)).collect()
}

fn qdiff(a: &LatticePoint, b: &LatticePoint) -> Vec<Q> {
    zdiff(a, b).into_iter().map(Q::from_integer).collect()
}

/// Extract the corner locus. Requires at least two distinct exponents;
/// a single-term polynomial has none.
pub fn corner_locus(f: &TropicalPolynomial) -> Result<TropicalHypersurface> {
    let n = f.ambient_dim();
    if f.num_terms() < 2 {
        return Err(Error::NoCornerLocus);
    }
    let dual = f.dual_subdivision()?;
    // Every face (of dimension >= 1) of every cell of the dual subdivision,
    // keyed by its marked points. Distinct cells share faces; dedupe.
    let mut registry: BTreeMap<Vec<LatticePoint>, usize> = BTreeMap::new();
    for cell in &dual.cells {
        let pts: Vec<Vec<Q>> = cell.marked.iter().map(|p| p.to_rational()).collect();
        for face in hull::faces(&pts) {
            let marked: Vec<LatticePoint> = face.iter().map(|&i| cell.marked[i].clone()).collect();
            let fpts: Vec<Vec<Q>> = marked.iter().map(|p| p.to_rational()).collect();
            let k = hull::affine_dim(&fpts);
            if k >= 1 {
                registry.insert(marked, k);
            }
        }
    }
    let mut faces: Vec<(Vec<LatticePoint>, usize)> = registry.into_iter().collect();
    // Cells sorted by dimension (vertices first), then by active terms.
    faces.sort_by(|a, b| (n - a.1, &a.0).cmp(&(n - b.1, &b.0)));

    let mut dual_faces = Vec::new();
    let mut cells = Vec::new();
    for (marked, k) in faces {
        let cell = build_cell(f, &marked, k, n, dual_faces.len())?;
        dual_faces.push(DualFace { marked, dim: k });
        cells.push(cell);
    }
    if cells.is_empty() {
        return Err(Error::NoCornerLocus);
    }
    Ok(TropicalHypersurface { source: f.clone(), ambient_dim: n, dual, dual_faces, cells })
}

fn build_cell(
    f: &TropicalPolynomial,
    marked: &[LatticePoint],
    face_dim: usize,
    n: usize,
    dual_face: usize,
) -> Result<TropicalCell> {
    let a0 = &marked[0];
    let c0 = f.coeff(a0).expect("marked point in support");
    // Equalities: the active terms tie. <α−α₀, x> = c₀ − c_α.
    let eqs: Vec<(Vec<Q>, Q)> = marked[1..]
        .iter()
        .map(|a| (qdiff(a, a0), c0 - f.coeff(a).expect("marked point in support")))
        .collect();
    // Inequalities: every other term stays below. <β−α₀, x> <= c₀ − c_β.
    let ineqs: Vec<(Vec<Q>, Q)> = f
        .terms()
        .filter(|(b, _)| marked.binary_search(b).is_err())
        .map(|(b, cb)| (qdiff(b, a0), c0 - cb))
        .collect();
    let v = hull::vrep(n, &eqs, &ineqs);
    debug_assert!(!v.is_empty(), "dual cell of a subdivision face is nonempty");
    if v.is_empty() {
        return Err(Error::DegenerateCell);
    }
    let eq_rows: Vec<Vec<Z>> = marked[1..].iter().map(|a| zdiff(a, a0)).collect();
    let affine_basis = exact::integer_kernel(&eq_rows, n);
    let dim = affine_basis.len();
    debug_assert_eq!(dim, n - face_dim, "duality dimension identity");
    let weight = if face_dim == 1 {
        let poly = lattice::Polytope::from_points(marked)?;
        let d = zdiff(&poly.vertices[1], &poly.vertices[0]);
        let mut g = Z::zero();
        for c in &d {
            g = g.gcd(c);
        }
        g.to_i64().expect("lattice length fits i64")
    } else {
        1
    };
    Ok(TropicalCell {
        dim,
        affine_point: v.vertices[0].clone(),
        affine_basis,
        vertices: v.vertices,
        rays: v.rays,
        lines: v.lines,
        active_terms: marked.to_vec(),
        weight,
        dual_face,
    })
}

impl TropicalHypersurface {
    pub fn cells_of_dim(&self, d: usize) -> impl Iterator<Item = &TropicalCell> {
        self.cells.iter().filter(move |c| c.dim == d)
    }

    /// The 0-cells of the complex, as points.
    pub fn vertex_points(&self) -> Vec<Vec<Q>> {
        self.cells_of_dim(0).map(|c| c.vertices[0].clone()).collect()
    }

    /// Exact membership in the corner locus: at least two terms tie.
    pub fn contains_exact(&self, x: &[Q]) -> bool {
        self.source.eval_exact(x).1.len() >= 2
    }

    /// Exact membership in one specific (closed) cell: every active term of
    /// the cell achieves the max at `x`.
    pub fn cell_contains(&self, cell: &TropicalCell, x: &[Q]) -> bool {
        let (val, _) = self.source.eval_exact(x);
        cell.active_terms.iter().all(|a| {
            let za: Vec<Z> = a.0.iter().map(|&c| Z::from(c)).collect();
            self.source.coeff(a).expect("active term in support") + exact::dot_zq(&za, x) == val
        })
    }

    /// Smoothness: the dual subdivision is a unimodular triangulation.
    pub fn is_smooth(&self) -> bool {
        lattice::is_smooth_subdivision(&self.dual)
    }

    /// The balancing condition: around every (n−2)-cell, the weighted sum
    /// of primitive normal vectors of the adjacent (n−1)-cells (oriented
    /// away from the (n−2)-cell) lies in the direction space of the
    /// (n−2)-cell. Reads weights from the stored cells, so tampering with
    /// a weight is detected.
    pub fn balancing_check(&self) -> bool {
        let n = self.ambient_dim;
        let by_active: BTreeMap<&[LatticePoint], usize> = self
            .cells
            .iter()
            .enumerate()
            .map(|(i, c)| (c.active_terms.as_slice(), i))
            .collect();
        for face in &self.dual_faces {
            // (n−2)-cells of Γ are dual to the 2-faces of the subdivision.
            if face.dim != 2 {
                continue;
            }
            let lc_rows: Vec<Vec<Z>> = face.marked[1..]
                .iter()
                .map(|a| zdiff(a, &face.marked[0]))
                .collect();
            let lc_basis = exact::integer_kernel(&lc_rows, n);
            let pts: Vec<Vec<Q>> = face.marked.iter().map(|p| p.to_rational()).collect();
            let mut sum = vec![Z::zero(); n];
            for e in hull::faces(&pts) {
                let edge_marked: Vec<LatticePoint> =
                    e.iter().map(|&i| face.marked[i].clone()).collect();
                let ep: Vec<Vec<Q>> = edge_marked.iter().map(|p| p.to_rational()).collect();
                if hull::affine_dim(&ep) != 1 {
                    continue;
                }
                let Some(&ci) = by_active.get(edge_marked.as_slice()) else {
                    return false;
                };
                let w = Z::from(self.cells[ci].weight);
                let Some(u) = quotient_normal(&face.marked, &edge_marked, n) else {
                    return false;
                };
                for (s, uc) in sum.iter_mut().zip(&u) {
                    *s += &w * uc;
                }
            }
            // The weighted sum must lie in the span of the (n−2)-cell's
            // direction space.
            let mut rows: Vec<Vec<Q>> = lc_basis
                .iter()
                .map(|r| r.iter().map(|c| Q::from_integer(c.clone())).collect())
                .collect();
            let base_rank = exact::rank(&rows);
            rows.push(sum.iter().map(|c| Q::from_integer(c.clone())).collect());
            if exact::rank(&rows) != base_rank {
                return false;
            }
        }
        true
    }
}

/// Primitive generator of `L_σ / L_C` for the (n−1)-cell σ dual to `edge`
/// inside the 2-face `face`, lifted to an integer vector of `L_σ` and
/// oriented to point from the dual of `face` into σ.
fn quotient_normal(face: &[LatticePoint], edge: &[LatticePoint], n: usize) -> Option<Vec<Z>> {
    let e0 = &edge[0];
    let ls_rows: Vec<Vec<Z>> = edge[1..].iter().map(|a| zdiff(a, e0)).collect();
    let ls_basis = exact::integer_kernel(&ls_rows, n);
    // A functional cutting L_C out of L_σ: any marked point of the face
    // not on the edge gives one (value <β−α₀, ·>, zero on L_C). Moving
    // from the dual of the face into σ strictly decreases the affine form
    // c_β + <β, x> relative to the active terms, so the generator is the
    // one with negative functional value.
    let beta = face.iter().find(|b| edge.binary_search(b).is_err())?;
    let phi = zdiff(beta, e0);
    let vals: Vec<Z> = ls_basis.iter().map(|b| exact::dot_z(&phi, b)).collect();
    // Extended-gcd combination reaching the minimal positive value of φ on
    // the saturated lattice basis.
    let mut g = Z::zero();
    let mut coeffs: Vec<Z> = Vec::new();
    for v in &vals {
        let ext = g.extended_gcd(v);
        for c in coeffs.iter_mut() {
            *c *= &ext.x;
        }
        coeffs.push(ext.y.clone());
        g = ext.gcd;
    }
    if g.is_zero() {
        return None;
    }
    let mut u = vec![Z::zero(); n];
    for (l, b) in coeffs.iter().zip(&ls_basis) {
        for (uc, bc) in u.iter_mut().zip(b) {
            *uc += l * bc;
        }
    }
    if exact::dot_z(&phi, &u).is_positive() {
        for uc in u.iter_mut() {
            *uc = -uc.clone();
        }
    }
    Some(u)
}
