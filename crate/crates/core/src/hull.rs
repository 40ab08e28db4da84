//! Exact convex hulls of small point sets in low dimension.
//!
//! The polytopes that show up downstream — Newton polytopes, cells of a
//! regular subdivision, lifted point sets one dimension up — have at most
//! a few dozen points in ambient dimension at most five. At that scale a
//! brute-force facet scan over point subsets is both simple and robust:
//! every candidate hyperplane is spanned by input points, every side test
//! is an exact rational comparison, and there are no epsilons anywhere.
//!
//! The module works directly with full-dimensional point sets and reduces
//! lower-dimensional ones to intrinsic coordinates of their affine hull,
//! so callers never need to special-case degenerate configurations.

use crate::exact::{self, Q, Z};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// A facet of a full-dimensional polytope: `<normal, x> <= offset` holds on
/// the polytope with equality exactly on the facet. The normal is a
/// primitive integer vector pointing outward. `points` lists *all* input
/// point indices lying on the facet, not only its vertices.
#[derive(Debug, Clone)]
pub struct Facet {
    pub normal: Vec<Z>,
    pub offset: Q,
    pub points: Vec<usize>,
}

/// Dimension of the affine span of a nonempty point set.
pub fn affine_dim(points: &[Vec<Q>]) -> usize {
    exact::rank(&difference_rows(points))
}

fn difference_rows(points: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let p0 = &points[0];
    points[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect()
}

/// Rational affine coordinates: an origin plus a row basis of the span of
/// the differences, with exact to-local conversion. Only points inside the
/// affine hull may be converted.
pub struct AffineFrame {
    pub origin: Vec<Q>,
    pub basis: Vec<Vec<Q>>,
}

impl AffineFrame {
    /// Frame through `points` spanned by a maximal independent subset of
    /// their differences.
    pub fn new(points: &[Vec<Q>]) -> AffineFrame {
        let origin = points[0].clone();
        let mut basis: Vec<Vec<Q>> = Vec::new();
        for p in &points[1..] {
            let d: Vec<Q> = p.iter().zip(&origin).map(|(a, b)| a - b).collect();
            if d.iter().all(|x| x.is_zero()) {
                continue;
            }
            basis.push(d);
            if exact::rank(&basis) < basis.len() {
                basis.pop();
            }
        }
        AffineFrame { origin, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `p` in the frame; `None` if `p` is outside the
    /// affine hull.
    pub fn to_local(&self, p: &[Q]) -> Option<Vec<Q>> {
        let ambient = self.origin.len();
        let rhs: Vec<Q> = p.iter().zip(&self.origin).map(|(a, b)| a - b).collect();
        // Columns of the system are the basis vectors.
        let rows: Vec<Vec<Q>> = (0..ambient)
            .map(|j| self.basis.iter().map(|b| b[j].clone()).collect())
            .collect();
        let coeffs = exact::solve(&rows, &rhs)?;
        // `solve` returns a least-constrained solution; verify it really
        // reproduces p (it fails only when p is off the hull).
        for j in 0..ambient {
            let mut acc = self.origin[j].clone();
            for (c, b) in coeffs.iter().zip(&self.basis) {
                acc += c * &b[j];
            }
            if &acc != &p[j] {
                return None;
            }
        }
        Some(coeffs)
    }

    pub fn from_local(&self, local: &[Q]) -> Vec<Q> {
        let mut p = self.origin.clone();
        for (c, b) in local.iter().zip(&self.basis) {
            for j in 0..p.len() {
                p[j] += c * &b[j];
            }
        }
        p
    }
}

fn for_each_subset(m: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        let need = k - cur.len();
        for i in start..=m.saturating_sub(need) {
            cur.push(i);
            rec(i + 1, m, k, cur, f);
            cur.pop();
        }
    }
    if k <= m {
        rec(0, m, k, &mut Vec::new(), f);
    }
}

/// All facets of `conv(points)` for a full-dimensional point set in `R^d`.
///
/// Scans every d-subset, forms the hyperplane it spans (when the span is a
/// hyperplane), keeps the one-sided ones, and dedupes. Panics if the points
/// do not span `R^d` affinely.
pub fn facets_full_dim(points: &[Vec<Q>]) -> Vec<Facet> {
    let d = points[0].len();
    assert!(
        affine_dim(points) == d,
        "facets_full_dim needs a full-dimensional point set"
    );
    let mut seen: BTreeMap<(Vec<Z>, Q), Vec<usize>> = BTreeMap::new();
    for_each_subset(points.len(), d, &mut |idxs| {
        let base = &points[idxs[0]];
        let rows: Vec<Vec<Q>> = idxs[1..]
            .iter()
            .map(|&i| points[i].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        if exact::rank(&rows) != d - 1 {
            return;
        }
        let int_rows: Vec<Vec<Z>> = rows.iter().map(|r| integer_row(r)).collect();
        let kern = exact::integer_kernel(&int_rows, d);
        debug_assert_eq!(kern.len(), 1);
        let mut normal = exact::primitive(&kern[0]);
        let mut offset = exact::dot_zq(&normal, base);
        let mut above = false;
        let mut below = false;
        for p in points {
            let v = exact::dot_zq(&normal, p);
            if v > offset {
                above = true;
            } else if v < offset {
                below = true;
            }
            if above && below {
                return;
            }
        }
        if above {
            // Flip so the polytope sits on the <= side.
            for x in &mut normal {
                *x = -x.clone();
            }
            offset = -offset;
        }
        let key = (normal, offset);
        if !seen.contains_key(&key) {
            let on: Vec<usize> = points
                .iter()
                .enumerate()
                .filter(|(_, p)| exact::dot_zq(&key.0, p) == key.1)
                .map(|(i, _)| i)
                .collect();
            seen.insert(key, on);
        }
    });
    seen.into_iter()
        .map(|((normal, offset), points)| Facet { normal, offset, points })
        .collect()
}

fn integer_row(r: &[Q]) -> Vec<Z> {
    use num_integer::Integer;
    use num_traits::One;
    let mut lcm = Z::one();
    for x in r {
        lcm = lcm.lcm(x.denom());
    }
    r.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

/// Indices of the extreme points of `conv(points)` (any affine dimension;
/// duplicate points are reported once, at their first index).
pub fn extreme_points(points: &[Vec<Q>]) -> Vec<usize> {
    // Dedupe, keeping first occurrences.
    let mut first: BTreeMap<Vec<Q>, usize> = BTreeMap::new();
    for (i, p) in points.iter().enumerate() {
        first.entry(p.clone()).or_insert(i);
    }
    let uniq: Vec<(Vec<Q>, usize)> = first.into_iter().collect();
    let pts: Vec<Vec<Q>> = uniq.iter().map(|(p, _)| p.clone()).collect();
    if pts.len() == 1 {
        return vec![uniq[0].1];
    }
    let d = pts[0].len();
    let k = affine_dim(&pts);
    let local: Vec<Vec<Q>>;
    let work: &[Vec<Q>] = if k == d {
        &pts
    } else if k == 0 {
        return vec![uniq[0].1];
    } else {
        let frame = AffineFrame::new(&pts);
        local = pts
            .iter()
            .map(|p| frame.to_local(p).expect("point in own affine hull"))
            .collect();
        &local
    };
    let facets = facets_full_dim(work);
    let kdim = work[0].len();
    let mut out = Vec::new();
    for (i, _) in work.iter().enumerate() {
        let normals: Vec<Vec<Q>> = facets
            .iter()
            .filter(|f| f.points.contains(&i))
            .map(|f| f.normal.iter().map(|z| Q::from_integer(z.clone())).collect())
            .collect();
        if exact::rank(&normals) == kdim {
            out.push(uniq[i].1);
        }
    }
    out.sort_unstable();
    out
}

/// All faces of `conv(points)` of every dimension (including the polytope
/// itself and its vertices), each given as the sorted set of *input point
/// indices* lying on the face.
pub fn faces(points: &[Vec<Q>]) -> Vec<Vec<usize>> {
    let mut acc: BTreeSet<Vec<usize>> = BTreeSet::new();
    let all: Vec<usize> = (0..points.len()).collect();
    faces_rec(points, &all, &mut acc);
    acc.into_iter().collect()
}

fn faces_rec(points: &[Vec<Q>], subset: &[usize], acc: &mut BTreeSet<Vec<usize>>) {
    if !acc.insert(subset.to_vec()) {
        return;
    }
    let pts: Vec<Vec<Q>> = subset.iter().map(|&i| points[i].clone()).collect();
    // Dedupe coordinates for dimension work but keep index bookkeeping.
    let k = affine_dim(&pts);
    if k == 0 {
        return;
    }
    let d = pts[0].len();
    let local: Vec<Vec<Q>>;
    let work: &[Vec<Q>] = if k == d {
        &pts
    } else {
        let frame = AffineFrame::new(&pts);
        local = pts
            .iter()
            .map(|p| frame.to_local(p).expect("point in own affine hull"))
            .collect();
        &local
    };
    for facet in facets_full_dim(work) {
        let sub: Vec<usize> = facet.points.iter().map(|&i| subset[i]).collect();
        faces_rec(points, &sub, acc);
    }
}

/// Triangulation of `conv(points)` into simplices of its own dimension,
/// returned as lists of point indices (each of length `affine_dim + 1`).
/// Uses a cone construction from the lexicographically smallest vertex.
pub fn triangulate(points: &[Vec<Q>]) -> Vec<Vec<usize>> {
    let pts = points;
    let k = affine_dim(pts);
    if k == 0 {
        return vec![vec![0]];
    }
    let d = pts[0].len();
    let local_store: Vec<Vec<Q>>;
    let work: &[Vec<Q>] = if k == d {
        pts
    } else {
        let frame = AffineFrame::new(pts);
        local_store = pts
            .iter()
            .map(|p| frame.to_local(p).expect("point in own affine hull"))
            .collect();
        &local_store
    };
    let ext = extreme_points(work);
    let apex = *ext
        .iter()
        .min_by(|&&a, &&b| work[a].cmp(&work[b]))
        .expect("nonempty");
    let mut out = Vec::new();
    if ext.len() == k + 1 {
        return vec![ext];
    }
    for facet in facets_full_dim(work) {
        if facet.points.contains(&apex) {
            continue;
        }
        let fpts: Vec<Vec<Q>> = facet.points.iter().map(|&i| work[i].clone()).collect();
        for simplex in triangulate(&fpts) {
            let mut s: Vec<usize> = simplex.iter().map(|&i| facet.points[i]).collect();
            s.push(apex);
            s.sort_unstable();
            out.push(s);
        }
    }
    out
}

/// Exact Euclidean volume of a full-dimensional `conv(points)` in `R^d`.
pub fn volume(points: &[Vec<Q>]) -> Q {
    let d = points[0].len();
    assert!(affine_dim(points) == d, "volume needs a full-dimensional set");
    let mut total = Q::zero();
    for simplex in triangulate(points) {
        let base = &points[simplex[0]];
        let rows: Vec<Vec<Q>> = simplex[1..]
            .iter()
            .map(|&i| points[i].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        total += det_q(&rows).abs();
    }
    let mut fact = Q::from_integer(Z::from(1));
    for i in 1..=d {
        fact *= Q::from_integer(Z::from(i as i64));
    }
    total / fact
}

/// V-representation of a polyhedron: `conv(vertices) + cone(rays) +
/// span(lines)`. Ray and line generators are primitive integer vectors.
/// The polyhedron is empty iff `vertices` is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VRep {
    pub vertices: Vec<Vec<Q>>,
    pub rays: Vec<Vec<Z>>,
    pub lines: Vec<Vec<Z>>,
}

impl VRep {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn empty() -> VRep {
        VRep { vertices: Vec::new(), rays: Vec::new(), lines: Vec::new() }
    }
}

/// Convert the H-description `{x : <a,x> = b for (a,b) ∈ eqs, <a,x> <= b
/// for (a,b) ∈ ineqs}` in `Q^n` to a V-representation, exactly.
///
/// Strategy: solve the equalities (particular solution plus a saturated
/// integer basis of their kernel), pull the inequalities back to kernel
/// coordinates, split off the lineality space, and enumerate the vertices
/// and extreme rays of the remaining pointed polyhedron by brute force
/// over subsets of tight inequalities. Intended for the small systems this
/// crate produces (a handful of variables, tens of constraints).
pub fn vrep(n: usize, eqs: &[(Vec<Q>, Q)], ineqs: &[(Vec<Q>, Q)]) -> VRep {
    // Particular solution of the equalities.
    let x0: Vec<Q> = if eqs.is_empty() {
        vec![Q::zero(); n]
    } else {
        let rows: Vec<Vec<Q>> = eqs.iter().map(|(a, _)| a.clone()).collect();
        let rhs: Vec<Q> = eqs.iter().map(|(_, b)| b.clone()).collect();
        match exact::solve(&rows, &rhs) {
            Some(x) => x,
            None => return VRep::empty(),
        }
    };
    // Saturated integer basis of the direction space of the equalities.
    let k_basis: Vec<Vec<Z>> = {
        let int_rows: Vec<Vec<Z>> = eqs.iter().map(|(a, _)| integer_row(a)).collect();
        exact::integer_kernel(&int_rows, n)
    };
    let p = k_basis.len();
    let feasible = |x: &[Q]| ineqs.iter().all(|(a, b)| &exact::dot_q(a, x) <= b);
    if p == 0 {
        return if feasible(&x0) {
            VRep { vertices: vec![x0], rays: Vec::new(), lines: Vec::new() }
        } else {
            VRep::empty()
        };
    }
    // Inequalities pulled back to kernel coordinates u (x = x0 + Σ u_j k_j).
    let a_u: Vec<Vec<Q>> = ineqs
        .iter()
        .map(|(a, _)| k_basis.iter().map(|kv| exact::dot_zq(kv, a)).collect())
        .collect();
    let b_u: Vec<Q> = ineqs.iter().map(|(a, b)| b - exact::dot_q(a, &x0)).collect();
    // Lineality: kernel directions shared by every inequality.
    let lin_u: Vec<Vec<Z>> = {
        let int_rows: Vec<Vec<Z>> = a_u.iter().map(|r| integer_row(r)).collect();
        exact::integer_kernel(&int_rows, p)
    };
    let push_u = |u: &[Q]| -> Vec<Q> {
        (0..n)
            .map(|c| {
                let mut acc = Q::zero();
                for (uj, kv) in u.iter().zip(&k_basis) {
                    acc += uj * Q::from_integer(kv[c].clone());
                }
                acc
            })
            .collect()
    };
    let lines: Vec<Vec<Z>> = lin_u
        .iter()
        .map(|l| {
            let lx: Vec<Q> = l.iter().map(|c| Q::from_integer(c.clone())).collect();
            exact::primitive_of_rational(&push_u(&lx))
        })
        .collect();
    // Complement of the lineality inside u-space: standard coordinates that
    // extend lin_u to a basis.
    let mut span: Vec<Vec<Q>> = lin_u
        .iter()
        .map(|l| l.iter().map(|c| Q::from_integer(c.clone())).collect())
        .collect();
    let mut chosen: Vec<usize> = Vec::new();
    for j in 0..p {
        let mut e = vec![Q::zero(); p];
        e[j] = Q::one();
        span.push(e);
        if exact::rank(&span) == span.len() {
            chosen.push(j);
        } else {
            span.pop();
        }
    }
    let r = chosen.len();
    debug_assert_eq!(r + lin_u.len(), p);
    let w_to_u = |w: &[Q]| -> Vec<Q> {
        let mut u = vec![Q::zero(); p];
        for (wk, &j) in w.iter().zip(&chosen) {
            u[j] = wk.clone();
        }
        u
    };
    if r == 0 {
        // Everything feasible is x0 plus lineality.
        return if b_u.iter().all(|b| !b.is_negative()) {
            VRep { vertices: vec![x0], rays: Vec::new(), lines }
        } else {
            VRep::empty()
        };
    }
    let a_w: Vec<Vec<Q>> = a_u
        .iter()
        .map(|row| chosen.iter().map(|&j| row[j].clone()).collect())
        .collect();
    let m = a_w.len();
    // Vertices: r inequalities tight, full rank, all inequalities hold.
    let mut verts: BTreeSet<Vec<Q>> = BTreeSet::new();
    for_each_subset(m, r, &mut |s: &[usize]| {
        let rows: Vec<Vec<Q>> = s.iter().map(|&i| a_w[i].clone()).collect();
        if exact::rank(&rows) < r {
            return;
        }
        let rhs: Vec<Q> = s.iter().map(|&i| b_u[i].clone()).collect();
        if let Some(w) = exact::solve(&rows, &rhs) {
            if a_w.iter().zip(&b_u).all(|(a, b)| &exact::dot_q(a, &w) <= b) {
                verts.insert(w);
            }
        }
    });
    if verts.is_empty() {
        return VRep::empty();
    }
    // Extreme rays: r−1 inequalities tight with a one-dimensional kernel,
    // pointing into the recession cone. Tight normals of such a direction
    // all lie in its orthogonal complement, so extremality is automatic.
    let mut ray_set: BTreeSet<Vec<Z>> = BTreeSet::new();
    for_each_subset(m, r - 1, &mut |s: &[usize]| {
        let rows: Vec<Vec<Q>> = s.iter().map(|&i| a_w[i].clone()).collect();
        let ker = exact::kernel(&rows, r);
        if ker.len() != 1 {
            return;
        }
        for dir in [ker[0].clone(), ker[0].iter().map(|c| -c).collect()] {
            if a_w.iter().all(|a| !exact::dot_q(a, &dir).is_positive()) {
                ray_set.insert(exact::primitive_of_rational(&push_u(&w_to_u(&dir))));
                break;
            }
        }
    });
    VRep {
        vertices: verts.into_iter().map(|w| {
            let u = w_to_u(&w);
            let mut x = push_u(&u);
            for (c, x0c) in x.iter_mut().zip(&x0) {
                *c += x0c;
            }
            x
        }).collect(),
        rays: ray_set.into_iter().collect(),
        lines,
    }
}

/// Determinant of a square rational matrix by elimination.
pub fn det_q(rows: &[Vec<Q>]) -> Q {
    let n = rows.len();
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let mut detv = Q::from_integer(Z::from(1));
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Q::zero();
        };
        if p != col {
            m.swap(col, p);
            detv = -detv;
        }
        detv *= m[col][col].clone();
        let inv = m[col][col].recip();
        for c in col..n {
            let v = &m[col][c] * &inv;
            m[col][c] = v;
        }
        for r in col + 1..n {
            if !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..n {
                    let v = &m[r][c] - &f * &m[col][c];
                    m[r][c] = v;
                }
            }
        }
    }
    detv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn pts(coords: &[&[i64]]) -> Vec<Vec<Q>> {
        coords
            .iter()
            .map(|p| p.iter().map(|&x| q(x, 1)).collect())
            .collect()
    }

    #[test]
    fn square_facets_and_vertices() {
        let p = pts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2], &[1, 1], &[1, 0]]);
        let f = facets_full_dim(&p);
        assert_eq!(f.len(), 4);
        // Bottom edge contains the midpoint (1,0) as a non-vertex point.
        let bottom = f
            .iter()
            .find(|f| f.normal == vec![Z::from(0), Z::from(-1)])
            .unwrap();
        assert_eq!(bottom.points, vec![0, 1, 5]);
        let ext = extreme_points(&p);
        assert_eq!(ext, vec![0, 1, 2, 3]);
    }

    fn ineq(a: &[i64], b: i64) -> (Vec<Q>, Q) {
        (a.iter().map(|&x| q(x, 1)).collect(), q(b, 1))
    }

    #[test]
    fn vrep_square() {
        let v = vrep(
            2,
            &[],
            &[ineq(&[-1, 0], 0), ineq(&[1, 0], 1), ineq(&[0, -1], 0), ineq(&[0, 1], 1)],
        );
        assert_eq!(v.vertices.len(), 4);
        assert!(v.rays.is_empty() && v.lines.is_empty());
        assert!(v.vertices.contains(&vec![q(1, 1), q(1, 1)]));
    }

    #[test]
    fn vrep_orthant_halfplane_line_and_empty() {
        // Positive orthant: one vertex, two rays.
        let v = vrep(2, &[], &[ineq(&[-1, 0], 0), ineq(&[0, -1], 0)]);
        assert_eq!(v.vertices, vec![vec![q(0, 1), q(0, 1)]]);
        assert_eq!(v.rays.len(), 2);
        assert!(v.rays.contains(&vec![Z::from(1), Z::from(0)]));
        assert!(v.rays.contains(&vec![Z::from(0), Z::from(1)]));

        // Half-plane x <= 0: vertex, one ray, one lineality direction.
        let v = vrep(2, &[], &[ineq(&[1, 0], 0)]);
        assert_eq!(v.vertices.len(), 1);
        assert_eq!(v.rays, vec![vec![Z::from(-1), Z::from(0)]]);
        assert_eq!(v.lines.len(), 1);

        // The line x + y = 0.
        let v = vrep(2, &[(vec![q(1, 1), q(1, 1)], q(0, 1))], &[]);
        assert_eq!(v.vertices, vec![vec![q(0, 1), q(0, 1)]]);
        assert!(v.rays.is_empty());
        assert_eq!(v.lines.len(), 1);
        let l = &v.lines[0];
        assert_eq!(&l[0] + &l[1], Z::from(0));

        // Empty: x <= 0 and x >= 1.
        let v = vrep(2, &[], &[ineq(&[1, 0], 0), ineq(&[-1, 0], -1)]);
        assert!(v.is_empty());
    }

    #[test]
    fn vrep_segment_from_eq_and_ineqs() {
        // x + y = 1, 0 <= x <= 1: segment from (0,1) to (1,0).
        let v = vrep(
            2,
            &[(vec![q(1, 1), q(1, 1)], q(1, 1))],
            &[ineq(&[-1, 0], 0), ineq(&[1, 0], 1)],
        );
        assert_eq!(v.vertices.len(), 2);
        assert!(v.vertices.contains(&vec![q(0, 1), q(1, 1)]));
        assert!(v.vertices.contains(&vec![q(1, 1), q(0, 1)]));
        assert!(v.rays.is_empty() && v.lines.is_empty());
    }

    #[test]
    fn vrep_single_point_from_full_rank_eqs() {
        let v = vrep(
            2,
            &[(vec![q(1, 1), q(0, 1)], q(3, 1)), (vec![q(0, 1), q(1, 1)], q(-2, 1))],
            &[ineq(&[1, 1], 5)],
        );
        assert_eq!(v.vertices, vec![vec![q(3, 1), q(-2, 1)]]);
        // Infeasible point.
        let v = vrep(
            2,
            &[(vec![q(1, 1), q(0, 1)], q(3, 1)), (vec![q(0, 1), q(1, 1)], q(-2, 1))],
            &[ineq(&[1, 1], 0)],
        );
        assert!(v.is_empty());
    }

    #[test]
    fn collinear_points_reduce() {
        let p = pts(&[&[0, 0], &[1, 0], &[2, 0]]);
        assert_eq!(affine_dim(&p), 1);
        assert_eq!(extreme_points(&p), vec![0, 2]);
    }

    #[test]
    fn simplex_faces_count() {
        // Tetrahedron: 1 + 4 + 6 + 4 = 15 faces including itself.
        let p = pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let f = faces(&p);
        assert_eq!(f.len(), 15);
    }

    #[test]
    fn volumes() {
        let square = pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(volume(&square), q(1, 1));
        let tri = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(volume(&tri), q(1, 2));
        let cube = pts(&[
            &[0, 0, 0],
            &[1, 0, 0],
            &[0, 1, 0],
            &[0, 0, 1],
            &[1, 1, 0],
            &[1, 0, 1],
            &[0, 1, 1],
            &[1, 1, 1],
        ]);
        assert_eq!(volume(&cube), q(1, 1));
        let big = pts(&[&[0, 0], &[3, 0], &[0, 3], &[3, 3], &[1, 1], &[2, 1]]);
        assert_eq!(volume(&big), q(9, 1));
    }

    #[test]
    fn triangulate_covers() {
        let square = pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let t = triangulate(&square);
        assert_eq!(t.len(), 2);
        for s in &t {
            assert_eq!(s.len(), 3);
        }
    }

    #[test]
    fn frame_roundtrip() {
        let p = pts(&[&[1, 1, 1], &[2, 2, 1], &[1, 3, 1]]);
        let frame = AffineFrame::new(&p);
        assert_eq!(frame.dim(), 2);
        for point in &p {
            let l = frame.to_local(point).unwrap();
            assert_eq!(frame.from_local(&l), *point);
        }
        assert!(frame
            .to_local(&[q(0, 1), q(0, 1), q(5, 1)])
            .is_none());
    }
}
