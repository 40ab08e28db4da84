//! Lattice points, Newton polytopes, liftings, and regular subdivisions.
//!
//! A regular subdivision is computed as the projection of the lower hull
//! of the lifted point set `{(α, ν(α))}`: its cells are the *linearity
//! domains* of the induced piecewise-affine function, so lifted points
//! that happen to be coplanar merge into a single cell rather than being
//! triangulated apart. Each cell carries the supporting affine functional
//! `x ↦ <x, a> + b` (equal to ν on the cell, `<= ν` everywhere else) and
//! its *marked points* — all domain points lifted onto the cell's lower
//! face, including non-vertices, which truncation of polynomials to a cell
//! must keep.
//!
//! Everything here is exact rational arithmetic; no tolerances.

use crate::error::{Error, Result};
use crate::exact::{self, Q, Z};
use crate::hull;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// A point of `Z^n`, ordered lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticePoint(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn to_rational(&self) -> Vec<Q> {
        self.0.iter().map(|&c| Q::from_integer(Z::from(c))).collect()
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A lattice polytope given by its vertex set (exactly the extreme points,
/// canonically sorted), together with its intrinsic and ambient dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polytope {
    pub vertices: Vec<LatticePoint>,
    pub dim: usize,
    pub ambient_dim: usize,
}

impl Polytope {
    /// Convex hull of a nonempty set of lattice points. The stored vertex
    /// list keeps only extreme points, sorted.
    pub fn from_points(points: &[LatticePoint]) -> Result<Polytope> {
        if points.is_empty() {
            return Err(Error::EmptySupport);
        }
        let ambient = points[0].dim();
        if points.iter().any(|p| p.dim() != ambient) {
            return Err(Error::invalid("mixed point dimensions"));
        }
        let qpts: Vec<Vec<Q>> = points.iter().map(|p| p.to_rational()).collect();
        let ext = hull::extreme_points(&qpts);
        let mut vertices: Vec<LatticePoint> = ext.into_iter().map(|i| points[i].clone()).collect();
        vertices.sort();
        vertices.dedup();
        let dim = hull::affine_dim(&vertices.iter().map(|p| p.to_rational()).collect::<Vec<_>>());
        Ok(Polytope { vertices, dim, ambient_dim: ambient })
    }

    /// Exact membership test for a rational point.
    pub fn contains(&self, p: &[Q]) -> bool {
        if p.len() != self.ambient_dim {
            return false;
        }
        let qpts: Vec<Vec<Q>> = self.vertices.iter().map(|v| v.to_rational()).collect();
        if self.dim == 0 {
            return qpts[0] == p;
        }
        if self.dim == self.ambient_dim {
            return hull::facets_full_dim(&qpts)
                .iter()
                .all(|f| exact::dot_zq(&f.normal, p) <= f.offset);
        }
        let frame = hull::AffineFrame::new(&qpts);
        let Some(local) = frame.to_local(p) else {
            return false;
        };
        let local_pts: Vec<Vec<Q>> = qpts
            .iter()
            .map(|v| frame.to_local(v).expect("vertex in own hull"))
            .collect();
        hull::facets_full_dim(&local_pts)
            .iter()
            .all(|f| exact::dot_zq(&f.normal, &local) <= f.offset)
    }

    pub fn contains_lattice(&self, p: &LatticePoint) -> bool {
        self.contains(&p.to_rational())
    }

    /// Exact Euclidean volume. Errors with "degenerate cell" when the
    /// polytope is not full-dimensional in its ambient space.
    pub fn volume(&self) -> Result<Q> {
        if self.dim != self.ambient_dim {
            return Err(Error::DegenerateCell);
        }
        let qpts: Vec<Vec<Q>> = self.vertices.iter().map(|v| v.to_rational()).collect();
        Ok(hull::volume(&qpts))
    }

    /// `true` when the polytope is a full-dimensional simplex of Euclidean
    /// volume `1/n!` (the smallest possible for a lattice simplex).
    pub fn is_unimodular_simplex(&self) -> bool {
        let n = self.ambient_dim;
        if self.dim != n || self.vertices.len() != n + 1 {
            return false;
        }
        let mut min_vol = Q::one();
        for i in 1..=n {
            min_vol /= Q::from_integer(Z::from(i as i64));
        }
        self.volume().map(|v| v == min_vol).unwrap_or(false)
    }
}

/// Newton polytope of a support set: the convex hull of the exponents.
pub fn newton_polytope(support: &[LatticePoint]) -> Result<Polytope> {
    Polytope::from_points(support)
}

/// A lifting function: finitely many lattice points with rational heights.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Lifting {
    values: BTreeMap<LatticePoint, Q>,
}

impl Lifting {
    pub fn new() -> Lifting {
        Lifting { values: BTreeMap::new() }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (LatticePoint, Q)>) -> Lifting {
        Lifting { values: pairs.into_iter().collect() }
    }

    pub fn set(&mut self, point: LatticePoint, value: Q) {
        self.values.insert(point, value);
    }

    pub fn get(&self, point: &LatticePoint) -> Result<&Q> {
        self.values
            .get(point)
            .ok_or_else(|| Error::LiftingGap(format!("{point:?}")))
    }

    pub fn domain(&self) -> impl Iterator<Item = &LatticePoint> {
        self.values.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticePoint, &Q)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// One cell of a regular subdivision: its polytope, the supporting affine
/// functional `(a, b)` with `<x, a> + b = ν(x)` on the cell and `<= ν`
/// elsewhere, and the marked points (all domain points lifted onto the
/// lower face — vertices and non-vertices alike).
#[derive(Debug, Clone)]
pub struct SubdivisionCell {
    pub polytope: Polytope,
    pub functional: (Vec<Q>, Q),
    pub marked: Vec<LatticePoint>,
}

/// A regular subdivision of a point configuration induced by a lifting.
#[derive(Debug, Clone)]
pub struct RegularSubdivision {
    pub ambient_dim: usize,
    pub domain: Vec<LatticePoint>,
    pub cells: Vec<SubdivisionCell>,
}

/// Regular subdivision of `domain` induced by `lifting`: project the lower
/// hull of `{(α, ν(α))}` back to the domain. Cells are linearity domains;
/// coplanar lifted points merge.
pub fn regular_subdivision(domain: &[LatticePoint], lifting: &Lifting) -> Result<RegularSubdivision> {
    if domain.is_empty() {
        return Err(Error::EmptySupport);
    }
    let ambient = domain[0].dim();
    let mut points: Vec<LatticePoint> = domain.to_vec();
    points.sort();
    points.dedup();
    for p in &points {
        if p.dim() != ambient {
            return Err(Error::invalid("mixed point dimensions"));
        }
        lifting.get(p)?;
    }
    let heights: Vec<Q> = points.iter().map(|p| lifting.get(p).unwrap().clone()).collect();
    let proj: Vec<Vec<Q>> = points.iter().map(|p| p.to_rational()).collect();
    let lifted: Vec<Vec<Q>> = proj
        .iter()
        .zip(&heights)
        .map(|(p, h)| {
            let mut v = p.clone();
            v.push(h.clone());
            v
        })
        .collect();

    let da = hull::affine_dim(&proj);
    let dl = hull::affine_dim(&lifted);
    let mut cells: Vec<SubdivisionCell> = Vec::new();
    if dl == da {
        // The lifting is affine over the whole configuration: one cell.
        cells.push(make_cell(&points, &(0..points.len()).collect::<Vec<_>>(), &heights, ambient)?);
    } else {
        debug_assert_eq!(dl, da + 1);
        // Work intrinsically so lower-dimensional configurations (e.g. a
        // segment in the plane) subdivide correctly: coordinates of the
        // projections in their affine hull, with the height appended last.
        let work: Vec<Vec<Q>> = if da == ambient {
            lifted
        } else {
            let frame = hull::AffineFrame::new(&proj);
            proj.iter()
                .zip(&heights)
                .map(|(p, h)| {
                    let mut v = frame.to_local(p).expect("point in own affine hull");
                    v.push(h.clone());
                    v
                })
                .collect()
        };
        for facet in hull::facets_full_dim(&work) {
            let last = facet.normal.last().unwrap();
            if !last.is_negative() {
                continue;
            }
            cells.push(make_cell(&points, &facet.points, &heights, ambient)?);
        }
        cells.sort_by(|a, b| a.marked.cmp(&b.marked));
    }
    Ok(RegularSubdivision { ambient_dim: ambient, domain: points, cells })
}

fn make_cell(
    points: &[LatticePoint],
    on_face: &[usize],
    heights: &[Q],
    ambient: usize,
) -> Result<SubdivisionCell> {
    let marked: Vec<LatticePoint> = {
        let mut m: Vec<LatticePoint> = on_face.iter().map(|&i| points[i].clone()).collect();
        m.sort();
        m
    };
    let polytope = Polytope::from_points(&marked)?;
    // Solve <α, a> + b = ν(α) on the marked points, free variables zero.
    // Any solution agrees with the supporting functional on the affine
    // hull of the cell, which contains every domain point of interest.
    let rows: Vec<Vec<Q>> = on_face
        .iter()
        .map(|&i| {
            let mut r = points[i].to_rational();
            r.push(Q::one());
            r
        })
        .collect();
    let rhs: Vec<Q> = on_face.iter().map(|&i| heights[i].clone()).collect();
    let sol = exact::solve(&rows, &rhs)
        .ok_or_else(|| Error::invalid("inconsistent supporting functional"))?;
    let (a, b) = (sol[..ambient].to_vec(), sol[ambient].clone());
    Ok(SubdivisionCell { polytope, functional: (a, b), marked })
}

impl RegularSubdivision {
    /// Value of the cell's supporting functional at a rational point.
    pub fn functional_value(cell: &SubdivisionCell, x: &[Q]) -> Q {
        exact::dot_q(&cell.functional.0, x) + &cell.functional.1
    }

    /// The lower-hull property: every cell functional is `<=` the lifting
    /// on all domain points, with equality exactly on the cell's marked
    /// points. Returns `false` if any cell violates it.
    pub fn is_lower_hull(&self, lifting: &Lifting) -> bool {
        for cell in &self.cells {
            for p in &self.domain {
                let lhs = Self::functional_value(cell, &p.to_rational());
                let nu = match lifting.get(p) {
                    Ok(v) => v,
                    Err(_) => return false,
                };
                let marked = cell.marked.binary_search(p).is_ok();
                if marked && &lhs != nu {
                    return false;
                }
                if !marked && &lhs > nu {
                    return false;
                }
            }
        }
        true
    }
}

/// `true` iff every cell of the subdivision is a full-dimensional simplex
/// of Euclidean volume exactly `1/n!` — i.e. the subdivision is a
/// unimodular triangulation.
pub fn is_smooth_subdivision(subdivision: &RegularSubdivision) -> bool {
    !subdivision.cells.is_empty()
        && subdivision.cells.iter().all(|c| c.polytope.is_unimodular_simplex())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use num_traits::Zero;

    pub fn lp(coords: &[i64]) -> LatticePoint {
        LatticePoint::new(coords.to_vec())
    }

    fn flat(points: &[LatticePoint]) -> Lifting {
        Lifting::from_pairs(points.iter().map(|p| (p.clone(), Q::zero())))
    }

    #[test]
    fn newton_polytope_drops_midpoints() {
        let p = newton_polytope(&[lp(&[0, 0]), lp(&[2, 0]), lp(&[1, 0])]).unwrap();
        assert_eq!(p.vertices, vec![lp(&[0, 0]), lp(&[2, 0])]);
        assert_eq!(p.dim, 1);
        assert_eq!(p.ambient_dim, 2);
    }

    #[test]
    fn newton_polytope_empty_support() {
        assert!(matches!(newton_polytope(&[]), Err(Error::EmptySupport)));
    }

    #[test]
    fn newton_polytope_permutation_invariant() {
        let a = newton_polytope(&[lp(&[0, 0]), lp(&[1, 0]), lp(&[0, 1]), lp(&[1, 1])]).unwrap();
        let b = newton_polytope(&[lp(&[1, 1]), lp(&[0, 1]), lp(&[1, 0]), lp(&[0, 0])]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn flat_lifting_gives_single_cell() {
        let square = [lp(&[0, 0]), lp(&[1, 0]), lp(&[0, 1]), lp(&[1, 1])];
        let s = regular_subdivision(&square, &flat(&square)).unwrap();
        assert_eq!(s.cells.len(), 1);
        let cell = &s.cells[0];
        assert_eq!(cell.polytope.vertices.len(), 4);
        assert_eq!(cell.functional.0, vec![Q::zero(), Q::zero()]);
        assert_eq!(cell.functional.1, Q::zero());
        assert_eq!(cell.marked.len(), 4);
        assert!(s.is_lower_hull(&flat(&square)));
    }

    #[test]
    fn square_lifted_corner_splits_on_antidiagonal() {
        let square = [lp(&[0, 0]), lp(&[1, 0]), lp(&[0, 1]), lp(&[1, 1])];
        let mut nu = flat(&square);
        nu.set(lp(&[1, 1]), q(1, 1));
        let s = regular_subdivision(&square, &nu).unwrap();
        assert_eq!(s.cells.len(), 2);
        let marked: Vec<Vec<LatticePoint>> = s.cells.iter().map(|c| c.marked.clone()).collect();
        assert!(marked.contains(&vec![lp(&[0, 0]), lp(&[0, 1]), lp(&[1, 0])]));
        assert!(marked.contains(&vec![lp(&[0, 1]), lp(&[1, 0]), lp(&[1, 1])]));
        // Functionals: flat on the lower triangle, (1,1)-slope minus one on
        // the upper.
        for cell in &s.cells {
            if cell.marked.contains(&lp(&[1, 1])) {
                assert_eq!(cell.functional.0, vec![q(1, 1), q(1, 1)]);
                assert_eq!(cell.functional.1, q(-1, 1));
            } else {
                assert_eq!(cell.functional.0, vec![Q::zero(), Q::zero()]);
            }
        }
        assert!(s.is_lower_hull(&nu));
    }

    #[test]
    fn segment_subdivision_with_interior_marked_point() {
        // [0,2] in one variable, kink at 1.
        let dom = [lp(&[0]), lp(&[1]), lp(&[2])];
        let mut nu = flat(&dom);
        nu.set(lp(&[2]), q(1, 1));
        let s = regular_subdivision(&dom, &nu).unwrap();
        assert_eq!(s.cells.len(), 2);
        assert_eq!(s.cells[0].marked, vec![lp(&[0]), lp(&[1])]);
        assert_eq!(s.cells[1].marked, vec![lp(&[1]), lp(&[2])]);

        // Flat lifting: one cell, the midpoint is marked but not a vertex.
        let s = regular_subdivision(&dom, &flat(&dom)).unwrap();
        assert_eq!(s.cells.len(), 1);
        assert_eq!(s.cells[0].marked, vec![lp(&[0]), lp(&[1]), lp(&[2])]);
        assert_eq!(s.cells[0].polytope.vertices, vec![lp(&[0]), lp(&[2])]);
    }

    #[test]
    fn lower_dimensional_domain_in_the_plane() {
        // Collinear configuration in R^2 with a kink: two segment cells.
        let dom = [lp(&[0, 0]), lp(&[1, 0]), lp(&[2, 0])];
        let mut nu = flat(&dom);
        nu.set(lp(&[2, 0]), q(1, 1));
        let s = regular_subdivision(&dom, &nu).unwrap();
        assert_eq!(s.cells.len(), 2);
        assert!(s.is_lower_hull(&nu));
        for cell in &s.cells {
            assert_eq!(cell.polytope.dim, 1);
        }
    }

    #[test]
    fn subdividing_a_cell_by_its_own_lifting_returns_the_cell() {
        let square = [lp(&[0, 0]), lp(&[1, 0]), lp(&[0, 1]), lp(&[1, 1])];
        let mut nu = flat(&square);
        nu.set(lp(&[1, 1]), q(1, 1));
        let s = regular_subdivision(&square, &nu).unwrap();
        for cell in &s.cells {
            let sub = regular_subdivision(&cell.marked, &nu).unwrap();
            assert_eq!(sub.cells.len(), 1);
            assert_eq!(sub.cells[0].polytope, cell.polytope);
        }
    }

    #[test]
    fn volume_identity_on_the_kinked_square() {
        let square = [lp(&[0, 0]), lp(&[1, 0]), lp(&[0, 1]), lp(&[1, 1])];
        let mut nu = flat(&square);
        nu.set(lp(&[1, 1]), q(1, 1));
        let s = regular_subdivision(&square, &nu).unwrap();
        let total: Q = s.cells.iter().map(|c| c.polytope.volume().unwrap()).sum();
        assert_eq!(total, newton_polytope(&square).unwrap().volume().unwrap());
    }

    #[test]
    fn degenerate_volume_errors() {
        let seg = newton_polytope(&[lp(&[0, 0]), lp(&[2, 0])]).unwrap();
        assert!(matches!(seg.volume(), Err(Error::DegenerateCell)));
    }

    #[test]
    fn unimodular_triangulation_is_smooth() {
        // Strictly convex lifting on the double simplex: all unit triangles.
        let dom: Vec<LatticePoint> = (0..=2)
            .flat_map(|a| (0..=2 - a).map(move |b| lp(&[a, b])))
            .collect();
        let nu = Lifting::from_pairs(
            dom.iter()
                .map(|p| (p.clone(), q(p.0[0] * p.0[0] + p.0[0] * p.0[1] + p.0[1] * p.0[1], 1))),
        );
        let s = regular_subdivision(&dom, &nu).unwrap();
        assert_eq!(s.cells.len(), 4);
        assert!(is_smooth_subdivision(&s));
        assert!(s.is_lower_hull(&nu));
        // The flat square is not smooth.
        let square = [lp(&[0, 0]), lp(&[1, 0]), lp(&[0, 1]), lp(&[1, 1])];
        let s = regular_subdivision(&square, &flat(&square)).unwrap();
        assert!(!is_smooth_subdivision(&s));
    }

    #[test]
    fn lifting_gap_reported() {
        let dom = [lp(&[0, 0]), lp(&[1, 0])];
        let nu = Lifting::from_pairs([(lp(&[0, 0]), Q::zero())]);
        assert!(matches!(
            regular_subdivision(&dom, &nu),
            Err(Error::LiftingGap(_))
        ));
    }
}
