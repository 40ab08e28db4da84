//! Structure of the phase-space limit over a tropical hypersurface: fiber
//! descriptions over cells of a tropical hyperplane, exact phase-space
//! lifts (point clouds whose log projections lie on the curve exactly), the
//! foliation projection of complement components onto the standard
//! hyperplane, the pair-of-pants adjacency graph of a smooth tropical
//! curve, and Euler characteristic / genus invariants.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use crate::amoeba::{CloudMeta, PointCloud, Space};
use crate::error::{Error, Result};
use crate::exact::{f64_of_rational, q, Q, Z};
use crate::lattice::{newton_polytope, LatticePoint};
use crate::puiseux::{sample_puiseux_solutions, PuiseuxPolynomial};
use crate::rng::derive_rng;
use crate::tropical::{corner_locus, TropicalHypersurface, TropicalPolynomial};

/// What the phase-space fiber over a point of a tropical hyperplane looks
/// like: a real `torus_rank`-torus times the closed coamoeba of a
/// hyperplane in a torus of dimension `ambient`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiberDescription {
    /// Dimension `l` of the open cell containing the point.
    pub cell_dim: usize,
    /// Rank of the torus factor (= `l`).
    pub torus_rank: usize,
    /// Index of the coamoeba factor (= `n − 1 − l`): the coamoeba of a
    /// hyperplane in a torus of dimension `coamoeba_dim + 1`.
    pub coamoeba_dim: usize,
    /// Dimension of the torus the coamoeba factor lives in (= `n − l`).
    pub ambient: usize,
}

/// `max{0, x_1, …, x_n}`: the tropical polynomial of the standard
/// hyperplane in dimension `n`.
pub fn standard_hyperplane(n: usize) -> Result<TropicalPolynomial> {
    if n == 0 {
        return Err(Error::invalid("hyperplane needs ambient dimension at least 1"));
    }
    let mut terms = vec![(LatticePoint::new(vec![0; n]), q(0, 1))];
    for j in 0..n {
        let mut e = vec![0i64; n];
        e[j] = 1;
        terms.push((LatticePoint::new(e), q(0, 1)));
    }
    TropicalPolynomial::new(terms)
}

/// A smooth degree-`d` plane tropical curve: support = lattice points of
/// the dilated triangle `d·Δ`, coefficients from the strictly convex
/// quadratic `a² + ab + b²` (which induces the full unimodular
/// triangulation into `d²` triangles).
pub fn standard_plane_curve(d: i64) -> Result<TropicalHypersurface> {
    if d < 1 {
        return Err(Error::invalid("degree must be at least 1"));
    }
    let mut terms = Vec::new();
    for a in 0..=d {
        for b in 0..=(d - a) {
            terms.push((LatticePoint::new(vec![a, b]), q(-(a * a + a * b + b * b), 1)));
        }
    }
    let f = TropicalPolynomial::new(terms)?;
    corner_locus(&f)
}

fn require_hyperplane(gamma: &TropicalHypersurface) -> Result<()> {
    let support = gamma.source.support();
    let n = gamma.ambient_dim;
    let poly = newton_polytope(&support)?;
    if support.len() != n + 1 || poly.dim != n || !poly.is_unimodular_simplex() {
        return Err(Error::invalid(
            "fiber structure requires a tropical hyperplane (unimodular simplex support)",
        ));
    }
    Ok(())
}

/// The fiber description over a point of a tropical hyperplane: identifies
/// the open cell containing `x` by its exact active terms and applies the
/// rank identities `torus_rank = l`, `coamoeba_dim = n−1−l`,
/// `ambient = n−l`.
pub fn fiber_over(gamma: &TropicalHypersurface, x: &[Q]) -> Result<FiberDescription> {
    require_hyperplane(gamma)?;
    let n = gamma.ambient_dim;
    if x.len() != n {
        return Err(Error::invalid("dimension mismatch"));
    }
    let (_, argmax) = gamma.source.eval_exact(x);
    if argmax.len() < 2 {
        return Err(Error::NotOnHypersurface);
    }
    let l = n - (argmax.len() - 1);
    Ok(FiberDescription {
        cell_dim: l,
        torus_rank: l,
        coamoeba_dim: n - 1 - l,
        ambient: n - l,
    })
}

/// Exact phase-space lift of a (translated) standard hyperplane: points
/// whose log block lies on the corner locus exactly — returned separately
/// as rationals — and whose argument block is drawn from the limit fiber
/// over that cell (free circles for inactive coordinates; solution
/// arguments of the unit-coefficient active sub-equation for the rest).
///
/// The support must be exactly `{0, e_1, …, e_n}`; ray and edge parameters
/// are dyadic rationals in `(0, cap]`.
pub fn lift_phase_cloud(
    trop: &TropicalPolynomial,
    k: usize,
    seed: u64,
    cap: f64,
) -> Result<(PointCloud, Vec<Vec<Q>>)> {
    let n = trop.support().first().map_or(0, |p| p.dim());
    let expected: BTreeSet<LatticePoint> = standard_hyperplane(n)?
        .support()
        .into_iter()
        .collect();
    let actual: BTreeSet<LatticePoint> = trop.support().into_iter().collect();
    if actual != expected {
        return Err(Error::invalid(
            "phase lift requires the standard hyperplane support {0, e_1, …, e_n}",
        ));
    }
    if k == 0 || !(cap > 0.0) {
        return Err(Error::invalid("need k ≥ 1 samples and a positive parameter cap"));
    }
    let gamma = corner_locus(trop)?;
    let cells: Vec<_> = (0..n).flat_map(|d| gamma.cells_of_dim(d)).collect();
    let cap_m = ((cap * 64.0).floor() as i64).max(1);
    let mut points = Vec::new();
    let mut exact_logs = Vec::new();
    for i in 0..k {
        let mut rng = derive_rng(seed, i as u64);
        let cell = cells[i % cells.len()];
        // Exact point in the relative interior: vertex + strictly positive
        // dyadic multiples of the extreme rays.
        let mut x: Vec<Q> = cell.vertices[0].clone();
        for ray in &cell.rays {
            let s = q(rng.gen_range(1..=cap_m), 64);
            for (xi, ri) in x.iter_mut().zip(ray) {
                *xi += &s * Q::from_integer(ri.clone());
            }
        }
        if cell.vertices.len() > 1 {
            // Hyperplane cells are pointed cones; more vertices would mean
            // a different combinatorial type.
            return Err(Error::invalid("unexpected bounded cell in a hyperplane"));
        }
        let (_, active) = trop.eval_exact(&x);
        debug_assert!(active.len() >= 2);
        let has_const = active.iter().any(|p| p.0.iter().all(|&e| e == 0));
        let vars: Vec<usize> = (0..n)
            .filter(|&j| active.iter().any(|p| p.0[j] == 1))
            .collect();
        let Some(thetas) = sample_fiber_args(n, has_const, &vars, &mut rng) else { continue };
        let mut point: Vec<f64> = x.iter().map(f64_of_rational).collect();
        point.extend(thetas);
        points.push(point);
        exact_logs.push(x);
    }
    if points.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let cloud = PointCloud::new(
        Space::Phase,
        n,
        points,
        CloudMeta { t: f64::INFINITY, seed, requested: k, bounds: None },
    )?;
    Ok((cloud, exact_logs))
}

/// Arguments of one limit-fiber sample: inactive coordinates get free
/// uniform angles; active ones get the arguments of a random solution of
/// `[const] + Σ_{j active} z_j = 0` with log-uniform moduli.
fn sample_fiber_args(
    n: usize,
    has_const: bool,
    vars: &[usize],
    rng: &mut impl Rng,
) -> Option<Vec<f64>> {
    let tau = std::f64::consts::TAU;
    'attempt: for _ in 0..20 {
        let mut thetas = vec![0.0; n];
        for j in 0..n {
            if !vars.contains(&j) {
                thetas[j] = rng.gen_range(0.0..tau);
            }
        }
        let (&solve_var, others) = vars.split_last().expect("at least two active terms");
        let mut rhs = if has_const {
            Complex64::new(-1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
        for &j in others {
            let theta = rng.gen_range(0.0..tau);
            thetas[j] = theta;
            rhs -= Complex64::from_polar(rng.gen_range(-2.0..2.0f64).exp(), theta);
        }
        if rhs.norm() < 1e-9 {
            continue 'attempt;
        }
        thetas[solve_var] = rhs.arg().rem_euclid(tau);
        return Some(thetas);
    }
    None
}

/// Phase-space lift of solution samples over the series field: each sample
/// contributes its exact valuation vector (on the tropicalization's corner
/// locus) as log block, and the arguments of the leading coefficients as
/// argument block. Failed samples are dropped.
pub fn lift_puiseux_cloud(
    f: &PuiseuxPolynomial,
    k: usize,
    seed: u64,
) -> Result<(PointCloud, Vec<Vec<Q>>)> {
    let n = f.ambient_dim();
    let samples = sample_puiseux_solutions(f, k, seed, &q(6, 1))?;
    let mut points = Vec::new();
    let mut exact_logs = Vec::new();
    for sample in samples.into_iter().flatten() {
        let mut xs = Vec::with_capacity(n);
        let mut thetas = Vec::with_capacity(n);
        let mut ok = true;
        for series in &sample {
            match (series.val(), series.leading()) {
                (Some(v), Some((_, lead))) => {
                    xs.push(v);
                    thetas.push(lead.arg().rem_euclid(std::f64::consts::TAU));
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let mut point: Vec<f64> = xs.iter().map(f64_of_rational).collect();
        point.extend(thetas);
        points.push(point);
        exact_logs.push(xs);
    }
    if points.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let cloud = PointCloud::new(
        Space::Phase,
        n,
        points,
        CloudMeta { t: f64::INFINITY, seed, requested: k, bounds: None },
    )?;
    Ok((cloud, exact_logs))
}

/// Projection of a complement point of the standard hyperplane
/// `max{0, x_1, …, x_n}` onto its corner locus, along the gradient
/// direction of the unique active term: `(1,…,1)` for the constant's
/// component, `e_i` for the component of `x_i`. The image is the first
/// boundary point along that line; points already on the corner locus are
/// returned unchanged.
pub fn foliation_project(x: &[Q]) -> Result<Vec<Q>> {
    if x.is_empty() {
        return Err(Error::invalid("empty point"));
    }
    let zero = Q::zero();
    let coord_max = x.iter().max().expect("nonempty").clone();
    let overall = if coord_max > zero { coord_max.clone() } else { zero.clone() };
    let ties = usize::from(overall == zero)
        + x.iter().filter(|xi| **xi == overall).count();
    if ties >= 2 {
        return Ok(x.to_vec()); // already on the corner locus
    }
    if overall == zero {
        // Constant term dominates: travel along +(1,…,1) until the largest
        // coordinate reaches 0.
        let s = -coord_max;
        return Ok(x.iter().map(|xi| xi + &s).collect());
    }
    // Coordinate i dominates: lower x_i onto the next-highest level.
    let i = x.iter().position(|xi| *xi == overall).expect("argmax exists");
    let mut rest = zero;
    for (j, xj) in x.iter().enumerate() {
        if j != i && *xj > rest {
            rest = xj.clone();
        }
    }
    let mut out = x.to_vec();
    out[i] = rest;
    Ok(out)
}

/// Gluing record of one bounded 1-cell: which two pants pieces meet, the
/// primitive vector of the dual subdivision edge (for curves; the cell's
/// own direction when the dual face is higher-dimensional), and the fact
/// that the identification reverses orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluingRecord {
    pub node_a: usize,
    pub node_b: usize,
    pub dual_primitive: Vec<i64>,
    pub orientation_reversed: bool,
}

/// An unbounded 1-cell: the pants piece it leaves and its primitive
/// direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Leg {
    pub node: usize,
    pub direction: Vec<i64>,
}

/// Adjacency graph of the pair-of-pants decomposition of a smooth tropical
/// hypersurface: one node per vertex, one gluing record per bounded
/// 1-cell, one leg per unbounded 1-cell.
#[derive(Debug, Clone)]
pub struct PantsGraph {
    pub ambient_dim: usize,
    /// Vertex positions, exact.
    pub nodes: Vec<Vec<Q>>,
    pub internal_edges: Vec<GluingRecord>,
    pub legs: Vec<Leg>,
}

impl PantsGraph {
    /// Number of 1-cells (bounded or not) incident to a node.
    pub fn node_degree(&self, node: usize) -> usize {
        self.internal_edges
            .iter()
            .filter(|e| e.node_a == node || e.node_b == node)
            .count()
            + self.legs.iter().filter(|l| l.node == node).count()
    }
}

fn primitive_of_integers(v: &[Z]) -> Result<Vec<i64>> {
    let mut g = Z::zero();
    for c in v {
        g = g.gcd(c);
    }
    if g.is_zero() {
        return Err(Error::invalid("zero direction vector"));
    }
    v.iter()
        .map(|c| (c / &g).to_i64().ok_or_else(|| Error::invalid("direction overflows i64")))
        .collect()
}

fn primitive_of_rationals(v: &[Q]) -> Result<Vec<i64>> {
    let mut lcm = Z::from(1);
    for c in v {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<Z> = v.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    primitive_of_integers(&ints)
}

/// The pair-of-pants decomposition graph of a smooth tropical
/// hypersurface. Every bounded 1-cell becomes a gluing record between the
/// pants pieces at its endpoints; every ray becomes a leg. The
/// identifications always reverse orientation (conjugation in the last
/// coordinate of the gluing region), recorded per edge.
pub fn pants_graph(gamma: &TropicalHypersurface) -> Result<PantsGraph> {
    if !gamma.is_smooth() {
        return Err(Error::PantsRequiresSmooth);
    }
    let n = gamma.ambient_dim;
    let mut nodes: Vec<Vec<Q>> = Vec::new();
    let mut index: BTreeMap<Vec<Q>, usize> = BTreeMap::new();
    for cell in gamma.cells_of_dim(0) {
        let v = cell.vertices[0].clone();
        index.entry(v.clone()).or_insert_with(|| {
            nodes.push(v);
            nodes.len() - 1
        });
    }
    let mut internal_edges = Vec::new();
    let mut legs = Vec::new();
    for cell in gamma.cells_of_dim(1) {
        if !cell.lines.is_empty() || nodes.is_empty() {
            return Err(Error::invalid(
                "pants decomposition needs 1-cells that end in vertices (segments or rays)",
            ));
        }
        match (cell.vertices.len(), cell.rays.len()) {
            (2, 0) => {
                let a = index[&cell.vertices[0]];
                let b = index[&cell.vertices[1]];
                let marked = &gamma.dual_faces[cell.dual_face].marked;
                let dual_primitive = if marked.len() == 2 {
                    let diff: Vec<Z> = marked[1]
                        .0
                        .iter()
                        .zip(&marked[0].0)
                        .map(|(p, q)| Z::from(p - q))
                        .collect();
                    primitive_of_integers(&diff)?
                } else {
                    let diff: Vec<Q> = cell.vertices[1]
                        .iter()
                        .zip(&cell.vertices[0])
                        .map(|(p, q)| p - q)
                        .collect();
                    primitive_of_rationals(&diff)?
                };
                internal_edges.push(GluingRecord {
                    node_a: a,
                    node_b: b,
                    dual_primitive,
                    orientation_reversed: true,
                });
            }
            (1, 1) => {
                legs.push(Leg {
                    node: index[&cell.vertices[0]],
                    direction: primitive_of_integers(&cell.rays[0])?,
                });
            }
            _ => {
                return Err(Error::invalid("unexpected 1-cell shape in a smooth hypersurface"))
            }
        }
    }
    let graph = PantsGraph { ambient_dim: n, nodes, internal_edges, legs };
    for node in 0..graph.nodes.len() {
        if graph.node_degree(node) != n + 1 {
            return Err(Error::invalid(
                "smooth hypersurface vertices must have exactly n+1 incident 1-cells",
            ));
        }
    }
    Ok(graph)
}

/// Euler characteristic and genus data computed from a pants graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EulerData {
    /// χ of the open glued manifold: `(−1)^{n−1}` per pants piece (gluing
    /// regions are circle-fibered, χ = 0).
    pub chi_open: i64,
    /// χ after collapsing the boundary fibrations; curves only.
    pub chi_compact: Option<i64>,
    /// Genus of the compactified surface; curves only.
    pub genus: Option<i64>,
    /// Whether the open-χ additivity is extrapolated beyond surfaces.
    pub conjectural: bool,
}

/// χ and genus of the glued pants manifold. For curves (`n = 2`) the
/// boundary circles collapse to points, so `χ_compact = χ_open + #legs`
/// and `genus = (2 − χ_compact)/2`; in higher dimension only the open χ is
/// reported, flagged as conjectural.
pub fn euler_characteristics(graph: &PantsGraph) -> EulerData {
    let n = graph.ambient_dim;
    let sign = if (n - 1) % 2 == 0 { 1 } else { -1 };
    let chi_open = sign * graph.nodes.len() as i64;
    if n == 2 {
        let chi_compact = chi_open + graph.legs.len() as i64;
        let genus = ((2 - chi_compact) % 2 == 0).then(|| (2 - chi_compact) / 2);
        EulerData { chi_open, chi_compact: Some(chi_compact), genus, conjectural: false }
    } else {
        EulerData { chi_open, chi_compact: None, genus: None, conjectural: n >= 3 }
    }
}
