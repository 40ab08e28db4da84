//! Exact linear algebra over the rationals and over integer lattices.
//!
//! Everything upstream works with a handful of points in ambient dimension
//! at most five or so, which lets this module favour exactness and clarity
//! over asymptotics: dense rational Gaussian elimination, fraction-free
//! determinants, and a Hermite-normal-form routine with unimodular
//! tracking. Integer kernels returned here are *saturated* — they are
//! bases of `ker(A) ∩ Z^n` as a lattice, not merely rational spanning sets
//! scaled to integers — which is what lattice-length and primitive-vector
//! computations downstream rely on.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar used by the whole polyhedral layer.
pub type Q = BigRational;
/// Exact integer scalar.
pub type Z = BigInt;

/// Convenience constructor for small rationals.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(Z::from(num), Z::from(den))
}

/// Convenience constructor for small integers.
pub fn z(n: i64) -> Z {
    Z::from(n)
}

pub fn dot_q(a: &[Q], b: &[Q]) -> Q {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Q::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

pub fn dot_zq(a: &[Z], b: &[Q]) -> Q {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Q::zero();
    for (x, y) in a.iter().zip(b) {
        acc += Q::from_integer(x.clone()) * y;
    }
    acc
}

pub fn dot_z(a: &[Z], b: &[Z]) -> Z {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Z::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// Row-reduce a copy of `rows`, returning the echelon rows and the column
/// index of each pivot, in elimination order.
fn echelon(rows: &[Vec<Q>]) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for c in col..ncols {
            let v = &m[row][c] * &inv;
            m[row][c] = v;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..ncols {
                    let v = &m[r][c] - &f * &m[row][c];
                    m[r][c] = v;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    m.truncate(row);
    (m, pivots)
}

/// Rank of a rational matrix given as rows.
pub fn rank(rows: &[Vec<Q>]) -> usize {
    echelon(rows).1.len()
}

/// One exact solution of `rows * x = rhs` with free variables set to zero,
/// or `None` if the system is inconsistent.
pub fn solve(rows: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    assert_eq!(rows.len(), rhs.len());
    let ncols = rows.first().map_or(0, |r| r.len());
    let aug: Vec<Vec<Q>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let (ech, pivots) = echelon(&aug);
    // A pivot in the appended column means 0 = 1: inconsistent.
    if pivots.iter().any(|&c| c == ncols) {
        return None;
    }
    let mut x = vec![Q::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = ech[r][ncols].clone();
    }
    Some(x)
}

/// Basis of the rational kernel `{x : rows * x = 0}` in `Q^ncols`.
pub fn kernel(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    if rows.is_empty() {
        return (0..ncols)
            .map(|i| {
                let mut e = vec![Q::zero(); ncols];
                e[i] = Q::one();
                e
            })
            .collect();
    }
    let (ech, pivots) = echelon(rows);
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![Q::zero(); ncols];
        v[free] = Q::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -ech[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Multiply a rational vector by the lcm of its denominators, then divide
/// by the gcd of the entries: the primitive integer vector on the same ray
/// (assumes `v` is not zero).
pub fn primitive_of_rational(v: &[Q]) -> Vec<Z> {
    let mut lcm = Z::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<Z> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    primitive(&ints)
}

/// Divide an integer vector by the (positive) gcd of its entries.
/// Panics on the zero vector.
pub fn primitive(v: &[Z]) -> Vec<Z> {
    let mut g = Z::zero();
    for x in v {
        g = g.gcd(x);
    }
    assert!(!g.is_zero(), "primitive of zero vector");
    v.iter().map(|x| x / &g).collect()
}

/// Hermite-style row reduction with a unimodular transform: returns
/// `(h, u)` with `u * mat = h`, `u` unimodular and `h` in row-echelon form
/// (pivots positive, not further reduced above the pivot — callers only
/// need pivot positions and zero rows).
pub fn hermite_with_transform(mat: &[Vec<Z>]) -> (Vec<Vec<Z>>, Vec<Vec<Z>>) {
    let nrows = mat.len();
    let ncols = mat.first().map_or(0, |r| r.len());
    let mut h: Vec<Vec<Z>> = mat.to_vec();
    let mut u: Vec<Vec<Z>> = (0..nrows)
        .map(|i| {
            let mut e = vec![Z::zero(); nrows];
            e[i] = Z::one();
            e
        })
        .collect();
    let mut row = 0;
    for col in 0..ncols {
        // Euclid within the column: repeatedly reduce entries below the
        // working row until at most one nonzero remains.
        loop {
            let mut best: Option<usize> = None;
            for r in row..nrows {
                if !h[r][col].is_zero() {
                    best = match best {
                        None => Some(r),
                        Some(b) if h[r][col].abs() < h[b][col].abs() => Some(r),
                        keep => keep,
                    };
                }
            }
            let Some(b) = best else { break };
            h.swap(row, b);
            u.swap(row, b);
            let mut others = false;
            for r in row + 1..nrows {
                if !h[r][col].is_zero() {
                    let f = &h[r][col] / &h[row][col]; // truncated division
                    if !f.is_zero() {
                        for c in 0..ncols {
                            let v = &h[r][c] - &f * &h[row][c];
                            h[r][c] = v;
                        }
                        for c in 0..nrows {
                            let v = &u[r][c] - &f * &u[row][c];
                            u[r][c] = v;
                        }
                    }
                    if !h[r][col].is_zero() {
                        others = true;
                    }
                }
            }
            if !others {
                break;
            }
        }
        if !h[row][col].is_zero() {
            if h[row][col].is_negative() {
                for c in 0..ncols {
                    h[row][c] = -h[row][c].clone();
                }
                for c in 0..nrows {
                    u[row][c] = -u[row][c].clone();
                }
            }
            row += 1;
            if row == nrows {
                break;
            }
        }
    }
    (h, u)
}

/// Saturated basis of the integer kernel `{x ∈ Z^ncols : rows * x = 0}`.
///
/// The rows of the result generate the full lattice of integer solutions;
/// in particular each basis vector is primitive modulo the others.
pub fn integer_kernel(rows: &[Vec<Z>], ncols: usize) -> Vec<Vec<Z>> {
    if rows.is_empty() {
        return (0..ncols)
            .map(|i| {
                let mut e = vec![Z::zero(); ncols];
                e[i] = Z::one();
                e
            })
            .collect();
    }
    // Transpose: rows of `b` are the columns of the input. A unimodular
    // row transform u with u*b in echelon form hands us the kernel: the
    // rows of u matched with zero rows of u*b are exactly a lattice basis
    // of the integer solutions.
    let m = rows.len();
    let b: Vec<Vec<Z>> = (0..ncols)
        .map(|c| (0..m).map(|r| rows[r][c].clone()).collect())
        .collect();
    let (h, u) = hermite_with_transform(&b);
    let mut basis = Vec::new();
    for (hr, ur) in h.iter().zip(&u) {
        if hr.iter().all(|x| x.is_zero()) {
            basis.push(ur.clone());
        }
    }
    basis
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn det(mat: &[Vec<Z>]) -> Z {
    let n = mat.len();
    if n == 0 {
        return Z::one();
    }
    let mut m: Vec<Vec<Z>> = mat.to_vec();
    let mut sign = Z::one();
    let mut prev = Z::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Z::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// The simplest rational in the closed interval `[lo, hi]` (endpoints in
/// either order): the unique value of smallest denominator, found by
/// descending the interval's shared continued fraction. Zero-width
/// intervals return the endpoint itself.
///
/// This is the right snap for statistically noisy estimates: given a
/// confidence interval, it returns the simplest hypothesis the data does
/// not exclude, where a best-under-denominator-bound approximation of the
/// point estimate would faithfully reproduce the noise instead.
pub fn simplest_in_interval(lo: f64, hi: f64) -> Q {
    assert!(lo.is_finite() && hi.is_finite(), "cannot snap a non-finite float");
    let (a, b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let a = Q::from_float(a).expect("finite float");
    let b = Q::from_float(b).expect("finite float");
    if a <= Q::zero() && Q::zero() <= b {
        return Q::zero();
    }
    if b < Q::zero() {
        return -simplest_positive(-b, -a);
    }
    simplest_positive(a, b)
}

/// Simplest rational in `[lo, hi]` for `0 < lo ≤ hi`.
fn simplest_positive(lo: Q, hi: Q) -> Q {
    let c = lo.ceil();
    if c <= hi {
        return c;
    }
    // No integer inside: recurse on the reciprocal fractional interval
    // (reversed), exactly the next continued-fraction digit.
    let i = lo.floor();
    let rec = simplest_positive((&hi - &i).recip(), (&lo - &i).recip());
    i + rec.recip()
}

/// Best rational approximation to `x` with denominator at most `max_den`,
/// by continued fractions (with the closing semiconvergent). Returns the
/// approximation and the absolute error `|x - p/q|` as f64.
pub fn approx_rational(x: f64, max_den: u64) -> (Q, f64) {
    assert!(x.is_finite(), "cannot snap a non-finite float");
    assert!(max_den >= 1);
    let exact = Q::from_float(x).expect("finite float");
    if exact.denom() <= &Z::from(max_den) {
        return (exact, 0.0);
    }
    // Continued-fraction convergents p/q of |x|.
    let neg = x < 0.0;
    let mut frac = exact.abs();
    let (mut p0, mut q0) = (Z::one(), Z::zero());
    let (mut p1, mut q1) = (frac.to_integer(), Z::one());
    frac -= Q::from_integer(p1.clone());
    let bound = Z::from(max_den);
    loop {
        if frac.is_zero() {
            break;
        }
        frac = frac.recip();
        let a = frac.to_integer();
        frac -= Q::from_integer(a.clone());
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if q2 > bound {
            // Largest semiconvergent within the bound, if it beats p1/q1.
            let k = (&bound - &q0) / &q1;
            if !k.is_zero() {
                let ps = &k * &p1 + &p0;
                let qs = &k * &q1 + &q0;
                let cand = Q::new(ps, qs);
                let best = Q::new(p1.clone(), q1.clone());
                let target = exact.abs();
                if (&cand - &target).abs() < (&best - &target).abs() {
                    p1 = cand.numer().clone();
                    q1 = cand.denom().clone();
                }
            }
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    let mut r = Q::new(p1, q1);
    if neg {
        r = -r;
    }
    let err = f64_of_rational(&(&r - &exact)).abs();
    (r, err)
}

/// Lossless f64 → rational conversion for finite floats.
pub fn rational_of_f64(x: f64) -> Q {
    Q::from_float(x).expect("finite float")
}

/// Integer → f64 (∞ on overflow, which the callers treat as unbounded).
pub fn f64_of_integer(z: &Z) -> f64 {
    bigint_to_f64(z)
}

/// Rational → f64, accurate to one ulp for the magnitudes used here.
pub fn f64_of_rational(x: &Q) -> f64 {
    // num_rational has no direct conversion for BigRational; go through
    // a quotient of f64-convertible parts, rescaling if the parts overflow.
    let n = x.numer();
    let d = x.denom();
    let nf = bigint_to_f64(n);
    let df = bigint_to_f64(d);
    if nf.is_finite() && df.is_finite() && df != 0.0 {
        return nf / df;
    }
    // Fall back to a scaled division for extreme magnitudes.
    let shift = (n.bits().max(d.bits()) as i64 - 900).max(0) as u64;
    let nf = bigint_to_f64(&(n >> shift));
    let df = bigint_to_f64(&(d >> shift));
    nf / df
}

fn bigint_to_f64(n: &Z) -> f64 {
    // BigInt implements ToPrimitive.
    num_traits::ToPrimitive::to_f64(n).unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x, 1)).collect()
    }

    #[test]
    fn rank_and_solve() {
        let rows = vec![qv(&[1, 2, 3]), qv(&[2, 4, 6]), qv(&[0, 1, 1])];
        assert_eq!(rank(&rows), 2);
        let x = solve(&rows, &[q(6, 1), q(12, 1), q(2, 1)]).unwrap();
        for (r, b) in rows.iter().zip([q(6, 1), q(12, 1), q(2, 1)]) {
            assert_eq!(dot_q(r, &x), b);
        }
        assert!(solve(&[qv(&[1, 1]), qv(&[1, 1])], &[q(0, 1), q(1, 1)]).is_none());
    }

    #[test]
    fn kernel_dimensions() {
        let rows = vec![qv(&[1, 1, 1])];
        let k = kernel(&rows, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(dot_q(&rows[0], v).is_zero());
        }
    }

    #[test]
    fn integer_kernel_is_saturated() {
        // ker of [2 4] over Q is spanned by (2, -1); the integer kernel
        // must be generated by (2, -1) itself (not (4, -2)).
        let rows = vec![vec![z(2), z(4)]];
        let k = integer_kernel(&rows, 2);
        assert_eq!(k.len(), 1);
        let v = primitive(&k[0]);
        assert_eq!(v.iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![z(2), z(1)]);
        // And a saturation case: x + 2y + 4z = 0 has primitive solutions.
        let rows = vec![vec![z(1), z(2), z(4)]];
        let k = integer_kernel(&rows, 3);
        assert_eq!(k.len(), 2);
        // (0, 2, -1) and (2, -1, 0) generate; check gcd of all 2x2 minors
        // of the basis matrix is 1 (saturated lattice).
        let m00 = &k[0][0] * &k[1][1] - &k[0][1] * &k[1][0];
        let m01 = &k[0][0] * &k[1][2] - &k[0][2] * &k[1][0];
        let m12 = &k[0][1] * &k[1][2] - &k[0][2] * &k[1][1];
        let g = m00.gcd(&m01).gcd(&m12);
        assert_eq!(g, z(1));
    }

    #[test]
    fn determinant() {
        let m = vec![vec![z(2), z(0)], vec![z(0), z(3)]];
        assert_eq!(det(&m), z(6));
        let m = vec![
            vec![z(1), z(2), z(3)],
            vec![z(4), z(5), z(6)],
            vec![z(7), z(8), z(9)],
        ];
        assert_eq!(det(&m), z(0));
        let m = vec![vec![z(0), z(1)], vec![z(1), z(0)]];
        assert_eq!(det(&m), z(-1));
    }

    #[test]
    fn snapping() {
        let (r, err) = approx_rational(0.5, 1 << 20);
        assert_eq!(r, q(1, 2));
        assert_eq!(err, 0.0);
        let (r, _) = approx_rational(1.0 / 3.0 + 1e-13, 1 << 20);
        assert_eq!(r, q(1, 3));
        let (r, _) = approx_rational(-2.25, 8);
        assert_eq!(r, q(-9, 4));
        let third: f64 = 1.0 / 3.0;
        let (r, err) = approx_rational(third, u64::MAX);
        // Exact binary rational of the float: zero snap error.
        assert_eq!(err, 0.0);
        assert_eq!(f64_of_rational(&r), third);
    }

    #[test]
    fn rational_float_roundtrip() {
        for &x in &[0.0, 1.5, -7.25, 1e-9, 3.141592653589793] {
            assert_eq!(f64_of_rational(&rational_of_f64(x)), x);
        }
    }

    #[test]
    fn simplest_rational_in_an_interval() {
        assert_eq!(simplest_in_interval(0.32, 0.34), q(1, 3));
        assert_eq!(simplest_in_interval(-0.34, -0.32), q(-1, 3));
        // A noisy estimate of -1 keeps -1 as long as the interval holds it.
        assert_eq!(simplest_in_interval(-1.00002, -0.99998), q(-1, 1));
        // ... and excludes it once the interval does.
        let r = simplest_in_interval(-0.999996, -0.999980);
        assert!(r != q(-1, 1) && r < q(-99, 100));
        // Anything straddling zero snaps to zero.
        assert_eq!(simplest_in_interval(-0.1, 0.2), q(0, 1));
        // Endpoint order does not matter; integers win over fractions.
        assert_eq!(simplest_in_interval(2.17, 1.93), q(2, 1));
        assert_eq!(simplest_in_interval(2.15, 2.17), q(13, 6));
        // Degenerate interval: the endpoint itself (as an exact float).
        assert_eq!(simplest_in_interval(0.5, 0.5), q(1, 2));
    }
}
