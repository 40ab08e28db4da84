//! Complex roots of univariate polynomials via the Aberth–Ehrlich method.
//!
//! The callers only need generic, well-separated roots of small polynomials
//! (degrees up to a few dozen): slice polynomials of hypersurface samples
//! and edge polynomials of Newton-polygon steps. Simultaneous Aberth
//! iteration plus a short Newton polish per root is accurate and
//! dependency-free at that scale.

use num_complex::Complex64;

/// Evaluate `p` and `p'` at `z` by one Horner pass.
/// Coefficients are ascending: `p(z) = Σ coeffs[k] z^k`.
pub(crate) fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All roots of `Σ coeffs[k] z^k`, with multiplicity, in deterministic
/// (but unspecified) order. Returns an empty vector for constant
/// polynomials. Leading zero coefficients are ignored; zero roots from a
/// vanishing constant tail are split off exactly.
pub fn roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    // Trim the (numerically exact) zero leading coefficients.
    let mut hi = coeffs.len();
    while hi > 0 && coeffs[hi - 1].norm() == 0.0 {
        hi -= 1;
    }
    if hi <= 1 {
        return Vec::new();
    }
    let mut lo = 0;
    while coeffs[lo].norm() == 0.0 {
        lo += 1;
    }
    let mut out = vec![Complex64::new(0.0, 0.0); lo];
    let c = &coeffs[lo..hi];
    let deg = c.len() - 1;
    if deg == 0 {
        return out;
    }
    // Scale to unit leading coefficient for conditioning.
    let lead = c[deg];
    let monic: Vec<Complex64> = c.iter().map(|&x| x / lead).collect();
    // Cauchy-style inclusion radius.
    let radius = 1.0 + monic.iter().take(deg).map(|x| x.norm()).fold(0.0, f64::max);
    // Deterministic spread of starting points: a circle with an irrational
    // angular offset so no starting point sits on a symmetry axis.
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (deg as f64) + 0.43;
            Complex64::from_polar(radius * 0.9, theta)
        })
        .collect();
    for _ in 0..200 {
        let mut max_step = 0.0f64;
        for i in 0..deg {
            let (p, dp) = eval_with_derivative(&monic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let newton = if dp.norm() > 0.0 { p / dp } else { Complex64::new(1e-12, 0.0) };
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..deg {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 0.0 {
                        sum += d.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * sum;
            let step = if denom.norm() > 1e-300 { newton / denom } else { newton };
            z[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        if max_step < 1e-15 {
            break;
        }
    }
    // Newton polish, a few guarded steps per root.
    for zi in z.iter_mut() {
        for _ in 0..4 {
            let (p, dp) = eval_with_derivative(&monic, *zi);
            if dp.norm() == 0.0 || p.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if step.norm() > 0.5 * (1.0 + zi.norm()) {
                break;
            }
            *zi -= step;
        }
    }
    out.extend(z);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted_by_arg(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| {
            (a.re, a.im)
                .partial_cmp(&(b.re, b.im))
                .unwrap()
        });
        v
    }

    #[test]
    fn quadratic_pure_imaginary() {
        // z² + 1
        let r = sorted_by_arg(roots(&[c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]));
        assert_eq!(r.len(), 2);
        assert_abs_diff_eq!(r[0].im, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r[1].im, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r[0].re, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn cube_roots_of_unity() {
        // z³ − 1
        let r = roots(&[c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(r.len(), 3);
        for z in r {
            assert_abs_diff_eq!((z * z * z).re, 1.0, epsilon = 1e-10);
            assert_abs_diff_eq!((z * z * z).im, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn zero_roots_split_exactly() {
        // z³ + z² = z²(z + 1)
        let r = roots(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(r.len(), 3);
        assert_eq!(r[0], c(0.0, 0.0));
        assert_eq!(r[1], c(0.0, 0.0));
        assert_abs_diff_eq!(r[2].re, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn reconstructed_product_matches() {
        // (z − r1)(z − r2)(z − r3)(z − r4) expanded, roots recovered.
        let known = [c(2.0, 1.0), c(-1.5, 0.5), c(0.25, -3.0), c(-0.75, -0.1)];
        let mut coeffs = vec![c(1.0, 0.0)];
        for r in known {
            let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
            for (k, &a) in coeffs.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            coeffs = next;
        }
        let got = roots(&coeffs);
        assert_eq!(got.len(), 4);
        for k in known {
            let nearest = got.iter().map(|z| (z - k).norm()).fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-10, "root {k} missed by {nearest}");
        }
    }

    #[test]
    fn constants_and_degenerate_input() {
        assert!(roots(&[c(3.0, 0.0)]).is_empty());
        assert!(roots(&[]).is_empty());
        assert!(roots(&[c(1.0, 0.0), c(0.0, 0.0)]).is_empty());
    }

    #[test]
    fn high_degree_circle() {
        // z^12 − 1: twelve unit roots.
        let mut coeffs = vec![c(0.0, 0.0); 13];
        coeffs[0] = c(-1.0, 0.0);
        coeffs[12] = c(1.0, 0.0);
        let r = roots(&coeffs);
        assert_eq!(r.len(), 12);
        for z in &r {
            assert_abs_diff_eq!(z.norm(), 1.0, epsilon = 1e-10);
        }
        // All distinct.
        for i in 0..12 {
            for j in 0..i {
                assert!((r[i] - r[j]).norm() > 0.3);
            }
        }
    }
}
