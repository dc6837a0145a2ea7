//! The normalized `D_alpha` reproducing kernel at the origin,
//! `s_1(x) = sum_n c_n x^n` with `1/c_n = 1 + n * n! Gamma(alpha+1) / Gamma(n+alpha+1)`.
//!
//! Close to `x = 1` the series converges far too slowly to sum directly.
//! There `c_n` is replaced by its large-`n` expansion `sum_i d_i n^{-sigma_i}`,
//! whose generating function is a finite combination of polylogarithms, and
//! only the remainder `e_n = c_n - sum_i d_i n^{-sigma_i}` is summed directly.

use crate::error::{Error, Result};
use crate::special::{bernoulli_poly, gamma, PolylogExpansion, POLYLOG_TERMS};
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Coefficients kept for direct summation.
pub const DIRECT_TERMS: usize = 4000;
/// Below this modulus the direct sum is used.
const DIRECT_RADIUS: f64 = 0.98;
/// Largest exponent kept in the asymptotic expansion of `c_n`.
const SIGMA_CUT: f64 = 9.0;
/// Number of remainder terms summed next to the polylogarithms.
const REMAINDER_TERMS: usize = 1500;

/// `c_n` for `n = 0..=order`.
pub fn dalpha_coeffs(alpha: f64, order: usize) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    let mut out = Vec::with_capacity(order + 1);
    out.push(1.0);
    // ratio = n! Gamma(alpha+1) / Gamma(n+alpha+1) = prod_{j<=n} j / (j + alpha)
    let mut ratio = 1.0;
    for n in 1..=order {
        ratio *= n as f64 / (n as f64 + alpha);
        out.push(1.0 / (1.0 + n as f64 * ratio));
    }
    Ok(out)
}

pub fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    Ok(())
}

/// Direct partial sum `sum_{n<=N} c_n z^n` with a bound on the omitted tail.
pub fn s1_eval(alpha: f64, z: Complex64, order: usize) -> Result<(Complex64, f64)> {
    let c = dalpha_coeffs(alpha, order + 1)?;
    let r = z.norm();
    if r >= 1.0 {
        return Err(Error::PointOutsideDomain(format!("{z}")));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for cn in c[..=order].iter().rev() {
        acc = acc * z + cn;
    }
    // c_n is decreasing, so the tail is dominated by a geometric series.
    let tail = c[order + 1] * r.powi(order as i32 + 1) / (1.0 - r);
    if tail > 1e-8 * acc.norm() {
        return Err(Error::TailTooLarge { tail, value: acc.norm() });
    }
    Ok((acc, tail))
}

/// Accelerated evaluator for `s_1` and `s_1'` on the closed disc minus `{1}`.
#[derive(Debug, Clone)]
pub struct S1 {
    alpha: f64,
    coeffs: Vec<f64>,
    /// Exponents `sigma_i` and weights `d_i` of the asymptotic part.
    terms: Vec<(f64, f64)>,
    value_poly: Vec<f64>,
    deriv_poly: Vec<f64>,
    value_sing: Vec<(f64, PolylogExpansion)>,
    deriv_sing: Vec<(f64, PolylogExpansion)>,
    /// `e_n` for `n = 0..=REMAINDER_TERMS` (`e_0 = 0`).
    remainder: Vec<f64>,
}

/// Power series `exp(q)` with `q_0 = 0`, truncated at `q.len() - 1`.
fn series_exp(q: &[f64]) -> Vec<f64> {
    let n = q.len();
    let mut p = vec![0.0; n];
    p[0] = 1.0;
    for m in 1..n {
        let mut acc = 0.0;
        for k in 1..=m {
            acc += k as f64 * q[k] * p[m - k];
        }
        p[m] = acc / m as f64;
    }
    p
}

impl S1 {
    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let coeffs = dalpha_coeffs(alpha, DIRECT_TERMS)?;
        let terms = asymptotic_terms(alpha);

        let mut value_poly = vec![0.0; POLYLOG_TERMS];
        let mut deriv_poly = vec![0.0; POLYLOG_TERMS];
        let mut value_sing = Vec::new();
        let mut deriv_sing = Vec::new();
        for &(sigma, d) in &terms {
            let v = PolylogExpansion::new(sigma);
            let w = PolylogExpansion::new(sigma - 1.0);
            for k in 0..POLYLOG_TERMS {
                value_poly[k] += d * v.coeffs[k];
                deriv_poly[k] += d * w.coeffs[k];
            }
            value_sing.push((d, v));
            deriv_sing.push((d, w));
        }

        let mut remainder = vec![0.0; REMAINDER_TERMS + 1];
        for (n, e) in remainder.iter_mut().enumerate().skip(1) {
            let nf = n as f64;
            let asym: f64 = terms.iter().map(|&(s, d)| d * nf.powf(-s)).sum();
            *e = coeffs[n] - asym;
        }
        Ok(S1 { alpha, coeffs, terms, value_poly, deriv_poly, value_sing, deriv_sing, remainder })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `c_n` for `n <= DIRECT_TERMS`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Exponents and weights of the large-`n` expansion of `c_n`.
    pub fn asymptotic_terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    fn direct(&self, x: Complex64) -> (Complex64, Complex64) {
        let r = x.norm();
        let n = if r == 0.0 {
            1
        } else {
            ((-39.0 / r.ln()).ceil() as usize).clamp(2, DIRECT_TERMS)
        };
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for k in (1..=n).rev() {
            v = v * x + self.coeffs[k];
            d = d * x + self.coeffs[k] * k as f64;
        }
        (v * x + 1.0, d)
    }

    /// Value and derivative from `x` and `mu = ln x`.
    fn accelerated(&self, x: Complex64, mu: Complex64) -> (Complex64, Complex64) {
        let log_neg_mu = (-mu).ln();
        let mut v = Complex64::new(0.0, 0.0);
        let mut xd = Complex64::new(0.0, 0.0);
        for k in (0..POLYLOG_TERMS).rev() {
            v = v * mu + self.value_poly[k];
            xd = xd * mu + self.deriv_poly[k];
        }
        for (d, e) in &self.value_sing {
            v += *d * e.singular_part(mu, log_neg_mu);
        }
        for (d, e) in &self.deriv_sing {
            xd += *d * e.singular_part(mu, log_neg_mu);
        }
        let mut rv = Complex64::new(0.0, 0.0);
        let mut rd = Complex64::new(0.0, 0.0);
        for n in (1..=REMAINDER_TERMS).rev() {
            rv = rv * x + self.remainder[n];
            rd = rd * x + self.remainder[n] * n as f64;
        }
        (1.0 + v + rv * x, (xd + rd * x) / x)
    }

    /// `(s_1(x), s_1'(x))` without domain checks; `|x| <= 1`, `x != 1`.
    pub fn eval_unchecked(&self, x: Complex64) -> (Complex64, Complex64) {
        if x.norm() < DIRECT_RADIUS {
            self.direct(x)
        } else {
            self.accelerated(x, x.ln())
        }
    }

    pub fn value(&self, x: Complex64) -> Complex64 {
        self.eval_unchecked(x).0
    }

    pub fn eval(&self, x: Complex64) -> Result<(Complex64, Complex64)> {
        if x.norm() > 1.0 + 1e-15 || (x - 1.0).norm() < 1e-300 {
            return Err(Error::PointOutsideDomain(format!("{x}")));
        }
        Ok(self.eval_unchecked(x))
    }

    /// Value and derivative at the real point `1 - delta`, keeping full
    /// relative precision in `delta`.
    pub fn at_one_minus(&self, delta: f64) -> (f64, f64) {
        let x = Complex64::new(1.0 - delta, 0.0);
        let (v, d) = if delta > 1.0 - DIRECT_RADIUS {
            self.direct(x)
        } else {
            self.accelerated(x, Complex64::new((-delta).ln_1p(), 0.0))
        };
        (v.re, d.re)
    }

    /// Value and derivative at `x = 1 - h`, accurate for small `|h|`; `|1 - h| <= 1`, `h != 0`.
    pub fn eval_one_minus(&self, h: Complex64) -> (Complex64, Complex64) {
        let x = 1.0 - h;
        if x.norm() < DIRECT_RADIUS {
            return self.direct(x);
        }
        self.accelerated(x, ln_one_minus(h))
    }

    /// `f = 1 - 1/s_1` and `f' = s_1'/s_1^2`.
    pub fn contractive(&self, x: Complex64) -> (Complex64, Complex64) {
        let (s, ds) = self.eval_unchecked(x);
        (1.0 - 1.0 / s, ds / (s * s))
    }
}

/// `ln(1 - h)` without cancellation for small `h`.
pub fn ln_one_minus(h: Complex64) -> Complex64 {
    // |1 - h|^2 = 1 - 2 Re h + |h|^2
    let re = 0.5 * (h.norm_sqr() - 2.0 * h.re).ln_1p();
    Complex64::new(re, (-h.im).atan2(1.0 - h.re))
}

/// Expansion of `c_n` in decreasing powers `n^{-sigma}`, `sigma < SIGMA_CUT`.
fn asymptotic_terms(alpha: f64) -> Vec<(f64, f64)> {
    // ln[Gamma(n+1)/Gamma(n+1+alpha)] = -alpha ln n + sum_k beta_k n^{-k}
    let jmax = SIGMA_CUT.ceil() as usize + 1;
    let mut beta = vec![0.0; jmax + 1];
    for (k, b) in beta.iter_mut().enumerate().skip(1) {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        *b = sign * (bernoulli_poly(k + 1, 1.0) - bernoulli_poly(k + 1, 1.0 + alpha)) / (k * (k + 1)) as f64;
    }
    // Q_n = G n^{1-alpha} p(1/n); c_n = sum_{k>=1} (-1)^{k-1} Q_n^{-k}.
    let g = gamma(alpha + 1.0);
    let step = 1.0 - alpha;
    let kmax = (SIGMA_CUT / step).floor() as usize;
    let mut terms: Vec<(f64, f64)> = Vec::new();
    for k in 1..=kmax {
        let q: Vec<f64> = beta.iter().map(|b| -(k as f64) * b).collect();
        let p = series_exp(&q);
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let lead = sign * g.powi(-(k as i32));
        for (j, pj) in p.iter().enumerate() {
            let sigma = k as f64 * step + j as f64;
            if sigma >= SIGMA_CUT {
                break;
            }
            let w = lead * pj;
            match terms.iter_mut().find(|(s, _)| (s - sigma).abs() < 1e-9) {
                Some(t) => t.1 += w,
                None => terms.push((sigma, w)),
            }
        }
    }
    terms.retain(|(_, d)| *d != 0.0);
    terms.sort_by(|a, b| a.0.total_cmp(&b.0));
    terms
}

/// Evaluators are costly to build, so one per `alpha` is shared.
pub fn shared(alpha: f64) -> Result<Arc<S1>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<S1>>>> = OnceLock::new();
    check_alpha(alpha)?;
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().expect("s1 cache poisoned").get(&alpha.to_bits()) {
        return Ok(s.clone());
    }
    let built = Arc::new(S1::new(alpha)?);
    cache.lock().expect("s1 cache poisoned").insert(alpha.to_bits(), built.clone());
    Ok(built)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn beta_oracle(alpha: f64, n: usize) -> f64 {
        // 1/c_n = 1 + n^2 B(n, alpha + 1)
        let b = statrs::function::beta::beta(n as f64, alpha + 1.0);
        1.0 / (1.0 + (n * n) as f64 * b)
    }

    #[test]
    fn coefficients_match_beta_function() {
        for &alpha in &[0.1, 0.25, 0.5, 0.75, 0.9] {
            let c = dalpha_coeffs(alpha, 120).unwrap();
            assert_eq!(c[0], 1.0);
            assert_relative_eq!(c[1], (alpha + 1.0) / (alpha + 2.0), max_relative = 1e-15);
            for n in [2usize, 3, 7, 40, 120] {
                assert_relative_eq!(c[n], beta_oracle(alpha, n), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn rejects_alpha_outside_unit_interval() {
        assert!(matches!(dalpha_coeffs(1.0, 3), Err(Error::AlphaOutOfRange(_))));
        assert!(matches!(S1::new(0.0), Err(Error::AlphaOutOfRange(_))));
    }

    #[test]
    fn asymptotic_expansion_tracks_coefficients() {
        for &alpha in &[0.25, 0.5, 0.75] {
            let s = S1::new(alpha).unwrap();
            for &n in &[200usize, 1000, 3000] {
                let asym: f64 = s.terms.iter().map(|&(sg, d)| d * (n as f64).powf(-sg)).sum();
                let err = (asym - s.coeffs[n]).abs();
                assert!(err < 1e-14 * s.coeffs[n] + (n as f64).powf(-SIGMA_CUT) * 1e3, "alpha={alpha} n={n} err={err}");
            }
        }
    }

    fn brute(alpha: f64, x: Complex64, n: usize) -> (Complex64, Complex64) {
        let c = dalpha_coeffs(alpha, n).unwrap();
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for k in (0..=n).rev() {
            v = v * x + c[k];
        }
        for k in (1..=n).rev() {
            d = d * x + c[k] * k as f64;
        }
        (v, d)
    }

    #[test]
    fn accelerated_matches_brute_force() {
        for &alpha in &[0.25, 0.5, 0.75] {
            let s = S1::new(alpha).unwrap();
            // The expansion weights grow as alpha -> 1, costing digits to cancellation.
            let tol = if alpha > 0.6 { 1e-10 } else { 1e-12 };
            for &(r, t) in &[(0.5, 0.4), (0.9, -2.5), (0.985, 0.0), (0.99, 1.0), (0.995, -2.5), (0.999, 0.01), (0.999, 3.1)] {
                let x = Complex64::from_polar(r, t);
                let (v, d) = s.eval(x).unwrap();
                let (bv, bd) = brute(alpha, x, 60_000);
                assert!((v - bv).norm() < tol * bv.norm(), "alpha={alpha} x={x} v={v} brute={bv}");
                assert!((d - bd).norm() < 10.0 * tol * bd.norm(), "alpha={alpha} x={x} d={d} brute={bd}");
            }
        }
    }

    #[test]
    fn continuity_across_the_switch_radius() {
        let s = S1::new(0.5).unwrap();
        let inside = s.direct(Complex64::from_polar(DIRECT_RADIUS, 0.7));
        let x = Complex64::from_polar(DIRECT_RADIUS, 0.7);
        let outside = s.accelerated(x, x.ln());
        assert!((inside.0 - outside.0).norm() < 1e-13);
        assert!((inside.1 - outside.1).norm() < 1e-12);
    }

    #[test]
    fn one_minus_matches_complex_path_and_blows_up() {
        let s = S1::new(0.5).unwrap();
        let (v, d) = s.at_one_minus(1e-3);
        let (cv, cd) = s.eval(Complex64::new(1.0 - 1e-3, 0.0)).unwrap();
        assert_relative_eq!(v, cv.re, max_relative = 1e-12);
        assert_relative_eq!(d, cd.re, max_relative = 1e-12);
        // s_1(1 - delta) grows like delta^{-alpha}
        let (a, _) = s.at_one_minus(1e-8);
        let (b, _) = s.at_one_minus(1e-10);
        assert_relative_eq!(b / a, 10.0, max_relative = 1e-2);
    }

    #[test]
    fn one_minus_complex_matches_plain_evaluation() {
        let s = S1::new(0.5).unwrap();
        for h in [Complex64::new(0.3, 0.1), Complex64::new(0.01, -0.005), Complex64::new(1e-3, 1e-3)] {
            let (a, da) = s.eval_one_minus(h);
            let (b, db) = s.eval_unchecked(1.0 - h);
            assert!((a - b).norm() < 1e-12 * b.norm() && (da - db).norm() < 1e-11 * db.norm());
        }
        let h = Complex64::new(1e-9, 0.0);
        let (a, _) = s.eval_one_minus(h);
        assert!((a.re - s.at_one_minus(1e-9).0).abs() < 1e-13 * a.re);
        let l = ln_one_minus(Complex64::new(1e-12, 2e-12));
        assert!((l - Complex64::new(-1e-12 + 1.5e-24, -2e-12 - 2e-24)).norm() < 2e-27);
    }

    #[test]
    fn direct_eval_reports_tail() {
        let (v, tail) = s1_eval(0.5, Complex64::new(0.5, 0.0), 80).unwrap();
        let s = S1::new(0.5).unwrap();
        assert!((v - s.value(Complex64::new(0.5, 0.0))).norm() < 1e-14);
        assert!(tail < 1e-20);
        assert!(matches!(s1_eval(0.5, Complex64::new(0.99, 0.0), 100), Err(Error::TailTooLarge { .. })));
    }
}
