//! Finite-section positivity certificates.

use crate::error::{Error, Result};
use crate::kernel::{cnp_row_function, diagonal_coeffs, KernelSpec, PointSet};
use crate::series::{Series, VectorSeries};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub const DEFAULT_PSD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }

    pub fn and(self, other: Verdict) -> Verdict {
        Verdict::from_bool(self.passed() && other.passed())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsdReport {
    pub dimension: usize,
    pub min_eigenvalue: f64,
    pub trace: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

/// Smallest eigenvalue test: pass iff `min >= -tol * max(1, trace)`.
pub fn psd_check(m: &DMatrix<Complex64>, tol: f64) -> Result<PsdReport> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: m.ncols() });
    }
    for i in 0..n {
        for j in 0..=i {
            let a = m[(i, j)];
            let b = m[(j, i)].conj();
            let dev = (a - b).norm();
            if dev > 1e-12 * a.norm().max(b.norm()).max(1.0) {
                return Err(Error::NotHermitian { row: i, col: j, deviation: dev });
            }
        }
    }
    let sym = (m + m.adjoint()).scale(0.5);
    let trace: f64 = (0..n).map(|i| sym[(i, i)].re).sum();
    let min_eigenvalue = if n == 0 {
        0.0
    } else {
        sym.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
    };
    let verdict = Verdict::from_bool(min_eigenvalue >= -tol * trace.max(1.0));
    Ok(PsdReport { dimension: n, min_eigenvalue, trace, tolerance: tol, verdict })
}

/// Builds `[f(i, j)]` from the lower triangle, filling the upper by conjugation.
pub fn hermitian_from<F>(n: usize, mut f: F) -> Result<DMatrix<Complex64>>
where
    F: FnMut(usize, usize) -> Result<Complex64>,
{
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let v = f(i, j)?;
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
        m[(i, i)].im = 0.0;
    }
    Ok(m)
}

fn same_space(k: &KernelSpec, s: &KernelSpec, pts: &PointSet) -> Result<()> {
    if k.dimension != s.dimension {
        return Err(Error::DimensionMismatch { expected: k.dimension, found: s.dimension });
    }
    if pts.dimension != k.dimension {
        return Err(Error::DimensionMismatch { expected: k.dimension, found: pts.dimension });
    }
    Ok(())
}

/// `[k(z_i, z_j) / s(z_i, z_j)]`.
pub fn quotient_kernel_psd(k: &KernelSpec, s: &KernelSpec, pts: &PointSet, tol: f64) -> Result<PsdReport> {
    same_space(k, s, pts)?;
    let m = hermitian_from(pts.len(), |i, j| {
        let sv = s.eval(&pts.points[i], &pts.points[j])?;
        if sv.norm() < 1e-300 {
            return Err(Error::DivisionByZero(i, j));
        }
        Ok(k.eval(&pts.points[i], &pts.points[j])? / sv)
    })?;
    psd_check(&m, tol)
}

/// `[A^2 k(z_i, z_j) - <phi(z_i), phi(z_j)> s(z_i, z_j)]`.
pub fn multiplier_norm_cert(
    phi: &VectorSeries,
    s: &KernelSpec,
    k: &KernelSpec,
    pts: &PointSet,
    a: f64,
    tol: f64,
) -> Result<PsdReport> {
    if !(a > 0.0) {
        return Err(Error::InvalidArgument(format!("multiplier bound A = {a} must be positive")));
    }
    same_space(k, s, pts)?;
    let vals: Vec<Vec<Complex64>> = pts.points.iter().map(|z| phi.eval(z)).collect::<Result<_>>()?;
    let m = hermitian_from(pts.len(), |i, j| {
        let zi = &pts.points[i];
        let zj = &pts.points[j];
        let inner: Complex64 = vals[i].iter().zip(&vals[j]).map(|(x, y)| x * y.conj()).sum();
        Ok(k.eval(zi, zj)? * (a * a) - inner * s.eval(zi, zj)?)
    })?;
    psd_check(&m, tol)
}

/// Deviation of `h - sum_n u_n M_{u_n}^* h` from the constant `h(0)`.
pub fn projection_identity_check(s: &KernelSpec, h: &Series, order: usize) -> Result<f64> {
    if h.dim() != 1 || s.dimension != 1 {
        return Err(Error::NotUnivariate);
    }
    if h.order() > order {
        return Err(Error::OrderMismatch(h.order(), order));
    }
    let row = cnp_row_function(s, order, 1e-14)?;
    let c = diagonal_coeffs(s, order)?;
    let (b, c) = (&row.b.values, &c.values);
    let mut worst = 0.0f64;
    for (p, hp) in h.coeffs().iter().enumerate() {
        // coefficient of sum_n u_n M_{u_n}^* h at degree p
        let factor: f64 = (1..=p).map(|n| b[n] * c[p - n]).sum::<f64>() / c[p];
        let residual = hp - hp * factor;
        let target = if p == 0 { *hp } else { Complex64::new(0.0, 0.0) };
        worst = worst.max((residual - target).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{gram_matrix, Domain};
    use crate::rng::{complex_normal, trial_rng};
    use nalgebra::dmatrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn indefinite_two_by_two_fails() {
        let m = dmatrix![c(1.0, 0.0), c(2.0, 0.0); c(2.0, 0.0), c(1.0, 0.0)];
        let r = psd_check(&m, DEFAULT_PSD_TOL).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!((r.min_eigenvalue + 1.0).abs() < 1e-14);
    }

    #[test]
    fn identity_passes() {
        let m = DMatrix::<Complex64>::identity(5, 5);
        let r = psd_check(&m, DEFAULT_PSD_TOL).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!((r.min_eigenvalue - 1.0).abs() < 1e-14);
        assert_eq!(r.trace, 5.0);
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let m = dmatrix![c(1.0, 0.0), c(2.0, 0.0); c(0.0, 0.0), c(1.0, 0.0)];
        assert!(matches!(psd_check(&m, 1e-10), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn szego_gram_small_cases() {
        let pts = PointSet::disc(&[c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        let g = gram_matrix(&KernelSpec::szego(), &pts).unwrap();
        assert_eq!(g[(0, 0)], c(1.0, 0.0));
        assert_eq!(g[(0, 1)], c(1.0, 0.0));
        assert!((g[(1, 1)] - c(4.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn every_family_gram_is_psd() {
        let specs = vec![
            KernelSpec::szego(),
            KernelSpec::bergman(0.0).unwrap(),
            KernelSpec::bergman(1.0).unwrap(),
            KernelSpec::dirichlet(0.5).unwrap(),
            KernelSpec::drury_arveson(2).unwrap(),
            KernelSpec::drury_arveson(3).unwrap(),
            KernelSpec::hardy_ball(2).unwrap(),
            KernelSpec::hardy_polydisc(2).unwrap(),
            KernelSpec::power_of(KernelSpec::szego(), 1.5).unwrap(),
        ];
        for (i, s) in specs.iter().enumerate() {
            let pts = PointSet::random(s.domain(), s.dimension, 20, 0.9, i as u64).unwrap();
            let g = gram_matrix(s, &pts).unwrap();
            let r = psd_check(&g, 1e-12).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "{}: {r:?}", s.name());
        }
    }

    #[test]
    fn schur_product_of_szego_grams_minus_gram_is_psd() {
        // s^2 - s = s (s - 1), a product of positive kernels
        for seed in 0..10 {
            let pts = PointSet::random(Domain::Ball, 1, 15, 0.9, seed).unwrap();
            let g = gram_matrix(&KernelSpec::szego(), &pts).unwrap();
            let m = g.component_mul(&g) - &g;
            assert_eq!(psd_check(&m, DEFAULT_PSD_TOL).unwrap().verdict, Verdict::Pass);
        }
    }

    #[test]
    fn quotient_examples() {
        let pts = PointSet::random(Domain::Ball, 1, 20, 0.9, 11).unwrap();
        let s = KernelSpec::szego();
        let s2 = KernelSpec::power_of(s.clone(), 2.0).unwrap();
        assert!(quotient_kernel_psd(&s2, &s, &pts, DEFAULT_PSD_TOL).unwrap().verdict.passed());
        let ones = quotient_kernel_psd(&s, &s, &pts, DEFAULT_PSD_TOL).unwrap();
        assert!(ones.verdict.passed());
        assert!((ones.trace - 20.0).abs() < 1e-12);
        let b = KernelSpec::bergman(0.0).unwrap();
        let d = KernelSpec::dirichlet(0.5).unwrap();
        for seed in 0..5 {
            let pts = PointSet::random(Domain::Ball, 1, 15, 0.9, 100 + seed).unwrap();
            assert!(quotient_kernel_psd(&b, &d, &pts, DEFAULT_PSD_TOL).unwrap().verdict.passed());
        }
        // the reverse quotient is not positive
        let pts = PointSet::disc(&[c(0.0, 0.0), c(0.9, 0.0)]).unwrap();
        assert!(!quotient_kernel_psd(&s, &s2, &pts, DEFAULT_PSD_TOL).unwrap().verdict.passed());
    }

    #[test]
    fn multiplier_cert_examples() {
        let s = KernelSpec::szego();
        let pts = PointSet::random(Domain::Ball, 1, 20, 0.9, 5).unwrap();
        let one = VectorSeries::scalar(Series::univariate_real(&[1.0]));
        assert!(multiplier_norm_cert(&one, &s, &s, &pts, 1.0, DEFAULT_PSD_TOL).unwrap().verdict.passed());
        assert!(!multiplier_norm_cert(&one, &s, &s, &pts, 0.9, DEFAULT_PSD_TOL).unwrap().verdict.passed());
        let z = VectorSeries::scalar(Series::univariate_real(&[0.0, 1.0]));
        assert!(multiplier_norm_cert(&z, &s, &s, &pts, 1.0, DEFAULT_PSD_TOL).unwrap().verdict.passed());
        let two = VectorSeries::scalar(Series::univariate_real(&[2.0]));
        assert!(!multiplier_norm_cert(&two, &s, &s, &pts, 1.0, DEFAULT_PSD_TOL).unwrap().verdict.passed());
        // monotone in A
        let f = VectorSeries::scalar(Series::univariate_real(&[0.5, 0.5]));
        let mut passed = false;
        for a in [0.5, 0.8, 0.99, 1.0, 1.2, 2.0] {
            let ok = multiplier_norm_cert(&f, &s, &s, &pts, a, DEFAULT_PSD_TOL).unwrap().verdict.passed();
            assert!(ok || !passed, "pass at a smaller A but fail at {a}");
            passed |= ok;
        }
        assert!(passed);
    }

    #[test]
    fn projection_identity_cases() {
        let s = KernelSpec::szego();
        let z3 = Series::univariate_real(&[0.0, 0.0, 0.0, 1.0]);
        assert_eq!(projection_identity_check(&s, &z3, 10).unwrap(), 0.0);
        let konst = Series::univariate_real(&[2.5]);
        let d = KernelSpec::dirichlet(0.5).unwrap();
        assert_eq!(projection_identity_check(&d, &konst, 10).unwrap(), 0.0);
        let mut rng = trial_rng(9, 0);
        let h = Series::univariate((0..=50).map(|_| complex_normal(&mut rng)).collect());
        assert!(projection_identity_check(&d, &h, 50).unwrap() < 1e-10);
    }
}
