//! The factorization `F = Re(a) Phi_a / (1 - psi_a)` and its certificates.

use super::checks::tail_order;
use super::{check_dims, sarason_function};
use crate::error::{Error, Result};
use crate::kernel::{Domain, KernelSpec, PointSet};
use crate::psd::Verdict;
use crate::rng::{complex_normal, trial_rng};
use crate::series::{Series, VectorSeries};
use crate::space::Space;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use std::f64::consts::PI;

/// Seed of the fixed reconstruction grid in dimension > 1.
const GRID_SEED: u64 = 0x6772_6964;
pub const RECONSTRUCTION_RADIUS: f64 = 0.5;
pub const CONTRACTIVITY_TOL: f64 = 1e-6;
pub const UNIT_NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorOptions {
    /// Truncation order of `psi` and `Phi`; defaults to four times the order of `F`,
    /// raised so the tail is negligible on the reconstruction grid.
    pub order: Option<usize>,
    /// Random `h` for the contractivity margin; 0 skips it.
    pub trials: usize,
    pub test_degree: usize,
    pub seed: u64,
}

impl Default for FactorOptions {
    fn default() -> Self {
        FactorOptions { order: None, trials: 16, test_degree: 20, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificates {
    /// `max ||F(z) - Re(a) Phi(z) / (1 - psi(z))||` over the reconstruction grid.
    pub reconstruction_residual: f64,
    /// Smallest `||h||^2 - ||psi h||^2 - Re(a) ||Phi h||^2` over sampled unit `h`.
    pub contractivity_margin: Option<f64>,
    pub psi_at_base: Complex64,
    /// Largest coefficient of `(V + conj a) R - 1` for the computed reciprocal `R`.
    pub reciprocal_residual: f64,
}

#[derive(Debug, Clone)]
pub struct Factorization {
    pub a: Complex64,
    pub psi: Series,
    pub phi: VectorSeries,
    pub certificates: Certificates,
    /// The factorized function: `F`, or `F_w` when embedded.
    pub f: VectorSeries,
    pub v: Series,
    pub k: KernelSpec,
    pub s: KernelSpec,
    pub embed: Option<Vec<Complex64>>,
}

impl Factorization {
    pub fn order(&self) -> usize {
        self.psi.order()
    }
}

impl Serialize for Factorization {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            a: Complex64,
            psi_coeffs: &'a Series,
            phi_coeffs: &'a VectorSeries,
            certificates: &'a Certificates,
            #[serde(skip_serializing_if = "Option::is_none")]
            embed: &'a Option<Vec<Complex64>>,
        }
        Out {
            a: self.a,
            psi_coeffs: &self.psi,
            phi_coeffs: &self.phi,
            certificates: &self.certificates,
            embed: &self.embed,
        }
        .serialize(ser)
    }
}

/// Fixed 100-point grid of radius 1/2: ten radii by ten angles in one variable,
/// seeded uniform points of the ball or polydisc otherwise.
pub fn reconstruction_grid(k: &KernelSpec) -> Result<PointSet> {
    if k.dimension == 1 {
        let mut pts = Vec::with_capacity(100);
        for i in 1..=10 {
            let r = RECONSTRUCTION_RADIUS * i as f64 / 10.0;
            for j in 0..10 {
                let th = 2.0 * PI * (j as f64 + 0.5 * (i % 2) as f64) / 10.0;
                pts.push(vec![Complex64::from_polar(r, th)]);
            }
        }
        return PointSet::new(Domain::Ball, 1, pts);
    }
    PointSet::random(k.domain(), k.dimension, 100, RECONSTRUCTION_RADIUS, GRID_SEED)
}

fn check_a(a: Complex64) -> Result<()> {
    if !(a.re > 0.0) || !a.im.is_finite() {
        return Err(Error::InvalidArgument(format!("Re a must be positive, got a = {a}")));
    }
    Ok(())
}

fn default_order(f: &VectorSeries, opts: &FactorOptions) -> usize {
    let m = f.order().max(1);
    opts.order.unwrap_or((4 * m).max(tail_order(m, RECONSTRUCTION_RADIUS)))
}

/// Builds `psi_a`, `Phi_a` from a Sarason function `v` of `f`.
fn assemble(
    f: VectorSeries,
    v: Series,
    a: Complex64,
    k: &KernelSpec,
    s: &KernelSpec,
    embed: Option<Vec<Complex64>>,
    opts: &FactorOptions,
) -> Result<Factorization> {
    let n = v.order();
    let f = f.with_order(n);
    let denom = v.add_constant(a.conj());
    let recip = denom.reciprocal()?;
    let reciprocal_residual = denom.reciprocal_residual(&recip)?;
    let psi = v.add_constant(-a).mul(&recip)?;
    let two_recip = recip.scale(Complex64::new(2.0, 0.0));
    let phi = f.map(|c| c.mul(&two_recip))?;
    let psi_at_base = psi.coeffs()[0];
    let mut fact = Factorization {
        a,
        psi,
        phi,
        certificates: Certificates {
            reconstruction_residual: f64::NAN,
            contractivity_margin: None,
            psi_at_base,
            reciprocal_residual,
        },
        f,
        v,
        k: k.clone(),
        s: s.clone(),
        embed,
    };
    fact.certificates.reconstruction_residual = reconstruction_residual(&fact, &reconstruction_grid(k)?)?;
    if opts.trials > 0 {
        let degree = opts.test_degree.min(n / 2);
        let report = contractivity_check(&fact, opts.trials, opts.seed, degree)?;
        fact.certificates.contractivity_margin = Some(report.min_slack);
    }
    Ok(fact)
}

/// `psi_a = (V_F - a)/(V_F + conj a)`, `Phi_a = 2F/(V_F + conj a)` for `Re a > 0`.
pub fn factorize(
    f: &VectorSeries,
    a: Complex64,
    k: &KernelSpec,
    s: &KernelSpec,
    opts: &FactorOptions,
) -> Result<Factorization> {
    check_a(a)?;
    check_dims(k, s, f)?;
    let n = default_order(f, opts);
    let sd = sarason_function(k, s, f, n)?;
    assemble(f.clone(), sd.v, a, k, s, None, opts)
}

/// The `a = 1` factorization of a unit vector, so that `psi(z_0) = 0`.
///
/// With `embed = Some(w)` a function of norm below one is first completed to
/// `F_w = (F, sqrt((1 - ||F||^2)/k(w,w)) k_w)`, whose Sarason function is
/// `V_F + (1 - ||F||^2)(2 s_w - 1)`.
pub fn factorize_unit(
    f: &VectorSeries,
    k: &KernelSpec,
    s: &KernelSpec,
    embed: Option<&[Complex64]>,
    opts: &FactorOptions,
) -> Result<Factorization> {
    check_dims(k, s, f)?;
    let n = default_order(f, opts);
    let sd = sarason_function(k, s, f, n)?;
    let norm = sd.norm_sq.sqrt();
    let one = Complex64::new(1.0, 0.0);
    match embed {
        None => {
            if (norm - 1.0).abs() > UNIT_NORM_TOL {
                return Err(Error::NotUnitNorm(norm));
            }
            assemble(f.clone(), sd.v, one, k, s, None, opts)
        }
        Some(w) => {
            if norm > 1.0 + UNIT_NORM_TOL {
                return Err(Error::NotUnitNorm(norm));
            }
            let gap = (1.0 - sd.norm_sq).max(0.0);
            let kw = k.kernel_series(w, n)?;
            let scale = (gap / k.eval(w, w)?.re).sqrt();
            let mut fw = f.with_order(n);
            fw.push(kw.scale(Complex64::new(scale, 0.0)))?;
            let sw = s.kernel_series(w, n)?;
            let v = sd.v.add(&sw.scale(Complex64::new(2.0 * gap, 0.0)).add_constant(Complex64::new(-gap, 0.0)))?;
            assemble(fw, v, one, k, s, Some(w.to_vec()), opts)
        }
    }
}

/// `max ||F(z) - Re(a) Phi(z)/(1 - psi(z))||` over `grid`.
pub fn reconstruction_residual(fact: &Factorization, grid: &PointSet) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for z in &grid.points {
        let fz = fact.f.eval(z)?;
        let pz = fact.phi.eval(z)?;
        let q = Complex64::new(fact.a.re, 0.0) / (1.0 - fact.psi.eval(z)?);
        let err: f64 = fz.iter().zip(&pz).map(|(x, y)| (x - y * q).norm_sqr()).sum::<f64>().sqrt();
        worst = worst.max(err);
    }
    Ok(worst)
}

/// Random polynomial of total degree `<= degree` with unit norm in `space`.
pub fn random_unit_polynomial(space: &Space, degree: usize, seed: u64, trial: u64) -> Result<Series> {
    let d = space.spec().dimension;
    let mut rng = trial_rng(seed, trial);
    let n = crate::monomial::count_le(d, degree);
    let coeffs: Vec<Complex64> = (0..n).map(|_| complex_normal(&mut rng)).collect();
    let h = Series::from_coeffs(d, degree, coeffs)?;
    let norm = space.norm_sq(&h)?.sqrt();
    Ok(h.scale(Complex64::new(1.0 / norm, 0.0)))
}

#[derive(Debug, Clone, Serialize)]
pub struct ContractivityReport {
    pub trials: usize,
    pub degree: usize,
    pub min_slack: f64,
    /// A unit `h` with slack below `-1e-6`, if any.
    pub witness: Option<Series>,
    pub verdict: Verdict,
}

/// Samples `||h||_s^2 - ||psi h||_s^2 - Re(a) ||Phi h||_k^2` over seeded unit polynomials `h`.
pub fn contractivity_check(fact: &Factorization, trials: usize, seed: u64, degree: usize) -> Result<ContractivityReport> {
    let n = fact.order();
    if 2 * degree > n {
        return Err(Error::OrderMismatch(2 * degree, n));
    }
    let sspace = Space::new(&fact.s, n)?;
    let kspace = Space::new(&fact.k, n)?;
    let slacks = (0..trials)
        .into_par_iter()
        .map(|t| {
            let h = random_unit_polynomial(&sspace, degree, seed, t as u64)?;
            let hn = h.with_order(n);
            let psi_h = sspace.norm_sq(&fact.psi.mul(&hn)?)?;
            let phi_h = kspace.vnorm_sq(&fact.phi.map(|c| c.mul(&hn))?)?;
            Ok((1.0 - psi_h - fact.a.re * phi_h, h))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut min_slack = f64::INFINITY;
    let mut witness = None;
    for (slack, h) in slacks {
        if slack < min_slack {
            min_slack = slack;
            if slack < -CONTRACTIVITY_TOL {
                witness = Some(h);
            }
        }
    }
    if trials == 0 {
        min_slack = 0.0;
    }
    let verdict = Verdict::from_bool(min_slack >= -CONTRACTIVITY_TOL);
    Ok(ContractivityReport { trials, degree, min_slack, witness, verdict })
}

/// `F^r = Re(a) Phi / (1 - r psi)`, which tends to `F` as `r -> 1`.
pub fn r_approximant(fact: &Factorization, r: f64) -> Result<VectorSeries> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!("r = {r} outside (0, 1)")));
    }
    let inv = fact.psi.scale(Complex64::new(-r, 0.0)).add_constant(Complex64::new(1.0, 0.0)).reciprocal()?;
    let c = Complex64::new(fact.a.re, 0.0);
    fact.phi.map(|p| Ok(p.mul(&inv)?.scale(c)))
}

#[derive(Debug, Clone, Serialize)]
pub struct RApproxReport {
    pub r: f64,
    pub min_slack: f64,
    /// `||F^r - F||_k`.
    pub norm_distance: f64,
    pub verdict: Verdict,
}

/// Checks `||F^r h||_k^2 <= Re(a) Re <(1 + r psi)/(1 - r psi) h, h>_s` on seeded unit `h`.
pub fn r_approx_check(fact: &Factorization, r: f64, trials: usize, seed: u64, degree: usize) -> Result<RApproxReport> {
    let n = fact.order();
    if 2 * degree > n {
        return Err(Error::OrderMismatch(2 * degree, n));
    }
    let fr = r_approximant(fact, r)?;
    let rpsi = fact.psi.scale(Complex64::new(r, 0.0));
    let q = rpsi.add_constant(Complex64::new(1.0, 0.0)).mul(&rpsi.scale(Complex64::new(-1.0, 0.0)).add_constant(Complex64::new(1.0, 0.0)).reciprocal()?)?;
    let sspace = Space::new(&fact.s, n)?;
    let kspace = Space::new(&fact.k, n)?;
    let mut min_slack = (0..trials)
        .into_par_iter()
        .map(|t| {
            let h = random_unit_polynomial(&sspace, degree, seed, t as u64)?.with_order(n);
            let rhs = sspace.inner(&q.mul(&h)?, &h)?.re * fact.a.re;
            let lhs = kspace.vnorm_sq(&fr.map(|c| c.mul(&h))?)?;
            Ok(rhs - lhs)
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    if trials == 0 {
        min_slack = 0.0;
    }
    let diff = VectorSeries::new(
        fr.components().iter().zip(fact.f.components()).map(|(a, b)| a.sub(b)).collect::<Result<_>>()?,
    )?;
    let norm_distance = kspace.vnorm_sq(&diff)?.sqrt();
    Ok(RApproxReport { r, min_slack, norm_distance, verdict: Verdict::from_bool(min_slack >= -1e-8) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn half_one_plus_z() -> VectorSeries {
        let h = 0.5f64.sqrt();
        VectorSeries::scalar(Series::univariate_real(&[h, h]))
    }

    #[test]
    fn hardy_anchor() {
        let s = KernelSpec::szego();
        let fact = factorize_unit(&half_one_plus_z(), &s, &s, None, &FactorOptions { order: Some(60), ..Default::default() })
            .unwrap();
        // psi = z/(2+z) = sum_{n>=1} (-1)^{n-1} z^n / 2^n
        for (n, p) in fact.psi.coeffs().iter().enumerate() {
            let want = if n == 0 { 0.0 } else { -(-0.5f64).powi(n as i32) };
            assert!((p - want).norm() < 1e-15, "psi_{n}");
        }
        // Phi = sqrt2 (1+z)/(2+z)
        let phi = &fact.phi.components()[0];
        for (n, p) in phi.coeffs().iter().enumerate() {
            let want = if n == 0 { 2f64.sqrt() / 2.0 } else { 2f64.sqrt() / 4.0 * (-0.5f64).powi(n as i32 - 1) };
            assert!((p - want).norm() < 1e-15, "phi_{n}: {p} vs {want}");
        }
        assert!(fact.certificates.reconstruction_residual < 1e-14);
        assert!(fact.certificates.contractivity_margin.unwrap().abs() < 1e-12);
    }

    #[test]
    fn extremal_functions_factor_trivially() {
        let s = KernelSpec::szego();
        let z = VectorSeries::scalar(Series::univariate_real(&[0.0, 1.0]));
        let fact = factorize_unit(&z, &s, &s, None, &FactorOptions::default()).unwrap();
        assert!(fact.psi.coeffs().iter().all(|p| p.norm() < 1e-15));
        let phi = fact.phi.components()[0].coeffs();
        assert!((phi[1] - 1.0).norm() < 1e-15);
        assert!(phi.iter().enumerate().all(|(i, p)| i == 1 || p.norm() < 1e-15));
    }

    #[test]
    fn not_unit_norm_without_embedding() {
        let s = KernelSpec::szego();
        let f = VectorSeries::scalar(Series::univariate_real(&[0.0, 0.5f64.sqrt()]));
        assert!(matches!(factorize_unit(&f, &s, &s, None, &FactorOptions::default()), Err(Error::NotUnitNorm(_))));
    }

    #[test]
    fn embedding_of_a_sub_unit_function() {
        let s = KernelSpec::szego();
        let f = VectorSeries::scalar(Series::univariate_real(&[0.0, 0.5f64.sqrt()]));
        let w = [c(0.5, 0.0)];
        let opts = FactorOptions { order: Some(80), ..Default::default() };
        let fact = factorize_unit(&f, &s, &s, Some(&w), &opts).unwrap();
        assert!(fact.certificates.psi_at_base.norm() < 1e-15);
        assert_eq!(fact.phi.len(), 2);
        // V_{F_w} also equals the coefficient rule applied to F_w itself
        let direct = sarason_function(&s, &s, &fact.f, 80).unwrap();
        let diff = direct.v.sub(&fact.v).unwrap();
        assert!(diff.coeffs().iter().all(|x| x.norm() < 1e-14));
        // F itself is recovered from the first component
        let grid = reconstruction_grid(&s).unwrap();
        for z in &grid.points {
            let got = fact.phi.components()[0].eval(z).unwrap() / (1.0 - fact.psi.eval(z).unwrap());
            let want = f.components()[0].eval(z).unwrap();
            assert!((got - want).norm() < 1e-14);
        }
        assert!(fact.certificates.contractivity_margin.unwrap() >= -1e-12);
    }

    #[test]
    fn different_a_share_the_reconstruction() {
        let s = KernelSpec::szego();
        let f = VectorSeries::scalar(Series::univariate_real(&[0.4, -0.3, 0.2, 0.6]));
        let opts = FactorOptions { order: Some(48), trials: 0, ..Default::default() };
        let f1 = factorize(&f, c(2.0, 1.0), &s, &s, &opts).unwrap();
        let f2 = factorize(&f, c(2.0, -3.0), &s, &s, &opts).unwrap();
        assert!((f1.psi.coeffs()[1] - f2.psi.coeffs()[1]).norm() > 1e-3);
        assert!(f1.certificates.reconstruction_residual < 1e-12);
        assert!(f2.certificates.reconstruction_residual < 1e-12);
        // real coefficients: a and conj(a) give conjugate psi
        let f3 = factorize(&f, c(2.0, -1.0), &s, &s, &opts).unwrap();
        for (p, q) in f1.psi.coeffs().iter().zip(f3.psi.coeffs()) {
            assert!((p - q.conj()).norm() < 1e-13);
        }
    }

    #[test]
    fn rejects_bad_a() {
        let s = KernelSpec::szego();
        assert!(factorize(&half_one_plus_z(), c(0.0, 1.0), &s, &s, &FactorOptions::default()).is_err());
    }

    #[test]
    fn r_approximants_converge() {
        let s = KernelSpec::szego();
        let opts = FactorOptions { order: Some(200), ..Default::default() };
        let fact = factorize_unit(&half_one_plus_z(), &s, &s, None, &opts).unwrap();
        let mut last = f64::INFINITY;
        for &r in &[0.5, 0.9, 0.99, 0.999] {
            let rep = r_approx_check(&fact, r, 20, 3, 20).unwrap();
            assert!(rep.verdict.passed(), "r = {r}: {}", rep.min_slack);
            assert!(rep.norm_distance < last);
            // F^r - F = -(1-r) z (1+z) / (sqrt2 (2 + (1-r) z))
            last = rep.norm_distance;
        }
        assert!(last < 0.02);
        assert!((last - 0.0005).abs() < 1e-5);
    }

    #[test]
    fn zero_psi_gives_phi() {
        let s = KernelSpec::szego();
        let z = VectorSeries::scalar(Series::univariate_real(&[0.0, 1.0]));
        let fact = factorize_unit(&z, &s, &s, None, &FactorOptions::default()).unwrap();
        let fr = r_approximant(&fact, 0.3).unwrap();
        assert_eq!(fr, fact.phi);
    }
}
