//! Finite Blaschke products with zeros in `[0, 1)`.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;

/// `B(z) = prod_n (z_n - z)/(1 - z_n z)`. Zeros are stored through `e_n = 1 - z_n`
/// so that points and zeros close to 1 keep their relative precision.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlaschkeProduct {
    gaps: Vec<f64>,
}

impl BlaschkeProduct {
    /// From zeros in `[0, 1)`, distinct and increasing.
    pub fn new(zeros: &[f64]) -> Result<Self> {
        Self::from_gaps(zeros.iter().map(|z| 1.0 - z).collect())
    }

    /// From `e_n = 1 - z_n`, strictly decreasing in `(0, 1]`.
    pub fn from_gaps(gaps: Vec<f64>) -> Result<Self> {
        for (i, e) in gaps.iter().enumerate() {
            if !(*e > 0.0 && *e <= 1.0) {
                return Err(Error::InvalidArgument(format!("zero {} outside [0, 1)", 1.0 - e)));
            }
            if i > 0 && *e >= gaps[i - 1] {
                return Err(Error::InvalidArgument("zeros must be distinct and increasing".into()));
            }
        }
        Ok(BlaschkeProduct { gaps })
    }

    /// Zeros `1 - 2^-n`, `n = 1..=count`.
    pub fn dyadic(count: usize) -> Result<Self> {
        Self::from_gaps((1..=count).map(|n| 0.5f64.powi(n as i32)).collect())
    }

    pub fn len(&self) -> usize {
        self.gaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }

    pub fn zeros(&self) -> Vec<f64> {
        self.gaps.iter().map(|e| 1.0 - e).collect()
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    /// The first `count` zeros.
    pub fn truncate(&self, count: usize) -> Self {
        BlaschkeProduct { gaps: self.gaps[..count.min(self.gaps.len())].to_vec() }
    }

    /// `B` and `B'` at `x = 1 - u`.
    pub fn eval_one_minus(&self, u: Complex64) -> (Complex64, Complex64) {
        // (z_n - x)/(1 - z_n x) = (u - e_n)/(e_n + z_n u)
        let mut b = Complex64::new(1.0, 0.0);
        let mut db = Complex64::new(0.0, 0.0);
        for &e in &self.gaps {
            let zn = 1.0 - e;
            let den = e + zn * u;
            let phi = (u - e) / den;
            let dphi = -(e * (2.0 - e)) / (den * den);
            db = db * phi + b * dphi;
            b *= phi;
        }
        (b, db)
    }

    pub fn eval(&self, z: Complex64) -> (Complex64, Complex64) {
        self.eval_one_minus(1.0 - z)
    }

    /// `|B'(z_n)|`, by the product of the other factors.
    pub fn derivative_at_zero(&self, n: usize) -> f64 {
        let en = self.gaps[n];
        let mut p = 1.0 / (en * (2.0 - en));
        for (m, &em) in self.gaps.iter().enumerate() {
            if m != n {
                // |z_m - z_n| / (1 - z_m z_n) with 1 - z_m z_n = e_m + e_n - e_m e_n
                p *= (en - em).abs() / (em + en - em * en);
            }
        }
        p
    }

    /// `min_n (1 - z_n^2) |B'(z_n)|`; 1 for the empty product.
    pub fn interpolation_delta(&self) -> f64 {
        (0..self.len())
            .map(|n| self.gaps[n] * (2.0 - self.gaps[n]) * self.derivative_at_zero(n))
            .fold(1.0, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_zero_at_origin() {
        let b = BlaschkeProduct::new(&[0.0]).unwrap();
        let (v, d) = b.eval(c(0.3, 0.4));
        assert!((v + c(0.3, 0.4)).norm() < 1e-15 && (d + 1.0).norm() < 1e-15);
        assert!((b.derivative_at_zero(0) - 1.0).abs() < 1e-15);
        assert!((b.interpolation_delta() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn vanishes_at_zeros_and_derivative_matches_difference() {
        let b = BlaschkeProduct::dyadic(10).unwrap();
        for z in b.zeros() {
            assert_eq!(b.eval(c(z, 0.0)).0.norm(), 0.0);
        }
        for (n, z) in b.zeros().iter().enumerate() {
            let (_, d) = b.eval(c(*z, 0.0));
            assert!((d.norm() - b.derivative_at_zero(n)).abs() < 1e-9 * d.norm());
        }
        let z = c(0.6, 0.3);
        let h = 1e-6;
        let fd = (b.eval(z + h).0 - b.eval(z - h).0) / (2.0 * h);
        assert!((fd - b.eval(z).1).norm() < 1e-6 * fd.norm());
        // unimodular on the circle
        assert!((b.eval(Complex64::from_polar(1.0, 0.7)).0.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dyadic_delta_is_stable() {
        let deltas: Vec<f64> = (1..=16).map(|n| BlaschkeProduct::dyadic(n).unwrap().interpolation_delta()).collect();
        assert!(deltas.iter().all(|d| *d > 0.0));
        assert!(deltas.windows(2).all(|w| w[1] <= w[0] + 1e-15));
        // geometric zeros: the minimum settles near 0.015
        assert!(deltas[15] > 0.9 * deltas[12] && deltas[15] > 0.01, "{deltas:?}");
    }

    #[test]
    fn rejects_bad_zeros() {
        assert!(BlaschkeProduct::new(&[0.5, 0.2]).is_err());
        assert!(BlaschkeProduct::new(&[1.0]).is_err());
    }
}
