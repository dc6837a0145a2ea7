//! Inner products of diagonal reproducing kernel Hilbert spaces on coefficients.
//!
//! Monomials are orthogonal with `||z^g||^2 = 1/c_g`, so
//! `<f, g> = sum_g f_g conj(g_g) / c_g`.

use crate::error::{Error, Result};
use crate::kernel::{diagonal_coeffs, DiagonalCoeffs, KernelSpec};
use crate::series::{Series, VectorSeries};
use num_complex::Complex64;

/// A kernel's Hilbert space with its monomial norms precomputed up to `order`.
#[derive(Debug, Clone)]
pub struct Space {
    spec: KernelSpec,
    coeffs: DiagonalCoeffs,
    inv: Vec<f64>,
}

impl Space {
    pub fn new(spec: &KernelSpec, order: usize) -> Result<Self> {
        let coeffs = diagonal_coeffs(spec, order)?;
        let inv = coeffs.values.iter().map(|c| 1.0 / c).collect();
        Ok(Space { spec: spec.clone(), coeffs, inv })
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.coeffs.order
    }

    pub fn coeffs(&self) -> &DiagonalCoeffs {
        &self.coeffs
    }

    /// `||z^g||^2` by layout index.
    pub fn monomial_norm_sq(&self, index: usize) -> f64 {
        self.inv[index]
    }

    fn check(&self, f: &Series, g: &Series) -> Result<()> {
        if f.dim() != self.spec.dimension {
            return Err(Error::DimensionMismatch { expected: self.spec.dimension, found: f.dim() });
        }
        if g.dim() != f.dim() {
            return Err(Error::DimensionMismatch { expected: f.dim(), found: g.dim() });
        }
        if f.order() != g.order() {
            return Err(Error::OrderMismatch(f.order(), g.order()));
        }
        if f.order() > self.order() {
            return Err(Error::OrderMismatch(f.order(), self.order()));
        }
        Ok(())
    }

    pub fn inner(&self, f: &Series, g: &Series) -> Result<Complex64> {
        self.check(f, g)?;
        Ok(f.coeffs().iter().zip(g.coeffs()).zip(&self.inv).map(|((a, b), w)| a * b.conj() * *w).sum())
    }

    pub fn norm_sq(&self, f: &Series) -> Result<f64> {
        self.check(f, f)?;
        Ok(f.coeffs().iter().zip(&self.inv).map(|(a, w)| a.norm_sqr() * w).sum())
    }

    pub fn vinner(&self, f: &VectorSeries, g: &VectorSeries) -> Result<Complex64> {
        if f.len() != g.len() {
            return Err(Error::DimensionMismatch { expected: f.len(), found: g.len() });
        }
        f.components().iter().zip(g.components()).map(|(a, b)| self.inner(a, b)).sum()
    }

    pub fn vnorm_sq(&self, f: &VectorSeries) -> Result<f64> {
        f.components().iter().map(|a| self.norm_sq(a)).sum()
    }
}

/// `<f, g>` in `H_spec`; both series must share dimension and order.
pub fn inner_product(spec: &KernelSpec, f: &Series, g: &Series) -> Result<Complex64> {
    Space::new(spec, f.order())?.inner(f, g)
}

pub fn norm(spec: &KernelSpec, f: &Series) -> Result<f64> {
    Ok(Space::new(spec, f.order())?.norm_sq(f)?.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn monomial_norms() {
        let z = Series::univariate_real(&[0.0, 1.0]);
        assert_eq!(inner_product(&KernelSpec::szego(), &z, &z).unwrap(), c(1.0));
        let b = KernelSpec::bergman(0.0).unwrap();
        for n in 0..8 {
            let mut v = vec![0.0; n + 1];
            v[n] = 1.0;
            let zn = Series::univariate_real(&v);
            assert!((inner_product(&b, &zn, &zn).unwrap().re - 1.0 / (n as f64 + 1.0)).abs() < 1e-15);
        }
        let f = Series::univariate_real(&[1.0, 1.0]).scale(c(1.0 / 2f64.sqrt()));
        assert!((norm(&KernelSpec::szego(), &f).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn order_mismatch_is_reported() {
        let a = Series::univariate_real(&[1.0, 1.0]);
        let b = a.with_order(3);
        assert!(matches!(inner_product(&KernelSpec::szego(), &a, &b), Err(Error::OrderMismatch(1, 3))));
    }

    #[test]
    fn drury_arveson_norms() {
        // ||z1 z2||^2 = 1/2 in the Drury-Arveson space, 1 in the polydisc Hardy space
        let f = Series::from_terms(2, 2, &[([1, 1, 0], c(1.0))]).unwrap();
        let da = Space::new(&KernelSpec::drury_arveson(2).unwrap(), 2).unwrap();
        assert!((da.norm_sq(&f).unwrap() - 0.5).abs() < 1e-15);
        let pd = Space::new(&KernelSpec::hardy_polydisc(2).unwrap(), 2).unwrap();
        assert!((pd.norm_sq(&f).unwrap() - 1.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn cauchy_schwarz(v in proptest::collection::vec(-1.0f64..1.0, 24)) {
            let f = Series::univariate(v[..12].iter().zip(&v[12..]).map(|(a, b)| Complex64::new(*a, *b)).collect());
            let g = Series::univariate(v[12..].iter().zip(&v[..12]).map(|(a, b)| Complex64::new(*a, -*b)).collect());
            let sp = Space::new(&KernelSpec::dirichlet(0.5).unwrap(), 11).unwrap();
            let ip = sp.inner(&f, &g).unwrap().norm_sqr();
            prop_assert!(ip <= sp.norm_sq(&f).unwrap() * sp.norm_sq(&g).unwrap() + 1e-12);
        }
    }
}
