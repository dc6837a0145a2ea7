//! Truncated multivariate power series with complex coefficients.

use crate::error::{Error, Result};
use crate::monomial::{self, Exponent, Monomials, MAX_DIM};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `sum_{|g| <= order} c_g z^g`, dense in graded-lex layout.
///
/// `truncated` records that information beyond `order` was discarded at
/// some point; a polynomial whose degree fits within `order` is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    dim: usize,
    order: usize,
    coeffs: Vec<Complex64>,
    truncated: bool,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::InvalidArgument(format!("dimension {dim} outside 1..={MAX_DIM}")));
    }
    Ok(())
}

impl Series {
    pub fn zeros(dim: usize, order: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Series {
            dim,
            order,
            coeffs: vec![ZERO; monomial::count_le(dim, order)],
            truncated: false,
        })
    }

    pub fn constant(dim: usize, order: usize, c: Complex64) -> Result<Self> {
        let mut s = Self::zeros(dim, order)?;
        s.coeffs[0] = c;
        Ok(s)
    }

    /// Dense coefficients in layout order; length must be `count_le(dim, order)`.
    pub fn from_coeffs(dim: usize, order: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        check_dim(dim)?;
        let want = monomial::count_le(dim, order);
        if coeffs.len() != want {
            return Err(Error::InvalidArgument(format!(
                "expected {want} coefficients for dimension {dim} order {order}, got {}",
                coeffs.len()
            )));
        }
        Ok(Series { dim, order, coeffs, truncated: false })
    }

    /// Univariate polynomial `sum c_n z^n`; order is `len - 1`.
    pub fn univariate(coeffs: Vec<Complex64>) -> Self {
        let coeffs = if coeffs.is_empty() { vec![ZERO] } else { coeffs };
        Series { dim: 1, order: coeffs.len() - 1, coeffs, truncated: false }
    }

    pub fn univariate_real(coeffs: &[f64]) -> Self {
        Self::univariate(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn from_terms(dim: usize, order: usize, terms: &[(Exponent, Complex64)]) -> Result<Self> {
        let mut s = Self::zeros(dim, order)?;
        for (e, c) in terms {
            s.add_to(e, *c)?;
        }
        Ok(s)
    }

    pub fn monomial(dim: usize, order: usize, e: Exponent, c: Complex64) -> Result<Self> {
        Self::from_terms(dim, order, &[(e, c)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn mark_truncated(&mut self) {
        self.truncated = true;
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn layout(&self) -> Arc<Monomials> {
        monomial::layout(self.dim, self.order)
    }

    fn check_exponent(&self, e: &Exponent) -> Result<()> {
        if e[self.dim..].iter().any(|&x| x != 0) {
            return Err(Error::DimensionMismatch { expected: self.dim, found: MAX_DIM });
        }
        Ok(())
    }

    /// Coefficient of `z^e`; zero beyond the order.
    pub fn coeff(&self, e: &Exponent) -> Complex64 {
        if monomial::total_degree(e) > self.order || e[self.dim..].iter().any(|&x| x != 0) {
            return ZERO;
        }
        self.coeffs[monomial::rank(e, self.dim)]
    }

    pub fn add_to(&mut self, e: &Exponent, c: Complex64) -> Result<()> {
        self.check_exponent(e)?;
        let m = monomial::total_degree(e);
        if m > self.order {
            return Err(Error::OrderMismatch(m, self.order));
        }
        let i = monomial::rank(e, self.dim);
        self.coeffs[i] += c;
        Ok(())
    }

    /// Highest total degree with a nonzero coefficient (0 for the zero series).
    pub fn degree(&self) -> usize {
        match self.coeffs.iter().rposition(|c| *c != ZERO) {
            None => 0,
            Some(i) if self.dim == 1 => i,
            Some(i) => monomial::total_degree(&self.layout().exps[i]),
        }
    }

    /// Same series at a different order: truncates, or pads with zeros.
    pub fn with_order(&self, order: usize) -> Series {
        let n = monomial::count_le(self.dim, order);
        let mut coeffs = self.coeffs.clone();
        let mut truncated = self.truncated;
        if n < coeffs.len() {
            truncated |= coeffs[n..].iter().any(|c| *c != ZERO);
            coeffs.truncate(n);
        } else {
            coeffs.resize(n, ZERO);
        }
        Series { dim: self.dim, order, coeffs, truncated }
    }

    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: z.len() });
        }
        if self.dim == 1 {
            let mut acc = ZERO;
            for c in self.coeffs.iter().rev() {
                acc = acc * z[0] + c;
            }
            return Ok(acc);
        }
        let powers: Vec<Vec<Complex64>> = z
            .iter()
            .map(|&x| {
                let mut p = Vec::with_capacity(self.order + 1);
                let mut cur = Complex64::new(1.0, 0.0);
                for _ in 0..=self.order {
                    p.push(cur);
                    cur *= x;
                }
                p
            })
            .collect();
        let layout = self.layout();
        let mut acc = ZERO;
        for (c, e) in self.coeffs.iter().zip(&layout.exps) {
            if *c == ZERO {
                continue;
            }
            let mut term = *c;
            for (j, p) in powers.iter().enumerate() {
                term *= p[e[j] as usize];
            }
            acc += term;
        }
        Ok(acc)
    }

    fn binary_prep(&self, other: &Series) -> Result<(usize, bool)> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let order = self.order.min(other.order);
        let flag = self.truncated || other.truncated || self.order != other.order;
        Ok((order, flag))
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        let (order, flag) = self.binary_prep(other)?;
        let n = monomial::count_le(self.dim, order);
        let coeffs = (0..n).map(|i| self.coeffs[i] + other.coeffs[i]).collect();
        Ok(Series { dim: self.dim, order, coeffs, truncated: flag })
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Series {
        Series {
            dim: self.dim,
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            truncated: self.truncated,
        }
    }

    pub fn add_constant(&self, c: Complex64) -> Series {
        let mut s = self.clone();
        s.coeffs[0] += c;
        s
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Series) -> Result<Series> {
        let (order, flag) = self.binary_prep(other)?;
        let mut out = vec![ZERO; monomial::count_le(self.dim, order)];
        if self.dim == 1 {
            let db = other.degree().min(order);
            for (i, a) in self.coeffs.iter().enumerate().take(self.degree().min(order) + 1) {
                if *a == ZERO {
                    continue;
                }
                for (j, b) in other.coeffs.iter().enumerate().take(db.min(order - i) + 1) {
                    out[i + j] += a * b;
                }
            }
        } else {
            let layout = monomial::layout(self.dim, order);
            // Iterate over the sparser factor.
            let (sparse, dense) = if self.nnz() <= other.nnz() { (self, other) } else { (other, self) };
            for (ia, a) in sparse.coeffs.iter().enumerate().take(layout.len()) {
                if *a == ZERO {
                    continue;
                }
                let ea = layout.exps[ia];
                let room = order - monomial::total_degree(&ea);
                let nb = monomial::count_le(self.dim, room);
                for (eb, b) in layout.exps[..nb].iter().zip(&dense.coeffs[..nb]) {
                    if *b == ZERO {
                        continue;
                    }
                    out[monomial::rank(&monomial::add(&ea, eb), self.dim)] += a * b;
                }
            }
        }
        Ok(Series { dim: self.dim, order, coeffs: out, truncated: flag })
    }

    /// Product with the linear form `sum_j l_j z_j`, at the same order.
    pub fn mul_linear(&self, l: &[Complex64]) -> Result<Series> {
        if l.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: l.len() });
        }
        let mut out = Series::zeros(self.dim, self.order)?;
        out.truncated = self.truncated;
        let layout = self.layout();
        for (c, e) in self.coeffs.iter().zip(&layout.exps) {
            if *c == ZERO {
                continue;
            }
            if monomial::total_degree(e) == self.order {
                out.truncated = true;
                continue;
            }
            for (j, lj) in l.iter().enumerate() {
                let mut f = *e;
                f[j] += 1;
                out.coeffs[monomial::rank(&f, self.dim)] += c * lj;
            }
        }
        Ok(out)
    }

    /// `w -> f(U w)` for a `dim x dim` matrix `U` (row `j` gives coordinate `j`).
    pub fn compose_linear(&self, u: &[Vec<Complex64>]) -> Result<Series> {
        if u.len() != self.dim || u.iter().any(|r| r.len() != self.dim) {
            return Err(Error::DimensionMismatch { expected: self.dim, found: u.len() });
        }
        let order = self.order;
        let layout = self.layout();
        // Nested Horner: peel coordinates from the last one inwards.
        fn go(f: &Series, layout: &Monomials, u: &[Vec<Complex64>], prefix: &mut Exponent, j: usize) -> Result<Series> {
            let dim = f.dim;
            let used = monomial::total_degree(prefix);
            if j == dim {
                let c = if used <= f.order { f.coeffs[monomial::rank(prefix, dim)] } else { ZERO };
                return Series::constant(dim, f.order, c);
            }
            let room = f.order - used;
            let mut acc = Series::zeros(dim, f.order)?;
            for p in (0..=room).rev() {
                prefix[j] = p as u32;
                let inner = go(f, layout, u, prefix, j + 1)?;
                acc = acc.mul_linear(&u[j])?.add(&inner)?;
            }
            prefix[j] = 0;
            Ok(acc)
        }
        let mut prefix = [0u32; MAX_DIM];
        let mut out = go(self, &layout, u, &mut prefix, 0)?;
        out.order = order;
        out.truncated = self.truncated;
        Ok(out)
    }

    fn nnz(&self) -> usize {
        self.coeffs.iter().filter(|c| **c != ZERO).count()
    }

    /// Partial derivative in coordinate `coord`; the order drops by one.
    pub fn derivative(&self, coord: usize) -> Result<Series> {
        if coord >= self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: coord + 1 });
        }
        let order = self.order.saturating_sub(1);
        let mut out = Series::zeros(self.dim, order)?;
        out.truncated = self.truncated;
        let layout = self.layout();
        for (c, e) in self.coeffs.iter().zip(&layout.exps) {
            if *c == ZERO || e[coord] == 0 {
                continue;
            }
            let mut f = *e;
            f[coord] -= 1;
            out.add_to(&f, c * e[coord] as f64)?;
        }
        Ok(out)
    }

    /// Multiplicative inverse up to the same order.
    pub fn reciprocal(&self) -> Result<Series> {
        let f0 = self.coeffs[0];
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if f0.norm() <= 1e-14 * scale.max(1.0) {
            return Err(Error::ZeroConstantTerm(f0.norm()));
        }
        let inv0 = 1.0 / f0;
        let n = self.coeffs.len();
        let mut g = vec![ZERO; n];
        g[0] = inv0;
        if self.dim == 1 {
            let nz: Vec<usize> = (1..n).filter(|&i| self.coeffs[i] != ZERO).collect();
            for m in 1..n {
                let mut acc = ZERO;
                for &j in &nz {
                    if j > m {
                        break;
                    }
                    acc += self.coeffs[j] * g[m - j];
                }
                g[m] = -acc * inv0;
            }
        } else {
            let layout = self.layout();
            let nz: Vec<(Exponent, Complex64)> = (1..n)
                .filter(|&i| self.coeffs[i] != ZERO)
                .map(|i| (layout.exps[i], self.coeffs[i]))
                .collect();
            for m in 1..n {
                let eg = layout.exps[m];
                let mut acc = ZERO;
                for (eb, fb) in &nz {
                    if let Some(rest) = monomial::checked_sub(&eg, eb) {
                        acc += fb * g[monomial::rank(&rest, self.dim)];
                    }
                }
                g[m] = -acc * inv0;
            }
        }
        Ok(Series { dim: self.dim, order: self.order, coeffs: g, truncated: self.truncated })
    }

    /// Largest coefficient of `self * g - 1`.
    pub fn reciprocal_residual(&self, g: &Series) -> Result<f64> {
        let p = self.mul(g)?;
        Ok(p.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i == 0 { (c - 1.0).norm() } else { c.norm() })
            .fold(0.0, f64::max))
    }

    /// `(index, re, im)` for every nonzero coefficient.
    pub fn to_triples(&self) -> Vec<(usize, f64, f64)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != ZERO)
            .map(|(i, c)| (i, c.re, c.im))
            .collect()
    }

    pub fn from_triples(dim: usize, order: usize, triples: &[(usize, f64, f64)]) -> Result<Series> {
        let mut s = Series::zeros(dim, order)?;
        for &(i, re, im) in triples {
            if i >= s.coeffs.len() {
                return Err(Error::OrderMismatch(i, s.coeffs.len()));
            }
            s.coeffs[i] += Complex64::new(re, im);
        }
        Ok(s)
    }

    /// Coefficient table rows: layout index, exponent, real and imaginary parts.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "exponent", "re", "im"])?;
        let layout = self.layout();
        for (i, (c, e)) in self.coeffs.iter().zip(&layout.exps).enumerate() {
            let exp: Vec<String> = e[..self.dim].iter().map(|x| x.to_string()).collect();
            w.write_record([i.to_string(), exp.join(";"), format!("{:e}", c.re), format!("{:e}", c.im)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `g(f)` for a univariate polynomial `g`, truncated at `f`'s order.
pub fn compose_polynomial(g: &Series, f: &Series) -> Result<Series> {
    if g.dim != 1 || f.dim != 1 {
        return Err(Error::NotUnivariate);
    }
    let deg = g.degree();
    let mut acc = Series::constant(1, f.order, g.coeffs[deg])?;
    for k in (0..deg).rev() {
        acc = acc.mul(f)?.add_constant(g.coeffs[k]);
    }
    acc.truncated |= f.truncated;
    Ok(acc)
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    dimension: usize,
    order: usize,
    #[serde(default)]
    truncated: bool,
    coeffs: Vec<(usize, f64, f64)>,
}

impl Serialize for Series {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson {
            dimension: self.dim,
            order: self.order,
            truncated: self.truncated,
            coeffs: self.to_triples(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Series {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SeriesJson::deserialize(d)?;
        let mut s = Series::from_triples(j.dimension, j.order, &j.coeffs).map_err(serde::de::Error::custom)?;
        s.truncated = j.truncated;
        Ok(s)
    }
}

/// A finite tuple of series sharing one dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VectorSeries {
    components: Vec<Series>,
}

impl VectorSeries {
    pub fn new(components: Vec<Series>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidArgument("vector series needs a component".into()))?;
        for c in &components {
            if c.dim != first.dim {
                return Err(Error::DimensionMismatch { expected: first.dim, found: c.dim });
            }
        }
        Ok(VectorSeries { components })
    }

    pub fn scalar(f: Series) -> Self {
        VectorSeries { components: vec![f] }
    }

    pub fn components(&self) -> &[Series] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.components[0].dim
    }

    pub fn order(&self) -> usize {
        self.components.iter().map(|c| c.order).max().unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        self.components.iter().map(|c| c.degree()).max().unwrap_or(0)
    }

    pub fn eval(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        self.components.iter().map(|c| c.eval(z)).collect()
    }

    /// `||F(z)||^2` in the Euclidean norm of the target.
    pub fn norm_sq_at(&self, z: &[Complex64]) -> Result<f64> {
        Ok(self.eval(z)?.iter().map(|c| c.norm_sqr()).sum())
    }

    pub fn map<F: Fn(&Series) -> Result<Series>>(&self, f: F) -> Result<VectorSeries> {
        Ok(VectorSeries { components: self.components.iter().map(f).collect::<Result<_>>()? })
    }

    pub fn scale(&self, c: Complex64) -> VectorSeries {
        VectorSeries { components: self.components.iter().map(|s| s.scale(c)).collect() }
    }

    pub fn with_order(&self, order: usize) -> VectorSeries {
        VectorSeries { components: self.components.iter().map(|s| s.with_order(order)).collect() }
    }

    pub fn push(&mut self, s: Series) -> Result<()> {
        if s.dim != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: s.dim });
        }
        self.components.push(s);
        Ok(())
    }
}
