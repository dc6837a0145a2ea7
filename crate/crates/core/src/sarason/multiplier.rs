//! Carleson embeddings, finite-section multiplier norms and invariant spans.

use super::sarason_function;
use crate::dirichlet::measure::DiscMeasure;
use crate::error::{Error, Result};
use crate::kernel::{diagonal_coeffs, KernelSpec, PointSet};
use crate::monomial;
use crate::psd::Verdict;
use crate::rng::{complex_normal, trial_rng};
use crate::series::{Series, VectorSeries};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Polar grid with radii `1 - (1 - cap)^{i/radii}`, `i = 0..=radii`, clustering near the circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PolarGrid {
    pub radii: usize,
    pub angles: usize,
    pub cap: f64,
}

impl Default for PolarGrid {
    fn default() -> Self {
        PolarGrid { radii: 64, angles: 128, cap: 0.999 }
    }
}

impl PolarGrid {
    pub fn points(&self) -> Vec<Complex64> {
        let mut out = vec![ZERO];
        for i in 1..=self.radii {
            let r = 1.0 - (1.0 - self.cap).powf(i as f64 / self.radii as f64);
            for j in 0..self.angles {
                out.push(Complex64::from_polar(r, 2.0 * std::f64::consts::PI * j as f64 / self.angles as f64));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CarlesonReport {
    /// `sup Re int s_z dmu` over the grid.
    pub sup_re: f64,
    /// Largest `||p||^2_{L^2(mu)} / ||p||_s^2` over polynomials of the given degree.
    pub embedding_constant_estimate: f64,
    /// Best ratio among the random trial polynomials; never above the estimate.
    pub sampled_ratio: f64,
    pub degree: usize,
}

/// One-variable Carleson test for `mu` against `H_s`.
pub fn carleson_check(
    s: &KernelSpec,
    measure: &DiscMeasure,
    f_degree: usize,
    trials: usize,
    seed: u64,
    grid: &PolarGrid,
) -> Result<CarlesonReport> {
    if s.dimension != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: s.dimension });
    }
    let pts = grid.points();
    let work = pts.len() * measure.len();
    if work > super::QUADRATURE_BUDGET {
        return Err(Error::QuadratureBudgetExceeded { nodes: work, budget: super::QUADRATURE_BUDGET });
    }
    let mut sup_re = f64::NEG_INFINITY;
    for z in &pts {
        let mut acc = 0.0;
        for node in measure.nodes() {
            // Re s(zeta, z) = Re s(z, zeta)
            acc += node.weight * s.eval_to_boundary(&[*z], &[node.z])?.re;
        }
        sup_re = sup_re.max(acc);
    }

    let n = f_degree + 1;
    let c = diagonal_coeffs(s, f_degree)?;
    let root: Vec<f64> = c.values.iter().map(|v| v.sqrt()).collect();
    // B_mn = sqrt(c_m) int zeta^m conj(zeta)^n dmu sqrt(c_n)
    let mut b = DMatrix::<Complex64>::zeros(n, n);
    for node in measure.nodes() {
        let pw: Vec<Complex64> = (0..n).map(|m| node.z.powu(m as u32) * root[m]).collect();
        for i in 0..n {
            for j in 0..n {
                b[(i, j)] += pw[i] * pw[j].conj() * node.weight;
            }
        }
    }
    let b = (&b + b.adjoint()).scale(0.5);
    let embedding_constant_estimate = b.symmetric_eigenvalues().iter().cloned().fold(0.0, f64::max);

    let mut sampled_ratio: f64 = 0.0;
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let x: Vec<Complex64> = (0..n).map(|_| complex_normal(&mut rng)).collect();
        let norm_s: f64 = x.iter().zip(&c.values).map(|(a, cv)| a.norm_sqr() / cv).sum();
        let l2 = measure.integrate(|z| {
            let mut p = ZERO;
            for a in x.iter().rev() {
                p = p * z + a;
            }
            p.norm_sqr()
        });
        sampled_ratio = sampled_ratio.max(l2 / norm_s);
    }
    Ok(CarlesonReport { sup_re, embedding_constant_estimate, sampled_ratio, degree: f_degree })
}

/// Matrix of `p -> F p` from polynomials of degree `<= degree` with the `H_s` norm
/// into `H_k`, both in orthonormal monomial coordinates.
fn multiplication_matrix(f: &VectorSeries, s: &KernelSpec, k: &KernelSpec, degree: usize) -> Result<DMatrix<Complex64>> {
    let d = f.dim();
    if s.dimension != d || k.dimension != d {
        return Err(Error::DimensionMismatch { expected: d, found: s.dimension.max(k.dimension) });
    }
    let out_order = f.degree() + degree;
    let cs = diagonal_coeffs(s, degree)?;
    let ck = diagonal_coeffs(k, out_order)?;
    let cols = monomial::count_le(d, degree);
    let rows_per = monomial::count_le(d, out_order);
    let fo = f.with_order(out_order);
    let layout = monomial::layout(d, degree);
    let mut m = DMatrix::<Complex64>::zeros(rows_per * f.len(), cols);
    for (j, e) in layout.exps.iter().enumerate() {
        let basis = Series::monomial(d, out_order, *e, Complex64::new(cs.values[j].sqrt(), 0.0))?;
        for (ci, comp) in fo.components().iter().enumerate() {
            let prod = comp.mul(&basis)?;
            for (i, v) in prod.coeffs().iter().enumerate() {
                m[(ci * rows_per + i, j)] = v / ck.values[i].sqrt();
            }
        }
    }
    Ok(m)
}

/// Largest singular value of the finite section of `M_F : H_s -> H_k` on degree `<= degree`.
pub fn multiplier_norm_lower_bound(f: &VectorSeries, s: &KernelSpec, k: &KernelSpec, degree: usize) -> Result<f64> {
    let m = multiplication_matrix(f, s, k, degree)?;
    Ok(m.singular_values().iter().cloned().fold(0.0, f64::max))
}

#[derive(Debug, Clone, Serialize)]
pub struct DiffOpRow {
    pub k: String,
    pub s: String,
    pub f_index: usize,
    /// `sup Re V_F` over the grid.
    pub sup_re_v: f64,
    pub lower_bound: f64,
}

/// Pairs `(sup Re V_F, finite-section multiplier norm)` for each space pair and function.
pub fn diff_op_experiment(
    pairs: &[(KernelSpec, KernelSpec)],
    fs: &[VectorSeries],
    degree: usize,
    grid: &PointSet,
) -> Result<Vec<DiffOpRow>> {
    let mut rows = Vec::new();
    for (k, s) in pairs {
        for (i, f) in fs.iter().enumerate() {
            if f.dim() != k.dimension {
                continue;
            }
            let v = sarason_function(k, s, f, f.degree().max(1))?;
            let mut sup_re_v = f64::NEG_INFINITY;
            for z in &grid.points {
                if z.len() == k.dimension {
                    sup_re_v = sup_re_v.max(v.eval(z)?.re);
                }
            }
            let lower_bound = multiplier_norm_lower_bound(f, s, k, degree)?;
            rows.push(DiffOpRow { k: k.name(), s: s.name(), f_index: i, sup_re_v, lower_bound });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct SpanRow {
    pub degree: usize,
    /// Angle in radians between each generator and the other span.
    pub angle: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpanReport {
    pub rows: Vec<SpanRow>,
    pub angle: f64,
    /// Non-increasing angles along the rows, up to `1e-9`.
    pub decaying: Verdict,
}

/// Orthonormal columns spanning `{z^g G : |g| <= degree}` in `H_k` coordinates.
fn shifted_basis(g: &VectorSeries, k: &[f64], order: usize, degree: usize) -> Result<DMatrix<Complex64>> {
    let d = g.dim();
    let rows_per = monomial::count_le(d, order);
    let layout = monomial::layout(d, degree);
    let go = g.with_order(order);
    let mut m = DMatrix::<Complex64>::zeros(rows_per * g.len(), layout.len());
    for (j, e) in layout.exps.iter().enumerate() {
        let z = Series::monomial(d, order, *e, ONE)?;
        for (ci, comp) in go.components().iter().enumerate() {
            let prod = comp.mul(&z)?;
            for (i, v) in prod.coeffs().iter().enumerate() {
                m[(ci * rows_per + i, j)] = v / k[i].sqrt();
            }
        }
    }
    Ok(m.qr().q())
}

/// Angle between the unit vector `x` and the span of the orthonormal columns `q`.
fn angle_to_span(x: &DMatrix<Complex64>, q: &DMatrix<Complex64>) -> f64 {
    let proj = (q.adjoint() * x).norm();
    (proj / x.norm()).clamp(0.0, 1.0).acos()
}

fn generator(g: &VectorSeries, k: &[f64], order: usize) -> Result<DMatrix<Complex64>> {
    shifted_basis(g, k, order, 0)
}

/// Angle from `F` to `span{z^g Phi : |g| <= m}` and from `Phi` to `span{z^g F}`, the larger
/// of the two for each `m <= degree`, inside `H_k` cut at the order of `Phi` plus `degree`.
/// Both tend to zero exactly when `F` and `Phi` generate the same invariant subspace.
pub fn invariant_span_compare(k: &KernelSpec, f: &VectorSeries, phi: &VectorSeries, degree: usize) -> Result<SpanReport> {
    if f.dim() != k.dimension || phi.dim() != k.dimension {
        return Err(Error::DimensionMismatch { expected: k.dimension, found: f.dim() });
    }
    if f.len() != phi.len() {
        return Err(Error::DimensionMismatch { expected: f.len(), found: phi.len() });
    }
    let order = f.order().max(phi.order()) + degree;
    let ck = diagonal_coeffs(k, order)?;
    let f0 = generator(f, &ck.values, order)?;
    let p0 = generator(phi, &ck.values, order)?;
    let mut rows = Vec::with_capacity(degree + 1);
    for m in 0..=degree {
        let a = shifted_basis(f, &ck.values, order, m)?;
        let b = shifted_basis(phi, &ck.values, order, m)?;
        let angle = angle_to_span(&f0, &b).max(angle_to_span(&p0, &a));
        rows.push(SpanRow { degree: m, angle });
    }
    let decaying = Verdict::from_bool(rows.windows(2).all(|w| w[1].angle <= w[0].angle + 1e-9));
    let angle = rows.last().map(|r| r.angle).unwrap_or(0.0);
    Ok(SpanReport { rows, angle, decaying })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet::measure::RadialRule;
    use crate::sarason::factor::{factorize_unit, FactorOptions};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn uni(v: &[f64]) -> VectorSeries {
        VectorSeries::scalar(Series::univariate_real(v))
    }

    #[test]
    fn carleson_point_masses() {
        let s = KernelSpec::szego();
        let grid = PolarGrid { radii: 16, angles: 32, cap: 0.999 };
        let at0 = DiscMeasure::point_mass(c(0.0), 1.0).unwrap();
        let r = carleson_check(&s, &at0, 10, 20, 1, &grid).unwrap();
        assert!((r.sup_re - 1.0).abs() < 1e-15);
        assert!((r.embedding_constant_estimate - 1.0).abs() < 1e-14);
        assert!(r.sampled_ratio <= r.embedding_constant_estimate + 1e-12);

        let near = DiscMeasure::point_mass(c(0.99), 1.0).unwrap();
        let r = carleson_check(&s, &near, 400, 0, 1, &grid).unwrap();
        let want: f64 = (0..=400).map(|n| 0.9801f64.powi(n)).sum();
        assert!((r.embedding_constant_estimate - want).abs() < 1e-9 * want);
        assert!((want - 1.0 / (1.0 - 0.9801)).abs() < 0.02);
        assert!(r.sup_re > 80.0);
    }

    #[test]
    fn carleson_area_measure_for_dirichlet() {
        let s = KernelSpec::dirichlet(0.5).unwrap();
        let area = DiscMeasure::area(RadialRule::GaussLegendre(32), 64).unwrap();
        let grid = PolarGrid { radii: 16, angles: 32, cap: 0.99 };
        let r = carleson_check(&s, &area, 20, 10, 2, &grid).unwrap();
        assert!(r.sup_re.is_finite() && r.sup_re > 0.0);
        assert!(r.embedding_constant_estimate.is_finite() && r.embedding_constant_estimate >= 1.0 - 1e-12);
        assert!(r.sampled_ratio <= r.embedding_constant_estimate + 1e-12);
    }

    #[test]
    fn multiplier_lower_bounds() {
        let s = KernelSpec::szego();
        assert!((multiplier_norm_lower_bound(&uni(&[1.0]), &s, &s, 10).unwrap() - 1.0).abs() < 1e-14);
        let h = 0.5f64.sqrt();
        let f = uni(&[h, h]);
        let mut last = 0.0;
        for deg in [5, 20, 80] {
            let b = multiplier_norm_lower_bound(&f, &s, &s, deg).unwrap();
            assert!(b >= last && b <= 2f64.sqrt() + 1e-12);
            last = b;
        }
        assert!(2f64.sqrt() - last < 1e-3);
        let da = KernelSpec::drury_arveson(2).unwrap();
        let z1 = VectorSeries::scalar(Series::from_terms(2, 1, &[([1, 0, 0], c(1.0))]).unwrap());
        let b = multiplier_norm_lower_bound(&z1, &da, &da, 12).unwrap();
        assert!(b <= 1.0 + 1e-12 && b > 0.99);
    }

    #[test]
    fn span_comparisons() {
        let s = KernelSpec::szego();
        let z = uni(&[0.0, 1.0]);
        let same = invariant_span_compare(&s, &z, &z, 5).unwrap();
        assert!(same.angle < 1e-7);
        let one = uni(&[1.0]);
        let apart = invariant_span_compare(&s, &z, &one, 5).unwrap();
        assert!((apart.angle - std::f64::consts::FRAC_PI_2).abs() < 1e-7);

        let h = 0.5f64.sqrt();
        let f = uni(&[h, h]);
        let fact = factorize_unit(&f, &s, &s, None, &FactorOptions { order: Some(120), trials: 0, ..Default::default() })
            .unwrap();
        let rep = invariant_span_compare(&s, &f, &fact.phi, 30).unwrap();
        assert!(rep.decaying.passed(), "{:?}", rep.rows);
        assert!(rep.angle < rep.rows[0].angle / 5.0, "{:?}", rep.rows);
    }

    #[test]
    fn diff_op_rows() {
        let s = KernelSpec::szego();
        let grid = PointSet::random(crate::kernel::Domain::Ball, 1, 50, 0.95, 1).unwrap();
        let rows = diff_op_experiment(&[(s.clone(), s.clone())], &[uni(&[1.0]), uni(&[0.5, 0.5])], 10, &grid).unwrap();
        assert_eq!(rows.len(), 2);
        assert!((rows[0].sup_re_v - 1.0).abs() < 1e-14 && (rows[0].lower_bound - 1.0).abs() < 1e-14);
    }
}
