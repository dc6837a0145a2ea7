//! Sarason functions `V_F(z) = 2<F, s_z F>_k - ||F||_k^2` and what is built from them.

pub mod checks;
pub mod factor;
pub mod multiplier;

use crate::error::{Error, Result};
use crate::kernel::{cnp_row_function, diagonal_coeffs, DiagonalCoeffs, Family, KernelSpec, PointSet};
use crate::monomial::{self, Exponent};
use crate::quadrature::{gauss_legendre_on, periodic_angles};
use crate::series::{Series, VectorSeries};
use crate::space::Space;
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Budget on quadrature nodes times grid points for the integral formulas.
pub const QUADRATURE_BUDGET: usize = 1 << 24;

#[derive(Debug, Clone)]
pub struct SarasonData {
    pub v: Series,
    pub norm_sq: f64,
    pub k: KernelSpec,
    pub s: KernelSpec,
}

impl SarasonData {
    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        self.v.eval(z)
    }
}

pub(crate) fn check_dims(k: &KernelSpec, s: &KernelSpec, f: &VectorSeries) -> Result<()> {
    if s.dimension != k.dimension {
        return Err(Error::DimensionMismatch { expected: k.dimension, found: s.dimension });
    }
    if f.dim() != k.dimension {
        return Err(Error::DimensionMismatch { expected: k.dimension, found: f.dim() });
    }
    Ok(())
}

/// Diagonal coefficients of `g = k/s`; `NoCnpFactor` on the first negative one.
pub fn quotient_coeffs(k: &KernelSpec, s: &KernelSpec, order: usize) -> Result<DiagonalCoeffs> {
    if k.dimension != s.dimension {
        return Err(Error::DimensionMismatch { expected: k.dimension, found: s.dimension });
    }
    let row = cnp_row_function(s, order, 1e-12)?;
    let ck = diagonal_coeffs(k, order)?;
    let d = k.dimension;
    let kser = Series::from_coeffs(d, order, ck.values.iter().map(|&v| Complex64::new(v, 0.0)).collect())?;
    let mut inv = row.b.values.iter().map(|&v| Complex64::new(-v, 0.0)).collect::<Vec<_>>();
    inv[0] = Complex64::new(1.0, 0.0);
    let g = kser.mul(&Series::from_coeffs(d, order, inv)?)?;
    let values: Vec<f64> = g.coeffs().iter().map(|c| c.re).collect();
    for (index, (gv, kv)) in values.iter().zip(&ck.values).enumerate() {
        if *gv < -1e-10 * kv.max(1.0) {
            return Err(Error::NoCnpFactor { index, value: *gv });
        }
    }
    Ok(DiagonalCoeffs { dimension: d, order, values })
}

/// Nonzero terms of every component: `(exponent, layout index, coefficient)`.
fn support(f: &Series) -> Vec<(Exponent, usize, Complex64)> {
    let layout = f.layout();
    f.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != ZERO)
        .map(|(i, c)| (layout.exps[i], i, *c))
        .collect()
}

/// `<F, z^g F>_k` for all `|g| <= order`, in layout order; entry 0 is `||F||_k^2`.
pub(crate) fn shift_inner(kspace: &Space, f: &VectorSeries, order: usize) -> Result<Vec<Complex64>> {
    let d = f.dim();
    if f.order() > kspace.order() {
        return Err(Error::OrderMismatch(f.order(), kspace.order()));
    }
    let mut out = vec![ZERO; monomial::count_le(d, order)];
    for comp in f.components() {
        let terms = support(comp);
        for (eb, _, fb) in &terms {
            for (ed, id, fd) in &terms {
                let Some(g) = monomial::checked_sub(ed, eb) else { continue };
                if monomial::total_degree(&g) > order {
                    continue;
                }
                out[monomial::rank(&g, d)] += fd * fb.conj() * kspace.monomial_norm_sq(*id);
            }
        }
    }
    Ok(out)
}

/// `V_F` by the coefficient rule
/// `V_F = ||F||^2 + 2 sum_{g != 0} c^s_g z^g <F, z^g F>_k`,
/// valid for any pair of kernels diagonal in the monomials.
pub fn sarason_function(k: &KernelSpec, s: &KernelSpec, f: &VectorSeries, order: usize) -> Result<SarasonData> {
    check_dims(k, s, f)?;
    let used = order.min(f.degree());
    quotient_coeffs(k, s, used.max(1))?;
    let kspace = Space::new(k, f.order())?;
    let cs = diagonal_coeffs(s, used)?;
    let shifts = shift_inner(&kspace, f, used)?;
    let norm_sq = shifts[0].re;
    let mut coeffs = vec![ZERO; monomial::count_le(k.dimension, order)];
    coeffs[0] = Complex64::new(norm_sq, 0.0);
    for i in 1..shifts.len() {
        coeffs[i] = shifts[i] * (2.0 * cs.values[i]);
    }
    let v = Series::from_coeffs(k.dimension, order, coeffs)?;
    Ok(SarasonData { v, norm_sq, k: k.clone(), s: s.clone() })
}

/// Quadrature nodes `(w, weight)` of the measure representing the norm of `k`.
fn representing_nodes(k: &KernelSpec, radial: usize, angular: usize) -> Result<Vec<(Vec<Complex64>, f64)>> {
    let count = match (&k.family, k.dimension) {
        (Family::BergmanWeighted { .. }, 1) => radial * angular,
        (Family::HardyBall, 1) => angular,
        (Family::HardyBall, 2) => radial * angular * angular,
        _ => {
            return Err(Error::UnsupportedFamily(format!(
                "{} has no built-in representing measure",
                k.name()
            )))
        }
    };
    if count > QUADRATURE_BUDGET {
        return Err(Error::QuadratureBudgetExceeded { nodes: count, budget: QUADRATURE_BUDGET });
    }
    let angles = periodic_angles(angular);
    let aw = 1.0 / angular as f64;
    let mut out = Vec::with_capacity(count);
    match (&k.family, k.dimension) {
        (Family::BergmanWeighted { beta }, _) => {
            // (beta + 1) (1 - t)^beta dt dtheta / 2pi with t = r^2
            let (ts, ws) = radial_rule(*beta, radial);
            for ((t, one_minus), w) in ts.into_iter().zip(ws) {
                let weight = (beta + 1.0) * one_minus.powf(*beta) * w * aw;
                let r = t.sqrt();
                for &th in &angles {
                    out.push((vec![Complex64::from_polar(r, th)], weight));
                }
            }
        }
        (Family::HardyBall, 1) => {
            for &th in &angles {
                out.push((vec![Complex64::from_polar(1.0, th)], aw));
            }
        }
        _ => {
            // Sphere in C^2: w = (sqrt(t) e^{i a}, sqrt(1 - t) e^{i b}), d sigma = dt da db / 4 pi^2.
            let (ts, ws) = gauss_legendre_on(radial, 0.0, 1.0);
            for (t, w) in ts.into_iter().zip(ws) {
                let (r1, r2) = (t.sqrt(), (1.0 - t).sqrt());
                for &a in &angles {
                    for &b in &angles {
                        out.push((vec![Complex64::from_polar(r1, a), Complex64::from_polar(r2, b)], w * aw * aw));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Gauss-Legendre in `t` for integer `beta` (exact on the radial polynomials);
/// otherwise in `u` with `1 - t = u^4`, which smooths the endpoint factor.
fn radial_rule(beta: f64, n: usize) -> (Vec<(f64, f64)>, Vec<f64>) {
    let (x, w) = gauss_legendre_on(n, 0.0, 1.0);
    if beta.fract() == 0.0 {
        return (x.iter().map(|&t| (t, 1.0 - t)).collect(), w);
    }
    let m = 4.0;
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for (u, wu) in x.into_iter().zip(w) {
        let one_minus = u.powf(m);
        nodes.push((1.0 - one_minus, one_minus));
        weights.push(wu * m * u.powf(m - 1.0));
    }
    (nodes, weights)
}

/// `V_F(z) = int |F(w)|^2 (2 s(z, w) - 1) d mu(w)` where `mu` represents the norm of `k`
/// (weighted Bergman on the disc, Hardy space of the circle or of the sphere in `C^2`).
pub fn sarason_by_quadrature(
    k: &KernelSpec,
    s: &KernelSpec,
    f: &VectorSeries,
    grid: &PointSet,
    radial: usize,
    angular: usize,
) -> Result<Vec<Complex64>> {
    check_dims(k, s, f)?;
    let nodes = representing_nodes(k, radial, angular)?;
    let work = nodes.len() * grid.len().max(1);
    if work > QUADRATURE_BUDGET * 4 {
        return Err(Error::QuadratureBudgetExceeded { nodes: work, budget: QUADRATURE_BUDGET * 4 });
    }
    let mass: Vec<f64> = nodes.iter().map(|(w, wt)| Ok(f.norm_sq_at(w)? * wt)).collect::<Result<_>>()?;
    grid.points
        .iter()
        .map(|z| {
            let mut acc = ZERO;
            for ((w, _), m) in nodes.iter().zip(&mass) {
                acc += (s.eval_to_boundary(z, w)? * 2.0 - 1.0) * *m;
            }
            Ok(acc)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Domain;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn scalar(v: &[f64]) -> VectorSeries {
        VectorSeries::scalar(Series::univariate_real(v))
    }

    #[test]
    fn hardy_space_examples() {
        let s = KernelSpec::szego();
        let one = sarason_function(&s, &s, &scalar(&[1.0]), 5).unwrap();
        assert_eq!(one.v.coeffs()[0], c(1.0, 0.0));
        assert!(one.v.coeffs()[1..].iter().all(|x| *x == ZERO));
        let z = sarason_function(&s, &s, &scalar(&[0.0, 1.0]), 5).unwrap();
        assert!(z.v.coeffs()[1..].iter().all(|x| *x == ZERO));
        let h = 0.5f64.sqrt();
        let f = sarason_function(&s, &s, &scalar(&[h, h]), 5).unwrap();
        assert!((f.v.coeffs()[0] - 1.0).norm() < 1e-15);
        assert!((f.v.coeffs()[1] - 1.0).norm() < 1e-15);
        assert!(f.v.coeffs()[2..].iter().all(|x| x.norm() < 1e-16));
    }

    #[test]
    fn quotients_of_builtin_pairs_are_positive() {
        let pairs = [
            (KernelSpec::bergman(0.0).unwrap(), KernelSpec::szego()),
            (KernelSpec::bergman(0.0).unwrap(), KernelSpec::dirichlet(0.5).unwrap()),
            (KernelSpec::hardy_ball(2).unwrap(), KernelSpec::drury_arveson(2).unwrap()),
        ];
        for (k, s) in &pairs {
            let g = quotient_coeffs(k, s, 40).unwrap();
            assert!(g.values.iter().all(|&v| v >= 0.0));
        }
        // H^2 is not contained in D_alpha
        assert!(matches!(
            quotient_coeffs(&KernelSpec::dirichlet(0.5).unwrap(), &KernelSpec::szego(), 10),
            Err(Error::NoCnpFactor { .. })
        ));
    }

    #[test]
    fn quadrature_base_examples() {
        let k = KernelSpec::bergman(0.0).unwrap();
        let s = KernelSpec::szego();
        let grid = PointSet::disc(&[c(0.0, 0.0), c(0.3, 0.4)]).unwrap();
        let one = sarason_by_quadrature(&k, &s, &scalar(&[1.0]), &grid, 64, 64).unwrap();
        for v in one {
            assert!((v - 1.0).norm() < 1e-13);
        }
        let z = sarason_by_quadrature(&k, &s, &scalar(&[0.0, 1.0]), &grid, 64, 64).unwrap();
        assert!((z[0] - 0.5).norm() < 1e-14);
        let rule = sarason_function(&k, &s, &scalar(&[0.0, 1.0]), 4).unwrap();
        assert!((z[1] - rule.eval(&grid.points[1]).unwrap()).norm() < 1e-13);
    }

    #[test]
    fn fractional_weight_quadrature() {
        let k = KernelSpec::bergman(0.5).unwrap();
        let s = KernelSpec::szego();
        let f = scalar(&[0.3, -0.2, 0.5, 0.1]);
        let grid = PointSet::random(Domain::Ball, 1, 6, 0.8, 1).unwrap();
        let q = sarason_by_quadrature(&k, &s, &f, &grid, 256, 256).unwrap();
        let rule = sarason_function(&k, &s, &f, 3).unwrap();
        for (z, v) in grid.points.iter().zip(q) {
            let want = rule.eval(z).unwrap();
            assert!((v - want).norm() < 1e-11 * want.norm(), "{v} vs {want}");
        }
    }

    #[test]
    fn unsupported_measure() {
        let k = KernelSpec::drury_arveson(2).unwrap();
        let grid = PointSet::random(Domain::Ball, 2, 2, 0.5, 1).unwrap();
        let f = VectorSeries::scalar(Series::constant(2, 1, c(1.0, 0.0)).unwrap());
        assert!(matches!(
            sarason_by_quadrature(&k, &k, &f, &grid, 8, 8),
            Err(Error::UnsupportedFamily(_))
        ));
    }
}
