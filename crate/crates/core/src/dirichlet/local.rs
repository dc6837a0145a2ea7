//! Local Dirichlet integrals and Shimorin's formula for `Re V_f` in `D_alpha`.

use super::measure::DiscMeasure;
use super::s1;
use crate::error::{Error, Result};
use crate::quadrature::periodic_angles;
use crate::series::Series;
use num_complex::Complex64;
use serde::Serialize;

/// Upper bound on measure nodes times boundary nodes per evaluation.
pub const SHIMORIN_BUDGET: usize = 1 << 24;

fn univariate(f: &Series) -> Result<()> {
    if f.dim() != 1 {
        return Err(Error::NotUnivariate);
    }
    Ok(())
}

/// `D_zeta(f)`, the `H^2` norm squared of `(f - f(zeta))/(z - zeta)`, for a polynomial `f`.
pub fn local_dirichlet(f: &Series, zeta: Complex64) -> Result<f64> {
    univariate(f)?;
    if zeta.norm() > 1.0 + 1e-12 {
        return Err(Error::PointOutsideDomain(format!("{zeta}")));
    }
    let c = f.coeffs();
    let n = f.degree();
    // q_{j} = f_{j+1} + zeta q_{j+1}
    let mut q = Complex64::new(0.0, 0.0);
    let mut total = 0.0;
    for m in (1..=n).rev() {
        q = c[m] + zeta * q;
        total += q.norm_sqr();
    }
    Ok(total)
}

#[derive(Debug, Clone, Serialize)]
pub struct NormRow {
    pub n: usize,
    /// `||z^n||^2_{H^2} + int D_zeta(z^n) dmu`.
    pub lhs: f64,
    /// `1 / c_n`.
    pub rhs: f64,
    pub rel_err: f64,
}

/// Compares the `D(mu)` norm of `z^n` with `1/c_n`, `n <= max_n`.
pub fn norm_equality_check(alpha: f64, max_n: usize, measure: &DiscMeasure) -> Result<Vec<NormRow>> {
    let c = s1::dalpha_coeffs(alpha, max_n)?;
    let mut rows = Vec::with_capacity(max_n + 1);
    for n in 0..=max_n {
        let mut v = vec![0.0; n + 1];
        v[n] = 1.0;
        let zn = Series::univariate_real(&v);
        let mut integral = 0.0;
        for node in measure.nodes() {
            integral += node.weight * local_dirichlet(&zn, node.z)?;
        }
        let lhs = 1.0 + integral;
        let rhs = 1.0 / c[n];
        rows.push(NormRow { n, lhs, rhs, rel_err: (lhs - rhs).abs() / rhs });
    }
    Ok(rows)
}

/// `Re V_f(z)` in `D_alpha` from Shimorin's formula: the Poisson integral of `|f|^2`
/// plus `int (2 Re s_z(zeta) - 1) D_zeta(f) dmu_alpha(zeta)`.
pub fn shimorin_re_v(alpha: f64, f: &Series, z: Complex64, measure: &DiscMeasure, boundary_nodes: usize) -> Result<f64> {
    univariate(f)?;
    if z.norm() >= 1.0 {
        return Err(Error::PointOutsideDomain(format!("{z}")));
    }
    let work = measure.len() * (f.degree() + 1) + boundary_nodes;
    if work > SHIMORIN_BUDGET {
        return Err(Error::QuadratureBudgetExceeded { nodes: work, budget: SHIMORIN_BUDGET });
    }
    let s = s1::shared(alpha)?;
    let t = 1.0 - z.norm_sqr();
    let mut poisson = 0.0;
    for th in periodic_angles(boundary_nodes) {
        let zeta = Complex64::from_polar(1.0, th);
        poisson += t * f.eval(&[zeta])?.norm_sqr() / (1.0 - zeta.conj() * z).norm_sqr();
    }
    poisson /= boundary_nodes as f64;
    let mut integral = 0.0;
    for node in measure.nodes() {
        let dz = local_dirichlet(f, node.z)?;
        if dz == 0.0 {
            continue;
        }
        let sz = s.value(node.z * z.conj());
        integral += node.weight * (2.0 * sz.re - 1.0) * dz;
    }
    Ok(poisson + integral)
}
