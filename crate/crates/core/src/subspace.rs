//! Reproducing kernels of multiplier-invariant subspaces, cut to polynomials.

use crate::error::{Error, Result};
use crate::kernel::{diagonal_coeffs, power, KernelSpec, PointSet};
use crate::monomial::{self, Exponent};
use crate::psd::{hermitian_from, psd_check, PsdReport};
use nalgebra::DMatrix;
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub enum Constraint {
    None,
    /// Functions vanishing at every listed point.
    VanishAt(PointSet),
    /// Functions whose Taylor coefficients of total degree below `m` vanish.
    MinDegree(usize),
}

#[derive(Debug, Clone)]
pub struct SubspaceKernel {
    /// Dimension of the constrained polynomial space.
    pub rank: usize,
    /// `k^M(z_i, z_j)` on the evaluation points.
    pub values: DMatrix<Complex64>,
}

impl SubspaceKernel {
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.values.nrows()).map(|i| self.values[(i, i)].re).collect()
    }
}

/// Orthonormal coordinates `E(z)_g = sqrt(c_g) z^g` of the point evaluation.
fn feature(z: &[Complex64], exps: &[Exponent], sqrt_c: &[f64]) -> Vec<Complex64> {
    exps.iter().zip(sqrt_c).map(|(e, r)| power(z, e) * *r).collect()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthonormalizes `vs` (modified Gram-Schmidt, two passes), dropping dependent vectors.
fn orthonormalize(vs: Vec<Vec<Complex64>>) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for mut v in vs {
        let start: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if start == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for u in &basis {
                let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= proj * y;
                }
            }
        }
        let n: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-10 * start {
            basis.push(v.into_iter().map(|c| c / n).collect());
        }
    }
    basis
}

pub fn invariant_subspace_kernel(
    k: &KernelSpec,
    constraint: &Constraint,
    order: usize,
    eval_pts: &PointSet,
) -> Result<SubspaceKernel> {
    if eval_pts.dimension != k.dimension {
        return Err(Error::DimensionMismatch { expected: k.dimension, found: eval_pts.dimension });
    }
    let c = diagonal_coeffs(k, order)?;
    let layout = monomial::layout(k.dimension, order);
    let sqrt_c: Vec<f64> = c.values.iter().map(|v| v.sqrt()).collect();
    let total = layout.len();

    let mut keep = vec![true; total];
    let mut removed: Vec<Vec<Complex64>> = Vec::new();
    match constraint {
        Constraint::None => {}
        Constraint::MinDegree(m) => {
            for (i, e) in layout.exps.iter().enumerate() {
                keep[i] = monomial::total_degree(e) >= *m;
            }
        }
        Constraint::VanishAt(pts) => {
            if pts.dimension != k.dimension {
                return Err(Error::DimensionMismatch { expected: k.dimension, found: pts.dimension });
            }
            // p(a) = E(a)^T x = 0, i.e. x is orthogonal to conj(E(a)).
            let rows = pts
                .points
                .iter()
                .map(|a| feature(a, &layout.exps, &sqrt_c).into_iter().map(|v| v.conj()).collect())
                .collect();
            removed = orthonormalize(rows);
        }
    }
    let rank = keep.iter().filter(|&&b| b).count() - removed.len();
    if rank == 0 {
        return Err(Error::DegenerateConstraint);
    }

    let feats: Vec<Vec<Complex64>> = eval_pts
        .points
        .iter()
        .map(|z| {
            feature(z, &layout.exps, &sqrt_c)
                .into_iter()
                .zip(&keep)
                .map(|(v, &kp)| if kp { v } else { Complex64::new(0.0, 0.0) })
                .collect()
        })
        .collect();
    let proj: Vec<Vec<Complex64>> = feats.iter().map(|f| removed.iter().map(|u| dot(f, u)).collect()).collect();
    let values = hermitian_from(eval_pts.len(), |i, j| {
        let full: Complex64 = feats[i].iter().zip(&feats[j]).map(|(a, b)| a * b.conj()).sum();
        let cut: Complex64 = proj[i].iter().zip(&proj[j]).map(|(a, b)| a * b.conj()).sum();
        Ok(full - cut)
    })?;
    Ok(SubspaceKernel { rank, values })
}

/// PSD test of `[k^M(z_i, z_j) / s(z_i, z_j)]`.
pub fn subspace_quotient_psd(sub: &SubspaceKernel, s: &KernelSpec, pts: &PointSet, tol: f64) -> Result<PsdReport> {
    let m = hermitian_from(pts.len(), |i, j| {
        let sv = s.eval(&pts.points[i], &pts.points[j])?;
        if sv.norm() < 1e-300 {
            return Err(Error::DivisionByZero(i, j));
        }
        Ok(sub.values[(i, j)] / sv)
    })?;
    psd_check(&m, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{gram_matrix, Domain};
    use crate::psd::DEFAULT_PSD_TOL;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn vanishing_at_origin_in_hardy_space() {
        let s = KernelSpec::szego();
        let pts = PointSet::disc(&[c(0.5)]).unwrap();
        let at0 = PointSet::disc(&[c(0.0)]).unwrap();
        let kv = invariant_subspace_kernel(&s, &Constraint::VanishAt(at0), 80, &pts).unwrap();
        assert!((kv.values[(0, 0)].re - 1.0 / 3.0).abs() < 1e-6);
        let km = invariant_subspace_kernel(&s, &Constraint::MinDegree(1), 80, &pts).unwrap();
        assert!((km.values[(0, 0)].re - 1.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn no_constraint_recovers_the_kernel() {
        let k = KernelSpec::drury_arveson(2).unwrap();
        let pts = PointSet::random(Domain::Ball, 2, 6, 0.5, 2).unwrap();
        let sub = invariant_subspace_kernel(&k, &Constraint::None, 60, &pts).unwrap();
        let g = gram_matrix(&k, &pts).unwrap();
        assert!((sub.values - g).camax() < 1e-12);
    }

    #[test]
    fn bergman_subspace_over_szego_is_positive() {
        let k = KernelSpec::bergman(0.0).unwrap();
        let s = KernelSpec::szego();
        let zero = PointSet::disc(&[c(0.3)]).unwrap();
        let pts = PointSet::random(Domain::Ball, 1, 10, 0.8, 4).unwrap();
        let sub = invariant_subspace_kernel(&k, &Constraint::VanishAt(zero), 200, &pts).unwrap();
        for z in sub.diagonal() {
            assert!(z > 0.0);
        }
        assert!(subspace_quotient_psd(&sub, &s, &pts, DEFAULT_PSD_TOL).unwrap().verdict.passed());
    }

    #[test]
    fn full_constraint_is_degenerate() {
        let s = KernelSpec::szego();
        let pts = PointSet::disc(&[c(0.1)]).unwrap();
        let zeros = PointSet::disc(&[c(0.0), c(0.2), c(-0.3)]).unwrap();
        assert!(matches!(
            invariant_subspace_kernel(&s, &Constraint::VanishAt(zeros), 2, &pts),
            Err(Error::DegenerateConstraint)
        ));
    }
}
