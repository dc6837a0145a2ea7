//! Numerical checks of the inequalities satisfied by Sarason functions.

use super::{check_dims, quotient_coeffs, sarason_function, shift_inner};
use crate::error::{Error, Result};
use crate::kernel::{Domain, KernelSpec, PointSet};
use crate::monomial;
use crate::psd::{hermitian_from, psd_check, PsdReport, Verdict};
use crate::series::{Series, VectorSeries};
use crate::space::Space;
use num_complex::Complex64;
use serde::Serialize;
use std::io::Write;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Largest number of coefficients a truncated product `s_z F` may have.
pub const PRODUCT_BUDGET: usize = 1 << 22;
pub const MAJORANT_TOL: f64 = 1e-8;
pub const EXTREMAL_TOL: f64 = 1e-10;
pub const RECOVERY_TOL: f64 = 1e-6;

/// Size of `z` controlling the decay of `s_z`.
fn radius(domain: Domain, z: &[Complex64]) -> f64 {
    match domain {
        Domain::Ball => z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt(),
        Domain::Polydisc => z.iter().map(|c| c.norm()).fold(0.0, f64::max),
    }
}

/// Order past which the squared terms of `s_z`, `|z| <= r`, fall below `e^-40`.
pub fn tail_order(degree: usize, r: f64) -> usize {
    if r <= 0.0 {
        return degree.max(1);
    }
    degree + (20.0 / -r.ln()).ceil() as usize + 4
}

fn product_order(s: &KernelSpec, f: &VectorSeries, pts: &[Vec<Complex64>]) -> Result<usize> {
    let r = pts.iter().map(|z| radius(s.domain(), z)).fold(0.0, f64::max);
    if r >= 1.0 {
        return Err(Error::PointOutsideDomain(format!("radius {r}")));
    }
    let n = tail_order(f.degree(), r);
    let count = monomial::count_le(s.dimension, n);
    if count > PRODUCT_BUDGET {
        return Err(Error::QuadratureBudgetExceeded { nodes: count, budget: PRODUCT_BUDGET });
    }
    Ok(n)
}

/// `s_z F` truncated at `order`.
fn s_times(s: &KernelSpec, z: &[Complex64], f: &VectorSeries, order: usize) -> Result<VectorSeries> {
    let sz = s.kernel_series(z, order)?;
    f.with_order(order).map(|c| sz.mul(c))
}

/// Products `s_{z_i} F` and the space they are measured in.
fn products(k: &KernelSpec, s: &KernelSpec, f: &VectorSeries, pts: &PointSet) -> Result<(Space, Vec<VectorSeries>)> {
    check_dims(k, s, f)?;
    if pts.dimension != k.dimension {
        return Err(Error::DimensionMismatch { expected: k.dimension, found: pts.dimension });
    }
    let n = product_order(s, f, &pts.points)?;
    let kspace = Space::new(k, n)?;
    let prods = pts.points.iter().map(|z| s_times(s, z, f, n)).collect::<Result<Vec<_>>>()?;
    Ok((kspace, prods))
}

/// PSD test of `<s_i F, F> + <F, s_j F> - ||F||^2 - <s_i F, s_j F> / s(z_j, z_i)`.
pub fn main_lemma_psd(k: &KernelSpec, s: &KernelSpec, f: &VectorSeries, pts: &PointSet, tol: f64) -> Result<PsdReport> {
    let (kspace, prods) = products(k, s, f, pts)?;
    let fo = f.with_order(kspace.order());
    let norm = kspace.vnorm_sq(&fo)?;
    let with_f = prods.iter().map(|p| kspace.vinner(p, &fo)).collect::<Result<Vec<_>>>()?;
    let m = hermitian_from(pts.len(), |i, j| {
        let sji = s.eval(&pts.points[j], &pts.points[i])?;
        if sji.norm() < 1e-300 {
            return Err(Error::DivisionByZero(j, i));
        }
        let cross = kspace.vinner(&prods[i], &prods[j])?;
        Ok(with_f[i] + with_f[j].conj() - norm - cross / sji)
    })?;
    psd_check(&m, tol)
}

/// `||s_z F||_s^2` for a unitarily invariant `s` on the ball, by rotating `z` to `|z| e_1`,
/// where `s_{|z| e_1}(w) = sum_n p_n |z|^n w_1^n` for the radial profile `p`.
fn rotated_norm_sq(sspace: &Space, z: &[Complex64], f: &VectorSeries) -> Result<f64> {
    let s = sspace.spec();
    let d = s.dimension;
    let r = radius(Domain::Ball, z);
    if r == 0.0 {
        return sspace.vnorm_sq(&f.with_order(f.order().min(sspace.order())));
    }
    let n = sspace.order();
    let u = unitary_from(z, r);
    let profile = s.profile(n)?;
    let weights: Vec<f64> = (0..=n).map(|m| profile[m] * r.powi(m as i32)).collect();
    let mut total = 0.0;
    for comp in f.components() {
        let g = comp.compose_linear(&u)?;
        // group G by the exponent of w_2..w_d; each group convolves with the profile in w_1
        let layout = g.layout();
        let mut groups: std::collections::BTreeMap<Vec<u32>, Vec<(usize, Complex64)>> = Default::default();
        for (e, c) in layout.exps.iter().zip(g.coeffs()) {
            if *c != ZERO {
                groups.entry(e[1..d].to_vec()).or_default().push((e[0] as usize, *c));
            }
        }
        for (tail, terms) in groups {
            let used = tail.iter().sum::<u32>() as usize;
            if used > n {
                continue;
            }
            let len = n - used + 1;
            let mut h = vec![ZERO; len];
            for &(j, c) in &terms {
                for (m, w) in weights.iter().take(len.saturating_sub(j)).enumerate() {
                    h[j + m] += c * *w;
                }
            }
            let mut e: monomial::Exponent = [0; monomial::MAX_DIM];
            e[1..d].copy_from_slice(&tail);
            for (m, hm) in h.iter().enumerate() {
                e[0] = m as u32;
                total += hm.norm_sqr() * sspace.monomial_norm_sq(monomial::rank(&e, d));
            }
        }
    }
    Ok(total)
}

/// Unitary with first column `z / r`; rows give the coordinates of `U w`.
fn unitary_from(z: &[Complex64], r: f64) -> Vec<Vec<Complex64>> {
    let d = z.len();
    let mut cols: Vec<Vec<Complex64>> = vec![z.iter().map(|c| c / r).collect()];
    for i in 0..d {
        if cols.len() == d {
            break;
        }
        let mut v = vec![ZERO; d];
        v[i] = ONE;
        for _ in 0..2 {
            for u in &cols {
                let p: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= p * y;
                }
            }
        }
        let nv: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if nv > 1e-8 {
            cols.push(v.into_iter().map(|c| c / nv).collect());
        }
    }
    (0..d).map(|j| cols.iter().map(|c| c[j]).collect()).collect()
}

fn radial_ball(s: &KernelSpec) -> bool {
    s.domain() == Domain::Ball && !s.is_product()
}

#[derive(Debug, Clone, Serialize)]
pub struct MajorantRow {
    pub z: Vec<Complex64>,
    pub lhs: f64,
    /// `||s_z F||^2 / s(z, z)`, only when `k = s`.
    pub mid: Option<f64>,
    pub rhs: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct MajorantTable {
    pub rows: Vec<MajorantRow>,
    pub worst_slack: f64,
    pub verdict: Verdict,
}

impl MajorantTable {
    /// Columns `re_z, im_z, lhs, mid, rhs, verdict`; the first coordinate is written.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["re_z", "im_z", "lhs", "mid", "rhs", "verdict"])?;
        for r in &self.rows {
            let mid = r.mid.map(|m| m.to_string()).unwrap_or_default();
            let verdict = if r.verdict.passed() { "pass" } else { "fail" };
            w.write_record([r.z[0].re.to_string(), r.z[0].im.to_string(), r.lhs.to_string(), mid, r.rhs.to_string(), verdict.into()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `s(z,z)/k(z,z) ||F(z)||^2 <= Re V_F(z)` on `grid`; for `k = s` also
/// `||F(z)||^2 <= ||s_z F||^2 / s(z,z) <= Re V_F(z)`.
pub fn majorant_check(k: &KernelSpec, s: &KernelSpec, f: &VectorSeries, grid: &PointSet) -> Result<MajorantTable> {
    check_dims(k, s, f)?;
    let v = sarason_function(k, s, f, f.degree().max(1))?;
    let same = k == s;
    let mid_space = if same { Some(Space::new(s, product_order(s, f, &grid.points)?)?) } else { None };
    let mut rows = Vec::with_capacity(grid.len());
    let mut worst = f64::INFINITY;
    for z in &grid.points {
        let szz = s.eval(z, z)?.re;
        let lhs = szz / k.eval(z, z)?.re * f.norm_sq_at(z)?;
        let rhs = v.eval(z)?.re;
        let mid = match &mid_space {
            None => None,
            Some(sp) => {
                let nsq = if radial_ball(s) && s.dimension > 1 {
                    rotated_norm_sq(sp, z, f)?
                } else {
                    sp.vnorm_sq(&s_times(s, z, f, sp.order())?)?
                };
                Some(nsq / szz)
            }
        };
        let slack = match mid {
            Some(m) => (m - lhs).min(rhs - m),
            None => rhs - lhs,
        };
        worst = worst.min(slack);
        rows.push(MajorantRow { z: z.clone(), lhs, mid, rhs, verdict: Verdict::from_bool(slack >= -MAJORANT_TOL) });
    }
    if rows.is_empty() {
        worst = 0.0;
    }
    Ok(MajorantTable { rows, worst_slack: worst, verdict: Verdict::from_bool(worst >= -MAJORANT_TOL) })
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtremalReport {
    /// `max |<z^g F, F>_k - delta_{g0}|` over `|g| <= max_degree`.
    pub deviation: f64,
    pub verdict: Verdict,
}

/// Tests `<z^g F, F>_k = delta_{g0}` on monomial multipliers.
pub fn extremal_check(k: &KernelSpec, f: &VectorSeries, max_degree: usize) -> Result<ExtremalReport> {
    if f.dim() != k.dimension {
        return Err(Error::DimensionMismatch { expected: k.dimension, found: f.dim() });
    }
    let kspace = Space::new(k, f.order())?;
    let shifts = shift_inner(&kspace, f, max_degree)?;
    let deviation = shifts
        .iter()
        .enumerate()
        .map(|(i, c)| if i == 0 { (c - ONE).norm() } else { c.norm() })
        .fold(0.0, f64::max);
    Ok(ExtremalReport { deviation, verdict: Verdict::from_bool(deviation <= EXTREMAL_TOL) })
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtremalBoundRow {
    pub z: Vec<Complex64>,
    pub value: f64,
    /// `k(z,z)/s(z,z)`.
    pub bound: f64,
    /// `(1 - |z|^2) k(z,z)`, on the ball when the coordinates form a row contraction on `H_k`.
    pub ball_bound: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtremalBoundTable {
    pub rows: Vec<ExtremalBoundRow>,
    pub verdict: Verdict,
}

/// Pointwise bounds for an extremal `F`. `kdiag` replaces `k(z,z)` on the grid,
/// e.g. by the diagonal of a subspace kernel.
pub fn extremal_bound_check(
    k: &KernelSpec,
    s: &KernelSpec,
    f: &VectorSeries,
    grid: &PointSet,
    kdiag: Option<&[f64]>,
) -> Result<ExtremalBoundTable> {
    check_dims(k, s, f)?;
    if let Some(kd) = kdiag {
        if kd.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), found: kd.len() });
        }
    }
    // the coordinates form a row contraction iff k/DA is positive
    let row_contraction = k.domain() == Domain::Ball
        && KernelSpec::drury_arveson(k.dimension).and_then(|da| quotient_coeffs(k, &da, 40)).is_ok();
    let mut rows = Vec::with_capacity(grid.len());
    let mut all = Verdict::Pass;
    for (i, z) in grid.points.iter().enumerate() {
        let kzz = match kdiag {
            Some(kd) => kd[i],
            None => k.eval(z, z)?.re,
        };
        let value = f.norm_sq_at(z)?;
        let bound = kzz / s.eval(z, z)?.re;
        let ball_bound = row_contraction.then(|| (1.0 - z.iter().map(|c| c.norm_sqr()).sum::<f64>()) * kzz);
        let tol = 1e-10 * bound.max(1.0);
        let ok = value <= bound + tol && ball_bound.is_none_or(|b| value <= b + tol);
        let verdict = Verdict::from_bool(ok);
        all = all.and(verdict);
        rows.push(ExtremalBoundRow { z: z.clone(), value, bound, ball_bound, verdict });
    }
    Ok(ExtremalBoundTable { rows, verdict: all })
}

#[derive(Debug, Clone, Serialize)]
pub struct UniquenessReport {
    pub psd: PsdReport,
    /// `max |L(z_i, z_0)|`, when `psi(z_0) = 0`.
    pub base_column_max: Option<f64>,
    /// `max |(1 + psi)/(1 - psi) - V_F|` on the points, when `psi(z_0) = 0`.
    pub recovery_error: Option<f64>,
    pub recovery: Verdict,
    pub verdict: Verdict,
}

/// PSD test of `L(z_i, z_j) = s(z_j, z_i)[Q(z_j) + conj Q(z_i)] - 2 <s_i F, s_j F>_k`,
/// `Q = (1 + psi)/(1 - psi)`, and recovery of `V_F` from a candidate `psi`.
pub fn uniqueness_kernel_psd(
    k: &KernelSpec,
    s: &KernelSpec,
    f: &VectorSeries,
    psi: &Series,
    pts: &PointSet,
    tol: f64,
) -> Result<UniquenessReport> {
    let (kspace, prods) = products(k, s, f, pts)?;
    let norm = kspace.vnorm_sq(&f.with_order(kspace.order()))?;
    if (norm.sqrt() - 1.0).abs() > 1e-10 {
        return Err(Error::NotUnitNorm(norm.sqrt()));
    }
    let q = |z: &[Complex64]| -> Result<Complex64> {
        let p = psi.eval(z)?;
        Ok((1.0 + p) / (1.0 - p))
    };
    let qs = pts.points.iter().map(|z| q(z)).collect::<Result<Vec<_>>>()?;
    let m = hermitian_from(pts.len(), |i, j| {
        let sji = s.eval(&pts.points[j], &pts.points[i])?;
        Ok(sji * (qs[j] + qs[i].conj()) - 2.0 * kspace.vinner(&prods[i], &prods[j])?)
    })?;
    let psd = psd_check(&m, tol)?;

    let base = psi.coeffs()[0];
    let (base_column_max, recovery_error, recovery) = if base.norm() <= 1e-12 {
        let v = sarason_function(k, s, f, f.degree().max(1))?;
        let fo = f.with_order(kspace.order());
        let mut col: f64 = 0.0;
        let mut rec: f64 = 0.0;
        for (z, (p, qz)) in pts.points.iter().zip(prods.iter().zip(&qs)) {
            // L(z, z_0) with s_{z_0} = 1
            let l = ONE + qz.conj() - 2.0 * kspace.vinner(p, &fo)?;
            col = col.max(l.norm());
            rec = rec.max((qz - v.eval(z)?).norm());
        }
        (Some(col), Some(rec), Verdict::from_bool(col <= RECOVERY_TOL && rec <= RECOVERY_TOL))
    } else {
        (None, None, Verdict::Pass)
    };
    let verdict = psd.verdict.and(recovery);
    Ok(UniquenessReport { psd, base_column_max, recovery_error, recovery, verdict })
}
