//! `f = 1 - 1/s_1` composed with Blaschke products whose zeros accumulate at 1,
//! and the growth of `sup Re V_{B o f}` with the number of zeros.
//!
//! The Sarason functions here are evaluated from the derivative form of the norm,
//! `<u, v>_alpha = <u, v>_{H^2} + int u' conj(v') (1 - |z|^2)^alpha dA/pi`,
//! as `Re V_g(z) = 2 Re <g, s_z g>_alpha - ||g||_alpha^2`. The quadrature is graded
//! geometrically towards `zeta = 1`, where `B o f` varies on scales down to `1e-13`.

use super::blaschke::BlaschkeProduct;
use super::measure::RadialRule;
use super::s1::{self, S1};
use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre_on, tanh_sinh};
use crate::series::Series;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WPoint {
    pub z: f64,
    pub w: f64,
    /// `1 - w`, kept at full relative precision.
    pub one_minus_w: f64,
    /// `|s_1(w)(1 - z) - 1|`.
    pub residual: f64,
}

/// Smallest `1 - w` tried by `find_w`.
const MIN_GAP: f64 = 1e-280;

/// Solves `s_1(w) = 1/(1 - z)` for `w` in `[0, 1)`, given `gap = 1 - z`.
pub fn find_w_gap(alpha: f64, gap: f64) -> Result<WPoint> {
    let s = s1::shared(alpha)?;
    let target = 1.0 / gap;
    if !(gap > 0.0 && gap <= 1.0) {
        return Err(Error::TargetOutOfRange(target));
    }
    if gap == 1.0 {
        return Ok(WPoint { z: 0.0, w: 0.0, one_minus_w: 1.0, residual: 0.0 });
    }
    if s.at_one_minus(MIN_GAP).0 < target {
        return Err(Error::TargetOutOfRange(target));
    }
    // s_1(1 - delta) decreases in delta; bisect in ln(delta)
    let (mut lo, mut hi) = (MIN_GAP.ln(), 0.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if s.at_one_minus(mid.exp()).0 > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 {
            break;
        }
    }
    let one_minus_w = (0.5 * (lo + hi)).exp();
    let residual = (s.at_one_minus(one_minus_w).0 * gap - 1.0).abs();
    Ok(WPoint { z: 1.0 - gap, w: 1.0 - one_minus_w, one_minus_w, residual })
}

pub fn find_w(alpha: f64, z: f64) -> Result<WPoint> {
    if !(0.0..1.0).contains(&z) {
        return Err(Error::TargetOutOfRange(z));
    }
    find_w_gap(alpha, 1.0 - z)
}

/// Taylor coefficients of `f = 1 - 1/s_1` up to `order`, after checking
/// `f(0) = 0` and `|f| < 1` on a polar grid of radius up to `1 - 1e-6`.
pub fn f_contractive(alpha: f64, order: usize) -> Result<Series> {
    let s = s1::shared(alpha)?;
    let c = s1::dalpha_coeffs(alpha, order)?;
    let sser = Series::univariate_real(&c);
    let f = sser.reciprocal()?.scale(Complex64::new(-1.0, 0.0)).add_constant(Complex64::new(1.0, 0.0));
    if f.coeffs()[0].norm() > 1e-15 {
        return Err(Error::InvalidArgument("f(0) != 0".into()));
    }
    for i in 0..=24 {
        let gap = 10f64.powf(-6.0 * i as f64 / 24.0);
        for j in 0..64 {
            let h = 1.0 - Complex64::from_polar(1.0 - gap, 2.0 * PI * j as f64 / 64.0);
            let (v, _) = s.eval_one_minus(h);
            let fz = 1.0 - 1.0 / v;
            if fz.norm() >= 1.0 {
                return Err(Error::InvalidArgument(format!("|f| = {} at radius {}", fz.norm(), 1.0 - gap)));
            }
        }
    }
    Ok(f)
}

#[derive(Debug, Clone, Serialize)]
pub struct S1Report {
    pub alpha: f64,
    /// `min Re s_1 - 1/2` over the grid.
    pub re_margin: f64,
    /// Range of `s_1(r)(1 - r)^alpha` for `r` in `[0.9, 0.999]`.
    pub value_band: (f64, f64),
    /// Range of `s_1'(r)(1 - r)^{alpha + 1}` for `r` in `[0.9, 0.999]`.
    pub deriv_band: (f64, f64),
    /// Calibrated sector width and lower constant.
    pub epsilon: f64,
    pub delta: f64,
    /// `min Re s_1(z)(1 - |z|)^alpha / delta` on sample points of the sector.
    pub sector_ratio: f64,
    pub passed: bool,
}

fn abs_gap(h: Complex64) -> f64 {
    // 1 - |1 - h|
    -(0.5 * (h.norm_sqr() - 2.0 * h.re).ln_1p()).exp_m1()
}

/// Checks `Re s_1 > 1/2`, the growth bands of `s_1` and `s_1'` near 1, and calibrates
/// `(epsilon, delta)` with `Re s_1(z) >= delta (1 - |z|)^-alpha` on
/// `{|z - |z|| < epsilon (1 - |z|)}`.
pub fn s1_properties_check(alpha: f64, radii: usize, angles: usize) -> Result<S1Report> {
    let s = s1::shared(alpha)?;
    let mut re_min = f64::INFINITY;
    for i in 0..=radii {
        let gap = 10f64.powf(-9.0 * i as f64 / radii as f64);
        for j in 0..angles {
            let h = 1.0 - Complex64::from_polar(1.0 - gap, 2.0 * PI * (j as f64 + 0.5) / angles as f64);
            re_min = re_min.min(s.eval_one_minus(h).0.re);
        }
    }
    let band = |lo: f64, hi: f64, count: usize| -> ((f64, f64), (f64, f64)) {
        let mut vb = (f64::INFINITY, 0.0f64);
        let mut db = (f64::INFINITY, 0.0f64);
        for i in 0..=count {
            let gap = lo * (hi / lo).powf(i as f64 / count as f64);
            let (v, d) = s.at_one_minus(gap);
            let a = v * gap.powf(alpha);
            let b = d * gap.powf(alpha + 1.0);
            vb = (vb.0.min(a), vb.1.max(a));
            db = (db.0.min(b), db.1.max(b));
        }
        (vb, db)
    };
    let (value_band, deriv_band) = band(0.1, 0.001, 60);
    // constants over the whole range 1 - r in [1e-12, 1)
    let (wide_v, wide_d) = band(1.0 - 1e-9, 1e-12, 240);
    let epsilon = (wide_v.0 / (2.0 * wide_d.1)).min(0.9);
    let delta = wide_v.0 / 2.0;
    let mut sector_ratio = f64::INFINITY;
    for i in 0..=60 {
        let c = 10f64.powf(-0.3 - 11.0 * i as f64 / 60.0);
        for j in 0..16 {
            // discs of radius epsilon/3 (1 - c) around 1 - c lie in the sector
            let h = c - epsilon / 3.0 * c * Complex64::from_polar(0.99, 2.0 * PI * j as f64 / 16.0);
            let g = abs_gap(h);
            let modulus = 1.0 - g;
            let z = 1.0 - h;
            if (z - modulus).norm() >= epsilon * g {
                continue;
            }
            let v = s.eval_one_minus(h).0.re;
            sector_ratio = sector_ratio.min(v * g.powf(alpha) / delta);
        }
    }
    let passed = re_min > 0.5 && value_band.1 <= 2.0 * value_band.0 && sector_ratio >= 1.0;
    Ok(S1Report { alpha, re_margin: re_min - 0.5, value_band, deriv_band, epsilon, delta, sector_ratio, passed })
}

#[derive(Debug, Clone, Copy)]
struct AreaNode {
    /// `1 - zeta`.
    h: Complex64,
    /// `dA/pi` weight.
    area: f64,
    /// `(1 - |zeta|^2)^alpha dA/pi` weight.
    weighted: f64,
    sector_arg: f64,
}

#[derive(Debug, Clone, Copy)]
struct CircleNode {
    h: Complex64,
    weight: f64,
}

/// Quadrature on the disc and circle, graded towards `zeta = 1`.
///
/// Area: `zeta = 1 - rho e^{i theta}`, `|theta| < pi/2`, `rho = 2 cos(theta) e^{-x}`,
/// `dA/pi = rho^2 dx dtheta / pi`. Circle: `zeta = e^{i phi}`, `|phi| = pi e^{-x}`.
#[derive(Debug, Clone)]
pub struct CuspRule {
    alpha: f64,
    area: Vec<AreaNode>,
    circle: Vec<CircleNode>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CuspOptions {
    /// Grading depth: nodes reach `|1 - zeta| ~ e^-depth`.
    pub depth: usize,
    /// Gauss-Legendre nodes per unit of `x`.
    pub per_unit: usize,
    /// Tanh-sinh step in the angle.
    pub angle_step: f64,
    /// Keep only `Im zeta <= 0` with doubled weights. Exact for `Re` of integrands
    /// symmetric under conjugation: real coefficients and real `z`.
    pub symmetric: bool,
}

impl Default for CuspOptions {
    fn default() -> Self {
        CuspOptions { depth: 24, per_unit: 8, angle_step: 1.0 / 25.0, symmetric: false }
    }
}

fn graded_nodes(depth: usize, per_unit: usize) -> Vec<(f64, f64)> {
    // the first unit holds the (1 - e^-x)^alpha endpoint behaviour
    let mut xs: Vec<(f64, f64)> = RadialRule::TanhSinh(1.0 / 16.0).nodes().into_iter().map(|n| (n.t, n.weight)).collect();
    for k in 1..depth {
        let (x, w) = gauss_legendre_on(per_unit, k as f64, k as f64 + 1.0);
        xs.extend(x.into_iter().zip(w));
    }
    xs
}

impl CuspRule {
    pub fn new(alpha: f64, opts: &CuspOptions) -> Result<Self> {
        s1::check_alpha(alpha)?;
        let xs = graded_nodes(opts.depth, opts.per_unit);
        let thetas = tanh_sinh(opts.angle_step);
        let mut area = Vec::with_capacity(xs.len() * thetas.len());
        let fold = |x: f64| -> f64 {
            match (opts.symmetric, x.partial_cmp(&0.0)) {
                (false, _) => 1.0,
                (true, Some(std::cmp::Ordering::Greater)) => 2.0,
                (true, Some(std::cmp::Ordering::Equal)) => 1.0,
                _ => 0.0,
            }
        };
        for t in &thetas {
            let theta = 0.5 * PI * t.x;
            let cos = (0.5 * PI * t.gap).sin();
            let wt = 0.5 * PI * t.weight * fold(t.x);
            // weights vanish like cos^3; s_1' overflows well before that matters
            if wt == 0.0 || cos < 1e-60 {
                continue;
            }
            for &(x, wx) in &xs {
                let rho = 2.0 * cos * (-x).exp();
                let h = Complex64::from_polar(rho, theta);
                let dens = wt * wx * rho * rho / PI;
                let one_minus_abs2 = rho * 2.0 * cos * -(-x).exp_m1();
                // sector test uses |zeta - |zeta|| / (1 - |zeta|)
                let g = abs_gap(h);
                let z = 1.0 - h;
                let sector_arg = (z - (1.0 - g)).norm() / g;
                area.push(AreaNode { h, area: dens, weighted: dens * one_minus_abs2.powf(alpha), sector_arg });
            }
        }
        let mut circle = Vec::new();
        for &(x, wx) in &xs {
            let phi = PI * (-x).exp();
            let w = wx * phi / (2.0 * PI);
            for sgn in [1.0, -1.0] {
                let fw = fold(sgn);
                if fw == 0.0 {
                    continue;
                }
                let p = sgn * phi;
                let h = Complex64::new(2.0 * (0.5 * p).sin().powi(2), -p.sin());
                circle.push(CircleNode { h, weight: w * fw });
            }
        }
        Ok(CuspRule { alpha, area, circle })
    }

    pub fn len(&self) -> usize {
        self.area.len() + self.circle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Values `(g, g')` on the area nodes and `g` on the circle, from `g(1 - h)`.
    pub fn sample<G: Fn(Complex64) -> (Complex64, Complex64)>(&self, g: G) -> Samples {
        Samples {
            area: self.area.iter().map(|n| g(n.h)).collect(),
            circle: self.circle.iter().map(|n| g(n.h).0).collect(),
        }
    }

    /// `||g||^2_alpha` in derivative form.
    pub fn norm_sq(&self, g: &Samples) -> f64 {
        let b: f64 = self.circle.iter().zip(&g.circle).map(|(n, v)| n.weight * v.norm_sqr()).sum();
        let a: f64 = self.area.iter().zip(&g.area).map(|(n, v)| n.weighted * v.1.norm_sqr()).sum();
        a + b
    }

    /// `int_S |g'|^2 dA/pi` over `S = {|zeta - |zeta|| < epsilon (1 - |zeta|)}`.
    pub fn sector_integral(&self, g: &Samples, epsilon: f64) -> f64 {
        self.area
            .iter()
            .zip(&g.area)
            .filter(|(n, _)| n.sector_arg < epsilon)
            .map(|(n, v)| n.area * v.1.norm_sqr())
            .sum()
    }

    /// `s_z` on the nodes for `conj(z) = 1 - q`.
    pub fn kernel_at(&self, s: &S1, q: Complex64) -> KernelSamples {
        let zc = 1.0 - q;
        // 1 - zeta conj(z) = h + q - h q
        let area = self
            .area
            .iter()
            .map(|n| {
                let (v, d) = s.eval_one_minus(n.h + q - n.h * q);
                (v, d * zc)
            })
            .collect();
        let circle = self.circle.iter().map(|n| s.eval_one_minus(n.h + q - n.h * q).0).collect();
        KernelSamples { area, circle }
    }

    /// `Re V_g(z) = 2 Re <g, s_z g>_alpha - ||g||^2_alpha`.
    pub fn re_v(&self, g: &Samples, sz: &KernelSamples) -> f64 {
        let mut inner = ZERO;
        let mut norm = 0.0;
        for ((n, v), k) in self.circle.iter().zip(&g.circle).zip(&sz.circle) {
            let a = v.norm_sqr() * n.weight;
            inner += a * k.conj();
            norm += a;
        }
        for ((n, (v, dv)), (k, dk)) in self.area.iter().zip(&g.area).zip(&sz.area) {
            // (s_z g)' = s_z' g + s_z g'
            inner += dv * (dk * v + k * dv).conj() * n.weighted;
            norm += dv.norm_sqr() * n.weighted;
        }
        2.0 * inner.re - norm
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// `(g, g')` on area nodes and `g` on circle nodes.
#[derive(Debug, Clone)]
pub struct Samples {
    area: Vec<(Complex64, Complex64)>,
    circle: Vec<Complex64>,
}

/// `(s_z, s_z')` on area nodes and `s_z` on circle nodes.
#[derive(Debug, Clone)]
pub struct KernelSamples {
    area: Vec<(Complex64, Complex64)>,
    circle: Vec<Complex64>,
}

/// `(1 - f, f')` for `f = 1 - 1/s_1` at `1 - h`.
fn f_one_minus(s: &S1, h: Complex64) -> (Complex64, Complex64) {
    let (v, d) = s.eval_one_minus(h);
    (1.0 / v, d / (v * v))
}

#[derive(Debug, Clone, Serialize)]
pub struct DemoRow {
    /// Number of zeros `J`.
    pub j: usize,
    pub z: f64,
    pub w: f64,
    pub one_minus_w: f64,
    /// `(1 - w_J) s_1'(w_J)/s_1(w_J)`.
    pub t: f64,
    /// `sum_{n <= J} (1 - w_n)^2 |(B o f)'(w_n)|^2` for the full product `B`.
    pub s_sum: f64,
    /// The same sum with `B_J` in place of `B`.
    pub s_sum_truncated: f64,
    /// `sup Re V_{B_J o f}` over the `r`-grid.
    pub sup_re_v: f64,
    pub argmax_r_gap: f64,
    pub norm_sq: f64,
    /// `(||g||^2 + sup Re V_g) / int_S |g'|^2 dA/pi`.
    pub estimate_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DemoReport {
    pub alpha: f64,
    pub rows: Vec<DemoRow>,
    /// `sup Re V_f` for `f` itself, the row before any zero.
    pub baseline_sup_re_v: f64,
    /// Minimum of `t_n` over `n <= 5`.
    pub t_floor: f64,
    pub interpolation_delta: f64,
    /// `delta^2/4 min t_n^2`, the guaranteed increment of `S_J`.
    pub increment_floor: f64,
    pub epsilon: f64,
    /// `1 - r` for the grid on which the supremum is taken.
    pub r_gaps: Vec<f64>,
    /// `Re V_{B_J o f}(r)` on the grid for the largest `J`.
    pub curve: Vec<(f64, f64)>,
    pub t_floor_ok: bool,
    pub s_increasing: bool,
    pub v_increasing: bool,
    /// Last `sup Re V` over the first.
    pub growth: f64,
    pub s1: S1Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DemoOptions {
    pub quadrature: CuspOptions,
    /// `r`-grid: `1 - r = (1 - w_n) 2^{k/2}` for `|k| <= spread`, plus `r = 0`.
    pub spread: i32,
}

impl Default for DemoOptions {
    fn default() -> Self {
        DemoOptions { quadrature: CuspOptions { symmetric: true, ..CuspOptions::default() }, spread: 2 }
    }
}

/// `Re V_{B o f}(r)` for `f = 1 - 1/s_1`, at `r = 1 - gap`.
pub fn blaschke_re_v(alpha: f64, b: &BlaschkeProduct, r_gaps: &[f64], opts: &CuspOptions) -> Result<Vec<f64>> {
    let s = s1::shared(alpha)?;
    let rule = CuspRule::new(alpha, &CuspOptions { symmetric: true, ..*opts })?;
    let g = rule.sample(|h| {
        let (u, df) = f_one_minus(&s, h);
        let (bv, bd) = b.eval_one_minus(u);
        (bv, bd * df)
    });
    Ok(r_gaps.iter().map(|&q| rule.re_v(&g, &rule.kernel_at(&s, Complex64::new(q, 0.0)))).collect())
}

/// The growth table for `B_J o f`, `J = 1..=max_zeros`, zeros `1 - 2^-n`.
pub fn unbounded_demo(alpha: f64, max_zeros: usize, opts: &DemoOptions) -> Result<DemoReport> {
    if max_zeros == 0 {
        return Err(Error::InvalidArgument("need at least one zero".into()));
    }
    let s = s1::shared(alpha)?;
    let s1_report = s1_properties_check(alpha, 36, 64)?;
    let blaschke = BlaschkeProduct::dyadic(max_zeros)?;
    let ws = blaschke.gaps().iter().map(|&g| find_w_gap(alpha, g)).collect::<Result<Vec<_>>>()?;
    let ts: Vec<f64> = ws
        .iter()
        .map(|p| {
            let (v, d) = s.at_one_minus(p.one_minus_w);
            p.one_minus_w * d / v
        })
        .collect();

    let mut r_gaps = vec![1.0];
    for p in &ws {
        for k in -opts.spread..=opts.spread {
            let g = p.one_minus_w * 2f64.powf(k as f64 / 2.0);
            if g < 1.0 {
                r_gaps.push(g);
            }
        }
    }
    r_gaps.sort_by(|a, b| b.total_cmp(a));
    r_gaps.dedup();

    // f, B and r are real, so the half rule is exact for Re V
    let rule = CuspRule::new(alpha, &CuspOptions { symmetric: true, ..opts.quadrature })?;
    // |(B o f)'(w_n)| = |B'(z_n)| s_1'(w_n)/s_1(w_n)^2
    let term = |b: &BlaschkeProduct, n: usize| -> f64 {
        let (v, d) = s.at_one_minus(ws[n].one_minus_w);
        (ws[n].one_minus_w * b.derivative_at_zero(n) * d / (v * v)).powi(2)
    };
    let full_terms: Vec<f64> = (0..max_zeros).map(|n| term(&blaschke, n)).collect();
    let fvals: Vec<(Complex64, Complex64)> = rule.area.iter().map(|n| f_one_minus(&s, n.h)).collect();
    let fcirc: Vec<Complex64> = rule.circle.iter().map(|n| f_one_minus(&s, n.h).0).collect();
    let kernels: Vec<KernelSamples> = r_gaps.par_iter().map(|&g| rule.kernel_at(&s, Complex64::new(g, 0.0))).collect();

    let sup = |g: &Samples| -> (f64, f64, Vec<f64>) {
        let vals: Vec<f64> = kernels.iter().map(|k| rule.re_v(g, k)).collect();
        let (i, m) = vals.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (i, v)| if *v > acc.1 { (i, *v) } else { acc });
        (m, r_gaps[i], vals)
    };

    let f_samples = Samples {
        area: fvals.iter().map(|(u, df)| (1.0 - u, *df)).collect(),
        circle: fcirc.iter().map(|u| 1.0 - u).collect(),
    };
    let baseline_sup_re_v = sup(&f_samples).0;

    let mut rows = Vec::with_capacity(max_zeros);
    let mut curve = Vec::new();
    for j in 1..=max_zeros {
        let b = blaschke.truncate(j);
        let g = Samples {
            area: fvals
                .iter()
                .map(|(u, df)| {
                    let (bv, bd) = b.eval_one_minus(*u);
                    (bv, bd * df)
                })
                .collect(),
            circle: fcirc.iter().map(|u| b.eval_one_minus(*u).0).collect(),
        };
        let (sup_re_v, argmax_r_gap, vals) = sup(&g);
        let norm_sq = rule.norm_sq(&g);
        let sector = rule.sector_integral(&g, s1_report.epsilon);
        let s_sum: f64 = full_terms[..j].iter().sum();
        let s_sum_truncated: f64 = (0..j).map(|n| term(&b, n)).sum();
        rows.push(DemoRow {
            j,
            z: ws[j - 1].z,
            w: ws[j - 1].w,
            one_minus_w: ws[j - 1].one_minus_w,
            t: ts[j - 1],
            s_sum,
            s_sum_truncated,
            sup_re_v,
            argmax_r_gap,
            norm_sq,
            estimate_ratio: (norm_sq + sup_re_v) / sector,
        });
        if j == max_zeros {
            curve = r_gaps.iter().zip(vals).map(|(g, v)| (1.0 - g, v)).collect();
        }
    }
    let t_floor = ts.iter().take(5).cloned().fold(f64::INFINITY, f64::min);
    let t_floor_ok = ts.iter().all(|t| *t >= 0.5 * t_floor);
    let delta = blaschke.interpolation_delta();
    let t_min = ts.iter().cloned().fold(f64::INFINITY, f64::min);
    let increment_floor = delta * delta / 4.0 * t_min * t_min;
    let s_increasing = rows.windows(2).all(|w| w[1].s_sum >= w[0].s_sum + increment_floor);
    let v_increasing = rows.windows(2).all(|w| w[1].sup_re_v > w[0].sup_re_v);
    let growth = rows.last().map(|r| r.sup_re_v).unwrap_or(0.0) / rows[0].sup_re_v;
    Ok(DemoReport {
        alpha,
        rows,
        baseline_sup_re_v,
        t_floor,
        interpolation_delta: delta,
        increment_floor,
        epsilon: s1_report.epsilon,
        r_gaps,
        curve,
        t_floor_ok,
        s_increasing,
        v_increasing,
        growth,
        s1: s1_report,
    })
}
