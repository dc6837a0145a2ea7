//! Reproducing kernels that are diagonal in the monomial basis.
//!
//! Every kernel here has the form `k(z,w) = sum_g c_g z^g conj(w)^g`.
//! Unitarily invariant kernels on the ball come from a univariate profile
//! `k(z,w) = sum_m a_m <z,w>^m`, giving `c_g = a_{|g|} |g|!/g!`; the polydisc
//! kernel is a product of one-variable profiles.

use crate::dirichlet::s1;
use crate::error::{Error, Result};
use crate::monomial::{self, Exponent, MAX_DIM};
use crate::series::Series;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Szego,
    DruryArveson,
    BergmanWeighted { beta: f64 },
    HardyBall,
    HardyPolydisc,
    DirichletAlpha { alpha: f64 },
    CustomDiagonal { coeffs: Vec<f64> },
    PowerOf { base: Box<KernelSpec>, t: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Ball,
    Polydisc,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    pub family: Family,
    pub dimension: usize,
    /// Order used where the kernel is only known through its coefficients.
    pub truncation_order: usize,
}

pub const DEFAULT_TRUNCATION: usize = 200;

impl KernelSpec {
    pub fn new(family: Family, dimension: usize, truncation_order: usize) -> Result<Self> {
        let spec = KernelSpec { family, dimension, truncation_order };
        spec.validate()?;
        Ok(spec)
    }

    pub fn szego() -> Self {
        KernelSpec { family: Family::Szego, dimension: 1, truncation_order: DEFAULT_TRUNCATION }
    }

    pub fn drury_arveson(d: usize) -> Result<Self> {
        Self::new(Family::DruryArveson, d, DEFAULT_TRUNCATION)
    }

    pub fn bergman(beta: f64) -> Result<Self> {
        Self::new(Family::BergmanWeighted { beta }, 1, DEFAULT_TRUNCATION)
    }

    pub fn hardy_ball(d: usize) -> Result<Self> {
        Self::new(Family::HardyBall, d, DEFAULT_TRUNCATION)
    }

    pub fn hardy_polydisc(d: usize) -> Result<Self> {
        Self::new(Family::HardyPolydisc, d, DEFAULT_TRUNCATION)
    }

    pub fn dirichlet(alpha: f64) -> Result<Self> {
        Self::new(Family::DirichletAlpha { alpha }, 1, DEFAULT_TRUNCATION)
    }

    pub fn custom(coeffs: Vec<f64>) -> Result<Self> {
        let n = coeffs.len().saturating_sub(1);
        Self::new(Family::CustomDiagonal { coeffs }, 1, n)
    }

    pub fn power_of(base: KernelSpec, t: f64) -> Result<Self> {
        let (d, n) = (base.dimension, base.truncation_order);
        Self::new(Family::PowerOf { base: Box::new(base), t }, d, n)
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dimension;
        if d == 0 || d > MAX_DIM {
            return Err(Error::InvalidArgument(format!("dimension {d} outside 1..={MAX_DIM}")));
        }
        let one_variable = |name: &str| {
            if d != 1 {
                Err(Error::UnsupportedFamily(format!("{name} in dimension {d}")))
            } else {
                Ok(())
            }
        };
        match &self.family {
            Family::Szego => one_variable("szego"),
            Family::DruryArveson | Family::HardyBall | Family::HardyPolydisc => Ok(()),
            Family::BergmanWeighted { beta } => {
                one_variable("bergman_weighted")?;
                if !(*beta >= 0.0) {
                    return Err(Error::InvalidArgument(format!("bergman weight beta = {beta} must be nonnegative")));
                }
                Ok(())
            }
            Family::DirichletAlpha { alpha } => {
                one_variable("dirichlet_alpha")?;
                s1::check_alpha(*alpha)
            }
            Family::CustomDiagonal { coeffs } => {
                one_variable("custom_diagonal")?;
                if coeffs.len() < self.truncation_order + 1 {
                    return Err(Error::UnsupportedFamily(format!(
                        "custom_diagonal has {} coefficients, order {} needs {}",
                        coeffs.len(),
                        self.truncation_order,
                        self.truncation_order + 1
                    )));
                }
                if let Some(c) = coeffs.iter().find(|c| !(**c > 0.0)) {
                    return Err(Error::InvalidArgument(format!("custom_diagonal coefficient {c} is not positive")));
                }
                Ok(())
            }
            Family::PowerOf { base, t } => {
                base.validate()?;
                if base.dimension != d {
                    return Err(Error::DimensionMismatch { expected: d, found: base.dimension });
                }
                if !(*t >= 1.0) {
                    return Err(Error::InvalidArgument(format!("power t = {t} must be at least 1")));
                }
                Ok(())
            }
        }
    }

    pub fn domain(&self) -> Domain {
        match &self.family {
            Family::HardyPolydisc => Domain::Polydisc,
            Family::PowerOf { base, .. } => base.domain(),
            _ => Domain::Ball,
        }
    }

    /// Product kernels factor over coordinates; all others are radial.
    pub fn is_product(&self) -> bool {
        self.domain() == Domain::Polydisc
    }

    pub fn name(&self) -> String {
        match &self.family {
            Family::Szego => "szego".into(),
            Family::DruryArveson => format!("drury_arveson({})", self.dimension),
            Family::BergmanWeighted { beta } => format!("bergman_weighted({beta})"),
            Family::HardyBall => format!("hardy_ball({})", self.dimension),
            Family::HardyPolydisc => format!("hardy_polydisc({})", self.dimension),
            Family::DirichletAlpha { alpha } => format!("dirichlet_alpha({alpha})"),
            Family::CustomDiagonal { coeffs } => format!("custom_diagonal[{}]", coeffs.len()),
            Family::PowerOf { base, t } => format!("({})^{t}", base.name()),
        }
    }

    /// Univariate profile `a_0..=a_n`: in `<z,w>` for radial kernels,
    /// per coordinate for product kernels.
    pub fn profile(&self, n: usize) -> Result<Vec<f64>> {
        Ok(match &self.family {
            Family::Szego | Family::DruryArveson | Family::HardyPolydisc => vec![1.0; n + 1],
            Family::BergmanWeighted { beta } => running_product(n, |m| (m as f64 + beta + 1.0) / m as f64),
            Family::HardyBall => {
                let d = self.dimension as f64;
                running_product(n, |m| (m as f64 + d - 1.0) / m as f64)
            }
            Family::DirichletAlpha { alpha } => s1::dalpha_coeffs(*alpha, n)?,
            Family::CustomDiagonal { coeffs } => {
                if coeffs.len() < n + 1 {
                    return Err(Error::UnsupportedFamily(format!(
                        "custom_diagonal has {} coefficients, order {n} requested",
                        coeffs.len()
                    )));
                }
                coeffs[..=n].to_vec()
            }
            Family::PowerOf { base, t } => power_coeffs(&base.profile(n)?, *t)?,
        })
    }

    /// Profile value `P(x)` with `k = P(<z,w>)` (or a per-coordinate factor).
    fn profile_eval(&self, x: Complex64) -> Result<Complex64> {
        let gap = (Complex64::new(1.0, 0.0) - x).norm();
        if gap < 1e-14 {
            return Err(Error::NumericOverflow(gap));
        }
        let one_minus = Complex64::new(1.0, 0.0) - x;
        Ok(match &self.family {
            Family::Szego | Family::DruryArveson | Family::HardyPolydisc => 1.0 / one_minus,
            Family::BergmanWeighted { beta } => one_minus.powf(-(beta + 2.0)),
            Family::HardyBall => one_minus.powi(-(self.dimension as i32)),
            Family::DirichletAlpha { alpha } => s1::shared(*alpha)?.value(x),
            Family::CustomDiagonal { coeffs } => horner_real(coeffs, x),
            Family::PowerOf { base, t } => match base.log_profile(x)? {
                Some(l) => (t * l).exp(),
                None => horner_real(&self.profile(self.truncation_order)?, x),
            },
        })
    }

    /// Continuous logarithm of the profile where a closed form exists.
    fn log_profile(&self, x: Complex64) -> Result<Option<Complex64>> {
        let l = (Complex64::new(1.0, 0.0) - x).ln();
        Ok(match &self.family {
            Family::Szego | Family::DruryArveson | Family::HardyPolydisc => Some(-l),
            Family::BergmanWeighted { beta } => Some(-(beta + 2.0) * l),
            Family::HardyBall => Some(-(self.dimension as f64) * l),
            // Re s_1 > 1/2 on the disc, so the principal branch is continuous.
            Family::DirichletAlpha { alpha } => Some(s1::shared(*alpha)?.value(x).ln()),
            Family::CustomDiagonal { .. } => None,
            Family::PowerOf { base, t } => base.log_profile(x)?.map(|v| v * t),
        })
    }

    pub fn contains(&self, z: &[Complex64]) -> bool {
        match self.domain() {
            Domain::Ball => z.iter().map(|c| c.norm_sqr()).sum::<f64>() < 1.0,
            Domain::Polydisc => z.iter().all(|c| c.norm() < 1.0),
        }
    }

    fn check_point(&self, z: &[Complex64]) -> Result<()> {
        if z.len() != self.dimension {
            return Err(Error::DimensionMismatch { expected: self.dimension, found: z.len() });
        }
        if !self.contains(z) {
            return Err(Error::PointOutsideDomain(format!("{z:?}")));
        }
        Ok(())
    }

    /// `k(z, w)`.
    pub fn eval(&self, z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
        self.check_point(z)?;
        self.check_point(w)?;
        self.eval_raw(z, w)
    }

    /// `k(z, w)` with `z` in the domain and `w` in its closure (boundary integrals).
    pub fn eval_to_boundary(&self, z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
        self.check_point(z)?;
        if w.len() != self.dimension {
            return Err(Error::DimensionMismatch { expected: self.dimension, found: w.len() });
        }
        let inside = match self.domain() {
            Domain::Ball => w.iter().map(|c| c.norm_sqr()).sum::<f64>() <= 1.0 + 1e-12,
            Domain::Polydisc => w.iter().all(|c| c.norm() <= 1.0 + 1e-12),
        };
        if !inside {
            return Err(Error::PointOutsideDomain(format!("{w:?}")));
        }
        self.eval_raw(z, w)
    }

    fn eval_raw(&self, z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
        if self.is_product() {
            let mut acc = Complex64::new(1.0, 0.0);
            for (a, b) in z.iter().zip(w) {
                acc *= self.profile_eval(a * b.conj())?;
            }
            Ok(acc)
        } else {
            let x: Complex64 = z.iter().zip(w).map(|(a, b)| a * b.conj()).sum();
            self.profile_eval(x)
        }
    }

    /// `k_w` as a series in `z`, truncated at `order`.
    pub fn kernel_series(&self, w: &[Complex64], order: usize) -> Result<Series> {
        self.check_point(w)?;
        let c = diagonal_coeffs(self, order)?;
        let layout = monomial::layout(self.dimension, order);
        let coeffs = layout
            .exps
            .iter()
            .zip(&c.values)
            .map(|(e, cg)| *cg * conj_power(w, e))
            .collect();
        let mut s = Series::from_coeffs(self.dimension, order, coeffs)?;
        s.mark_truncated();
        Ok(s)
    }
}

fn running_product(n: usize, ratio: impl Fn(usize) -> f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 1.0;
    out.push(acc);
    for m in 1..=n {
        acc *= ratio(m);
        out.push(acc);
    }
    out
}

fn horner_real(coeffs: &[f64], x: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// `conj(w)^e`.
pub fn conj_power(w: &[Complex64], e: &Exponent) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for (wj, &ej) in w.iter().zip(e.iter()) {
        acc *= wj.conj().powu(ej);
    }
    acc
}

/// `w^e`.
pub fn power(w: &[Complex64], e: &Exponent) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for (wj, &ej) in w.iter().zip(e.iter()) {
        acc *= wj.powu(ej);
    }
    acc
}

/// Coefficients of `f^t` for a series with `f_0 = 1` (J. C. P. Miller's recurrence).
pub fn power_coeffs(f: &[f64], t: f64) -> Result<Vec<f64>> {
    if f.is_empty() || (f[0] - 1.0).abs() > 1e-12 {
        return Err(Error::NonNormalized(f.first().copied().unwrap_or(0.0)));
    }
    let n = f.len();
    let mut g = vec![0.0; n];
    g[0] = 1.0;
    for m in 1..n {
        let mut acc = 0.0;
        for j in 1..=m {
            acc += ((t + 1.0) * j as f64 - m as f64) * f[j] * g[m - j];
        }
        g[m] = acc / m as f64;
    }
    Ok(g)
}

/// `c_g` for all `|g| <= order`, in monomial layout order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalCoeffs {
    pub dimension: usize,
    pub order: usize,
    pub values: Vec<f64>,
}

impl DiagonalCoeffs {
    pub fn get(&self, e: &Exponent) -> f64 {
        self.values[monomial::rank(e, self.dimension)]
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "exponent", "coefficient"])?;
        let layout = monomial::layout(self.dimension, self.order);
        for (i, (c, e)) in self.values.iter().zip(&layout.exps).enumerate() {
            let exp: Vec<String> = e[..self.dimension].iter().map(|x| x.to_string()).collect();
            w.write_record([i.to_string(), exp.join(";"), format!("{c:e}")])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn diagonal_coeffs(spec: &KernelSpec, order: usize) -> Result<DiagonalCoeffs> {
    spec.validate()?;
    let d = spec.dimension;
    let a = spec.profile(order)?;
    let layout = monomial::layout(d, order);
    let values = layout
        .exps
        .iter()
        .map(|e| {
            if spec.is_product() {
                e[..d].iter().map(|&x| a[x as usize]).product()
            } else {
                a[monomial::total_degree(e)] * monomial::multinomial(e, d)
            }
        })
        .collect();
    Ok(DiagonalCoeffs { dimension: d, order, values })
}

/// Coefficients `b_g` of `1 - 1/k` along the diagonal.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RowFunction {
    pub b: DiagonalCoeffs,
    /// Largest coefficient of `(1 - b) * k - 1`.
    pub residual: f64,
}

/// Row function of a normalized kernel; fails with `NotCnp` on a negative coefficient.
pub fn cnp_row_function(spec: &KernelSpec, order: usize, tol: f64) -> Result<RowFunction> {
    let c = diagonal_coeffs(spec, order)?;
    if (c.values[0] - 1.0).abs() > 1e-12 {
        return Err(Error::NonNormalized(c.values[0]));
    }
    let k = Series::from_coeffs(c.dimension, order, c.values.iter().map(|&v| Complex64::new(v, 0.0)).collect())?;
    let recip = k.reciprocal()?;
    let residual = k.reciprocal_residual(&recip)?;
    let mut b: Vec<f64> = recip.coeffs().iter().map(|r| -r.re).collect();
    b[0] = 0.0;
    if let Some((index, value)) = b.iter().enumerate().find(|(_, v)| **v < -tol) {
        return Err(Error::NotCnp { index, value: *value });
    }
    Ok(RowFunction { b: DiagonalCoeffs { dimension: c.dimension, order, values: b }, residual })
}

/// Largest deviation in `sum_{b <= g} b_b c_{g-b} = c_g` for `g != 0`.
pub fn row_function_identity_residual(c: &DiagonalCoeffs, b: &DiagonalCoeffs) -> f64 {
    let layout = monomial::layout(c.dimension, c.order.min(b.order));
    let mut worst: f64 = 0.0;
    for (i, g) in layout.exps.iter().enumerate().skip(1) {
        let mut acc = 0.0;
        for (j, e) in layout.exps[..=i].iter().enumerate() {
            if let Some(rest) = monomial::checked_sub(g, e) {
                acc += b.values[j] * c.get(&rest);
            }
        }
        worst = worst.max((acc - c.values[i]).abs() / c.values[i].abs().max(1.0));
    }
    worst
}

/// Finite point configuration inside a kernel's domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    pub dimension: usize,
    pub domain: Domain,
    pub points: Vec<Vec<Complex64>>,
}

impl PointSet {
    pub fn new(domain: Domain, dimension: usize, points: Vec<Vec<Complex64>>) -> Result<Self> {
        let set = PointSet { dimension, domain, points };
        set.validate()?;
        Ok(set)
    }

    pub fn disc(points: &[Complex64]) -> Result<Self> {
        Self::new(Domain::Ball, 1, points.iter().map(|&p| vec![p]).collect())
    }

    pub fn validate(&self) -> Result<()> {
        for p in &self.points {
            if p.len() != self.dimension {
                return Err(Error::DimensionMismatch { expected: self.dimension, found: p.len() });
            }
            let inside = match self.domain {
                Domain::Ball => p.iter().map(|c| c.norm_sqr()).sum::<f64>() < 1.0,
                Domain::Polydisc => p.iter().all(|c| c.norm() < 1.0),
            };
            if !inside {
                return Err(Error::PointOutsideDomain(format!("{p:?}")));
            }
        }
        for i in 0..self.points.len() {
            for j in 0..i {
                let dist: f64 = self.points[i].iter().zip(&self.points[j]).map(|(a, b)| (a - b).norm_sqr()).sum();
                if dist == 0.0 {
                    return Err(Error::InvalidArgument(format!("points {j} and {i} coincide")));
                }
            }
        }
        Ok(())
    }

    /// Seeded random configuration, uniform in the domain scaled by `radius`.
    pub fn random(domain: Domain, dimension: usize, count: usize, radius: f64, seed: u64) -> Result<Self> {
        let mut rng = crate::rng::trial_rng(seed, 0);
        let points = (0..count)
            .map(|_| match domain {
                Domain::Ball => crate::rng::ball_point(&mut rng, dimension, radius),
                Domain::Polydisc => crate::rng::polydisc_point(&mut rng, dimension, radius),
            })
            .collect();
        Self::new(domain, dimension, points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `G_ij = k(z_i, z_j)`.
pub fn gram_matrix(spec: &KernelSpec, pts: &PointSet) -> Result<DMatrix<Complex64>> {
    if pts.dimension != spec.dimension {
        return Err(Error::DimensionMismatch { expected: spec.dimension, found: pts.dimension });
    }
    let n = pts.len();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let v = spec.eval(&pts.points[i], &pts.points[j])?;
            g[(i, j)] = v;
            g[(j, i)] = v.conj();
        }
        g[(i, i)].im = 0.0;
    }
    Ok(g)
}

#[derive(Serialize, Deserialize)]
struct KernelSpecJson {
    family: String,
    #[serde(default)]
    params: serde_json::Value,
    #[serde(default = "default_dimension")]
    dimension: usize,
    #[serde(default = "default_truncation")]
    truncation_order: usize,
}

fn default_dimension() -> usize {
    1
}

fn default_truncation() -> usize {
    DEFAULT_TRUNCATION
}

fn param(params: &serde_json::Value, key: &str) -> Result<f64> {
    params
        .get(key)
        .and_then(|v| v.as_f64())
        .ok_or_else(|| Error::Config(format!("kernel parameter `{key}` missing or not a number")))
}

impl TryFrom<KernelSpecJson> for KernelSpec {
    type Error = Error;

    fn try_from(j: KernelSpecJson) -> Result<Self> {
        let family = match j.family.as_str() {
            "szego" => Family::Szego,
            "drury_arveson" => Family::DruryArveson,
            "bergman_weighted" => Family::BergmanWeighted { beta: param(&j.params, "beta").unwrap_or(0.0) },
            "hardy_ball" => Family::HardyBall,
            "hardy_polydisc" => Family::HardyPolydisc,
            "dirichlet_alpha" => Family::DirichletAlpha { alpha: param(&j.params, "alpha")? },
            "custom_diagonal" => {
                let coeffs: Vec<f64> = serde_json::from_value(
                    j.params.get("coeffs").cloned().ok_or_else(|| Error::Config("custom_diagonal needs `coeffs`".into()))?,
                )?;
                Family::CustomDiagonal { coeffs }
            }
            "power_of" => {
                let base: KernelSpec = serde_json::from_value(
                    j.params.get("base").cloned().ok_or_else(|| Error::Config("power_of needs `base`".into()))?,
                )?;
                Family::PowerOf { base: Box::new(base), t: param(&j.params, "t")? }
            }
            other => return Err(Error::UnsupportedFamily(other.to_string())),
        };
        KernelSpec::new(family, j.dimension, j.truncation_order)
    }
}

impl From<&KernelSpec> for KernelSpecJson {
    fn from(k: &KernelSpec) -> Self {
        use serde_json::json;
        let (family, params) = match &k.family {
            Family::Szego => ("szego", json!({})),
            Family::DruryArveson => ("drury_arveson", json!({})),
            Family::BergmanWeighted { beta } => ("bergman_weighted", json!({ "beta": beta })),
            Family::HardyBall => ("hardy_ball", json!({})),
            Family::HardyPolydisc => ("hardy_polydisc", json!({})),
            Family::DirichletAlpha { alpha } => ("dirichlet_alpha", json!({ "alpha": alpha })),
            Family::CustomDiagonal { coeffs } => ("custom_diagonal", json!({ "coeffs": coeffs })),
            Family::PowerOf { base, t } => (
                "power_of",
                json!({ "base": serde_json::to_value(base.as_ref()).unwrap_or_default(), "t": t }),
            ),
        };
        KernelSpecJson { family: family.into(), params, dimension: k.dimension, truncation_order: k.truncation_order }
    }
}

impl Serialize for KernelSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        KernelSpecJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for KernelSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        KernelSpecJson::deserialize(d)?.try_into().map_err(serde::de::Error::custom)
    }
}
