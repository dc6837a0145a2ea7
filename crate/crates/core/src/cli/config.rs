use super::presets;
use crate::dirichlet::demo::CuspOptions;
use crate::dirichlet::measure::{DiscMeasure, RadialRule};
use crate::error::{Error, Result};
use crate::kernel::KernelSpec;
use crate::sarason::multiplier::PolarGrid;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Coefficients as `(index, re, im)` in graded-lex order.
pub type Triples = Vec<(usize, f64, f64)>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionSource {
    /// One coefficient list per component.
    Coeffs(Vec<Triples>),
    /// `one`, `z`, `one-plus-z`, `z-gamma` or `test-poly`.
    Named(String),
    /// Seeded random polynomial of unit norm in `H_k`.
    Random { degree: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Polar grid for `d = 1`: radii `cap * i / radii`, `i = 0..=radii`.
    pub radii: usize,
    pub angles: usize,
    pub cap: f64,
    /// Point count for random configurations (PSD sets, `d > 1` grids).
    pub points: usize,
    /// Radius of random configurations.
    pub radius: f64,
    /// Number of random point sets per PSD check.
    pub sets: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { radii: 10, angles: 16, cap: 0.95, points: 15, radius: 0.9, sets: 3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub psd: f64,
    pub reconstruction: f64,
    pub contractivity: f64,
    /// Relative error of the integral formulas against the coefficient rule.
    pub quadrature: f64,
    pub norm_equality: f64,
    pub shimorin: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            psd: 1e-10,
            reconstruction: 1e-8,
            contractivity: 1e-6,
            quadrature: 1e-6,
            norm_equality: 1e-6,
            shimorin: 1e-5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelChecks {
    /// Order of the row-function test in `d = 1`.
    pub cnp_order: usize,
    pub expect_cnp: bool,
    /// Whether `k/s` is expected to be positive.
    pub expect_factor: bool,
}

impl Default for KernelChecks {
    fn default() -> Self {
        KernelChecks { cnp_order: 500, expect_cnp: true, expect_factor: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SarasonChecks {
    /// Also run the extremal checks.
    pub extremal: bool,
    pub quadrature_points: usize,
    pub quadrature_radius: f64,
    pub radial_nodes: usize,
    pub angular_nodes: usize,
}

impl Default for SarasonChecks {
    fn default() -> Self {
        SarasonChecks { extremal: false, quadrature_points: 50, quadrature_radius: 0.8, radial_nodes: 128, angular_nodes: 128 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DirichletConfig {
    pub alpha: f64,
    /// Zeros `1 - 2^-n`, `n <= max_zeros`; 0 skips the growth table.
    pub max_zeros: usize,
    pub norm_max_n: usize,
    pub shimorin_points: usize,
    pub spread: i32,
    pub quadrature: CuspOptions,
}

impl Default for DirichletConfig {
    fn default() -> Self {
        DirichletConfig {
            alpha: 0.5,
            max_zeros: 12,
            norm_max_n: 30,
            shimorin_points: 20,
            spread: 2,
            quadrature: CuspOptions { symmetric: true, ..CuspOptions::default() },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasureConfig {
    /// Normalized area measure.
    Area { radial: RadialRule, angular: usize },
    MuAlpha { alpha: f64, radial: RadialRule, angular: usize },
    PointMass { re: f64, im: f64, mass: f64 },
    BoundaryUniform { mass: f64, nodes: usize },
}

impl MeasureConfig {
    pub fn build(&self) -> Result<DiscMeasure> {
        match *self {
            MeasureConfig::Area { radial, angular } => DiscMeasure::area(radial, angular),
            MeasureConfig::MuAlpha { alpha, radial, angular } => DiscMeasure::mu_alpha(alpha, radial, angular),
            MeasureConfig::PointMass { re, im, mass } => DiscMeasure::point_mass(Complex64::new(re, im), mass),
            MeasureConfig::BoundaryUniform { mass, nodes } => DiscMeasure::boundary_uniform(mass, nodes),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CarlesonConfig {
    pub measure: MeasureConfig,
    pub f_degree: usize,
    pub trials: usize,
    pub grid: PolarGrid,
}

impl Default for CarlesonConfig {
    fn default() -> Self {
        CarlesonConfig {
            measure: MeasureConfig::Area { radial: RadialRule::GaussLegendre(64), angular: 64 },
            f_degree: 40,
            trials: 16,
            grid: PolarGrid { radii: 32, angles: 64, cap: 0.999 },
        }
    }
}

/// Known answers checked by the commands when present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Expectations {
    pub psi: Option<Triples>,
    pub phi: Option<Vec<Triples>>,
    pub v: Option<Triples>,
    pub coeff_tol: f64,
    pub carleson_constant: Option<f64>,
    pub sup_re: Option<f64>,
    pub value_tol: f64,
}

impl Default for Expectations {
    fn default() -> Self {
        Expectations { psi: None, phi: None, v: None, coeff_tol: 1e-10, carleson_constant: None, sup_re: None, value_tol: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<KernelSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<KernelSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function: Option<FunctionSource>,
    /// `a` as `(re, im)`; defaults to 1.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<(f64, f64)>,
    /// Truncation order of the factorization or of the coefficient tables.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    /// Point `w` of the sub-unit embedding, one `(re, im)` per coordinate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub embed: Option<Vec<(f64, f64)>>,
    pub grid: GridConfig,
    pub tolerances: Tolerances,
    pub kernel: KernelChecks,
    pub sarason: SarasonChecks,
    pub dirichlet: DirichletConfig,
    pub carleson: CarlesonConfig,
    pub expect: Expectations,
}

/// Sections whose keys are merged one by one; every other key is replaced whole.
const SECTIONS: &[&str] = &["grid", "tolerances", "kernel", "sarason", "dirichlet", "carleson", "expect"];

fn merge(base: &mut serde_json::Value, over: serde_json::Value) {
    let (Some(b), serde_json::Value::Object(o)) = (base.as_object_mut(), over) else {
        return;
    };
    for (key, v) in o {
        match (b.get_mut(&key), v) {
            (Some(serde_json::Value::Object(slot)), serde_json::Value::Object(fields)) if SECTIONS.contains(&key.as_str()) => {
                slot.extend(fields);
            }
            (_, v) => {
                b.insert(key, v);
            }
        }
    }
}

impl RunConfig {
    /// Parses a JSON config. A preset, named by the argument or by a `preset` key,
    /// supplies the base that the remaining keys override.
    pub fn load(text: Option<&str>, preset: Option<&str>) -> Result<RunConfig> {
        let mut user = match text {
            Some(t) => serde_json::from_str::<serde_json::Value>(t).map_err(|e| Error::Config(e.to_string()))?,
            None => serde_json::json!({}),
        };
        if !user.is_object() {
            return Err(Error::Config("config must be a JSON object".into()));
        }
        let named = user.as_object_mut().and_then(|o| o.remove("preset"));
        let name = match (preset, named) {
            (Some(p), _) => Some(p.to_string()),
            (None, Some(serde_json::Value::String(p))) => Some(p),
            (None, Some(_)) => return Err(Error::Config("`preset` must be a string".into())),
            (None, None) => None,
        };
        let mut value = match name {
            Some(n) => presets::preset(&n)?,
            None => serde_json::json!({}),
        };
        merge(&mut value, user);
        let cfg: RunConfig = serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.grid;
        if g.radii == 0 || g.angles == 0 || g.points == 0 || g.sets == 0 {
            return Err(Error::Config("grid counts must be positive".into()));
        }
        if !(g.cap > 0.0 && g.cap < 1.0) || !(g.radius > 0.0 && g.radius < 1.0) {
            return Err(Error::Config("grid radius cap must lie in (0, 1)".into()));
        }
        let c = &self.carleson.grid;
        if c.radii == 0 || c.angles == 0 || !(c.cap > 0.0 && c.cap < 1.0) {
            return Err(Error::Config("carleson grid must be non-empty with cap < 1".into()));
        }
        if let (Some(k), Some(s)) = (&self.k, &self.s) {
            if k.dimension != s.dimension {
                return Err(Error::Config(format!("k has dimension {} but s has {}", k.dimension, s.dimension)));
            }
        }
        if let (Some(k), Some(w)) = (&self.k, &self.embed) {
            if w.len() != k.dimension {
                return Err(Error::Config(format!("embed point needs {} coordinates", k.dimension)));
            }
        }
        Ok(())
    }

    pub fn seed(&self) -> Result<u64> {
        self.seed.ok_or_else(|| Error::Config("this command runs randomized checks and needs a seed".into()))
    }

    pub fn a(&self) -> Complex64 {
        self.a.map(|(re, im)| Complex64::new(re, im)).unwrap_or(Complex64::new(1.0, 0.0))
    }

    pub fn embed_point(&self) -> Option<Vec<Complex64>> {
        self.embed.as_ref().map(|w| w.iter().map(|&(re, im)| Complex64::new(re, im)).collect())
    }
}
