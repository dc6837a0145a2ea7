//! Batch runner behind the `cnpf` binary: configs, presets, the five commands and their reports.
//!
//! Every command returns its report and output files in memory, so the same config and seed
//! give byte-identical bytes. Wall-clock time is written to a separate `timing.json`.

pub mod config;
pub mod presets;

use crate::dirichlet::demo::{f_contractive, s1_properties_check, unbounded_demo, DemoOptions};
use crate::dirichlet::local::{norm_equality_check, shimorin_re_v};
use crate::dirichlet::measure::{DiscMeasure, RadialRule};
use crate::error::{Error, Result};
use crate::kernel::{cnp_row_function, diagonal_coeffs, gram_matrix, row_function_identity_residual, KernelSpec, PointSet};
use crate::monomial::{self, Exponent, MAX_DIM};
use crate::psd::{psd_check, quotient_kernel_psd, Verdict};
use crate::sarason::checks::{extremal_bound_check, tail_order, extremal_check, main_lemma_psd, majorant_check, uniqueness_kernel_psd};
use crate::sarason::factor::{factorize, factorize_unit, random_unit_polynomial, FactorOptions};
use crate::sarason::multiplier::carleson_check;
use crate::sarason::{quotient_coeffs, sarason_by_quadrature, sarason_function};
use crate::series::{Series, VectorSeries};
use crate::space::Space;
use config::{FunctionSource, RunConfig, Triples};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use std::time::Duration;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Kernel,
    Factorize,
    Sarason,
    Dirichlet,
    Carleson,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub verdict: Verdict,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: Command,
    pub version: String,
    pub config: RunConfig,
    pub checks: Vec<CheckResult>,
    /// Checks that could not run for this configuration.
    pub notes: Vec<String>,
    pub passed: bool,
}

impl RunReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: RunReport,
    /// File name to contents, written next to `report.json`.
    pub files: BTreeMap<String, Vec<u8>>,
}

impl RunOutput {
    pub fn report_json(&self) -> Result<Vec<u8>> {
        let mut out = serde_json::to_vec_pretty(&self.report).map_err(|e| Error::Io(e.to_string()))?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn write_to(&self, dir: &Path, elapsed: Duration) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), self.report_json()?)?;
        for (name, bytes) in &self.files {
            std::fs::write(dir.join(name), bytes)?;
        }
        let timing = serde_json::json!({ "command": self.report.command, "seconds": elapsed.as_secs_f64() });
        std::fs::write(dir.join("timing.json"), format!("{timing}\n"))?;
        Ok(())
    }

    /// 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.report.passed {
            0
        } else {
            1
        }
    }
}

/// Exit status for errors: configuration and usage problems.
pub const EXIT_ERROR: i32 = 2;

#[derive(Default)]
struct Checks {
    list: Vec<CheckResult>,
    notes: Vec<String>,
    files: BTreeMap<String, Vec<u8>>,
}

impl Checks {
    fn push(&mut self, name: impl Into<String>, verdict: Verdict, value: f64, threshold: Option<f64>, note: Option<String>) {
        self.list.push(CheckResult { name: name.into(), verdict, value, threshold, note });
    }

    fn at_most(&mut self, name: impl Into<String>, value: f64, threshold: f64) {
        self.push(name, Verdict::from_bool(value <= threshold), value, Some(threshold), None);
    }

    fn at_least(&mut self, name: impl Into<String>, value: f64, threshold: f64) {
        self.push(name, Verdict::from_bool(value >= threshold), value, Some(threshold), None);
    }

    fn verdict(&mut self, name: impl Into<String>, verdict: Verdict, value: f64) {
        self.push(name, verdict, value, None, None);
    }

    fn file(&mut self, name: &str, bytes: Vec<u8>) {
        self.files.insert(name.to_string(), bytes);
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
        bytes.push(b'\n');
        self.file(name, bytes);
        Ok(())
    }

    fn finish(self, command: Command, cfg: &RunConfig) -> RunOutput {
        let passed = self.list.iter().all(|c| c.verdict.passed());
        RunOutput {
            report: RunReport {
                command,
                version: VERSION.to_string(),
                config: cfg.clone(),
                checks: self.list,
                notes: self.notes,
                passed,
            },
            files: self.files,
        }
    }
}

fn csv_bytes(header: &[String], rows: Vec<Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.to_string()))
}

fn header(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn need(spec: &Option<KernelSpec>, name: &str) -> Result<KernelSpec> {
    spec.clone().ok_or_else(|| Error::Config(format!("this command needs `{name}`")))
}

fn pair(cfg: &RunConfig) -> Result<(KernelSpec, KernelSpec)> {
    let k = need(&cfg.k, "k")?;
    let s = cfg.s.clone().unwrap_or_else(|| k.clone());
    Ok((k, s))
}

fn order_for(d: usize, max_index: usize) -> usize {
    (0..).find(|&m| monomial::count_le(d, m) > max_index).unwrap_or(0)
}

fn series_from(d: usize, triples: &Triples) -> Result<Series> {
    let max = triples.iter().map(|t| t.0).max().unwrap_or(0);
    Series::from_triples(d, order_for(d, max), triples)
}

fn ones(d: usize) -> Exponent {
    let mut e = [0; MAX_DIM];
    e[..d].iter_mut().for_each(|x| *x = 1);
    e
}

fn normalized(space: &Space, f: Series) -> Result<Series> {
    let n = space.norm_sq(&f)?.sqrt();
    Ok(f.scale(Complex64::new(1.0 / n, 0.0)))
}

/// `F` from the config, or `default` when none is given.
fn build_f(cfg: &RunConfig, k: &KernelSpec, default: Option<&str>) -> Result<VectorSeries> {
    let d = k.dimension;
    let one = Complex64::new(1.0, 0.0);
    let src = match (&cfg.function, default) {
        (Some(f), _) => f.clone(),
        (None, Some(name)) => FunctionSource::Named(name.to_string()),
        (None, None) => return Err(Error::Config("this command needs `function`".into())),
    };
    let f = match src {
        FunctionSource::Coeffs(comps) => {
            if comps.is_empty() {
                return Err(Error::Config("`function.coeffs` is empty".into()));
            }
            let series = comps.iter().map(|t| series_from(d, t)).collect::<Result<Vec<_>>>()?;
            let order = series.iter().map(|s| s.order()).max().unwrap_or(0);
            return VectorSeries::new(series.into_iter().map(|s| s.with_order(order)).collect());
        }
        FunctionSource::Named(name) => {
            let mut z1 = [0; MAX_DIM];
            z1[0] = 1;
            match name.as_str() {
                "one" => Series::constant(d, 1, one)?,
                "z" => Series::monomial(d, 1, z1, one)?,
                "one-plus-z" => {
                    let p = Series::from_terms(d, 1, &[([0; MAX_DIM], one), (z1, one)])?;
                    normalized(&Space::new(k, 1)?, p)?
                }
                "z-gamma" => normalized(&Space::new(k, d)?, Series::monomial(d, d, ones(d), one)?)?,
                "test-poly" => {
                    if d != 1 {
                        return Err(Error::Config("`test-poly` is univariate".into()));
                    }
                    Series::univariate(vec![
                        Complex64::new(0.3, 0.0),
                        Complex64::new(-0.2, 0.4),
                        Complex64::new(0.5, 0.0),
                        Complex64::new(0.0, 0.1),
                        Complex64::new(0.25, -0.1),
                    ])
                }
                other => return Err(Error::Config(format!("unknown function `{other}`"))),
            }
        }
        FunctionSource::Random { degree } => {
            random_unit_polynomial(&Space::new(k, degree.max(1))?, degree, cfg.seed()?, 0)?.with_order(degree.max(1))
        }
    };
    Ok(VectorSeries::scalar(f))
}

/// Grid for tables: polar in `d = 1`, seeded random points otherwise.
fn table_grid(cfg: &RunConfig, k: &KernelSpec) -> Result<PointSet> {
    let g = &cfg.grid;
    if k.dimension == 1 {
        let mut pts = vec![Complex64::new(0.0, 0.0)];
        for i in 1..=g.radii {
            let r = g.cap * i as f64 / g.radii as f64;
            for j in 0..g.angles {
                pts.push(Complex64::from_polar(r, 2.0 * std::f64::consts::PI * j as f64 / g.angles as f64));
            }
        }
        PointSet::disc(&pts)
    } else {
        PointSet::random(k.domain(), k.dimension, g.radii * g.angles, g.cap, cfg.seed()?)
    }
}

/// The `i`-th seeded random configuration for PSD checks.
fn point_set(cfg: &RunConfig, k: &KernelSpec, i: usize) -> Result<PointSet> {
    let seed = cfg.seed()?.wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(i as u64 + 1));
    PointSet::random(k.domain(), k.dimension, cfg.grid.points, cfg.grid.radius, seed)
}

fn max_coeff_error(got: &Series, want: &Triples) -> f64 {
    want.iter()
        .map(|&(i, re, im)| {
            let g = got.coeffs().get(i).copied().unwrap_or_default();
            (g - Complex64::new(re, im)).norm()
        })
        .fold(0.0, f64::max)
}

fn f64s(v: &[f64]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

pub fn run(cmd: Command, cfg: &RunConfig) -> Result<RunOutput> {
    cfg.validate()?;
    match cmd {
        Command::Kernel => cmd_kernel(cfg),
        Command::Factorize => cmd_factorize(cfg),
        Command::Sarason => cmd_sarason(cfg),
        Command::Dirichlet => cmd_dirichlet(cfg),
        Command::Carleson => cmd_carleson(cfg),
    }
}

/// Coefficients, CNP test, Gram matrices and, with `s`, the quotient `k/s`.
pub fn cmd_kernel(cfg: &RunConfig) -> Result<RunOutput> {
    let k = need(&cfg.k, "k")?;
    let mut out = Checks::default();
    let order = cfg.order.unwrap_or(if k.dimension == 1 { cfg.kernel.cnp_order } else { 20 });
    let c = diagonal_coeffs(&k, order)?;
    let mut buf = Vec::new();
    c.write_csv(&mut buf)?;
    out.file("coeffs.csv", buf);
    match cnp_row_function(&k, order, 1e-14) {
        Ok(row) => {
            let min_b = row.b.values.iter().skip(1).cloned().fold(f64::INFINITY, f64::min);
            out.push("cnp", Verdict::from_bool(cfg.kernel.expect_cnp), min_b, Some(-1e-14), Some(format!("b_n >= -1e-14 up to order {order}")));
            out.at_most("row_identity_residual", row_function_identity_residual(&c, &row.b), 1e-12);
            let mut buf = Vec::new();
            row.b.write_csv(&mut buf)?;
            out.file("row_function.csv", buf);
        }
        Err(Error::NotCnp { index, value }) => {
            out.push("cnp", Verdict::from_bool(!cfg.kernel.expect_cnp), value, Some(-1e-14), Some(format!("b[{index}] negative")));
        }
        Err(e) => return Err(e),
    }
    for i in 0..cfg.grid.sets {
        let pts = point_set(cfg, &k, i)?;
        let r = psd_check(&gram_matrix(&k, &pts)?, cfg.tolerances.psd)?;
        out.verdict(format!("gram_psd[{i}]"), r.verdict, r.min_eigenvalue);
    }
    if let Some(s) = &cfg.s {
        let qorder = if k.dimension == 1 { order.min(200) } else { order.min(20) };
        let positive = match quotient_coeffs(&k, s, qorder) {
            Ok(g) => {
                let min_g = g.values.iter().cloned().fold(f64::INFINITY, f64::min);
                out.push("quotient_coeffs", Verdict::from_bool(cfg.kernel.expect_factor), min_g, Some(0.0), None);
                true
            }
            Err(Error::NoCnpFactor { index, value }) => {
                let note = Some(format!("g[{index}] negative"));
                out.push("quotient_coeffs", Verdict::from_bool(!cfg.kernel.expect_factor), value, Some(0.0), note);
                false
            }
            Err(e) => return Err(e),
        };
        if positive {
            for i in 0..cfg.grid.sets {
                let r = quotient_kernel_psd(&k, s, &point_set(cfg, &k, i)?, cfg.tolerances.psd)?;
                out.verdict(format!("quotient_psd[{i}]"), r.verdict, r.min_eigenvalue);
            }
        }
    }
    Ok(out.finish(Command::Kernel, cfg))
}

/// Factorization with reconstruction, contractivity, main-lemma and uniqueness checks.
pub fn cmd_factorize(cfg: &RunConfig) -> Result<RunOutput> {
    let (k, s) = pair(cfg)?;
    let f = build_f(cfg, &k, None)?;
    let seed = cfg.seed()?;
    let trials = cfg.trials.unwrap_or(16);
    // psi is evaluated on the PSD point sets, so its tail must be small at their radius
    let order = cfg.order.unwrap_or_else(|| (4 * f.degree().max(1)).max(tail_order(f.degree(), cfg.grid.radius))).max(2);
    let opts = FactorOptions { order: Some(order), trials, test_degree: (order / 2).min(20), seed };
    let a = cfg.a();
    let fact = match cfg.embed_point() {
        Some(w) => {
            if a != Complex64::new(1.0, 0.0) {
                return Err(Error::Config("`embed` needs a = 1".into()));
            }
            factorize_unit(&f, &k, &s, Some(&w), &opts)?
        }
        None => factorize(&f, a, &k, &s, &opts)?,
    };
    let mut out = Checks::default();
    let tol = &cfg.tolerances;
    out.at_most("reconstruction_residual", fact.certificates.reconstruction_residual, tol.reconstruction);
    if let Some(m) = fact.certificates.contractivity_margin {
        out.at_least("contractivity_margin", m, -tol.contractivity);
    }
    out.at_most("reciprocal_residual", fact.certificates.reciprocal_residual, 1e-10);
    let unit = (Space::new(&k, fact.f.order())?.vnorm_sq(&fact.f)? - 1.0).abs() < 1e-10;
    for i in 0..cfg.grid.sets {
        let pts = point_set(cfg, &k, i)?;
        let r = main_lemma_psd(&k, &s, &fact.f, &pts, tol.psd)?;
        out.verdict(format!("main_lemma_psd[{i}]"), r.verdict, r.min_eigenvalue);
        if unit && a == Complex64::new(1.0, 0.0) {
            let u = uniqueness_kernel_psd(&k, &s, &fact.f, &fact.psi, &pts, tol.psd)?;
            out.verdict(format!("uniqueness[{i}]"), u.verdict, u.recovery_error.unwrap_or(f64::NAN));
        }
    }
    if !unit {
        out.notes.push("uniqueness kernel skipped: F is not a unit vector".into());
    }
    let e = &cfg.expect;
    if let Some(p) = &e.psi {
        out.at_most("expected_psi", max_coeff_error(&fact.psi, p), e.coeff_tol);
    }
    if let Some(p) = &e.phi {
        let err = fact.phi.components().iter().zip(p).map(|(g, w)| max_coeff_error(g, w)).fold(0.0, f64::max);
        out.at_most("expected_phi", err, e.coeff_tol);
    }
    if let Some(v) = &e.v {
        out.at_most("expected_v", max_coeff_error(&fact.v, v), e.coeff_tol);
    }
    out.json("factorization.json", &fact)?;
    let mut buf = Vec::new();
    fact.psi.write_csv(&mut buf)?;
    out.file("psi.csv", buf);
    Ok(out.finish(Command::Factorize, cfg))
}

fn point_columns(d: usize) -> Vec<String> {
    if d == 1 {
        return header(&["re_z", "im_z"]);
    }
    (1..=d).flat_map(|i| [format!("re_z{i}"), format!("im_z{i}")]).collect()
}

fn point_fields(z: &[Complex64]) -> Vec<String> {
    z.iter().flat_map(|c| [c.re.to_string(), c.im.to_string()]).collect()
}

/// `V_F` tables, majorant chain, quadrature cross-validation and extremal checks.
pub fn cmd_sarason(cfg: &RunConfig) -> Result<RunOutput> {
    let (k, s) = pair(cfg)?;
    let f = build_f(cfg, &k, None)?;
    let d = k.dimension;
    let v = sarason_function(&k, &s, &f, f.degree().max(1))?;
    let grid = table_grid(cfg, &k)?;
    let mut out = Checks::default();

    let mut buf = Vec::new();
    v.v.write_csv(&mut buf)?;
    out.file("v.csv", buf);
    let mut cols = point_columns(d);
    cols.extend(header(&["re_v", "im_v"]));
    let mut rows = Vec::with_capacity(grid.len());
    let mut min_re = f64::INFINITY;
    for z in &grid.points {
        let val = v.eval(z)?;
        min_re = min_re.min(val.re);
        let mut r = point_fields(z);
        r.extend([val.re.to_string(), val.im.to_string()]);
        rows.push(r);
    }
    out.file("v_grid.csv", csv_bytes(&cols, rows)?);
    out.at_least("re_v_nonnegative", min_re, -1e-12);

    let table = majorant_check(&k, &s, &f, &grid)?;
    let mut buf = Vec::new();
    table.write_csv(&mut buf)?;
    out.file("majorant.csv", buf);
    out.verdict("majorant", table.verdict, table.worst_slack);

    let sc = &cfg.sarason;
    if sc.quadrature_points > 0 {
        let seed = cfg.seed()?.wrapping_add(1);
        let pts = PointSet::random(k.domain(), d, sc.quadrature_points, sc.quadrature_radius, seed)?;
        match sarason_by_quadrature(&k, &s, &f, &pts, sc.radial_nodes, sc.angular_nodes) {
            Ok(q) => {
                let mut worst: f64 = 0.0;
                for (z, qv) in pts.points.iter().zip(q) {
                    let want = v.eval(z)?;
                    worst = worst.max((qv - want).norm() / want.norm().max(1e-300));
                }
                out.at_most("quadrature_cross_validation", worst, cfg.tolerances.quadrature);
            }
            Err(Error::UnsupportedFamily(name)) => {
                out.notes.push(format!("quadrature cross-validation skipped: {name}"));
            }
            Err(e) => return Err(e),
        }
    }

    if sc.extremal {
        let r = extremal_check(&k, &f, 10)?;
        out.verdict("extremal", r.verdict, r.deviation);
        let dev = grid.points.iter().map(|z| v.eval(z).map(|x| (x - 1.0).norm())).collect::<Result<Vec<_>>>()?;
        out.at_most("v_identically_one", dev.into_iter().fold(0.0, f64::max), 1e-8);
        let b = extremal_bound_check(&k, &s, &f, &grid, None)?;
        out.verdict("extremal_pointwise_bounds", b.verdict, b.rows.len() as f64);
    }
    if let Some(want) = &cfg.expect.v {
        out.at_most("expected_v", max_coeff_error(&v.v, want), cfg.expect.coeff_tol);
    }
    Ok(out.finish(Command::Sarason, cfg))
}

/// The weighted Dirichlet pipeline: norm identity, CNP, Shimorin's formula, `s_1` and the growth table.
pub fn cmd_dirichlet(cfg: &RunConfig) -> Result<RunOutput> {
    let dc = &cfg.dirichlet;
    let alpha = dc.alpha;
    let tol = &cfg.tolerances;
    let mut out = Checks::default();
    let dk = KernelSpec::dirichlet(alpha)?;

    let m = DiscMeasure::mu_alpha(alpha, RadialRule::TanhSinh(1.0 / 64.0), 4)?;
    let rows = norm_equality_check(alpha, dc.norm_max_n, &m)?;
    let worst = rows.iter().map(|r| r.rel_err).fold(0.0, f64::max);
    out.at_most("norm_equality", worst, tol.norm_equality);
    let table = rows.iter().map(|r| vec![r.n.to_string(), r.lhs.to_string(), r.rhs.to_string(), r.rel_err.to_string()]).collect();
    out.file("norms.csv", csv_bytes(&header(&["n", "lhs", "rhs", "rel_err"]), table)?);

    match cnp_row_function(&dk, cfg.kernel.cnp_order, 1e-14) {
        Ok(row) => {
            let min_b = row.b.values.iter().skip(1).cloned().fold(f64::INFINITY, f64::min);
            out.at_least("cnp", min_b, -1e-14);
        }
        Err(Error::NotCnp { value, .. }) => out.at_least("cnp", value, -1e-14),
        Err(e) => return Err(e),
    }
    out.verdict("f_contractive", Verdict::from_bool(f_contractive(alpha, 40).is_ok()), 0.0);

    if dc.shimorin_points > 0 {
        let f = build_f(cfg, &dk, Some("test-poly"))?;
        let poly = &f.components()[0];
        let v = sarason_function(&dk, &dk, &f, poly.degree().max(1))?;
        let pts = PointSet::random(crate::kernel::Domain::Ball, 1, dc.shimorin_points, 0.8, cfg.seed()?)?;
        let mm = DiscMeasure::mu_alpha(alpha, RadialRule::TanhSinh(1.0 / 32.0), 256)?;
        let mut worst: f64 = 0.0;
        let mut min_v = f64::INFINITY;
        for z in &pts.points {
            let got = shimorin_re_v(alpha, poly, z[0], &mm, 256)?;
            let want = v.eval(z)?.re;
            worst = worst.max((got - want).abs() / want.abs().max(1e-300));
            min_v = min_v.min(got);
        }
        out.at_most("shimorin_vs_coefficient_rule", worst, tol.shimorin);
        out.at_least("shimorin_nonnegative", min_v, 0.0);
    }

    let s1 = s1_properties_check(alpha, 36, 64)?;
    out.verdict("s1_properties", Verdict::from_bool(s1.passed), s1.sector_ratio);
    out.json("s1.json", &s1)?;

    if dc.max_zeros > 0 {
        let demo = unbounded_demo(alpha, dc.max_zeros, &DemoOptions { quadrature: dc.quadrature, spread: dc.spread })?;
        out.verdict("t_floor", Verdict::from_bool(demo.t_floor_ok), demo.rows.iter().map(|r| r.t).fold(f64::INFINITY, f64::min));
        out.verdict("s_increasing", Verdict::from_bool(demo.s_increasing), demo.increment_floor);
        out.verdict("sup_re_v_increasing", Verdict::from_bool(demo.v_increasing), demo.rows.last().map(|r| r.sup_re_v).unwrap_or(0.0));
        out.at_least("sup_re_v_growth", demo.growth, 5.0);
        let cols = header(&["n", "z_n", "w_n", "one_minus_w_n", "t_n", "S_n", "S_n_truncated", "sup_re_v", "norm_sq", "estimate_ratio"]);
        let table = demo
            .rows
            .iter()
            .map(|r| {
                let mut v = vec![r.j.to_string()];
                v.extend(f64s(&[r.z, r.w, r.one_minus_w, r.t, r.s_sum, r.s_sum_truncated, r.sup_re_v, r.norm_sq, r.estimate_ratio]));
                v
            })
            .collect();
        out.file("demo.csv", csv_bytes(&cols, table)?);
        let curve = demo.curve.iter().map(|(r, v)| f64s(&[*r, *v])).collect();
        out.file("re_v_curve.csv", csv_bytes(&header(&["r", "re_v"]), curve)?);
        out.json("demo.json", &demo)?;
    }
    Ok(out.finish(Command::Dirichlet, cfg))
}

/// Supremum of `Re int s_z dmu` and the embedding constant of `mu`.
pub fn cmd_carleson(cfg: &RunConfig) -> Result<RunOutput> {
    let s = match (&cfg.s, &cfg.k) {
        (Some(s), _) => s.clone(),
        (None, Some(k)) => k.clone(),
        (None, None) => return Err(Error::Config("this command needs `s`".into())),
    };
    let cc = &cfg.carleson;
    let m = cc.measure.build()?;
    let r = carleson_check(&s, &m, cc.f_degree, cc.trials, cfg.seed()?, &cc.grid)?;
    let mut out = Checks::default();
    out.verdict("sup_re_finite", Verdict::from_bool(r.sup_re.is_finite()), r.sup_re);
    out.at_most("sampled_below_estimate", r.sampled_ratio, r.embedding_constant_estimate * (1.0 + 1e-12));
    let e = &cfg.expect;
    if let Some(c) = e.carleson_constant {
        out.at_most("expected_constant", (r.embedding_constant_estimate - c).abs(), e.value_tol);
    }
    if let Some(v) = e.sup_re {
        out.at_most("expected_sup_re", (r.sup_re - v).abs(), e.value_tol);
    }
    out.json("carleson.json", &r)?;
    Ok(out.finish(Command::Carleson, cfg))
}
