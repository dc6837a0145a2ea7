//! Acceptance suite: one pass/fail line per criterion.
//!
//! Runs as a plain binary so the lines reach the terminal. The suite is run
//! twice and the second pass only feeds the determinism criterion. The process
//! fails when a criterion outside `KNOWN_FAILURES` fails.

use cnpf::dirichlet::demo::{unbounded_demo, DemoOptions};
use cnpf::dirichlet::local::{norm_equality_check, shimorin_re_v};
use cnpf::dirichlet::measure::{DiscMeasure, RadialRule};
use cnpf::kernel::{cnp_row_function, diagonal_coeffs, row_function_identity_residual, KernelSpec, PointSet};
use cnpf::monomial::MAX_DIM;
use cnpf::psd::{multiplier_norm_cert, psd_check};
use cnpf::sarason::checks::{extremal_bound_check, extremal_check, main_lemma_psd, majorant_check, uniqueness_kernel_psd};
use cnpf::sarason::factor::{factorize, factorize_unit, random_unit_polynomial, FactorOptions};
use cnpf::sarason::{sarason_by_quadrature, sarason_function};
use cnpf::series::{Series, VectorSeries};
use cnpf::space::Space;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::{json, Value};
use std::f64::consts::{PI, SQRT_2};
use std::time::{Duration, Instant};

/// Criteria that fail with the implemented method; see the README.
const KNOWN_FAILURES: &[usize] = &[9];

const SEED: u64 = 20_240_601;

struct Outcome {
    id: usize,
    name: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
}

struct Pair {
    name: &'static str,
    k: KernelSpec,
    s: KernelSpec,
    /// Radius of random PSD configurations.
    radius: f64,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn spec(v: Value) -> KernelSpec {
    serde_json::from_value(v).unwrap()
}

fn pairs() -> Vec<Pair> {
    let szego = KernelSpec::szego();
    let bergman = KernelSpec::bergman(0.0).unwrap();
    let da2 = KernelSpec::drury_arveson(2).unwrap();
    let hb2 = spec(json!({ "family": "hardy_ball", "dimension": 2, "truncation_order": 40 }));
    vec![
        Pair { name: "szego/szego", k: szego.clone(), s: szego.clone(), radius: 0.9 },
        Pair { name: "bergman/szego", k: bergman.clone(), s: szego, radius: 0.9 },
        Pair { name: "bergman/dirichlet", k: bergman, s: KernelSpec::dirichlet(0.5).unwrap(), radius: 0.9 },
        Pair { name: "da2/da2", k: da2.clone(), s: da2.clone(), radius: 0.7 },
        Pair { name: "hardyball2/da2", k: hb2, s: da2, radius: 0.7 },
    ]
}

fn unit_poly(k: &KernelSpec, degree: usize, trial: u64) -> VectorSeries {
    let space = Space::new(k, degree).unwrap();
    VectorSeries::scalar(random_unit_polynomial(&space, degree, SEED, trial).unwrap())
}

fn polar_grid(radii: usize, angles: usize, cap: f64) -> PointSet {
    let mut pts = Vec::with_capacity(radii * angles);
    for i in 1..=radii {
        let r = cap * i as f64 / radii as f64;
        for j in 0..angles {
            pts.push(Complex64::from_polar(r, 2.0 * PI * j as f64 / angles as f64));
        }
    }
    PointSet::disc(&pts).unwrap()
}

fn grid_for(k: &KernelSpec, count: usize, cap: f64, seed: u64) -> PointSet {
    if k.dimension == 1 {
        let side = (count as f64).sqrt().round() as usize;
        polar_grid(side, side, cap)
    } else {
        PointSet::random(k.domain(), k.dimension, count, cap, seed).unwrap()
    }
}

fn max_err(got: &Series, want: &[Complex64]) -> f64 {
    let n = got.coeffs().len().max(want.len());
    (0..n)
        .map(|i| {
            let g = got.coeffs().get(i).copied().unwrap_or_default();
            let w = want.get(i).copied().unwrap_or_default();
            (g - w).norm()
        })
        .fold(0.0, f64::max)
}

/// Coefficients of `z/(2+z)` and `sqrt(2)(1+z)/(2+z)` up to `order`.
fn anchor_coeffs(order: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    let geo: Vec<f64> = (0..=order).map(|n| (-0.5f64).powi(n as i32) / 2.0).collect();
    let psi = (0..=order).map(|n| if n == 0 { c(0.0, 0.0) } else { c(geo[n - 1], 0.0) }).collect();
    let phi = (0..=order).map(|n| c(SQRT_2 * (geo[n] + if n > 0 { geo[n - 1] } else { 0.0 }), 0.0)).collect();
    (psi, phi)
}

fn anchor_f() -> VectorSeries {
    let h = 1.0 / SQRT_2;
    VectorSeries::scalar(Series::univariate(vec![c(h, 0.0), c(h, 0.0)]))
}

fn anchor() -> (bool, String, Value) {
    let szego = KernelSpec::szego();
    let order = 64;
    let opts = FactorOptions { order: Some(order), trials: 0, ..FactorOptions::default() };
    let fact = factorize(&anchor_f(), c(1.0, 0.0), &szego, &szego, &opts).unwrap();
    let v_err = max_err(&fact.v, &[c(1.0, 0.0), c(1.0, 0.0)]);
    let (psi, phi) = anchor_coeffs(order);
    let psi_err = max_err(&fact.psi, &psi);
    let phi_err = max_err(&fact.phi.components()[0], &phi);
    let mut boundary: f64 = 0.0;
    for j in 0..256 {
        let z = [Complex64::from_polar(1.0, 2.0 * PI * j as f64 / 256.0)];
        let total = fact.psi.eval(&z).unwrap().norm_sqr() + fact.phi.norm_sq_at(&z).unwrap();
        boundary = boundary.max((total - 1.0).abs());
    }
    let ok = v_err < 1e-12 && psi_err < 1e-10 && phi_err < 1e-10 && boundary < 1e-10;
    let detail = format!("V err {v_err:.1e}, psi err {psi_err:.1e}, Phi err {phi_err:.1e}, boundary {boundary:.1e}");
    (ok, detail, json!([v_err, psi_err, phi_err, boundary]))
}

fn cnp_identity() -> (bool, String, Value) {
    let mut worst_res: f64 = 0.0;
    let mut min_b = f64::INFINITY;
    for alpha in [0.25, 0.5, 0.75] {
        let k = KernelSpec::dirichlet(alpha).unwrap();
        let cf = diagonal_coeffs(&k, 200).unwrap();
        let row = cnp_row_function(&k, 200, 1e-14).unwrap();
        worst_res = worst_res.max(row_function_identity_residual(&cf, &row.b));
        match cnp_row_function(&k, 500, 1e-14) {
            Ok(r) => min_b = r.b.values.iter().skip(1).cloned().fold(min_b, f64::min),
            Err(_) => min_b = f64::NEG_INFINITY,
        }
    }
    let ok = worst_res < 1e-12 && min_b >= -1e-14;
    (ok, format!("identity residual {worst_res:.1e}, min b_n {min_b:.2e}"), json!([worst_res, min_b]))
}

fn reconstruction() -> (bool, String, Value) {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (p, pair) in pairs().iter().enumerate() {
        for i in 0..10 {
            let degree = 3 * (i + 1);
            let f = unit_poly(&pair.k, degree, 100 * p as u64 + i as u64);
            for a in [c(1.0, 0.0), c(2.0, 1.0)] {
                let opts = FactorOptions { trials: 0, seed: SEED, ..FactorOptions::default() };
                let fact = factorize(&f, a, &pair.k, &pair.s, &opts).unwrap();
                worst = worst.max(fact.certificates.reconstruction_residual);
            }
            count += 1;
        }
    }
    (worst < 1e-8, format!("{count} functions, 2 values of a, max residual {worst:.1e}"), json!(worst))
}

fn contractivity() -> (bool, String, Value) {
    let mut worst = f64::INFINITY;
    let mut per = Vec::new();
    for (p, pair) in pairs().iter().enumerate() {
        let f = unit_poly(&pair.k, 6, 1000 + p as u64);
        for a in [c(1.0, 0.0), c(2.0, 1.0)] {
            let opts = FactorOptions { trials: 100, seed: SEED + p as u64, ..FactorOptions::default() };
            let m = factorize(&f, a, &pair.k, &pair.s, &opts).unwrap().certificates.contractivity_margin.unwrap();
            worst = worst.min(m);
            per.push(m);
        }
    }
    (worst >= -1e-6, format!("10 configurations x 100 h, min slack {worst:.2e}"), json!(per))
}

fn main_lemma() -> (bool, String, Value) {
    let mut worst = f64::INFINITY;
    let mut all = true;
    for (p, pair) in pairs().iter().enumerate() {
        let f = unit_poly(&pair.k, 6, 2000 + p as u64);
        for i in 0..10 {
            let pts = PointSet::random(pair.k.domain(), pair.k.dimension, 15, pair.radius, SEED + 31 * i + p as u64).unwrap();
            let r = main_lemma_psd(&pair.k, &pair.s, &f, &pts, 1e-10).unwrap();
            all &= r.verdict.passed();
            worst = worst.min(r.min_eigenvalue / r.trace.max(1.0));
        }
    }
    (all, format!("50 sets, min eigenvalue/trace {worst:.2e}"), json!(worst))
}

fn majorant() -> (bool, String, Value) {
    let mut all = true;
    let mut parts = Vec::new();
    let mut values = Vec::new();
    for (p, pair) in pairs().iter().enumerate() {
        let f = unit_poly(&pair.k, 6, 3000 + p as u64);
        let cap = if pair.k.dimension == 1 { 0.95 } else { 0.9 };
        let grid = grid_for(&pair.k, 10_000, cap, SEED + p as u64);
        let t = majorant_check(&pair.k, &pair.s, &f, &grid).unwrap();
        let chain = t.rows.iter().all(|r| r.mid.is_some());
        all &= t.verdict.passed() && grid.len() == 10_000;
        parts.push(format!("{} {:.1e}{}", pair.name, t.worst_slack, if chain { " (chain)" } else { "" }));
        values.push(t.worst_slack);
    }
    (all, format!("worst slack: {}", parts.join(", ")), json!(values))
}

fn quadrature() -> (bool, String, Value) {
    let ps = pairs();
    let cases = [(&ps[1], 8, 50, 0.8, 128, 128, 1e-6), (&ps[4], 4, 20, 0.6, 48, 64, 1e-4)];
    let mut ok = true;
    let mut parts = Vec::new();
    let mut values = Vec::new();
    for (i, &(pair, degree, count, radius, radial, angular, tol)) in cases.iter().enumerate() {
        let f = unit_poly(&pair.k, degree, 4000 + i as u64);
        let v = sarason_function(&pair.k, &pair.s, &f, degree).unwrap();
        let pts = PointSet::random(pair.k.domain(), pair.k.dimension, count, radius, SEED + i as u64).unwrap();
        let q = sarason_by_quadrature(&pair.k, &pair.s, &f, &pts, radial, angular).unwrap();
        let mut worst: f64 = 0.0;
        for (z, qv) in pts.points.iter().zip(q) {
            let want = v.eval(z).unwrap();
            worst = worst.max((qv - want).norm() / want.norm());
        }
        ok &= worst < tol;
        parts.push(format!("{} {count} pts {worst:.1e}", pair.name));
        values.push(worst);
    }
    (ok, format!("rel err: {}", parts.join(", ")), json!(values))
}

fn dirichlet_oracles() -> (bool, String, Value) {
    let mut norm_worst: f64 = 0.0;
    let mut shim_worst: f64 = 0.0;
    let f = Series::univariate(vec![c(0.3, 0.0), c(-0.2, 0.4), c(0.5, 0.0), c(0.0, 0.1), c(0.25, -0.1)]);
    let fv = VectorSeries::scalar(f.clone());
    for (i, alpha) in [0.25, 0.5, 0.75].into_iter().enumerate() {
        let m = DiscMeasure::mu_alpha(alpha, RadialRule::TanhSinh(1.0 / 64.0), 4).unwrap();
        let rows = norm_equality_check(alpha, 30, &m).unwrap();
        norm_worst = rows.iter().map(|r| r.rel_err).fold(norm_worst, f64::max);
        let k = KernelSpec::dirichlet(alpha).unwrap();
        let v = sarason_function(&k, &k, &fv, 4).unwrap();
        let mm = DiscMeasure::mu_alpha(alpha, RadialRule::TanhSinh(1.0 / 32.0), 256).unwrap();
        let pts = PointSet::random(k.domain(), 1, 20, 0.8, SEED + i as u64).unwrap();
        for z in &pts.points {
            let got = shimorin_re_v(alpha, &f, z[0], &mm, 256).unwrap();
            let want = v.eval(z).unwrap().re;
            shim_worst = shim_worst.max((got - want).abs() / want.abs());
        }
    }
    let ok = norm_worst < 1e-6 && shim_worst < 1e-5;
    (ok, format!("norm rel err {norm_worst:.1e}, Shimorin rel err {shim_worst:.1e}"), json!([norm_worst, shim_worst]))
}

fn demo() -> (bool, String, Value) {
    let d = unbounded_demo(0.5, 12, &DemoOptions::default()).unwrap();
    let ok = d.t_floor_ok && d.s_increasing && d.v_increasing && d.growth >= 5.0;
    let first = d.rows.first().map(|r| r.sup_re_v).unwrap_or(f64::NAN);
    let last = d.rows.last().map(|r| r.sup_re_v).unwrap_or(f64::NAN);
    let detail = format!(
        "t_n floor {}, S_J increasing {}, sup Re V increasing {}, sup Re V {first:.3} -> {last:.3} (growth {:.2}, need 5)",
        d.t_floor_ok, d.s_increasing, d.v_increasing, d.growth
    );
    (ok, detail, serde_json::to_value(&d).unwrap())
}

fn extremal() -> (bool, String, Value) {
    let one = c(1.0, 0.0);
    let szego = KernelSpec::szego();
    let da2 = KernelSpec::drury_arveson(2).unwrap();
    let mut g = [0; MAX_DIM];
    g[0] = 1;
    g[1] = 1;
    let cases = [
        ("1 in H2", szego.clone(), VectorSeries::scalar(Series::constant(1, 1, one).unwrap())),
        ("z in H2", szego.clone(), VectorSeries::scalar(Series::univariate(vec![c(0.0, 0.0), one]))),
        ("z1z2 in DA2", da2.clone(), VectorSeries::scalar(Series::monomial(2, 2, g, c(SQRT_2, 0.0)).unwrap())),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    let mut values = Vec::new();
    for (i, (name, k, f)) in cases.iter().enumerate() {
        let e = extremal_check(k, f, 10).unwrap();
        let v = sarason_function(k, k, f, f.degree().max(1)).unwrap();
        let grid = if k.dimension == 1 { polar_grid(10, 16, 0.95) } else { PointSet::random(k.domain(), 2, 160, 0.9, SEED + i as u64).unwrap() };
        let dev = grid.points.iter().map(|z| (v.eval(z).unwrap() - one).norm()).fold(0.0, f64::max);
        let b = extremal_bound_check(k, k, f, &grid, None).unwrap();
        ok &= e.verdict.passed() && dev < 1e-8 && b.verdict.passed();
        parts.push(format!("{name}: shifts {:.1e}, |V-1| {dev:.1e}, bounds {}", e.deviation, b.verdict.passed()));
        values.push(json!([e.deviation, dev]));
    }
    (ok, parts.join("; "), json!(values))
}

fn negative_controls() -> (bool, String, Value) {
    let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
    let psd = psd_check(&m, 1e-10).unwrap();
    let szego = KernelSpec::szego();
    let pts = PointSet::random(szego.domain(), 1, 10, 0.9, SEED).unwrap();
    let two = VectorSeries::scalar(Series::constant(1, 0, c(2.0, 0.0)).unwrap());
    let mult = multiplier_norm_cert(&two, &szego, &szego, &pts, 1.0, 1e-10).unwrap();
    let f = anchor_f();
    let fact = factorize_unit(&f, &szego, &szego, None, &FactorOptions { order: Some(64), trials: 0, ..FactorOptions::default() }).unwrap();
    let right = uniqueness_kernel_psd(&szego, &szego, &f, &fact.psi, &pts, 1e-10).unwrap();
    // z/(3+z) in place of z/(2+z)
    let wrong_psi = Series::univariate((0..=64i32).map(|n| if n == 0 { c(0.0, 0.0) } else { c((-1.0f64).powi(n - 1) / 3f64.powi(n), 0.0) }).collect());
    let wrong = uniqueness_kernel_psd(&szego, &szego, &f, &wrong_psi, &pts, 1e-10).unwrap();
    let ok = !psd.verdict.passed() && !mult.verdict.passed() && !wrong.verdict.passed();
    let detail = format!(
        "[[1,2],[2,1]] min eig {:.2}, phi=2 A=1 min eig {:.2e}, wrong psi recovery {:.1e} (true psi {:.1e}, {})",
        psd.min_eigenvalue,
        mult.min_eigenvalue,
        wrong.recovery_error.unwrap_or(f64::NAN),
        right.recovery_error.unwrap_or(f64::NAN),
        if right.verdict.passed() { "accepted" } else { "rejected" },
    );
    (ok, detail, json!([psd.min_eigenvalue, mult.min_eigenvalue, wrong.recovery_error, right.recovery_error]))
}

type Criterion = (usize, &'static str, fn() -> (bool, String, Value), Option<Duration>);

fn criteria() -> Vec<Criterion> {
    vec![
        (1, "exact Sarason anchor", anchor, Some(Duration::from_secs(1))),
        (2, "convolution/CNP identity", cnp_identity, Some(Duration::from_secs(5))),
        (3, "reconstruction", reconstruction, Some(Duration::from_secs(30))),
        (4, "contractivity", contractivity, None),
        (5, "main-lemma PSD", main_lemma, None),
        (6, "harmonic majorant", majorant, None),
        (7, "quadrature cross-validation", quadrature, None),
        (8, "D_alpha norm and Shimorin oracles", dirichlet_oracles, None),
        (9, "unbounded Sarason demonstration", demo, Some(Duration::from_secs(120))),
        (10, "extremal suite", extremal, None),
        (11, "negative controls", negative_controls, None),
    ]
}

/// Runs criteria 1 to 11; returns the outcomes and the report that determinism compares.
fn suite(verbose: bool) -> (Vec<Outcome>, Vec<u8>) {
    let mut outcomes = Vec::new();
    let mut report = serde_json::Map::new();
    for (id, name, f, limit) in criteria() {
        let start = Instant::now();
        let (mut passed, mut detail, value) = f();
        let elapsed = start.elapsed();
        if let Some(l) = limit {
            if elapsed > l {
                passed = false;
                detail = format!("{detail}; over the {}s budget", l.as_secs());
            }
        }
        let o = Outcome { id, name, passed, detail, elapsed };
        if verbose {
            print_line(&o);
        }
        report.insert(format!("{id:02}"), json!({ "passed": o.passed, "values": value }));
        outcomes.push(o);
    }
    (outcomes, serde_json::to_vec_pretty(&report).unwrap())
}

fn print_line(o: &Outcome) {
    let tag = if o.passed { "PASS" } else { "FAIL" };
    println!("[{tag}] {:>2} {}: {} ({:.2}s)", o.id, o.name, o.detail, o.elapsed.as_secs_f64());
}

fn main() {
    println!("acceptance suite, seed {SEED}");
    let (mut outcomes, first) = suite(true);
    let start = Instant::now();
    let (_, second) = suite(false);
    let same = first == second;
    let o = Outcome {
        id: 12,
        name: "determinism",
        passed: same,
        detail: format!("two runs, {} report bytes, identical: {same}", first.len()),
        elapsed: start.elapsed(),
    };
    print_line(&o);
    outcomes.push(o);
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("{passed}/{} criteria passed", outcomes.len());
    let unexpected: Vec<usize> = outcomes.iter().filter(|o| !o.passed && !KNOWN_FAILURES.contains(&o.id)).map(|o| o.id).collect();
    for o in outcomes.iter().filter(|o| !o.passed && KNOWN_FAILURES.contains(&o.id)) {
        println!("criterion {} fails as documented in the README", o.id);
    }
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
