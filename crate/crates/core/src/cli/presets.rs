use crate::error::{Error, Result};
use serde_json::{json, Value};

pub const NAMES: &[&str] = &[
    "h2-half-one-plus-z",
    "h2-extremal-z",
    "da2-extremal",
    "dirichlet-half-cnp",
    "bergman-not-cnp",
    "szego-szego",
    "bergman-szego",
    "bergman-dirichlet-half",
    "da2-da2",
    "hardy-ball2-da2",
    "dirichlet-demo",
    "carleson-area-h2",
    "carleson-point-mass-h2",
];

fn szego() -> Value {
    json!({ "family": "szego" })
}

fn da(d: usize) -> Value {
    json!({ "family": "drury_arveson", "dimension": d, "truncation_order": 40 })
}

fn bergman0() -> Value {
    json!({ "family": "bergman_weighted", "params": { "beta": 0.0 } })
}

fn dirichlet(alpha: f64) -> Value {
    json!({ "family": "dirichlet_alpha", "params": { "alpha": alpha } })
}

fn pair(k: Value, s: Value, degree: usize) -> Value {
    // only the Szego and Drury-Arveson kernels of these pairs are CNP
    let cnp = matches!(k["family"].as_str(), Some("szego" | "drury_arveson"));
    json!({
        "k": k, "s": s, "function": { "random": { "degree": degree } }, "seed": 7, "trials": 100,
        "kernel": { "expect_cnp": cnp }
    })
}

/// `psi = z/(2 + z)`, `Phi = sqrt2 (1 + z)/(2 + z)` and `V = 1 + z` for `F = (1 + z)/sqrt2` in `H^2`.
fn half_one_plus_z(terms: usize) -> Value {
    let psi: Vec<(usize, f64, f64)> =
        (0..terms).map(|n| (n, if n == 0 { 0.0 } else { -(-0.5f64).powi(n as i32) }, 0.0)).collect();
    let r2 = std::f64::consts::SQRT_2;
    let phi: Vec<(usize, f64, f64)> = (0..terms)
        .map(|n| (n, if n == 0 { r2 / 2.0 } else { r2 / 4.0 * (-0.5f64).powi(n as i32 - 1) }, 0.0))
        .collect();
    json!({
        "k": szego(),
        "s": szego(),
        "function": { "named": "one-plus-z" },
        "order": 48,
        "seed": 1,
        "expect": { "psi": psi, "phi": [phi], "v": [(0, 1.0, 0.0), (1, 1.0, 0.0), (2, 0.0, 0.0)], "coeff_tol": 1e-10 }
    })
}

/// Base config for a named preset.
pub fn preset(name: &str) -> Result<Value> {
    Ok(match name {
        "h2-half-one-plus-z" => half_one_plus_z(40),
        "h2-extremal-z" => json!({
            "k": szego(), "s": szego(), "function": { "named": "z" }, "seed": 3, "sarason": { "extremal": true }
        }),
        "da2-extremal" => json!({
            "k": da(2), "s": da(2), "function": { "named": "z-gamma" }, "seed": 3,
            "sarason": { "extremal": true, "quadrature_points": 0 }
        }),
        "dirichlet-half-cnp" => json!({ "k": dirichlet(0.5), "seed": 5 }),
        "bergman-not-cnp" => json!({ "k": bergman0(), "seed": 5, "kernel": { "expect_cnp": false } }),
        "szego-szego" => pair(szego(), szego(), 8),
        "bergman-szego" => pair(bergman0(), szego(), 8),
        "bergman-dirichlet-half" => pair(bergman0(), dirichlet(0.5), 8),
        "da2-da2" => {
            let mut v = pair(da(2), da(2), 4);
            v["grid"] = json!({ "radius": 0.7, "cap": 0.9 });
            v
        }
        "hardy-ball2-da2" => {
            let mut v = pair(json!({ "family": "hardy_ball", "dimension": 2, "truncation_order": 40 }), da(2), 4);
            v["sarason"] = json!({ "quadrature_points": 20, "quadrature_radius": 0.6, "radial_nodes": 48, "angular_nodes": 64 });
            v["tolerances"] = json!({ "quadrature": 1e-4 });
            v["grid"] = json!({ "radius": 0.7, "cap": 0.9 });
            v
        }
        "dirichlet-demo" => json!({
            "k": dirichlet(0.5), "s": dirichlet(0.5), "function": { "named": "test-poly" }, "seed": 11,
            "dirichlet": { "alpha": 0.5, "max_zeros": 12 }
        }),
        "carleson-area-h2" => json!({
            "s": szego(), "seed": 13,
            "carleson": {
                "measure": { "area": { "radial": { "gauss_legendre": 32 }, "angular": 256 } },
                "f_degree": 40,
                "grid": { "radii": 16, "angles": 32, "cap": 0.9 }
            },
            "expect": { "carleson_constant": 1.0, "sup_re": 1.0, "value_tol": 1e-9 }
        }),
        "carleson-point-mass-h2" => json!({
            "s": szego(), "seed": 13,
            "carleson": { "measure": { "point_mass": { "re": 0.5, "im": 0.0, "mass": 1.0 } }, "f_degree": 40 },
            "expect": { "carleson_constant": 4.0 / 3.0, "value_tol": 1e-9 }
        }),
        other => return Err(Error::Config(format!("unknown preset `{other}`; known: {}", NAMES.join(", ")))),
    })
}
