//! Finite positive measures on the closed disc, stored as weighted nodes.

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre_on, periodic_angles, tanh_sinh};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Upper bound on stored nodes.
pub const NODE_BUDGET: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureNode {
    pub z: Complex64,
    pub weight: f64,
}

/// Rule for `int_0^1 g(t) dt` in the squared radius `t = r^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadialRule {
    GaussLegendre(usize),
    /// Double-exponential rule with step `h`; handles `(1-t)^p` endpoint behaviour.
    TanhSinh(f64),
}

/// A node of a radial rule: `t`, `1 - t` (kept exactly near 1) and weight.
#[derive(Debug, Clone, Copy)]
pub struct RadialNode {
    pub t: f64,
    pub one_minus_t: f64,
    pub weight: f64,
}

impl RadialRule {
    pub fn nodes(self) -> Vec<RadialNode> {
        match self {
            RadialRule::GaussLegendre(n) => {
                let (x, w) = gauss_legendre_on(n, 0.0, 1.0);
                x.into_iter().zip(w).map(|(t, weight)| RadialNode { t, one_minus_t: 1.0 - t, weight }).collect()
            }
            RadialRule::TanhSinh(h) => tanh_sinh(h)
                .into_iter()
                .map(|n| {
                    // x in (-1, 1) maps to t = (1 + x) / 2
                    let (t, one_minus_t) =
                        if n.x >= 0.0 { (1.0 - 0.5 * n.gap, 0.5 * n.gap) } else { (0.5 * n.gap, 1.0 - 0.5 * n.gap) };
                    RadialNode { t, one_minus_t, weight: 0.5 * n.weight }
                })
                .collect(),
        }
    }

    pub fn len(self) -> usize {
        self.nodes().len()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DiscMeasure {
    /// Nodes with `|z| < 1`.
    pub interior: Vec<MeasureNode>,
    /// Nodes on the unit circle.
    pub boundary: Vec<MeasureNode>,
}

fn check_budget(nodes: usize) -> Result<()> {
    if nodes > NODE_BUDGET {
        return Err(Error::QuadratureBudgetExceeded { nodes, budget: NODE_BUDGET });
    }
    Ok(())
}

impl DiscMeasure {
    pub fn point_mass(z: Complex64, mass: f64) -> Result<Self> {
        if !(mass >= 0.0) || !mass.is_finite() {
            return Err(Error::InvalidArgument(format!("mass {mass} must be finite and non-negative")));
        }
        let n = z.norm();
        if n > 1.0 {
            return Err(Error::PointOutsideDomain(format!("{z}")));
        }
        let node = MeasureNode { z, weight: mass };
        Ok(if n == 1.0 {
            DiscMeasure { interior: vec![], boundary: vec![node] }
        } else {
            DiscMeasure { interior: vec![node], boundary: vec![] }
        })
    }

    /// `mass` times normalized arc length, by an `n`-point trapezoid rule.
    pub fn boundary_uniform(mass: f64, n: usize) -> Result<Self> {
        check_budget(n)?;
        let w = mass / n as f64;
        let boundary = periodic_angles(n)
            .into_iter()
            .map(|th| MeasureNode { z: Complex64::from_polar(1.0, th), weight: w })
            .collect();
        Ok(DiscMeasure { interior: vec![], boundary })
    }

    /// `density(t, 1 - t) dA/pi` with `t = |z|^2`.
    pub fn radial<F: Fn(f64, f64) -> f64>(density: F, radial: RadialRule, angular: usize) -> Result<Self> {
        let rad = radial.nodes();
        check_budget(rad.len() * angular)?;
        let angles = periodic_angles(angular);
        let mut interior = Vec::with_capacity(rad.len() * angular);
        for node in &rad {
            let rho = density(node.t, node.one_minus_t);
            if !(rho >= 0.0) || !rho.is_finite() {
                return Err(Error::InvalidArgument(format!("density {rho} at t = {}", node.t)));
            }
            let w = node.weight * rho / angular as f64;
            let r = node.t.sqrt();
            for &th in &angles {
                interior.push(MeasureNode { z: Complex64::from_polar(r, th), weight: w });
            }
        }
        Ok(DiscMeasure { interior, boundary: vec![] })
    }

    /// Normalized area measure `dA/pi`.
    pub fn area(radial: RadialRule, angular: usize) -> Result<Self> {
        Self::radial(|_, _| 1.0, radial, angular)
    }

    /// The measure with `D(mu_alpha) = D_alpha`: density
    /// `alpha (1-t)^{alpha-1} (1 - alpha t)` against `dA/pi`; `alpha = 0` gives arc length.
    pub fn mu_alpha(alpha: f64, radial: RadialRule, angular: usize) -> Result<Self> {
        if alpha == 0.0 {
            return Self::boundary_uniform(1.0, angular);
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::AlphaOutOfRange(alpha));
        }
        Self::radial(|t, s| alpha * s.powf(alpha - 1.0) * (1.0 - alpha * t), radial, angular)
    }

    pub fn combine(mut self, other: DiscMeasure) -> Result<Self> {
        check_budget(self.len() + other.len())?;
        self.interior.extend(other.interior);
        self.boundary.extend(other.boundary);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.interior.len() + self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn nodes(&self) -> impl Iterator<Item = &MeasureNode> {
        self.interior.iter().chain(&self.boundary)
    }

    pub fn total_mass(&self) -> f64 {
        self.nodes().map(|n| n.weight).sum()
    }

    pub fn integrate<F: Fn(Complex64) -> f64>(&self, f: F) -> f64 {
        self.nodes().map(|n| n.weight * f(n.z)).sum()
    }

    pub fn integrate_complex<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Complex64 {
        self.nodes().map(|n| f(n.z) * n.weight).sum()
    }
}
