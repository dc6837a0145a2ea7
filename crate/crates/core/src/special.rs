//! Gamma, zeta, Bernoulli numbers and the polylogarithm near the unit circle.

use num_complex::Complex64;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 4.742_187_5;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_048_8e-4,
    2.174_396_181_152_126_4e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_275e-5,
    -2.619_083_840_158_141e-5,
    3.689_918_265_953_162_5e-6,
];

/// `sum c_j / (x + j)` with the leading constant, for `x >= 0.5`.
fn lanczos_sum(x: f64) -> f64 {
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    a
}

/// Gamma function on the real line (poles return infinity).
pub fn gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let t = x + LANCZOS_G + 0.5;
    let half = t.powf((x + 0.5) / 2.0);
    (2.0 * PI).sqrt() * lanczos_sum(x) / x * (half * (-t).exp()) * half
}

/// `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        return (PI / (PI * x).sin().abs()).ln() - ln_gamma(1.0 - x);
    }
    let t = x + LANCZOS_G + 0.5;
    (x + 0.5) * t.ln() - t + ((2.0 * PI).sqrt() * lanczos_sum(x) / x).ln()
}

const BERNOULLI_EVEN: [(f64, f64); 16] = [
    (1.0, 1.0),
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174_611.0, 330.0),
    (854_513.0, 138.0),
    (-236_364_091.0, 2730.0),
    (8_553_103.0, 6.0),
    (-23_749_461_029.0, 870.0),
    (8_615_841_276_005.0, 14322.0),
];

/// Bernoulli number `B_n` for `n <= 31` (convention `B_1 = -1/2`).
pub fn bernoulli(n: usize) -> f64 {
    match n {
        1 => -0.5,
        n if n % 2 == 1 => 0.0,
        n => {
            let (p, q) = BERNOULLI_EVEN[n / 2];
            p / q
        }
    }
}

/// Bernoulli polynomial `B_n(x)`.
pub fn bernoulli_poly(n: usize, x: f64) -> f64 {
    let mut acc = 0.0;
    let mut binom = 1.0;
    for k in 0..=n {
        acc += binom * bernoulli(k) * x.powi((n - k) as i32);
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    acc
}

pub fn harmonic(n: usize) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

/// Riemann zeta on the real line, `s != 1`.
pub fn zeta(s: f64) -> f64 {
    if s == 1.0 {
        return f64::INFINITY;
    }
    if s == 0.0 {
        return -0.5;
    }
    if s < 0.5 {
        if s < 0.0 && s == s.floor() && (s as i64) % 2 == 0 {
            return 0.0;
        }
        return 2f64.powf(s) * PI.powf(s - 1.0) * (PI * s / 2.0).sin() * gamma(1.0 - s) * zeta(1.0 - s);
    }
    if s > 60.0 {
        return 1.0 + 2f64.powf(-s) + 3f64.powf(-s);
    }
    // Euler-Maclaurin with 20 explicit terms.
    const N: usize = 20;
    let n = N as f64;
    let mut acc: f64 = (1..N).map(|k| (k as f64).powf(-s)).sum();
    acc += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    let mut rising = s;
    let mut fact = 2.0;
    let mut npow = n.powf(-s - 1.0);
    for j in 1..=14 {
        acc += bernoulli(2 * j) / fact * rising * npow;
        rising *= (s + 2.0 * j as f64 - 1.0) * (s + 2.0 * j as f64);
        fact *= (2 * j + 1) as f64 * (2 * j + 2) as f64;
        npow /= n * n;
    }
    acc
}

/// Expansion of `Li_s(e^mu)` in powers of `mu`, valid for `|mu| < 2 pi`.
#[derive(Debug, Clone)]
pub struct PolylogExpansion {
    pub s: f64,
    /// Positive integer order, which carries a logarithmic term.
    integer: Option<usize>,
    singular: f64,
    harmonic: f64,
    /// `zeta(s - k) / k!`; the pole term is zeroed for integer orders.
    pub coeffs: Vec<f64>,
}

pub const POLYLOG_TERMS: usize = 80;

impl PolylogExpansion {
    pub fn new(s: f64) -> Self {
        let rounded = s.round();
        let integer = if (s - rounded).abs() < 1e-9 && rounded >= 1.0 {
            Some(rounded as usize)
        } else {
            None
        };
        let s = if (s - rounded).abs() < 1e-9 { rounded } else { s };
        let mut coeffs = Vec::with_capacity(POLYLOG_TERMS);
        let mut fact = 1.0;
        for k in 0..POLYLOG_TERMS {
            if k > 0 {
                fact *= k as f64;
            }
            let skip = integer.map(|m| m - 1 == k).unwrap_or(false);
            coeffs.push(if skip { 0.0 } else { zeta(s - k as f64) / fact });
        }
        let (singular, harmonic) = match integer {
            Some(m) => (1.0 / gamma(m as f64), self::harmonic(m - 1)),
            None => (gamma(1.0 - s), 0.0),
        };
        PolylogExpansion { s, integer, singular, harmonic, coeffs }
    }

    /// The non-analytic part at `mu`, given `ln(-mu)`.
    pub fn singular_part(&self, mu: Complex64, log_neg_mu: Complex64) -> Complex64 {
        match self.integer {
            Some(m) => self.singular * mu.powu(m as u32 - 1) * (self.harmonic - log_neg_mu),
            None => self.singular * ((self.s - 1.0) * log_neg_mu).exp(),
        }
    }

    pub fn eval(&self, mu: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * mu + c;
        }
        acc + self.singular_part(mu, (-mu).ln())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_matches_statrs() {
        let mut x = 0.05;
        while x < 170.0 {
            // statrs itself is only good to about 1e-13 here.
            let want = statrs::function::gamma::gamma(x);
            assert_relative_eq!(gamma(x), want, max_relative = 1e-12);
            assert_relative_eq!(ln_gamma(x), statrs::function::gamma::ln_gamma(x), epsilon = 1e-12, max_relative = 1e-13);
            x = x * 1.37 + 0.011;
        }
        assert_relative_eq!(ln_gamma(550.5), statrs::function::gamma::ln_gamma(550.5), max_relative = 1e-14);
    }

    #[test]
    fn gamma_exact_at_integers_and_halves() {
        let mut fact = 1.0;
        for n in 1..40 {
            assert_relative_eq!(gamma(n as f64), fact, max_relative = 1e-14);
            fact *= n as f64;
        }
        // Gamma(n + 1/2) = (2n)! sqrt(pi) / (4^n n!)
        let mut want = PI.sqrt();
        for n in 0..30 {
            assert_relative_eq!(gamma(n as f64 + 0.5), want, max_relative = 1e-14);
            want *= n as f64 + 0.5;
        }
        assert_relative_eq!(gamma(16.791_972_211_426_252), 11_692_490_908_209.076, max_relative = 1e-14);
    }

    #[test]
    fn gamma_reflection_negative() {
        // Gamma(-1/2) = -2 sqrt(pi)
        assert_relative_eq!(gamma(-0.5), -2.0 * PI.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn zeta_known_values() {
        assert_relative_eq!(zeta(2.0), PI * PI / 6.0, max_relative = 1e-14);
        assert_relative_eq!(zeta(4.0), PI.powi(4) / 90.0, max_relative = 1e-14);
        assert_relative_eq!(zeta(0.0), -0.5, max_relative = 1e-14);
        assert_relative_eq!(zeta(-1.0), -1.0 / 12.0, max_relative = 1e-13);
        assert_relative_eq!(zeta(-3.0), 1.0 / 120.0, max_relative = 1e-13);
        assert_relative_eq!(zeta(0.5), -1.460_354_508_809_586_8, max_relative = 1e-14);
        assert_relative_eq!(zeta(1.5), 2.612_375_348_685_488_3, max_relative = 1e-14);
        assert_eq!(zeta(-4.0), 0.0);
    }

    #[test]
    fn bernoulli_polynomial_identities() {
        for n in 0..12 {
            assert_relative_eq!(bernoulli_poly(n, 0.0), bernoulli(n), epsilon = 1e-14);
            // B_n(x+1) - B_n(x) = n x^{n-1}
            let x = 0.37;
            let lhs = bernoulli_poly(n, x + 1.0) - bernoulli_poly(n, x);
            let rhs = if n == 0 { 0.0 } else { n as f64 * x.powi(n as i32 - 1) };
            assert_relative_eq!(lhs, rhs, epsilon = 1e-12);
        }
    }

    fn direct_li(s: f64, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut p = x;
        for n in 1..20_000 {
            acc += p * (n as f64).powf(-s);
            p *= x;
        }
        acc
    }

    #[test]
    fn polylog_expansion_matches_direct_sum() {
        let pts = [
            Complex64::new(0.9, 0.0),
            Complex64::from_polar(0.95, 1.3),
            Complex64::from_polar(0.97, -3.0),
            Complex64::from_polar(0.8, 2.2),
        ];
        for &s in &[-1.5, -1.0, -0.5, 0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.75, 7.0] {
            let e = PolylogExpansion::new(s);
            for &x in &pts {
                let got = e.eval(x.ln());
                let want = direct_li(s, x);
                assert!((got - want).norm() <= 1e-11 * want.norm().max(1.0), "s={s} x={x} got={got} want={want}");
            }
        }
    }

    #[test]
    fn polylog_elementary_cases() {
        let x = 0.999_f64;
        let mu = Complex64::new(x.ln(), 0.0);
        assert_relative_eq!(PolylogExpansion::new(1.0).eval(mu).re, -(1.0 - x).ln(), max_relative = 1e-13);
        assert_relative_eq!(PolylogExpansion::new(0.0).eval(mu).re, x / (1.0 - x), max_relative = 1e-12);
    }
}
