//! Multi-index bookkeeping in graded lexicographic order.
//!
//! Monomials of total degree `<= N` in `d <= 3` variables are stored densely:
//! first by total degree, then lexicographically with the first exponent
//! descending, so degree 1 in two variables reads `(1,0), (0,1)`.
//! The prefix of the layout holding all monomials of degree `<= m` is
//! `0..count_le(d, m)`, which the Cauchy product relies on.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub const MAX_DIM: usize = 3;

/// Exponent tuple; entries beyond the dimension are zero.
pub type Exponent = [u32; MAX_DIM];

pub fn total_degree(e: &Exponent) -> usize {
    e.iter().map(|&x| x as usize).sum()
}

/// Binomial coefficient as a float, exact while it fits the mantissa.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    if acc < 9.0e15 {
        acc.round()
    } else {
        acc
    }
}

/// Number of monomials of total degree exactly `m` in `d` variables.
pub fn count_eq(d: usize, m: usize) -> usize {
    if d == 0 {
        return usize::from(m == 0);
    }
    binomial(m + d - 1, d - 1) as usize
}

/// Number of monomials of total degree `<= m` in `d` variables.
pub fn count_le(d: usize, m: usize) -> usize {
    match d {
        0 => 1,
        1 => m + 1,
        2 => (m + 1) * (m + 2) / 2,
        3 => (m + 1) * (m + 2) * (m + 3) / 6,
        _ => binomial(m + d, d) as usize,
    }
}

/// `|g|! / g!` for the first `d` entries.
pub fn multinomial(e: &Exponent, d: usize) -> f64 {
    let mut acc = 1.0;
    let mut partial = 0usize;
    for &x in e.iter().take(d) {
        partial += x as usize;
        acc *= binomial(partial, x as usize);
    }
    acc
}

/// Position of `e` inside the graded-lex layout for `d` variables.
pub fn rank(e: &Exponent, d: usize) -> usize {
    let m = total_degree(e);
    match d {
        1 => return m,
        2 => return m * (m + 1) / 2 + m - e[0] as usize,
        3 => {
            let k = m - e[0] as usize;
            return m * (m + 1) * (m + 2) / 6 + k * (k + 1) / 2 + k - e[1] as usize;
        }
        _ => {}
    }
    let base = if m == 0 { 0 } else { count_le(d, m - 1) };
    base + rank_within(&e[..d], m)
}

fn rank_within(e: &[u32], m: usize) -> usize {
    if e.len() <= 1 {
        return 0;
    }
    let first = e[0] as usize;
    let rest_dim = e.len() - 1;
    let mut pos = 0;
    for a in (first + 1)..=m {
        pos += count_eq(rest_dim, m - a);
    }
    pos + rank_within(&e[1..], m - first)
}

/// The full exponent list for `(d, N)`, in layout order.
#[derive(Debug)]
pub struct Monomials {
    pub dim: usize,
    pub order: usize,
    pub exps: Vec<Exponent>,
}

impl Monomials {
    fn build(dim: usize, order: usize) -> Self {
        let mut exps = Vec::with_capacity(count_le(dim, order));
        for m in 0..=order {
            let mut cur = [0u32; MAX_DIM];
            push_degree(dim, 0, m, &mut cur, &mut exps);
        }
        Monomials { dim, order, exps }
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }
}

fn push_degree(dim: usize, slot: usize, remaining: usize, cur: &mut Exponent, out: &mut Vec<Exponent>) {
    if slot + 1 == dim {
        cur[slot] = remaining as u32;
        out.push(*cur);
        cur[slot] = 0;
        return;
    }
    for a in (0..=remaining).rev() {
        cur[slot] = a as u32;
        push_degree(dim, slot + 1, remaining - a, cur, out);
    }
    cur[slot] = 0;
}

type Cache = Mutex<HashMap<(usize, usize), Arc<Monomials>>>;

/// Shared, lazily built layout for `(d, N)`.
pub fn layout(dim: usize, order: usize) -> Arc<Monomials> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("monomial cache poisoned");
    guard
        .entry((dim, order))
        .or_insert_with(|| Arc::new(Monomials::build(dim, order)))
        .clone()
}

pub fn add(a: &Exponent, b: &Exponent) -> Exponent {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// `a - b` when `b <= a` componentwise.
pub fn checked_sub(a: &Exponent, b: &Exponent) -> Option<Exponent> {
    Some([
        a[0].checked_sub(b[0])?,
        a[1].checked_sub(b[1])?,
        a[2].checked_sub(b[2])?,
    ])
}
