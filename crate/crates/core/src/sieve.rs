//! Segmented sieving of polynomial values by small primes.
//!
//! For every prime `q <= B` the roots of `f` modulo `q` are found once and
//! kept in a [`RootTable`]; a segment of arguments is then struck along the
//! progressions `n ≡ r (mod q)`. A position whose value *is* the sieving
//! prime (`|f(n)| = q`) always survives, so small primes in the sequence
//! are never lost.

use bitvec::prelude::*;

use crate::artin::Polynomial;
use crate::modmath::{pow_mod_unchecked, sqrt_mod_prime};
use crate::primality::primes_below;

pub const DEFAULT_SIEVE_BOUND: u64 = 100_000;
pub const DEFAULT_SEGMENT_LEN: u64 = 1 << 20;
pub const MAX_SEGMENT_LEN: u64 = 1 << 26;

/// Cubics switch from exhaustive root search to the Frobenius gcd here.
const EXHAUSTIVE_LIMIT: u64 = 1 << 16;

/// Survivor mask for the arguments `n_start .. n_start + length`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveSegment {
    pub n_start: u64,
    pub length: u64,
    pub survivor_mask: BitVec<u64, Lsb0>,
    pub bound: u64,
}

impl SieveSegment {
    pub fn survivors(&self) -> impl Iterator<Item = u64> + '_ {
        self.survivor_mask
            .iter_ones()
            .map(move |i| self.n_start + i as u64)
    }

    pub fn survivor_count(&self) -> usize {
        self.survivor_mask.count_ones()
    }
}

/// Roots of one polynomial modulo every prime up to a bound.
#[derive(Debug, Clone)]
pub struct RootTable {
    bound: u64,
    primes: Vec<u64>,
    roots: Vec<Vec<u64>>,
}

impl RootTable {
    pub fn new(f: &Polynomial, bound: u64) -> Self {
        let primes = primes_below(bound.saturating_add(1));
        let roots = primes.iter().map(|&q| poly_roots_mod_q(f, q)).collect();
        RootTable {
            bound,
            primes,
            roots,
        }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &[u64])> {
        self.primes
            .iter()
            .copied()
            .zip(self.roots.iter().map(|r| r.as_slice()))
    }

    fn is_sieving_prime(&self, v: u128) -> bool {
        v <= self.bound as u128 && self.primes.binary_search(&(v as u64)).is_ok()
    }
}

fn coeffs_mod(f: &Polynomial, q: u64) -> Vec<u64> {
    let q = q as i128;
    let mut c: Vec<u64> = f.coeffs().iter().map(|a| a.rem_euclid(q) as u64).collect();
    trim(&mut c);
    c
}

/// All `r` in `[0, q)` with `f(r) ≡ 0 (mod q)`, ascending.
pub fn poly_roots_mod_q(f: &Polynomial, q: u64) -> Vec<u64> {
    assert!((2..1 << 32).contains(&q), "sieving prime out of range");
    let c = coeffs_mod(f, q);
    let mut roots = match c.len() {
        0 => return (0..q).collect(),
        1 => Vec::new(),
        2 => {
            let inv = inverse(c[1], q);
            vec![mul(q - c[0], inv, q) % q]
        }
        3 if q > 2 => quadratic_roots(c[2], c[1], c[0], q),
        _ if q < EXHAUSTIVE_LIMIT => exhaustive_roots(&c, q),
        _ => frobenius_roots(&c, q),
    };
    roots.sort_unstable();
    roots.dedup();
    roots
}

fn mul(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn inverse(a: u64, q: u64) -> u64 {
    pow_mod_unchecked(a as u128, q as u128 - 2, q as u128) as u64
}

fn exhaustive_roots(c: &[u64], q: u64) -> Vec<u64> {
    (0..q)
        .filter(|&x| c.iter().rev().fold(0, |acc, &a| (mul(acc, x, q) + a) % q) == 0)
        .collect()
}

fn quadratic_roots(a: u64, b: u64, c: u64, q: u64) -> Vec<u64> {
    let disc = (mul(b, b, q) + q - mul(4 % q, mul(a, c, q), q)) % q;
    let Some(s) = sqrt_mod_prime(disc, q) else {
        return Vec::new();
    };
    let inv2a = inverse(mul(2, a, q), q);
    let neg_b = (q - b) % q;
    vec![
        mul((neg_b + s) % q, inv2a, q),
        mul((neg_b + q - s) % q, inv2a, q),
    ]
}

// Dense polynomials over GF(q), constant term first, no trailing zeros.

fn trim(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn make_monic(p: &mut [u64], q: u64) {
    if let Some(&lead) = p.last() {
        let inv = inverse(lead, q);
        for c in p.iter_mut() {
            *c = mul(*c, inv, q);
        }
    }
}

/// Remainder of `a` by the nonzero `m`.
fn poly_rem(mut a: Vec<u64>, m: &[u64], q: u64) -> Vec<u64> {
    trim(&mut a);
    let dm = m.len() - 1;
    let inv_lead = inverse(m[dm], q);
    while a.len() > dm {
        let da = a.len() - 1;
        let factor = mul(a[da], inv_lead, q);
        for (i, &mc) in m.iter().enumerate() {
            let idx = da - dm + i;
            a[idx] = (a[idx] + q - mul(factor, mc, q)) % q;
        }
        trim(&mut a);
    }
    a
}

/// Quotient of `a` by `m`, assuming `m` divides `a`.
fn poly_div(a: &[u64], m: &[u64], q: u64) -> Vec<u64> {
    let mut rem = a.to_vec();
    let dm = m.len() - 1;
    let inv_lead = inverse(m[dm], q);
    let mut quot = vec![0u64; rem.len().saturating_sub(dm)];
    while rem.len() > dm {
        let dr = rem.len() - 1;
        let factor = mul(rem[dr], inv_lead, q);
        quot[dr - dm] = factor;
        for (i, &mc) in m.iter().enumerate() {
            let idx = dr - dm + i;
            rem[idx] = (rem[idx] + q - mul(factor, mc, q)) % q;
        }
        trim(&mut rem);
    }
    trim(&mut quot);
    quot
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], q: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul(x, y, q)) % q;
        }
    }
    poly_rem(out, m, q)
}

fn poly_powmod(base: &[u64], mut e: u64, m: &[u64], q: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base.to_vec(), m, q);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, m, q);
        }
        b = poly_mulmod(&b, &b, m, q);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(x, &y, q);
        x = y;
        y = r;
    }
    make_monic(&mut x, q);
    x
}

fn poly_sub(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + q - y) % q;
    }
    trim(&mut out);
    out
}

/// Roots of `f` over GF(q) through `gcd(x^q - x, f)`, split by
/// equal-degree factoring with the shifts `x + a`, `a = 0, 1, 2, ...`.
fn frobenius_roots(c: &[u64], q: u64) -> Vec<u64> {
    let mut f = c.to_vec();
    make_monic(&mut f, q);
    let xq = poly_powmod(&[0, 1], q, &f, q);
    let g = poly_gcd(&f, &poly_sub(&xq, &[0, 1], q), q);
    let mut roots = Vec::new();
    split_linear_factors(g, q, &mut roots);
    roots
}

/// Collect the roots of a monic product of distinct linear factors.
fn split_linear_factors(g: Vec<u64>, q: u64, roots: &mut Vec<u64>) {
    match g.len() {
        0 | 1 => {}
        2 => roots.push((q - g[0]) % q),
        3 => roots.extend(quadratic_roots(g[2], g[1], g[0], q)),
        _ => {
            for a in 0..q {
                let shifted = poly_powmod(&[a, 1], (q - 1) / 2, &g, q);
                let h = poly_gcd(&g, &poly_sub(&shifted, &[1], q), q);
                if h.len() > 1 && h.len() < g.len() {
                    let rest = poly_div(&g, &h, q);
                    split_linear_factors(h, q, roots);
                    split_linear_factors(rest, q, roots);
                    return;
                }
            }
        }
    }
}

/// Sieve one segment, building the root table on the fly.
pub fn sieve_segment(f: &Polynomial, n_start: u64, length: u64, bound: u64) -> SieveSegment {
    sieve_segment_with(&RootTable::new(f, bound), f, n_start, length)
}

/// Sieve `n_start .. n_start + length` with a prebuilt root table.
pub fn sieve_segment_with(
    table: &RootTable,
    f: &Polynomial,
    n_start: u64,
    length: u64,
) -> SieveSegment {
    assert!(
        length > 0 && length <= MAX_SEGMENT_LEN,
        "segment length out of range"
    );
    let len = length as usize;
    let mut mask = bitvec![u64, Lsb0; 1; len];
    for (q, roots) in table.iter() {
        let offset = n_start % q;
        for &r in roots {
            let mut i = ((r + q - offset) % q) as usize;
            while i < len {
                mask.set(i, false);
                i += q as usize;
            }
        }
    }
    restore_small_prime_values(table, f, n_start, length, &mut mask);
    SieveSegment {
        n_start,
        length,
        survivor_mask: mask,
        bound: table.bound(),
    }
}

/// Re-admit positions whose value is itself a sieving prime.
fn restore_small_prime_values(
    table: &RootTable,
    f: &Polynomial,
    n_start: u64,
    length: u64,
    mask: &mut BitVec<u64, Lsb0>,
) {
    let b = table.bound() as i128;
    if b < 2 {
        return;
    }
    let touches_small = match f.enclosure(n_start, n_start + length - 1) {
        Some((lo, hi)) => lo <= b && hi >= -b,
        None => true,
    };
    if !touches_small {
        return;
    }
    for i in 0..length {
        if let Some(v) = f.eval_signed((n_start + i) as i128) {
            if table.is_sieving_prime(v.unsigned_abs()) {
                mask.set(i as usize, true);
            }
        }
    }
}
