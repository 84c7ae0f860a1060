//! Complete factorization of integers below `2^72`.
//!
//! Pipeline: strip powers of two, trial-divide by the odd primes below
//! 10^5, then split whatever cofactor remains with primality checks, a
//! perfect-square test and Pollard–Brent rho. Rho uses the deterministic
//! increment schedule `c = 1, 3, 5, ...`, so results never depend on run,
//! machine or thread count.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::modmath::{gcd, is_perfect_square, isqrt, Mont128, Mont64, MontArith, WideUint};
use crate::primality::{is_prime, primes_below};

/// Trial division covers primes strictly below this bound.
pub const TRIAL_BOUND: u64 = 100_000;

/// Number of rho increments tried before giving up.
pub const SEED_BUDGET: usize = 64;

/// Iterations between gcd evaluations in Brent's loop.
const BATCH: u64 = 128;

/// Cap on the Brent cycle length for a single increment.
const MAX_CYCLE: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("cannot factor 0")]
    Zero,
    #[error("pollard-brent requires a composite n >= 4, got {0}")]
    NotComposite(u128),
    #[error("factorization failed for {n}: {seeds} rho seeds exhausted")]
    Exhausted { n: u128, seeds: usize },
}

/// Prime factorization of `original`; primes ascend, exponents are positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factorization {
    pub factors: Vec<(WideUint, u32)>,
    pub original: WideUint,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = WideUint> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Product of `p^e`, or `None` on overflow.
    pub fn product(&self) -> Option<WideUint> {
        self.factors.iter().try_fold(1u128, |acc, &(p, e)| {
            (0..e).try_fold(acc, |a, _| a.checked_mul(p))
        })
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Odd trial prime with its inverse modulo `2^128`: `n` is divisible by
/// `p` exactly when `n * inv mod 2^128 <= u128::MAX / p`, and the product
/// is then the quotient.
struct TrialPrime {
    p: u128,
    inv: u128,
    limit: u128,
}

fn trial_table() -> &'static [TrialPrime] {
    static TABLE: OnceLock<Vec<TrialPrime>> = OnceLock::new();
    TABLE.get_or_init(|| {
        primes_below(TRIAL_BOUND)
            .into_iter()
            .skip(1)
            .map(|p| {
                let p = p as u128;
                let mut inv = p;
                for _ in 0..6 {
                    inv = inv.wrapping_mul(2u128.wrapping_sub(p.wrapping_mul(inv)));
                }
                TrialPrime {
                    p,
                    inv,
                    limit: u128::MAX / p,
                }
            })
            .collect()
    })
}

/// Complete factorization of `n >= 1`; `n = 1` gives an empty list.
pub fn factorize(n: WideUint) -> Result<Factorization, FactorError> {
    if n == 0 {
        return Err(FactorError::Zero);
    }
    let mut found: BTreeMap<u128, u32> = BTreeMap::new();
    let mut rest = n;
    let twos = rest.trailing_zeros();
    if twos > 0 {
        found.insert(2, twos);
        rest >>= twos;
    }
    let mut exhausted_table = true;
    for tp in trial_table() {
        if tp.p * tp.p > rest {
            exhausted_table = false;
            break;
        }
        let mut count = 0;
        loop {
            let q = rest.wrapping_mul(tp.inv);
            if q > tp.limit {
                break;
            }
            rest = q;
            count += 1;
        }
        if count > 0 {
            found.insert(tp.p, count);
        }
    }
    if rest > 1 {
        if !exhausted_table {
            // no factor up to sqrt(rest)
            *found.entry(rest).or_insert(0) += 1;
        } else {
            split_cofactor(rest, &mut found)?;
        }
    }
    Ok(Factorization {
        factors: found.into_iter().collect(),
        original: n,
    })
}

fn split_cofactor(n: u128, found: &mut BTreeMap<u128, u32>) -> Result<(), FactorError> {
    if n == 1 {
        return Ok(());
    }
    if is_prime(n).is_prime() {
        *found.entry(n).or_insert(0) += 1;
        return Ok(());
    }
    if is_perfect_square(n) {
        let r = isqrt(n);
        split_cofactor(r, found)?;
        return split_cofactor(r, found);
    }
    let d = pollard_brent(n, 0)?;
    split_cofactor(d, found)?;
    split_cofactor(n / d, found)
}

/// A nontrivial divisor of the composite `n` by Brent's variant of rho.
///
/// Increments `c = 2k + 1` are tried for `k = seed_index, seed_index + 1, ...`
/// until one splits `n`; after [`SEED_BUDGET`] increments the call fails.
pub fn pollard_brent(n: WideUint, seed_index: usize) -> Result<WideUint, FactorError> {
    if n < 4 {
        return Err(FactorError::NotComposite(n));
    }
    if n & 1 == 0 {
        return Ok(2);
    }
    for k in seed_index..SEED_BUDGET {
        let c = 2 * k as u128 + 1;
        let d = if n <= u64::MAX as u128 {
            brent_cycle(&Mont64::new(n as u64), c)
        } else {
            brent_cycle(&Mont128::new(n), c)
        };
        if let Some(d) = d {
            return Ok(d);
        }
    }
    Err(FactorError::Exhausted {
        n,
        seeds: SEED_BUDGET.saturating_sub(seed_index),
    })
}

fn brent_cycle<M: MontArith>(ctx: &M, c: u128) -> Option<u128> {
    let n = ctx.modulus();
    let c = ctx.to_mont(c);
    let step = |x: M::Elem| ctx.add(ctx.square(x), c);
    let abs_diff = |a: M::Elem, b: M::Elem| -> M::Elem {
        let (a_raw, b_raw): (u128, u128) = (a.into(), b.into());
        if a_raw >= b_raw {
            ctx.sub(a, b)
        } else {
            ctx.sub(b, a)
        }
    };

    let mut y = ctx.to_mont(2);
    let mut x = y;
    let mut saved = y;
    let mut acc = ctx.one();
    let mut g = 1u128;
    let mut r = 1u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            saved = y;
            for _ in 0..BATCH.min(r - k) {
                y = step(y);
                acc = ctx.mul(acc, abs_diff(x, y));
            }
            g = gcd(acc.into(), n);
            k += BATCH;
        }
        r *= 2;
        if r > MAX_CYCLE && g == 1 {
            return None;
        }
    }
    if g == n {
        // the batch overshot; replay it one step at a time
        loop {
            saved = step(saved);
            g = gcd(abs_diff(x, saved).into(), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}
