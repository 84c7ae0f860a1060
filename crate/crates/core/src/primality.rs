//! Primality testing for integers up to the toolkit's width.
//!
//! Below `2^64` the answer is unconditional: Miller–Rabin with the first
//! twelve prime bases has no strong pseudoprime in that range. Above it
//! the verdict rests on BPSW (strong base-2 plus strong Lucas with
//! Selfridge parameters) followed by eight more Miller–Rabin rounds whose
//! bases are a pure function of `n`. The [`PrimalityMethod`] carried by
//! every verdict says which regime produced it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::modmath::{is_perfect_square, jacobi, Mont128, Mont64, MontArith, WideUint};

/// Primes below 256, used for trial division ahead of any witness loop.
pub const SMALL_PRIMES: [u64; 54] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193,
    197, 199, 211, 223, 227, 229, 233, 239, 241, 251,
];

/// Bases that make Miller–Rabin deterministic for every `n < 2^64`.
const MR_BASES_64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Extra Miller–Rabin rounds run after BPSW above `2^64`.
pub const EXTRA_MR_ROUNDS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Primality {
    Prime,
    Composite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrimalityMethod {
    SmallSieve,
    DeterministicMR,
    BpswPlusMR,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimalityVerdict {
    pub value: Primality,
    pub method: PrimalityMethod,
}

impl PrimalityVerdict {
    pub fn is_prime(&self) -> bool {
        self.value == Primality::Prime
    }

    fn new(prime: bool, method: PrimalityMethod) -> Self {
        PrimalityVerdict {
            value: if prime {
                Primality::Prime
            } else {
                Primality::Composite
            },
            method,
        }
    }
}

/// Classify `n`.
pub fn is_prime(n: WideUint) -> PrimalityVerdict {
    use PrimalityMethod::*;
    if n < 2 {
        return PrimalityVerdict::new(false, SmallSieve);
    }
    if let Some(small) = trial_divide_small(n) {
        return PrimalityVerdict::new(small, SmallSieve);
    }
    if n < 256 * 256 {
        return PrimalityVerdict::new(true, SmallSieve);
    }
    if n <= u64::MAX as u128 {
        let ctx = Mont64::new(n as u64);
        let prime = MR_BASES_64
            .iter()
            .all(|&a| strong_probable_prime(&ctx, a as u128));
        return PrimalityVerdict::new(prime, DeterministicMR);
    }
    PrimalityVerdict::new(bpsw_plus_rounds(n), BpswPlusMR)
}

/// `Some(verdict)` when trial division by primes below 256 settles `n`.
fn trial_divide_small(n: u128) -> Option<bool> {
    if n <= u64::MAX as u128 {
        let n = n as u64;
        for &p in SMALL_PRIMES.iter() {
            if n == p {
                return Some(true);
            }
            if n.is_multiple_of(p) {
                return Some(false);
            }
        }
    } else {
        for &p in SMALL_PRIMES.iter() {
            if n.is_multiple_of(p as u128) {
                return Some(false);
            }
        }
    }
    None
}

fn bpsw_plus_rounds(n: u128) -> bool {
    let ctx = Mont128::new(n);
    if !strong_probable_prime(&ctx, 2) {
        return false;
    }
    if !strong_lucas_probable_prime(&ctx) {
        return false;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(round_seed(n));
    (0..EXTRA_MR_ROUNDS).all(|_| {
        let a = rng.gen_range(2..n - 1);
        strong_probable_prime(&ctx, a)
    })
}

fn round_seed(n: u128) -> u64 {
    let lo = n as u64;
    let hi = (n >> 64) as u64;
    lo.rotate_left(17) ^ hi.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ 0xA076_1D64_78BD_642F
}

/// Strong probable-prime test to base `a` for the odd modulus held by `ctx`.
pub fn strong_probable_prime<M: MontArith>(ctx: &M, a: u128) -> bool {
    let n = ctx.modulus();
    let a = a % n;
    if a == 0 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let one = ctx.one();
    let minus_one = ctx.sub(ctx.zero(), one);
    let mut x = ctx.pow(ctx.to_mont(a), d);
    if x == one || x == minus_one {
        return true;
    }
    for _ in 1..s {
        x = ctx.square(x);
        if x == minus_one {
            return true;
        }
        if x == one {
            return false;
        }
    }
    false
}

/// Strong Lucas probable-prime test with Selfridge's method A parameters
/// (`P = 1`, `Q = (1 - D) / 4`, `D` the first of 5, -7, 9, -11, ... with
/// `(D | n) = -1`).
pub fn strong_lucas_probable_prime<M: MontArith>(ctx: &M) -> bool {
    let n = ctx.modulus();
    if is_perfect_square(n) {
        return false;
    }
    let mut d_param: i128 = 5;
    loop {
        match jacobi(d_param, n).expect("odd modulus") {
            -1 => break,
            0 if d_param.unsigned_abs() != n => return false,
            _ => {}
        }
        d_param = if d_param > 0 {
            -(d_param + 2)
        } else {
            -d_param + 2
        };
    }
    let q_param = (1 - d_param) / 4;
    let to_residue = |v: i128| -> M::Elem {
        let r = if v >= 0 {
            v.unsigned_abs() % n
        } else {
            (n - v.unsigned_abs() % n) % n
        };
        ctx.to_mont(r)
    };
    let d_m = to_residue(d_param);
    let q_m = to_residue(q_param);

    let s = (n + 1).trailing_zeros();
    let k = (n + 1) >> s;

    let zero = ctx.zero();
    let mut u = ctx.one();
    let mut v = ctx.one();
    let mut qk = q_m;
    let bits = 128 - k.leading_zeros();
    for i in (0..bits - 1).rev() {
        u = ctx.mul(u, v);
        v = ctx.sub(ctx.square(v), ctx.add(qk, qk));
        qk = ctx.square(qk);
        if (k >> i) & 1 == 1 {
            let u_next = ctx.half(ctx.add(u, v));
            let v_next = ctx.half(ctx.add(ctx.mul(d_m, u), v));
            u = u_next;
            v = v_next;
            qk = ctx.mul(qk, q_m);
        }
    }
    if u == zero || v == zero {
        return true;
    }
    for _ in 1..s {
        v = ctx.sub(ctx.square(v), ctx.add(qk, qk));
        if v == zero {
            return true;
        }
        qk = ctx.square(qk);
    }
    false
}

/// Primes strictly below `limit` by the sieve of Eratosthenes.
pub fn primes_below(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit];
    let mut out = Vec::new();
    for i in 2..limit {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j < limit {
            composite[j] = true;
            j += i;
        }
    }
    out
}
