//! Fixed-width modular arithmetic on `u128` residues.
//!
//! Every public operation is exact for moduli below `2^127`; the toolkit's
//! contracts only promise moduli below `2^72`, which leaves the hot loops
//! free of any arbitrary-precision cost.
//!
//! Two Montgomery contexts back the exponentiation-heavy callers
//! (primality, factoring): [`Mont64`] for odd moduli that fit a machine
//! word and [`Mont128`] for odd moduli up to `2^127`. Both implement
//! [`MontArith`], so algorithms are written once over the trait.

use thiserror::Error;

/// Residue carrier. Public contracts guarantee exactness for moduli `< 2^72`.
pub type WideUint = u128;

/// Largest modulus bit length covered by the public contracts.
pub const CONTRACT_BITS: u32 = 72;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ModMathError {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u128),
    #[error("jacobi symbol needs an odd positive modulus, got {0}")]
    EvenJacobiModulus(u128),
}

/// Full 256-bit product of two `u128`s as `(hi, lo)`.
#[inline]
pub fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    const MASK: u128 = u64::MAX as u128;
    let (a0, a1) = (a & MASK, a >> 64);
    let (b0, b1) = (b & MASK, b >> 64);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & MASK) + (p10 & MASK);
    let lo = (p00 & MASK) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

#[inline]
pub(crate) fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u128, b: u128, m: u128) -> u128 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

/// `(hi * 2^128 + lo) mod m` for any `m >= 1`.
pub(crate) fn reduce_wide(hi: u128, lo: u128, m: u128) -> u128 {
    if hi == 0 {
        return lo % m;
    }
    let mut r = hi % m;
    let mut remaining = 128u32;
    while remaining > 0 {
        let shift = m.leading_zeros().min(remaining);
        if shift == 0 {
            let top = r >> 127;
            r <<= 1;
            if top == 1 || r >= m {
                r = r.wrapping_sub(m);
            }
            remaining -= 1;
        } else {
            r = (r << shift) % m;
            remaining -= shift;
        }
    }
    add_mod(r, lo % m, m)
}

#[inline]
pub(crate) fn mul_mod_unchecked(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        (a * b) % m
    } else {
        let (hi, lo) = mul_wide(a, b);
        reduce_wide(hi, lo, m)
    }
}

/// `(a * b) mod m`, exact. Operands are reduced first.
pub fn mulmod(a: WideUint, b: WideUint, m: WideUint) -> Result<WideUint, ModMathError> {
    if m < 2 {
        return Err(ModMathError::ModulusTooSmall(m));
    }
    Ok(mul_mod_unchecked(a % m, b % m, m))
}

pub(crate) fn pow_mod_unchecked(base: u128, mut e: u128, m: u128) -> u128 {
    if m & 1 == 1 {
        if m <= u64::MAX as u128 {
            let ctx = Mont64::new(m as u64);
            return ctx.from_mont(ctx.pow(ctx.to_mont(base), e));
        }
        if m < (1 << 127) {
            let ctx = Mont128::new(m);
            return ctx.from_mont(ctx.pow(ctx.to_mont(base), e));
        }
    }
    let mut b = base % m;
    let mut acc = 1 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_unchecked(acc, b, m);
        }
        b = mul_mod_unchecked(b, b, m);
        e >>= 1;
    }
    acc
}

/// `b^e mod m` by square-and-multiply; `e = 0` yields `1 mod m`.
pub fn powmod(b: WideUint, e: WideUint, m: WideUint) -> Result<WideUint, ModMathError> {
    if m < 2 {
        return Err(ModMathError::ModulusTooSmall(m));
    }
    Ok(pow_mod_unchecked(b % m, e, m))
}

/// Binary GCD. `gcd(0, 0) = 0`.
pub fn gcd(mut a: WideUint, mut b: WideUint) -> WideUint {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

/// Jacobi symbol `(a | n)` for odd `n >= 1`; negative `a` goes through `(-1 | n)`.
pub fn jacobi(a: i128, n: WideUint) -> Result<i8, ModMathError> {
    if n & 1 == 0 {
        return Err(ModMathError::EvenJacobiModulus(n));
    }
    let mut sign = 1i8;
    if a < 0 && n % 4 == 3 {
        sign = -1;
    }
    Ok(sign * jacobi_unsigned(a.unsigned_abs() % n, n))
}

/// Jacobi symbol for `a >= 0` and odd `n`, without argument checks.
pub(crate) fn jacobi_unsigned(mut a: u128, mut n: u128) -> i8 {
    let mut t = 1i8;
    a %= n;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz & 1 == 1 && matches!(n % 8, 3 | 5) {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Floor of the square root.
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    // f64 seed is within a few ulps; fix up exactly below.
    let mut x = (n as f64).sqrt() as u128;
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

pub fn is_perfect_square(n: u128) -> bool {
    let r = isqrt(n);
    r * r == n
}

/// Square root of `a` modulo an odd prime `q < 2^32` by Tonelli–Shanks.
/// `None` when `a` is a non-residue.
pub fn sqrt_mod_prime(a: u64, q: u64) -> Option<u64> {
    let a = a % q;
    if a == 0 {
        return Some(0);
    }
    if q == 2 {
        return Some(a);
    }
    let pow = |b: u64, e: u64| pow_mod_unchecked(b as u128, e as u128, q as u128) as u64;
    let mul = |x: u64, y: u64| ((x as u128 * y as u128) % q as u128) as u64;
    if pow(a, (q - 1) / 2) != 1 {
        return None;
    }
    if q % 4 == 3 {
        return Some(pow(a, (q + 1) / 4));
    }
    let s = (q - 1).trailing_zeros();
    let odd = (q - 1) >> s;
    let mut z = 2;
    while pow(z, (q - 1) / 2) != q - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow(z, odd);
    let mut t = pow(a, odd);
    let mut r = pow(a, odd.div_ceil(2));
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul(t2, t2);
            i += 1;
        }
        let mut b = c;
        for _ in 0..m - i - 1 {
            b = mul(b, b);
        }
        m = i;
        c = mul(b, b);
        t = mul(t, c);
        r = mul(r, b);
    }
    Some(r)
}

/// Montgomery-form arithmetic modulo a fixed odd modulus.
pub trait MontArith {
    type Elem: Copy + Eq + std::fmt::Debug + Into<u128>;

    fn modulus(&self) -> u128;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn to_mont(&self, x: u128) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_mont(&self, x: Self::Elem) -> u128;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    /// Multiply by the inverse of 2.
    fn half(&self, a: Self::Elem) -> Self::Elem;

    fn square(&self, a: Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn pow(&self, base: Self::Elem, mut e: u128) -> Self::Elem {
        let mut acc = self.one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            e >>= 1;
            if e > 0 {
                b = self.square(b);
            }
        }
        acc
    }
}

/// Montgomery context for an odd modulus below `2^64`, `R = 2^64`.
#[derive(Debug, Clone, Copy)]
pub struct Mont64 {
    m: u64,
    neg_inv: u64,
    r1: u64,
    r2: u64,
}

impl Mont64 {
    pub fn new(m: u64) -> Self {
        assert!(
            m & 1 == 1 && m > 1,
            "Montgomery modulus must be odd and > 1"
        );
        let mut inv = m;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(m.wrapping_mul(inv)));
        }
        let r1 = ((1u128 << 64) % m as u128) as u64;
        let r2 = ((r1 as u128 * r1 as u128) % m as u128) as u64;
        Mont64 {
            m,
            neg_inv: inv.wrapping_neg(),
            r1,
            r2,
        }
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let q = (t as u64).wrapping_mul(self.neg_inv);
        let qm = q as u128 * self.m as u128;
        let carry = (t as u64 != 0) as u128;
        let r = (t >> 64) + (qm >> 64) + carry;
        if r >= self.m as u128 {
            (r - self.m as u128) as u64
        } else {
            r as u64
        }
    }
}

impl MontArith for Mont64 {
    type Elem = u64;

    fn modulus(&self) -> u128 {
        self.m as u128
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        self.r1
    }
    #[inline]
    fn to_mont(&self, x: u128) -> u64 {
        let x = (x % self.m as u128) as u64;
        self.redc(x as u128 * self.r2 as u128)
    }
    #[inline]
    fn from_mont(&self, x: u64) -> u128 {
        self.redc(x as u128) as u128
    }
    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }
    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        add_mod(a as u128, b as u128, self.m as u128) as u64
    }
    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.m - (b - a)
        }
    }
    #[inline]
    fn half(&self, a: u64) -> u64 {
        if a & 1 == 0 {
            a >> 1
        } else {
            ((a as u128 + self.m as u128) >> 1) as u64
        }
    }
}

/// Montgomery context for an odd modulus below `2^127`, `R = 2^128`.
#[derive(Debug, Clone, Copy)]
pub struct Mont128 {
    m: u128,
    neg_inv: u128,
    r1: u128,
    r2: u128,
}

impl Mont128 {
    pub fn new(m: u128) -> Self {
        assert!(
            m & 1 == 1 && m > 1 && m < (1 << 127),
            "Montgomery modulus must be odd, > 1 and < 2^127"
        );
        let mut inv = m;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(m.wrapping_mul(inv)));
        }
        let r1 = (u128::MAX % m + 1) % m;
        let (hi, lo) = mul_wide(r1, r1);
        let r2 = reduce_wide(hi, lo, m);
        Mont128 {
            m,
            neg_inv: inv.wrapping_neg(),
            r1,
            r2,
        }
    }

    #[inline]
    fn redc(&self, hi: u128, lo: u128) -> u128 {
        let q = lo.wrapping_mul(self.neg_inv);
        let (qh, _) = mul_wide(q, self.m);
        let carry = (lo != 0) as u128;
        let r = hi + qh + carry;
        if r >= self.m {
            r - self.m
        } else {
            r
        }
    }
}

impl MontArith for Mont128 {
    type Elem = u128;

    fn modulus(&self) -> u128 {
        self.m
    }
    fn zero(&self) -> u128 {
        0
    }
    fn one(&self) -> u128 {
        self.r1
    }
    #[inline]
    fn to_mont(&self, x: u128) -> u128 {
        let (hi, lo) = mul_wide(x % self.m, self.r2);
        self.redc(hi, lo)
    }
    #[inline]
    fn from_mont(&self, x: u128) -> u128 {
        self.redc(0, x)
    }
    #[inline]
    fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = mul_wide(a, b);
        self.redc(hi, lo)
    }
    #[inline]
    fn add(&self, a: u128, b: u128) -> u128 {
        add_mod(a, b, self.m)
    }
    #[inline]
    fn sub(&self, a: u128, b: u128) -> u128 {
        sub_mod(a, b, self.m)
    }
    #[inline]
    fn half(&self, a: u128) -> u128 {
        if a & 1 == 0 {
            a >> 1
        } else {
            (a + self.m) >> 1
        }
    }
}
