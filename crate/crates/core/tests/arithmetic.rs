//! Modular arithmetic, primality and factoring against independent oracles.

use artin_core::factor::{factorize, pollard_brent};
use artin_core::modmath::{gcd, isqrt, jacobi, mulmod, powmod, sqrt_mod_prime};
use artin_core::primality::{is_prime, primes_below};
use num_bigint::BigUint;
use num_integer::Integer;
use proptest::prelude::*;

fn big(x: u128) -> BigUint {
    BigUint::from(x)
}

fn trial_division_is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 2000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn mulmod_matches_bigint(a: u128, b: u128, m in 2u128..(1u128 << 127)) {
        let want = (big(a) * big(b)) % big(m);
        prop_assert_eq!(big(mulmod(a, b, m).unwrap()), want);
    }

    #[test]
    fn mulmod_contract_width(a in 0u128..(1 << 72), b in 0u128..(1 << 72), m in 2u128..(1 << 72)) {
        let want = (big(a) * big(b)) % big(m);
        prop_assert_eq!(big(mulmod(a, b, m).unwrap()), want);
    }

    #[test]
    fn powmod_matches_bigint(b: u128, e: u128, m in 2u128..(1u128 << 127)) {
        let want = big(b).modpow(&big(e), &big(m));
        prop_assert_eq!(big(powmod(b, e, m).unwrap()), want);
    }

    #[test]
    fn gcd_matches_num_integer(a: u128, b: u128) {
        prop_assert_eq!(gcd(a, b), a.gcd(&b));
    }

    #[test]
    fn isqrt_brackets(n: u128) {
        let r = isqrt(n);
        prop_assert!(big(r) * big(r) <= big(n));
        prop_assert!(big(r + 1) * big(r + 1) > big(n));
    }

    #[test]
    fn jacobi_is_multiplicative(a in -(1i128 << 70)..(1i128 << 70), b in -(1i128 << 70)..(1i128 << 70), n in 0u128..(1 << 71)) {
        let n = 2 * n + 1;
        let ab = (big(a.unsigned_abs()) * big(b.unsigned_abs())) % big(n);
        let ab: u128 = ab.try_into().unwrap();
        let sign = if (a < 0) != (b < 0) { -1 } else { 1 };
        let lhs = jacobi(sign * ab as i128, n).unwrap();
        prop_assert_eq!(lhs, jacobi(a, n).unwrap() * jacobi(b, n).unwrap());
    }

    #[test]
    fn factorization_round_trips(n in 1u128..(1 << 72)) {
        let fac = factorize(n).unwrap();
        prop_assert_eq!(fac.product(), Some(n));
        for (p, e) in &fac.factors {
            prop_assert!(*e >= 1);
            prop_assert!(is_prime(*p).is_prime(), "{} is not prime", p);
        }
        prop_assert!(fac.factors.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn small_verdicts_match_trial_division(n in 0u128..(1 << 36)) {
        prop_assert_eq!(is_prime(n).is_prime(), trial_division_is_prime(n));
    }
}

#[test]
fn jacobi_matches_euler_criterion() {
    let primes = primes_below(2000);
    for &p in primes.iter().skip(1) {
        let p = p as u128;
        for a in -300i128..300 {
            let r = a.rem_euclid(p as i128) as u128;
            let euler = powmod(r, (p - 1) / 2, p).unwrap();
            let want = match euler {
                0 => 0,
                1 => 1,
                _ => -1,
            };
            assert_eq!(jacobi(a, p).unwrap(), want, "({a} | {p})");
        }
    }
    for p in [
        18446744073709551557u128,
        182215466740465011809,
        618970019642690137449562111,
    ] {
        for a in [2i128, 3, -1, -5, 593856338459898, -593856338459898] {
            let r = a.rem_euclid(p as i128) as u128;
            let euler = powmod(r, (p - 1) / 2, p).unwrap();
            let want = if euler == 1 { 1 } else { -1 };
            assert_eq!(jacobi(a, p).unwrap(), want, "({a} | {p})");
        }
    }
}

#[test]
fn modular_square_roots() {
    for &q in primes_below(3000).iter().skip(1) {
        for a in 0..q.min(200) {
            match sqrt_mod_prime(a, q) {
                Some(r) => assert_eq!((r * r) % q, a % q),
                None => assert_eq!(jacobi(a as i128, q as u128).unwrap(), -1),
            }
        }
    }
}

#[test]
fn rho_splits_balanced_semiprimes() {
    // primes just below 2^36 and 2^35
    let cases = [
        (68719476731u128, 34359738337u128),
        (4294967291, 4294967279),
        (1000000007, 998244353),
    ];
    for (p, q) in cases {
        assert!(is_prime(p).is_prime() && is_prime(q).is_prime());
        let d = pollard_brent(p * q, 0).unwrap();
        assert!(d == p || d == q, "{d}");
        let fac = factorize(p * q).unwrap();
        assert_eq!(fac.factors, vec![(q.min(p), 1), (q.max(p), 1)]);
    }
}

#[test]
fn prime_squares_and_cubes() {
    let p = 4294967291u128;
    assert_eq!(factorize(p * p).unwrap().factors, vec![(p, 2)]);
    let q = 1048573u128;
    assert_eq!(factorize(q * q * q).unwrap().factors, vec![(q, 3)]);
}
