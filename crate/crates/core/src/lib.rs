//! Consecutive Artin primes in polynomial sequences.
//!
//! Given an integer `g` and a polynomial `f`, the primes met along
//! `f(0), f(1), ...` that do not divide `g` form the sequence of Artin
//! primes. This crate measures how long the sequence keeps `g` as a
//! primitive root, re-verifies Gallot's 2004 record (`c = 38639`) and
//! searches for new long runs.
//!
//! Modules, bottom-up:
//! - [`modmath`]: fixed-width modular arithmetic and Montgomery kernels
//! - [`primality`]: deterministic Miller–Rabin below `2^64`, BPSW above
//! - [`factor`]: trial division plus Pollard–Brent rho
//! - [`sieve`]: roots of `f` modulo small primes and segmented sieving
//! - [`artin`]: polynomials, the primitive-root test, run scans, verification
//! - [`search`]: candidate enumeration, leaderboard, checkpoint/resume
//! - [`report`]: line-delimited report records
//! - [`cli`]: the `artin` command-line front end

pub mod artin;
pub mod cli;
pub mod factor;
pub mod modmath;
pub mod primality;
pub mod report;
pub mod search;
pub mod sieve;

pub use artin::{
    artin_run, is_primitive_root, multiplicative_order, verify_record, ArtinError, ArtinEvent,
    Base, Polynomial, RecordInstance, RunReport, ScanOptions, Verdict,
};
pub use factor::{factorize, pollard_brent, Factorization};
pub use modmath::{gcd, jacobi, mulmod, powmod, WideUint};
pub use primality::{is_prime, PrimalityVerdict};
