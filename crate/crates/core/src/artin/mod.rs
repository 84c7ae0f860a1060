//! Consecutive Artin primes of a polynomial sequence.
//!
//! Walking `f(0), f(1), ...` and keeping the primes that do not divide `g`
//! gives the sequence `p_1, p_2, ...`. The run length `r` is the number of
//! leading terms for which `g` is a primitive root, and `c` counts the
//! distinct primes among those `r` terms.

mod poly;
mod scan;
mod verify;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::factor::{FactorError, Factorization};
use crate::modmath::{isqrt, jacobi_unsigned, pow_mod_unchecked, WideUint};
use crate::primality::is_prime;

pub use poly::{Polynomial, COEFF_BITS, VALUE_BITS};
pub use scan::{
    artin_run, artin_run_collect, artin_run_observed, merge_runs, Counts, Failure, Progress,
    RunReport, ScanOptions, Termination,
};
pub use verify::{
    verify_record, CheckOutcome, RecordInstance, VerificationCheck, VerificationReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArtinError {
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("invalid base: {0}")]
    InvalidBase(String),
    #[error("|f({n})| does not fit below 2^72; shrink the scan range")]
    Overflow { n: u64 },
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("precondition violated: {0}")]
    Contract(String),
    #[error(transparent)]
    Factor(#[from] FactorError),
}

/// The integer whose primitive-root status is tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i128", into = "i128")]
pub struct Base {
    g: i128,
    is_unit: bool,
    is_perfect_square: bool,
}

impl Base {
    pub fn new(g: i128) -> Result<Self, ArtinError> {
        if g.unsigned_abs() >> COEFF_BITS != 0 {
            return Err(ArtinError::InvalidBase(format!(
                "|g| must be below 2^{COEFF_BITS}, got {g}"
            )));
        }
        let is_perfect_square = g >= 0 && {
            let r = isqrt(g as u128);
            r * r == g as u128
        };
        Ok(Base {
            g,
            is_unit: (-1..=1).contains(&g),
            is_perfect_square,
        })
    }

    pub fn value(&self) -> i128 {
        self.g
    }

    /// `g` is one of -1, 0, 1.
    pub fn is_unit(&self) -> bool {
        self.is_unit
    }

    pub fn is_perfect_square(&self) -> bool {
        self.is_perfect_square
    }

    /// `g mod p` in `[0, p)`.
    pub fn residue(&self, p: WideUint) -> WideUint {
        let r = self.g.unsigned_abs() % p;
        if self.g < 0 && r != 0 {
            p - r
        } else {
            r
        }
    }
}

impl TryFrom<i128> for Base {
    type Error = ArtinError;
    fn try_from(g: i128) -> Result<Self, Self::Error> {
        Base::new(g)
    }
}

impl From<Base> for i128 {
    fn from(b: Base) -> i128 {
        b.g
    }
}

impl std::fmt::Display for Base {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    PrimitiveRoot,
    NotPrimitiveRoot,
    DividesG,
}

/// One prime met while walking the sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArtinEvent {
    /// Position in the Artin sequence (1-based); `None` for primes dividing `g`.
    pub j: Option<u64>,
    pub n: u64,
    pub p: WideUint,
    pub verdict: Verdict,
    pub duplicate: bool,
}

fn check_preconditions(g: &Base, p: WideUint, fac: &Factorization) -> Result<WideUint, ArtinError> {
    if p < 2 || fac.original != p - 1 {
        return Err(ArtinError::Contract(format!(
            "factorization of {} supplied for p = {p}",
            fac.original
        )));
    }
    if !is_prime(p).is_prime() {
        return Err(ArtinError::Contract(format!("{p} is not prime")));
    }
    let residue = g.residue(p);
    if residue == 0 {
        return Err(ArtinError::Contract(format!("{p} divides g = {g}")));
    }
    Ok(residue)
}

/// Whether `g` generates the multiplicative group modulo the prime `p`,
/// given the factorization of `p - 1`.
pub fn is_primitive_root(g: &Base, p: WideUint, fac: &Factorization) -> Result<bool, ArtinError> {
    let residue = check_preconditions(g, p, fac)?;
    Ok(primitive_root_unchecked(residue, p, fac))
}

pub(crate) fn primitive_root_unchecked(
    residue: WideUint,
    p: WideUint,
    fac: &Factorization,
) -> bool {
    fac.primes()
        .all(|q| pow_mod_unchecked(residue, (p - 1) / q, p) != 1)
}

/// Exact multiplicative order of `g` modulo the prime `p`.
pub fn multiplicative_order(
    g: &Base,
    p: WideUint,
    fac: &Factorization,
) -> Result<WideUint, ArtinError> {
    let residue = check_preconditions(g, p, fac)?;
    let mut order = p - 1;
    for &(q, e) in &fac.factors {
        for _ in 0..e {
            if pow_mod_unchecked(residue, order / q, p) == 1 {
                order /= q;
            } else {
                break;
            }
        }
    }
    Ok(order)
}

/// Verdict for a prime `p` of the sequence. Quadratic residues are rejected
/// by the Jacobi symbol before `p - 1` is factored.
pub(crate) fn classify_prime(g: &Base, p: WideUint) -> Result<Verdict, ArtinError> {
    let residue = g.residue(p);
    if residue == 0 {
        return Ok(Verdict::DividesG);
    }
    if p == 2 {
        return Ok(Verdict::PrimitiveRoot);
    }
    if jacobi_unsigned(residue, p) == 1 {
        return Ok(Verdict::NotPrimitiveRoot);
    }
    let fac = crate::factor::factorize(p - 1)?;
    Ok(if primitive_root_unchecked(residue, p, &fac) {
        Verdict::PrimitiveRoot
    } else {
        Verdict::NotPrimitiveRoot
    })
}
