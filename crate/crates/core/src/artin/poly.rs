//! Integer polynomials of degree 1 to 3 and the integers they take.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ArtinError;

/// Coefficient magnitudes must stay below `2^70`.
pub const COEFF_BITS: u32 = 70;

/// Values `|f(n)|` must stay below `2^72`.
pub const VALUE_BITS: u32 = 72;

/// Integer polynomial stored constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i128>", into = "Vec<i128>")]
pub struct Polynomial {
    coeffs: Vec<i128>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<i128>) -> Result<Self, ArtinError> {
        if !(2..=4).contains(&coeffs.len()) {
            return Err(ArtinError::InvalidPolynomial(format!(
                "expected 2 to 4 coefficients, got {}",
                coeffs.len()
            )));
        }
        if *coeffs.last().unwrap() == 0 {
            return Err(ArtinError::InvalidPolynomial(
                "leading coefficient is zero".into(),
            ));
        }
        if let Some(c) = coeffs.iter().find(|c| c.unsigned_abs() >> COEFF_BITS != 0) {
            return Err(ArtinError::InvalidPolynomial(format!(
                "coefficient {c} exceeds 2^{COEFF_BITS} in magnitude"
            )));
        }
        Ok(Polynomial { coeffs })
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> i128 {
        *self.coeffs.last().unwrap()
    }

    /// Exact `f(n)` by Horner's rule; fails once `|f(n)|` reaches `2^72`.
    pub fn eval(&self, n: u64) -> Result<i128, ArtinError> {
        self.eval_signed(n as i128)
            .filter(|v| v.unsigned_abs() >> VALUE_BITS == 0)
            .ok_or(ArtinError::Overflow { n })
    }

    /// Horner evaluation at any integer, `None` on `i128` overflow.
    pub fn eval_signed(&self, x: i128) -> Option<i128> {
        self.coeffs
            .iter()
            .rev()
            .try_fold(0i128, |acc, &c| acc.checked_mul(x)?.checked_add(c))
    }

    /// The polynomial `x -> f(x + t)`, by repeated synthetic division.
    pub fn translate(&self, t: i128) -> Result<Polynomial, ArtinError> {
        let overflow = || ArtinError::InvalidPolynomial("translated coefficients overflow".into());
        let mut c = self.coeffs.clone();
        let d = c.len();
        for i in 0..d {
            for j in (i..d - 1).rev() {
                let term = c[j + 1].checked_mul(t).ok_or_else(overflow)?;
                c[j] = c[j].checked_add(term).ok_or_else(overflow)?;
            }
        }
        Polynomial::new(c)
    }

    /// Depressed form `h(n) = f(n - s)` with the degree-minus-one term removed,
    /// together with the shift `s`, when `s` is an integer.
    ///
    /// A linear polynomial is its own depressed form (`s = 0`).
    pub fn depressed(&self) -> Option<(Polynomial, i128)> {
        let d = self.degree() as i128;
        if d == 1 {
            return Some((self.clone(), 0));
        }
        let lead = self.leading();
        let next = self.coeffs[self.degree() - 1];
        let denom = d * lead;
        if next % denom != 0 {
            return None;
        }
        let shift = next / denom;
        let h = self.translate(-shift).ok()?;
        Some((h, shift))
    }

    /// Bounds `[lo, hi]` enclosing `f(x)` for every real `x` in `[start, end]`,
    /// `0 <= start <= end`. `None` when the bound itself overflows.
    pub fn enclosure(&self, start: u64, end: u64) -> Option<(i128, i128)> {
        let (s, e) = (start as i128, end as i128);
        let mut lo = 0i128;
        let mut hi = 0i128;
        let (mut ps, mut pe) = (1i128, 1i128);
        for (i, &a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                ps = ps.checked_mul(s)?;
                pe = pe.checked_mul(e)?;
            }
            let at_s = a.checked_mul(ps)?;
            let at_e = a.checked_mul(pe)?;
            lo = lo.checked_add(at_s.min(at_e))?;
            hi = hi.checked_add(at_s.max(at_e))?;
        }
        Some((lo, hi))
    }

    /// Whether `n -> |f(n)|` is injective on the integers of `[start, end)`.
    ///
    /// Conservative: `false` whenever a critical point of `f` or (with
    /// `allow_negative`) a sign change lies near the range.
    pub fn injective_abs_on(&self, start: u64, end: u64, allow_negative: bool) -> bool {
        if end <= start + 1 {
            return true;
        }
        let (lo, hi) = (start as f64 - 2.0, end as f64 + 1.0);
        let c = &self.coeffs;
        let critical_inside = match self.degree() {
            1 => false,
            2 => {
                let x = -(c[1] as f64) / (2.0 * c[2] as f64);
                x >= lo && x <= hi
            }
            _ => {
                // f'(x) = c1 + 2 c2 x + 3 c3 x^2
                let (a, b, k) = (3.0 * c[3] as f64, 2.0 * c[2] as f64, c[1] as f64);
                let disc = b * b - 4.0 * a * k;
                if disc < 0.0 {
                    false
                } else {
                    let sq = disc.sqrt();
                    let r1 = (-b - sq) / (2.0 * a);
                    let r2 = (-b + sq) / (2.0 * a);
                    [r1, r2].iter().any(|&x| x >= lo && x <= hi)
                }
            }
        };
        if critical_inside {
            return false;
        }
        if allow_negative {
            let first = self.eval_signed(start as i128);
            let last = self.eval_signed(end as i128 - 1);
            match (first, last) {
                (Some(a), Some(b)) => a.signum() * b.signum() > 0,
                _ => false,
            }
        } else {
            true
        }
    }
}

impl TryFrom<Vec<i128>> for Polynomial {
    type Error = ArtinError;
    fn try_from(v: Vec<i128>) -> Result<Self, Self::Error> {
        Polynomial::new(v)
    }
}

impl From<Polynomial> for Vec<i128> {
    fn from(p: Polynomial) -> Self {
        p.coeffs
    }
}

/// Comma-separated coefficients, constant term first: `"3,2"` is `2n + 3`.
impl FromStr for Polynomial {
    type Err = ArtinError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let coeffs = s
            .split(',')
            .map(|part| {
                part.trim().parse::<i128>().map_err(|e| {
                    ArtinError::InvalidPolynomial(format!("bad coefficient {part:?}: {e}"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Polynomial::new(coeffs)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record() -> Polynomial {
        "182215381147285848449,39721664,32".parse().unwrap()
    }

    #[test]
    fn construction_rules() {
        assert!(Polynomial::new(vec![1]).is_err());
        assert!(Polynomial::new(vec![1, 0]).is_err());
        assert!(Polynomial::new(vec![1, 2, 3, 4, 5]).is_err());
        assert!(Polynomial::new(vec![1 << 70, 1]).is_err());
        assert!(Polynomial::new(vec![-(1 << 70) + 1, 1]).is_ok());
        assert!("1,x".parse::<Polynomial>().is_err());
    }

    #[test]
    fn eval_small_and_record() {
        let f: Polynomial = "3,2".parse().unwrap();
        assert_eq!(f.eval(0).unwrap(), 3);
        assert_eq!(f.eval(10).unwrap(), 23);
        assert_eq!(record().eval(0).unwrap(), 182215381147285848449);
    }

    #[test]
    fn eval_overflow_is_an_error() {
        let f = Polynomial::new(vec![0, 0, 0, 1 << 40]).unwrap();
        assert_eq!(f.eval(1 << 20), Err(ArtinError::Overflow { n: 1 << 20 }));
    }

    #[test]
    fn record_depresses_to_h() {
        let (h, shift) = record().depressed().unwrap();
        assert_eq!(shift, 620651);
        assert_eq!(h.coeffs(), &[182215368820640606817, 0, 32]);
        for x in [0u64, 1, 1_000_000] {
            assert_eq!(record().eval(x).unwrap(), h.eval(x + 620651).unwrap());
        }
    }

    #[test]
    fn cubic_depression_and_translation() {
        // (x + 2)^3 = x^3 + 6x^2 + 12x + 8
        let f = Polynomial::new(vec![8, 12, 6, 1]).unwrap();
        let (h, s) = f.depressed().unwrap();
        assert_eq!(s, 2);
        assert_eq!(h.coeffs(), &[0, 0, 0, 1]);
        assert_eq!(h.translate(s).unwrap(), f);
        assert!(Polynomial::new(vec![1, 1, 1])
            .unwrap()
            .depressed()
            .is_none());
    }

    #[test]
    fn injectivity_detection() {
        assert!(record().injective_abs_on(0, 2_000_000, false));
        let sym = Polynomial::new(vec![1, 0, 1]).unwrap();
        assert!(!sym.injective_abs_on(0, 10, false));
        assert!(sym.injective_abs_on(5, 100, false));
        let lin = Polynomial::new(vec![-10, 1]).unwrap();
        assert!(!lin.injective_abs_on(0, 20, true));
        assert!(lin.injective_abs_on(0, 20, false));
    }

    #[test]
    fn display_roundtrip() {
        let f = record();
        assert_eq!(f.to_string().parse::<Polynomial>().unwrap(), f);
    }
}
