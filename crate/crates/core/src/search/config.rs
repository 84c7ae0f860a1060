//! Search configuration and its fingerprint.

use std::fmt;
use std::path::Path;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use super::SearchError;
use crate::sieve::DEFAULT_SIEVE_BOUND;

/// Best published `c` at the time of writing.
pub const DEFAULT_RECORD_FLOOR: u64 = 38639;

/// Integer accepted as a native number or a decimal string, written back
/// as a string. TOML integers stop at 64 bits; record coefficients do not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WideInt(pub i128);

impl Serialize for WideInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for WideInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct WideVisitor;
        impl Visitor<'_> for WideVisitor {
            type Value = WideInt;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<WideInt, E> {
                Ok(WideInt(v as i128))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<WideInt, E> {
                Ok(WideInt(v as i128))
            }
            fn visit_i128<E: de::Error>(self, v: i128) -> Result<WideInt, E> {
                Ok(WideInt(v))
            }
            fn visit_u128<E: de::Error>(self, v: u128) -> Result<WideInt, E> {
                i128::try_from(v).map(WideInt).map_err(E::custom)
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<WideInt, E> {
                v.trim().parse().map(WideInt).map_err(E::custom)
            }
        }
        d.deserialize_any(WideVisitor)
    }
}

/// Where candidate bases come from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GSource {
    List {
        values: Vec<WideInt>,
    },
    /// Inclusive range.
    Range {
        start: WideInt,
        end: WideInt,
    },
    /// `g = f(at)` for each candidate polynomial.
    FromPolynomial {
        at: u64,
    },
}

/// Restricts one coefficient to the given residues modulo `modulus`.
///
/// This is an optional hypothesis for steering `(g | p) = -1`; nothing
/// says the published records were found this way.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceMask {
    /// Coefficient index, constant term first.
    pub position: usize,
    pub modulus: u64,
    pub residues: Vec<u64>,
}

impl CongruenceMask {
    pub fn admits(&self, coeffs: &[i128]) -> bool {
        let v = coeffs[self.position].rem_euclid(self.modulus as i128) as u64;
        self.residues.contains(&v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub degree: usize,
    /// Inclusive `[low, high]` per coefficient, constant term first.
    pub coeff_ranges: Vec<[WideInt; 2]>,
    pub g_source: GSource,
    /// Phase-one run length a candidate must reach to be scanned further.
    pub quick_reject_threshold: u64,
    /// Arguments `n` scanned per candidate in phase two.
    pub n_budget: u64,
    #[serde(default = "default_sieve_bound")]
    pub sieve_bound: u64,
    #[serde(default = "default_record_floor")]
    pub record_floor: u64,
    #[serde(default)]
    pub congruences: Vec<CongruenceMask>,
}

fn default_sieve_bound() -> u64 {
    DEFAULT_SIEVE_BOUND
}

fn default_record_floor() -> u64 {
    DEFAULT_RECORD_FLOOR
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = |msg: String| Err(SearchError::InvalidConfig(msg));
        if !(1..=3).contains(&self.degree) {
            return bad(format!("degree must be 1, 2 or 3, got {}", self.degree));
        }
        if self.coeff_ranges.len() != self.degree + 1 {
            return bad(format!(
                "degree {} needs {} coefficient ranges, got {}",
                self.degree,
                self.degree + 1,
                self.coeff_ranges.len()
            ));
        }
        if self.coeff_ranges.iter().any(|[lo, hi]| lo > hi) {
            return bad("coefficient ranges must be nonempty".into());
        }
        if self.quick_reject_threshold < 1 || self.n_budget < 1 {
            return bad("quick_reject_threshold and n_budget must be at least 1".into());
        }
        match &self.g_source {
            GSource::List { values } if values.is_empty() => return bad("g list is empty".into()),
            GSource::Range { start, end } if start > end => return bad("g range is empty".into()),
            _ => {}
        }
        for m in &self.congruences {
            if m.position > self.degree || m.modulus == 0 {
                return bad(format!(
                    "congruence mask on position {} mod {} is invalid",
                    m.position, m.modulus
                ));
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON encoding, hex.
    pub fn fingerprint(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    /// Parse a TOML file, or JSON when the extension is `.json`.
    pub fn load(path: &Path) -> Result<Self, SearchError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SearchError::InvalidConfig(format!("{}: {e}", path.display())))?;
        let cfg: SearchConfig = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| SearchError::InvalidConfig(e.to_string()))?
        } else {
            toml::from_str(&text).map_err(|e| SearchError::InvalidConfig(e.to_string()))?
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
