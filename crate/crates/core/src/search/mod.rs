//! Search over `(g, f)` pairs for long runs of consecutive Artin primes.
//!
//! Candidates are enumerated deterministically (row-major over the
//! coefficient ranges, then over `g`), screened by static filters, and
//! scanned in two phases: a short prefix of `n_budget / 64` arguments, and
//! the full budget only for candidates whose prefix run reaches the
//! quick-reject threshold. A pool of workers evaluates candidates while a
//! single writer folds results into the leaderboard and checkpoints.
//!
//! Static filters, each discarding candidates that can never beat a
//! record floor above 2:
//! - `g` in {-1, 0, 1} or a perfect square. A square is a quadratic
//!   residue modulo every odd prime not dividing it, so it is a primitive
//!   root of no prime above 3 (and of 3 only when `p - 1 = 2` allows it);
//!   `-1` has order 2, `0` and `1` generate nothing.
//! - The values of `f` share a fixed divisor: if `d = gcd(f(0), ..., f(deg))`
//!   exceeds 1 then `d` divides every `f(n)`, so the sequence holds at most
//!   the single prime `d`.
//! - A negative leading coefficient: `f(n)` is positive for finitely many
//!   `n` only.

mod checkpoint;
mod config;

use std::cmp::Ordering;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::artin::{artin_run, ArtinError, Base, Polynomial, ScanOptions, Termination};
use crate::modmath::gcd;
use crate::sieve::DEFAULT_SEGMENT_LEN;

pub use checkpoint::{Checkpoint, SearchStats, CHECKPOINT_FORMAT_VERSION};
pub use config::{CongruenceMask, GSource, SearchConfig, WideInt, DEFAULT_RECORD_FLOOR};

pub const LEADERBOARD_CAPACITY: usize = 100;
pub const DEFAULT_CHECKPOINT_EVERY: u128 = 1000;

/// Phase one scans `n_budget / PHASE_ONE_DIVISOR` arguments.
pub const PHASE_ONE_DIVISOR: u64 = 64;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid search config: {0}")]
    InvalidConfig(String),
    #[error("cursor {cursor} is past the end of the candidate space ({total})")]
    InvalidCursor { cursor: u128, total: u128 },
    #[error("checkpoint was written for config {found}, current config is {expected}")]
    FingerprintMismatch { expected: String, found: String },
    #[error("unsupported checkpoint format version {0}")]
    UnsupportedFormat(u32),
    #[error("checkpoint {path}: {source}")]
    Persist {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed checkpoint: {0}")]
    MalformedCheckpoint(String),
}

/// One candidate pair and its index in the enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub index: u128,
    pub f: Polynomial,
    pub g: Base,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterReason {
    TrivialBase,
    SquareBase,
    FixedDivisor,
    NegativeLeading,
    ZeroLeading,
    Congruence,
    BaseOutOfRange,
}

/// Why a candidate is vacuous, or `None` when it should be scanned.
pub fn static_filter(
    coeffs: &[i128],
    g: Option<i128>,
    masks: &[CongruenceMask],
) -> Option<FilterReason> {
    let lead = *coeffs.last()?;
    if lead == 0 {
        return Some(FilterReason::ZeroLeading);
    }
    if lead < 0 {
        return Some(FilterReason::NegativeLeading);
    }
    if masks.iter().any(|m| !m.admits(coeffs)) {
        return Some(FilterReason::Congruence);
    }
    let f = Polynomial::new(coeffs.to_vec()).ok()?;
    let content = (0..=f.degree() as i128)
        .filter_map(|x| f.eval_signed(x))
        .fold(0u128, |acc, v| gcd(acc, v.unsigned_abs()));
    if content != 1 {
        return Some(FilterReason::FixedDivisor);
    }
    if let Some(g) = g {
        let base = match Base::new(g) {
            Ok(b) => b,
            Err(_) => return Some(FilterReason::BaseOutOfRange),
        };
        if base.is_unit() {
            return Some(FilterReason::TrivialBase);
        }
        if base.is_perfect_square() {
            return Some(FilterReason::SquareBase);
        }
    }
    None
}

/// Deterministic walk over the candidate space starting at a cursor.
#[derive(Debug, Clone)]
pub struct CandidateIter {
    cfg: SearchConfig,
    radices: Vec<u128>,
    g_count: u128,
    total: u128,
    position: u128,
}

impl CandidateIter {
    /// Index of the next candidate to be examined.
    pub fn position(&self) -> u128 {
        self.position
    }

    pub fn total(&self) -> u128 {
        self.total
    }

    fn decode(&self, index: u128) -> (Vec<i128>, u128) {
        let g_index = index % self.g_count;
        let mut rest = index / self.g_count;
        let mut coeffs = vec![0i128; self.radices.len()];
        for pos in (0..self.radices.len()).rev() {
            let digit = rest % self.radices[pos];
            rest /= self.radices[pos];
            coeffs[pos] = self.cfg.coeff_ranges[pos][0].0 + digit as i128;
        }
        (coeffs, g_index)
    }

    fn g_value(&self, g_index: u128, f: &Polynomial) -> Option<i128> {
        match &self.cfg.g_source {
            GSource::List { values } => Some(values[g_index as usize].0),
            GSource::Range { start, .. } => Some(start.0 + g_index as i128),
            GSource::FromPolynomial { at } => f.eval_signed(*at as i128),
        }
    }
}

impl Iterator for CandidateIter {
    type Item = Candidate;

    fn next(&mut self) -> Option<Candidate> {
        while self.position < self.total {
            let index = self.position;
            self.position += 1;
            let (coeffs, g_index) = self.decode(index);
            if static_filter(&coeffs, None, &self.cfg.congruences).is_some() {
                continue;
            }
            let Ok(f) = Polynomial::new(coeffs.clone()) else {
                continue;
            };
            let Some(g) = self.g_value(g_index, &f) else {
                continue;
            };
            if static_filter(&coeffs, Some(g), &[]).is_some() {
                continue;
            }
            let g = Base::new(g).expect("checked by filter");
            return Some(Candidate { index, f, g });
        }
        None
    }
}

fn range_size(lo: i128, hi: i128) -> u128 {
    (hi - lo) as u128 + 1
}

/// Candidates of `cfg` from `cursor` on, statically filtered.
pub fn enumerate_candidates(
    cfg: &SearchConfig,
    cursor: u128,
) -> Result<CandidateIter, SearchError> {
    cfg.validate()?;
    let radices: Vec<u128> = cfg
        .coeff_ranges
        .iter()
        .map(|[lo, hi]| range_size(lo.0, hi.0))
        .collect();
    let g_count = match &cfg.g_source {
        GSource::List { values } => values.len() as u128,
        GSource::Range { start, end } => range_size(start.0, end.0),
        GSource::FromPolynomial { .. } => 1,
    };
    let total = radices
        .iter()
        .try_fold(g_count, |acc, &r| acc.checked_mul(r))
        .ok_or_else(|| SearchError::InvalidConfig("candidate space exceeds 2^128".into()))?;
    if cursor > total {
        return Err(SearchError::InvalidCursor { cursor, total });
    }
    Ok(CandidateIter {
        cfg: cfg.clone(),
        radices,
        g_count,
        total,
        position: cursor,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LeaderboardEntry {
    pub f: Polynomial,
    pub g: Base,
    pub c: u64,
    pub r: u64,
    pub n_range: (u64, u64),
    /// Enumeration index of the candidate; a logical timestamp that is
    /// identical across interrupted and uninterrupted runs.
    pub found_at: u128,
    pub terminated: Termination,
}

/// Total order: `c` descending, then `r` descending, then coefficients and
/// `g` ascending.
pub fn rank(a: &LeaderboardEntry, b: &LeaderboardEntry) -> Ordering {
    b.c.cmp(&a.c)
        .then(b.r.cmp(&a.r))
        .then_with(|| a.f.coeffs().cmp(b.f.coeffs()))
        .then(a.g.value().cmp(&b.g.value()))
        .then(a.found_at.cmp(&b.found_at))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leaderboard {
    entries: Vec<LeaderboardEntry>,
}

impl Leaderboard {
    pub fn from_entries(mut entries: Vec<LeaderboardEntry>) -> Self {
        entries.sort_by(rank);
        entries.truncate(LEADERBOARD_CAPACITY);
        Leaderboard { entries }
    }

    pub fn insert(&mut self, entry: LeaderboardEntry) {
        let at = self
            .entries
            .binary_search_by(|e| rank(e, &entry))
            .unwrap_or_else(|i| i);
        if at < LEADERBOARD_CAPACITY {
            self.entries.insert(at, entry);
            self.entries.truncate(LEADERBOARD_CAPACITY);
        }
    }

    pub fn entries(&self) -> &[LeaderboardEntry] {
        &self.entries
    }

    pub fn best(&self) -> Option<&LeaderboardEntry> {
        self.entries.first()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CandidateOutcome {
    Filtered(FilterReason),
    /// Phase-one run below the quick-reject threshold.
    Discarded {
        r: u64,
    },
    /// The scan left the supported value width.
    Skipped(String),
    Entry(LeaderboardEntry),
}

fn scan_options(cfg: &SearchConfig, len: u64) -> ScanOptions {
    ScanOptions {
        stop_on_failure: true,
        allow_negative: false,
        sieve_bound: cfg.sieve_bound,
        segment_len: len.clamp(1, DEFAULT_SEGMENT_LEN),
        threads: 1,
    }
}

/// Two-phase evaluation of one candidate.
pub fn evaluate_candidate(
    f: &Polynomial,
    g: &Base,
    cfg: &SearchConfig,
    index: u128,
) -> CandidateOutcome {
    if let Some(reason) = static_filter(f.coeffs(), Some(g.value()), &cfg.congruences) {
        return CandidateOutcome::Filtered(reason);
    }
    let prefix = (cfg.n_budget / PHASE_ONE_DIVISOR).max(1).min(cfg.n_budget);
    let scan = |len: u64| artin_run(g, f, 0..len, &scan_options(cfg, len), |_| {});
    let mut report = match scan(prefix) {
        Ok(r) => r,
        Err(e) => return CandidateOutcome::Skipped(e.to_string()),
    };
    if report.r < cfg.quick_reject_threshold {
        return CandidateOutcome::Discarded { r: report.r };
    }
    if report.terminated == Termination::RangeExhausted && prefix < cfg.n_budget {
        report = match scan(cfg.n_budget) {
            Ok(r) => r,
            Err(ArtinError::Overflow { n }) => {
                return CandidateOutcome::Skipped(format!("value overflow at n = {n}"))
            }
            Err(e) => return CandidateOutcome::Skipped(e.to_string()),
        };
    }
    CandidateOutcome::Entry(LeaderboardEntry {
        f: f.clone(),
        g: *g,
        c: report.c,
        r: report.r,
        n_range: report.n_scanned,
        found_at: index,
        terminated: report.terminated,
    })
}

/// Knobs of one search session that do not affect its results.
#[derive(Debug, Clone)]
pub struct SearchControl {
    pub threads: usize,
    pub checkpoint_path: Option<PathBuf>,
    pub checkpoint_every: u128,
    /// Stop (with a checkpoint) after this many enumeration positions.
    pub stop_after: Option<u128>,
    pub interrupt: Option<Arc<AtomicBool>>,
}

impl Default for SearchControl {
    fn default() -> Self {
        SearchControl {
            threads: 1,
            checkpoint_path: None,
            checkpoint_every: DEFAULT_CHECKPOINT_EVERY,
            stop_after: None,
            interrupt: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchProgress {
    pub cursor: u128,
    pub total: u128,
    pub best_c: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub checkpoint: Checkpoint,
    /// The whole candidate space has been processed.
    pub completed: bool,
}

/// Run (or resume) a search; every checkpoint boundary and the final state
/// are persisted when a checkpoint path is configured.
pub fn run_search(
    cfg: &SearchConfig,
    resume: Option<Checkpoint>,
    ctl: &SearchControl,
    mut on_progress: impl FnMut(SearchProgress),
) -> Result<SearchOutcome, SearchError> {
    cfg.validate()?;
    let fingerprint = cfg.fingerprint();
    let mut state = match resume {
        Some(cp) => {
            cp.check_compatible(&fingerprint)?;
            cp
        }
        None => Checkpoint::fresh(fingerprint),
    };
    let mut leaderboard = Leaderboard::from_entries(std::mem::take(&mut state.leaderboard));
    let iter = enumerate_candidates(cfg, state.cursor)?;
    let total = iter.total();
    let mut candidates = iter.peekable();

    let threads = ctl.threads.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("worker pool");
    let every = ctl.checkpoint_every.max(1);
    let session_start = state.cursor;
    let stop_at = ctl
        .stop_after
        .map_or(total, |k| session_start.saturating_add(k).min(total));
    let batch_len = (threads * 4) as u128;

    let persist = |state: &Checkpoint, board: &Leaderboard| -> Result<(), SearchError> {
        if let Some(path) = &ctl.checkpoint_path {
            let mut snapshot = state.clone();
            snapshot.leaderboard = board.entries().to_vec();
            snapshot.save(path)?;
        }
        Ok(())
    };

    while state.cursor < stop_at {
        if ctl
            .interrupt
            .as_ref()
            .is_some_and(|flag| flag.load(AtomicOrdering::SeqCst))
        {
            break;
        }
        // a batch never crosses a checkpoint boundary or the stop point
        let boundary = ((state.cursor / every) + 1) * every;
        let limit = boundary.min(stop_at).min(state.cursor + batch_len);
        let mut batch = Vec::new();
        while let Some(c) = candidates.next_if(|c| c.index < limit) {
            batch.push(c);
        }
        let results: Vec<CandidateOutcome> = pool.install(|| {
            batch
                .par_iter()
                .map(|c| evaluate_candidate(&c.f, &c.g, cfg, c.index))
                .collect()
        });
        for outcome in results {
            state.stats.evaluated += 1;
            match outcome {
                CandidateOutcome::Entry(entry) => {
                    state.stats.entries += 1;
                    if entry.c > cfg.record_floor {
                        state.stats.above_floor += 1;
                    }
                    leaderboard.insert(entry);
                }
                CandidateOutcome::Discarded { .. } => state.stats.discarded += 1,
                CandidateOutcome::Filtered(_) => state.stats.filtered += 1,
                CandidateOutcome::Skipped(_) => state.stats.skipped += 1,
            }
        }
        state.cursor = limit;
        if state.cursor % every == 0 {
            persist(&state, &leaderboard)?;
        }
        on_progress(SearchProgress {
            cursor: state.cursor,
            total,
            best_c: leaderboard.best().map(|e| e.c),
        });
    }
    persist(&state, &leaderboard)?;
    state.leaderboard = leaderboard.entries().to_vec();
    Ok(SearchOutcome {
        completed: state.cursor >= total,
        checkpoint: state,
    })
}
