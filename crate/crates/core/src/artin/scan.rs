//! Streaming computation of `r` and `c` over a range of arguments.
//!
//! The range is cut into sieve segments; survivors are tested in batches
//! (in parallel when more than one thread is requested) and the results
//! are folded strictly in `n` order by a single accumulator. Batch and
//! segment boundaries are fixed by the options, never by the thread count,
//! so reports are bit-identical for any number of workers.

use std::collections::HashSet;
use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{classify_prime, ArtinError, ArtinEvent, Base, Polynomial, Verdict};
use crate::modmath::WideUint;
use crate::primality::is_prime;
use crate::sieve::{
    sieve_segment_with, RootTable, DEFAULT_SEGMENT_LEN, DEFAULT_SIEVE_BOUND, MAX_SEGMENT_LEN,
};

/// Survivors handed to each worker per batch.
const PER_THREAD_BATCH: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanOptions {
    pub stop_on_failure: bool,
    /// Count `|f(n)|` for negative values instead of skipping them.
    pub allow_negative: bool,
    pub sieve_bound: u64,
    pub segment_len: u64,
    pub threads: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            stop_on_failure: true,
            allow_negative: false,
            sieve_bound: DEFAULT_SIEVE_BOUND,
            segment_len: DEFAULT_SEGMENT_LEN,
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Termination {
    FailureFound,
    RangeExhausted,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Counts {
    /// Arguments `n` covered by the scan.
    pub evaluated: u64,
    /// Arguments that survived the small-prime sieve.
    pub sieve_survivors: u64,
    /// Prime values met, including those dividing `g`.
    pub prime: u64,
    pub skipped_divides_g: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Failure {
    pub n: u64,
    pub p: WideUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RunReport {
    /// Sequence positions in the initial primitive-root run.
    pub r: u64,
    /// Distinct primes among those positions.
    pub c: u64,
    pub first_failure: Option<Failure>,
    /// Half-open interval of arguments actually scanned.
    pub n_scanned: (u64, u64),
    pub counts: Counts,
    pub terminated: Termination,
}

enum Dedup {
    Previous(Option<WideUint>),
    Seen(HashSet<WideUint>),
}

impl Dedup {
    fn for_range(f: &Polynomial, range: &Range<u64>, allow_negative: bool) -> Self {
        if f.injective_abs_on(range.start, range.end, allow_negative) {
            Dedup::Previous(None)
        } else {
            Dedup::Seen(HashSet::new())
        }
    }

    fn is_duplicate(&mut self, p: WideUint) -> bool {
        match self {
            Dedup::Previous(prev) => prev.replace(p) == Some(p),
            Dedup::Seen(seen) => !seen.insert(p),
        }
    }
}

/// Folds classified primes, in `n` order, into the run statistics.
struct Accumulator {
    start: u64,
    r: u64,
    c: u64,
    position: u64,
    first_failure: Option<Failure>,
    counts: Counts,
    dedup: Dedup,
}

impl Accumulator {
    fn new(start: u64, dedup: Dedup) -> Self {
        Accumulator {
            start,
            r: 0,
            c: 0,
            position: 0,
            first_failure: None,
            counts: Counts::default(),
            dedup,
        }
    }

    fn push(&mut self, n: u64, p: WideUint, verdict: Verdict) -> ArtinEvent {
        self.counts.prime += 1;
        let duplicate = self.dedup.is_duplicate(p);
        let j = if verdict == Verdict::DividesG {
            self.counts.skipped_divides_g += 1;
            None
        } else {
            self.position += 1;
            Some(self.position)
        };
        if self.first_failure.is_none() {
            match verdict {
                Verdict::PrimitiveRoot => {
                    self.r += 1;
                    if !duplicate {
                        self.c += 1;
                    }
                }
                Verdict::NotPrimitiveRoot => self.first_failure = Some(Failure { n, p }),
                Verdict::DividesG => {}
            }
        }
        ArtinEvent {
            j,
            n,
            p,
            verdict,
            duplicate,
        }
    }

    fn finish(mut self, end: u64) -> RunReport {
        self.counts.evaluated = end - self.start;
        RunReport {
            r: self.r,
            c: self.c,
            terminated: if self.first_failure.is_some() {
                Termination::FailureFound
            } else {
                Termination::RangeExhausted
            },
            first_failure: self.first_failure,
            n_scanned: (self.start, end),
            counts: self.counts,
        }
    }
}

enum Hit {
    Skip,
    Prime(WideUint, Verdict),
    Error(ArtinError),
}

fn examine(g: &Base, f: &Polynomial, n: u64, allow_negative: bool) -> Hit {
    let v = match f.eval(n) {
        Ok(v) => v,
        Err(e) => return Hit::Error(e),
    };
    if v < 0 && !allow_negative {
        return Hit::Skip;
    }
    let p = v.unsigned_abs();
    if p < 2 || !is_prime(p).is_prime() {
        return Hit::Skip;
    }
    match classify_prime(g, p) {
        Ok(verdict) => Hit::Prime(p, verdict),
        Err(e) => Hit::Error(e),
    }
}

/// First argument in `seg` whose value leaves the supported width.
fn first_overflow(f: &Polynomial, seg: Range<u64>) -> Option<u64> {
    let limit = 1i128 << super::VALUE_BITS;
    if let Some((lo, hi)) = f.enclosure(seg.start, seg.end - 1) {
        if lo > -limit && hi < limit {
            return None;
        }
    }
    seg.into_iter().find(|&n| f.eval(n).is_err())
}

/// Progress notification: arguments below `n_done` have been folded in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Progress {
    pub n_done: u64,
    pub r: u64,
    pub c: u64,
}

/// Scan `f(n)` for `n` in `range`, reporting every prime to `on_event`
/// in ascending `n`.
pub fn artin_run(
    g: &Base,
    f: &Polynomial,
    range: Range<u64>,
    opts: &ScanOptions,
    on_event: impl FnMut(&ArtinEvent),
) -> Result<RunReport, ArtinError> {
    artin_run_observed(g, f, range, opts, on_event, |_| {})
}

/// [`artin_run`] returning the events alongside the report.
pub fn artin_run_collect(
    g: &Base,
    f: &Polynomial,
    range: Range<u64>,
    opts: &ScanOptions,
) -> Result<(RunReport, Vec<ArtinEvent>), ArtinError> {
    let mut events = Vec::new();
    let report = artin_run(g, f, range, opts, |e| events.push(e.clone()))?;
    Ok((report, events))
}

/// [`artin_run`] with a per-segment progress callback.
pub fn artin_run_observed(
    g: &Base,
    f: &Polynomial,
    range: Range<u64>,
    opts: &ScanOptions,
    mut on_event: impl FnMut(&ArtinEvent),
    mut on_progress: impl FnMut(Progress),
) -> Result<RunReport, ArtinError> {
    if range.start > range.end {
        return Err(ArtinError::InvalidRange(format!(
            "{}..{} is reversed",
            range.start, range.end
        )));
    }
    if opts.segment_len == 0 || opts.segment_len > MAX_SEGMENT_LEN {
        return Err(ArtinError::InvalidRange(format!(
            "segment length must be in 1..={MAX_SEGMENT_LEN}"
        )));
    }
    let threads = opts.threads.max(1);
    let table = RootTable::new(f, opts.sieve_bound);
    let mut acc = Accumulator::new(
        range.start,
        Dedup::for_range(f, &range, opts.allow_negative),
    );

    let pool = if threads > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .expect("worker pool"),
        )
    } else {
        None
    };
    let classify_batch = |batch: &[u64]| -> Vec<Hit> {
        match &pool {
            Some(pool) => pool.install(|| {
                batch
                    .par_iter()
                    .map(|&n| examine(g, f, n, opts.allow_negative))
                    .collect()
            }),
            None => batch
                .iter()
                .map(|&n| examine(g, f, n, opts.allow_negative))
                .collect(),
        }
    };

    let batch_len = PER_THREAD_BATCH * threads;
    let mut seg_start = range.start;
    while seg_start < range.end {
        let seg_end = seg_start + opts.segment_len.min(range.end - seg_start);
        let overflow_at = first_overflow(f, seg_start..seg_end);
        let segment = sieve_segment_with(&table, f, seg_start, seg_end - seg_start);
        let survivors: Vec<u64> = segment
            .survivors()
            .take_while(|&n| overflow_at.is_none_or(|o| n < o))
            .collect();
        for batch in survivors.chunks(batch_len) {
            let hits = classify_batch(batch);
            for (&n, hit) in batch.iter().zip(hits) {
                acc.counts.sieve_survivors += 1;
                match hit {
                    Hit::Skip => {}
                    Hit::Error(e) => return Err(e),
                    Hit::Prime(p, verdict) => {
                        let event = acc.push(n, p, verdict);
                        on_event(&event);
                        if opts.stop_on_failure && verdict == Verdict::NotPrimitiveRoot {
                            return Ok(acc.finish(n + 1));
                        }
                    }
                }
            }
        }
        if let Some(n) = overflow_at {
            return Err(ArtinError::Overflow { n });
        }
        on_progress(Progress {
            n_done: seg_end,
            r: acc.r,
            c: acc.c,
        });
        seg_start = seg_end;
    }
    Ok(acc.finish(range.end))
}

/// Merge reports of adjacent sub-range scans (each run to the end of its
/// range) into the report of one scan over their union.
pub fn merge_runs(
    parts: &[(RunReport, Vec<ArtinEvent>)],
) -> Result<(RunReport, Vec<ArtinEvent>), ArtinError> {
    let Some(first) = parts.first() else {
        return Err(ArtinError::InvalidRange("nothing to merge".into()));
    };
    let start = first.0.n_scanned.0;
    let mut end = start;
    let mut acc = Accumulator::new(start, Dedup::Seen(HashSet::new()));
    let mut merged = Vec::new();
    for (report, events) in parts {
        if report.n_scanned.0 != end {
            return Err(ArtinError::InvalidRange(format!(
                "sub-range starting at {} does not continue {}",
                report.n_scanned.0, end
            )));
        }
        end = report.n_scanned.1;
        acc.counts.sieve_survivors += report.counts.sieve_survivors;
        for e in events {
            merged.push(acc.push(e.n, e.p, e.verdict));
        }
    }
    Ok((acc.finish(end), merged))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity() -> Polynomial {
        Polynomial::new(vec![0, 1]).unwrap()
    }

    fn no_stop() -> ScanOptions {
        ScanOptions {
            stop_on_failure: false,
            ..ScanOptions::default()
        }
    }

    #[test]
    fn identity_with_base_two() {
        let g = Base::new(2).unwrap();
        let (report, events) =
            artin_run_collect(&g, &identity(), 0..20, &ScanOptions::default()).unwrap();
        assert_eq!(report.r, 2);
        assert_eq!(report.c, 2);
        assert_eq!(report.first_failure, Some(Failure { n: 7, p: 7 }));
        assert_eq!(report.terminated, Termination::FailureFound);
        assert_eq!(report.n_scanned, (0, 8));
        let summary: Vec<(u128, Verdict, Option<u64>)> =
            events.iter().map(|e| (e.p, e.verdict, e.j)).collect();
        assert_eq!(
            summary,
            vec![
                (2, Verdict::DividesG, None),
                (3, Verdict::PrimitiveRoot, Some(1)),
                (5, Verdict::PrimitiveRoot, Some(2)),
                (7, Verdict::NotPrimitiveRoot, Some(3)),
            ]
        );
        assert_eq!(report.counts.skipped_divides_g, 1);
        assert_eq!(report.counts.prime, 4);
    }

    #[test]
    fn full_range_keeps_initial_run() {
        let g = Base::new(2).unwrap();
        let (report, events) = artin_run_collect(&g, &identity(), 0..20, &no_stop()).unwrap();
        assert_eq!((report.r, report.c), (2, 2));
        assert_eq!(report.n_scanned, (0, 20));
        assert_eq!(events.len(), 8);
        assert_eq!(report.terminated, Termination::FailureFound);
    }

    #[test]
    fn exhausted_range() {
        let g = Base::new(2).unwrap();
        let report = artin_run(&g, &identity(), 0..6, &ScanOptions::default(), |_| {}).unwrap();
        assert_eq!(report.terminated, Termination::RangeExhausted);
        assert_eq!(report.first_failure, None);
        assert_eq!((report.r, report.c), (2, 2));
        let empty = artin_run(&g, &identity(), 5..5, &ScanOptions::default(), |_| {}).unwrap();
        assert_eq!(empty.counts, Counts::default());
    }

    #[test]
    fn square_base_fails_at_first_odd_prime() {
        let g = Base::new(4).unwrap();
        let f = Polynomial::new(vec![1, 2]).unwrap(); // 2n + 1
        let report = artin_run(&g, &f, 0..100, &ScanOptions::default(), |_| {}).unwrap();
        assert_eq!(report.r, 0);
        assert_eq!(report.first_failure, Some(Failure { n: 1, p: 3 }));
    }

    #[test]
    fn repeated_values_count_as_positions() {
        // (n - 5)^2 + 1 on 3..8 takes the values 5, 2, 1, 2, 5
        let f = Polynomial::new(vec![26, -10, 1]).unwrap();
        let g = Base::new(3).unwrap();
        let (report, events) = artin_run_collect(&g, &f, 3..8, &no_stop()).unwrap();
        let seen: Vec<(u64, u128, bool)> = events.iter().map(|e| (e.n, e.p, e.duplicate)).collect();
        assert_eq!(
            seen,
            vec![(3, 5, false), (4, 2, false), (6, 2, true), (7, 5, true)]
        );
        assert_eq!(report.r, 4);
        assert_eq!(report.c, 2);
    }

    #[test]
    fn negative_values_need_the_flag() {
        let f = Polynomial::new(vec![-10, 1]).unwrap(); // n - 10
        let g = Base::new(2).unwrap();
        let (_, skipped) = artin_run_collect(&g, &f, 0..10, &no_stop()).unwrap();
        assert!(skipped.is_empty());
        let opts = ScanOptions {
            allow_negative: true,
            ..no_stop()
        };
        let (_, counted) = artin_run_collect(&g, &f, 0..10, &opts).unwrap();
        let ps: Vec<u128> = counted.iter().map(|e| e.p).collect();
        assert_eq!(ps, vec![7, 5, 3, 2]);
    }

    #[test]
    fn overflow_propagates_in_order() {
        let f = Polynomial::new(vec![1, 0, 0, 1 << 40]).unwrap();
        let g = Base::new(3).unwrap();
        let err = artin_run(&g, &f, 0..(1 << 20), &no_stop(), |_| {}).unwrap_err();
        assert!(matches!(err, ArtinError::Overflow { .. }));
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let f = Polynomial::new(vec![41, 1, 1]).unwrap();
        let g = Base::new(-3).unwrap();
        let one = artin_run_collect(&g, &f, 0..5000, &no_stop()).unwrap();
        let many = artin_run_collect(
            &g,
            &f,
            0..5000,
            &ScanOptions {
                threads: 4,
                segment_len: 700,
                ..no_stop()
            },
        )
        .unwrap();
        assert_eq!(one, many);
    }
}
