//! Re-verification of a claimed run of consecutive Artin primes.
//!
//! A claim is checked twice: once by walking `f` from `X = 0` and once by
//! walking its depressed form `h(n) = f(n - s)` over the claimed index
//! window. Both walks must produce the same primes with the same verdicts.

use serde::{Deserialize, Serialize};

use super::{
    artin_run_collect, ArtinError, ArtinEvent, Base, Polynomial, RunReport, ScanOptions,
    Termination, Verdict,
};

/// A claimed record: `c_g(f) = expected_c`, with every prime of the run at
/// an index of the depressed form inside `expected_n_range` (inclusive).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordInstance {
    pub name: String,
    pub f: Polynomial,
    pub g: Base,
    pub expected_c: u64,
    pub expected_n_range: (u64, u64),
    /// The window is claimed to end with the run, so the first failing
    /// prime must lie beyond it. Otherwise the window is only the scan
    /// extent and the run merely has to end inside it.
    pub tight: bool,
}

impl RecordInstance {
    /// Gallot's 2004 quadratic record, `c = 38639`.
    pub fn gallot2004() -> Self {
        RecordInstance {
            name: "gallot2004".into(),
            f: Polynomial::new(vec![182215381147285848449, 39721664, 32])
                .expect("valid record polynomial"),
            g: Base::new(593856338459898).expect("valid record base"),
            expected_c: 38639,
            expected_n_range: (620651, 1749283),
            tight: true,
        }
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "gallot2004" => Some(Self::gallot2004()),
            _ => None,
        }
    }

    pub fn builtin_names() -> &'static [&'static str] {
        &["gallot2004"]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CheckOutcome {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationCheck {
    pub name: String,
    pub outcome: CheckOutcome,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub instance: String,
    pub f: Polynomial,
    pub h: Polynomial,
    pub shift: u64,
    pub g: Base,
    pub expected_c: u64,
    pub expected_n_range: (u64, u64),
    pub f_form: RunReport,
    pub h_form: RunReport,
    /// Smallest and largest depressed-form index of a prime in the run.
    pub run_n_span: Option<(u64, u64)>,
    pub checks: Vec<VerificationCheck>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome == CheckOutcome::Pass)
    }

    pub fn inconclusive(&self) -> bool {
        self.checks
            .iter()
            .any(|c| c.outcome == CheckOutcome::Inconclusive)
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.outcome == CheckOutcome::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&VerificationCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check(name: &str, outcome: CheckOutcome, detail: String) -> VerificationCheck {
    VerificationCheck {
        name: name.into(),
        outcome,
        detail,
    }
}

fn pass_fail(ok: bool) -> CheckOutcome {
    if ok {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Fail
    }
}

/// Extra arguments scanned past a tight window to locate the failure.
fn tail_slack(lo: u64, hi: u64) -> u64 {
    ((hi - lo + 1) / 8).max(10_000)
}

/// Verify `instance`; mathematical disagreements become failed checks.
pub fn verify_record(
    instance: &RecordInstance,
    opts: &ScanOptions,
) -> Result<VerificationReport, ArtinError> {
    let (lo, hi) = instance.expected_n_range;
    if lo > hi {
        return Err(ArtinError::InvalidRange(format!("[{lo}, {hi}] is empty")));
    }
    let (h, shift) = match instance.f.depressed() {
        Some((h, s)) if s >= 0 && (s as u64) <= hi => (h, s as u64),
        _ => (instance.f.clone(), 0),
    };
    let end = if instance.tight {
        hi + 1 + tail_slack(lo, hi)
    } else {
        hi + 1
    };
    let opts = ScanOptions {
        stop_on_failure: true,
        ..opts.clone()
    };
    let g = &instance.g;
    let (f_report, f_events) = artin_run_collect(g, &instance.f, 0..end - shift, &opts)?;
    let (h_report, h_events) = artin_run_collect(g, &h, lo..end, &opts)?;

    let mut checks = Vec::new();

    // (a) the two walks see the same primes
    let identity = h.translate(shift as i128).as_ref() == Ok(&instance.f);
    let shifted: Vec<ArtinEvent> = f_events
        .iter()
        .map(|e| ArtinEvent {
            n: e.n + shift,
            ..e.clone()
        })
        .collect();
    let same_events = shifted == h_events;
    let same_run = (f_report.r, f_report.c) == (h_report.r, h_report.c)
        && f_report.first_failure.map(|x| (x.n + shift, x.p))
            == h_report.first_failure.map(|x| (x.n, x.p));
    checks.push(check(
        "forms_agree",
        pass_fail(identity && same_events && same_run),
        format!(
            "f(X) = h(X + {shift}): {identity}; {} primes from f, {} from h; identical sequences: {same_events}",
            f_events.len(),
            h_events.len()
        ),
    ));

    let exhausted = f_report.terminated == Termination::RangeExhausted;

    // (b) distinct primes in the run
    checks.push(check(
        "count",
        if exhausted {
            CheckOutcome::Inconclusive
        } else {
            pass_fail(f_report.c == instance.expected_c)
        },
        format!(
            "c = {} (expected {}), r = {}{}",
            f_report.c,
            instance.expected_c,
            f_report.r,
            if exhausted { ", scan exhausted" } else { "" }
        ),
    ));

    // (c) the run's primes sit inside the claimed window
    let run_ns: Vec<u64> = shifted
        .iter()
        .filter(|e| e.verdict == Verdict::PrimitiveRoot && e.j.is_some_and(|j| j <= f_report.r))
        .map(|e| e.n)
        .collect();
    let run_n_span = run_ns.first().zip(run_ns.last()).map(|(&a, &b)| (a, b));
    let inside = run_ns.iter().all(|&n| (lo..=hi).contains(&n));
    checks.push(check(
        "n_range",
        pass_fail(inside),
        match run_n_span {
            Some((a, b)) => format!("run primes at n in [{a}, {b}], claimed [{lo}, {hi}]"),
            None => format!("empty run, claimed [{lo}, {hi}]"),
        },
    ));

    // (d) the run ends with a failing prime past the window (tight) or inside the scan
    let failure_n = f_report.first_failure.map(|x| x.n + shift);
    checks.push(check(
        "failure_after_range",
        match failure_n {
            None => CheckOutcome::Inconclusive,
            Some(n) if instance.tight => pass_fail(n > hi),
            Some(_) => CheckOutcome::Pass,
        },
        match f_report.first_failure {
            Some(x) => format!("first failure at n = {}, p = {}", x.n + shift, x.p),
            None => format!("no failure up to n = {}", end - 1),
        },
    ));

    Ok(VerificationReport {
        instance: instance.name.clone(),
        f: instance.f.clone(),
        h,
        shift,
        g: instance.g,
        expected_c: instance.expected_c,
        expected_n_range: instance.expected_n_range,
        f_form: f_report,
        h_form: h_report,
        run_n_span,
        checks,
    })
}
