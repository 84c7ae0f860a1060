//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//!
//!     cargo test --test acceptance

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use artin_core::artin::{
    artin_run_collect, is_primitive_root, merge_runs, multiplicative_order, Base, CheckOutcome,
    Polynomial, RecordInstance, ScanOptions, Termination, VerificationReport,
};
use artin_core::factor::factorize;
use artin_core::primality::is_prime;
use artin_core::report::{run_fingerprint, ReportLine, Summary, SummaryBody, TOOL_VERSION};
use artin_core::search::{run_search, Checkpoint, GSource, SearchConfig, SearchControl, WideInt};
use artin_core::sieve::sieve_segment;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CARMICHAEL_BELOW_1E9: &str = include_str!("data/carmichael_1e9.txt");

const RECORD_LO: u64 = 620651;
const RECORD_HI: u64 = 1749283;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn record_verification() -> Result<VerificationReport, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_artin"))
        .args(["verify", "gallot2004"])
        .output()
        .map_err(|e| format!("cannot run artin: {e}"))?;
    ensure(out.status.code() == Some(0), || {
        format!(
            "exit {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        )
    })?;
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    text.lines()
        .find_map(|l| match l.parse::<ReportLine>() {
            Ok(ReportLine::Verification(r)) => Some(r),
            _ => None,
        })
        .ok_or_else(|| "no verification line in the report".to_string())
}

fn criterion_1(report: &VerificationReport) -> Outcome {
    ensure(report.passed(), || format!("checks: {:?}", report.checks))?;
    ensure(report.f_form.c == 38639, || {
        format!("c = {}", report.f_form.c)
    })?;
    let (a, b) = report.run_n_span.ok_or("empty run")?;
    ensure(RECORD_LO <= a && b <= RECORD_HI, || {
        format!("run primes at [{a}, {b}]")
    })?;
    let fail = report.f_form.first_failure.ok_or("no failure")?;
    ensure(fail.n + report.shift > RECORD_HI, || {
        format!("failure at {}", fail.n)
    })?;
    Ok(format!(
        "exit 0, c = 38639, run primes at n in [{a}, {b}] within [{RECORD_LO}, {RECORD_HI}], first failure n = {}",
        fail.n + report.shift
    ))
}

fn criterion_2(report: &VerificationReport) -> Outcome {
    let agree = report.check("forms_agree").ok_or("no forms_agree check")?;
    ensure(agree.outcome == CheckOutcome::Pass, || agree.detail.clone())?;
    ensure(
        report.f_form.r == report.h_form.r && report.f_form.c == report.h_form.c,
        || "f-form and h-form runs differ".into(),
    )?;
    let lhs = BigUint::from(32u32) * BigUint::from(620651u32).pow(2)
        + BigUint::from(182215368820640606817u128);
    ensure(lhs == BigUint::from(182215381147285848449u128), || {
        format!("{lhs}")
    })?;
    ensure(
        report.shift == 620651 && report.h.coeffs() == [182215368820640606817, 0, 32],
        || format!("h = {}, shift {}", report.h, report.shift),
    )?;
    Ok(format!(
        "identical prime sequences ({} primes), 32*620651^2 + 182215368820640606817 = 182215381147285848449",
        report.f_form.counts.prime
    ))
}

fn criterion_3() -> Outcome {
    let primes: Vec<u128> = (2..10_000u128)
        .filter(|&p| is_prime(p).is_prime())
        .collect();
    let mut pairs = 0u64;
    for &p in &primes {
        let fac = factorize(p - 1).map_err(|e| e.to_string())?;
        for g in 2..p {
            let base = Base::new(g as i128).unwrap();
            let pr = is_primitive_root(&base, p, &fac).map_err(|e| e.to_string())?;
            let order = multiplicative_order(&base, p, &fac).map_err(|e| e.to_string())?;
            ensure(pr == (order == p - 1), || format!("g = {g}, p = {p}"))?;
            pairs += 1;
        }
    }
    Ok(format!(
        "{pairs} pairs over {} primes, 0 disagreements",
        primes.len()
    ))
}

fn criterion_4() -> Outcome {
    const LIMIT: usize = 10_000_000;
    let mut composite = vec![false; LIMIT];
    composite[0] = true;
    composite[1] = true;
    let mut i = 2;
    while i * i < LIMIT {
        if !composite[i] {
            let mut j = i * i;
            while j < LIMIT {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    let mut disagreements = Vec::new();
    for (n, &c) in composite.iter().enumerate() {
        if is_prime(n as u128).is_prime() == c {
            disagreements.push(n);
        }
    }
    ensure(disagreements.is_empty(), || {
        format!(
            "disagree at {:?}",
            &disagreements[..disagreements.len().min(10)]
        )
    })?;
    let carmichael: Vec<u128> = CARMICHAEL_BELOW_1E9
        .lines()
        .map(|l| l.trim().parse().unwrap())
        .collect();
    ensure(carmichael.len() == 646, || {
        format!("{} Carmichael numbers", carmichael.len())
    })?;
    let accepted: Vec<u128> = carmichael
        .iter()
        .copied()
        .filter(|&n| is_prime(n).is_prime())
        .collect();
    ensure(accepted.is_empty(), || format!("accepted {accepted:?}"))?;
    Ok(format!(
        "sieve agreement for n < 10^7 ({} primes), all 646 Carmichael numbers below 10^9 rejected",
        composite.iter().filter(|&&c| !c).count()
    ))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_fac7);
    let mut inputs: Vec<u128> = (0..10_000)
        .map(|_| rng.gen::<u64>().max(1) as u128)
        .collect();
    inputs.extend((0..1_000).map(|_| rng.gen_range(1..1u128 << 72)));
    for &n in &inputs {
        let fac = factorize(n).map_err(|e| format!("{n}: {e}"))?;
        ensure(fac.product() == Some(n), || format!("{n} != {fac}"))?;
        for p in fac.primes() {
            ensure(is_prime(p).is_prime(), || {
                format!("{n}: factor {p} not prime")
            })?;
        }
    }
    Ok(format!(
        "{} inputs reconstructed from prime factors, 0 violations",
        inputs.len()
    ))
}

fn criterion_6() -> Outcome {
    let f = Polynomial::new(vec![0, 1]).unwrap();
    let g = Base::new(2).unwrap();
    let (report, events) =
        artin_run_collect(&g, &f, 0..100, &ScanOptions::default()).map_err(|e| e.to_string())?;
    ensure((report.r, report.c) == (2, 2), || {
        format!("r = {}, c = {}", report.r, report.c)
    })?;
    let fail = report.first_failure.ok_or("no failure")?;
    ensure(fail.p == 7, || format!("failure at p = {}", fail.p))?;
    ensure(
        events.first().is_some_and(|e| e.p == 2 && e.j.is_none()),
        || format!("first event {:?}", events.first()),
    )?;
    ensure(report.counts.skipped_divides_g == 1, || {
        "2 not skipped".into()
    })?;
    Ok("r = 2, c = 2, first failure p = 7, p = 2 skipped as dividing g".into())
}

fn criterion_7() -> Outcome {
    let rec = RecordInstance::gallot2004();
    let (h, _) = rec.f.depressed().ok_or("record has no depressed form")?;
    let range = (RECORD_LO, 720651);
    let summary = |threads: usize| -> Result<String, String> {
        let opts = ScanOptions {
            threads,
            ..ScanOptions::default()
        };
        let (report, _) =
            artin_run_collect(&rec.g, &h, range.0..range.1, &opts).map_err(|e| e.to_string())?;
        Ok(ReportLine::Summary(Summary {
            version: TOOL_VERSION.into(),
            fingerprint: run_fingerprint(&h, &rec.g, range, &opts),
            body: SummaryBody::Run {
                f: h.clone(),
                g: rec.g,
                n_range: range,
                report,
            },
        })
        .to_line())
    };
    let one = summary(1)?;
    let eight = summary(8)?;
    ensure(one == eight, || {
        format!("1 worker: {one}\n8 workers: {eight}")
    })?;

    let no_stop = ScanOptions {
        stop_on_failure: false,
        ..ScanOptions::default()
    };
    let whole =
        artin_run_collect(&rec.g, &h, range.0..range.1, &no_stop).map_err(|e| e.to_string())?;
    let step = (range.1 - range.0) / 4;
    let bounds = [
        range.0,
        range.0 + step,
        range.0 + 2 * step,
        range.0 + 3 * step,
        range.1,
    ];
    let parts = bounds
        .windows(2)
        .map(|w| artin_run_collect(&rec.g, &h, w[0]..w[1], &no_stop))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let merged = merge_runs(&parts).map_err(|e| e.to_string())?;
    let a = serde_json::to_string(&whole.0).unwrap();
    let b = serde_json::to_string(&merged.0).unwrap();
    ensure(a == b && whole.1 == merged.1, || {
        format!("whole {a}\nmerged {b}")
    })?;
    ensure(whole.0.terminated == Termination::RangeExhausted, || {
        "unexpected failure".into()
    })?;
    Ok(format!(
        "h-form n in [620651, 720651): 1 vs 8 workers and 1 vs 4 sub-ranges byte-identical (r = c = {})",
        whole.0.c
    ))
}

fn criterion_8() -> Outcome {
    let f = RecordInstance::gallot2004().f;
    let (start, length) = (0u64, 1_000_000u64);
    let seg = sieve_segment(&f, start, length, 100_000);
    let value_is_prime = |n: u64| is_prime(f.eval(n).unwrap() as u128).is_prime();
    let via_sieve: Vec<u64> = seg.survivors().filter(|&n| value_is_prime(n)).collect();
    let direct: Vec<u64> = (start..start + length)
        .filter(|&n| value_is_prime(n))
        .collect();
    ensure(via_sieve == direct, || {
        format!(
            "{} primes via sieve, {} directly",
            via_sieve.len(),
            direct.len()
        )
    })?;
    Ok(format!(
        "{} survivors of 10^6, {} prime values, sets equal",
        seg.survivor_count(),
        direct.len()
    ))
}

fn criterion_9() -> Outcome {
    let cfg = SearchConfig {
        degree: 2,
        coeff_ranges: vec![
            [WideInt(1), WideInt(5)],
            [WideInt(-2), WideInt(2)],
            [WideInt(1), WideInt(2)],
        ],
        g_source: GSource::List {
            values: vec![WideInt(2), WideInt(3)],
        },
        quick_reject_threshold: 3,
        n_budget: 1280,
        sieve_bound: 1000,
        record_floor: 5,
        congruences: vec![],
    };
    let reference =
        run_search(&cfg, None, &SearchControl::default(), |_| {}).map_err(|e| e.to_string())?;
    let total = reference.checkpoint.cursor;
    ensure(total <= 100, || format!("{total} candidates"))?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0ffee);
    let mut kills = Vec::new();
    for round in 0..5 {
        let kill = rng.gen_range(1..total);
        kills.push(kill);
        let path = dir.path().join(format!("round{round}.json"));
        let ctl = SearchControl {
            checkpoint_path: Some(path.clone()),
            checkpoint_every: 1,
            stop_after: Some(kill),
            ..SearchControl::default()
        };
        run_search(&cfg, None, &ctl, |_| {}).map_err(|e| e.to_string())?;
        let saved = Checkpoint::load(&path).map_err(|e| e.to_string())?;
        let resumed = run_search(
            &cfg,
            Some(saved),
            &SearchControl {
                stop_after: None,
                ..ctl
            },
            |_| {},
        )
        .map_err(|e| e.to_string())?;
        ensure(
            resumed.checkpoint.leaderboard == reference.checkpoint.leaderboard,
            || format!("leaderboards differ after a kill at {kill}"),
        )?;
    }
    Ok(format!(
        "{total} candidates, killed at {kills:?}, resumed leaderboards identical ({} entries)",
        reference.checkpoint.leaderboard.len()
    ))
}

fn main() {
    let mut failures = 0;
    let mut report = |id: u32, name: &str, run: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(&mut *run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {id} ({name}): {detail} [{secs:.1}s]"),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {id} ({name}): {detail} [{secs:.1}s]");
            }
        }
    };

    let t = Instant::now();
    let record = record_verification();
    let record_secs = t.elapsed().as_secs_f64();
    report(1, "record reproduction", &mut || {
        let r = record.as_ref().map_err(Clone::clone)?;
        criterion_1(r).map(|d| format!("{d}, verify took {record_secs:.1}s"))
    });
    report(2, "form equivalence", &mut || {
        criterion_2(record.as_ref().map_err(Clone::clone)?)
    });
    report(3, "primitive-root oracle", &mut criterion_3);
    report(4, "primality", &mut criterion_4);
    report(5, "factorization", &mut criterion_5);
    report(6, "small run", &mut criterion_6);
    report(7, "determinism and partition invariance", &mut criterion_7);
    report(8, "sieve soundness", &mut criterion_8);
    report(9, "checkpoint resume", &mut criterion_9);

    println!("acceptance: {} of 9 criteria passed", 9 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
