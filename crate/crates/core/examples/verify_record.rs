//! Re-verify the built-in 2004 record: c = 38639 for
//! f(X) = 32X^2 + 39721664X + 182215381147285848449, g = 593856338459898.
//!
//!     cargo run --release --example verify_record -- [threads]

use std::time::Instant;

use artin_core::artin::{verify_record, RecordInstance, ScanOptions};

fn main() {
    let threads = std::env::args()
        .nth(1)
        .map(|t| t.parse().expect("thread count"))
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let record = RecordInstance::gallot2004();
    println!("f(X) = [{}], g = {}, {threads} threads", record.f, record.g);

    let t = Instant::now();
    let opts = ScanOptions {
        threads,
        ..ScanOptions::default()
    };
    let report = verify_record(&record, &opts).expect("verification runs");
    println!("h(n) = [{}] = f(n - {})", report.h, report.shift);
    for check in &report.checks {
        println!("{:?}  {}: {}", check.outcome, check.name, check.detail);
    }
    println!("c = {} in {:.1?}", report.f_form.c, t.elapsed());
    if !report.passed() {
        std::process::exit(1);
    }
}
