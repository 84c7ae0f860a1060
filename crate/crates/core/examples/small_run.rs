//! Stream the primes of a short scan and print the run statistic.
//!
//!     cargo run --example small_run -- 1,1 2 0:20

use artin_core::{artin_run, Base, Polynomial, ScanOptions};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (poly, g, range) = match args.as_slice() {
        [p, g, r] => (p.as_str(), g.as_str(), r.as_str()),
        _ => ("0,1", "2", "0:20"),
    };
    let f: Polynomial = poly.parse().expect("coefficients c0,c1,...");
    let g = Base::new(g.parse().expect("integer base")).expect("base below 2^70");
    let (lo, hi) = range.split_once(':').expect("range a:b");
    let range = lo.parse().unwrap()..hi.parse().unwrap();

    println!("f = [{f}], g = {g}, n in {range:?}");
    let report = artin_run(&g, &f, range, &ScanOptions::default(), |e| {
        let j = e.j.map_or("-".to_string(), |j| j.to_string());
        let dup = if e.duplicate { " (repeat)" } else { "" };
        println!(
            "  j = {j:>3}  n = {:>4}  p = {:<8} {:?}{dup}",
            e.n, e.p, e.verdict
        );
    })
    .expect("scan");
    println!("r = {}, c = {}", report.r, report.c);
    if let Some(x) = report.first_failure {
        println!("first failure: n = {}, p = {}", x.n, x.p);
    }
}
