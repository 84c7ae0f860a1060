//! Sieve one segment of the record polynomial and compare the survivor
//! count with the number of primes found among the survivors.
//!
//!     cargo run --release --example sieve -- 1000000 100000

use std::time::Instant;

use artin_core::artin::RecordInstance;
use artin_core::is_prime;
use artin_core::sieve::{sieve_segment, RootTable};

fn main() {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<u64>().expect("integer"));
    let length = args.next().unwrap_or(1 << 20);
    let bound = args.next().unwrap_or(100_000);
    let f = RecordInstance::gallot2004().f;

    let t = Instant::now();
    let table = RootTable::new(&f, bound);
    let roots: usize = table.iter().map(|(_, r)| r.len()).sum();
    println!(
        "{} sieving primes below {bound}, {roots} roots ({:.2?})",
        table.iter().count(),
        t.elapsed()
    );

    let t = Instant::now();
    let seg = sieve_segment(&f, 0, length, bound);
    println!(
        "{} of {length} arguments survive ({:.2?})",
        seg.survivor_count(),
        t.elapsed()
    );

    let t = Instant::now();
    let primes = seg
        .survivors()
        .filter(|&n| is_prime(f.eval(n).unwrap() as u128).is_prime())
        .count();
    println!(
        "{primes} prime values among the survivors ({:.2?})",
        t.elapsed()
    );
}
