//! Factor integers below 2^72 with trial division and Pollard-Brent rho.
//!
//!     cargo run --example factor -- 182215381147285848448

use std::time::Instant;

use artin_core::factorize;

fn main() {
    let args: Vec<u128> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("decimal integer"))
        .collect();
    let inputs = if args.is_empty() {
        vec![
            12,
            8051,
            18446744073709551615,
            182215381147285848448,
            4722366482869645213693,
        ]
    } else {
        args
    };
    for n in inputs {
        let t = Instant::now();
        match factorize(n) {
            Ok(fac) => println!("{n} = {fac}  ({:.2?})", t.elapsed()),
            Err(e) => println!("{n}: {e}"),
        }
    }
}
