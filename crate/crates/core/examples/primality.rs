//! Primality verdicts across the three regimes of `is_prime`.
//!
//!     cargo run --example primality -- 561 18446744073709551557

use artin_core::is_prime;

fn main() {
    let args: Vec<u128> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("decimal integer"))
        .collect();
    let inputs = if args.is_empty() {
        vec![
            97,
            561,
            3215031751,
            18446744073709551557,
            618970019642690137449562111,
            182215381147285848449,
        ]
    } else {
        args
    };
    for n in inputs {
        let v = is_prime(n);
        println!("{n:>30}  {:?} via {:?}", v.value, v.method);
    }
}
