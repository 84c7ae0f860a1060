//! Primitive-root tests and multiplicative orders modulo a prime.
//!
//!     cargo run --example primitive_root -- 593856338459898 182215466740465011809

use artin_core::{factorize, is_primitive_root, multiplicative_order, Base};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cases: Vec<(i128, u128)> = match args.as_slice() {
        [g, p] => vec![(g.parse().expect("base"), p.parse().expect("prime"))],
        _ => vec![
            (2, 5),
            (2, 7),
            (3, 7),
            (-1, 3),
            (10, 65537),
            (593856338459898, 182215466740465011809),
        ],
    };
    for (g, p) in cases {
        let base = Base::new(g).expect("base below 2^70");
        let fac = factorize(p - 1).expect("p - 1 factors");
        match is_primitive_root(&base, p, &fac) {
            Ok(pr) => {
                let order = multiplicative_order(&base, p, &fac).unwrap();
                println!("g = {g}, p = {p}: primitive root {pr}, order {order}, p - 1 = {fac}");
            }
            Err(e) => println!("g = {g}, p = {p}: {e}"),
        }
    }
}
