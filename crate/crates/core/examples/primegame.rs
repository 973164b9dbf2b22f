//! Runs PRIMEGAME from 2 and reads primes off the powers of two it reaches.
//!
//! cargo run --release --example primegame -- [count]

use fractran::fractran::{factorize, primegame};
use num_bigint::BigUint;

fn main() {
    let count: usize = std::env::args().nth(1).map_or(8, |s| s.parse().expect("count"));
    let program = primegame();
    let two = BigUint::from(2u32);

    for (i, v) in program.run(&two, 10).values.iter().enumerate() {
        println!("n_{:<2} = {}", i, v);
    }

    // The exponent backend keeps each step cheap however large n gets.
    let powers = program
        .orbit(factorize(&two).unwrap())
        .enumerate()
        .skip(1)
        .filter_map(|(i, v)| v.power_of(2).map(|e| (i, e)));
    for (i, e) in powers.take(count) {
        println!("step {:>8}: 2^{}", i, e);
    }
}
