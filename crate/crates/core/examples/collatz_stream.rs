//! Evaluates the Collatz stream. Element m is produced once the trajectory
//! of m + 1 reaches 1.
//!
//! cargo run --release --example collatz_stream -- 100

use fractran::stream::{collatz_spec, rewrite_nth, Evaluation};

fn trajectory_length(mut x: u64) -> u64 {
    let mut k = 0;
    while x != 1 {
        x = if x % 2 == 0 { x / 2 } else { 3 * x + 1 };
        k += 1;
    }
    k
}

fn main() {
    let count: u64 = std::env::args().nth(1).map_or(30, |s| s.parse().expect("count"));
    let spec = collatz_spec();
    print!("{}", spec.emit_trs().unwrap());
    for m in 0..count {
        match rewrite_nth(&spec, m, 10_000_000).unwrap() {
            Evaluation::Produced(steps) => {
                println!("x = {:>4}: {:>8} rewrite steps, {:>3} Collatz steps", m + 1, steps, trajectory_length(m + 1))
            }
            Evaluation::Exhausted { partial, .. } => println!("x = {:>4}: stopped at {}", m + 1, partial),
        }
    }
}
