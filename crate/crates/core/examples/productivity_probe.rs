//! Probes the first elements of a program's stream and compares each one with
//! a direct run of the program.
//!
//! cargo run --release --example productivity_probe -- "3/2 2/3" 20

use fractran::fractran::{parse_program, Outcome};
use fractran::stream::{induce_spec, probe_productivity, ProbeEntry};
use num_bigint::BigUint;

fn main() {
    let mut args = std::env::args().skip(1);
    let text = args.next().unwrap_or_else(|| "3/2 2/3".to_string());
    let count: u64 = args.next().map_or(20, |s| s.parse().expect("count"));
    let fuel = 100_000;

    let program = parse_program(&text).expect("program");
    let report = probe_productivity(&induce_spec(&program), count, fuel).unwrap();
    for (n, entry) in report.entries.iter().enumerate() {
        let direct = program.halts(&BigUint::from(n as u64 + 1), fuel);
        let stream = match entry {
            ProbeEntry::Produced(k) => format!("bullet after {} steps", k),
            ProbeEntry::Exhausted(_) => "no element yet".to_string(),
        };
        let run = match direct {
            Outcome::Halted(k) => format!("halts on {} in {} steps", n + 1, k),
            Outcome::FuelExhausted(_) => format!("still running on {}", n + 1),
        };
        println!("{:>3}: {:<28} {}", n, stream, run);
    }
    println!("productive up to {}", report.productive_up_to());
}
