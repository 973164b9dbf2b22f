//! Compiles the bit-flipping machine and follows one run in both worlds.
//!
//! cargo run --example compile_turing_machine

use fractran::compile::{compile, SimulationVerdict};
use fractran::turing::flipper_tm;

fn main() {
    let tm = flipper_tm();
    let compiled = compile(&tm).expect("no self-loops");
    for (family, n) in compiled.family_counts() {
        println!("{:<12} {}", family, n);
    }
    println!("{} fractions", compiled.program.len());

    let start = tm.parse_config("1 b 1001").unwrap();
    let trace = tm.run(&start, 100);
    let encodings: Vec<_> = trace.configs.iter().map(|c| compiled.encode(c)).collect();
    for (step, v) in compiled.program.orbit(compiled.encode(&start)).enumerate() {
        if let Some(i) = encodings.iter().position(|e| *e == v) {
            println!("fractran step {:>3}: {:<12} = {}", step, tm.show_config(&trace.configs[i]), v);
        }
    }

    match compiled.check_simulation(&start, 100) {
        SimulationVerdict::Verified { tm_steps, fractran_steps } => {
            println!("verified: {} machine steps, {} Fractran steps", tm_steps, fractran_steps)
        }
        other => println!("{:?}", other),
    }
}
