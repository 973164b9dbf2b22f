//! Prints the residue table of a program and the piecewise-linear function
//! it computes, then checks it against the interpreter.
//!
//! cargo run --example collatz_form -- "3/2 5/3"

use fractran::fractran::parse_program;
use num_bigint::BigUint;

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| "5/6 7/10 11/3".to_string());
    let program = parse_program(&text).expect("program");
    let form = program.collatz_form();
    let d = program.lcm_den();
    println!("{}  (d = {})", program, d);

    let Some(branches) = form.branches() else {
        println!("modulus too large to list branches");
        return;
    };
    for (j, b) in branches.iter().enumerate() {
        let class = if j == 0 { d.clone() } else { BigUint::from(j) };
        match program.residue_entry(&class) {
            Some(e) => println!(
                "n = {} mod {}: n * {}   (rule {}, p' = {}, o = {})",
                j, d, b.a, e.rule, e.multiplier, e.offset
            ),
            None => println!("n = {} mod {}: undefined", j, d),
        }
    }

    let mismatches = (1u32..1000)
        .map(BigUint::from)
        .filter(|n| program.step(n).is_some_and(|next| next != form.eval(n)))
        .count();
    println!("disagreements with the interpreter on 1..1000: {}", mismatches);
}
