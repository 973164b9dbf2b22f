//! Writes the stream specification of a program as a TRS.
//!
//! cargo run --example stream_translation -- "3/2"

use fractran::fractran::parse_program;
use fractran::stream::{induce_spec, is_orthogonal};

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| "3/2".to_string());
    let spec = induce_spec(&parse_program(&text).expect("program"));
    match spec.emit_trs() {
        Ok(trs) => print!("{}", trs),
        Err(e) => {
            eprintln!("{}", e);
            return;
        }
    }
    let symbols: Vec<String> = spec.signature().iter().map(|s| s.to_string()).collect();
    println!("; signature: {}", symbols.join(" "));
    println!("; orthogonal: {}", is_orthogonal(&spec.rules().unwrap()));
}
