use std::io::Write;

use clap::Parser;
use fractran::cli::{execute, Cli};

fn main() {
    let out = execute(&Cli::parse());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    std::io::stdout().flush().ok();
    std::process::exit(out.code);
}
