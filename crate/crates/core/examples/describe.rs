//! Prints the shortest description of a bit string given on the command line.
//!
//!     cargo run --release --example describe -- 00000000000000000000

use kolmo::complexity::{exact, upper_bound};
use kolmo::randomness::delta0;
use kolmo::{BitSequence, RunLimits};

fn main() {
    let arg = std::env::args().nth(1).unwrap_or_default();
    let x: BitSequence = match arg.parse() {
        Ok(x) => x,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    let limits = RunLimits::default();
    let estimate = match exact(&x, &limits) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("{e}; falling back to dovetailing");
            upper_bound(&x, 64, &limits).expect("stage count is positive")
        }
    };
    let relation = if estimate.certified { "=" } else { "<=" };
    println!("C(x|{}) {relation} {}", x.len(), estimate.value);
    println!("witness {} ({})", estimate.witness.code(), estimate.witness.disassemble());
    println!("delta0 >= {}", delta0(x.len(), estimate.value));
}
