//! Runs every registered claim on the default corpus and prints the summary.
//!
//! `cargo run --release --example verify_claims [claim] [seed]`

use floatbody::report::markdown_summary;
use floatbody::verify::{run, VerifyConfig};
use std::time::Instant;

fn main() -> floatbody::error::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let claim = args.get(1).map(String::as_str).unwrap_or("all");
    let cfg = VerifyConfig {
        seed: args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1),
        ..Default::default()
    };
    let start = Instant::now();
    let reports = run(claim, &cfg)?;
    print!("{}", markdown_summary(&reports));
    println!("\n{} reports in {:.1?}", reports.len(), start.elapsed());
    Ok(())
}
