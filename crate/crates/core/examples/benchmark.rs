//! Runs one bundled benchmark and prints its checks.
//!
//! cargo run --release --example benchmark -- senb-qualitative

use clap::ValueEnum;
use phasefield::cli::Benchmark;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let name = std::env::args().nth(1).unwrap_or_else(|| "senb-qualitative".to_owned());
    let benchmark = Benchmark::from_str(&name, true)?;
    let mut config = benchmark.config()?;
    config.output.directory = std::env::temp_dir().join(benchmark.name());
    let report = benchmark.run(&config)?;
    for c in &report.checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    println!("curve {}", report.artifacts.curve.display());
    Ok(())
}
