use std::io::Write;

use clap::Parser;
use novikov::cli::{run, RunConfig};

fn main() {
    let config = RunConfig::parse();
    if let Some(n) = std::env::var("NOVIKOV_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let outcome = run(&config);
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    std::process::exit(outcome.code);
}
