//! Runs one simulation scenario and prints its scorecard.
//!
//! cargo run --release --example monte_carlo -- asymmix 300 200 1

use std::time::Instant;

use semimed::simulation::{run_scenario, ErrorLaw, ScenarioConfig};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let law: ErrorLaw = args
        .first()
        .map_or(Ok(ErrorLaw::Gaussian), |s| s.parse())
        .unwrap_or_else(|e| {
            eprintln!("{e}");
            std::process::exit(2);
        });
    let n = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(300);
    let reps = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(100);
    let seed = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(1);

    let start = Instant::now();
    let run = run_scenario(&ScenarioConfig::main(law, n, reps, seed)).expect("valid configuration");
    println!(
        "{law}: n={n} reps={reps} seed={seed} ({:.1}s)",
        start.elapsed().as_secs_f64()
    );
    println!(
        "{:<15} {:<8} {:>8} {:>8} {:>8} {:>8} {:>8}",
        "method", "effect", "bias", "rmse", "cover", "length", "success"
    );
    for r in &run.metrics {
        println!(
            "{:<15} {:<8} {:>8.4} {:>8.4} {:>8.3} {:>8.4} {:>8.3}",
            r.method, r.effect, r.bias, r.rmse, r.coverage, r.avg_length, r.success_rate
        );
    }
    for w in &run.warnings {
        println!("warning: {w}");
    }
}
