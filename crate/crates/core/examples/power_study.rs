//! Near-boundary power comparison for ACME(0).
//!
//! cargo run --release --example power_study -- 1000 7

use semimed::simulation::{run_power_study, ScenarioConfig};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let reps = args.first().and_then(|s| s.parse().ok()).unwrap_or(200);
    let seed = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(7);

    let report = run_power_study(&ScenarioConfig::power(reps, seed)).expect("valid configuration");
    println!(
        "n={} reps={} truth ACME(0)={:.4}",
        report.n, report.reps, report.truth_acme0
    );
    for m in &report.methods {
        println!(
            "{:<15} rejection {:.3}  mean {:+.4}  length {:.4}  success {:.3}",
            m.method, m.rejection_rate, m.mean_estimate, m.avg_ci_length, m.success_rate
        );
    }
    let r = &report.published_reference;
    println!(
        "published: rejection {:.3} / {:.3}, length {:.4} / {:.4}",
        r.ols_rejection_rate,
        r.semiparametric_rejection_rate,
        r.ols_avg_ci_length,
        r.semiparametric_avg_ci_length
    );
}
