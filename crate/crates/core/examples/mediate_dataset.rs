//! Mediation analysis of a CSV file with both estimators.
//!
//! cargo run --release --example mediate_dataset -- data/uis.csv TREAT FRAC TIME 0.01
//!
//! Arguments: path, treatment, mediator, outcome, optional outcome scale,
//! then any covariate names. The outcome model includes the T×M interaction.

use semimed::{load_csv_columns, mediate, MediationRequest, Method};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.len() < 4 {
        eprintln!(
            "usage: mediate_dataset <csv> <treatment> <mediator> <outcome> [scale] [covariates..]"
        );
        std::process::exit(2);
    }
    let scale: f64 = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(1.0);
    let covariates: Vec<&str> = args.iter().skip(5).map(String::as_str).collect();

    let request = MediationRequest::new(&args[1], &args[2], &args[3])
        .covariates(&covariates)
        .interaction(true);
    let mut data = load_csv_columns(&args[0], &request.referenced_columns()).expect("readable CSV");
    if scale != 1.0 {
        data = data.scale_column(&args[3], scale).unwrap();
    }
    println!("{} rows used, {} dropped", data.n(), data.rows_dropped());

    let result = mediate(&data, &request).expect("valid request");
    for method in [Method::Ols, Method::Semiparametric] {
        let Some(est) = result.effects(method) else {
            println!("{method}: numerical failure");
            continue;
        };
        println!("{method}");
        for (i, name) in est.names().iter().enumerate() {
            println!(
                "  {:<8} {:+.4}  [{:+.4}, {:+.4}]  length {:.4}",
                name,
                est.values[i],
                est.ci_lower[i],
                est.ci_upper[i],
                est.ci_length(i)
            );
        }
        if let Some(p) = result
            .get(method)
            .and_then(|m| m.estimate())
            .and_then(|e| e.interaction_p_value)
        {
            println!("  interaction p-value {p:.4}");
        }
    }
}
