//! Simulated mediation data, both estimators, and an SVG forest plot.
//!
//! cargo run --release --example forest_plot -- forest.svg

use semimed::cli::emit_forest_svg;
use semimed::simulation::{generate_interaction_dataset, ErrorLaw, ScenarioConfig};
use semimed::{mediate, MediationRequest, Method};

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "forest.svg".into());
    let config = ScenarioConfig::main(ErrorLaw::SymmetricBimodal, 500, 1, 3);
    let data = generate_interaction_dataset(&config, 0).unwrap();
    let result = mediate(
        &data,
        &MediationRequest::new("T", "M", "Y").interaction(true),
    )
    .unwrap();

    let rows: Vec<(Method, _)> = [Method::Ols, Method::Semiparametric]
        .into_iter()
        .filter_map(|m| result.effects(m).map(|e| (m, e)))
        .collect();
    emit_forest_svg(&rows, path.as_ref()).unwrap();
    println!("truth {:?}", config.truth());
    println!("wrote {path}");
}
