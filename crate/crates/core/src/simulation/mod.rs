//! Monte Carlo harness: error laws, the interaction design, scenario
//! metrics and the power study.

mod dgp;
mod errors;
mod power;
mod rng;
mod scenario;

pub use dgp::{generate_interaction_dataset, Design, DesignParams, ScenarioConfig};
pub use errors::{sample_error, ErrorLaw, ErrorSpec, MixtureComponent};
pub use power::{
    run_power_study, run_power_study_with, PowerMethodSummary, PowerReport, PublishedReference,
};
pub use rng::{stream_rng, StreamPurpose};
pub use scenario::{
    aggregate, run_replicate, run_replicates, run_scenario, run_scenario_with, write_metrics_csv,
    write_replicate_log, MetricsRow, ReplicateMethod, ReplicateResult, RunOptions, ScenarioRun,
    FAILURE_FLAG_RATE,
};
