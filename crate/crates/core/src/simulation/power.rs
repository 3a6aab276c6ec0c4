//! Near-boundary power study for ACME(0).

use serde::{Deserialize, Serialize};

use super::dgp::{DesignParams, ScenarioConfig};
use super::scenario::{run_replicates, RunOptions, METHODS};
use crate::error::Result;
use crate::estimators::Method;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerMethodSummary {
    pub method: String,
    /// Share of successful replicates whose ACME(0) interval excludes 0.
    pub rejection_rate: f64,
    pub mean_estimate: f64,
    pub avg_ci_length: f64,
    pub success_rate: f64,
    pub reps_used: usize,
}

/// Previously published figures for this design, for side-by-side reading.
/// They were obtained with unpublished error parameters and are not targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublishedReference {
    pub ols_rejection_rate: f64,
    pub semiparametric_rejection_rate: f64,
    pub ols_avg_ci_length: f64,
    pub semiparametric_avg_ci_length: f64,
}

impl PublishedReference {
    pub const VALUES: PublishedReference = PublishedReference {
        ols_rejection_rate: 0.183,
        semiparametric_rejection_rate: 1.0,
        ols_avg_ci_length: 0.1781,
        semiparametric_avg_ci_length: 0.0439,
    };
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerReport {
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub error_law: String,
    pub design: DesignParams,
    pub truth_acme0: f64,
    pub methods: Vec<PowerMethodSummary>,
    pub published_reference: PublishedReference,
}

impl PowerReport {
    pub fn method(&self, method: Method) -> Option<&PowerMethodSummary> {
        self.methods.iter().find(|m| m.method == method.label())
    }
}

pub fn run_power_study(config: &ScenarioConfig) -> Result<PowerReport> {
    run_power_study_with(config, &RunOptions::default())
}

pub fn run_power_study_with(config: &ScenarioConfig, options: &RunOptions) -> Result<PowerReport> {
    let replicates = run_replicates(config, options)?;
    let truth = config.truth()[0];
    let methods = METHODS
        .iter()
        .map(|&method| {
            let (mut k, mut rejected, mut sum, mut len) = (0usize, 0usize, 0.0, 0.0);
            for e in replicates.iter().filter_map(|r| r.estimates(method)) {
                k += 1;
                if !e.covers(0, 0.0) {
                    rejected += 1;
                }
                sum += e.values[0];
                len += e.ci_length(0);
            }
            let kf = k as f64;
            PowerMethodSummary {
                method: method.label().into(),
                rejection_rate: rejected as f64 / kf,
                mean_estimate: sum / kf,
                avg_ci_length: len / kf,
                success_rate: kf / config.reps as f64,
                reps_used: k,
            }
        })
        .collect();
    Ok(PowerReport {
        n: config.n,
        reps: config.reps,
        seed: config.seed,
        error_law: config.name.clone(),
        design: config.design.params(),
        truth_acme0: truth,
        methods,
        published_reference: PublishedReference::VALUES,
    })
}
