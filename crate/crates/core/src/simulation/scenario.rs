//! Monte Carlo scorecard.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dgp::{generate_interaction_dataset, ScenarioConfig};
use crate::error::{Error, Result};
use crate::estimators::Method;
use crate::inference::{
    mediate, EffectEstimates, EffectKind, MediationRequest, MethodChoice, MethodOutcome,
};

/// Success rates below this mark a scenario as pervasively failing.
pub const FAILURE_FLAG_RATE: f64 = 0.5;

pub(crate) const METHODS: [Method; 2] = [Method::Ols, Method::Semiparametric];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct ReplicateMethod {
    pub method: Method,
    /// `Err` carries the failure reasons.
    pub estimates: std::result::Result<EffectEstimates, Vec<String>>,
}

#[derive(Debug, Clone)]
pub struct ReplicateResult {
    pub replicate_index: usize,
    pub rng_stream_id: u64,
    pub methods: Vec<ReplicateMethod>,
}

impl ReplicateResult {
    pub fn estimates(&self, method: Method) -> Option<&EffectEstimates> {
        self.methods
            .iter()
            .find(|m| m.method == method)
            .and_then(|m| m.estimates.as_ref().ok())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub scenario: String,
    pub method: String,
    pub effect: String,
    pub bias: f64,
    pub rmse: f64,
    pub coverage: f64,
    pub avg_length: f64,
    pub success_rate: f64,
    pub reps_used: usize,
}

#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub config: ScenarioConfig,
    pub truth: [f64; 5],
    pub replicates: Vec<ReplicateResult>,
    pub metrics: Vec<MetricsRow>,
    pub warnings: Vec<String>,
}

impl ScenarioRun {
    pub fn row(&self, method: Method, effect: &str) -> Option<&MetricsRow> {
        self.metrics
            .iter()
            .find(|r| r.method == method.label() && r.effect == effect)
    }
}

/// Generates and analyzes one replicate with both methods.
pub fn run_replicate(config: &ScenarioConfig, replicate_index: usize) -> ReplicateResult {
    let stream = replicate_index as u64;
    let request = MediationRequest::new("T", "M", "Y")
        .interaction(true)
        .method(MethodChoice::Both);
    let analysis = generate_interaction_dataset(config, stream).and_then(|d| mediate(&d, &request));
    let methods = METHODS
        .iter()
        .map(|&method| {
            let estimates = match &analysis {
                Err(e) => Err(vec![e.to_string()]),
                Ok(result) => match result.get(method).map(|r| &r.outcome) {
                    Some(MethodOutcome::Estimated(est)) => Ok(est.effects.clone()),
                    Some(MethodOutcome::Failed {
                        mediator_reasons,
                        outcome_reasons,
                    }) => Err(mediator_reasons
                        .iter()
                        .map(|r| format!("mediator {r}"))
                        .chain(outcome_reasons.iter().map(|r| format!("outcome {r}")))
                        .collect()),
                    None => Err(vec!["method not run".into()]),
                },
            };
            ReplicateMethod { method, estimates }
        })
        .collect();
    ReplicateResult {
        replicate_index,
        rng_stream_id: stream,
        methods,
    }
}

/// Runs every replicate, in parallel when allowed, ordered by index.
pub fn run_replicates(
    config: &ScenarioConfig,
    options: &RunOptions,
) -> Result<Vec<ReplicateResult>> {
    config.validate()?;
    let work = || {
        (0..config.reps)
            .into_par_iter()
            .map(|i| run_replicate(config, i))
            .collect::<Vec<_>>()
    };
    match options.threads {
        None => Ok(work()),
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build()
                .map_err(|e| Error::InvalidSpec(format!("thread pool: {e}")))?;
            Ok(pool.install(work))
        }
    }
}

/// Per-(method, effect) metrics over successful replicates, summed in
/// replicate order.
pub fn aggregate(
    scenario: &str,
    truth: &[f64; 5],
    replicates: &[ReplicateResult],
) -> Vec<MetricsRow> {
    let reps = replicates.len();
    let mut rows = Vec::new();
    for method in METHODS {
        let used: Vec<&EffectEstimates> = replicates
            .iter()
            .filter_map(|r| r.estimates(method))
            .collect();
        let k = used.len() as f64;
        for (j, name) in EffectKind::Interaction.effect_names().iter().enumerate() {
            let (mut sum, mut sq, mut covered, mut len) = (0.0, 0.0, 0.0, 0.0);
            for e in &used {
                let d = e.values[j] - truth[j];
                sum += e.values[j];
                sq += d * d;
                if e.covers(j, truth[j]) {
                    covered += 1.0;
                }
                len += e.ci_upper[j] - e.ci_lower[j];
            }
            rows.push(MetricsRow {
                scenario: scenario.to_string(),
                method: method.label().to_string(),
                effect: name.to_string(),
                bias: sum / k - truth[j],
                rmse: (sq / k).sqrt(),
                coverage: covered / k,
                avg_length: len / k,
                success_rate: k / reps as f64,
                reps_used: used.len(),
            });
        }
    }
    rows
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioRun> {
    run_scenario_with(config, &RunOptions::default())
}

pub fn run_scenario_with(config: &ScenarioConfig, options: &RunOptions) -> Result<ScenarioRun> {
    let replicates = run_replicates(config, options)?;
    let truth = config.truth();
    let metrics = aggregate(&config.name, &truth, &replicates);
    let mut warnings = Vec::new();
    for method in METHODS {
        let rate = metrics
            .iter()
            .find(|r| r.method == method.label())
            .map_or(0.0, |r| r.success_rate);
        if rate < FAILURE_FLAG_RATE {
            warnings.push(format!(
                "{}: {} success rate {rate} is below {FAILURE_FLAG_RATE}",
                config.name, method
            ));
        }
    }
    Ok(ScenarioRun {
        config: config.clone(),
        truth,
        replicates,
        metrics,
        warnings,
    })
}

pub fn write_metrics_csv<W: Write>(rows: &[MetricsRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io("metrics output", e))?;
    Ok(())
}

/// One line per (replicate, method, effect); failed fits leave the numeric
/// cells empty.
pub fn write_replicate_log<W: Write>(replicates: &[ReplicateResult], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "replicate",
        "method",
        "effect",
        "estimate",
        "ci_lo",
        "ci_hi",
        "success",
    ])?;
    for r in replicates {
        for m in &r.methods {
            for (j, name) in EffectKind::Interaction.effect_names().iter().enumerate() {
                let idx = r.replicate_index.to_string();
                let record = match &m.estimates {
                    Ok(e) => [
                        idx,
                        m.method.label().into(),
                        name.to_string(),
                        e.values[j].to_string(),
                        e.ci_lower[j].to_string(),
                        e.ci_upper[j].to_string(),
                        "true".into(),
                    ],
                    Err(_) => [
                        idx,
                        m.method.label().into(),
                        name.to_string(),
                        String::new(),
                        String::new(),
                        String::new(),
                        "false".into(),
                    ],
                };
                w.write_record(&record)?;
            }
        }
    }
    w.flush().map_err(|e| Error::io("replicate log", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulation::ErrorLaw;

    #[test]
    fn single_replicate_metrics() {
        let cfg = ScenarioConfig::main(ErrorLaw::Gaussian, 100, 1, 11);
        let run = run_scenario(&cfg).unwrap();
        assert_eq!(run.metrics.len(), 10);
        let est = run.replicates[0].estimates(Method::Ols).unwrap();
        for (j, row) in run.metrics.iter().take(5).enumerate() {
            assert_eq!(row.bias, est.values[j] - run.truth[j]);
            assert!(row.coverage == 0.0 || row.coverage == 1.0);
            assert!(row.rmse >= row.bias.abs() * (1.0 - 1e-12));
        }
    }
}
