//! JSON report for a mediation analysis.

use serde::{Deserialize, Serialize};

use crate::estimators::{FitDiagnostics, RegressionFit};
use crate::inference::{EffectEstimates, MediationResult, MethodOutcome};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub command: String,
    pub version: String,
    /// Seed of randomized commands; `None` for deterministic analyses.
    pub seed: Option<u64>,
    pub generated_unix_seconds: u64,
    pub data_path: Option<String>,
    pub rows_used: Option<usize>,
    pub rows_dropped: Option<usize>,
}

impl Metadata {
    pub fn new(command: &str, seed: Option<u64>) -> Self {
        Metadata {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed,
            generated_unix_seconds: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            data_path: None,
            rows_used: None,
            rows_dropped: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDescription {
    pub treatment: String,
    pub mediator: String,
    pub outcome: String,
    pub covariates: Vec<String>,
    pub interaction: bool,
    pub outcome_scale: f64,
    pub covariate_means: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectRow {
    pub effect: String,
    pub estimate: f64,
    pub std_error: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
    pub length: f64,
}

impl EffectRow {
    pub fn rows(e: &EffectEstimates) -> Vec<EffectRow> {
        e.names()
            .iter()
            .enumerate()
            .map(|(i, name)| EffectRow {
                effect: name.to_string(),
                estimate: e.values[i],
                std_error: e.std_errors[i],
                ci_lower: e.ci_lower[i],
                ci_upper: e.ci_upper[i],
                length: e.ci_length(i),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDiagnostics {
    pub coefficients: Vec<Coefficient>,
    pub sigma2: f64,
    #[serde(flatten)]
    pub fit: FitDiagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub name: String,
    pub estimate: f64,
    pub std_error: f64,
}

impl ModelDiagnostics {
    pub fn from_fit(fit: &RegressionFit) -> Self {
        let coefficients = fit
            .design()
            .column_names()
            .iter()
            .enumerate()
            .map(|(j, name)| Coefficient {
                name: name.clone(),
                estimate: fit.params.beta[j],
                std_error: fit.std_error(j),
            })
            .collect();
        ModelDiagnostics {
            coefficients,
            sigma2: fit.params.sigma2,
            fit: fit.diagnostics.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodStatus {
    Ok,
    NumericalFailure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodReport {
    pub method: String,
    pub status: MethodStatus,
    pub effects: Vec<EffectRow>,
    pub interaction_p_value: Option<f64>,
    pub mediator_model: Option<ModelDiagnostics>,
    pub outcome_model: Option<ModelDiagnostics>,
    pub mediator_failure_reasons: Vec<String>,
    pub outcome_failure_reasons: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub metadata: Metadata,
    pub model: ModelDescription,
    pub methods: Vec<MethodReport>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn method(&self, label: &str) -> Option<&MethodReport> {
        self.methods.iter().find(|m| m.method == label)
    }

    pub fn from_result(
        metadata: Metadata,
        model: ModelDescription,
        result: &MediationResult,
    ) -> Self {
        let mut warnings = Vec::new();
        let methods = result
            .methods
            .iter()
            .map(|m| match &m.outcome {
                MethodOutcome::Estimated(est) => MethodReport {
                    method: m.method.label().into(),
                    status: MethodStatus::Ok,
                    effects: EffectRow::rows(&est.effects),
                    interaction_p_value: est.interaction_p_value,
                    mediator_model: Some(ModelDiagnostics::from_fit(&est.mediator_fit)),
                    outcome_model: Some(ModelDiagnostics::from_fit(&est.outcome_fit)),
                    mediator_failure_reasons: Vec::new(),
                    outcome_failure_reasons: Vec::new(),
                },
                MethodOutcome::Failed {
                    mediator_reasons,
                    outcome_reasons,
                } => {
                    warnings.push(format!(
                        "{} fit flagged as a numerical failure; no effects reported",
                        m.method
                    ));
                    MethodReport {
                        method: m.method.label().into(),
                        status: MethodStatus::NumericalFailure,
                        effects: Vec::new(),
                        interaction_p_value: None,
                        mediator_model: None,
                        outcome_model: None,
                        mediator_failure_reasons: mediator_reasons.clone(),
                        outcome_failure_reasons: outcome_reasons.clone(),
                    }
                }
            })
            .collect();
        if metadata.rows_dropped.is_some_and(|d| d > 0) {
            warnings.push(format!(
                "{} row(s) dropped for missing values",
                metadata.rows_dropped.unwrap_or(0)
            ));
        }
        Report {
            schema_version: SCHEMA_VERSION,
            metadata,
            model,
            methods,
            warnings,
        }
    }
}
