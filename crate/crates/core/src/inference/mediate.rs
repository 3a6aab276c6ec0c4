use serde::{Deserialize, Serialize};

use super::delta::{delta_intervals, EffectEstimates};
use super::effects::{
    effect_map_g0, effect_map_g1, embed_g0, embed_g1, jacobian_g0, jacobian_g1, EffectKind,
    InteractionParams,
};
use super::stack::{stack_fits, StackedFit};
use crate::data::{build_design, ColumnRole, Dataset, ModelSpec};
use crate::error::{Error, Result};
use crate::estimators::{
    fit_ols, fit_semiparametric, Method, RegressionFit, SemiparametricOutcome,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    Ols,
    Semiparametric,
    Both,
}

impl MethodChoice {
    pub fn methods(self) -> Vec<Method> {
        match self {
            MethodChoice::Ols => vec![Method::Ols],
            MethodChoice::Semiparametric => vec![Method::Semiparametric],
            MethodChoice::Both => vec![Method::Ols, Method::Semiparametric],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MediationRequest {
    pub treatment: String,
    pub mediator: String,
    pub outcome: String,
    pub covariates: Vec<String>,
    pub interaction: bool,
    pub method: MethodChoice,
}

impl MediationRequest {
    pub fn new(treatment: &str, mediator: &str, outcome: &str) -> Self {
        MediationRequest {
            treatment: treatment.into(),
            mediator: mediator.into(),
            outcome: outcome.into(),
            covariates: Vec::new(),
            interaction: false,
            method: MethodChoice::Both,
        }
    }

    pub fn covariates(mut self, covariates: &[&str]) -> Self {
        self.covariates = covariates.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn interaction(mut self, interaction: bool) -> Self {
        self.interaction = interaction;
        self
    }

    pub fn method(mut self, method: MethodChoice) -> Self {
        self.method = method;
        self
    }

    pub fn mediator_spec(&self) -> ModelSpec {
        ModelSpec::mediator_model(&self.mediator, &self.treatment, &self.covariates)
    }

    pub fn outcome_spec(&self) -> ModelSpec {
        ModelSpec::outcome_model(
            &self.outcome,
            &self.treatment,
            &self.mediator,
            &self.covariates,
            self.interaction,
        )
    }

    pub fn kind(&self) -> EffectKind {
        if self.interaction {
            EffectKind::Interaction
        } else {
            EffectKind::NoInteraction
        }
    }

    /// All columns the analysis reads.
    pub fn referenced_columns(&self) -> Vec<&str> {
        let mut cols = vec![
            self.treatment.as_str(),
            self.mediator.as_str(),
            self.outcome.as_str(),
        ];
        cols.extend(self.covariates.iter().map(String::as_str));
        cols
    }
}

/// Successful estimation for one method.
#[derive(Debug, Clone)]
pub struct MethodEstimate {
    pub effects: EffectEstimates,
    pub mediator_fit: RegressionFit,
    pub outcome_fit: RegressionFit,
    pub stacked: StackedFit,
    /// p-value of the interaction coefficient: classical t-test for OLS,
    /// sandwich Wald test for the semiparametric fit.
    pub interaction_p_value: Option<f64>,
}

#[derive(Debug, Clone)]
pub enum MethodOutcome {
    Estimated(Box<MethodEstimate>),
    /// Numerical-failure flag; one reason list per model (empty when that
    /// model's fit was accepted).
    Failed {
        mediator_reasons: Vec<String>,
        outcome_reasons: Vec<String>,
    },
}

#[derive(Debug, Clone)]
pub struct MethodResult {
    pub method: Method,
    pub outcome: MethodOutcome,
}

impl MethodResult {
    pub fn estimate(&self) -> Option<&MethodEstimate> {
        match &self.outcome {
            MethodOutcome::Estimated(e) => Some(e),
            MethodOutcome::Failed { .. } => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MediationResult {
    pub kind: EffectKind,
    pub n: usize,
    pub xbar: Vec<f64>,
    pub methods: Vec<MethodResult>,
}

impl MediationResult {
    pub fn get(&self, method: Method) -> Option<&MethodResult> {
        self.methods.iter().find(|m| m.method == method)
    }

    pub fn effects(&self, method: Method) -> Option<&EffectEstimates> {
        self.get(method)
            .and_then(MethodResult::estimate)
            .map(|e| &e.effects)
    }

    pub fn any_failed(&self) -> bool {
        self.methods
            .iter()
            .any(|m| matches!(m.outcome, MethodOutcome::Failed { .. }))
    }
}

/// Applies the matching effect map to a stacked fit and runs the delta method.
pub fn effects_from_stack(
    stacked: &StackedFit,
    kind: EffectKind,
    xbar: &[f64],
) -> Result<EffectEstimates> {
    let t = &stacked.theta;
    let map = &stacked.index_map;
    let dim = stacked.dim();
    match kind {
        EffectKind::NoInteraction => {
            let (b2, b3, g) = (t[map.beta2], t[map.beta3], t[map.gamma]);
            let values = effect_map_g0(b2, b3, g).to_vec();
            let jac = embed_g0(&jacobian_g0(b2, b3, g), map, dim);
            delta_intervals(kind, values, jac, &stacked.cov, xbar.to_vec())
        }
        EffectKind::Interaction => {
            let eta = map.eta.ok_or_else(|| {
                Error::InvalidSpec("outcome model has no interaction column".into())
            })?;
            let params = InteractionParams {
                alpha2: t[map.alpha2],
                beta2: t[map.beta2],
                xi2: map.xi2.iter().map(|&i| t[i]).collect(),
                beta3: t[map.beta3],
                gamma: t[map.gamma],
                eta: t[eta],
            };
            let values = effect_map_g1(&params, xbar)?.to_vec();
            let jac = embed_g1(&jacobian_g1(&params, xbar)?, map, dim)?;
            delta_intervals(kind, values, jac, &stacked.cov, xbar.to_vec())
        }
    }
}

fn interaction_p_value(fit: &RegressionFit) -> Result<Option<f64>> {
    let Some(j) = fit.design().index_of(ColumnRole::Interaction) else {
        return Ok(None);
    };
    match fit.method {
        Method::Ols => fit.classical_p_value(j).map(Some),
        Method::Semiparametric => Ok(Some(fit.wald_p_value(j))),
    }
}

fn semiparametric_fit(
    design: &crate::data::DesignMatrix,
    y: &[f64],
) -> Result<std::result::Result<RegressionFit, Vec<String>>> {
    Ok(match fit_semiparametric(design, y)? {
        SemiparametricOutcome::Accepted(fit) => Ok(*fit),
        SemiparametricOutcome::Failed { reasons } => Err(reasons),
    })
}

/// Fits the mediator and outcome models with each requested method, stacks
/// them, and returns the mediation effects with 95% intervals.
pub fn mediate(dataset: &Dataset, request: &MediationRequest) -> Result<MediationResult> {
    let med_spec = request.mediator_spec();
    let out_spec = request.outcome_spec();
    let med_design = build_design(dataset, &med_spec)?;
    let out_design = build_design(dataset, &out_spec)?;
    let m = med_spec.response_values(dataset)?;
    let y = out_spec.response_values(dataset)?;
    let xbar = dataset.column_means(&request.covariates)?;
    let kind = request.kind();

    let mut methods = Vec::new();
    for method in request.method.methods() {
        let fits = match method {
            Method::Ols => Ok((fit_ols(&med_design, &m)?, fit_ols(&out_design, &y)?)),
            Method::Semiparametric => {
                let med = semiparametric_fit(&med_design, &m)?;
                let out = semiparametric_fit(&out_design, &y)?;
                match (med, out) {
                    (Ok(a), Ok(b)) => Ok((a, b)),
                    (a, b) => Err((a.err().unwrap_or_default(), b.err().unwrap_or_default())),
                }
            }
        };
        let outcome = match fits {
            Ok((mediator_fit, outcome_fit)) => {
                let stacked = stack_fits(&mediator_fit, &outcome_fit)?;
                let effects = effects_from_stack(&stacked, kind, &xbar)?;
                let interaction_p_value = interaction_p_value(&outcome_fit)?;
                MethodOutcome::Estimated(Box::new(MethodEstimate {
                    effects,
                    mediator_fit,
                    outcome_fit,
                    stacked,
                    interaction_p_value,
                }))
            }
            Err((mediator_reasons, outcome_reasons)) => MethodOutcome::Failed {
                mediator_reasons,
                outcome_reasons,
            },
        };
        methods.push(MethodResult { method, outcome });
    }
    Ok(MediationResult {
        kind,
        n: dataset.n(),
        xbar,
        methods,
    })
}
