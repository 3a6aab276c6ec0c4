//! Deterministic start set and the plausibility screen for converged roots.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::ParameterPoint;
use crate::linalg::RCOND_MIN;

/// Five starting points built from the OLS solution, tried in order.
#[derive(Debug, Clone, PartialEq)]
pub struct StartSet {
    pub starts: Vec<ParameterPoint>,
    /// Per-coefficient perturbation `d_j`.
    pub d: Vec<f64>,
    /// Alternating signs `(1, −1, 1, …)`.
    pub s: Vec<f64>,
}

/// `d_j = max{0.05, 0.1·max(1, |β̃_j|)}` and the starts
/// `(β̃), (β̃+d), (β̃−d), (β̃+s∘d), (β̃−s∘d)`, all with `σ̃²`.
pub fn make_starts(ols: &ParameterPoint) -> StartSet {
    let beta = &ols.beta;
    let d: Vec<f64> = beta
        .iter()
        .map(|b| f64::max(0.05, 0.1 * b.abs().max(1.0)))
        .collect();
    let s: Vec<f64> = (0..beta.len())
        .map(|j| if j % 2 == 0 { 1.0 } else { -1.0 })
        .collect();
    let shifted = |sign: f64, alternate: bool| {
        let b = beta
            .iter()
            .zip(&d)
            .zip(&s)
            .map(|((b, d), s)| b + sign * if alternate { s * d } else { *d })
            .collect();
        ParameterPoint::new(b, ols.sigma2)
    };
    let starts = vec![
        ols.clone(),
        shifted(1.0, false),
        shifted(-1.0, false),
        shifted(1.0, true),
        shifted(-1.0, true),
    ];
    StartSet { starts, d, s }
}

/// Thresholds for discarding implausible roots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScreeningRule {
    pub rcond_min: f64,
    pub sigma2_max_ratio: f64,
    pub coef_abs_max: f64,
    /// Maximum `|β_j − β̃_j| / max(1, |β̃_j|)`.
    pub coef_ols_dev_max: f64,
}

impl Default for ScreeningRule {
    fn default() -> Self {
        ScreeningRule {
            rcond_min: RCOND_MIN,
            sigma2_max_ratio: 25.0,
            coef_abs_max: 100.0,
            coef_ols_dev_max: 15.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScreenOutcome {
    Accept,
    Reject(String),
}

impl ScreenOutcome {
    pub fn is_accept(&self) -> bool {
        matches!(self, ScreenOutcome::Accept)
    }
}

/// Checks a converged root against the OLS reference. Returns the first
/// violated rule.
pub fn screen_root(
    candidate: &ParameterPoint,
    cov: &DMatrix<f64>,
    jacobian_rcond: f64,
    ols: &ParameterPoint,
    rule: &ScreeningRule,
) -> ScreenOutcome {
    let reject = |r: &str| ScreenOutcome::Reject(r.to_string());
    if candidate.beta.iter().any(|b| !b.is_finite()) {
        return reject("non-finite coefficient");
    }
    if !(candidate.sigma2 > 0.0) {
        return reject("non-positive variance");
    }
    if candidate.sigma2 > rule.sigma2_max_ratio * ols.sigma2 {
        return reject("variance ratio");
    }
    if candidate.beta.iter().any(|b| b.abs() > rule.coef_abs_max) {
        return reject("coefficient magnitude");
    }
    if candidate
        .beta
        .iter()
        .zip(&ols.beta)
        .any(|(b, o)| (b - o).abs() > rule.coef_ols_dev_max * o.abs().max(1.0))
    {
        return reject("deviation from OLS");
    }
    if cov.iter().any(|v| !v.is_finite()) {
        return reject("non-finite covariance");
    }
    if !(jacobian_rcond > rule.rcond_min) {
        return reject("ill-conditioned Jacobian");
    }
    ScreenOutcome::Accept
}
