//! Adaptive semiparametric regression fit.
//!
//! With residuals `e_i = y_i − x_iᵀβ` and the centered kernel score `ŝ`, the
//! estimating-function rows are
//!
//! - intercept: `e_i` (mean-zero errors pin the location),
//! - every other coefficient `j`: `(x_ij − x̄_j)·ŝ(e_i)`,
//! - variance: `e_i² − σ²`.
//!
//! The score is re-estimated from the current residuals at every evaluation,
//! so the whole system is implicit in `(β, σ²)` and is solved jointly by
//! damped Newton from each of the five deterministic starts.
//!
//! Centering the regressor leaves the column sums equal to `Σ x_ij·ŝ(e_i)`,
//! so roots and `A` are unaffected, but the per-row values then track the
//! influence of each observation and `B` is not inflated by `x̄_j²·E[ŝ²]`.

use nalgebra::{DMatrix, DVector};

use super::multistart::{make_starts, screen_root, ScreenOutcome, ScreeningRule};
use super::newton::{newton_root, NewtonOptions};
use super::score::{scores_at_residuals, silverman_bandwidth, MIN_RESIDUALS};
use super::{
    fit_ols, FitDiagnostics, Method, ParameterPoint, RegressionFit, SemiparametricOutcome, A_STEP,
};
use crate::data::DesignMatrix;
use crate::error::{Error, Result};
use crate::linalg;

/// Default trust-region cap for the semiparametric Newton runs.
pub const MAX_REL_STEP: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiparametricOptions {
    pub newton: NewtonOptions,
    pub screening: ScreeningRule,
    /// Fixed kernel bandwidth; `None` re-estimates Silverman's rule from the
    /// current residuals.
    pub bandwidth: Option<f64>,
    /// Diagnostic only: when the sample Jacobian is near-singular, use its
    /// pseudo-inverse for the covariance instead of rejecting the root.
    pub pseudo_inverse_fallback: bool,
}

impl Default for SemiparametricOptions {
    fn default() -> Self {
        SemiparametricOptions {
            newton: NewtonOptions {
                max_rel_step: Some(MAX_REL_STEP),
                ..NewtonOptions::default()
            },
            screening: ScreeningRule::default(),
            bandwidth: None,
            pseudo_inverse_fallback: false,
        }
    }
}

fn residuals(design: &DesignMatrix, response: &[f64], point: &ParameterPoint) -> Result<Vec<f64>> {
    if point.beta.len() != design.p() || response.len() != design.n() {
        return Err(Error::Dimension(format!(
            "design is {}×{}, got {} coefficients and {} responses",
            design.n(),
            design.p(),
            point.beta.len(),
            response.len()
        )));
    }
    let beta = DVector::from_column_slice(&point.beta);
    let fitted = design.values() * beta;
    Ok(response
        .iter()
        .zip(fitted.iter())
        .map(|(y, f)| y - f)
        .collect())
}

fn assemble(design: &DesignMatrix, resid: &[f64], scores: &[f64], sigma2: f64) -> DMatrix<f64> {
    let (n, p) = (design.n(), design.p());
    let mean_score = scores.iter().sum::<f64>() / n as f64;
    let x = design.values();
    let xbar: Vec<f64> = (0..p).map(|j| x.column(j).mean()).collect();
    DMatrix::from_fn(n, p + 1, |i, j| {
        if j == 0 {
            resid[i]
        } else if j < p {
            (x[(i, j)] - xbar[j]) * (scores[i] - mean_score)
        } else {
            resid[i] * resid[i] - sigma2
        }
    })
}

/// Ψ rows at `point` with the score re-estimated from its residuals.
pub fn semiparam_psi(
    design: &DesignMatrix,
    response: &[f64],
    point: &ParameterPoint,
) -> Result<DMatrix<f64>> {
    let resid = residuals(design, response, point)?;
    if resid.len() < MIN_RESIDUALS {
        return Err(Error::TooFewObservations {
            n: resid.len(),
            p: design.p(),
            required: MIN_RESIDUALS,
        });
    }
    if resid.iter().any(|e| !e.is_finite()) {
        return Err(Error::Malformed("non-finite residual".into()));
    }
    let h = silverman_bandwidth(&resid);
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::ZeroVariance);
    }
    let scores = scores_at_residuals(&resid, h);
    Ok(assemble(design, &resid, &scores, point.sigma2))
}

/// Ψ rows with the score estimated at a fixed kernel bandwidth.
pub fn semiparam_psi_with_bandwidth(
    design: &DesignMatrix,
    response: &[f64],
    point: &ParameterPoint,
    bandwidth: f64,
) -> Result<DMatrix<f64>> {
    let resid = residuals(design, response, point)?;
    if resid.len() < MIN_RESIDUALS {
        return Err(Error::TooFewObservations {
            n: resid.len(),
            p: design.p(),
            required: MIN_RESIDUALS,
        });
    }
    if !(bandwidth > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let scores = scores_at_residuals(&resid, bandwidth);
    Ok(assemble(design, &resid, &scores, point.sigma2))
}

pub fn fit_semiparametric(
    design: &DesignMatrix,
    response: &[f64],
) -> Result<SemiparametricOutcome> {
    fit_semiparametric_with(design, response, &SemiparametricOptions::default())
}

pub fn fit_semiparametric_with(
    design: &DesignMatrix,
    response: &[f64],
    opts: &SemiparametricOptions,
) -> Result<SemiparametricOutcome> {
    let (n, p) = (design.n(), design.p());
    if n < p + MIN_RESIDUALS {
        return Err(Error::TooFewObservations {
            n,
            p,
            required: p + MIN_RESIDUALS,
        });
    }
    let ols = fit_ols(design, response)?;
    let starts = make_starts(&ols.params);

    let psi = |theta: &DVector<f64>| -> Result<DMatrix<f64>> {
        let point = ParameterPoint::from_vector(theta);
        match opts.bandwidth {
            Some(h) => semiparam_psi_with_bandwidth(design, response, &point, h),
            None => semiparam_psi(design, response, &point),
        }
    };
    let mean_psi = |theta: &DVector<f64>| psi(theta).map(|m| linalg::column_means(&m));

    let mut reasons = Vec::with_capacity(starts.starts.len());
    for (idx, start) in starts.starts.iter().enumerate() {
        let solved = match newton_root(mean_psi, &start.to_vector(), &opts.newton) {
            Ok(r) => r,
            Err(fail) => {
                reasons.push(format!("start {idx}: {fail}"));
                continue;
            }
        };
        let point = ParameterPoint::from_vector(&solved.root);
        let psi_values = match psi(&solved.root) {
            Ok(v) => v,
            Err(e) => {
                reasons.push(format!("start {idx}: {e}"));
                continue;
            }
        };
        let a = match linalg::central_jacobian(mean_psi, &solved.root, A_STEP) {
            Ok(a) => a,
            Err(e) => {
                reasons.push(format!("start {idx}: {e}"));
                continue;
            }
        };
        let rcond = linalg::rcond(&a);
        let b = linalg::mean_outer(&psi_values);
        let cov = match linalg::sandwich(&a, &b, n) {
            Ok(c) => c,
            Err(_) if opts.pseudo_inverse_fallback => pinv_sandwich(&a, &b, n),
            Err(_) => DMatrix::from_element(p + 1, p + 1, f64::NAN),
        };
        let mut rule = opts.screening;
        if opts.pseudo_inverse_fallback {
            rule.rcond_min = 0.0;
        }
        match screen_root(&point, &cov, rcond, &ols.params, &rule) {
            ScreenOutcome::Accept => {
                let diagnostics = FitDiagnostics {
                    start_index_used: Some(idx),
                    iterations: solved.iterations,
                    residual_norm: linalg::inf_norm(&linalg::column_means(&psi_values)),
                    rcond,
                    screened_reasons: reasons,
                };
                return Ok(SemiparametricOutcome::Accepted(Box::new(RegressionFit {
                    params: point,
                    method: Method::Semiparametric,
                    psi_values,
                    jacobian_a: a,
                    cov,
                    diagnostics,
                    design: design.clone(),
                    response: response.to_vec(),
                    bandwidth: opts.bandwidth,
                })));
            }
            ScreenOutcome::Reject(why) => reasons.push(format!("start {idx}: rejected ({why})")),
        }
    }
    Ok(SemiparametricOutcome::Failed { reasons })
}

fn pinv_sandwich(a: &DMatrix<f64>, b: &DMatrix<f64>, n: usize) -> DMatrix<f64> {
    let k = a.nrows();
    match a.clone().pseudo_inverse(1e-12) {
        Ok(ai) => linalg::symmetrize(&(&ai * b * ai.transpose() / n as f64)),
        Err(_) => DMatrix::from_element(k, k, f64::NAN),
    }
}
