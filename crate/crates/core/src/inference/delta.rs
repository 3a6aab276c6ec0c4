use nalgebra::DMatrix;

use super::effects::EffectKind;
use crate::error::{Error, Result};
use crate::linalg;

/// Two-sided 95% standard-normal quantile.
pub const Z_975: f64 = 1.959963985;

/// Variances below this are treated as a broken upstream covariance.
const NEGATIVE_VARIANCE_TOL: f64 = -1e-12;

/// Effect estimates with delta-method covariance and Wald intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectEstimates {
    pub kind: EffectKind,
    pub values: Vec<f64>,
    /// Effects × dim(ϑ).
    pub jacobian_g: DMatrix<f64>,
    /// `GΣ_ϑGᵀ`.
    pub cov: DMatrix<f64>,
    pub std_errors: Vec<f64>,
    pub ci_lower: Vec<f64>,
    pub ci_upper: Vec<f64>,
    /// Covariate mean used for `μ_M(t)`; empty without covariates.
    pub xbar: Vec<f64>,
}

impl EffectEstimates {
    pub fn names(&self) -> &'static [&'static str] {
        self.kind.effect_names()
    }

    pub fn ci_length(&self, i: usize) -> f64 {
        self.ci_upper[i] - self.ci_lower[i]
    }

    /// Value of the named effect, if present.
    pub fn get(&self, name: &str) -> Option<f64> {
        self.names()
            .iter()
            .position(|n| *n == name)
            .map(|i| self.values[i])
    }

    /// Largest violation of `τ = δ(1)+ζ(0) = δ(0)+ζ(1)`.
    pub fn decomposition_gap(&self) -> f64 {
        let v = &self.values;
        match self.kind {
            EffectKind::NoInteraction => (v[2] - (v[0] + v[1])).abs(),
            EffectKind::Interaction => (v[4] - (v[1] + v[2]))
                .abs()
                .max((v[4] - (v[0] + v[3])).abs()),
        }
    }

    pub fn covers(&self, i: usize, truth: f64) -> bool {
        self.ci_lower[i] <= truth && truth <= self.ci_upper[i]
    }
}

/// Propagates `cov_theta` through `jacobian_g` and builds 95% Wald intervals.
pub fn delta_intervals(
    kind: EffectKind,
    values: Vec<f64>,
    jacobian_g: DMatrix<f64>,
    cov_theta: &DMatrix<f64>,
    xbar: Vec<f64>,
) -> Result<EffectEstimates> {
    if jacobian_g.nrows() != values.len()
        || jacobian_g.ncols() != cov_theta.nrows()
        || !cov_theta.is_square()
    {
        return Err(Error::Dimension(format!(
            "{} values, G is {:?}, Σ is {:?}",
            values.len(),
            jacobian_g.shape(),
            cov_theta.shape()
        )));
    }
    let cov = linalg::symmetrize(&(&jacobian_g * cov_theta * jacobian_g.transpose()));
    let mut std_errors = Vec::with_capacity(values.len());
    for i in 0..values.len() {
        let var = cov[(i, i)];
        if !(var >= NEGATIVE_VARIANCE_TOL) {
            return Err(Error::NegativeVariance {
                index: i,
                value: var,
            });
        }
        std_errors.push(var.max(0.0).sqrt());
    }
    let ci_lower = values
        .iter()
        .zip(&std_errors)
        .map(|(v, s)| v - Z_975 * s)
        .collect();
    let ci_upper = values
        .iter()
        .zip(&std_errors)
        .map(|(v, s)| v + Z_975 * s)
        .collect();
    Ok(EffectEstimates {
        kind,
        values,
        jacobian_g,
        cov,
        std_errors,
        ci_lower,
        ci_upper,
        xbar,
    })
}
