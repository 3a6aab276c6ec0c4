//! Single-model estimators: OLS and the multi-start semiparametric fit.
//!
//! Both estimators are expressed as estimating equations over the joint
//! parameter `(β, σ²)`, so every fit carries its per-observation Ψ rows, the
//! mean Ψ Jacobian `A` and the sandwich covariance `A⁻¹BA⁻ᵀ/n`.

mod multistart;
mod newton;
mod ols;
mod score;
mod semiparametric;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::data::DesignMatrix;
use crate::error::{Error, Result};

pub use multistart::{make_starts, screen_root, ScreenOutcome, ScreeningRule, StartSet};
pub use newton::{newton_root, NewtonFailure, NewtonOptions, NewtonResult};
pub use ols::{fit_ols, ols_psi};
pub use score::{
    estimate_score, estimate_score_with_bandwidth, silverman_bandwidth, ScoreEstimate,
};
pub use semiparametric::{
    fit_semiparametric, fit_semiparametric_with, semiparam_psi, semiparam_psi_with_bandwidth,
    SemiparametricOptions, MAX_REL_STEP,
};

/// Relative step for the central-difference `A` matrix.
pub(crate) const A_STEP: f64 = 1e-5;

/// θ = (β, σ²).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterPoint {
    pub beta: Vec<f64>,
    pub sigma2: f64,
}

impl ParameterPoint {
    pub fn new(beta: Vec<f64>, sigma2: f64) -> Self {
        ParameterPoint { beta, sigma2 }
    }

    /// Stacks `(β, σ²)` into one vector.
    pub fn to_vector(&self) -> DVector<f64> {
        DVector::from_iterator(
            self.beta.len() + 1,
            self.beta
                .iter()
                .copied()
                .chain(std::iter::once(self.sigma2)),
        )
    }

    pub fn from_vector(v: &DVector<f64>) -> Self {
        let k = v.len();
        ParameterPoint {
            beta: v.rows(0, k - 1).iter().copied().collect(),
            sigma2: v[k - 1],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.sigma2.is_finite() && self.beta.iter().all(|b| b.is_finite())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Ols,
    Semiparametric,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Ols => "ols",
            Method::Semiparametric => "semiparametric",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FitDiagnostics {
    /// Index into the start set of the accepted root (always 0 for OLS).
    pub start_index_used: Option<usize>,
    pub iterations: usize,
    /// `‖mean Ψ‖∞` at the returned point.
    pub residual_norm: f64,
    /// Reciprocal condition number of `A`.
    pub rcond: f64,
    /// One entry per rejected start, in search order.
    pub screened_reasons: Vec<String>,
}

/// One fitted regression with everything needed for sandwich inference.
#[derive(Debug, Clone)]
pub struct RegressionFit {
    pub params: ParameterPoint,
    pub method: Method,
    /// n×(p+1) per-observation estimating-function rows at `params`.
    pub psi_values: DMatrix<f64>,
    /// (p+1)×(p+1) mean Jacobian of Ψ.
    pub jacobian_a: DMatrix<f64>,
    /// (p+1)×(p+1) sandwich covariance of `(β, σ²)`.
    pub cov: DMatrix<f64>,
    pub diagnostics: FitDiagnostics,
    design: DesignMatrix,
    response: Vec<f64>,
    bandwidth: Option<f64>,
}

impl RegressionFit {
    pub fn design(&self) -> &DesignMatrix {
        &self.design
    }

    pub fn response(&self) -> &[f64] {
        &self.response
    }

    pub fn n(&self) -> usize {
        self.design.n()
    }

    pub fn p(&self) -> usize {
        self.design.p()
    }

    /// Standard error of coefficient `j` from the sandwich covariance.
    pub fn std_error(&self, j: usize) -> f64 {
        self.cov[(j, j)].max(0.0).sqrt()
    }

    /// Two-sided Wald p-value for coefficient `j` using the sandwich
    /// standard error and the normal reference distribution.
    pub fn wald_p_value(&self, j: usize) -> f64 {
        use statrs::distribution::{ContinuousCDF, Normal};
        let z = self.params.beta[j] / self.std_error(j);
        let normal = Normal::standard();
        2.0 * (1.0 - normal.cdf(z.abs()))
    }

    /// Classical two-sided t-test p-value for coefficient `j` with the
    /// homoscedastic covariance `σ̂²(XᵀX)⁻¹` and `n − p` degrees of freedom.
    pub fn classical_p_value(&self, j: usize) -> Result<f64> {
        use statrs::distribution::{ContinuousCDF, StudentsT};
        let x = self.design.values();
        let n = self.n();
        let p = self.p();
        if n <= p {
            return Err(Error::TooFewObservations {
                n,
                p,
                required: p + 1,
            });
        }
        let xtx_inv = crate::linalg::checked_inverse(&x.tr_mul(x))?;
        let beta = DVector::from_column_slice(&self.params.beta);
        let resid = DVector::from_column_slice(&self.response) - x * beta;
        let s2 = resid.norm_squared() / (n - p) as f64;
        let se = (s2 * xtx_inv[(j, j)]).sqrt();
        let t = StudentsT::new(0.0, 1.0, (n - p) as f64)
            .map_err(|e| Error::Malformed(e.to_string()))?;
        Ok(2.0 * (1.0 - t.cdf((self.params.beta[j] / se).abs())))
    }

    /// Re-evaluates this fit's estimating function at another `(β, σ²)`.
    pub fn psi_at(&self, theta: &DVector<f64>) -> Result<DMatrix<f64>> {
        let point = ParameterPoint::from_vector(theta);
        match self.method {
            Method::Ols => Ok(ols_psi(&self.design, &self.response, &point)),
            Method::Semiparametric => match self.bandwidth {
                Some(h) => semiparametric::semiparam_psi_with_bandwidth(
                    &self.design,
                    &self.response,
                    &point,
                    h,
                ),
                None => semiparam_psi(&self.design, &self.response, &point),
            },
        }
    }
}

/// Result of the multi-start search: either an accepted fit or the
/// numerical-failure flag with one reason per start.
#[derive(Debug, Clone)]
pub enum SemiparametricOutcome {
    Accepted(Box<RegressionFit>),
    Failed { reasons: Vec<String> },
}

impl SemiparametricOutcome {
    pub fn accepted(self) -> Option<RegressionFit> {
        match self {
            SemiparametricOutcome::Accepted(fit) => Some(*fit),
            SemiparametricOutcome::Failed { .. } => None,
        }
    }

    pub fn is_accepted(&self) -> bool {
        matches!(self, SemiparametricOutcome::Accepted(_))
    }
}

/// Mean Ψ Jacobian by central differences and the matching sandwich.
pub(crate) fn sandwich_parts<F>(
    psi: F,
    theta: &DVector<f64>,
    psi_at_theta: &DMatrix<f64>,
) -> Result<(DMatrix<f64>, DMatrix<f64>, f64)>
where
    F: Fn(&DVector<f64>) -> Result<DMatrix<f64>>,
{
    let a = crate::linalg::central_jacobian(
        |t| psi(t).map(|m| crate::linalg::column_means(&m)),
        theta,
        A_STEP,
    )?;
    let rc = crate::linalg::rcond(&a);
    let b = crate::linalg::mean_outer(psi_at_theta);
    let cov = crate::linalg::sandwich(&a, &b, psi_at_theta.nrows())?;
    Ok((a, cov, rc))
}
