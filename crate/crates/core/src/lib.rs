//! Causal mediation analysis for linear mediator/outcome models.
//!
//! Each regression is fit either by ordinary least squares or by an adaptive
//! semiparametric estimator that learns the error score from the residuals,
//! so that non-Gaussian errors are used efficiently. The two regressions are
//! stacked into one estimating-equation system whose sandwich covariance is
//! propagated through the closed-form mediation effect maps by the delta
//! method.
//!
//! The main entry points are:
//!
//! - [`data`]: CSV ingestion, model specifications and design matrices.
//! - [`estimators`]: [`fit_ols`], [`fit_semiparametric`] and their building
//!   blocks (kernel score estimate, damped Newton solver, multi-start rule).
//! - [`inference`]: stacked covariance, effect maps and [`mediate`].
//! - [`simulation`]: error laws, the interaction data-generating process and
//!   the Monte Carlo scorecard.
//! - [`cli`]: the `semimed` command-line front end, JSON reports and SVG
//!   forest plots.
//!
//! See the crate's `examples/` directory for one runnable program per
//! capability.

// `!(x > 0.0)` style guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod data;
pub mod error;
pub mod estimators;
pub mod inference;
mod linalg;
pub mod simulation;

pub use data::{
    build_design, load_csv, load_csv_columns, ColumnRole, Dataset, DesignMatrix, ModelSpec,
};
pub use error::{Error, Result};
pub use estimators::{
    fit_ols, fit_semiparametric, FitDiagnostics, Method, ParameterPoint, RegressionFit,
    SemiparametricOutcome,
};
pub use inference::{
    mediate, stack_fits, EffectEstimates, EffectKind, MediationRequest, MediationResult,
    MethodChoice, StackedFit,
};
