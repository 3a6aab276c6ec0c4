//! Stacked mediator/outcome estimating equations.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::data::ColumnRole;
use crate::error::{Error, Result};
use crate::estimators::{RegressionFit, A_STEP};
use crate::linalg;

/// Positions of the named coefficients inside the stacked vector ϑ.
///
/// ϑ = (mediator β, σ²_M, outcome β, σ²_Y); each β follows its design
/// column order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexMap {
    pub alpha2: usize,
    pub beta2: usize,
    pub xi2: Vec<usize>,
    pub sigma2_m: usize,
    pub alpha3: usize,
    pub beta3: usize,
    pub gamma: usize,
    pub eta: Option<usize>,
    pub xi3: Vec<usize>,
    pub sigma2_y: usize,
}

impl IndexMap {
    fn from_fits(med: &RegressionFit, out: &RegressionFit) -> Result<Self> {
        let mroles = med.design().column_roles();
        let oroles = out.design().column_roles();
        let find = |roles: &[ColumnRole], role: ColumnRole, offset: usize, what: &str| {
            roles
                .iter()
                .position(|&r| r == role)
                .map(|i| i + offset)
                .ok_or_else(|| Error::InvalidSpec(format!("{what} model has no {role:?} column")))
        };
        let covs = |roles: &[ColumnRole], offset: usize| -> Vec<usize> {
            roles
                .iter()
                .enumerate()
                .filter(|(_, &r)| r == ColumnRole::Covariate)
                .map(|(i, _)| i + offset)
                .collect()
        };
        if mroles.contains(&ColumnRole::Mediator) {
            return Err(Error::InvalidSpec(
                "mediator model must not contain the mediator as a regressor".into(),
            ));
        }
        let off = med.p() + 1;
        Ok(IndexMap {
            alpha2: find(mroles, ColumnRole::Intercept, 0, "mediator")?,
            beta2: find(mroles, ColumnRole::Treatment, 0, "mediator")?,
            xi2: covs(mroles, 0),
            sigma2_m: med.p(),
            alpha3: find(oroles, ColumnRole::Intercept, off, "outcome")?,
            beta3: find(oroles, ColumnRole::Treatment, off, "outcome")?,
            gamma: find(oroles, ColumnRole::Mediator, off, "outcome")?,
            eta: oroles
                .iter()
                .position(|&r| r == ColumnRole::Interaction)
                .map(|i| i + off),
            xi3: covs(oroles, off),
            sigma2_y: off + out.p(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct StackedFit {
    /// Mediator-model `(β, σ²)` followed by outcome-model `(β, σ²)`.
    pub theta: DVector<f64>,
    /// Mean Jacobian of the stacked Ψ; block diagonal.
    pub a: DMatrix<f64>,
    /// Mean outer product of the stacked Ψ rows.
    pub b: DMatrix<f64>,
    /// `A⁻¹BA⁻ᵀ/n`, symmetrized.
    pub cov: DMatrix<f64>,
    pub index_map: IndexMap,
    /// n×dim(ϑ) stacked Ψ rows at ϑ.
    pub psi: DMatrix<f64>,
    pub n: usize,
}

impl StackedFit {
    pub fn dim(&self) -> usize {
        self.theta.len()
    }
}

/// `A⁻¹BA⁻ᵀ/n` with explicit symmetrization; fails when `A` is numerically
/// singular.
pub fn sandwich_covariance(a: &DMatrix<f64>, b: &DMatrix<f64>, n: usize) -> Result<DMatrix<f64>> {
    if a.nrows() != a.ncols() || b.shape() != a.shape() {
        return Err(Error::Dimension(format!(
            "A is {:?}, B is {:?}",
            a.shape(),
            b.shape()
        )));
    }
    linalg::sandwich(a, b, n)
}

fn block_jacobian(fit: &RegressionFit) -> Result<DMatrix<f64>> {
    linalg::central_jacobian(
        |t| fit.psi_at(t).map(|m| linalg::column_means(&m)),
        &fit.params.to_vector(),
        A_STEP,
    )
}

pub fn stack_fits(med: &RegressionFit, out: &RegressionFit) -> Result<StackedFit> {
    if med.n() != out.n() {
        return Err(Error::Dimension(format!(
            "mediator model has n = {}, outcome model n = {}",
            med.n(),
            out.n()
        )));
    }
    if med.method != out.method {
        return Err(Error::InvalidSpec(format!(
            "cannot stack a {} fit with a {} fit",
            med.method, out.method
        )));
    }
    let index_map = IndexMap::from_fits(med, out)?;
    let n = med.n();
    let (km, ky) = (med.p() + 1, out.p() + 1);
    let dim = km + ky;

    let theta = DVector::from_iterator(
        dim,
        med.params
            .to_vector()
            .iter()
            .chain(out.params.to_vector().iter())
            .copied(),
    );

    let mut a = DMatrix::zeros(dim, dim);
    a.view_mut((0, 0), (km, km))
        .copy_from(&block_jacobian(med)?);
    a.view_mut((km, km), (ky, ky))
        .copy_from(&block_jacobian(out)?);

    let mut psi = DMatrix::zeros(n, dim);
    psi.view_mut((0, 0), (n, km)).copy_from(&med.psi_values);
    psi.view_mut((0, km), (n, ky)).copy_from(&out.psi_values);
    let b = linalg::mean_outer(&psi);
    let cov = sandwich_covariance(&a, &b, n)?;

    Ok(StackedFit {
        theta,
        a,
        b,
        cov,
        index_map,
        psi,
        n,
    })
}
