//! Closed-form mediation effect maps and their Jacobians.
//!
//! Without interaction the effects are the product-of-coefficients formulas
//! `(β₂γ, β₃, β₃ + β₂γ)`. With a treatment–mediator interaction `η` they
//! become treatment specific:
//!
//! ```text
//! μ_M(0) = α₂ + ξ₂ᵀx̄        μ_M(1) = μ_M(0) + β₂
//! δ(t)   = β₂(γ + ηt)        ζ(t)   = β₃ + ημ_M(t)
//! τ      = β₃ + β₂γ + ημ_M(1)
//! ```

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::stack::IndexMap;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EffectKind {
    NoInteraction,
    Interaction,
}

impl EffectKind {
    pub fn effect_names(self) -> &'static [&'static str] {
        match self {
            EffectKind::NoInteraction => &["ACME", "ADE", "ATE"],
            EffectKind::Interaction => &["ACME(0)", "ACME(1)", "ADE(0)", "ADE(1)", "ATE"],
        }
    }

    pub fn count(self) -> usize {
        self.effect_names().len()
    }
}

/// `(ACME, ADE, ATE)`.
pub fn effect_map_g0(beta2: f64, beta3: f64, gamma: f64) -> [f64; 3] {
    let acme = beta2 * gamma;
    [acme, beta3, beta3 + acme]
}

/// 3×3 Jacobian in `(β₂, β₃, γ)` order.
pub fn jacobian_g0(beta2: f64, _beta3: f64, gamma: f64) -> DMatrix<f64> {
    DMatrix::from_row_slice(3, 3, &[gamma, 0.0, beta2, 0.0, 1.0, 0.0, gamma, 1.0, beta2])
}

/// Reduced parameter `θ₁ = (α₂, β₂, ξ₂, β₃, γ, η)` of the interaction map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteractionParams {
    pub alpha2: f64,
    pub beta2: f64,
    pub xi2: Vec<f64>,
    pub beta3: f64,
    pub gamma: f64,
    pub eta: f64,
}

impl InteractionParams {
    /// Mean mediator level under treatment `t` at covariate mean `xbar`.
    pub fn mediator_mean(&self, t: u8, xbar: &[f64]) -> f64 {
        let base = self.alpha2 + self.xi2.iter().zip(xbar).map(|(a, b)| a * b).sum::<f64>();
        if t == 0 {
            base
        } else {
            base + self.beta2
        }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = vec![self.alpha2, self.beta2];
        v.extend_from_slice(&self.xi2);
        v.extend_from_slice(&[self.beta3, self.gamma, self.eta]);
        v
    }

    pub fn from_slice(v: &[f64]) -> Self {
        let q = v.len() - 5;
        InteractionParams {
            alpha2: v[0],
            beta2: v[1],
            xi2: v[2..2 + q].to_vec(),
            beta3: v[2 + q],
            gamma: v[3 + q],
            eta: v[4 + q],
        }
    }
}

fn check_xbar(params: &InteractionParams, xbar: &[f64]) -> Result<()> {
    if params.xi2.len() != xbar.len() {
        return Err(Error::Dimension(format!(
            "{} mediator-model covariate coefficients but covariate mean has length {}",
            params.xi2.len(),
            xbar.len()
        )));
    }
    Ok(())
}

/// `(ACME(0), ACME(1), ADE(0), ADE(1), ATE)`.
pub fn effect_map_g1(params: &InteractionParams, xbar: &[f64]) -> Result<[f64; 5]> {
    check_xbar(params, xbar)?;
    let mu0 = params.mediator_mean(0, xbar);
    let mu1 = params.mediator_mean(1, xbar);
    let b2 = params.beta2;
    Ok([
        b2 * params.gamma,
        b2 * (params.gamma + params.eta),
        params.beta3 + params.eta * mu0,
        params.beta3 + params.eta * mu1,
        params.beta3 + b2 * params.gamma + params.eta * mu1,
    ])
}

/// 5×(5+q) Jacobian with respect to `(α₂, β₂, ξ₂, β₃, γ, η)`.
pub fn jacobian_g1(params: &InteractionParams, xbar: &[f64]) -> Result<DMatrix<f64>> {
    check_xbar(params, xbar)?;
    let q = xbar.len();
    let (b2, g, eta) = (params.beta2, params.gamma, params.eta);
    let mu0 = params.mediator_mean(0, xbar);
    let mu1 = params.mediator_mean(1, xbar);
    let (ib3, ig, ieta) = (2 + q, 3 + q, 4 + q);

    let mut jac = DMatrix::zeros(5, 5 + q);
    // ACME(0)
    jac[(0, 1)] = g;
    jac[(0, ig)] = b2;
    // ACME(1)
    jac[(1, 1)] = g + eta;
    jac[(1, ig)] = b2;
    jac[(1, ieta)] = b2;
    // ADE(0), ADE(1), ATE share the μ_M dependence
    for (row, d_beta2, d_gamma, mu) in [
        (2, 0.0, 0.0, mu0),
        (3, eta, 0.0, mu1),
        (4, g + eta, b2, mu1),
    ] {
        jac[(row, 0)] = eta;
        jac[(row, 1)] = d_beta2;
        for (k, x) in xbar.iter().enumerate() {
            jac[(row, 2 + k)] = eta * x;
        }
        jac[(row, ib3)] = 1.0;
        jac[(row, ig)] = d_gamma;
        jac[(row, ieta)] = mu;
    }
    Ok(jac)
}

/// Places the 3×3 `(β₂, β₃, γ)` Jacobian into the stacked parameter layout,
/// zero elsewhere.
pub fn embed_g0(jac: &DMatrix<f64>, map: &IndexMap, dim: usize) -> DMatrix<f64> {
    let cols = [map.beta2, map.beta3, map.gamma];
    let mut g = DMatrix::zeros(jac.nrows(), dim);
    for (j, &c) in cols.iter().enumerate() {
        g.set_column(c, &jac.column(j));
    }
    g
}

/// Places the `(α₂, β₂, ξ₂, β₃, γ, η)` Jacobian into the stacked layout.
pub fn embed_g1(jac: &DMatrix<f64>, map: &IndexMap, dim: usize) -> Result<DMatrix<f64>> {
    let eta = map
        .eta
        .ok_or_else(|| Error::InvalidSpec("outcome model has no interaction column".into()))?;
    let mut cols = vec![map.alpha2, map.beta2];
    cols.extend_from_slice(&map.xi2);
    cols.extend_from_slice(&[map.beta3, map.gamma, eta]);
    if cols.len() != jac.ncols() {
        return Err(Error::Dimension(format!(
            "Jacobian has {} columns, layout has {}",
            jac.ncols(),
            cols.len()
        )));
    }
    let mut g = DMatrix::zeros(jac.nrows(), dim);
    for (j, &c) in cols.iter().enumerate() {
        g.set_column(c, &jac.column(j));
    }
    Ok(g)
}
