//! The interaction data-generating process.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::errors::{sample_error, ErrorLaw, ErrorSpec};
use super::rng::{stream_rng, StreamPurpose};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::inference::{effect_map_g1, InteractionParams};

/// Structural constants of `M = α₂ + β₂T + ε₂`, `Y = β₃T + γM + ηTM + ε₃`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignParams {
    pub alpha2: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub gamma: f64,
    pub eta: f64,
}

impl DesignParams {
    pub const MAIN: DesignParams = DesignParams {
        alpha2: 0.2,
        beta2: 0.4,
        beta3: 0.5,
        gamma: -0.8,
        eta: 1.0,
    };
    pub const POWER: DesignParams = DesignParams {
        alpha2: 0.2,
        beta2: 0.26,
        beta3: 0.5,
        gamma: -0.26,
        eta: 0.8,
    };

    /// True (ACME(0), ACME(1), ADE(0), ADE(1), ATE).
    pub fn truth(&self) -> [f64; 5] {
        let p = InteractionParams {
            alpha2: self.alpha2,
            beta2: self.beta2,
            xi2: Vec::new(),
            beta3: self.beta3,
            gamma: self.gamma,
            eta: self.eta,
        };
        effect_map_g1(&p, &[]).expect("no covariates")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Design {
    Main,
    Power,
    Custom(DesignParams),
}

impl Design {
    pub fn params(&self) -> DesignParams {
        match self {
            Design::Main => DesignParams::MAIN,
            Design::Power => DesignParams::POWER,
            Design::Custom(p) => *p,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    /// Label written to the metrics table.
    pub name: String,
    pub error: ErrorSpec,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub design: Design,
}

impl ScenarioConfig {
    pub const MIN_N: usize = 30;
    pub const POWER_N: usize = 220;

    /// Main design under one of the named error laws.
    pub fn main(law: ErrorLaw, n: usize, reps: usize, seed: u64) -> Self {
        ScenarioConfig {
            name: law.name().into(),
            error: law.spec(),
            n,
            reps,
            seed,
            design: Design::Main,
        }
    }

    /// Near-boundary design with asymmetric-mixture errors and n = 220.
    pub fn power(reps: usize, seed: u64) -> Self {
        ScenarioConfig {
            name: "power".into(),
            error: ErrorLaw::AsymmetricMixture.spec(),
            n: Self::POWER_N,
            reps,
            seed,
            design: Design::Power,
        }
    }

    pub fn with_design(mut self, design: Design) -> Self {
        self.design = design;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < Self::MIN_N {
            return Err(Error::InvalidSpec(format!(
                "n = {} is below the minimum of {}",
                self.n,
                Self::MIN_N
            )));
        }
        if self.reps == 0 {
            return Err(Error::InvalidSpec("reps must be at least 1".into()));
        }
        Ok(())
    }

    pub fn truth(&self) -> [f64; 5] {
        self.design.params().truth()
    }
}

/// Draws replicate `replicate_index` of the scenario as columns `T`, `M`, `Y`.
pub fn generate_interaction_dataset(
    config: &ScenarioConfig,
    replicate_index: u64,
) -> Result<Dataset> {
    config.validate()?;
    let p = config.design.params();
    let n = config.n;
    let mut t_rng = stream_rng(config.seed, StreamPurpose::Treatment, replicate_index);
    let t: Vec<f64> = (0..n)
        .map(|_| if t_rng.random_bool(0.5) { 1.0 } else { 0.0 })
        .collect();
    let e2 = sample_error(
        &config.error,
        &mut stream_rng(config.seed, StreamPurpose::MediatorError, replicate_index),
        n,
    );
    let e3 = sample_error(
        &config.error,
        &mut stream_rng(config.seed, StreamPurpose::OutcomeError, replicate_index),
        n,
    );
    let m: Vec<f64> = t
        .iter()
        .zip(&e2)
        .map(|(t, e)| p.alpha2 + p.beta2 * t + e)
        .collect();
    let y: Vec<f64> = t
        .iter()
        .zip(&m)
        .zip(&e3)
        .map(|((t, m), e)| p.beta3 * t + p.gamma * m + p.eta * t * m + e)
        .collect();
    Dataset::from_columns(vec![("T", t), ("M", m), ("Y", y)])
}
