//! Standardized error laws for the simulation designs.
//!
//! Every law is centered and scaled analytically so its population mean is 0
//! and its variance 1.

use std::f64::consts::PI;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// The four scenario families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorLaw {
    Gaussian,
    SkewNormal,
    AsymmetricMixture,
    SymmetricBimodal,
}

impl ErrorLaw {
    pub const ALL: [ErrorLaw; 4] = [
        ErrorLaw::Gaussian,
        ErrorLaw::SkewNormal,
        ErrorLaw::AsymmetricMixture,
        ErrorLaw::SymmetricBimodal,
    ];

    /// Short scenario name used on the command line and in metric tables.
    pub fn name(self) -> &'static str {
        match self {
            ErrorLaw::Gaussian => "gaussian",
            ErrorLaw::SkewNormal => "skewnormal",
            ErrorLaw::AsymmetricMixture => "asymmix",
            ErrorLaw::SymmetricBimodal => "symbimodal",
        }
    }

    pub fn spec(self) -> ErrorSpec {
        match self {
            ErrorLaw::Gaussian => ErrorSpec::Gaussian,
            ErrorLaw::SkewNormal => ErrorSpec::SkewNormal { shape: 5.0 },
            ErrorLaw::AsymmetricMixture => ErrorSpec::Mixture {
                components: vec![
                    MixtureComponent {
                        weight: 0.9,
                        mean: -0.3,
                        sd: 0.5,
                    },
                    MixtureComponent {
                        weight: 0.1,
                        mean: 2.7,
                        sd: 0.5,
                    },
                ],
            },
            ErrorLaw::SymmetricBimodal => ErrorSpec::Mixture {
                components: vec![
                    MixtureComponent {
                        weight: 0.5,
                        mean: -1.0,
                        sd: 0.5,
                    },
                    MixtureComponent {
                        weight: 0.5,
                        mean: 1.0,
                        sd: 0.5,
                    },
                ],
            },
        }
    }
}

impl std::fmt::Display for ErrorLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ErrorLaw {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ErrorLaw::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| {
                let valid: Vec<_> = ErrorLaw::ALL.iter().map(|l| l.name()).collect();
                format!(
                    "unknown scenario `{s}`; valid scenarios: {}",
                    valid.join(", ")
                )
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtureComponent {
    pub weight: f64,
    pub mean: f64,
    pub sd: f64,
}

/// An error distribution before standardization. [`sample_error`] always
/// returns draws standardized to mean 0 and variance 1, except for `Zero`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ErrorSpec {
    Gaussian,
    /// Azzalini skew-normal with the given shape.
    SkewNormal {
        shape: f64,
    },
    Mixture {
        components: Vec<MixtureComponent>,
    },
    /// Degenerate at zero; for noise-free checks of the mean structure.
    Zero,
}

impl ErrorSpec {
    /// Mean and standard deviation of the raw law.
    pub fn raw_moments(&self) -> (f64, f64) {
        match self {
            ErrorSpec::Gaussian => (0.0, 1.0),
            ErrorSpec::SkewNormal { shape } => {
                let delta = skew_delta(*shape);
                let mean = delta * (2.0 / PI).sqrt();
                (mean, (1.0 - 2.0 * delta * delta / PI).sqrt())
            }
            ErrorSpec::Mixture { components } => {
                let total: f64 = components.iter().map(|c| c.weight).sum();
                let mean = components.iter().map(|c| c.weight * c.mean).sum::<f64>() / total;
                let second = components
                    .iter()
                    .map(|c| c.weight * (c.sd * c.sd + c.mean * c.mean))
                    .sum::<f64>()
                    / total;
                (mean, (second - mean * mean).sqrt())
            }
            ErrorSpec::Zero => (0.0, 1.0),
        }
    }

    /// Analytic skewness of the standardized law.
    pub fn skewness(&self) -> f64 {
        match self {
            ErrorSpec::Gaussian | ErrorSpec::Zero => 0.0,
            ErrorSpec::SkewNormal { shape } => {
                let delta = skew_delta(*shape);
                let b = delta * (2.0 / PI).sqrt();
                (4.0 - PI) / 2.0 * b.powi(3) / (1.0 - b * b).powf(1.5)
            }
            ErrorSpec::Mixture { components } => {
                let (mu, sd) = self.raw_moments();
                let total: f64 = components.iter().map(|c| c.weight).sum();
                let third: f64 = components
                    .iter()
                    .map(|c| {
                        let d = c.mean - mu;
                        c.weight * (d.powi(3) + 3.0 * d * c.sd * c.sd)
                    })
                    .sum::<f64>()
                    / total;
                third / sd.powi(3)
            }
        }
    }

    fn draw_raw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            ErrorSpec::Gaussian => StandardNormal.sample(rng),
            ErrorSpec::SkewNormal { shape } => {
                let delta = skew_delta(*shape);
                let u0: f64 = StandardNormal.sample(rng);
                let u1: f64 = StandardNormal.sample(rng);
                delta * u0.abs() + (1.0 - delta * delta).sqrt() * u1
            }
            ErrorSpec::Mixture { components } => {
                let total: f64 = components.iter().map(|c| c.weight).sum();
                let mut u = rng.random::<f64>() * total;
                let mut chosen = components.last().expect("mixture has components");
                for c in components {
                    if u < c.weight {
                        chosen = c;
                        break;
                    }
                    u -= c.weight;
                }
                let z: f64 = StandardNormal.sample(rng);
                chosen.mean + chosen.sd * z
            }
            ErrorSpec::Zero => 0.0,
        }
    }
}

fn skew_delta(shape: f64) -> f64 {
    shape / (1.0 + shape * shape).sqrt()
}

/// Draws `count` standardized errors.
pub fn sample_error<R: Rng + ?Sized>(spec: &ErrorSpec, rng: &mut R, count: usize) -> Vec<f64> {
    if matches!(spec, ErrorSpec::Zero) {
        return vec![0.0; count];
    }
    let (mu, sd) = spec.raw_moments();
    (0..count).map(|_| (spec.draw_raw(rng) - mu) / sd).collect()
}
