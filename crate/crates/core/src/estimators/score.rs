//! Kernel estimate of the error score `f′/f` used by the semiparametric
//! estimating equations.
//!
//! The density is a Gaussian-kernel estimate on the residuals with
//! Silverman's bandwidth. Where the estimated density falls below
//! `DENSITY_FLOOR·max f̂` (max taken over the residuals) the ratio is unreliable, so the
//! score there is replaced by its value at the nearest residual with adequate
//! density. Finally every score is clipped to `|s| ≤ CLIP_FACTOR/h`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_RESIDUALS: usize = 10;
pub const DENSITY_FLOOR: f64 = 1e-3;
pub const CLIP_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreEstimate {
    pub eval_points: Vec<f64>,
    /// Estimated log-density derivative `f̂′/f̂` at each evaluation point.
    pub score_values: Vec<f64>,
    pub bandwidth: f64,
    pub clip_bound: f64,
}

/// `1.06 · sd · n^(−1/5)` with the `n − 1` standard deviation.
pub fn silverman_bandwidth(residuals: &[f64]) -> f64 {
    let n = residuals.len() as f64;
    let mean = residuals.iter().sum::<f64>() / n;
    let var = residuals
        .iter()
        .map(|e| (e - mean) * (e - mean))
        .sum::<f64>()
        / (n - 1.0);
    1.06 * var.sqrt() * n.powf(-0.2)
}

fn validate(residuals: &[f64]) -> Result<()> {
    if residuals.len() < MIN_RESIDUALS {
        return Err(Error::TooFewObservations {
            n: residuals.len(),
            p: 0,
            required: MIN_RESIDUALS,
        });
    }
    if residuals.iter().any(|e| !e.is_finite()) {
        return Err(Error::Malformed("non-finite residual".into()));
    }
    Ok(())
}

pub fn estimate_score(residuals: &[f64], eval_points: &[f64]) -> Result<ScoreEstimate> {
    validate(residuals)?;
    let h = silverman_bandwidth(residuals);
    if !(h > 0.0) {
        return Err(Error::ZeroVariance);
    }
    estimate_score_with_bandwidth(residuals, eval_points, h)
}

pub fn estimate_score_with_bandwidth(
    residuals: &[f64],
    eval_points: &[f64],
    bandwidth: f64,
) -> Result<ScoreEstimate> {
    validate(residuals)?;
    if !(bandwidth > 0.0) || !bandwidth.is_finite() {
        return Err(Error::ZeroVariance);
    }
    let reference = KernelSums::at_residuals(residuals, bandwidth);
    let score_values = eval_points
        .iter()
        .map(|&e| {
            let (f, d) = kernel_sums_at(residuals, e, bandwidth);
            reference.finish(e, f, d)
        })
        .collect();
    Ok(ScoreEstimate {
        eval_points: eval_points.to_vec(),
        score_values,
        bandwidth,
        clip_bound: CLIP_FACTOR / bandwidth,
    })
}

/// Scores at the residuals themselves, using the symmetric pair sums.
pub(crate) fn scores_at_residuals(residuals: &[f64], bandwidth: f64) -> Vec<f64> {
    let reference = KernelSums::at_residuals(residuals, bandwidth);
    (0..residuals.len())
        .map(|i| reference.finish(residuals[i], reference.density[i], reference.slope[i]))
        .collect()
}

/// Unnormalized kernel sums `Σφ(u)` and `Σ −u·φ(u)` at a point,
/// `u = (e − e_k)/h`. The score is `slope / (h · density)`.
fn kernel_sums_at(residuals: &[f64], e: f64, h: f64) -> (f64, f64) {
    residuals.iter().fold((0.0, 0.0), |(f, d), &ek| {
        let u = (e - ek) / h;
        let w = (-0.5 * u * u).exp();
        (f + w, d - u * w)
    })
}

struct KernelSums {
    bandwidth: f64,
    density: Vec<f64>,
    slope: Vec<f64>,
    floor: f64,
    clip: f64,
    /// Residuals with adequate density, sorted, paired with their score.
    adequate: Vec<(f64, f64)>,
}

impl KernelSums {
    fn at_residuals(residuals: &[f64], h: f64) -> Self {
        let n = residuals.len();
        let mut density = vec![1.0; n];
        let mut slope = vec![0.0; n];
        for i in 0..n {
            for k in (i + 1)..n {
                let u = (residuals[i] - residuals[k]) / h;
                let w = (-0.5 * u * u).exp();
                density[i] += w;
                density[k] += w;
                slope[i] -= u * w;
                slope[k] += u * w;
            }
        }
        let max = density.iter().cloned().fold(0.0_f64, f64::max);
        let floor = DENSITY_FLOOR * max;
        let clip = CLIP_FACTOR / h;
        let mut adequate: Vec<(f64, f64)> = (0..n)
            .filter(|&i| density[i] >= floor)
            .map(|i| (residuals[i], slope[i] / (h * density[i])))
            .collect();
        adequate.sort_by(|a, b| a.0.total_cmp(&b.0));
        KernelSums {
            bandwidth: h,
            density,
            slope,
            floor,
            clip,
            adequate,
        }
    }

    fn finish(&self, e: f64, f: f64, d: f64) -> f64 {
        let raw = if f >= self.floor {
            d / (self.bandwidth * f)
        } else {
            self.nearest_adequate(e)
        };
        raw.clamp(-self.clip, self.clip)
    }

    fn nearest_adequate(&self, e: f64) -> f64 {
        let idx = self.adequate.partition_point(|&(r, _)| r < e);
        let below = idx.checked_sub(1).map(|i| self.adequate[i]);
        let above = self.adequate.get(idx).copied();
        match (below, above) {
            (Some(b), Some(a)) => {
                if e - b.0 <= a.0 - e {
                    b.1
                } else {
                    a.1
                }
            }
            (Some(b), None) => b.1,
            (None, Some(a)) => a.1,
            (None, None) => 0.0,
        }
    }
}
