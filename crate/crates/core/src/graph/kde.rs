use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KdeConfig {
    /// Gaussian kernel standard deviation, in delay units.
    pub bandwidth: f64,
    /// Number of uniform grid points over `[0, max value]`.
    pub grid_points: usize,
}

impl Default for KdeConfig {
    fn default() -> Self {
        Self {
            bandwidth: 3.0,
            grid_points: 512,
        }
    }
}

/// Threshold together with the density curve it was read from.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdEstimate {
    pub theta: f64,
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    /// Grid index of the highest density.
    pub peak: usize,
    /// Grid index of the valley, `None` when the fallback was used.
    pub valley: Option<usize>,
}

/// Gaussian kernel density of `values` evaluated at each of `xs`.
pub fn gaussian_kde(values: &[f64], bandwidth: f64, xs: &[f64]) -> Vec<f64> {
    let norm = 1.0 / (values.len() as f64 * bandwidth * (2.0 * PI).sqrt());
    xs.iter()
        .map(|&x| {
            let s: f64 = values
                .iter()
                .map(|&v| {
                    let z = (x - v) / bandwidth;
                    (-0.5 * z * z).exp()
                })
                .sum();
            s * norm
        })
        .collect()
}

/// First strict local minimum of the density to the right of its global
/// maximum, evaluated on a uniform grid over `[0, max value]`.
///
/// Without such a valley the threshold is the largest value, which leaves no
/// edge strictly above it.
pub fn estimate_threshold(values: &[f64], config: &KdeConfig) -> Result<ThresholdEstimate> {
    if values.is_empty() {
        return Err(Error::EmptyInput("no delay values for threshold estimation"));
    }
    if !(config.bandwidth > 0.0 && config.bandwidth.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "bandwidth must be positive, got {}",
            config.bandwidth
        )));
    }
    if config.grid_points < 3 {
        return Err(Error::InvalidParameter(format!(
            "need at least 3 grid points, got {}",
            config.grid_points
        )));
    }
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let step = max / (config.grid_points - 1) as f64;
    let grid: Vec<f64> = (0..config.grid_points).map(|k| k as f64 * step).collect();
    let density = gaussian_kde(values, config.bandwidth, &grid);

    let mut peak = 0;
    for (k, &d) in density.iter().enumerate() {
        if d > density[peak] {
            peak = k;
        }
    }
    let valley = (peak + 1..density.len() - 1)
        .find(|&k| density[k - 1] > density[k] && density[k] < density[k + 1]);
    let theta = valley.map_or(max, |k| grid[k]);
    Ok(ThresholdEstimate {
        theta,
        grid,
        density,
        peak,
        valley,
    })
}
