//! Series transformations for real-world inputs.

use crate::error::{Error, Result};

/// Rescales to mean 0 and (population) standard deviation 1.
pub fn standardize(series: &[f64]) -> Result<Vec<f64>> {
    let (mean, sd) = mean_sd(series)?;
    Ok(series.iter().map(|v| (v - mean) / sd).collect())
}

/// Mean and population standard deviation.
pub fn mean_sd(series: &[f64]) -> Result<(f64, f64)> {
    if series.len() < 2 {
        return Err(Error::SeriesTooShort {
            needed: 2,
            found: series.len(),
        });
    }
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    let var = series.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let sd = var.sqrt();
    if sd == 0.0 || sd <= mean.abs() * 1e-15 {
        return Err(Error::ConstantSeries);
    }
    Ok((mean, sd))
}

/// Derivative estimate at every interior point:
/// `((s[t] - s[t-1]) + (s[t+1] - s[t-1]) / 2) / 2`. Output has `T - 2`
/// values.
pub fn central_derivative(series: &[f64]) -> Result<Vec<f64>> {
    if series.len() < 3 {
        return Err(Error::SeriesTooShort {
            needed: 3,
            found: series.len(),
        });
    }
    Ok(series
        .windows(3)
        .map(|w| ((w[1] - w[0]) + (w[2] - w[0]) / 2.0) / 2.0)
        .collect())
}

/// Pointwise mean of each group's members, then standardized. `groups`
/// holds indices into `series`.
pub fn group_average(series: &[Vec<f64>], groups: &[Vec<usize>]) -> Result<Vec<Vec<f64>>> {
    groups
        .iter()
        .map(|members| {
            let first = *members
                .first()
                .ok_or(Error::EmptyInput("group without members"))?;
            let len = series
                .get(first)
                .ok_or_else(|| Error::InvalidParameter(format!("no series {first}")))?
                .len();
            let mut acc = vec![0.0; len];
            for &m in members {
                let s = series
                    .get(m)
                    .ok_or_else(|| Error::InvalidParameter(format!("no series {m}")))?;
                if s.len() != len {
                    return Err(Error::LengthMismatch {
                        id: m.to_string(),
                        expected: len,
                        found: s.len(),
                    });
                }
                for (a, v) in acc.iter_mut().zip(s) {
                    *a += v;
                }
            }
            let k = members.len() as f64;
            acc.iter_mut().for_each(|a| *a /= k);
            standardize(&acc)
        })
        .collect()
}
