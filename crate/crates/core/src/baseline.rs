//! Constant circular-shift delay estimator, run through the same graph
//! pipeline as the alignment delays.

use rayon::prelude::*;

use crate::alignment::StateSequence;
use crate::error::{Error, Result};
use crate::graph::{estimate_graph_from_matrix, AdMatrix, EstimateConfig, GraphEstimate};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftDelayEstimate {
    /// Shift in `(-T/2, T/2]`; positive means `b` lags `a`.
    pub delta_hat: i64,
    pub sse: f64,
}

/// Shifts in scan order: 0, 1, -1, 2, -2, ... restricted to `(-T/2, T/2]`.
fn shift_candidates(t: usize) -> impl Iterator<Item = i64> {
    let t = t as i64;
    std::iter::once(0).chain((1..=t / 2).flat_map(move |d| {
        // -d is admissible only while -d > -T/2, i.e. 2d < T.
        let neg = (2 * d < t).then_some(-d);
        std::iter::once(d).chain(neg)
    }))
}

/// Sum of squared differences between `b[t]` and `a` circularly shifted by
/// `delta`, using `a[(t + (T-1) - delta) % T + 1]` with 1-based `t`.
fn shifted_sse(a: &[f64], b: &[f64], delta: i64) -> f64 {
    let t_len = a.len() as i64;
    (1..=t_len)
        .map(|t| {
            let src = (t + (t_len - 1) - delta) % t_len + 1;
            let d = b[(t - 1) as usize] - a[(src - 1) as usize];
            d * d
        })
        .sum()
}

/// Optimal constant delay of `b` from `a`.
///
/// Shifts are scanned by increasing magnitude, positive first, and a later
/// shift replaces the incumbent only when strictly better, so ties resolve
/// to the smallest magnitude and then to the positive shift.
pub fn baseline_delay(a: &StateSequence, b: &StateSequence) -> Result<ShiftDelayEstimate> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            id: b.id().to_owned(),
            expected: a.len(),
            found: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(Error::SeriesTooShort {
            needed: 2,
            found: a.len(),
        });
    }
    let mut best = ShiftDelayEstimate {
        delta_hat: 0,
        sse: f64::INFINITY,
    };
    for delta in shift_candidates(a.len()) {
        let sse = shifted_sse(a.values(), b.values(), delta);
        // Relative slack so that rounding noise cannot reorder true ties.
        if sse < best.sse - 1e-12 * best.sse.abs().max(1.0) || best.sse.is_infinite() {
            best = ShiftDelayEstimate { delta_hat: delta, sse };
        }
    }
    Ok(best)
}

/// Delay matrix with `delta_hat` of each unordered pair, mirrored with the
/// opposite sign.
pub fn baseline_matrix(sequences: &[StateSequence]) -> Result<AdMatrix> {
    crate::graph::check_dataset(sequences)?;
    let n = sequences.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let values = pairs
        .par_iter()
        .map(|&(i, j)| baseline_delay(&sequences[i], &sequences[j]).map(|d| d.delta_hat as f64))
        .collect::<Result<Vec<_>>>()?;
    let mut m = AdMatrix::zeros(n);
    for (&(i, j), v) in pairs.iter().zip(values) {
        m.set_pair(i, j, v);
    }
    Ok(m)
}

/// The full graph pipeline driven by `delta_hat` instead of alignment delays.
pub fn baseline_graph(sequences: &[StateSequence], config: &EstimateConfig) -> Result<GraphEstimate> {
    estimate_graph_from_matrix(baseline_matrix(sequences)?, config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: Vec<f64>) -> StateSequence {
        StateSequence::new("s", v).unwrap()
    }

    #[test]
    fn candidate_ranges() {
        assert_eq!(shift_candidates(4).collect::<Vec<_>>(), vec![0, 1, -1, 2]);
        assert_eq!(shift_candidates(5).collect::<Vec<_>>(), vec![0, 1, -1, 2, -2]);
        assert_eq!(shift_candidates(2).collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn recovers_circular_shift() {
        let a: Vec<f64> = (0..20).map(|t| ((t * 7919) % 13) as f64).collect();
        let b: Vec<f64> = (0..20).map(|t| a[(t + 20 - 2) % 20]).collect();
        let est = baseline_delay(&seq(a.clone()), &seq(b.clone())).unwrap();
        assert_eq!(est.delta_hat, 2);
        assert_eq!(est.sse, 0.0);
        let back = baseline_delay(&seq(b), &seq(a)).unwrap();
        assert_eq!(back.delta_hat, -2);
    }

    #[test]
    fn identity_and_constant_tie_to_zero() {
        let a = seq(vec![1.0, 3.0, -2.0, 0.5]);
        assert_eq!(baseline_delay(&a, &a).unwrap().delta_hat, 0);
        let c = seq(vec![2.0; 6]);
        assert_eq!(baseline_delay(&c, &c).unwrap().delta_hat, 0);
    }

    #[test]
    fn opposite_shift_tie_prefers_positive() {
        let a = seq(vec![0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let b = seq(vec![1.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        // Shifts +1 and -1 each match one pulse with equal error.
        let est = baseline_delay(&a, &b).unwrap();
        assert_eq!(est.delta_hat.abs(), 1);
        assert_eq!(est.delta_hat, 1);
    }

    #[test]
    fn length_mismatch() {
        assert!(baseline_delay(&seq(vec![1.0, 2.0]), &seq(vec![1.0, 2.0, 3.0])).is_err());
    }
}
