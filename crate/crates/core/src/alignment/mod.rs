//! Minimum-cost alignment of two state sequences and the exact time-delay
//! sum averaged over every minimum-cost alignment.

pub mod cost;
pub mod tables;
mod view;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use cost::{
    AbsDiff, AbsDiffWithGap, AlignMode, BinaryPulse, CostModel, SquaredDiff, StateCost,
    DEFAULT_TOLERANCE,
};
pub use tables::{Cell, DpTables, Step};
pub use view::{optimal_alignment, render_alignment, AlignedColumn};

use crate::error::{Error, Result};

/// One individual's state string `s[1..T]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateSequence {
    id: String,
    values: Vec<f64>,
}

impl StateSequence {
    /// Fails if any state is NaN or infinite. Emptiness is only an error
    /// for warping alignment, so it is checked there.
    pub fn new(id: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let id = id.into();
        if let Some(position) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteState {
                id,
                position: position + 1,
            });
        }
        Ok(Self { id, values })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Result of aligning `a` against `b`.
///
/// `delay_sum_total` adds `tj - ti` over the matched positions of every
/// minimum-cost alignment, so a positive average means `b` lags `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentStats {
    pub min_cost: f64,
    pub num_alignments: BigUint,
    pub delay_sum_total: BigInt,
    pub avg_delay: f64,
}

impl AlignmentStats {
    fn from_exact(min_cost: f64, count: BigUint, total: BigInt) -> Self {
        let avg_delay = if count.is_zero() {
            0.0
        } else {
            BigRational::new(total.clone(), BigInt::from(count.clone()))
                .to_f64()
                .unwrap_or(f64::NAN)
        };
        Self {
            min_cost,
            num_alignments: count,
            delay_sum_total: total,
            avg_delay,
        }
    }
}

/// Aligns `a` against `b` and averages the matched-position delay over all
/// minimum-cost alignments.
///
/// Counting runs in checked 128-bit arithmetic and restarts with big
/// integers when that overflows, so the result is exact either way. When no
/// alignment has finite cost the count is zero and `avg_delay` is 0.
pub fn align_stats(a: &StateSequence, b: &StateSequence, model: &CostModel) -> Result<AlignmentStats> {
    let mut tables = DpTables::build_cost_table(a, b, model)?;
    let min_cost = tables.min_cost();
    if let Some((count, total)) = tables.counts_u128() {
        return Ok(AlignmentStats::from_exact(
            min_cost,
            BigUint::from(count),
            BigInt::from(total),
        ));
    }
    let count = tables.count_backward();
    let total = tables.sum_matched_delays();
    debug_assert_eq!(count, tables.count_forward());
    Ok(AlignmentStats::from_exact(min_cost, count, total))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[f64]) -> StateSequence {
        StateSequence::new("s", v.to_vec()).unwrap()
    }

    #[test]
    fn rejects_non_finite_states() {
        let err = StateSequence::new("x", vec![0.0, f64::NAN]).unwrap_err();
        assert!(matches!(err, Error::NonFiniteState { position: 2, .. }));
    }

    #[test]
    fn example1_average_is_exact() {
        let a = seq(&[1., 1., 0., -1., -1., 1., 1., 2., 0., -1.]);
        let b = seq(&[0., 1., 1., 0., -1., 1., 1., 1., 2., 0.]);
        let st = align_stats(&a, &b, &CostModel::warping_abs()).unwrap();
        assert_eq!(st.min_cost, 2.0);
        assert_eq!(st.num_alignments, BigUint::from(20u32));
        assert_eq!(st.delay_sum_total, BigInt::from(89));
        assert_eq!(st.avg_delay, 4.45);
    }

    #[test]
    fn identity_has_zero_cost_and_delay() {
        let a = seq(&[0.3, -1.0, 2.0, 2.0, 0.0]);
        for model in [CostModel::warping_abs(), CostModel::new(AlignMode::Gap, AbsDiffWithGap { gap_penalty: 0.5 })] {
            let st = align_stats(&a, &a, &model).unwrap();
            assert_eq!(st.min_cost, 0.0);
            assert_eq!(st.avg_delay, 0.0);
        }
    }

    #[test]
    fn big_integer_fallback_on_long_constant_pair() {
        // All-equal warping lattice: every monotone path is optimal, so the
        // count is the central Delannoy number, which overflows u128 at T = 60.
        let a = seq(&[1.0; 60]);
        let mut t = DpTables::build_cost_table(&a, &a, &CostModel::warping_abs()).unwrap();
        assert!(t.counts_u128().is_none());
        let st = align_stats(&a, &a, &CostModel::warping_abs()).unwrap();
        assert_eq!(st.num_alignments, delannoy(59, 59));
        assert!(st.delay_sum_total.is_zero());
        assert_eq!(st.avg_delay, 0.0);
    }

    fn delannoy(m: usize, n: usize) -> BigUint {
        let mut d = vec![vec![BigUint::from(1u32); n + 1]; m + 1];
        for i in 1..=m {
            for j in 1..=n {
                d[i][j] = &d[i - 1][j] + &d[i][j - 1] + &d[i - 1][j - 1];
            }
        }
        d[m][n].clone()
    }
}
