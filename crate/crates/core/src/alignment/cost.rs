use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// How unmatched columns of an alignment are charged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum AlignMode {
    /// Unmatched columns repeat the most recent state of the shorter side
    /// (DTW-style). Both shift functions start at column 1.
    Warping,
    /// Unmatched columns pair a state with the gap symbol. Null prefixes are
    /// allowed, so the lattice has a row and column for the empty prefix.
    Gap,
}

impl fmt::Display for AlignMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlignMode::Warping => f.write_str("warping"),
            AlignMode::Gap => f.write_str("gap"),
        }
    }
}

/// A cost between states, plus the cost of aligning a state against a gap.
///
/// Costs are non-negative; `f64::INFINITY` forbids a pairing.
pub trait StateCost: Send + Sync + fmt::Debug {
    fn pair(&self, a: f64, b: f64) -> f64;

    /// Cost of `a` against the gap symbol. Only consulted in gap mode.
    fn gap(&self, _a: f64) -> f64 {
        f64::INFINITY
    }

    /// Whether `pair` is symmetric (and `gap` is direction independent).
    fn is_symmetric(&self) -> bool {
        true
    }
}

/// `|a - b|`. Gaps are forbidden.
#[derive(Debug, Clone, Copy, Default)]
pub struct AbsDiff;

impl StateCost for AbsDiff {
    #[inline]
    fn pair(&self, a: f64, b: f64) -> f64 {
        (a - b).abs()
    }
}

/// `(a - b)^2`. Gaps are forbidden.
#[derive(Debug, Clone, Copy, Default)]
pub struct SquaredDiff;

impl StateCost for SquaredDiff {
    #[inline]
    fn pair(&self, a: f64, b: f64) -> f64 {
        let d = a - b;
        d * d
    }
}

/// Cost for binary pulse trains.
///
/// Equal states cost 0, a 0/1 mismatch costs `alpha`, a 0 against a gap
/// costs 1 and a 1 against a gap is forbidden, so every 1-state has to be
/// matched. States are read as 1 when `>= 0.5`.
#[derive(Debug, Clone, Copy)]
pub struct BinaryPulse {
    pub alpha: f64,
}

impl BinaryPulse {
    pub fn new(alpha: f64) -> Self {
        Self { alpha }
    }
}

#[inline]
fn is_on(x: f64) -> bool {
    x >= 0.5
}

impl StateCost for BinaryPulse {
    #[inline]
    fn pair(&self, a: f64, b: f64) -> f64 {
        if is_on(a) == is_on(b) {
            0.0
        } else {
            self.alpha
        }
    }

    #[inline]
    fn gap(&self, a: f64) -> f64 {
        if is_on(a) {
            f64::INFINITY
        } else {
            1.0
        }
    }
}

/// Pair cost `|a - b|` with a constant gap penalty, for real-valued gap alignment.
#[derive(Debug, Clone, Copy)]
pub struct AbsDiffWithGap {
    pub gap_penalty: f64,
}

impl StateCost for AbsDiffWithGap {
    #[inline]
    fn pair(&self, a: f64, b: f64) -> f64 {
        (a - b).abs()
    }

    #[inline]
    fn gap(&self, _a: f64) -> f64 {
        self.gap_penalty
    }
}

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Alignment mode, state costs and the tie tolerance used when deciding
/// which lattice predecessors reach a cell's minimum.
#[derive(Debug, Clone)]
pub struct CostModel {
    pub mode: AlignMode,
    pub cost: Arc<dyn StateCost>,
    pub tolerance: f64,
}

impl CostModel {
    pub fn new(mode: AlignMode, cost: impl StateCost + 'static) -> Self {
        Self {
            mode,
            cost: Arc::new(cost),
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    /// Warping alignment with `|a - b|`.
    pub fn warping_abs() -> Self {
        Self::new(AlignMode::Warping, AbsDiff)
    }

    /// Gap alignment with the binary pulse cost.
    pub fn gap_binary(alpha: f64) -> Self {
        Self::new(AlignMode::Gap, BinaryPulse::new(alpha))
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    #[inline]
    pub fn pair(&self, a: f64, b: f64) -> f64 {
        self.cost.pair(a, b)
    }

    #[inline]
    pub fn gap(&self, a: f64) -> f64 {
        self.cost.gap(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_pulse_table() {
        let w = BinaryPulse::new(3.0);
        assert_eq!(w.pair(0.0, 0.0), 0.0);
        assert_eq!(w.pair(1.0, 1.0), 0.0);
        assert_eq!(w.pair(0.0, 1.0), 3.0);
        assert_eq!(w.pair(1.0, 0.0), 3.0);
        assert_eq!(w.gap(0.0), 1.0);
        assert!(w.gap(1.0).is_infinite());
    }

    #[test]
    fn abs_diff_forbids_gaps() {
        assert!(AbsDiff.gap(0.0).is_infinite());
        assert_eq!(AbsDiff.pair(-1.0, 2.0), 3.0);
    }
}
