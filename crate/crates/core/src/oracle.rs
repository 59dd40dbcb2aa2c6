//! Exhaustive enumeration of alignments for short sequences.
//!
//! Every pair of strictly increasing shift functions whose images jointly
//! cover `1..=K` is generated column by column, and its cost is evaluated
//! from the column definitions directly (fill-forward states in warping
//! mode, gap symbols in gap mode). Nothing here touches the lattice code in
//! [`crate::alignment`], which makes it usable as ground truth for it.

use std::collections::BTreeMap;

use crate::alignment::{AlignMode, CostModel, StateSequence};
use crate::error::{Error, Result};

pub const DEFAULT_CAP: usize = 10;

/// One alignment: 1-based column of each state of `a` and of `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnumeratedAlignment {
    pub pi_a: Vec<usize>,
    pub pi_b: Vec<usize>,
    pub cost: f64,
    pub delay_sum: i64,
}

/// Columns contents while walking. `a` and `b` are how many states of each
/// sequence have been placed.
struct Walker<'s, F> {
    a: &'s [f64],
    b: &'s [f64],
    model: &'s CostModel,
    pi_a: Vec<usize>,
    pi_b: Vec<usize>,
    visit: F,
}

#[derive(Clone, Copy)]
enum Column {
    Both,
    OnlyA,
    OnlyB,
}

impl<F: FnMut(&[usize], &[usize], f64, i64)> Walker<'_, F> {
    fn column_cost(&self, col: Column) -> f64 {
        let (na, nb) = (self.pi_a.len(), self.pi_b.len());
        match self.model.mode {
            // s'_m[k] is the state of the latest placed position of m.
            AlignMode::Warping => self.model.pair(self.a[na - 1], self.b[nb - 1]),
            AlignMode::Gap => match col {
                Column::Both => self.model.pair(self.a[na - 1], self.b[nb - 1]),
                Column::OnlyA => self.model.gap(self.a[na - 1]),
                Column::OnlyB => self.model.gap(self.b[nb - 1]),
            },
        }
    }

    fn walk(&mut self, column: usize, cost: f64, delay: i64) {
        let (na, nb) = (self.pi_a.len(), self.pi_b.len());
        if na == self.a.len() && nb == self.b.len() {
            (self.visit)(&self.pi_a, &self.pi_b, cost, delay);
            return;
        }
        for col in [Column::Both, Column::OnlyA, Column::OnlyB] {
            let (take_a, take_b) = match col {
                Column::Both => (true, true),
                Column::OnlyA => (true, false),
                Column::OnlyB => (false, true),
            };
            if (take_a && na == self.a.len()) || (take_b && nb == self.b.len()) {
                continue;
            }
            if take_a {
                self.pi_a.push(column);
            }
            if take_b {
                self.pi_b.push(column);
            }
            let c = self.column_cost(col);
            let d = if take_a && take_b {
                nb as i64 + 1 - (na as i64 + 1)
            } else {
                0
            };
            self.walk(column + 1, cost + c, delay + d);
            if take_a {
                self.pi_a.pop();
            }
            if take_b {
                self.pi_b.pop();
            }
        }
    }
}

fn check(a: &StateSequence, b: &StateSequence, model: &CostModel, cap: usize) -> Result<()> {
    if a.len() > cap || b.len() > cap {
        return Err(Error::OracleCapExceeded {
            len_a: a.len(),
            len_b: b.len(),
            cap,
        });
    }
    if model.mode == AlignMode::Warping {
        for s in [a, b] {
            if s.is_empty() {
                return Err(Error::EmptySequence { id: s.id().to_owned() });
            }
        }
    }
    Ok(())
}

/// Calls `visit(pi_a, pi_b, cost, delay_sum)` for every alignment.
pub fn for_each_alignment<F>(
    a: &StateSequence,
    b: &StateSequence,
    model: &CostModel,
    cap: usize,
    visit: F,
) -> Result<()>
where
    F: FnMut(&[usize], &[usize], f64, i64),
{
    check(a, b, model, cap)?;
    let mut w = Walker {
        a: a.values(),
        b: b.values(),
        model,
        pi_a: Vec::with_capacity(a.len()),
        pi_b: Vec::with_capacity(b.len()),
        visit,
    };
    match model.mode {
        AlignMode::Warping => {
            // Both shift functions start at column 1.
            w.pi_a.push(1);
            w.pi_b.push(1);
            let c = w.column_cost(Column::Both);
            w.walk(2, c, 0);
        }
        AlignMode::Gap => w.walk(1, 0.0, 0),
    }
    Ok(())
}

/// All alignments in lexicographic order of `(pi_a, pi_b)`.
pub fn enumerate_alignments(
    a: &StateSequence,
    b: &StateSequence,
    model: &CostModel,
    cap: usize,
) -> Result<Vec<EnumeratedAlignment>> {
    let mut out = Vec::new();
    for_each_alignment(a, b, model, cap, |pa, pb, cost, delay_sum| {
        out.push(EnumeratedAlignment {
            pi_a: pa.to_vec(),
            pi_b: pb.to_vec(),
            cost,
            delay_sum,
        })
    })?;
    out.sort_by(|x, y| (&x.pi_a, &x.pi_b).cmp(&(&y.pi_a, &y.pi_b)));
    Ok(out)
}

/// Minimum-cost aggregate computed by brute force.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSummary {
    pub min_cost: f64,
    pub count: u128,
    pub delay_sum: i128,
    /// delay sum -> number of minimum-cost alignments with it
    pub delay_histogram: BTreeMap<i64, u128>,
}

/// Minimum cost, count, and delay-sum total over the alignments within
/// `model.tolerance` of the minimum.
pub fn summarize(
    a: &StateSequence,
    b: &StateSequence,
    model: &CostModel,
    cap: usize,
) -> Result<OracleSummary> {
    let mut min_cost = f64::INFINITY;
    for_each_alignment(a, b, model, cap, |_, _, cost, _| {
        if cost < min_cost {
            min_cost = cost;
        }
    })?;
    let mut hist = BTreeMap::new();
    if min_cost.is_finite() {
        let tol = model.tolerance;
        for_each_alignment(a, b, model, cap, |_, _, cost, delay| {
            if cost <= min_cost + tol {
                *hist.entry(delay).or_insert(0u128) += 1;
            }
        })?;
    }
    Ok(OracleSummary {
        min_cost,
        count: hist.values().sum(),
        delay_sum: hist.iter().map(|(&d, &n)| d as i128 * n as i128).sum(),
        delay_histogram: hist,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[f64]) -> StateSequence {
        StateSequence::new("s", v.to_vec()).unwrap()
    }

    fn bits(s: &str) -> StateSequence {
        seq(&s.bytes().map(|c| f64::from(c - b'0')).collect::<Vec<_>>())
    }

    #[test]
    fn example1_delay_multiset() {
        let a = seq(&[1., 1., 0., -1., -1., 1., 1., 2., 0., -1.]);
        let b = seq(&[0., 1., 1., 0., -1., 1., 1., 1., 2., 0.]);
        let s = summarize(&a, &b, &CostModel::warping_abs(), DEFAULT_CAP).unwrap();
        assert_eq!(s.min_cost, 2.0);
        assert_eq!(s.count, 20);
        assert_eq!(s.delay_histogram, BTreeMap::from([(4, 12), (5, 7), (6, 1)]));
        assert_eq!(s.delay_sum, 89);
    }

    #[test]
    fn example1_contains_tabulated_alignment() {
        let a = seq(&[1., 1., 0., -1., -1., 1., 1., 2., 0., -1.]);
        let b = seq(&[0., 1., 1., 0., -1., 1., 1., 1., 2., 0.]);
        let all = enumerate_alignments(&a, &b, &CostModel::warping_abs(), DEFAULT_CAP).unwrap();
        let shown = all
            .iter()
            .find(|e| {
                e.pi_a == [1, 3, 4, 5, 6, 7, 9, 10, 11, 12] && e.pi_b == [1, 2, 3, 4, 5, 7, 8, 9, 10, 11]
            })
            .unwrap();
        assert_eq!(shown.cost, 2.0);
        assert_eq!(shown.delay_sum, 6);
    }

    #[test]
    fn example2_delay_multiset() {
        let model = CostModel::gap_binary(3.0);
        let s = summarize(&bits("001000100"), &bits("000100010"), &model, DEFAULT_CAP).unwrap();
        assert_eq!(s.min_cost, 2.0);
        assert_eq!(s.count, 6);
        assert_eq!(
            s.delay_histogram,
            BTreeMap::from([(5, 1), (6, 2), (7, 2), (8, 1)])
        );
        assert_eq!(s.delay_sum, 39);
    }

    #[test]
    fn example2_contains_tabulated_alignment() {
        let model = CostModel::gap_binary(3.0);
        let all = enumerate_alignments(&bits("001000100"), &bits("000100010"), &model, DEFAULT_CAP).unwrap();
        let shown = all
            .iter()
            .find(|e| e.pi_a == [2, 3, 4, 5, 6, 7, 8, 9, 10] && e.pi_b == [1, 2, 3, 4, 5, 6, 7, 8, 10])
            .unwrap();
        assert_eq!(shown.cost, 2.0);
        assert_eq!(shown.delay_sum, 7);
    }

    #[test]
    fn single_state_warping() {
        let a = seq(&[2.0]);
        let all = enumerate_alignments(&a, &a, &CostModel::warping_abs(), DEFAULT_CAP).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].delay_sum, 0);
        assert_eq!(all[0].pi_a, [1]);
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let a = seq(&[0., 1., 0.]);
        let b = seq(&[1., 1.]);
        let all = enumerate_alignments(&a, &b, &CostModel::gap_binary(3.0), DEFAULT_CAP).unwrap();
        // Delannoy number D(3, 2).
        assert_eq!(all.len(), 25);
        for w in all.windows(2) {
            assert!((&w[0].pi_a, &w[0].pi_b) < (&w[1].pi_a, &w[1].pi_b));
        }
        for e in &all {
            let mut cols: Vec<usize> = e.pi_a.iter().chain(&e.pi_b).copied().collect();
            cols.sort_unstable();
            cols.dedup();
            assert_eq!(cols, (1..=cols.len()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn warping_pins_first_column() {
        let a = seq(&[0., 1., 0.]);
        let b = seq(&[1., 1.]);
        let all = enumerate_alignments(&a, &b, &CostModel::warping_abs(), DEFAULT_CAP).unwrap();
        // DTW paths from (1,1) to (3,2): Delannoy D(2, 1).
        assert_eq!(all.len(), 5);
        assert!(all.iter().all(|e| e.pi_a[0] == 1 && e.pi_b[0] == 1));
    }

    #[test]
    fn cap_is_enforced() {
        let a = seq(&[0.0; 11]);
        let err = summarize(&a, &a, &CostModel::warping_abs(), DEFAULT_CAP).unwrap_err();
        assert!(matches!(err, Error::OracleCapExceeded { .. }));
    }
}
