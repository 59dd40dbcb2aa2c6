use std::fmt::Write;

use super::{AlignMode, CostModel, DpTables, StateSequence, Step};
use crate::error::Result;

/// One column of an alignment: which positions (1-based) it consumes from
/// each sequence, the states compared and their cost.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedColumn {
    pub pos_a: Option<usize>,
    pub pos_b: Option<usize>,
    /// Compared state of `a`: the repeated last state under warping, `None`
    /// for a gap.
    pub state_a: Option<f64>,
    pub state_b: Option<f64>,
    pub cost: f64,
}

impl AlignedColumn {
    pub fn delay(&self) -> Option<i64> {
        match (self.pos_a, self.pos_b) {
            (Some(i), Some(j)) => Some(j as i64 - i as i64),
            _ => None,
        }
    }
}

/// One minimum-cost alignment, or `None` when no finite alignment exists.
pub fn optimal_alignment(
    a: &StateSequence,
    b: &StateSequence,
    model: &CostModel,
) -> Result<Option<Vec<AlignedColumn>>> {
    let mut t = DpTables::build_cost_table(a, b, model)?;
    let Some(path) = t.one_optimal_path() else {
        return Ok(None);
    };
    let (va, vb) = (a.values(), b.values());
    let warping = model.mode == AlignMode::Warping;
    let mut cols = Vec::with_capacity(path.len());
    for ((ti, tj), step) in path {
        let (pos_a, pos_b) = match step {
            None if warping => (Some(ti), Some(tj)),
            None => continue,
            Some(Step::Diag) => (Some(ti), Some(tj)),
            Some(Step::Up) => (Some(ti), None),
            Some(Step::Left) => (None, Some(tj)),
        };
        let state = |pos: Option<usize>, last: usize, v: &[f64]| match pos {
            Some(p) => Some(v[p - 1]),
            None if warping => Some(v[last - 1]),
            None => None,
        };
        let sa = state(pos_a, ti, va);
        let sb = state(pos_b, tj, vb);
        let cost = match (sa, sb) {
            (Some(x), Some(y)) => model.pair(x, y),
            (Some(x), None) | (None, Some(x)) => model.gap(x),
            (None, None) => unreachable!("a column consumes at least one state"),
        };
        cols.push(AlignedColumn {
            pos_a,
            pos_b,
            state_a: sa,
            state_b: sb,
            cost,
        });
    }
    Ok(Some(cols))
}

fn num(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:.4}")
    }
}

/// Plain-text table with one column per alignment column `k`: raw states,
/// compared states, cost, positions and delays.
pub fn render_alignment(a: &StateSequence, b: &StateSequence, cols: &[AlignedColumn]) -> String {
    let opt = |o: Option<String>| o.unwrap_or_default();
    let raw = |pos: Option<usize>, v: &[f64]| opt(pos.map(|p| num(v[p - 1])));
    let rows: Vec<(String, Vec<String>)> = vec![
        ("k".into(), (1..=cols.len()).map(|k| k.to_string()).collect()),
        (
            format!("{}[pos]", a.id()),
            cols.iter().map(|c| raw(c.pos_a, a.values())).collect(),
        ),
        (
            format!("{}[pos]", b.id()),
            cols.iter().map(|c| raw(c.pos_b, b.values())).collect(),
        ),
        (
            format!("{}'", a.id()),
            cols.iter().map(|c| c.state_a.map_or("_".into(), num)).collect(),
        ),
        (
            format!("{}'", b.id()),
            cols.iter().map(|c| c.state_b.map_or("_".into(), num)).collect(),
        ),
        ("w".into(), cols.iter().map(|c| num(c.cost)).collect()),
        (
            format!("pos {}", a.id()),
            cols.iter().map(|c| opt(c.pos_a.map(|p| p.to_string()))).collect(),
        ),
        (
            format!("pos {}", b.id()),
            cols.iter().map(|c| opt(c.pos_b.map(|p| p.to_string()))).collect(),
        ),
        (
            "delay".into(),
            cols.iter().map(|c| opt(c.delay().map(|d| d.to_string()))).collect(),
        ),
    ];
    let label_w = rows.iter().map(|(l, _)| l.chars().count()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols.len())
        .map(|k| rows.iter().map(|(_, r)| r[k].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (r, (label, cells)) in rows.iter().enumerate() {
        let _ = write!(out, "{label:<label_w$} |");
        for (cell, w) in cells.iter().zip(&widths) {
            let _ = write!(out, " {cell:>w$}");
        }
        out.push('\n');
        if r == 0 {
            let total = label_w + 2 + widths.iter().map(|w| w + 1).sum::<usize>();
            out.push_str(&"-".repeat(total));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(id: &str, v: &[f64]) -> StateSequence {
        StateSequence::new(id, v.to_vec()).unwrap()
    }

    #[test]
    fn warping_columns_cost_sums_to_minimum() {
        let a = seq("i", &[1., 1., 0., -1., -1., 1., 1., 2., 0., -1.]);
        let b = seq("j", &[0., 1., 1., 0., -1., 1., 1., 1., 2., 0.]);
        let cols = optimal_alignment(&a, &b, &CostModel::warping_abs()).unwrap().unwrap();
        assert_eq!(cols.iter().map(|c| c.cost).sum::<f64>(), 2.0);
        assert!(cols.iter().all(|c| c.state_a.is_some() && c.state_b.is_some()));
        assert_eq!(cols.first().unwrap().pos_a, Some(1));
        assert_eq!(cols.iter().filter_map(|c| c.pos_a).max(), Some(10));
        assert_eq!(cols.iter().filter_map(|c| c.pos_b).max(), Some(10));
        let text = render_alignment(&a, &b, &cols);
        assert!(text.starts_with("k "));
        assert_eq!(text.lines().count(), 10);
    }

    #[test]
    fn gap_columns_show_gaps() {
        let bits = |id: &str, s: &str| seq(id, &s.bytes().map(|c| f64::from(c - b'0')).collect::<Vec<_>>());
        let a = bits("i", "001000100");
        let b = bits("j", "000100010");
        let cols = optimal_alignment(&a, &b, &CostModel::gap_binary(3.0)).unwrap().unwrap();
        assert_eq!(cols.iter().map(|c| c.cost).sum::<f64>(), 2.0);
        assert_eq!(cols.iter().filter(|c| c.state_a.is_none()).count(), 1);
        assert_eq!(cols.iter().filter(|c| c.state_b.is_none()).count(), 1);
        assert_eq!(cols.len(), 10);
    }

    #[test]
    fn infeasible_pair_has_no_alignment() {
        let a = seq("a", &[1.0, 1.0]);
        let b = seq("b", &[1.0]);
        assert!(optimal_alignment(&a, &b, &CostModel::gap_binary(3.0)).unwrap().is_none());
    }
}
