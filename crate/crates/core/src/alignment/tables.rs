//! Dynamic-programming lattice for one pair of sequences.
//!
//! Cells are `(ti, tj)` with `0 <= ti <= len_a` and `0 <= tj <= len_b`, stored
//! row-major in dense tables. Warping alignments start at `(1, 1)` and leave
//! row 0 and column 0 at `+inf`; gap alignments start at `(0, 0)`.
//!
//! The stages mirror how the delay average is obtained:
//!
//! 1. `D`: minimum prefix alignment cost for every cell.
//! 2. `E*`: predecessor edges that reach each cell's minimum, kept only for
//!    cells that lie on a minimum-cost path into the end cell.
//! 3. `B`: number of `E*` paths from a cell to the end.
//! 4. `F`: number of `E*` paths from the start to a cell, evaluated only on
//!    `E*` cells since `B` has already marked them.
//! 5. Sum over diagonal `E*` edges of `(tj - ti) * F(ti-1, tj-1) * B(ti, tj)`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::cost::{AlignMode, CostModel};
use super::StateSequence;
use crate::error::{Error, Result};

/// Predecessor `(ti, tj - 1)`: the column holds only a state of `b`.
pub const FROM_LEFT: u8 = 1;
/// Predecessor `(ti - 1, tj)`: the column holds only a state of `a`.
pub const FROM_UP: u8 = 2;
/// Predecessor `(ti - 1, tj - 1)`: a matched column.
pub const FROM_DIAG: u8 = 4;

/// A lattice cell `(ti, tj)`, 1-based sequence positions (0 = empty prefix).
pub type Cell = (usize, usize);

/// Direction of one step along a lattice path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Left,
    Up,
    Diag,
}

impl Step {
    fn bit(self) -> u8 {
        match self {
            Step::Left => FROM_LEFT,
            Step::Up => FROM_UP,
            Step::Diag => FROM_DIAG,
        }
    }

    fn origin(self, (ti, tj): Cell) -> Cell {
        match self {
            Step::Left => (ti, tj - 1),
            Step::Up => (ti - 1, tj),
            Step::Diag => (ti - 1, tj - 1),
        }
    }
}

const STEPS: [Step; 3] = [Step::Diag, Step::Up, Step::Left];

thread_local! {
    /// Reused backward and forward count buffers for the 128-bit path.
    static COUNT_SCRATCH: std::cell::RefCell<(Vec<u128>, Vec<u128>)> = Default::default();
}

#[derive(Debug, Clone)]
pub struct DpTables {
    model: CostModel,
    a: Vec<f64>,
    b: Vec<f64>,
    cols: usize,
    start: Cell,
    cost: Vec<f64>,
    preds: Vec<u8>,
    on_path: Option<Vec<bool>>,
    backward: Option<Vec<BigUint>>,
    forward: Option<Vec<BigUint>>,
}

impl DpTables {
    /// Fills `D` for the pair. Row-major order; `D(len_a, len_b)` is the
    /// minimum alignment cost.
    pub fn build_cost_table(
        a: &StateSequence,
        b: &StateSequence,
        model: &CostModel,
    ) -> Result<Self> {
        if model.mode == AlignMode::Warping {
            for s in [a, b] {
                if s.is_empty() {
                    return Err(Error::EmptySequence { id: s.id().to_owned() });
                }
            }
        }
        if !(model.tolerance >= 0.0 && model.tolerance.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be finite and non-negative, got {}",
                model.tolerance
            )));
        }
        let (n, m) = (a.len(), b.len());
        let cols = m + 1;
        let start = match model.mode {
            AlignMode::Warping => (1, 1),
            AlignMode::Gap => (0, 0),
        };
        let mut tables = DpTables {
            model: model.clone(),
            a: a.values().to_vec(),
            b: b.values().to_vec(),
            cols,
            start,
            cost: vec![f64::INFINITY; (n + 1) * cols],
            preds: vec![0; (n + 1) * cols],
            on_path: None,
            backward: None,
            forward: None,
        };
        tables.fill_costs();
        Ok(tables)
    }

    fn fill_costs(&mut self) {
        let (n, m) = (self.a.len(), self.b.len());
        let cols = self.cols;
        let lo = self.start.0;
        let model = &self.model;
        let cost = &mut self.cost;
        match model.mode {
            AlignMode::Warping => {
                // Every step into (ti, tj) costs w(a[ti], b[tj]), so it is added
                // once after taking the smallest predecessor.
                cost[cols + 1] = model.pair(self.a[0], self.b[0]);
                for ti in 1..=n {
                    let av = self.a[ti - 1];
                    for tj in 1..=m {
                        if ti == 1 && tj == 1 {
                            continue;
                        }
                        let i = ti * cols + tj;
                        let prev = cost[i - 1].min(cost[i - cols]).min(cost[i - cols - 1]);
                        cost[i] = prev + model.pair(av, self.b[tj - 1]);
                    }
                }
            }
            AlignMode::Gap => {
                let gap_b: Vec<f64> = self.b.iter().map(|&v| model.gap(v)).collect();
                cost[0] = 0.0;
                for ti in lo..=n {
                    let (av, gap_a) = match ti {
                        0 => (f64::NAN, f64::NAN),
                        _ => (self.a[ti - 1], model.gap(self.a[ti - 1])),
                    };
                    for tj in lo..=m {
                        let i = ti * cols + tj;
                        let mut best = f64::INFINITY;
                        if ti > 0 && tj > 0 {
                            best = cost[i - cols - 1] + model.pair(av, self.b[tj - 1]);
                        }
                        if ti > 0 {
                            best = best.min(cost[i - cols] + gap_a);
                        }
                        if tj > 0 {
                            best = best.min(cost[i - 1] + gap_b[tj - 1]);
                        }
                        if ti > 0 || tj > 0 {
                            cost[i] = best;
                        }
                    }
                }
            }
        }
    }

    /// `D(origin) + step cost` for arriving at `cell` via `step`, if the
    /// origin is inside the lattice.
    #[inline]
    fn step_total(&self, cell: Cell, step: Step) -> Option<f64> {
        let (ti, tj) = cell;
        let lo = self.start.0;
        let ok = match step {
            Step::Left => tj > lo,
            Step::Up => ti > lo,
            Step::Diag => ti > lo && tj > lo,
        };
        if !ok {
            return None;
        }
        let origin = step.origin(cell);
        let prev = self.cost[self.idx(origin)];
        Some(prev + self.step_cost(cell, step))
    }

    #[inline]
    fn step_cost(&self, (ti, tj): Cell, step: Step) -> f64 {
        let model = &self.model;
        match (model.mode, step) {
            (AlignMode::Warping, _) | (AlignMode::Gap, Step::Diag) => {
                model.pair(self.a[ti - 1], self.b[tj - 1])
            }
            (AlignMode::Gap, Step::Up) => model.gap(self.a[ti - 1]),
            (AlignMode::Gap, Step::Left) => model.gap(self.b[tj - 1]),
        }
    }

    #[inline]
    fn idx(&self, (ti, tj): Cell) -> usize {
        ti * self.cols + tj
    }

    #[inline]
    fn cell(&self, idx: usize) -> Cell {
        (idx / self.cols, idx % self.cols)
    }

    pub fn mode(&self) -> AlignMode {
        self.model.mode
    }

    pub fn start(&self) -> Cell {
        self.start
    }

    pub fn end(&self) -> Cell {
        (self.a.len(), self.b.len())
    }

    /// `D(ti, tj)`.
    pub fn cost_at(&self, cell: Cell) -> f64 {
        self.cost[self.idx(cell)]
    }

    pub fn min_cost(&self) -> f64 {
        self.cost_at(self.end())
    }

    /// Marks `E*`: scans cells in reverse lexicographic order from the end,
    /// recording every predecessor whose total reaches the cell's minimum
    /// within the model tolerance. Only cells reached this way are kept, so
    /// every recorded edge lies on a start-to-end minimum-cost path.
    pub fn build_min_edge_graph(&mut self) {
        if self.on_path.is_some() {
            return;
        }
        let mut on_path = vec![false; self.cost.len()];
        let end = self.idx(self.end());
        if self.cost[end].is_finite() {
            on_path[end] = true;
        }
        let tol = self.model.tolerance;
        let start = self.idx(self.start);
        for i in (start..=end).rev() {
            if !on_path[i] {
                continue;
            }
            let cell = self.cell(i);
            let here = self.cost[i];
            let mut bits = 0u8;
            for step in STEPS {
                if let Some(total) = self.step_total(cell, step) {
                    if total.is_finite() && total <= here + tol {
                        bits |= step.bit();
                        on_path[self.idx(step.origin(cell))] = true;
                    }
                }
            }
            self.preds[i] = bits;
        }
        self.on_path = Some(on_path);
    }

    fn on_path(&self) -> &[bool] {
        self.on_path
            .as_deref()
            .expect("min edge graph is built before use")
    }

    pub fn is_on_path(&mut self, cell: Cell) -> bool {
        self.build_min_edge_graph();
        self.on_path()[self.idx(cell)]
    }

    /// `E*` as `(origin, target)` pairs in lexicographic order of the target.
    pub fn estar_edges(&mut self) -> Vec<(Cell, Cell)> {
        self.build_min_edge_graph();
        let on_path = self.on_path();
        let mut edges = Vec::new();
        for (i, &on) in on_path.iter().enumerate() {
            if !on {
                continue;
            }
            let cell = self.cell(i);
            for step in [Step::Left, Step::Up, Step::Diag] {
                if self.preds[i] & step.bit() != 0 {
                    edges.push((step.origin(cell), cell));
                }
            }
        }
        edges
    }

    /// Computes `B` and returns `B(start)`, the number of minimum-cost
    /// alignments.
    pub fn count_backward(&mut self) -> BigUint {
        self.build_min_edge_graph();
        if self.backward.is_none() {
            let on_path = self.on_path();
            let mut back = vec![BigUint::zero(); self.cost.len()];
            let end = self.idx(self.end());
            if on_path[end] {
                back[end] = BigUint::one();
            }
            let start = self.idx(self.start);
            for i in (start..=end).rev() {
                if !on_path[i] || back[i].is_zero() {
                    continue;
                }
                let cell = self.cell(i);
                let here = back[i].clone();
                for step in STEPS {
                    if self.preds[i] & step.bit() != 0 {
                        back[self.idx(step.origin(cell))] += &here;
                    }
                }
            }
            self.backward = Some(back);
        }
        self.backward_at(self.start)
    }

    /// Computes `F` on `E*` cells and returns `F(end)`.
    pub fn count_forward(&mut self) -> BigUint {
        if self.backward.is_none() {
            self.count_backward();
        }
        if self.forward.is_none() {
            let on_path = self.on_path();
            let mut fwd = vec![BigUint::zero(); self.cost.len()];
            let start = self.idx(self.start);
            let end = self.idx(self.end());
            if on_path[start] {
                fwd[start] = BigUint::one();
            }
            for i in start + 1..=end {
                if !on_path[i] {
                    continue;
                }
                let cell = self.cell(i);
                let mut acc = BigUint::zero();
                for step in STEPS {
                    if self.preds[i] & step.bit() != 0 {
                        acc += &fwd[self.idx(step.origin(cell))];
                    }
                }
                fwd[i] = acc;
            }
            self.forward = Some(fwd);
        }
        self.forward_at(self.end())
    }

    /// `B(cell)`, zero off `E*` or before `count_backward`.
    pub fn backward_at(&self, cell: Cell) -> BigUint {
        self.backward
            .as_ref()
            .map(|b| b[self.idx(cell)].clone())
            .unwrap_or_default()
    }

    /// `F(cell)`, zero off `E*` or before `count_forward`.
    pub fn forward_at(&self, cell: Cell) -> BigUint {
        self.forward
            .as_ref()
            .map(|f| f[self.idx(cell)].clone())
            .unwrap_or_default()
    }

    /// Exact sum, over all minimum-cost alignments, of `tj - ti` across
    /// matched positions.
    pub fn sum_matched_delays(&mut self) -> BigInt {
        self.count_forward();
        let on_path = self.on_path();
        let back = self.backward.as_ref().expect("backward counts computed");
        let fwd = self.forward.as_ref().expect("forward counts computed");
        let mut total = BigInt::zero();
        for (i, &on) in on_path.iter().enumerate() {
            if !on || self.preds[i] & FROM_DIAG == 0 {
                continue;
            }
            let (ti, tj) = self.cell(i);
            let delay = tj as i64 - ti as i64;
            if delay == 0 {
                continue;
            }
            let through = &fwd[self.idx((ti - 1, tj - 1))] * &back[i];
            total += BigInt::from(through) * delay;
        }
        total
    }

    /// Path count and delay sum with checked 128-bit arithmetic. `None` on
    /// overflow; the caller then falls back to the big-integer stages.
    pub(crate) fn counts_u128(&mut self) -> Option<(u128, i128)> {
        self.build_min_edge_graph();
        let len = self.cost.len();
        COUNT_SCRATCH.with(|cell| {
            let mut scratch = cell.borrow_mut();
            let (back, fwd) = &mut *scratch;
            // Only on-path entries are read, and each is reset before use, so
            // the buffers are never cleared as a whole.
            if back.len() < len {
                back.resize(len, 0);
                fwd.resize(len, 0);
            }
            self.counts_u128_in(&mut back[..len], &mut fwd[..len])
        })
    }

    fn counts_u128_in(&self, back: &mut [u128], fwd: &mut [u128]) -> Option<(u128, i128)> {
        let on_path = self.on_path();
        let start = self.idx(self.start);
        let end = self.idx(self.end());
        if !on_path[end] {
            return Some((0, 0));
        }
        for i in start..=end {
            if on_path[i] {
                back[i] = 0;
            }
        }
        back[end] = 1;
        for i in (start..=end).rev() {
            if !on_path[i] {
                continue;
            }
            let cell = self.cell(i);
            let here = back[i];
            for step in STEPS {
                if self.preds[i] & step.bit() != 0 {
                    let o = self.idx(step.origin(cell));
                    back[o] = back[o].checked_add(here)?;
                }
            }
        }
        fwd[start] = 1;
        let mut total: i128 = 0;
        for i in start + 1..=end {
            if !on_path[i] {
                continue;
            }
            let cell = self.cell(i);
            let mut acc = 0u128;
            for step in STEPS {
                if self.preds[i] & step.bit() != 0 {
                    acc = acc.checked_add(fwd[self.idx(step.origin(cell))])?;
                }
            }
            fwd[i] = acc;
            if self.preds[i] & FROM_DIAG != 0 {
                let (ti, tj) = cell;
                let delay = tj as i128 - ti as i128;
                if delay != 0 {
                    let through = fwd[self.idx((ti - 1, tj - 1))].checked_mul(back[i])?;
                    let through = i128::try_from(through).ok()?;
                    total = total.checked_add(through.checked_mul(delay)?)?;
                }
            }
        }
        Some((back[start], total))
    }

    /// One minimum-cost path from start to end, preferring diagonal, then
    /// up, then left steps while walking back from the end.
    pub fn one_optimal_path(&mut self) -> Option<Vec<(Cell, Option<Step>)>> {
        self.build_min_edge_graph();
        let end = self.end();
        if !self.on_path()[self.idx(end)] {
            return None;
        }
        let mut path = Vec::new();
        let mut cell = end;
        while cell != self.start {
            let bits = self.preds[self.idx(cell)];
            let step = STEPS.into_iter().find(|s| bits & s.bit() != 0)?;
            path.push((cell, Some(step)));
            cell = step.origin(cell);
        }
        path.push((self.start, None));
        path.reverse();
        Some(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alignment::cost::CostModel;

    fn seq(id: &str, v: &[f64]) -> StateSequence {
        StateSequence::new(id, v.to_vec()).unwrap()
    }

    fn example1() -> (StateSequence, StateSequence) {
        (
            seq("i", &[1., 1., 0., -1., -1., 1., 1., 2., 0., -1.]),
            seq("j", &[0., 1., 1., 0., -1., 1., 1., 1., 2., 0.]),
        )
    }

    fn bits(s: &str) -> StateSequence {
        let v = s.bytes().map(|c| f64::from(c - b'0')).collect();
        StateSequence::new(s, v).unwrap()
    }

    #[test]
    fn example1_cost_counts_and_delay() {
        let (a, b) = example1();
        let mut t = DpTables::build_cost_table(&a, &b, &CostModel::warping_abs()).unwrap();
        assert_eq!(t.min_cost(), 2.0);
        assert_eq!(t.count_backward(), BigUint::from(20u32));
        assert_eq!(t.count_forward(), BigUint::from(20u32));
        assert_eq!(t.sum_matched_delays(), BigInt::from(89));
    }

    #[test]
    fn example2_cost_counts_and_delay() {
        let (a, b) = (bits("001000100"), bits("000100010"));
        let model = CostModel::gap_binary(3.0);
        let mut t = DpTables::build_cost_table(&a, &b, &model).unwrap();
        assert_eq!(t.min_cost(), 2.0);
        assert_eq!(t.start(), (0, 0));
        assert_eq!(t.count_backward(), BigUint::from(6u32));
        assert_eq!(t.count_forward(), BigUint::from(6u32));
        assert_eq!(t.sum_matched_delays(), BigInt::from(39));
    }

    #[test]
    fn u128_path_agrees_with_big_path() {
        let (a, b) = example1();
        let mut t = DpTables::build_cost_table(&a, &b, &CostModel::warping_abs()).unwrap();
        assert_eq!(t.counts_u128(), Some((20, 89)));
    }

    #[test]
    fn single_cell_lattice() {
        let a = seq("a", &[3.0]);
        let mut t = DpTables::build_cost_table(&a, &a, &CostModel::warping_abs()).unwrap();
        assert_eq!(t.min_cost(), 0.0);
        assert!(t.estar_edges().is_empty());
        assert_eq!(t.count_backward(), BigUint::one());
        assert_eq!(t.sum_matched_delays(), BigInt::zero());
    }

    #[test]
    fn unique_diagonal_path_has_unit_forward_counts() {
        let a = seq("a", &[0., 10., 20., 30.]);
        let mut t = DpTables::build_cost_table(&a, &a, &CostModel::warping_abs()).unwrap();
        assert_eq!(t.count_backward(), BigUint::one());
        t.count_forward();
        for k in 1..=4 {
            assert_eq!(t.forward_at((k, k)), BigUint::one());
        }
        assert_eq!(t.estar_edges().len(), 3);
    }

    #[test]
    fn warping_rejects_empty_sequence() {
        let a = seq("a", &[]);
        let b = seq("b", &[1.0]);
        let err = DpTables::build_cost_table(&a, &b, &CostModel::warping_abs()).unwrap_err();
        assert!(matches!(err, Error::EmptySequence { .. }));
    }

    #[test]
    fn gap_mode_accepts_null_strings() {
        let a = seq("a", &[]);
        let b = bits("00");
        let mut t = DpTables::build_cost_table(&a, &b, &CostModel::gap_binary(3.0)).unwrap();
        assert_eq!(t.min_cost(), 2.0);
        assert_eq!(t.count_backward(), BigUint::one());
        let mut e = DpTables::build_cost_table(&a, &a, &CostModel::gap_binary(3.0)).unwrap();
        assert_eq!(e.min_cost(), 0.0);
        assert_eq!(e.count_backward(), BigUint::one());
    }

    #[test]
    fn infinite_cost_pair_has_no_alignment() {
        // A 1-state cannot face a gap, and `b` is too short to absorb both pulses.
        let a = bits("11");
        let b = bits("1");
        let mut t = DpTables::build_cost_table(&a, &b, &CostModel::gap_binary(3.0)).unwrap();
        assert!(t.min_cost().is_infinite());
        assert!(t.estar_edges().is_empty());
        assert_eq!(t.count_backward(), BigUint::zero());
        assert_eq!(t.counts_u128(), Some((0, 0)));
    }

    #[test]
    fn one_optimal_path_has_min_cost() {
        let (a, b) = example1();
        let model = CostModel::warping_abs();
        let mut t = DpTables::build_cost_table(&a, &b, &model).unwrap();
        let path = t.one_optimal_path().unwrap();
        assert_eq!(path.first().unwrap().0, (1, 1));
        assert_eq!(path.last().unwrap().0, (10, 10));
        let total: f64 = path
            .iter()
            .map(|&((ti, tj), _)| model.pair(a.values()[ti - 1], b.values()[tj - 1]))
            .sum();
        assert_eq!(total, 2.0);
    }
}
