use rayon::prelude::*;

use super::PropagationGraph;
use crate::alignment::{align_stats, CostModel, StateSequence};
use crate::error::{Error, Result};

/// Antisymmetric `n × n` matrix; `get(i, j)` is the delay of `j` from `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdMatrix {
    n: usize,
    values: Vec<f64>,
}

impl AdMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            values: vec![0.0; n * n],
        }
    }

    /// Fills the upper triangle from `f(i, j)`, `i < j`, and mirrors it with
    /// the opposite sign.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                m.set_pair(i, j, f(i, j));
            }
        }
        m
    }

    /// Row-major values; not checked for antisymmetry.
    pub fn from_rows(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::Format(format!(
                "matrix needs {} values, got {}",
                n * n,
                values.len()
            )));
        }
        Ok(Self { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// Sets `(i, j)` to `v` and `(j, i)` to `-v`.
    pub fn set_pair(&mut self, i: usize, j: usize, v: f64) {
        self.values[i * self.n + j] = v;
        self.values[j * self.n + i] = -v;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.n.max(1))
    }

    /// `|AD|` of every unordered pair with a non-zero value, i.e. the positive
    /// value of each oriented pair.
    pub fn oriented_magnitudes(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let v = self.get(i, j);
                if v != 0.0 {
                    out.push(v.abs());
                }
            }
        }
        out
    }
}

pub(crate) fn check_dataset(sequences: &[StateSequence]) -> Result<usize> {
    if sequences.len() < 2 {
        return Err(Error::TooFewIndividuals {
            found: sequences.len(),
        });
    }
    let t = sequences[0].len();
    for s in sequences {
        if s.len() != t {
            return Err(Error::LengthMismatch {
                id: s.id().to_owned(),
                expected: t,
                found: s.len(),
            });
        }
    }
    Ok(t)
}

/// Average delay sums for every unordered pair, each aligned once.
///
/// Pairs run in parallel on the current rayon pool; the result does not
/// depend on scheduling.
pub fn compute_ad_matrix(sequences: &[StateSequence], model: &CostModel) -> Result<AdMatrix> {
    check_dataset(sequences)?;
    let n = sequences.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let values = pairs
        .par_iter()
        .map(|&(i, j)| align_stats(&sequences[i], &sequences[j], model).map(|s| s.avg_delay))
        .collect::<Result<Vec<f64>>>()?;
    let mut m = AdMatrix::zeros(n);
    for (&(i, j), v) in pairs.iter().zip(values) {
        m.set_pair(i, j, v);
    }
    Ok(m)
}

/// Edge `i -> j` for every strictly positive `ad(i, j)`.
pub fn orient_edges(ad: &AdMatrix) -> PropagationGraph {
    let mut g = PropagationGraph::new(ad.n());
    for i in 0..ad.n() {
        for j in 0..ad.n() {
            let v = ad.get(i, j);
            if i != j && v > 0.0 {
                g.insert(i, j, v);
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example1_pair_matrix() {
        let a = StateSequence::new("i", vec![1., 1., 0., -1., -1., 1., 1., 2., 0., -1.]).unwrap();
        let b = StateSequence::new("j", vec![0., 1., 1., 0., -1., 1., 1., 1., 2., 0.]).unwrap();
        let m = compute_ad_matrix(&[a, b], &CostModel::warping_abs()).unwrap();
        assert_eq!(m.get(0, 1), 4.45);
        assert_eq!(m.get(1, 0), -4.45);
        assert_eq!(m.get(0, 0), 0.0);
        let g = orient_edges(&m);
        assert_eq!(g.edge_set(), [(0, 1)].into());
    }

    #[test]
    fn zero_average_gives_no_edge() {
        let m = AdMatrix::from_upper(3, |i, j| if (i, j) == (0, 1) { 0.0 } else { 2.0 });
        let g = orient_edges(&m);
        assert!(!g.contains(0, 1) && !g.contains(1, 0));
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn rejects_single_individual() {
        let a = StateSequence::new("a", vec![1.0]).unwrap();
        let err = compute_ad_matrix(&[a], &CostModel::warping_abs()).unwrap_err();
        assert_eq!(err.to_string(), "need ≥ 2 individuals, got 1");
    }

    #[test]
    fn rejects_length_mismatch() {
        let a = StateSequence::new("a", vec![1.0, 2.0]).unwrap();
        let b = StateSequence::new("b", vec![1.0]).unwrap();
        assert!(matches!(
            compute_ad_matrix(&[a, b], &CostModel::warping_abs()),
            Err(Error::LengthMismatch { .. })
        ));
    }
}
