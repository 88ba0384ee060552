use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Alphabet, JointDistribution};
use crate::{Error, Result};

/// Observed `(row_label, col_label)` pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleBatch {
    pairs: Vec<(String, String)>,
}

impl SampleBatch {
    pub fn new(pairs: Vec<(String, String)>) -> Self {
        Self { pairs }
    }

    pub fn push(&mut self, row: impl Into<String>, col: impl Into<String>) {
        self.pairs.push((row.into(), col.into()));
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }

    pub fn count(&self) -> usize {
        self.pairs.len()
    }
}

impl FromIterator<(String, String)> for SampleBatch {
    fn from_iter<T: IntoIterator<Item = (String, String)>>(iter: T) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BiasCorrection {
    None,
    MillerMadow,
}

/// Side information from an empirical estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateMeta {
    pub count: usize,
    /// Cells with at least one observation.
    pub nonzero_cells: usize,
    /// Additive Miller–Madow term `(K - 1) / (2 N ln 2)` in bits, when requested.
    pub entropy_bias_correction: Option<f64>,
}

/// Plug-in joint from counted pairs.
pub fn empirical_joint(
    samples: &SampleBatch,
    rows: &Alphabet,
    cols: &Alphabet,
    correction: BiasCorrection,
) -> Result<(JointDistribution, EstimateMeta)> {
    let n = samples.count();
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let row_index: HashMap<&str, usize> =
        rows.labels().iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let col_index: HashMap<&str, usize> =
        cols.labels().iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();

    let mut counts = vec![vec![0u64; cols.len()]; rows.len()];
    for (r, c) in samples.pairs() {
        let i = *row_index
            .get(r.as_str())
            .ok_or_else(|| Error::UnknownLabel(r.clone()))?;
        let j = *col_index
            .get(c.as_str())
            .ok_or_else(|| Error::UnknownLabel(c.clone()))?;
        counts[i][j] += 1;
    }
    Ok(joint_from_counts(rows, cols, &counts, correction))
}

pub(crate) fn joint_from_counts(
    rows: &Alphabet,
    cols: &Alphabet,
    counts: &[Vec<u64>],
    correction: BiasCorrection,
) -> (JointDistribution, EstimateMeta) {
    let n: u64 = counts.iter().flatten().sum();
    let nonzero_cells = counts.iter().flatten().filter(|&&c| c > 0).count();
    let mass = counts
        .iter()
        .map(|r| r.iter().map(|&c| c as f64 / n as f64).collect())
        .collect();
    let entropy_bias_correction = match correction {
        BiasCorrection::None => None,
        BiasCorrection::MillerMadow => Some(
            (nonzero_cells as f64 - 1.0) / (2.0 * n as f64 * std::f64::consts::LN_2),
        ),
    };
    (
        JointDistribution::from_parts(rows.clone(), cols.clone(), mass),
        EstimateMeta {
            count: n as usize,
            nonzero_cells,
            entropy_bias_correction,
        },
    )
}
