use serde::{Deserialize, Serialize};

use crate::prob::{entropy, mutual_information, Alphabet, Channel, FiniteDistribution, JointDistribution};
use crate::{Error, Result};

/// A total function between alphabets, stored as a lookup table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterministicMapper {
    input: Alphabet,
    output: Alphabet,
    table: Vec<usize>,
}

impl DeterministicMapper {
    pub fn new(input: Alphabet, output: Alphabet, table: Vec<usize>) -> Result<Self> {
        if table.len() != input.len() {
            return Err(Error::LengthMismatch {
                expected: input.len(),
                actual: table.len(),
            });
        }
        if let Some(&bad) = table.iter().find(|&&y| y >= output.len()) {
            return Err(Error::InvalidParameter(format!(
                "output index {bad} outside alphabet of size {}",
                output.len()
            )));
        }
        Ok(Self { input, output, table })
    }

    pub fn input(&self) -> &Alphabet {
        &self.input
    }

    pub fn output(&self) -> &Alphabet {
        &self.output
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn to_channel(&self) -> Channel {
        let rows = self
            .table
            .iter()
            .map(|&y| {
                let mut row = vec![0.0; self.output.len()];
                row[y] = 1.0;
                row
            })
            .collect();
        Channel::from_parts(self.input.clone(), self.output.clone(), rows)
    }

    /// Joint law of `(X, G(X))`.
    pub fn joint(&self, input: &FiniteDistribution) -> Result<JointDistribution> {
        input.alphabet().ensure_same(&self.input, "input law vs mapper")?;
        let mass = input
            .probs()
            .iter()
            .zip(&self.table)
            .map(|(&p, &y)| {
                let mut row = vec![0.0; self.output.len()];
                row[y] = p;
                row
            })
            .collect();
        Ok(JointDistribution::from_parts(self.input.clone(), self.output.clone(), mass))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeterministicCapacity {
    pub i_xy: f64,
    pub h_y: f64,
}

/// `I(X, G(X))` and `H(G(X))`, which coincide for any input law.
pub fn deterministic_capacity(g: &DeterministicMapper, input: &FiniteDistribution) -> Result<DeterministicCapacity> {
    let joint = g.joint(input)?;
    let i_xy = mutual_information(&joint);
    let h_y = entropy(&joint.col_marginal());
    debug_assert!((i_xy - h_y).abs() <= 1e-12, "I = {i_xy}, H(Y) = {h_y}");
    Ok(DeterministicCapacity { i_xy, h_y })
}
