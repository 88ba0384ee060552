use serde::{Deserialize, Serialize};

use super::channel::check_shape;
use super::{check_weights, Alphabet, Channel, ChannelDoc, FiniteDistribution, NORMALIZATION_TOL};
use crate::{Error, Result};

/// Probability mass over pairs `(row, col)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelDoc", into = "ChannelDoc")]
pub struct JointDistribution {
    rows: Alphabet,
    cols: Alphabet,
    mass: Vec<Vec<f64>>,
}

impl JointDistribution {
    pub fn new(rows: Alphabet, cols: Alphabet, mass: Vec<Vec<f64>>) -> Result<Self> {
        check_shape(&mass, rows.len(), cols.len())?;
        let mut total = 0.0;
        for row in &mass {
            total += check_weights(row)?;
        }
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { sum: total });
        }
        Ok(Self { rows, cols, mass })
    }

    /// Normalizes a matrix of non-negative weights (e.g. counts).
    pub fn from_weights(rows: Alphabet, cols: Alphabet, weights: Vec<Vec<f64>>) -> Result<Self> {
        check_shape(&weights, rows.len(), cols.len())?;
        let mut total = 0.0;
        for row in &weights {
            total += check_weights(row)?;
        }
        if total <= 0.0 {
            return Err(Error::AllZeroWeights);
        }
        let mass = weights
            .into_iter()
            .map(|r| r.into_iter().map(|w| w / total).collect())
            .collect();
        Ok(Self { rows, cols, mass })
    }

    pub(crate) fn from_parts(rows: Alphabet, cols: Alphabet, mass: Vec<Vec<f64>>) -> Self {
        Self { rows, cols, mass }
    }

    /// `P(x, y) = P(x) · P(y | x)`.
    pub fn from_source(source: &FiniteDistribution, channel: &Channel) -> Result<Self> {
        source.alphabet().ensure_same(channel.input(), "source vs channel input")?;
        let mass = source
            .probs()
            .iter()
            .zip(channel.rows())
            .map(|(p, row)| row.iter().map(|w| p * w).collect())
            .collect();
        Ok(Self::from_parts(
            channel.input().clone(),
            channel.output().clone(),
            mass,
        ))
    }

    /// Product law of two independent marginals.
    pub fn independent(rows: &FiniteDistribution, cols: &FiniteDistribution) -> Self {
        let mass = rows
            .probs()
            .iter()
            .map(|p| cols.probs().iter().map(|q| p * q).collect())
            .collect();
        Self::from_parts(rows.alphabet().clone(), cols.alphabet().clone(), mass)
    }

    pub fn row_alphabet(&self) -> &Alphabet {
        &self.rows
    }

    pub fn col_alphabet(&self) -> &Alphabet {
        &self.cols
    }

    pub fn mass(&self) -> &[Vec<f64>] {
        &self.mass
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.mass[row][col]
    }

    pub fn row_marginal(&self) -> FiniteDistribution {
        let probs = self.mass.iter().map(|r| r.iter().sum()).collect();
        FiniteDistribution::from_parts(self.rows.clone(), probs)
    }

    pub fn col_marginal(&self) -> FiniteDistribution {
        let mut probs = vec![0.0; self.cols.len()];
        for row in &self.mass {
            for (p, m) in probs.iter_mut().zip(row) {
                *p += m;
            }
        }
        FiniteDistribution::from_parts(self.cols.clone(), probs)
    }

    pub fn marginals(&self) -> (FiniteDistribution, FiniteDistribution) {
        (self.row_marginal(), self.col_marginal())
    }

    pub fn transpose(&self) -> JointDistribution {
        let mass = (0..self.cols.len())
            .map(|j| self.mass.iter().map(|r| r[j]).collect())
            .collect();
        Self::from_parts(self.cols.clone(), self.rows.clone(), mass)
    }

    pub fn total_mass(&self) -> f64 {
        self.mass.iter().flatten().sum()
    }

    /// Sum of absolute cell differences. Alphabets must match.
    pub fn l1_distance(&self, other: &JointDistribution) -> Result<f64> {
        self.rows.ensure_same(&other.rows, "row alphabet")?;
        self.cols.ensure_same(&other.cols, "col alphabet")?;
        Ok(self
            .mass
            .iter()
            .flatten()
            .zip(other.mass.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .sum())
    }

    pub fn into_doc(self) -> ChannelDoc {
        self.into()
    }
}

/// `joint_from`: builds `P(X, Y)` from a source and a channel.
pub fn joint_from(source: &FiniteDistribution, channel: &Channel) -> Result<JointDistribution> {
    JointDistribution::from_source(source, channel)
}

impl TryFrom<ChannelDoc> for JointDistribution {
    type Error = Error;

    fn try_from(doc: ChannelDoc) -> Result<Self> {
        Self::new(Alphabet::new(doc.input)?, Alphabet::new(doc.output)?, doc.rows)
    }
}

impl From<JointDistribution> for ChannelDoc {
    fn from(j: JointDistribution) -> Self {
        Self {
            input: j.rows.into(),
            output: j.cols.into(),
            rows: j.mass,
        }
    }
}
