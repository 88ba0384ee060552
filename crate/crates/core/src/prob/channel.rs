use serde::{Deserialize, Serialize};

use super::{check_probs, check_weights, Alphabet, FiniteDistribution, JointDistribution};
use crate::{Error, Result};

/// A row-stochastic matrix: `rows[i][j] = P(output = j | input = i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelDoc", into = "ChannelDoc")]
pub struct Channel {
    input: Alphabet,
    output: Alphabet,
    rows: Vec<Vec<f64>>,
}

/// JSON shape `{"input": [...], "output": [...], "rows": [[...]]}`.
///
/// Joint distributions use the same document, with `rows` holding mass.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelDoc {
    pub input: Vec<String>,
    pub output: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub(crate) fn check_shape(rows: &[Vec<f64>], n_rows: usize, n_cols: usize) -> Result<()> {
    if rows.len() != n_rows {
        return Err(Error::LengthMismatch {
            expected: n_rows,
            actual: rows.len(),
        });
    }
    for row in rows {
        if row.len() != n_cols {
            return Err(Error::LengthMismatch {
                expected: n_cols,
                actual: row.len(),
            });
        }
    }
    Ok(())
}

impl Channel {
    /// Strict constructor; every row must sum to 1 within tolerance.
    pub fn new(input: Alphabet, output: Alphabet, rows: Vec<Vec<f64>>) -> Result<Self> {
        check_shape(&rows, input.len(), output.len())?;
        for row in &rows {
            check_probs(row)?;
        }
        Ok(Self { input, output, rows })
    }

    /// Normalizes each row of non-negative weights.
    pub fn from_weights(input: Alphabet, output: Alphabet, weights: Vec<Vec<f64>>) -> Result<Self> {
        check_shape(&weights, input.len(), output.len())?;
        let mut rows = weights;
        for row in &mut rows {
            let sum = check_weights(row)?;
            if sum <= 0.0 {
                return Err(Error::AllZeroWeights);
            }
            row.iter_mut().for_each(|w| *w /= sum);
        }
        Ok(Self { input, output, rows })
    }

    pub(crate) fn from_parts(input: Alphabet, output: Alphabet, rows: Vec<Vec<f64>>) -> Self {
        Self { input, output, rows }
    }

    /// Noiseless channel over one alphabet.
    pub fn identity(alphabet: Alphabet) -> Self {
        let n = alphabet.len();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::from_parts(alphabet.clone(), alphabet, rows)
    }

    /// Every input produces the same output law.
    pub fn constant(input: Alphabet, output: &FiniteDistribution) -> Self {
        let rows = vec![output.probs().to_vec(); input.len()];
        Self::from_parts(input, output.alphabet().clone(), rows)
    }

    /// Binary symmetric channel with crossover probability `p` over `{0, 1}`.
    pub fn binary_symmetric(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("crossover {p} outside [0, 1]")));
        }
        let bits = Alphabet::new(["0", "1"])?;
        Ok(Self::from_parts(
            bits.clone(),
            bits,
            vec![vec![1.0 - p, p], vec![p, 1.0 - p]],
        ))
    }

    pub fn input(&self) -> &Alphabet {
        &self.input
    }

    pub fn output(&self) -> &Alphabet {
        &self.output
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, input: usize) -> &[f64] {
        &self.rows[input]
    }

    /// Cascade `self` then `next`: `P(z|x) = Σ_y P(y|x) P(z|y)`.
    pub fn compose(&self, next: &Channel) -> Result<Channel> {
        self.output.ensure_same(&next.input, "cascade")?;
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut out = vec![0.0; next.output.len()];
                for (p, next_row) in row.iter().zip(&next.rows) {
                    if *p == 0.0 {
                        continue;
                    }
                    for (o, q) in out.iter_mut().zip(next_row) {
                        *o += p * q;
                    }
                }
                out
            })
            .collect();
        Ok(Channel::from_parts(self.input.clone(), next.output.clone(), rows))
    }

    /// Output law when the input is drawn from `source`.
    pub fn push_forward(&self, source: &FiniteDistribution) -> Result<FiniteDistribution> {
        Ok(JointDistribution::from_source(source, self)?.col_marginal())
    }

    pub fn into_doc(self) -> ChannelDoc {
        self.into()
    }
}

impl TryFrom<ChannelDoc> for Channel {
    type Error = Error;

    fn try_from(doc: ChannelDoc) -> Result<Self> {
        Self::new(Alphabet::new(doc.input)?, Alphabet::new(doc.output)?, doc.rows)
    }
}

impl From<Channel> for ChannelDoc {
    fn from(c: Channel) -> Self {
        Self {
            input: c.input.into(),
            output: c.output.into(),
            rows: c.rows,
        }
    }
}
