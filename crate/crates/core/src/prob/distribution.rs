use serde::{Deserialize, Serialize};

use super::{check_probs, check_weights, Alphabet};
use crate::{Error, Result};

/// A probability vector over a finite alphabet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionDoc", into = "DistributionDoc")]
pub struct FiniteDistribution {
    alphabet: Alphabet,
    probs: Vec<f64>,
}

/// JSON shape `{"alphabet": [...], "probs": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionDoc {
    pub alphabet: Vec<String>,
    pub probs: Vec<f64>,
}

impl FiniteDistribution {
    /// Strict constructor: `probs` must already sum to 1 within
    /// [`NORMALIZATION_TOL`](super::NORMALIZATION_TOL). Values are kept as given.
    pub fn new(alphabet: Alphabet, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != alphabet.len() {
            return Err(Error::LengthMismatch {
                expected: alphabet.len(),
                actual: probs.len(),
            });
        }
        check_probs(&probs)?;
        Ok(Self { alphabet, probs })
    }

    /// Normalizes non-negative weights into a distribution.
    pub fn from_weights(weights: &[f64], alphabet: Alphabet) -> Result<Self> {
        if weights.len() != alphabet.len() {
            return Err(Error::LengthMismatch {
                expected: alphabet.len(),
                actual: weights.len(),
            });
        }
        let sum = check_weights(weights)?;
        if sum <= 0.0 {
            return Err(Error::AllZeroWeights);
        }
        let probs = weights.iter().map(|w| w / sum).collect();
        Ok(Self { alphabet, probs })
    }

    pub fn uniform(alphabet: Alphabet) -> Self {
        let n = alphabet.len();
        Self {
            alphabet,
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub fn point_mass(alphabet: Alphabet, index: usize) -> Self {
        let mut probs = vec![0.0; alphabet.len()];
        probs[index] = 1.0;
        Self { alphabet, probs }
    }

    /// Crate-internal constructor for vectors produced by exact arithmetic on
    /// valid objects (marginals, compositions).
    pub(crate) fn from_parts(alphabet: Alphabet, probs: Vec<f64>) -> Self {
        debug_assert_eq!(alphabet.len(), probs.len());
        Self { alphabet, probs }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, index: usize) -> f64 {
        self.probs[index]
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn into_doc(self) -> DistributionDoc {
        self.into()
    }
}

impl TryFrom<DistributionDoc> for FiniteDistribution {
    type Error = Error;

    fn try_from(doc: DistributionDoc) -> Result<Self> {
        Self::new(Alphabet::new(doc.alphabet)?, doc.probs)
    }
}

impl From<FiniteDistribution> for DistributionDoc {
    fn from(d: FiniteDistribution) -> Self {
        Self {
            alphabet: d.alphabet.into(),
            probs: d.probs,
        }
    }
}

/// Convenience: `make_distribution` in the weights form.
pub fn make_distribution(weights: &[f64], alphabet: Alphabet) -> Result<FiniteDistribution> {
    FiniteDistribution::from_weights(weights, alphabet)
}
