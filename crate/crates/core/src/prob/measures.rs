//! Entropy, conditional entropy, mutual information and KL divergence, in bits.

use super::{FiniteDistribution, JointDistribution};
use crate::{Error, Result};

/// `-Σ p log2 p` over a raw probability slice.
pub fn entropy_of(probs: &[f64]) -> f64 {
    let h: f64 = probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    h.max(0.0)
}

pub fn entropy(d: &FiniteDistribution) -> f64 {
    entropy_of(d.probs())
}

/// Entropy of the pair `(row, col)`.
pub fn joint_entropy(j: &JointDistribution) -> f64 {
    let h: f64 = j
        .mass()
        .iter()
        .flatten()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    h.max(0.0)
}

/// `H(col | row) = H(row, col) - H(row)`.
pub fn conditional_entropy(j: &JointDistribution) -> f64 {
    (joint_entropy(j) - entropy(&j.row_marginal())).max(0.0)
}

/// `Σ p(x,y) log2( p(x,y) / (p(x) p(y)) )`, with zero cells contributing nothing.
pub fn mutual_information(j: &JointDistribution) -> f64 {
    let (rows, cols) = j.marginals();
    let mut total = 0.0;
    for (row, &px) in j.mass().iter().zip(rows.probs()) {
        for (&pxy, &py) in row.iter().zip(cols.probs()) {
            if pxy > 0.0 {
                total += pxy * (pxy / (px * py)).log2();
            }
        }
    }
    total.max(0.0)
}

/// `D(p ‖ q)` in bits.
pub fn kl_divergence(p: &FiniteDistribution, q: &FiniteDistribution) -> Result<f64> {
    p.alphabet().ensure_same(q.alphabet(), "kl_divergence")?;
    let mut total = 0.0;
    for (i, (&pi, &qi)) in p.probs().iter().zip(q.probs()).enumerate() {
        if pi > 0.0 {
            if qi <= 0.0 {
                return Err(Error::SupportViolation(p.alphabet().label(i).to_owned()));
            }
            total += pi * (pi / qi).log2();
        }
    }
    Ok(total.max(0.0))
}
