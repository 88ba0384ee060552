//! Finite-alphabet probability objects and the information measures built on them.
//!
//! All measures are in bits and use the `0 · log 0 = 0` convention.

mod alphabet;
mod channel;
mod distribution;
mod empirical;
mod joint;
mod measures;

pub use alphabet::Alphabet;
pub use channel::{Channel, ChannelDoc};
pub use distribution::{make_distribution, DistributionDoc, FiniteDistribution};
pub use empirical::{empirical_joint, BiasCorrection, EstimateMeta, SampleBatch};
pub(crate) use empirical::joint_from_counts;
pub use joint::{joint_from, JointDistribution};
pub use measures::{
    conditional_entropy, entropy, entropy_of, joint_entropy, kl_divergence, mutual_information,
};

/// Slack allowed on probability sums at construction.
pub const NORMALIZATION_TOL: f64 = 1e-9;

pub(crate) fn check_weights(weights: &[f64]) -> crate::Result<f64> {
    for (index, &value) in weights.iter().enumerate() {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(crate::Error::NegativeWeight { index, value });
        }
    }
    Ok(weights.iter().sum())
}

pub(crate) fn check_probs(probs: &[f64]) -> crate::Result<()> {
    let sum = check_weights(probs)?;
    if (sum - 1.0).abs() > NORMALIZATION_TOL {
        return Err(crate::Error::NotNormalized { sum });
    }
    Ok(())
}
