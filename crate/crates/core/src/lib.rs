//! Risk modelling as a communication system over finite alphabets.
//!
//! A hidden risk level `Λ` (a finite Markov chain) is encoded into observable
//! variables `X`, mapped to risk events `Y` and decoded into an estimate `Λ̂`.
//! The crate computes the information measures along that chain, the capacity
//! of the mapper, refinement gains for event partitions and cost-constrained
//! designs for the encoded variables.
//!
//! | module | contents |
//! |---|---|
//! | [`prob`] | alphabets, distributions, channels, joints, entropy / MI / KL, empirical joints |
//! | [`pipeline`] | Markov risk source, pipeline laws, Monte Carlo, MAP decoding, pricing errors, DPI audits, class aggregation |
//! | [`refinement`] | partitions of the event alphabet, coarsening and refinement gains |
//! | [`capacity`] | Blahut–Arimoto, deterministic mappers, the rear-end collision margin |
//! | [`design`] | redundancy checks, cost-constrained variable selection, variable quality |

// NaN-rejecting `!(x >= 0.0)` checks and index loops over matrices are intentional.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod capacity;
pub mod design;
mod error;
pub mod pipeline;
pub mod prob;
pub mod random;
pub mod refinement;

pub use capacity::{
    blahut_arimoto, capacity_gap, collision_channel, collision_margin, deterministic_capacity,
    CapacityResult, CollisionScenario, DeterministicMapper,
};
pub use design::{design_search, redundancy_check, variable_quality, DesignProblem, DesignSolution};
pub use error::{Error, Result};
pub use pipeline::{
    aggregate_classes, dpi_audit, map_decoder_from, pricing_errors, simulate,
    stationary_distribution, DpiReport, ErrorReport, MarkovRiskSource, RiskPipeline,
    TrajectoryBatch,
};
pub use prob::{
    conditional_entropy, entropy, joint_from, kl_divergence, make_distribution,
    mutual_information, Alphabet, Channel, FiniteDistribution, JointDistribution,
};
pub use refinement::{coarsen_joint, is_refinement, make_partition, refinement_gain, Partition};

/// Crate version, embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
