//! Partitions of an event alphabet, coarsening of joints and the entropy /
//! information gained by refining events.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::prob::{entropy, mutual_information, Alphabet, FiniteDistribution, JointDistribution};
use crate::{Error, Result};

/// A cover of `base` by `k` non-empty, pairwise disjoint blocks.
///
/// Block order is significant: it is the order of the coarse alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PartitionDoc", into = "PartitionDoc")]
pub struct Partition {
    base: Alphabet,
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

/// JSON shape `{"base": [...], "blocks": [[...]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionDoc {
    pub base: Vec<String>,
    pub blocks: Vec<Vec<String>>,
}

impl Partition {
    pub fn new(base: Alphabet, blocks: Vec<Vec<String>>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::EmptyBlock);
        }
        let index: HashMap<&str, usize> = base
            .labels()
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let mut block_of = vec![usize::MAX; base.len()];
        let mut idx_blocks = Vec::with_capacity(blocks.len());
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::EmptyBlock);
            }
            let mut members = Vec::with_capacity(block.len());
            for label in block {
                let i = *index
                    .get(label.as_str())
                    .ok_or_else(|| Error::UnknownLabel(label.clone()))?;
                if block_of[i] != usize::MAX {
                    return Err(Error::Overlap(label.clone()));
                }
                block_of[i] = b;
                members.push(i);
            }
            members.sort_unstable();
            idx_blocks.push(members);
        }
        if let Some(i) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::Uncovered(base.label(i).to_owned()));
        }
        Ok(Self {
            base,
            blocks: idx_blocks,
            block_of,
        })
    }

    /// Builds from `assignment[i] = block of label i`; blocks must be `0..k` with none empty.
    pub fn from_assignment(base: Alphabet, assignment: &[usize]) -> Result<Self> {
        if assignment.len() != base.len() {
            return Err(Error::LengthMismatch {
                expected: base.len(),
                actual: assignment.len(),
            });
        }
        let k = assignment.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); k];
        for (i, &b) in assignment.iter().enumerate() {
            blocks[b].push(i);
        }
        if blocks.iter().any(Vec::is_empty) {
            return Err(Error::EmptyBlock);
        }
        Ok(Self {
            base,
            blocks,
            block_of: assignment.to_vec(),
        })
    }

    /// Every label in its own block.
    pub fn discrete(base: Alphabet) -> Self {
        let n = base.len();
        Self::from_assignment(base, &(0..n).collect::<Vec<_>>()).expect("singletons")
    }

    /// One block holding everything.
    pub fn trivial(base: Alphabet) -> Self {
        let n = base.len();
        Self::from_assignment(base, &vec![0; n]).expect("single block")
    }

    pub fn base(&self) -> &Alphabet {
        &self.base
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, index: usize) -> usize {
        self.block_of[index]
    }

    pub fn block_labels(&self, block: usize) -> Vec<&str> {
        self.blocks[block].iter().map(|&i| self.base.label(i)).collect()
    }

    /// Coarse alphabet; a block is named by its members joined with `+`.
    pub fn block_alphabet(&self) -> Result<Alphabet> {
        Alphabet::new((0..self.k()).map(|b| self.block_labels(b).join("+")))
    }

    /// Same blocks, ignoring block order.
    pub fn is_equivalent(&self, other: &Partition) -> bool {
        if self.base != other.base || self.k() != other.k() {
            return false;
        }
        let mut a = self.blocks.clone();
        let mut b = other.blocks.clone();
        a.sort();
        b.sort();
        a == b
    }
}

impl TryFrom<PartitionDoc> for Partition {
    type Error = Error;

    fn try_from(doc: PartitionDoc) -> Result<Self> {
        Self::new(Alphabet::new(doc.base)?, doc.blocks)
    }
}

impl From<Partition> for PartitionDoc {
    fn from(p: Partition) -> Self {
        let blocks = (0..p.k())
            .map(|b| p.block_labels(b).into_iter().map(str::to_owned).collect())
            .collect();
        Self {
            base: p.base.into(),
            blocks,
        }
    }
}

pub fn make_partition(base: Alphabet, blocks: Vec<Vec<String>>) -> Result<Partition> {
    Partition::new(base, blocks)
}

/// True iff every block of `fine` sits inside one block of `coarse`.
pub fn is_refinement(fine: &Partition, coarse: &Partition) -> Result<bool> {
    if fine.base != coarse.base {
        return Err(Error::BaseMismatch(format!("{:?} vs {:?}", fine.base, coarse.base)));
    }
    Ok(fine.blocks.iter().all(|block| {
        let target = coarse.block_of(block[0]);
        block.iter().all(|&i| coarse.block_of(i) == target)
    }))
}

/// Sums the rows of `fine_joint` block-wise.
pub fn coarsen_joint(fine_joint: &JointDistribution, grouping: &Partition) -> Result<JointDistribution> {
    if fine_joint.row_alphabet() != &grouping.base {
        return Err(Error::BaseMismatch(format!(
            "joint rows {:?} vs partition base {:?}",
            fine_joint.row_alphabet(),
            grouping.base
        )));
    }
    let cols = fine_joint.col_alphabet().len();
    let mut mass = vec![vec![0.0; cols]; grouping.k()];
    for (i, row) in fine_joint.mass().iter().enumerate() {
        for (acc, m) in mass[grouping.block_of(i)].iter_mut().zip(row) {
            *acc += m;
        }
    }
    Ok(JointDistribution::from_parts(
        grouping.block_alphabet()?,
        fine_joint.col_alphabet().clone(),
        mass,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinementGain {
    /// `H(V) − H(Y)`
    pub delta_h: f64,
    /// `I(V,Λ̂) − I(Y,Λ̂)`
    pub delta_i: f64,
}

/// Entropy and information lost by coarsening `fine_joint` through `grouping`.
pub fn refinement_gain(fine_joint: &JointDistribution, grouping: &Partition) -> Result<RefinementGain> {
    Ok(refinement_report(fine_joint, grouping)?.gain())
}

/// Measures on both sides of a coarsening, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinementReport {
    pub h_fine: f64,
    pub h_coarse: f64,
    pub i_fine: f64,
    pub i_coarse: f64,
    pub delta_h: f64,
    pub delta_i: f64,
}

impl RefinementReport {
    pub fn gain(&self) -> RefinementGain {
        RefinementGain {
            delta_h: self.delta_h,
            delta_i: self.delta_i,
        }
    }
}

pub fn refinement_report(fine_joint: &JointDistribution, grouping: &Partition) -> Result<RefinementReport> {
    let coarse = coarsen_joint(fine_joint, grouping)?;
    let h_fine = entropy(&fine_joint.row_marginal());
    let h_coarse = entropy(&coarse.row_marginal());
    let i_fine = mutual_information(fine_joint);
    let i_coarse = mutual_information(&coarse);
    Ok(RefinementReport {
        h_fine,
        h_coarse,
        i_fine,
        i_coarse,
        delta_h: h_fine - h_coarse,
        delta_i: i_fine - i_coarse,
    })
}

/// Event categories of the automobile-insurance safety pyramid, severe first.
pub const HEINRICH_EVENTS: [&str; 4] = [
    "major_injury",
    "minor_injury_property_loss",
    "unreported_violations",
    "unsafe_behavior_hidden_perils",
];

/// Illustrative pyramid frequencies 1 : 29 : 300 : 3000. Not measured data.
const HEINRICH_FREQUENCIES: [f64; 4] = [1.0, 29.0, 300.0, 3000.0];

/// Illustrative `P(Λ̂ | event)` over `low, medium, high`.
const HEINRICH_ESTIMATES: [[f64; 3]; 4] = [
    [0.1, 0.3, 0.6],
    [0.2, 0.5, 0.3],
    [0.5, 0.35, 0.15],
    [0.7, 0.25, 0.05],
];

/// The four-event joint and the traditional two-block view
/// `{major_injury | everything else}`.
///
/// With `independent` the joint is replaced by the product of its marginals.
pub fn heinrich_fixture(independent: bool) -> (JointDistribution, Partition) {
    let events = Alphabet::new(HEINRICH_EVENTS).expect("distinct labels");
    let estimates = Alphabet::new(["low", "medium", "high"]).expect("distinct labels");
    let weights = HEINRICH_FREQUENCIES
        .iter()
        .zip(HEINRICH_ESTIMATES)
        .map(|(f, row)| row.iter().map(|p| f * p).collect())
        .collect();
    let mut joint =
        JointDistribution::from_weights(events.clone(), estimates, weights).expect("positive fixture");
    if independent {
        let (r, c) = joint.marginals();
        joint = JointDistribution::independent(&r, &c);
    }
    let coarse = Partition::from_assignment(events, &[0, 1, 1, 1]).expect("two blocks");
    (joint, coarse)
}

/// Refinement report for the four-event pyramid against its two-block view.
pub fn heinrich_demo(independent: bool) -> RefinementReport {
    let (joint, coarse) = heinrich_fixture(independent);
    refinement_report(&joint, &coarse).expect("fixture partition matches")
}

/// Marginal of the pyramid events.
pub fn heinrich_event_law() -> FiniteDistribution {
    heinrich_fixture(false).0.row_marginal()
}
