use super::{stationary_distribution, MarkovRiskSource, RiskPipeline};
use crate::prob::{Channel, FiniteDistribution};
use crate::refinement::Partition;
use crate::{Error, Result};

/// Merges risk levels block-wise.
///
/// Transition and encoder rows of a block are averaged over its members,
/// weighted by the stationary law (uniformly when the block has no stationary
/// mass); initial mass is summed. The decoder keeps its decisions and reports
/// the block containing the decoded level. The merged joint of `(Λ, Λ̂)` is
/// the block-sum of the original one.
pub fn aggregate_classes(p: &RiskPipeline, grouping: &Partition) -> Result<RiskPipeline> {
    if grouping.base() != p.levels() {
        return Err(Error::InvalidPartition(format!(
            "grouping base {:?} is not the level alphabet {:?}",
            grouping.base(),
            p.levels()
        )));
    }
    let pi = stationary_distribution(p.source())?.law;
    let merged = grouping.block_alphabet()?;

    let member_weights: Vec<Vec<(usize, f64)>> = grouping
        .blocks()
        .iter()
        .map(|block| {
            let mass: f64 = block.iter().map(|&i| pi.prob(i)).sum();
            block
                .iter()
                .map(|&i| {
                    let w = if mass > 0.0 {
                        pi.prob(i) / mass
                    } else {
                        1.0 / block.len() as f64
                    };
                    (i, w)
                })
                .collect()
        })
        .collect();

    let average_rows = |ch: &Channel, width: usize, fold: &dyn Fn(usize) -> usize| -> Vec<Vec<f64>> {
        member_weights
            .iter()
            .map(|members| {
                let mut out = vec![0.0; width];
                for &(i, w) in members {
                    for (j, &q) in ch.row(i).iter().enumerate() {
                        out[fold(j)] += w * q;
                    }
                }
                out
            })
            .collect()
    };

    let k = grouping.k();
    let transition = Channel::from_parts(
        merged.clone(),
        merged.clone(),
        average_rows(p.source().transition(), k, &|j| grouping.block_of(j)),
    );
    let mut initial = vec![0.0; k];
    for (i, &q) in p.source().initial().probs().iter().enumerate() {
        initial[grouping.block_of(i)] += q;
    }
    let source = MarkovRiskSource::new(
        transition,
        FiniteDistribution::from_parts(merged.clone(), initial),
    )?;
    let encoder = Channel::from_parts(
        merged.clone(),
        p.x_alphabet().clone(),
        average_rows(p.encoder(), p.x_alphabet().len(), &|j| j),
    );
    let decoder_rows = p
        .decoder()
        .rows()
        .iter()
        .map(|row| {
            let mut out = vec![0.0; k];
            for (h, &q) in row.iter().enumerate() {
                out[grouping.block_of(h)] += q;
            }
            out
        })
        .collect();
    let decoder = Channel::from_parts(p.y_alphabet().clone(), merged, decoder_rows);
    RiskPipeline::new(source, encoder, p.mapper().clone(), decoder)
}
