//! Seeded random instances for property tests, benchmarks and the acceptance suite.
//!
//! Channels are drawn by normalizing rows of independent `uniform(0, 1)` weights,
//! so any failure replays from its seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::pipeline::{MarkovRiskSource, RiskPipeline};
use crate::prob::{Alphabet, Channel, FiniteDistribution, JointDistribution};
use crate::refinement::Partition;

/// The generator used throughout the crate for seeded work.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn uniform_row<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let row: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        if row.iter().sum::<f64>() > 0.0 {
            return row;
        }
    }
}

pub fn random_distribution<R: Rng + ?Sized>(rng: &mut R, alphabet: Alphabet) -> FiniteDistribution {
    let w = uniform_row(rng, alphabet.len());
    FiniteDistribution::from_weights(&w, alphabet).expect("positive weights")
}

pub fn random_channel<R: Rng + ?Sized>(rng: &mut R, input: Alphabet, output: Alphabet) -> Channel {
    let rows = (0..input.len())
        .map(|_| uniform_row(rng, output.len()))
        .collect();
    Channel::from_weights(input, output, rows).expect("positive weights")
}

pub fn random_joint<R: Rng + ?Sized>(rng: &mut R, rows: Alphabet, cols: Alphabet) -> JointDistribution {
    let weights = (0..rows.len())
        .map(|_| (0..cols.len()).map(|_| rng.random::<f64>()).collect())
        .collect();
    JointDistribution::from_weights(rows, cols, weights).expect("positive weights")
}

/// Random pipeline with `levels` risk levels, `xs` encoded symbols and `ys` events.
/// With `map_decoder` the decoder is MAP for the resulting source; otherwise random.
pub fn random_pipeline<R: Rng + ?Sized>(
    rng: &mut R,
    levels: usize,
    xs: usize,
    ys: usize,
    map_decoder: bool,
) -> RiskPipeline {
    let lv = Alphabet::indexed("c", levels).expect("levels >= 1");
    let xa = Alphabet::indexed("x", xs).expect("xs >= 1");
    let ya = Alphabet::indexed("y", ys).expect("ys >= 1");
    let transition = random_channel(rng, lv.clone(), lv.clone());
    let initial = random_distribution(rng, lv.clone());
    let source = MarkovRiskSource::new(transition, initial).expect("square chain");
    let encoder = random_channel(rng, lv.clone(), xa.clone());
    let mapper = random_channel(rng, xa, ya.clone());
    if map_decoder {
        RiskPipeline::with_map_decoder(source, encoder, mapper).expect("valid pipeline")
    } else {
        let decoder = random_channel(rng, ya, lv);
        RiskPipeline::new(source, encoder, mapper, decoder).expect("valid pipeline")
    }
}

/// Random partition of `base` into at most `max_blocks` non-empty blocks.
pub fn random_partition<R: Rng + ?Sized>(rng: &mut R, base: &Alphabet, max_blocks: usize) -> Partition {
    let n = base.len();
    let k = rng.random_range(1..=max_blocks.min(n).max(1));
    // first k labels seed the blocks so none is empty
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut assignment = vec![0usize; n];
    for (pos, &label) in order.iter().enumerate() {
        assignment[label] = if pos < k { pos } else { rng.random_range(0..k) };
    }
    Partition::from_assignment(base.clone(), &assignment).expect("every block seeded")
}
