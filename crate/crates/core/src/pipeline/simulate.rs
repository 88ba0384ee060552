use std::io::Write;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;

use super::RiskPipeline;
use crate::prob::{Alphabet, Channel, JointDistribution};
use crate::random::seeded;
use crate::{Error, Result};

/// One seeded Monte Carlo run of a pipeline.
///
/// Records are stored as alphabet indices `[λ, x, y, λ̂]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrajectoryBatch {
    pub seed: u64,
    levels: Alphabet,
    xs: Alphabet,
    ys: Alphabet,
    records: Vec<[u32; 4]>,
}

impl TrajectoryBatch {
    pub fn horizon(&self) -> usize {
        self.records.len()
    }

    pub fn records(&self) -> &[[u32; 4]] {
        &self.records
    }

    /// Labels of step `t` as `(λ, x, y, λ̂)`.
    pub fn labels(&self, t: usize) -> (&str, &str, &str, &str) {
        let [l, x, y, h] = self.records[t];
        (
            self.levels.label(l as usize),
            self.xs.label(x as usize),
            self.ys.label(y as usize),
            self.levels.label(h as usize),
        )
    }

    /// Plug-in joint of `(Λ, Λ̂)` over the run.
    pub fn empirical_lambda_lambdahat(&self) -> JointDistribution {
        let n = self.levels.len();
        let mut counts = vec![vec![0u64; n]; n];
        for r in &self.records {
            counts[r[0] as usize][r[3] as usize] += 1;
        }
        crate::prob::joint_from_counts(
            &self.levels,
            &self.levels,
            &counts,
            crate::prob::BiasCorrection::None,
        )
        .0
    }

    /// CSV with header `t,lambda,x,y,lambda_hat`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "lambda", "x", "y", "lambda_hat"])?;
        for t in 0..self.records.len() {
            let (l, x, y, h) = self.labels(t);
            w.write_record([t.to_string().as_str(), l, x, y, h])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn samplers(ch: &Channel) -> Vec<WeightedIndex<f64>> {
    ch.rows()
        .iter()
        .map(|row| WeightedIndex::new(row).expect("stochastic row"))
        .collect()
}

/// Draws `horizon` steps: `λ_0` from the initial law, `λ_t` from the chain,
/// then `x`, `y`, `λ̂` through the stage channels. Deterministic in `seed`.
pub fn simulate(p: &RiskPipeline, horizon: usize, seed: u64) -> Result<TrajectoryBatch> {
    if horizon == 0 {
        return Err(Error::ZeroHorizon);
    }
    let mut rng = seeded(seed);
    let initial = WeightedIndex::new(p.source().initial().probs()).expect("valid law");
    let transition = samplers(p.source().transition());
    let encoder = samplers(p.encoder());
    let mapper = samplers(p.mapper());
    let decoder = samplers(p.decoder());

    let mut records = Vec::with_capacity(horizon);
    let mut level = initial.sample(&mut rng);
    for t in 0..horizon {
        if t > 0 {
            level = transition[level].sample(&mut rng);
        }
        let x = encoder[level].sample(&mut rng);
        let y = mapper[x].sample(&mut rng);
        let estimate = decoder[y].sample(&mut rng);
        records.push([level as u32, x as u32, y as u32, estimate as u32]);
    }
    Ok(TrajectoryBatch {
        seed,
        levels: p.levels().clone(),
        xs: p.x_alphabet().clone(),
        ys: p.y_alphabet().clone(),
        records,
    })
}
