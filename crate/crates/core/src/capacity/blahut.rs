use serde::{Deserialize, Serialize};

use crate::prob::{joint_from, mutual_information, Channel, FiniteDistribution};
use crate::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: usize = 100_000;

/// Capacity of a channel and the input law that attains it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityResult {
    #[serde(rename = "capacity_bits")]
    pub capacity: f64,
    pub optimal_input: FiniteDistribution,
    pub iterations: usize,
    /// Upper bound minus achieved rate at termination, bits.
    pub gap: f64,
}

/// Lower and upper capacity bounds at the current input law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityBounds {
    /// `I(p; W)`, the rate achieved by the current input law.
    pub lower: f64,
    /// `max_x D(W(·|x) ‖ q)`.
    pub upper: f64,
}

/// Largest over-relaxation factor tried by [`BlahutArimoto::step`].
const MAX_STEP: f64 = 1_048_576.0;

/// Blahut–Arimoto iteration state for one channel.
///
/// Each [`step`](Self::step) evaluates the bounds at the current input law and
/// then applies the multiplicative update `p(x) ← p(x) 2^{μ D_x} / Σ p 2^{μ D}`.
/// `μ = 1` is the classical update, which never decreases `I`. Larger `μ`
/// is kept only while it also does not decrease `I`; it doubles after each
/// accepted step and halves back towards 1 on rejection. This matters for
/// nearly useless channels, where classical steps move the law by ~`C` only.
#[derive(Debug, Clone)]
pub struct BlahutArimoto<'a> {
    channel: &'a Channel,
    input: Vec<f64>,
    step_size: f64,
}

impl<'a> BlahutArimoto<'a> {
    /// Starts from the uniform input law.
    pub fn new(channel: &'a Channel) -> Self {
        let n = channel.input().len();
        Self {
            channel,
            input: vec![1.0 / n as f64; n],
            step_size: 1.0,
        }
    }

    pub fn input(&self) -> &[f64] {
        &self.input
    }

    /// Bounds at the current law, then one update of the law.
    pub fn step(&mut self) -> CapacityBounds {
        let (bounds, divergence) = evaluate(self.channel, &self.input);
        loop {
            let proposal = self.update(&divergence, bounds.upper);
            if self.step_size <= 1.0 {
                self.input = proposal;
                break;
            }
            let (next, _) = evaluate(self.channel, &proposal);
            if next.lower >= bounds.lower {
                self.input = proposal;
                self.step_size = (self.step_size * 2.0).min(MAX_STEP);
                return bounds;
            }
            self.step_size = (self.step_size / 2.0).max(1.0);
        }
        self.step_size = 2.0;
        bounds
    }

    fn update(&self, divergence: &[f64], upper: f64) -> Vec<f64> {
        let weights: Vec<f64> = self
            .input
            .iter()
            .zip(divergence)
            .map(|(p, d)| p * (self.step_size * (d - upper)).exp2())
            .collect();
        let total: f64 = weights.iter().sum();
        weights.into_iter().map(|w| w / total).collect()
    }
}

/// Bounds and per-input divergences `D(W(·|x) ‖ q)` at an input law.
fn evaluate(channel: &Channel, input: &[f64]) -> (CapacityBounds, Vec<f64>) {
    let mut output = vec![0.0; channel.output().len()];
    for (p, row) in input.iter().zip(channel.rows()) {
        for (q, w) in output.iter_mut().zip(row) {
            *q += p * w;
        }
    }
    let divergence: Vec<f64> = channel
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .zip(&output)
                .filter(|(&w, _)| w > 0.0)
                .map(|(&w, &q)| if q > 0.0 { w * (w / q).log2() } else { f64::INFINITY })
                .sum()
        })
        .collect();
    let lower = input
        .iter()
        .zip(&divergence)
        .filter(|(&p, _)| p > 0.0)
        .map(|(p, d)| p * d)
        .sum::<f64>()
        .max(0.0);
    let upper = divergence.iter().copied().fold(f64::NEG_INFINITY, f64::max).max(lower);
    (CapacityBounds { lower, upper }, divergence)
}

/// Capacity by Blahut–Arimoto; stops once `upper − lower < tolerance`.
///
/// On hitting `max_iter` the best-so-far result is returned inside
/// [`Error::MaxIterationsExceeded`].
pub fn blahut_arimoto(ch: &Channel, tolerance: f64, max_iter: usize) -> Result<CapacityResult> {
    if !(tolerance > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tolerance}")));
    }
    let mut solver = BlahutArimoto::new(ch);
    let mut iterations = 0;
    loop {
        let law = solver.input().to_vec();
        let bounds = solver.step();
        iterations += 1;
        let gap = bounds.upper - bounds.lower;
        let done = gap < tolerance;
        if done || iterations >= max_iter {
            let result = CapacityResult {
                capacity: bounds.lower,
                optimal_input: FiniteDistribution::from_parts(ch.input().clone(), law),
                iterations,
                gap,
            };
            return if done {
                Ok(result)
            } else {
                Err(Error::MaxIterationsExceeded(Box::new(result)))
            };
        }
    }
}

/// Distance of an input design from capacity: `C − I(input; ch)`.
pub fn capacity_gap(ch: &Channel, input: &FiniteDistribution) -> Result<f64> {
    let achieved = mutual_information(&joint_from(input, ch)?);
    let capacity = blahut_arimoto(ch, DEFAULT_TOLERANCE, DEFAULT_MAX_ITER)?.capacity;
    Ok(capacity - achieved)
}
