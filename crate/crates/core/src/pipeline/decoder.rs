use serde::Serialize;

use super::{exact_stage_laws, simulate, RiskPipeline};
use crate::prob::{Channel, JointDistribution};
use crate::Result;

/// MAP decoder plus the event rows that had zero probability.
#[derive(Debug, Clone, PartialEq)]
pub struct MapDecoder {
    pub channel: Channel,
    /// Rows with `P(y) = 0`; they are mapped to level index 0.
    pub zero_rows: Vec<usize>,
}

/// Deterministic decoder `y ↦ argmax_λ P(y, λ)` from a joint over `(Y, Λ)`.
///
/// Ties go to the lowest level index. Values within a few ulps of the row
/// maximum count as ties, so symmetric laws do not flip on rounding noise.
pub fn map_decoder_from(y_lambda: &JointDistribution) -> MapDecoder {
    let n_levels = y_lambda.col_alphabet().len();
    let mut zero_rows = Vec::new();
    let rows = y_lambda
        .mass()
        .iter()
        .enumerate()
        .map(|(y, row)| {
            let total: f64 = row.iter().sum();
            let choice = if total > 0.0 {
                let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let tie = 4.0 * f64::EPSILON * total;
                row.iter().position(|&m| m >= max - tie).unwrap_or(0)
            } else {
                zero_rows.push(y);
                0
            };
            let mut out = vec![0.0; n_levels];
            out[choice] = 1.0;
            out
        })
        .collect();
    MapDecoder {
        channel: Channel::from_parts(
            y_lambda.row_alphabet().clone(),
            y_lambda.col_alphabet().clone(),
            rows,
        ),
        zero_rows,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "method")]
pub enum ErrorMethod {
    Exact,
    Empirical { horizon: usize, seed: u64 },
}

/// Error probability for one risk level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassError {
    pub level: String,
    /// Probability mass of the conditioning class.
    pub mass: f64,
    /// `None` when the class has zero mass.
    pub error: Option<f64>,
}

/// Per-class pricing errors `P(Λ̂ ≠ Λ | Λ = c)` and their mixture.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub per_class: Vec<ClassError>,
    pub overall: f64,
    #[serde(flatten)]
    pub method: ErrorMethod,
    /// Alternative reading `P(Λ ≠ Λ̂ | Λ̂ = c)`, only when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_estimate: Option<Vec<ClassError>>,
}

impl ErrorReport {
    /// Builds the report from a joint over `(Λ, Λ̂)` on a shared level alphabet.
    pub fn from_joint(joint: &JointDistribution, method: ErrorMethod, estimate_view: bool) -> Self {
        let levels = joint.row_alphabet();
        let mass = joint.mass();
        let n = levels.len();
        let class_error = |c: usize, total: f64, off: f64| ClassError {
            level: levels.label(c).to_owned(),
            mass: total,
            error: (total > 0.0).then(|| off / total),
        };
        let per_class: Vec<ClassError> = (0..n)
            .map(|c| {
                let total: f64 = mass[c].iter().sum();
                let off: f64 = (0..n).filter(|&h| h != c).map(|h| mass[c][h]).sum();
                class_error(c, total, off)
            })
            .collect();
        let overall = per_class
            .iter()
            .filter_map(|e| e.error.map(|p| e.mass * p))
            .sum();
        let per_estimate = estimate_view.then(|| {
            (0..n)
                .map(|h| {
                    let total: f64 = (0..n).map(|c| mass[c][h]).sum();
                    let off: f64 = (0..n).filter(|&c| c != h).map(|c| mass[c][h]).sum();
                    class_error(h, total, off)
                })
                .collect()
        });
        Self {
            per_class,
            overall,
            method,
            per_estimate,
        }
    }

    pub fn error_for(&self, level: &str) -> Option<f64> {
        self.per_class
            .iter()
            .find(|e| e.level == level)
            .and_then(|e| e.error)
    }

    /// Levels whose class never occurs.
    pub fn absent_classes(&self) -> Vec<&str> {
        self.per_class
            .iter()
            .filter(|e| e.error.is_none())
            .map(|e| e.level.as_str())
            .collect()
    }
}

/// Pricing errors, exactly from the stage laws or counted over a simulated run.
pub fn pricing_errors(p: &RiskPipeline, method: ErrorMethod) -> Result<ErrorReport> {
    let joint = match method {
        ErrorMethod::Exact => exact_stage_laws(p)?.lambda_lambdahat,
        ErrorMethod::Empirical { horizon, seed } => {
            simulate(p, horizon, seed)?.empirical_lambda_lambdahat()
        }
    };
    Ok(ErrorReport::from_joint(&joint, method, false))
}
