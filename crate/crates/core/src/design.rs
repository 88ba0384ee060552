//! Cost-constrained design of the encoded risk variables.
//!
//! Candidates are treated as independent, so the entropy of a selection is the
//! sum of the candidates' marginal entropies and the search is a 0/1 knapsack
//! on entropy under the cost budget.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::capacity::capacity_gap;
use crate::prob::{entropy, joint_from, mutual_information, Alphabet, Channel, FiniteDistribution};
use crate::{Error, Result};

/// Largest candidate count searched exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 20;
pub const DEFAULT_EPSILON: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintMode {
    /// Target is the entropy of the true risk level.
    Strong,
    /// Target is the entropy of the estimated risk level.
    Weak,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CandidateDoc", into = "CandidateDoc")]
pub struct CandidateVariable {
    pub name: String,
    pub marginal: FiniteDistribution,
    pub cost: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateDoc {
    pub name: String,
    pub probs: Vec<f64>,
    pub cost: f64,
}

impl CandidateVariable {
    pub fn new(name: impl Into<String>, marginal: FiniteDistribution, cost: f64) -> Result<Self> {
        let name = name.into();
        if !cost.is_finite() || cost < 0.0 {
            return Err(Error::InvalidParameter(format!("cost of `{name}` must be finite and >= 0")));
        }
        Ok(Self { name, marginal, cost })
    }

    pub fn entropy(&self) -> f64 {
        entropy(&self.marginal)
    }
}

impl TryFrom<CandidateDoc> for CandidateVariable {
    type Error = Error;

    fn try_from(doc: CandidateDoc) -> Result<Self> {
        let alphabet = Alphabet::indexed("", doc.probs.len())?;
        Self::new(doc.name, FiniteDistribution::new(alphabet, doc.probs)?, doc.cost)
    }
}

impl From<CandidateVariable> for CandidateDoc {
    fn from(c: CandidateVariable) -> Self {
        Self {
            name: c.name,
            probs: c.marginal.probs().to_vec(),
            cost: c.cost,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignProblem {
    pub candidates: Vec<CandidateVariable>,
    /// Cost ceiling.
    pub budget: f64,
    /// Entropy the design must strictly exceed, bits.
    pub h_target: f64,
    pub mode: ConstraintMode,
}

impl DesignProblem {
    pub fn validate(&self) -> Result<()> {
        if self.candidates.is_empty() {
            return Err(Error::NoCandidates);
        }
        if !(self.budget >= 0.0) || !(self.h_target >= 0.0) {
            return Err(Error::InvalidParameter("budget and h_target must be >= 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMethod {
    Exhaustive,
    Greedy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignSolution {
    /// Chosen names, in candidate order.
    pub chosen: Vec<String>,
    pub h_x: f64,
    pub total_cost: f64,
    pub feasible: bool,
    pub mode: ConstraintMode,
    pub method: SearchMethod,
}

/// Strict redundancy constraint `h_x > h_target`; the mode only names the target.
pub fn redundancy_check(h_x: f64, h_target: f64, _mode: ConstraintMode) -> bool {
    h_x > h_target
}

/// Exhaustive search up to [`EXHAUSTIVE_LIMIT`] candidates, greedy beyond.
pub fn design_search(p: &DesignProblem) -> Result<DesignSolution> {
    if p.candidates.len() <= EXHAUSTIVE_LIMIT {
        exhaustive_search(p)
    } else {
        greedy_search(p)
    }
}

fn solution(p: &DesignProblem, chosen: &[usize], h_x: f64, total_cost: f64, method: SearchMethod) -> DesignSolution {
    DesignSolution {
        chosen: chosen.iter().map(|&i| p.candidates[i].name.clone()).collect(),
        h_x,
        total_cost,
        feasible: redundancy_check(h_x, p.h_target, p.mode),
        mode: p.mode,
        method,
    }
}

/// Orders selections: higher entropy, then lower cost, then the
/// lexicographically smaller sorted name list.
fn better(a: (f64, f64, &[String]), b: (f64, f64, &[String])) -> bool {
    match a.0.total_cmp(&b.0) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => match b.1.total_cmp(&a.1) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => a.2 < b.2,
        },
    }
}

/// Best budget-feasible subset over all `2^n` selections.
///
/// Subset entropy and cost are accumulated in candidate order.
pub fn exhaustive_search(p: &DesignProblem) -> Result<DesignSolution> {
    p.validate()?;
    let n = p.candidates.len();
    if n > 63 {
        return Err(Error::InvalidParameter(format!("{n} candidates is too many to enumerate")));
    }
    let entropies: Vec<f64> = p.candidates.iter().map(CandidateVariable::entropy).collect();
    let sorted_names = |mask: u64| -> Vec<String> {
        let mut names: Vec<String> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| p.candidates[i].name.clone())
            .collect();
        names.sort();
        names
    };

    let mut best_mask = 0u64;
    let mut best = (0.0, 0.0, Vec::new());
    for mask in 1u64..(1u64 << n) {
        let (mut h, mut cost) = (0.0, 0.0);
        for i in 0..n {
            if mask >> i & 1 == 1 {
                h += entropies[i];
                cost += p.candidates[i].cost;
            }
        }
        if cost > p.budget || h < best.0 {
            continue;
        }
        let names = sorted_names(mask);
        if better((h, cost, &names), (best.0, best.1, &best.2)) {
            best = (h, cost, names);
            best_mask = mask;
        }
    }
    let chosen: Vec<usize> = (0..n).filter(|i| best_mask >> i & 1 == 1).collect();
    Ok(solution(p, &chosen, best.0, best.1, SearchMethod::Exhaustive))
}

/// Adds candidates by decreasing entropy per unit cost while they fit, with
/// zero-cost candidates first. Falls back to the single affordable candidate
/// of highest entropy when that beats the ratio pass, which keeps the result
/// within half of the optimum.
pub fn greedy_search(p: &DesignProblem) -> Result<DesignSolution> {
    p.validate()?;
    let entropies: Vec<f64> = p.candidates.iter().map(CandidateVariable::entropy).collect();
    let ratio = |i: usize| {
        let c = p.candidates[i].cost;
        if c > 0.0 { entropies[i] / c } else { f64::INFINITY }
    };
    let mut order: Vec<usize> = (0..p.candidates.len()).collect();
    order.sort_by(|&a, &b| ratio(b).total_cmp(&ratio(a)).then(a.cmp(&b)));

    let mut cost = 0.0;
    let mut picked = Vec::new();
    for i in order {
        let c = p.candidates[i].cost;
        if cost + c <= p.budget && entropies[i] > 0.0 {
            cost += c;
            picked.push(i);
        }
    }
    picked.sort_unstable();
    // re-accumulate in candidate order, matching the exhaustive path
    let mut h: f64 = picked.iter().map(|&i| entropies[i]).sum();
    let single = (0..p.candidates.len())
        .filter(|&i| p.candidates[i].cost <= p.budget)
        .max_by(|&a, &b| {
            entropies[a]
                .total_cmp(&entropies[b])
                .then(p.candidates[b].cost.total_cmp(&p.candidates[a].cost))
                .then(b.cmp(&a))
        });
    if let Some(i) = single.filter(|&i| entropies[i] > h) {
        picked = vec![i];
        h = entropies[i];
    }
    let cost = picked.iter().map(|&i| p.candidates[i].cost).sum();
    Ok(solution(p, &picked, h, cost, SearchMethod::Greedy))
}

/// How well an input design feeds a fixed mapper.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariableQuality {
    pub i_xy: f64,
    pub h_x: f64,
    pub h_y: f64,
    /// `I(X,Y) < epsilon`.
    pub degenerate: bool,
    /// Capacity of the mapper minus `i_xy`.
    pub capacity_gap: f64,
}

pub fn variable_quality(input_law: &FiniteDistribution, mapper: &Channel, epsilon: f64) -> Result<VariableQuality> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
    }
    let joint = joint_from(input_law, mapper)?;
    let i_xy = mutual_information(&joint);
    Ok(VariableQuality {
        i_xy,
        h_x: entropy(input_law),
        h_y: entropy(&joint.col_marginal()),
        degenerate: i_xy < epsilon,
        capacity_gap: capacity_gap(mapper, input_law)?,
    })
}
