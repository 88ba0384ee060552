use serde::Serialize;

use crate::prob::{Alphabet, Channel, FiniteDistribution};
use crate::{Error, Result};

const POWER_TOL: f64 = 1e-12;
const POWER_MAX_ITER: usize = 1_000_000;
/// Plain power iterations tried before switching to the lazy chain.
const UNDAMPED_ITER: usize = 1_000;
const DAMPING: f64 = 0.9999;

/// Time-homogeneous Markov chain over the risk levels.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovRiskSource {
    transition: Channel,
    initial: FiniteDistribution,
}

impl MarkovRiskSource {
    pub fn new(transition: Channel, initial: FiniteDistribution) -> Result<Self> {
        transition
            .input()
            .ensure_same(transition.output(), "transition must be square")?;
        initial
            .alphabet()
            .ensure_same(transition.input(), "initial law vs levels")?;
        Ok(Self { transition, initial })
    }

    /// A chain that never moves: every law is stationary.
    pub fn frozen(initial: FiniteDistribution) -> Self {
        Self {
            transition: Channel::identity(initial.alphabet().clone()),
            initial,
        }
    }

    pub fn levels(&self) -> &Alphabet {
        self.transition.input()
    }

    pub fn transition(&self) -> &Channel {
        &self.transition
    }

    pub fn initial(&self) -> &FiniteDistribution {
        &self.initial
    }
}

/// Long-run law of the source.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stationary {
    pub law: FiniteDistribution,
    /// False when the chain has several closed classes; `law` is then the
    /// limit reached from the initial law.
    pub unique: bool,
}

/// Stationary law of the chain.
///
/// With a single closed communicating class the law is unique and is obtained
/// by solving `π (P - I) = 0, Σ π = 1` directly. Otherwise power iteration from
/// the initial law is used, switching to the lazy chain `0.9999 P + 0.0001 I`
/// if plain iteration has not settled (periodic classes).
pub fn stationary_distribution(source: &MarkovRiskSource) -> Result<Stationary> {
    let rows = source.transition.rows();
    let levels = source.levels().clone();
    if closed_class_count(rows) == 1 {
        let mut pi = solve_stationary(rows);
        pi.iter_mut().for_each(|p| *p = p.max(0.0));
        let sum: f64 = pi.iter().sum();
        pi.iter_mut().for_each(|p| *p /= sum);
        return Ok(Stationary {
            law: FiniteDistribution::from_parts(levels, pi),
            unique: true,
        });
    }
    let pi = power_iterate(rows, source.initial.probs())?;
    Ok(Stationary {
        law: FiniteDistribution::from_parts(levels, pi),
        unique: false,
    })
}

fn closed_class_count(rows: &[Vec<f64>]) -> usize {
    let n = rows.len();
    let mut reach: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i == j || rows[i][j] > 0.0).collect())
        .collect();
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    // A state is recurrent iff everything it reaches reaches it back; each
    // closed class is counted once through its smallest member.
    (0..n)
        .filter(|&i| {
            let recurrent = (0..n).all(|j| !reach[i][j] || reach[j][i]);
            recurrent && (0..i).all(|j| !(reach[i][j] && reach[j][i]))
        })
        .count()
}

fn solve_stationary(rows: &[Vec<f64>]) -> Vec<f64> {
    let n = rows.len();
    // a[i][j] = P[j][i] - δ_ij, last equation replaced by Σ π = 1
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| rows[j][i] - if i == j { 1.0 } else { 0.0 })
                .collect()
        })
        .collect();
    let mut b = vec![0.0; n];
    a[n - 1] = vec![1.0; n];
    b[n - 1] = 1.0;

    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .expect("non-empty range");
        a.swap(col, pivot);
        b.swap(col, pivot);
        let diag = a[col][col];
        for r in col + 1..n {
            let factor = a[r][col] / diag;
            if factor != 0.0 {
                for c in col..n {
                    a[r][c] -= factor * a[col][c];
                }
                b[r] -= factor * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let tail: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - tail) / a[r][r];
    }
    x
}

fn power_iterate(rows: &[Vec<f64>], initial: &[f64]) -> Result<Vec<f64>> {
    let n = rows.len();
    let mut pi = initial.to_vec();
    let mut next = vec![0.0; n];
    for iter in 0..POWER_MAX_ITER {
        let damping = if iter < UNDAMPED_ITER { 1.0 } else { DAMPING };
        next.iter_mut()
            .zip(&pi)
            .for_each(|(x, p)| *x = (1.0 - damping) * p);
        for (p, row) in pi.iter().zip(rows) {
            for (x, w) in next.iter_mut().zip(row) {
                *x += damping * p * w;
            }
        }
        let change: f64 = next.iter().zip(&pi).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut pi, &mut next);
        if change < POWER_TOL {
            return Ok(pi);
        }
    }
    Err(Error::NonConvergence(POWER_MAX_ITER))
}
