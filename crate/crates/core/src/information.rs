//! Capacity and mutual information over the four-letter Bell alphabet.
//!
//! All logarithms are base 2 and `0·log 0` is taken as 0.

use crate::quantum::BellState;
use crate::{check_unit_interval, Error, Result};
use serde::{Deserialize, Serialize};

/// Row-sum tolerance for conditional tables and priors.
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;

pub const UNIFORM_PRIOR: [f64; 4] = [0.25; 4];

/// `x·log₂ y`, zero whenever `x` is zero.
fn weighted_log2(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.log2()
    }
}

/// Entanglement-assisted classical capacity of the depolarizing channel,
/// `C = 2 + (1 − p) log₂(1 − p) + p log₂(p/3)` bits per use.
pub fn eacc(p: f64) -> Result<f64> {
    let p = check_unit_interval("depolarizing probability", p)?;
    Ok(2.0 + weighted_log2(1.0 - p, 1.0 - p) + weighted_log2(p, p / 3.0))
}

/// Shannon entropy in bits.
pub fn entropy(probs: &[f64]) -> f64 {
    -probs.iter().map(|&p| weighted_log2(p, p)).sum::<f64>()
}

/// Conditional probabilities `p(y|x)`: row `x` is the transmitted Bell
/// state, column `y` the measured one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionalTable {
    rows: [[f64; 4]; 4],
}

impl ConditionalTable {
    pub fn new(rows: [[f64; 4]; 4]) -> Result<Self> {
        for (x, row) in rows.iter().enumerate() {
            for &p in row {
                if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
                    return Err(Error::InvalidTable(format!(
                        "entry {p} in row {} outside [0, 1]",
                        x + 1
                    )));
                }
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                return Err(Error::InvalidTable(format!("row {} sums to {sum}", x + 1)));
            }
        }
        Ok(Self { rows })
    }

    pub fn identity() -> Self {
        let mut rows = [[0.0; 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Self { rows }
    }

    pub fn rows(&self) -> &[[f64; 4]; 4] {
        &self.rows
    }

    pub fn row(&self, input: BellState) -> [f64; 4] {
        self.rows[input.position()]
    }

    pub fn get(&self, input: BellState, output: BellState) -> f64 {
        self.rows[input.position()][output.position()]
    }

    pub fn max_abs_diff(&self, other: &ConditionalTable) -> f64 {
        self.rows
            .iter()
            .flatten()
            .zip(other.rows.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Relabels inputs and outputs: entry `(x, y)` of the result is entry
    /// `(perm[x], perm[y])` of `self`.
    pub fn permuted(&self, perm: [usize; 4]) -> Self {
        let mut rows = [[0.0; 4]; 4];
        for (x, row) in rows.iter_mut().enumerate() {
            for (y, cell) in row.iter_mut().enumerate() {
                *cell = self.rows[perm[x]][perm[y]];
            }
        }
        Self { rows }
    }

    /// Output marginal `p₂(y) = Σₓ p₁(x) p(y|x)`.
    pub fn output_marginal(&self, prior: &[f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (row, &px) in self.rows.iter().zip(prior) {
            for (o, &q) in out.iter_mut().zip(row) {
                *o += px * q;
            }
        }
        out
    }
}

/// Table of the depolarizing channel on Bell inputs: `1 − p` on the
/// diagonal, `p/3` elsewhere.
pub fn analytic_conditional(p: f64) -> Result<ConditionalTable> {
    let p = check_unit_interval("depolarizing probability", p)?;
    let off = p / 3.0;
    let mut rows = [[off; 4]; 4];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = 1.0 - p;
    }
    Ok(ConditionalTable { rows })
}

/// Mutual information in bits, optionally with a one-sigma uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MutualInfoResult {
    pub bits: f64,
    pub uncertainty: Option<f64>,
}

impl MutualInfoResult {
    pub fn exact(bits: f64) -> Self {
        Self {
            bits,
            uncertainty: None,
        }
    }
}

fn check_prior(prior: &[f64; 4]) -> Result<()> {
    if prior
        .iter()
        .any(|p| !(p.is_finite() && (0.0..=1.0).contains(p)))
    {
        return Err(Error::InvalidPrior(format!(
            "{prior:?} has entries outside [0, 1]"
        )));
    }
    let sum: f64 = prior.iter().sum();
    if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
        return Err(Error::InvalidPrior(format!("sums to {sum}")));
    }
    Ok(())
}

/// `I = Σₓ p₁(x) Σ_y p(y|x) log₂(p(y|x) / p₂(y))`.
pub fn mutual_information(table: &ConditionalTable, prior: &[f64; 4]) -> Result<MutualInfoResult> {
    check_prior(prior)?;
    let marginal = table.output_marginal(prior);
    let mut bits = 0.0;
    for (x, (row, &px)) in table.rows.iter().zip(prior).enumerate() {
        if px == 0.0 {
            continue;
        }
        let mut inner = 0.0;
        for (y, (&q, &py)) in row.iter().zip(&marginal).enumerate() {
            if q == 0.0 {
                continue;
            }
            if py == 0.0 {
                return Err(Error::Inconsistent(format!(
                    "output {} has zero marginal but p(y|x) = {q} for input {}",
                    y + 1,
                    x + 1
                )));
            }
            inner += q * (q / py).log2();
        }
        bits += px * inner;
    }
    // clip rounding residue; the exact value lies in [0, 2]
    Ok(MutualInfoResult::exact(bits.clamp(0.0, 2.0)))
}

/// Mutual information with equiprobable Bell inputs.
pub fn mutual_information_uniform(table: &ConditionalTable) -> Result<MutualInfoResult> {
    mutual_information(table, &UNIFORM_PRIOR)
}
