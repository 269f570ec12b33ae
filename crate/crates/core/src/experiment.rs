//! Monte Carlo coincidence-counting experiment.
//!
//! Each input Bell state is prepared from a visibility-degraded singlet,
//! sent through the depolarizing channel and projected onto each of the four
//! Bell states in its own acquisition window. Counts in every (input,
//! projection) cell are independent Poisson draws.
//!
//! # Random streams
//!
//! All randomness comes from ChaCha8 seeded with `seed`. Sweep point `i`
//! draws its counts from stream `2i` and its bootstrap resamples from
//! stream `2i + 1`, so results do not depend on execution order or thread
//! count. A standalone simulation is point 0.

use crate::channels::{self, depolarize_qubit_a, effective_noise, LcTimingModel, Visibility};
use crate::information::{self, ConditionalTable, MutualInfoResult};
use crate::quantum::{self, BellState};
use crate::{Error, Probability, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

pub const DEFAULT_SEED: u64 = 1;
/// Expected coincidences per input state, summed over its four projections.
pub const DEFAULT_MEAN_COUNTS: f64 = 4.0e3;
pub const DEFAULT_BOOTSTRAP_RESAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorMethod {
    /// First-order propagation of the per-cell Poisson variances.
    #[default]
    Delta,
    /// Standard deviation over Poisson resamples of every cell.
    Bootstrap,
}

impl fmt::Display for ErrorMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorMethod::Delta => "delta",
            ErrorMethod::Bootstrap => "bootstrap",
        })
    }
}

impl FromStr for ErrorMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "delta" => Ok(ErrorMethod::Delta),
            "bootstrap" => Ok(ErrorMethod::Bootstrap),
            other => Err(Error::InvalidConfig(format!(
                "unknown error method {other:?} (expected delta or bootstrap)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub visibility: Visibility,
    pub p_exp: Probability,
    pub mean_counts_per_input: f64,
    pub seed: u64,
    pub error_method: ErrorMethod,
    pub bootstrap_resamples: usize,
}

impl ExperimentConfig {
    pub fn new(visibility: Visibility, p_exp: Probability) -> Self {
        Self {
            visibility,
            p_exp,
            mean_counts_per_input: DEFAULT_MEAN_COUNTS,
            seed: DEFAULT_SEED,
            error_method: ErrorMethod::default(),
            bootstrap_resamples: DEFAULT_BOOTSTRAP_RESAMPLES,
        }
    }

    /// Resolves the channel strength from a liquid-crystal duty cycle.
    pub fn from_timing(visibility: Visibility, timing: &LcTimingModel) -> Result<Self> {
        Ok(Self::new(visibility, channels::timing_to_pexp(timing)?))
    }

    pub fn with_mean_counts(mut self, mean: f64) -> Self {
        self.mean_counts_per_input = mean;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_error_method(mut self, method: ErrorMethod) -> Self {
        self.error_method = method;
        self
    }

    pub fn with_bootstrap_resamples(mut self, resamples: usize) -> Self {
        self.bootstrap_resamples = resamples;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let mean = self.mean_counts_per_input;
        if !(mean.is_finite() && mean > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "mean counts per input must be positive, got {mean}"
            )));
        }
        if self.bootstrap_resamples < 2 {
            return Err(Error::InvalidConfig(format!(
                "bootstrap needs at least 2 resamples, got {}",
                self.bootstrap_resamples
            )));
        }
        Ok(())
    }

    pub fn effective_noise(&self) -> f64 {
        effective_noise(self.visibility, self.p_exp).p()
    }
}

/// Coincidence counts: cell `(x, y)` holds detections for input `x` under
/// projection `y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountsTable {
    pub counts: [[u64; 4]; 4],
    pub config: ExperimentConfig,
    /// Index of the sweep point the counts were drawn for.
    pub point: u64,
}

impl CountsTable {
    pub fn new(counts: [[u64; 4]; 4], config: ExperimentConfig) -> Self {
        Self {
            counts,
            config,
            point: 0,
        }
    }

    pub fn row_total(&self, input: BellState) -> u64 {
        self.counts[input.position()].iter().sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }
}

fn rng_for(seed: u64, point: u64, bootstrap: bool) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2 * point + u64::from(bootstrap));
    rng
}

fn poisson_draw(mean: f64, rng: &mut ChaCha8Rng) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean)
        .expect("finite positive Poisson mean")
        .sample(rng) as u64
}

/// Detection probabilities per cell, computed through the density-matrix
/// pipeline: Werner input, encoding Pauli, depolarizing channel, Bell
/// projection.
pub fn true_cell_probabilities(config: &ExperimentConfig) -> ConditionalTable {
    let source = channels::werner_input(config.visibility);
    let noise = config.p_exp.into();
    let rows = BellState::ALL.map(|x| {
        let encoded = quantum::apply_on_qubit_a(&source, x.encoding_pauli());
        let received = depolarize_qubit_a(&encoded, &noise);
        quantum::bell_measurement_probs(&received)
    });
    ConditionalTable::new(rows).expect("Bell probabilities of a valid state are normalized")
}

/// Draws a counts table for sweep point 0.
pub fn simulate_counts(config: &ExperimentConfig) -> Result<CountsTable> {
    simulate_counts_for_point(config, 0)
}

/// Draws the counts table for sweep point `point`; the stream depends only
/// on `(config.seed, point)`.
pub fn simulate_counts_for_point(config: &ExperimentConfig, point: u64) -> Result<CountsTable> {
    config.validate()?;
    let probs = true_cell_probabilities(config);
    let mut rng = rng_for(config.seed, point, false);
    let mut counts = [[0u64; 4]; 4];
    for (row, prob_row) in counts.iter_mut().zip(probs.rows()) {
        for (cell, &p) in row.iter_mut().zip(prob_row) {
            *cell = poisson_draw(config.mean_counts_per_input * p, &mut rng);
        }
    }
    Ok(CountsTable {
        counts,
        config: *config,
        point,
    })
}

fn normalize(counts: &[[u64; 4]; 4]) -> Result<ConditionalTable> {
    let mut rows = [[0.0; 4]; 4];
    for (x, (row, out)) in counts.iter().zip(rows.iter_mut()).enumerate() {
        let total: u64 = row.iter().sum();
        if total == 0 {
            return Err(Error::EmptyRow(BellState::ALL[x]));
        }
        for (o, &n) in out.iter_mut().zip(row) {
            *o = n as f64 / total as f64;
        }
    }
    ConditionalTable::new(rows)
}

/// Normalizes each input's counts over its four projections.
pub fn estimate_conditionals(counts: &CountsTable) -> Result<ConditionalTable> {
    normalize(&counts.counts)
}

fn plug_in_bits(counts: &[[u64; 4]; 4]) -> Result<f64> {
    Ok(information::mutual_information_uniform(&normalize(counts)?)?.bits)
}

/// Variance of the plug-in estimate from first-order propagation of
/// `Var(N_xy) = N_xy`.
///
/// With `q_xy = N_xy / R_x` and uniform inputs, `∂I/∂q_xy = ¼ log₂(q_xy / p₂(y))`
/// and `∂q_xy'/∂N_xy = (δ_yy' − q_xy') / R_x`, so
/// `∂I/∂N_xy = (g_xy − Σ_y' q_xy' g_xy') / R_x`.
fn delta_variance(counts: &[[u64; 4]; 4], table: &ConditionalTable) -> f64 {
    let marginal = table.output_marginal(&information::UNIFORM_PRIOR);
    let mut variance = 0.0;
    for (count_row, q_row) in counts.iter().zip(table.rows()) {
        let total: u64 = count_row.iter().sum();
        let g = std::array::from_fn::<f64, 4, _>(|y| {
            if q_row[y] == 0.0 {
                0.0
            } else {
                0.25 * (q_row[y] / marginal[y]).log2()
            }
        });
        let mean_g: f64 = q_row.iter().zip(&g).map(|(q, g)| q * g).sum();
        for (&n, &gy) in count_row.iter().zip(&g) {
            // zero-count cells carry zero variance
            if n == 0 {
                continue;
            }
            let deriv = (gy - mean_g) / total as f64;
            variance += deriv * deriv * n as f64;
        }
    }
    variance
}

fn bootstrap_sigma(counts: &CountsTable) -> Result<f64> {
    let resamples = counts.config.bootstrap_resamples;
    let mut rng = rng_for(counts.config.seed, counts.point, true);
    let mut values = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let resampled = counts
            .counts
            .map(|row| row.map(|n| poisson_draw(n as f64, &mut rng)));
        match plug_in_bits(&resampled) {
            Ok(bits) => values.push(bits),
            // a resample that empties a row has no estimate
            Err(Error::EmptyRow(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    if values.len() < 2 {
        return Err(Error::Inconsistent(format!(
            "only {} of {resamples} bootstrap resamples produced an estimate",
            values.len()
        )));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(var.sqrt())
}

/// Plug-in mutual information of the normalized counts, with a one-sigma
/// uncertainty from the chosen method.
pub fn estimate_mutual_information(
    counts: &CountsTable,
    method: ErrorMethod,
) -> Result<MutualInfoResult> {
    let table = estimate_conditionals(counts)?;
    let bits = information::mutual_information_uniform(&table)?.bits;
    let sigma = match method {
        ErrorMethod::Delta => delta_variance(&counts.counts, &table).sqrt(),
        ErrorMethod::Bootstrap => bootstrap_sigma(counts)?,
    };
    Ok(MutualInfoResult {
        bits,
        uncertainty: Some(sigma),
    })
}

/// One point of a noise sweep. Field names double as CSV column headers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub p_exp: f64,
    pub p_effective: f64,
    #[serde(rename = "I_measured")]
    pub i_measured: f64,
    #[serde(rename = "I_sigma")]
    pub i_uncertainty: f64,
    #[serde(rename = "C_theory")]
    pub capacity_theory: f64,
}

/// Simulates and analyses a single point, returning the raw counts too.
pub fn run_point(config: &ExperimentConfig, point: u64) -> Result<(SweepRecord, CountsTable)> {
    let counts = simulate_counts_for_point(config, point)?;
    let estimate = estimate_mutual_information(&counts, config.error_method)?;
    let p_effective = config.effective_noise();
    let record = SweepRecord {
        p_exp: config.p_exp.value(),
        p_effective,
        i_measured: estimate.bits,
        i_uncertainty: estimate.uncertainty.unwrap_or(0.0),
        capacity_theory: information::eacc(p_effective)?,
    };
    Ok((record, counts))
}

/// Runs every configuration as its own sweep point, in parallel. A failing
/// point does not stop the others; results come back in input order.
pub fn run_sweep(configs: &[ExperimentConfig]) -> Result<Vec<Result<SweepRecord>>> {
    if configs.is_empty() {
        return Err(Error::EmptySweep);
    }
    Ok(configs
        .par_iter()
        .enumerate()
        .map(|(i, config)| run_point(config, i as u64).map(|(record, _)| record))
        .collect())
}
