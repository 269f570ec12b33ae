//! Oracle harness: checks the closed forms against the explicit
//! density-matrix pipeline.
//!
//! The functions under test are injected through [`Implementations`] so
//! that a deliberately broken implementation can be shown to fail.

use eacc_core::channels::{self, DepolarizingParams, Visibility};
use eacc_core::information::{self, ConditionalTable};
use eacc_core::quantum::{self, BellState, DensityMatrix, PauliOp};
use eacc_core::Probability;
use serde::Serialize;
use std::fmt;

pub const VERIFY_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_POINTS: usize = 21;

/// The operations the harness exercises.
#[derive(Clone, Copy)]
pub struct Implementations {
    pub eacc: fn(f64) -> eacc_core::Result<f64>,
    pub analytic_conditional: fn(f64) -> eacc_core::Result<ConditionalTable>,
    pub mutual_information_uniform:
        fn(&ConditionalTable) -> eacc_core::Result<information::MutualInfoResult>,
    pub effective_noise: fn(Visibility, Probability) -> DepolarizingParams,
    pub depolarize_qubit_a: fn(&DensityMatrix, &DepolarizingParams) -> DensityMatrix,
    pub apply_on_qubit_a: fn(&DensityMatrix, PauliOp) -> DensityMatrix,
}

impl Default for Implementations {
    fn default() -> Self {
        Self {
            eacc: information::eacc,
            analytic_conditional: information::analytic_conditional,
            mutual_information_uniform: information::mutual_information_uniform,
            effective_noise: channels::effective_noise,
            depolarize_qubit_a: channels::depolarize_qubit_a,
            apply_on_qubit_a: quantum::apply_on_qubit_a,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub max_deviation: f64,
    /// Where the largest deviation (or first error) occurred.
    pub worst_at: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<28} max deviation {:.3e} at {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.max_deviation,
            self.worst_at
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub points: usize,
    pub tolerance: f64,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct Tracker {
    name: &'static str,
    max: f64,
    worst_at: String,
    error: Option<String>,
}

impl Tracker {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            max: 0.0,
            worst_at: "-".into(),
            error: None,
        }
    }

    fn record(&mut self, deviation: f64, at: impl FnOnce() -> String) {
        // NaN counts as the worst possible deviation
        if deviation.is_nan() || deviation > self.max {
            self.max = if deviation.is_nan() {
                f64::INFINITY
            } else {
                deviation
            };
            self.worst_at = at();
        }
    }

    fn fail(&mut self, at: String, err: impl fmt::Display) {
        if self.error.is_none() {
            self.error = Some(err.to_string());
            self.max = f64::INFINITY;
            self.worst_at = format!("{at} ({})", self.error.as_deref().unwrap_or_default());
        }
    }

    fn finish(self, tol: f64) -> CheckResult {
        CheckResult {
            name: self.name,
            passed: self.error.is_none() && self.max < tol,
            max_deviation: self.max,
            worst_at: self.worst_at,
        }
    }
}

fn unit_grid(points: usize) -> Vec<f64> {
    if points <= 1 {
        return vec![0.0];
    }
    (0..points)
        .map(|i| i as f64 / (points - 1) as f64)
        .collect()
}

fn validity_deviation(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let herm = quantum::max_abs_diff(m, &m.adjoint());
    let trace = (m.trace() - quantum::C64::new(1.0, 0.0)).norm();
    // negative eigenvalues within the PSD slack are accepted
    let neg = (-rho.min_eigenvalue() - quantum::PSD_SLACK).max(0.0);
    herm.max(trace).max(neg)
}

pub fn run(points: usize) -> VerifyReport {
    run_with(points, &Implementations::default())
}

pub fn run_with(points: usize, imp: &Implementations) -> VerifyReport {
    let grid = unit_grid(points);
    let tol = VERIFY_TOLERANCE;
    let mut validity = Tracker::new("density_matrix_validity");

    // closed-form capacity against uniform-prior mutual information
    let mut capacity = Tracker::new("capacity_vs_information");
    for &p in &grid {
        let at = || format!("p={p}");
        let c = (imp.eacc)(p);
        let mi = (imp.analytic_conditional)(p).and_then(|t| (imp.mutual_information_uniform)(&t));
        match (c, mi) {
            (Ok(c), Ok(mi)) => capacity.record((c - mi.bits).abs(), at),
            (Err(e), _) | (_, Err(e)) => capacity.fail(at(), e),
        }
    }

    // analytic table against encode -> depolarize -> project
    let mut table = Tracker::new("table_vs_density_matrix");
    for &p in &grid {
        let at = || format!("p={p}");
        let (params, analytic) = match (DepolarizingParams::new(p), (imp.analytic_conditional)(p)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                table.fail(at(), e);
                continue;
            }
        };
        for x in BellState::ALL {
            let encoded = (imp.apply_on_qubit_a)(&quantum::singlet(), x.encoding_pauli());
            let received = (imp.depolarize_qubit_a)(&encoded, &params);
            validity.record(validity_deviation(&encoded), || format!("encode {x}"));
            validity.record(validity_deviation(&received), || format!("{x}, p={p}"));
            let probs = quantum::bell_measurement_probs(&received);
            for (y, prob) in BellState::ALL.iter().zip(probs) {
                table.record((analytic.get(x, *y) - prob).abs(), || {
                    format!("p={p}, input {x}, outcome {y}")
                });
            }
        }
    }

    // Werner input then channel against the single effective channel
    let mut composition = Tracker::new("noise_composition_law");
    for &v in &grid {
        let vis = Visibility::new(v).expect("grid lies in [0, 1]");
        let source = channels::werner_input(vis);
        validity.record(validity_deviation(&source), || format!("werner v={v}"));
        for &p_exp in &grid {
            let at = || format!("v={v}, p_exp={p_exp}");
            let prob = Probability::new(p_exp).expect("grid lies in [0, 1]");
            let sequential = (imp.depolarize_qubit_a)(&source, &prob.into());
            let effective = (imp.effective_noise)(vis, prob);
            if let Err(e) = DepolarizingParams::new(effective.p()) {
                composition.fail(at(), e);
                continue;
            }
            let single = (imp.depolarize_qubit_a)(&quantum::singlet(), &effective);
            validity.record(validity_deviation(&sequential), at);
            validity.record(validity_deviation(&single), at);
            composition.record(sequential.trace_norm_distance(&single), at);
        }
    }

    // every one-sided Pauli maps each Bell state onto exactly one Bell state
    let mut permutation = Tracker::new("bell_basis_permutation");
    for x in BellState::ALL {
        for op in PauliOp::ALL {
            let out = (imp.apply_on_qubit_a)(&quantum::bell_density(x), op);
            validity.record(validity_deviation(&out), || format!("{op} on {x}"));
            let mut distances: Vec<f64> = BellState::ALL
                .iter()
                .map(|&y| quantum::max_abs_diff(out.matrix(), quantum::bell_density(y).matrix()))
                .collect();
            distances.sort_by(f64::total_cmp);
            permutation.record(distances[0], || format!("{op} on {x}"));
            if distances[1] < tol {
                permutation.fail(format!("{op} on {x}"), "matches more than one Bell state");
            }
        }
    }

    VerifyReport {
        points: grid.len(),
        tolerance: tol,
        checks: vec![
            capacity.finish(tol),
            table.finish(tol),
            composition.finish(tol),
            permutation.finish(tol),
            validity.finish(tol),
        ],
    }
}
