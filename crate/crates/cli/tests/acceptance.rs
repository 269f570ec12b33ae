//! Acceptance suite. Each test is one criterion and prints a single
//! PASS/FAIL line (`cargo test --test acceptance -- --nocapture`).

use eacc_cli::commands::{self, SimulationSettings};
use eacc_cli::output::{Format, Records};
use eacc_core::channels::{
    depolarize_qubit_a, effective_noise, werner_input, DepolarizingParams, Visibility,
};
use eacc_core::experiment::{
    estimate_mutual_information, simulate_counts, ErrorMethod, ExperimentConfig,
};
use eacc_core::information::{analytic_conditional, eacc, mutual_information_uniform};
use eacc_core::quantum::{
    apply_on_qubit_a, bell_density, bell_measurement_probs, max_abs_diff, singlet, BellState,
    DensityMatrix, PauliOp,
};
use eacc_core::Probability;
use std::process::Command;
use std::time::{Duration, Instant};

const EXACT_TOL: f64 = 1e-12;
/// Reported measurement at the operating point.
const MEASURED_BITS: f64 = 1.655;
const MEASURED_SIGMA: f64 = 0.014;
const OPERATING_VISIBILITY: f64 = 0.94;

fn report(id: u32, name: &str, passed: bool, detail: String, elapsed: Duration) {
    println!(
        "[{}] criterion {id}: {name} ({detail}; {:.3} s)",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    assert!(passed, "criterion {id} failed: {detail}");
}

fn config(v: f64, p_exp: f64) -> ExperimentConfig {
    ExperimentConfig::new(
        Visibility::new(v).unwrap(),
        Probability::new(p_exp).unwrap(),
    )
}

fn unit_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

fn delta_estimate(c: &ExperimentConfig) -> (f64, f64) {
    let est =
        estimate_mutual_information(&simulate_counts(c).unwrap(), ErrorMethod::Delta).unwrap();
    (est.bits, est.uncertainty.unwrap())
}

#[test]
fn criterion_1_capacity_endpoints() {
    let start = Instant::now();
    let at_zero = eacc(0.0).unwrap();
    let at_knee = eacc(0.75).unwrap();
    let at_one = eacc(1.0).unwrap();
    let revival: Vec<f64> = (0..=250)
        .map(|i| eacc(0.75 + 0.25 * i as f64 / 250.0).unwrap())
        .collect();
    let increasing = revival.windows(2).all(|w| w[1] > w[0]);
    let passed = at_zero == 2.0
        && at_knee.abs() < EXACT_TOL
        && increasing
        && (at_one - (2.0 - 3f64.log2())).abs() < EXACT_TOL;
    report(
        1,
        "capacity endpoints",
        passed,
        format!("C(0)={at_zero}, C(0.75)={at_knee:e}, C(1)={at_one}, increasing on (0.75,1]: {increasing}"),
        start.elapsed(),
    );
}

#[test]
fn criterion_2_closed_form_matches_pipeline() {
    let start = Instant::now();
    let (mut mi_dev, mut table_dev) = (0.0f64, 0.0f64);
    for p in unit_grid(101) {
        let table = analytic_conditional(p).unwrap();
        mi_dev =
            mi_dev.max((mutual_information_uniform(&table).unwrap().bits - eacc(p).unwrap()).abs());
        let params = DepolarizingParams::new(p).unwrap();
        for x in BellState::ALL {
            let received =
                depolarize_qubit_a(&apply_on_qubit_a(&singlet(), x.encoding_pauli()), &params);
            for (y, prob) in BellState::ALL.iter().zip(bell_measurement_probs(&received)) {
                table_dev = table_dev.max((table.get(x, *y) - prob).abs());
            }
        }
    }
    let elapsed = start.elapsed();
    report(
        2,
        "closed form vs mutual information vs density matrices",
        mi_dev < EXACT_TOL && table_dev < EXACT_TOL && elapsed < Duration::from_secs(1),
        format!("101 points, max |I − C| {mi_dev:e}, max table deviation {table_dev:e}"),
        elapsed,
    );
}

#[test]
fn criterion_3_noise_composition_law() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for v in unit_grid(11) {
        let vis = Visibility::new(v).unwrap();
        for p_exp in unit_grid(11) {
            let prob = Probability::new(p_exp).unwrap();
            let sequential = depolarize_qubit_a(&werner_input(vis), &prob.into());
            let single = depolarize_qubit_a(&singlet(), &effective_noise(vis, prob));
            worst = worst.max(sequential.trace_norm_distance(&single));
        }
    }
    let elapsed = start.elapsed();
    report(
        3,
        "Werner input + channel equals single effective channel",
        worst < EXACT_TOL && elapsed < Duration::from_secs(1),
        format!("11×11 grid, max trace-norm deviation {worst:e}"),
        elapsed,
    );
}

#[test]
fn criterion_4_headline_reproduction() {
    let start = Instant::now();
    let analytic = eacc(
        effective_noise(
            Visibility::new(OPERATING_VISIBILITY).unwrap(),
            Probability::ZERO,
        )
        .p(),
    )
    .unwrap();
    // tune the count level so the delta-method error bar matches the reported one
    let reference_counts = 1e6;
    let (_, reference_sigma) =
        delta_estimate(&config(OPERATING_VISIBILITY, 0.0).with_mean_counts(reference_counts));
    let tuned_counts = reference_counts * (reference_sigma / MEASURED_SIGMA).powi(2);
    let (bits, sigma) =
        delta_estimate(&config(OPERATING_VISIBILITY, 0.0).with_mean_counts(tuned_counts));

    let sigma_matches = (sigma - MEASURED_SIGMA).abs() / MEASURED_SIGMA < 0.25;
    let covers_analytic = (bits - analytic).abs() <= 2.0 * sigma;
    let reported_consistent = (MEASURED_BITS - analytic).abs() <= MEASURED_SIGMA;
    report(
        4,
        "operating point v = 0.94, p_exp = 0",
        (analytic - 1.664).abs() < 5e-4 && sigma_matches && covers_analytic && reported_consistent,
        format!(
            "analytic {analytic:.4}, simulated {bits:.4} ± {sigma:.4} at {tuned_counts:.0} counts/input, \
             reported {MEASURED_BITS} ± {MEASURED_SIGMA} is {:.2}σ from analytic",
            (MEASURED_BITS - analytic).abs() / MEASURED_SIGMA
        ),
        start.elapsed(),
    );
}

#[test]
fn criterion_5_sweep_reproduction() {
    let start = Instant::now();
    let settings = SimulationSettings {
        visibility: OPERATING_VISIBILITY,
        ..Default::default()
    };
    let set = commands::sweep(&settings, &"0:1:21".parse().unwrap()).unwrap();
    let Records::Sweep(rows) = &set.records else {
        panic!("sweep records expected")
    };
    let elapsed = start.elapsed();

    let worst_z = rows
        .iter()
        .map(|r| (r.i_measured - r.capacity_theory).abs() / r.i_uncertainty)
        .fold(0.0f64, f64::max);
    let knee = rows
        .iter()
        .position(|r| (r.p_effective - 0.75).abs() < 1e-9)
        .expect("grid reaches p = 0.75");
    let near_zero = rows[knee].i_measured < 0.01;
    let rising = rows[knee..]
        .windows(2)
        .all(|w| w[1].i_measured > w[0].i_measured);
    let passed = rows.len() == 21
        && set.failures.is_empty()
        && worst_z < 3.0
        && near_zero
        && rising
        && elapsed < Duration::from_secs(10);
    report(
        5,
        "21-point sweep within 3σ of capacity",
        passed,
        format!(
            "worst |I − C|/σ = {worst_z:.2}, I at p = 0.75 is {:.2e}, rising after: {rising}",
            rows[knee].i_measured
        ),
        elapsed,
    );
}

#[test]
fn criterion_6_error_model() {
    let start = Instant::now();
    let means: [f64; 5] = [1e2, 1e3, 1e4, 1e5, 1e6];
    let (xs, ys): (Vec<f64>, Vec<f64>) = means
        .iter()
        .map(|&m| {
            let (_, s) = delta_estimate(&config(OPERATING_VISIBILITY, 0.0).with_mean_counts(m));
            (m.log10(), s.log10())
        })
        .unzip();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let slope = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();

    let c = config(OPERATING_VISIBILITY, 0.0).with_mean_counts(1e4);
    let counts = simulate_counts(&c).unwrap();
    let delta = estimate_mutual_information(&counts, ErrorMethod::Delta)
        .unwrap()
        .uncertainty
        .unwrap();
    let boot = estimate_mutual_information(&counts, ErrorMethod::Bootstrap)
        .unwrap()
        .uncertainty
        .unwrap();
    let rel = (boot - delta).abs() / delta;
    let elapsed = start.elapsed();
    report(
        6,
        "delta-method error scaling and bootstrap agreement",
        (slope + 0.5).abs() <= 0.1 && rel < 0.2 && elapsed < Duration::from_secs(30),
        format!(
            "log-log slope {slope:.3}, delta {delta:.3e} vs bootstrap {boot:.3e} ({:.1}%)",
            100.0 * rel
        ),
        elapsed,
    );
}

#[test]
fn criterion_7_structural_invariants() {
    let start = Instant::now();
    let mut worst_match = 0.0f64;
    let mut unique = true;
    let mut states: Vec<DensityMatrix> = Vec::new();
    for x in BellState::ALL {
        for op in PauliOp::ALL {
            let out = apply_on_qubit_a(&bell_density(x), op);
            let mut d: Vec<f64> = BellState::ALL
                .iter()
                .map(|&y| max_abs_diff(out.matrix(), bell_density(y).matrix()))
                .collect();
            d.sort_by(f64::total_cmp);
            worst_match = worst_match.max(d[0]);
            unique &= d[1] > EXACT_TOL;
            states.push(out);
        }
    }
    for p in unit_grid(11) {
        let params = DepolarizingParams::new(p).unwrap();
        for v in unit_grid(11) {
            states.push(depolarize_qubit_a(
                &werner_input(Visibility::new(v).unwrap()),
                &params,
            ));
        }
        for x in BellState::ALL {
            states.push(depolarize_qubit_a(&bell_density(x), &params));
        }
    }
    let invalid = states.iter().filter(|s| s.validate().is_err()).count();
    let elapsed = start.elapsed();
    report(
        7,
        "Bell permutation and density-matrix validity",
        worst_match < EXACT_TOL && unique && invalid == 0 && elapsed < Duration::from_secs(1),
        format!(
            "16 pairs, max deviation {worst_match:e}, {invalid} invalid of {} channel outputs",
            states.len()
        ),
        elapsed,
    );
}

#[test]
fn criterion_8_determinism() {
    let start = Instant::now();
    let run = |seed: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_eacc"))
            .args([
                "sweep", "--grid", "0:1:21", "--seed", seed, "--format", "csv",
            ])
            .output()
            .expect("run eacc");
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        out.stdout
    };
    let (a, b, other) = (run("20190101"), run("20190101"), run("20190102"));
    // library path gives the same bytes as the binary
    let settings = SimulationSettings {
        seed: 20190101,
        ..Default::default()
    };
    let lib = commands::sweep(&settings, &"0:1:21".parse().unwrap())
        .unwrap()
        .render(Format::Csv)
        .unwrap();
    report(
        8,
        "identical seeds give bit-identical CSV",
        a == b && a != other && a == lib.as_bytes(),
        format!(
            "{} bytes, repeat identical: {}, other seed differs: {}",
            a.len(),
            a == b,
            a != other
        ),
        start.elapsed(),
    );
}
