use crate::grid::GridSpec;
use crate::output::{CapacitySample, ConfigEcho, OutputRecordSet, PointFailure, Records};
use crate::verify::{self, VerifyReport};
use crate::CliError;
use eacc_core::channels::Visibility;
use eacc_core::experiment::{self, ErrorMethod, ExperimentConfig};
use eacc_core::information;
use eacc_core::Probability;

/// Shared settings for the simulation commands.
#[derive(Debug, Clone, Copy)]
pub struct SimulationSettings {
    pub visibility: f64,
    pub mean_counts: f64,
    pub seed: u64,
    pub error_method: ErrorMethod,
    pub bootstrap_resamples: usize,
}

impl Default for SimulationSettings {
    fn default() -> Self {
        Self {
            visibility: 0.94,
            mean_counts: experiment::DEFAULT_MEAN_COUNTS,
            seed: experiment::DEFAULT_SEED,
            error_method: ErrorMethod::Delta,
            bootstrap_resamples: experiment::DEFAULT_BOOTSTRAP_RESAMPLES,
        }
    }
}

impl SimulationSettings {
    fn config(&self, p_exp: f64) -> Result<ExperimentConfig, CliError> {
        let visibility = Visibility::new(self.visibility).map_err(usage)?;
        let p_exp = Probability::new(p_exp).map_err(usage)?;
        let config = ExperimentConfig::new(visibility, p_exp)
            .with_mean_counts(self.mean_counts)
            .with_seed(self.seed)
            .with_error_method(self.error_method)
            .with_bootstrap_resamples(self.bootstrap_resamples);
        config.validate().map_err(usage)?;
        Ok(config)
    }

    fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            visibility: Some(self.visibility),
            mean_counts: Some(self.mean_counts),
            error_method: Some(self.error_method),
            bootstrap_resamples: (self.error_method == ErrorMethod::Bootstrap)
                .then_some(self.bootstrap_resamples),
            ..ConfigEcho::default()
        }
    }
}

fn usage(e: eacc_core::Error) -> CliError {
    CliError::Usage(e.to_string())
}

/// Closed-form capacity sampled on `grid`.
pub fn capacity(grid: &GridSpec) -> Result<OutputRecordSet, CliError> {
    let rows = grid
        .points()
        .into_iter()
        .map(|p| {
            Ok(CapacitySample {
                p,
                capacity: information::eacc(p)?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let echo = ConfigEcho {
        grid: Some(grid.to_string()),
        ..ConfigEcho::default()
    };
    Ok(OutputRecordSet::new(
        "capacity",
        None,
        echo,
        Records::Capacity(rows),
    ))
}

/// One simulated experiment; the raw counts go into the metadata.
pub fn simulate(settings: &SimulationSettings, p_exp: f64) -> Result<OutputRecordSet, CliError> {
    let config = settings.config(p_exp)?;
    let (record, counts) = experiment::run_point(&config, 0)?;
    let echo = ConfigEcho {
        p_exp: Some(p_exp),
        ..settings.echo()
    };
    let mut set = OutputRecordSet::new(
        "simulate",
        Some(settings.seed),
        echo,
        Records::Sweep(vec![record]),
    );
    set.counts = Some(counts.counts);
    Ok(set)
}

/// Simulated experiments over a grid of `p_exp`. Failed points are listed
/// in `failures` and left out of the records.
pub fn sweep(settings: &SimulationSettings, grid: &GridSpec) -> Result<OutputRecordSet, CliError> {
    let points = grid.points();
    let configs = points
        .iter()
        .map(|&p| settings.config(p))
        .collect::<Result<Vec<_>, _>>()?;
    let outcomes = experiment::run_sweep(&configs)?;
    let mut records = Vec::with_capacity(outcomes.len());
    let mut failures = Vec::new();
    for (index, (outcome, &p_exp)) in outcomes.into_iter().zip(&points).enumerate() {
        match outcome {
            Ok(r) => records.push(r),
            Err(e) => failures.push(PointFailure {
                index,
                p_exp,
                error: e.to_string(),
            }),
        }
    }
    let echo = ConfigEcho {
        grid: Some(grid.to_string()),
        ..settings.echo()
    };
    let mut set = OutputRecordSet::new("sweep", Some(settings.seed), echo, Records::Sweep(records));
    set.failures = failures;
    Ok(set)
}

pub fn verify(points: usize) -> Result<VerifyReport, CliError> {
    if points < 2 {
        return Err(CliError::Usage(format!(
            "verify needs at least 2 grid points, got {points}"
        )));
    }
    Ok(verify::run(points))
}
