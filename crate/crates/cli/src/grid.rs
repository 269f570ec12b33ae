use crate::CliError;
use std::fmt;
use std::str::FromStr;

/// Uniform grid `min:max:steps` with both endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridSpec {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self, CliError> {
        if steps == 0 {
            return Err(CliError::Usage("grid must have at least one step".into()));
        }
        for (name, v) in [("min", min), ("max", max)] {
            if !(v.is_finite() && (0.0..=1.0).contains(&v)) {
                return Err(CliError::Usage(format!("grid {name} {v} outside [0, 1]")));
            }
        }
        if min > max {
            return Err(CliError::Usage(format!("grid min {min} exceeds max {max}")));
        }
        if steps == 1 && min != max {
            return Err(CliError::Usage(format!(
                "a one-point grid needs min == max, got {min}:{max}"
            )));
        }
        Ok(Self { min, max, steps })
    }

    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

impl FromStr for GridSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, steps] = parts.as_slice() else {
            return Err(CliError::Usage(format!("grid {s:?} is not min:max:steps")));
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("bad number {t:?} in grid {s:?}")))
        };
        let steps = steps
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("bad step count {steps:?} in grid {s:?}")))?;
        GridSpec::new(num(min)?, num(max)?, steps)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.steps)
    }
}
