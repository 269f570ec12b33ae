//! Pauli noise acting on the transmitted qubit.

use crate::quantum::{self, apply_on_qubit_a, BellState, DensityMatrix, PauliOp, C64};
use crate::{check_unit_interval, Error, Probability, Result};
use serde::{Deserialize, Serialize};

/// Isotropic depolarizing noise: identity with weight `1 − p`, each of
/// σx, σy, σz with weight `p/3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DepolarizingParams {
    p: f64,
}

impl DepolarizingParams {
    pub fn new(p: f64) -> Result<Self> {
        Ok(Self {
            p: check_unit_interval("depolarizing probability", p)?,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Weights `[p₀, p₁, p₂, p₃]` for `[𝟙, σx, σy, σz]`.
    pub fn weights(&self) -> [f64; 4] {
        let third = self.p / 3.0;
        [1.0 - self.p, third, third, third]
    }
}

impl From<Probability> for DepolarizingParams {
    fn from(p: Probability) -> Self {
        Self { p: p.value() }
    }
}

/// General one-sided Pauli channel `ρ ↦ Σᵢ wᵢ σᵢ ρ σᵢ`.
///
/// Only the isotropic case ([`DepolarizingParams`]) is used by the
/// experiment; anisotropic weights are accepted here for extensions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliChannel {
    weights: [f64; 4],
}

impl PauliChannel {
    pub fn new(weights: [f64; 4]) -> Result<Self> {
        for w in weights {
            check_unit_interval("Pauli weight", w)?;
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidConfig(format!(
                "Pauli channel weights sum to {sum}, expected 1"
            )));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> [f64; 4] {
        self.weights
    }

    pub fn apply_on_qubit_a(&self, state: &DensityMatrix) -> DensityMatrix {
        let m = PauliOp::ALL
            .iter()
            .zip(self.weights)
            .filter(|(_, w)| *w != 0.0)
            .fold(quantum::Matrix4c::zeros(), |acc, (&op, w)| {
                acc + apply_on_qubit_a(state, op).matrix() * C64::new(w, 0.0)
            });
        DensityMatrix::from_cptp_output(m)
    }
}

impl From<DepolarizingParams> for PauliChannel {
    fn from(params: DepolarizingParams) -> Self {
        Self {
            weights: params.weights(),
        }
    }
}

/// Kraus-sum application of the depolarizing channel to qubit A.
pub fn depolarize_qubit_a(state: &DensityMatrix, params: &DepolarizingParams) -> DensityMatrix {
    PauliChannel::from(*params).apply_on_qubit_a(state)
}

/// Interference visibility of the source, a fraction in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Visibility(f64);

impl Visibility {
    pub fn new(v: f64) -> Result<Self> {
        check_unit_interval("visibility", v).map(Visibility)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Visibility {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        Visibility::new(v)
    }
}

impl From<Visibility> for f64 {
    fn from(v: Visibility) -> f64 {
        v.0
    }
}

/// `v |ψ⁻⟩⟨ψ⁻| + (1 − v) 𝟙/4`
pub fn werner_input(visibility: Visibility) -> DensityMatrix {
    quantum::singlet()
        .mix(&DensityMatrix::maximally_mixed(), visibility.value())
        .expect("visibility is range-checked")
}

/// Depolarizing strength equivalent to imperfect visibility: `3(1 − v)/4`.
pub fn residual_noise(visibility: Visibility) -> DepolarizingParams {
    DepolarizingParams {
        p: 0.75 * (1.0 - visibility.value()),
    }
}

/// Single channel equivalent to a Werner input followed by depolarizing
/// noise `p_exp`: `p = v·p_exp + 3(1 − v)/4`.
pub fn effective_noise(visibility: Visibility, p_exp: Probability) -> DepolarizingParams {
    let v = visibility.value();
    let p = v * p_exp.value() + residual_noise(visibility).p;
    // maximum is 0.75 + v/4 at p_exp = 1
    debug_assert!((0.0..=1.0).contains(&p), "effective noise {p}");
    DepolarizingParams { p }
}

/// Liquid-crystal duty cycle: within each period `T`, σx, σy and σz are
/// switched on for `t1`, `t2`, `t3` respectively.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LcTimingModel {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub period: f64,
}

impl LcTimingModel {
    /// Checks `T > 0`, non-negative times and `t1 + t2 + t3 ≤ T`. Unequal
    /// times are allowed here; see [`LcTimingModel::is_isotropic`].
    pub fn new(t1: f64, t2: f64, t3: f64, period: f64) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidTiming(format!(
                "period must be positive, got {period}"
            )));
        }
        for t in [t1, t2, t3] {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::InvalidTiming(format!(
                    "activation times must be non-negative, got {t}"
                )));
            }
        }
        let model = Self { t1, t2, t3, period };
        if model.total_activation() > period * (1.0 + 1e-12) {
            return Err(Error::InvalidTiming(format!(
                "total activation {} exceeds period {period}",
                model.total_activation()
            )));
        }
        Ok(model)
    }

    /// Equal activation time `t` for each Pauli.
    pub fn isotropic(t: f64, period: f64) -> Result<Self> {
        Self::new(t, t, t, period)
    }

    /// `δ = t1 + t2 + t3`
    pub fn total_activation(&self) -> f64 {
        self.t1 + self.t2 + self.t3
    }

    pub fn is_isotropic(&self) -> bool {
        let scale = self.t1.max(self.t2).max(self.t3);
        let tol = 1e-12 * scale;
        (self.t1 - self.t2).abs() <= tol && (self.t2 - self.t3).abs() <= tol
    }
}

/// Noise probability `δ/T` of an isotropic timing model.
pub fn timing_to_pexp(model: &LcTimingModel) -> Result<Probability> {
    if !model.is_isotropic() {
        return Err(Error::AnisotropicTiming {
            t1: model.t1,
            t2: model.t2,
            t3: model.t3,
        });
    }
    let ratio = model.total_activation() / model.period;
    if ratio > 1.0 + 1e-12 {
        return Err(Error::InvalidTiming(format!("δ/T = {ratio} exceeds 1")));
    }
    Probability::new(ratio.min(1.0))
}

/// Bell-diagonal weights of a depolarized Bell state: `1 − p` on itself,
/// `p/3` on the other three.
pub fn depolarized_bell_weights(input: BellState, params: &DepolarizingParams) -> [f64; 4] {
    let mut w = [params.p() / 3.0; 4];
    w[input.position()] = 1.0 - params.p();
    w
}
