//! Two-qubit states, Pauli algebra and Bell-basis measurement.
//!
//! Qubit ordering is A ⊗ B, where A is the photon that is encoded and sent
//! through the channel. Computational basis index is `2a + b`.

use crate::{Error, Result};
use nalgebra::{Complex, Matrix2, Matrix4, Vector4};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::OnceLock;

pub type C64 = Complex<f64>;
/// Single-qubit operator.
pub type Matrix2c = Matrix2<C64>;
/// Two-qubit operator.
pub type Matrix4c = Matrix4<C64>;

/// Absolute tolerance for exact-arithmetic comparisons.
pub const TOLERANCE: f64 = 1e-12;
/// Slack allowed below zero for eigenvalues of a density matrix.
pub const PSD_SLACK: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff<const N: usize>(
    a: &nalgebra::SMatrix<C64, N, N>,
    b: &nalgebra::SMatrix<C64, N, N>,
) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Entrywise comparison within an absolute tolerance.
pub fn approx_eq<const N: usize>(
    a: &nalgebra::SMatrix<C64, N, N>,
    b: &nalgebra::SMatrix<C64, N, N>,
    tol: f64,
) -> bool {
    max_abs_diff(a, b) <= tol
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliOp {
    Identity,
    X,
    Y,
    Z,
}

impl PauliOp {
    pub const ALL: [PauliOp; 4] = [PauliOp::Identity, PauliOp::X, PauliOp::Y, PauliOp::Z];

    pub fn from_index(index: u8) -> Result<Self> {
        Self::ALL
            .get(usize::from(index))
            .copied()
            .ok_or(Error::InvalidPauliIndex(index))
    }

    pub fn index(self) -> u8 {
        self as u8
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PauliOp::Identity => "I",
            PauliOp::X => "X",
            PauliOp::Y => "Y",
            PauliOp::Z => "Z",
        })
    }
}

pub fn pauli_matrix(op: PauliOp) -> Matrix2c {
    match op {
        PauliOp::Identity => Matrix2c::identity(),
        PauliOp::X => Matrix2c::new(ZERO, ONE, ONE, ZERO),
        PauliOp::Y => Matrix2c::new(ZERO, -I, I, ZERO),
        PauliOp::Z => Matrix2c::new(ONE, ZERO, ZERO, -ONE),
    }
}

/// `σ ⊗ 𝟙`, acting on qubit A only.
pub fn pauli_on_qubit_a(op: PauliOp) -> Matrix4c {
    pauli_matrix(op).kronecker(&Matrix2c::identity())
}

/// The four Bell states, in measurement order.
///
/// The encoding Pauli applied to qubit A of the shared singlet determines
/// the two-bit message: `𝟙 → 00`, `σz → 01`, `σx → 10`, `σy → 11`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BellState {
    PsiMinus,
    PsiPlus,
    PhiMinus,
    PhiPlus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PsiMinus,
        BellState::PsiPlus,
        BellState::PhiMinus,
        BellState::PhiPlus,
    ];

    /// One-based index: 1 → ψ⁻, 2 → ψ⁺, 3 → φ⁻, 4 → φ⁺.
    pub fn index(self) -> u8 {
        self.position() as u8 + 1
    }

    pub fn from_index(index: u8) -> Result<Self> {
        match index {
            1..=4 => Ok(Self::ALL[usize::from(index - 1)]),
            _ => Err(Error::InvalidBellIndex(index)),
        }
    }

    /// Zero-based row/column position in tables.
    pub fn position(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            BellState::PsiMinus => "ψ⁻",
            BellState::PsiPlus => "ψ⁺",
            BellState::PhiMinus => "φ⁻",
            BellState::PhiPlus => "φ⁺",
        }
    }

    /// The Pauli that takes the singlet to this state (up to phase).
    pub fn encoding_pauli(self) -> PauliOp {
        match self {
            BellState::PsiMinus => PauliOp::Identity,
            BellState::PsiPlus => PauliOp::Z,
            BellState::PhiMinus => PauliOp::X,
            BellState::PhiPlus => PauliOp::Y,
        }
    }

    pub fn message(self) -> Message {
        Message(match self.encoding_pauli() {
            PauliOp::Identity => 0b00,
            PauliOp::Z => 0b01,
            PauliOp::X => 0b10,
            PauliOp::Y => 0b11,
        })
    }

    pub fn from_message(message: Message) -> Self {
        match message.0 {
            0b00 => BellState::PsiMinus,
            0b01 => BellState::PsiPlus,
            0b10 => BellState::PhiMinus,
            _ => BellState::PhiPlus,
        }
    }

    pub fn ket(self) -> Vector4<C64> {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        match self {
            BellState::PsiMinus => Vector4::new(ZERO, h, -h, ZERO),
            BellState::PsiPlus => Vector4::new(ZERO, h, h, ZERO),
            BellState::PhiMinus => Vector4::new(h, ZERO, ZERO, -h),
            BellState::PhiPlus => Vector4::new(h, ZERO, ZERO, h),
        }
    }

    /// Rank-one projector `|b⟩⟨b|`.
    pub fn projector(self) -> Matrix4c {
        static PROJECTORS: OnceLock<[Matrix4c; 4]> = OnceLock::new();
        PROJECTORS.get_or_init(|| {
            BellState::ALL.map(|b| {
                let ket = b.ket();
                ket * ket.adjoint()
            })
        })[self.position()]
    }
}

impl fmt::Display for BellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.label(), self.index())
    }
}

/// A two-bit classical message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Message(u8);

impl Message {
    pub fn new(bits: u8) -> Result<Self> {
        if bits < 4 {
            Ok(Message(bits))
        } else {
            Err(Error::InvalidMessage(bits))
        }
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = Message> {
        (0..4).map(Message)
    }
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02b}", self.0)
    }
}

/// A two-qubit density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(Matrix4c);

impl DensityMatrix {
    /// Validates `matrix` before wrapping it.
    pub fn new(matrix: Matrix4c) -> Result<Self> {
        let rho = DensityMatrix(matrix);
        rho.validate()?;
        Ok(rho)
    }

    /// Wraps a matrix produced by a trace-preserving, completely positive map
    /// of a valid state. Validity is checked in debug builds only.
    pub(crate) fn from_cptp_output(matrix: Matrix4c) -> Self {
        let rho = DensityMatrix(matrix);
        debug_assert!(rho.validate().is_ok(), "{:?}", rho.validate());
        rho
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix(Matrix4c::identity() * C64::new(0.25, 0.0))
    }

    pub fn pure(ket: &Vector4<C64>) -> Result<Self> {
        let norm = ket.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidDensityMatrix(
                "zero or non-finite state vector".into(),
            ));
        }
        let ket = ket / C64::new(norm, 0.0);
        Ok(DensityMatrix(ket * ket.adjoint()))
    }

    pub fn matrix(&self) -> &Matrix4c {
        &self.0
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.0;
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidDensityMatrix("non-finite entry".into()));
        }
        let herm_dev = max_abs_diff(m, &m.adjoint());
        if herm_dev > TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {herm_dev:e})"
            )));
        }
        let trace = m.trace();
        if (trace - ONE).norm() > TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!("trace is {trace}")));
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < -PSD_SLACK {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(())
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    /// `tr(ρ σ)`; real for Hermitian arguments.
    pub fn overlap(&self, other: &DensityMatrix) -> f64 {
        (self.0 * other.0).trace().re
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        let hermitian = (self.0 + self.0.adjoint()) * C64::new(0.5, 0.0);
        let ev = hermitian.symmetric_eigenvalues();
        [ev[0], ev[1], ev[2], ev[3]]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Trace norm `‖ρ − σ‖₁`, the sum of absolute eigenvalues of the difference.
    pub fn trace_norm_distance(&self, other: &DensityMatrix) -> f64 {
        let diff = self.0 - other.0;
        let hermitian = (diff + diff.adjoint()) * C64::new(0.5, 0.0);
        hermitian
            .symmetric_eigenvalues()
            .iter()
            .map(|e| e.abs())
            .sum()
    }

    pub fn approx_eq(&self, other: &DensityMatrix, tol: f64) -> bool {
        approx_eq(&self.0, &other.0, tol)
    }

    /// Convex combination `weight·self + (1 − weight)·other`.
    pub fn mix(&self, other: &DensityMatrix, weight: f64) -> Result<Self> {
        crate::check_unit_interval("mixing weight", weight)?;
        Ok(DensityMatrix::from_cptp_output(
            self.0 * C64::new(weight, 0.0) + other.0 * C64::new(1.0 - weight, 0.0),
        ))
    }

    /// `U ρ U†` for a unitary `U`.
    pub(crate) fn conjugate_by(&self, unitary: &Matrix4c) -> Self {
        DensityMatrix(unitary * self.0 * unitary.adjoint())
    }
}

pub fn bell_density(state: BellState) -> DensityMatrix {
    DensityMatrix(state.projector())
}

/// The pre-shared singlet `ψ⁻`.
pub fn singlet() -> DensityMatrix {
    bell_density(BellState::PsiMinus)
}

/// `(σ ⊗ 𝟙) ρ (σ ⊗ 𝟙)†`.
pub fn apply_on_qubit_a(state: &DensityMatrix, op: PauliOp) -> DensityMatrix {
    if op == PauliOp::Identity {
        return *state;
    }
    state.conjugate_by(&pauli_on_qubit_a(op))
}

/// Applies the message's encoding Pauli to qubit A of the singlet.
pub fn encode_message(message: Message) -> DensityMatrix {
    let op = BellState::from_message(message).encoding_pauli();
    apply_on_qubit_a(&singlet(), op)
}

/// Outcome probabilities of the projective Bell measurement, in
/// ψ⁻, ψ⁺, φ⁻, φ⁺ order.
pub fn bell_measurement_probs(state: &DensityMatrix) -> [f64; 4] {
    BellState::ALL.map(|b| {
        let ket = b.ket();
        // ⟨b|ρ|b⟩
        let p = (ket.adjoint() * state.matrix() * ket)[(0, 0)].re;
        p.clamp(0.0, 1.0)
    })
}
