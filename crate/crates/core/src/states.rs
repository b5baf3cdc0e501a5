//! Density-matrix construction and validation: thermal states, two-level
//! atom states, dephased (diagonal) states and product states.
//!
//! Coherence is always taken with respect to the computational basis, which
//! for reservoirs given as an energy list is the energy eigenbasis. For
//! two-level atoms the basis order is fixed to (|e>, |g>).

use crate::linalg::{eigh, CMatrix};
use num_complex::Complex64;
use thiserror::Error;

/// Tolerance on Hermiticity, unit trace and positivity when validating a
/// density matrix.
pub const DENSITY_MATRIX_TOL: f64 = 1e-10;

/// Adjacent energies closer than this (relative to the spectral spread) are
/// reported as degenerate.
const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("matrix is not a density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("atom coherence too large: |mu|^2 = {mu_sq:.6e} exceeds p_e(1-p_e) = {bound:.6e}")]
    PositivityViolation { mu_sq: f64, bound: f64 },
    #[error("invalid atom population p_e = {0}")]
    InvalidPopulation(f64),
    #[error("invalid inverse temperature beta = {0}")]
    InvalidBeta(f64),
    #[error("energy list is empty or contains non-finite values")]
    InvalidEnergies,
}

/// Hermitian, unit-trace, positive-semidefinite complex matrix; the
/// universal state carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    /// Validate and wrap a matrix. Hermiticity and trace are checked to
    /// [`DENSITY_MATRIX_TOL`]; the minimum eigenvalue may undershoot zero by
    /// at most the same tolerance.
    pub fn new(mat: CMatrix) -> Result<Self, StateError> {
        if !mat.is_square() {
            return Err(StateError::InvalidDensityMatrix(format!(
                "{}x{} is not square",
                mat.rows(),
                mat.cols()
            )));
        }
        let defect = mat.hermiticity_defect();
        if defect > DENSITY_MATRIX_TOL {
            return Err(StateError::InvalidDensityMatrix(format!(
                "hermiticity defect {defect:.3e}"
            )));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > DENSITY_MATRIX_TOL || tr.im.abs() > DENSITY_MATRIX_TOL {
            return Err(StateError::InvalidDensityMatrix(format!(
                "trace {tr} is not 1"
            )));
        }
        let eig = eigh(&mat)
            .map_err(|e| StateError::InvalidDensityMatrix(format!("eigendecomposition: {e}")))?;
        let min = eig.eigenvalues[0];
        if min < -DENSITY_MATRIX_TOL {
            return Err(StateError::InvalidDensityMatrix(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(DensityMatrix { mat })
    }

    /// Wrap a matrix produced by a validity-preserving transformation of an
    /// already-validated state (unitary conjugation, partial trace, tensor
    /// product, dephasing). Hermiticity and trace are still asserted; the
    /// spectrum check is skipped because the construction guarantees it.
    pub(crate) fn from_trusted(mat: CMatrix) -> Self {
        debug_assert!(mat.is_square());
        assert!(
            mat.hermiticity_defect() <= DENSITY_MATRIX_TOL,
            "trusted state lost hermiticity"
        );
        assert!(
            (mat.trace().re - 1.0).abs() <= DENSITY_MATRIX_TOL,
            "trusted state lost unit trace"
        );
        DensityMatrix { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// Ascending eigenvalues (the spectrum of the state).
    pub fn eigenvalues(&self) -> Vec<f64> {
        eigh(&self.mat)
            .expect("validated density matrix must decompose")
            .eigenvalues
    }

    /// Diagonal in the computational basis (populations).
    pub fn populations(&self) -> Vec<f64> {
        self.mat.real_diag()
    }

    /// Expectation value of a diagonal observable given by its real diagonal.
    pub fn diag_expectation(&self, diag: &[f64]) -> f64 {
        assert_eq!(diag.len(), self.dim());
        self.populations()
            .iter()
            .zip(diag)
            .map(|(p, d)| p * d)
            .sum()
    }

    /// Tensor product of two states; index convention `i_a * dim_b + i_b`.
    pub fn product(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            mat: self.mat.kron(&other.mat),
        }
    }
}

/// Two-level atom initialisation: excited population `p_e` and coherence
/// amplitude `mu` in the (|e>, |g>) basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomSpec {
    p_e: f64,
    mu: Complex64,
}

impl AtomSpec {
    pub fn new(p_e: f64, mu: Complex64) -> Result<Self, StateError> {
        if !(0.0..=1.0).contains(&p_e) || !p_e.is_finite() {
            return Err(StateError::InvalidPopulation(p_e));
        }
        let bound = p_e * (1.0 - p_e);
        if mu.norm_sqr() > bound + 1e-12 {
            return Err(StateError::PositivityViolation {
                mu_sq: mu.norm_sqr(),
                bound,
            });
        }
        Ok(AtomSpec { p_e, mu })
    }

    pub fn p_e(&self) -> f64 {
        self.p_e
    }

    pub fn p_g(&self) -> f64 {
        1.0 - self.p_e
    }

    pub fn mu(&self) -> Complex64 {
        self.mu
    }
}

/// Gibbs state `diag(e^{-βE_n}/Z)` over the given spectrum.
///
/// `beta = +∞` selects the ground state (uniform over degenerate minima).
/// Degenerate spectra are permitted but logged, since the reservoir
/// formalism assumes non-degenerate energies.
pub fn thermal_state(energies: &[f64], beta: f64) -> Result<DensityMatrix, StateError> {
    if energies.is_empty() || energies.iter().any(|e| !e.is_finite()) {
        return Err(StateError::InvalidEnergies);
    }
    if beta.is_nan() || beta < 0.0 {
        return Err(StateError::InvalidBeta(beta));
    }
    warn_if_degenerate(energies);

    let e_min = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    let probs: Vec<f64> = if beta.is_infinite() {
        let spread = energies.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - e_min;
        let tol = DEGENERACY_TOL * spread.max(1.0);
        let hits = energies.iter().filter(|&&e| e - e_min <= tol).count();
        energies
            .iter()
            .map(|&e| if e - e_min <= tol { 1.0 / hits as f64 } else { 0.0 })
            .collect()
    } else {
        // Shift by the ground energy before exponentiating so large β cannot
        // overflow.
        let weights: Vec<f64> = energies.iter().map(|&e| (-beta * (e - e_min)).exp()).collect();
        let z: f64 = weights.iter().sum();
        weights.iter().map(|w| w / z).collect()
    };
    DensityMatrix::new(CMatrix::from_real_diag(&probs))
}

fn warn_if_degenerate(energies: &[f64]) {
    let mut sorted = energies.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let spread = sorted.last().unwrap() - sorted[0];
    let tol = DEGENERACY_TOL * spread.max(1.0);
    if sorted.windows(2).any(|w| (w[1] - w[0]).abs() <= tol) {
        log::warn!(
            "degenerate energy levels supplied; the diagonal part is still taken in the given basis"
        );
    }
}

/// `p_e |e><e| + p_g |g><g| + mu |e><g| + mu* |g><e|` in the (|e>, |g>) basis.
pub fn atom_state(spec: &AtomSpec) -> DensityMatrix {
    let m = CMatrix::from_slice(
        2,
        2,
        &[
            Complex64::new(spec.p_e(), 0.0),
            spec.mu(),
            spec.mu().conj(),
            Complex64::new(spec.p_g(), 0.0),
        ],
    );
    DensityMatrix::new(m).expect("AtomSpec invariants guarantee a valid state")
}

/// Diagonal part `ρ^d` of a state in the computational basis: off-diagonal
/// entries zeroed, populations untouched. Idempotent and trace preserving.
pub fn dephase(rho: &DensityMatrix) -> DensityMatrix {
    let n = rho.dim();
    let mut out = CMatrix::zeros(n, n);
    for i in 0..n {
        out[(i, i)] = Complex64::new(rho.matrix()[(i, i)].re, 0.0);
    }
    DensityMatrix::new(out).expect("dephasing preserves density-matrix invariants")
}
