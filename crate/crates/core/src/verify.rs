//! Seeded randomized verification of the entropy balance and its
//! decomposition: the machinery behind `verify-identities` and the
//! acceptance checks.
//!
//! Each trial builds a random product state ρ_S ⊗ ρ_E (the reservoir biased
//! toward thermal so it has a non-negative effective temperature), applies a
//! random global unitary, and checks
//!
//! * the balance identity residual,
//! * the decomposition chain residual against the effective-thermal
//!   reference,
//! * the non-negativity margin of the entropy-balance inequality.

use crate::linalg::CMatrix;
use crate::measures::{rel_entropy, BipartiteState};
use crate::random::{random_density, random_energies, random_unitary, SplitMix64};
use crate::reservoir::{
    decompose_relative_entropy, exact_balance, gibbs_mean_energy, ReservoirError,
    SpectrumReservoir,
};
use crate::states::{thermal_state, DensityMatrix};
use num_complex::Complex64;
use serde::Serialize;

/// Tolerance on the balance-identity residual.
pub const BALANCE_TOL: f64 = 1e-8;

/// Tolerance on the exact decomposition chain.
pub const CHAIN_TOL: f64 = 1e-9;

/// Lower bound on the inequality margin.
pub const MARGIN_TOL: f64 = -1e-8;

/// One verified instance.
#[derive(Debug, Clone, Serialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub dim_a: usize,
    pub dim_b: usize,
    pub balance_residual: f64,
    pub chain_residual: f64,
    /// `ΔS_S - β ΔQ_S - ΔS[ρ_E||ρ_E^eq(0)]`; equals ΔI up to round-off.
    pub margin: f64,
    pub di: f64,
    pub dev: f64,
    pub drift: f64,
}

/// Aggregate report of a suite run.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub trials: usize,
    pub seed: u64,
    pub dims: Vec<(usize, usize)>,
    pub max_abs_balance_residual: f64,
    pub max_abs_chain_residual: f64,
    pub min_margin: f64,
    pub min_di: f64,
    pub min_dev: f64,
    pub min_drift: f64,
    pub balance_tolerance: f64,
    pub chain_tolerance: f64,
    pub margin_tolerance: f64,
    pub pass: bool,
}

/// Deterministic random product-initial instance: the reservoir state is a
/// half-and-half mix of a Hilbert-Schmidt random state with a thermal state,
/// retried until its mean energy lies strictly inside `(E_min, U(β=0))`.
pub fn random_instance(
    rng: &mut SplitMix64,
    dim_a: usize,
    dim_b: usize,
    energies: &[f64],
) -> (BipartiteState, BipartiteState) {
    let e_min = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    let mean = gibbs_mean_energy(energies, 0.0);
    let spread = mean - e_min;
    let gibbs = thermal_state(energies, 1.5).expect("valid spectrum");
    let rho_e = loop {
        let raw = random_density(rng, dim_b);
        let mixed = raw
            .matrix()
            .scale(Complex64::new(0.5, 0.0))
            .add(&gibbs.matrix().scale(Complex64::new(0.5, 0.0)));
        let candidate = DensityMatrix::new(mixed).expect("convex mixture of states");
        let u = candidate.diag_expectation(energies);
        if u > e_min + 1e-3 * spread && u < mean - 1e-3 * spread {
            break candidate;
        }
    };
    let rho_s = random_density(rng, dim_a);
    let initial = BipartiteState::new(rho_s.product(&rho_e), dim_a, dim_b)
        .expect("product of valid states");
    let u = random_unitary(rng, dim_a * dim_b);
    let final_mat = u.matmul(initial.joint().matrix()).matmul(&u.adjoint());
    let final_state = BipartiteState::new(
        DensityMatrix::new(final_mat).expect("unitary conjugation preserves validity"),
        dim_a,
        dim_b,
    )
    .expect("dims unchanged");
    (initial, final_state)
}

/// Run one trial: balance, decomposition chain and inequality margin.
pub fn run_trial(
    rng: &mut SplitMix64,
    trial: usize,
    dim_a: usize,
    dim_b: usize,
) -> Result<TrialOutcome, ReservoirError> {
    let energies = random_energies(rng, dim_b, 0.5 / (dim_b as f64 * dim_b as f64));
    let (initial, final_state) = random_instance(rng, dim_a, dim_b, &energies);

    let out = exact_balance(&initial, &final_state, &energies, None)?;

    // Decomposition chain measured against the effective thermal reference.
    let gibbs0 = thermal_state(&energies, out.ledger.beta0)?;
    let resv0 = SpectrumReservoir::new(energies.clone(), gibbs0.clone())?;
    let resv_t = SpectrumReservoir::new(energies.clone(), final_state.reduced_b())?;
    let decomp = decompose_relative_entropy(&resv0, &resv_t)?;
    let total = rel_entropy(&final_state.reduced_b(), &gibbs0)
        .map_err(|e| ReservoirError::Measure(e.to_string()))?;
    let chain_residual = decomp.coherence + decomp.deviation + decomp.drift - total;

    let margin = out.ledger.ds_s - out.ledger.beta0 * out.ledger.dq_s - out.delta_rel_entropy;

    Ok(TrialOutcome {
        trial,
        dim_a,
        dim_b,
        balance_residual: out.residual,
        chain_residual,
        margin,
        di: out.ledger.di,
        dev: out.ledger.dev,
        drift: decomp.drift,
    })
}

/// Run `trials` seeded instances cycling through the dimension list.
pub fn run_identity_suite(
    trials: usize,
    dims: &[(usize, usize)],
    seed: u64,
) -> Result<SuiteReport, ReservoirError> {
    assert!(trials >= 1, "need at least one trial");
    assert!(!dims.is_empty(), "need at least one dimension pair");
    let mut rng = SplitMix64::new(seed);
    let mut max_balance = 0.0f64;
    let mut max_chain = 0.0f64;
    let mut min_margin = f64::INFINITY;
    let mut min_di = f64::INFINITY;
    let mut min_dev = f64::INFINITY;
    let mut min_drift = f64::INFINITY;
    for k in 0..trials {
        let (d_a, d_b) = dims[k % dims.len()];
        let t = run_trial(&mut rng, k, d_a, d_b)?;
        max_balance = max_balance.max(t.balance_residual.abs());
        max_chain = max_chain.max(t.chain_residual.abs());
        min_margin = min_margin.min(t.margin);
        min_di = min_di.min(t.di);
        min_dev = min_dev.min(t.dev);
        min_drift = min_drift.min(t.drift);
    }
    let pass = max_balance < BALANCE_TOL && max_chain < CHAIN_TOL && min_margin >= MARGIN_TOL;
    Ok(SuiteReport {
        trials,
        seed,
        dims: dims.to_vec(),
        max_abs_balance_residual: max_balance,
        max_abs_chain_residual: max_chain,
        min_margin,
        min_di,
        min_dev,
        min_drift,
        balance_tolerance: BALANCE_TOL,
        chain_tolerance: CHAIN_TOL,
        margin_tolerance: MARGIN_TOL,
        pass,
    })
}

/// The dimension grid of the standard suite: 2⊗2 through 4⊗8.
pub fn standard_dims() -> Vec<(usize, usize)> {
    let mut dims = Vec::new();
    for d_a in 2..=4 {
        for d_b in 2..=8 {
            dims.push((d_a, d_b));
        }
    }
    dims
}

/// Engineered equality case of the coherent second-law inequality: a SWAP
/// between the system and a same-dimension reservoir, both thermal, with a
/// small temperature offset. The final state is a product (`I(t) = 0`), the
/// final reservoir is exactly Gibbs (`dev = 0`), and the finite-size term
/// matches the drift up to O(Δβ³), so the inequality margin collapses to
/// round-off plus the cubic remainder.
pub fn swap_equality_instance(
    energies: &[f64],
    beta0: f64,
    beta_system: f64,
) -> Result<(BipartiteState, BipartiteState), ReservoirError> {
    let d = energies.len();
    let rho_e = thermal_state(energies, beta0)?;
    let rho_s = thermal_state(energies, beta_system)?;
    let initial = BipartiteState::new(rho_s.product(&rho_e), d, d)
        .map_err(|e| ReservoirError::Measure(e.to_string()))?;
    let mut swap = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            swap[(i * d + j, j * d + i)] = Complex64::new(1.0, 0.0);
        }
    }
    let final_mat = swap.matmul(initial.joint().matrix()).matmul(&swap.adjoint());
    let final_state = BipartiteState::new(DensityMatrix::new(final_mat)?, d, d)
        .map_err(|e| ReservoirError::Measure(e.to_string()))?;
    Ok((initial, final_state))
}
