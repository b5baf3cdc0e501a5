//! Exact Jaynes-Cummings dynamics in a truncated Fock space, the resonant
//! closed-form solutions for the reduced atom, short-time limits, and the
//! repeated-interaction (micromaser) protocol with a per-atom coherence
//! ledger.
//!
//! Basis order is atom ⊗ field with the atom index first and atom basis
//! (|e>, |g>): joint index `a * (n_max + 1) + n`. The Hamiltonian
//!
//! `H = ω_a |e><e| + ω a†a + g (a† σ_- + a σ_+)`
//!
//! conserves total excitation number, so it is block-diagonal over
//! `{|g,0>}`, the pairs `{|e,n>, |g,n+1>}`, and the truncated top level
//! `|e,n_max>`. Truncation is chosen so the thermal tail of the field is
//! below 1e-12 and cannot leak into any reported quantity.

use crate::linalg::{eigh, CMatrix, EigenDecomposition, Subsystem};
use crate::measures::rel_entropy_coherence;
use crate::states::{atom_state, thermal_state, AtomSpec, DensityMatrix, StateError};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

/// Thermal occupation allowed above the truncation level.
const FOCK_TAIL_TOL: f64 = 1e-12;

/// Extra levels kept above the tail cut.
const FOCK_GUARD_LEVELS: usize = 2;

/// Resonance check: |δ| must be below this times max(ω, ω_a, g).
const RESONANCE_TOL: f64 = 1e-12;

/// Validity edge for the short-time formulas.
const SHORT_TIME_MAX_GT: f64 = 0.1;

#[derive(Debug, Error)]
pub enum JcError {
    #[error("invalid Jaynes-Cummings parameter: {0}")]
    InvalidParameter(String),
    #[error("Fock index {n} out of range (n_max = {n_max})")]
    IndexOutOfRange { n: usize, n_max: usize },
    #[error("operation requires resonance, but δ = {0}")]
    NotResonant(f64),
    #[error("outside validity regime: {0}")]
    RegimeViolation(String),
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
    #[error(transparent)]
    State(#[from] StateError),
}

/// Jaynes-Cummings parameters with a tail-safe Fock truncation.
#[derive(Debug, Clone, Serialize)]
pub struct JCConfig {
    /// Field frequency ω.
    pub omega: f64,
    /// Atom frequency ω_a.
    pub omega_a: f64,
    /// Coupling g.
    pub g: f64,
    /// Fock truncation: the field space is `{|0>, ..., |n_max>}`.
    pub n_max: usize,
    /// Field inverse temperature (may be `+∞` for the vacuum).
    pub beta_field: f64,
}

impl JCConfig {
    /// Validate parameters and grow `n_max` until the thermal tail above it
    /// is below 1e-12, then add two guard levels. `n_max_min` is the least
    /// truncation the caller wants regardless of temperature.
    pub fn new(
        omega: f64,
        omega_a: f64,
        g: f64,
        n_max_min: usize,
        beta_field: f64,
    ) -> Result<Self, JcError> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(JcError::InvalidParameter(format!("omega = {omega}")));
        }
        if !omega_a.is_finite() || omega_a <= 0.0 {
            return Err(JcError::InvalidParameter(format!("omega_a = {omega_a}")));
        }
        if !g.is_finite() || g <= 0.0 {
            return Err(JcError::InvalidParameter(format!("g = {g}")));
        }
        if beta_field.is_nan() || beta_field <= 0.0 {
            return Err(JcError::InvalidParameter(format!(
                "beta_field = {beta_field} (thermal field needs beta > 0)"
            )));
        }
        // Geometric thermal tail above n_max is e^{-βω(n_max+1)}.
        let tail_cut = if beta_field.is_finite() {
            ((FOCK_TAIL_TOL.ln()) / (-beta_field * omega)).ceil() as usize
        } else {
            0
        };
        let n_max = tail_cut.max(n_max_min).max(2) + FOCK_GUARD_LEVELS;
        Ok(JCConfig {
            omega,
            omega_a,
            g,
            n_max,
            beta_field,
        })
    }

    /// Detuning δ = ω_a − ω.
    pub fn detuning(&self) -> f64 {
        self.omega_a - self.omega
    }

    pub fn is_resonant(&self) -> bool {
        let scale = self.omega.max(self.omega_a).max(self.g);
        self.detuning().abs() <= RESONANCE_TOL * scale
    }

    /// Field-space dimension `n_max + 1`.
    pub fn fock_dim(&self) -> usize {
        self.n_max + 1
    }

    /// Joint-space dimension `2 (n_max + 1)`.
    pub fn joint_dim(&self) -> usize {
        2 * self.fock_dim()
    }

    /// Mean photon number of the (untruncated) thermal field.
    pub fn mean_photon_number(&self) -> f64 {
        if self.beta_field.is_infinite() {
            0.0
        } else {
            let x = (-self.beta_field * self.omega).exp();
            x / (1.0 - x)
        }
    }

    /// Thermal field state on the truncated Fock space.
    pub fn field_thermal_state(&self) -> DensityMatrix {
        let energies: Vec<f64> = (0..self.fock_dim()).map(|n| n as f64 * self.omega).collect();
        thermal_state(&energies, self.beta_field).expect("validated field parameters")
    }

    /// Field Hamiltonian diagonal `n ω` on the truncated space.
    pub fn field_energies(&self) -> Vec<f64> {
        (0..self.fock_dim()).map(|n| n as f64 * self.omega).collect()
    }
}

/// Joint index of |atom, n>; `atom` is 0 for |e>, 1 for |g>.
fn idx(cfg: &JCConfig, atom: usize, n: usize) -> usize {
    atom * cfg.fock_dim() + n
}

/// Full Jaynes-Cummings Hamiltonian on the truncated joint space.
pub fn jc_hamiltonian(cfg: &JCConfig) -> CMatrix {
    let dim = cfg.joint_dim();
    let mut h = CMatrix::zeros(dim, dim);
    for n in 0..cfg.fock_dim() {
        h[(idx(cfg, 0, n), idx(cfg, 0, n))] =
            Complex64::new(cfg.omega_a + n as f64 * cfg.omega, 0.0);
        h[(idx(cfg, 1, n), idx(cfg, 1, n))] = Complex64::new(n as f64 * cfg.omega, 0.0);
    }
    // g (a† σ_- + a σ_+): couples |e,n> and |g,n+1> with strength g √(n+1).
    for n in 0..cfg.n_max {
        let gn = Complex64::new(cfg.g * ((n + 1) as f64).sqrt(), 0.0);
        h[(idx(cfg, 0, n), idx(cfg, 1, n + 1))] = gn;
        h[(idx(cfg, 1, n + 1), idx(cfg, 0, n))] = gn;
    }
    h
}

/// Dressed pair of the n-th excitation doublet.
#[derive(Debug, Clone)]
pub struct DressedStates {
    /// |+, n> as a column in the joint space.
    pub plus: Vec<Complex64>,
    /// |-, n> as a column in the joint space.
    pub minus: Vec<Complex64>,
    pub e_plus: f64,
    pub e_minus: f64,
    /// Mixing angle θ_n; π/2 at resonance.
    pub theta: f64,
}

/// Eigenstates `|±, n>` of the `{|e,n>, |g,n+1>}` block:
///
/// `|+,n> = cos(θ/2)|e,n> + sin(θ/2)|g,n+1>` and
/// `|-,n> = sin(θ/2)|e,n> - cos(θ/2)|g,n+1>`, with
/// `E_n^± = (n + 1/2)ω + ω_a/2 ± sqrt((n+1)g² + δ²/4)` and
/// `θ_n = atan2(2g√(n+1), δ)` so the eigenvector equation holds for any
/// detuning and `θ_n = π/2` at resonance.
pub fn dressed_states(cfg: &JCConfig, n: usize) -> Result<DressedStates, JcError> {
    if n >= cfg.n_max {
        return Err(JcError::IndexOutOfRange { n, n_max: cfg.n_max });
    }
    let delta = cfg.detuning();
    let rabi = ((n as f64 + 1.0) * cfg.g * cfg.g + delta * delta / 4.0).sqrt();
    let center = (n as f64 + 0.5) * cfg.omega + 0.5 * cfg.omega_a;
    let theta = (2.0 * cfg.g * ((n + 1) as f64).sqrt()).atan2(delta);
    let (cos_half, sin_half) = ((theta / 2.0).cos(), (theta / 2.0).sin());

    let dim = cfg.joint_dim();
    let mut plus = vec![Complex64::new(0.0, 0.0); dim];
    let mut minus = vec![Complex64::new(0.0, 0.0); dim];
    plus[idx(cfg, 0, n)] = Complex64::new(cos_half, 0.0);
    plus[idx(cfg, 1, n + 1)] = Complex64::new(sin_half, 0.0);
    minus[idx(cfg, 0, n)] = Complex64::new(sin_half, 0.0);
    minus[idx(cfg, 1, n + 1)] = Complex64::new(-cos_half, 0.0);

    Ok(DressedStates {
        plus,
        minus,
        e_plus: center + rabi,
        e_minus: center - rabi,
        theta,
    })
}

/// Cached eigendecomposition of the JC Hamiltonian; lets many states or many
/// times reuse one diagonalisation.
#[derive(Debug, Clone)]
pub struct JCEvolver {
    cfg: JCConfig,
    eig: EigenDecomposition,
}

impl JCEvolver {
    pub fn new(cfg: JCConfig) -> Result<Self, JcError> {
        let h = jc_hamiltonian(&cfg);
        let eig = eigh(&h)?;
        Ok(JCEvolver { cfg, eig })
    }

    pub fn config(&self) -> &JCConfig {
        &self.cfg
    }

    /// Propagator `e^{-iHt}`.
    pub fn propagator(&self, t: f64) -> CMatrix {
        self.eig.propagator(t)
    }

    /// Evolve an arbitrary joint state for time `t`.
    pub fn evolve_state(&self, joint: &DensityMatrix, t: f64) -> Result<DensityMatrix, JcError> {
        if joint.dim() != self.cfg.joint_dim() {
            return Err(JcError::InvalidParameter(format!(
                "joint state dimension {} does not match configuration dimension {}",
                joint.dim(),
                self.cfg.joint_dim()
            )));
        }
        let u = self.propagator(t);
        Ok(DensityMatrix::from_trusted(
            u.matmul(joint.matrix()).matmul(&u.adjoint()),
        ))
    }

    /// Reduced states of a joint state.
    pub fn reduce(&self, joint: &DensityMatrix) -> Result<(DensityMatrix, DensityMatrix), JcError> {
        let dims = (2, self.cfg.fock_dim());
        let atom = DensityMatrix::from_trusted(joint.matrix().partial_trace(dims, Subsystem::A)?);
        let field = DensityMatrix::from_trusted(joint.matrix().partial_trace(dims, Subsystem::B)?);
        Ok((atom, field))
    }
}

/// Result of evolving atom ⊗ thermal field for a time `t`.
#[derive(Debug, Clone)]
pub struct JointEvolution {
    pub atom: DensityMatrix,
    pub field: DensityMatrix,
    pub joint: DensityMatrix,
}

/// Exact unitary evolution of `ρ_a ⊗ ρ_l(thermal)` under the JC Hamiltonian.
pub fn evolve_joint(cfg: &JCConfig, atom: &AtomSpec, t: f64) -> Result<JointEvolution, JcError> {
    let evolver = JCEvolver::new(cfg.clone())?;
    evolve_joint_with(&evolver, atom, t)
}

/// Same as [`evolve_joint`] but reusing a cached diagonalisation.
pub fn evolve_joint_with(
    evolver: &JCEvolver,
    atom: &AtomSpec,
    t: f64,
) -> Result<JointEvolution, JcError> {
    let cfg = evolver.config();
    let joint0 = atom_state(atom).product(&cfg.field_thermal_state());
    let joint = evolver.evolve_state(&joint0, t)?;
    let (atom_t, field_t) = evolver.reduce(&joint)?;
    Ok(JointEvolution {
        atom: atom_t,
        field: field_t,
        joint,
    })
}

/// Thermal Fock weights `w_n = e^{-βωn}(1 - e^{-βω})` summed until the tail
/// is negligible; iterator over `(n, w_n)`.
fn thermal_weights(cfg: &JCConfig) -> Vec<f64> {
    if cfg.beta_field.is_infinite() {
        return vec![1.0];
    }
    let x = (-cfg.beta_field * cfg.omega).exp();
    // Remainder after n_cut terms is x^{n_cut+1}; push it below 1e-14.
    let n_cut = ((1e-14f64.ln()) / x.ln()).ceil() as usize + 1;
    let norm = 1.0 - x;
    (0..=n_cut).map(|n| norm * x.powi(n as i32)).collect()
}

/// Closed-form reduced atom state at resonance: excited population and
/// coherence amplitude after time `t` in a thermal field,
///
/// `p_e(t) = Σ_n w_n [p_e cos²(g√(n+1) t)] + Σ_{n≥1} w_n [p_g sin²(g√n t)]`
/// `μ(t) = μ e^{-iωt} Σ_n w_n cos(g√(n+1) t) cos(g√n t)`
///
/// which follows from the dressed-state evolution of each excitation block.
pub fn closed_form_resonant(
    cfg: &JCConfig,
    atom: &AtomSpec,
    t: f64,
) -> Result<(f64, Complex64), JcError> {
    if !cfg.is_resonant() {
        return Err(JcError::NotResonant(cfg.detuning()));
    }
    let w = thermal_weights(cfg);
    let g = cfg.g;
    let mut p_e_t = 0.0;
    let mut mu_sum = 0.0;
    for (n, &wn) in w.iter().enumerate() {
        let nf = n as f64;
        let rabi_up = g * (nf + 1.0).sqrt(); // |e,n> <-> |g,n+1>
        p_e_t += wn * atom.p_e() * (rabi_up * t).cos().powi(2);
        if n >= 1 {
            let rabi_dn = g * nf.sqrt(); // |g,n> <-> |e,n-1>
            p_e_t += wn * atom.p_g() * (rabi_dn * t).sin().powi(2);
        }
        mu_sum += wn * (rabi_up * t).cos() * (g * nf.sqrt() * t).cos();
    }
    let phase = Complex64::new(0.0, -cfg.omega * t).exp();
    Ok((p_e_t, atom.mu() * phase * mu_sum))
}

/// Second-order-in-`gt` limit of the resonant solution:
///
/// `p_e(t) ≈ p_e - g²t² (<n>+1)(p_e - e^{-βω} p_g)` and
/// `μ(t) ≈ μ e^{-iωt} [1 - (1/2 + <n>) g²t²]`.
///
/// Evaluated unconditionally; see [`short_time_approx`] for the
/// regime-checked version.
pub fn short_time_formula(cfg: &JCConfig, atom: &AtomSpec, t: f64) -> (f64, Complex64) {
    let gt2 = cfg.g * cfg.g * t * t;
    let n_mean = cfg.mean_photon_number();
    let x = if cfg.beta_field.is_infinite() {
        0.0
    } else {
        (-cfg.beta_field * cfg.omega).exp()
    };
    let p_e_t = atom.p_e() - gt2 * (n_mean + 1.0) * (atom.p_e() - x * atom.p_g());
    let phase = Complex64::new(0.0, -cfg.omega * t).exp();
    let mu_t = atom.mu() * phase * (1.0 - (0.5 + n_mean) * gt2);
    (p_e_t, mu_t)
}

/// [`short_time_formula`] restricted to its validity window `g t ≤ 0.1`,
/// where the absolute error against the exact solution is O((gt)⁴).
pub fn short_time_approx(
    cfg: &JCConfig,
    atom: &AtomSpec,
    t: f64,
) -> Result<(f64, Complex64), JcError> {
    if cfg.g * t > SHORT_TIME_MAX_GT {
        return Err(JcError::RegimeViolation(format!(
            "short-time limit requires g t <= {SHORT_TIME_MAX_GT}, got {}",
            cfg.g * t
        )));
    }
    Ok(short_time_formula(cfg, atom, t))
}

/// Leading-order coherence loss of one atom crossing the field:
/// `Δξ_a(τ) = -ξ_a(0) (1 + 2<n>) g²τ²`.
///
/// Requires weak coherence (`|μ| ≤ 0.1 (1/2 - p_e)`) and `gτ ≤ 0.1`; the
/// initial coherence `ξ_a(0)` is evaluated exactly.
pub fn coherence_decay_step(cfg: &JCConfig, atom: &AtomSpec, tau: f64) -> Result<f64, JcError> {
    if cfg.g * tau > SHORT_TIME_MAX_GT {
        return Err(JcError::RegimeViolation(format!(
            "requires g τ <= {SHORT_TIME_MAX_GT}, got {}",
            cfg.g * tau
        )));
    }
    if atom.p_e() >= 0.5 || atom.mu().norm() > 0.1 * (0.5 - atom.p_e()) {
        return Err(JcError::RegimeViolation(
            "requires weak coherence: |mu| <= 0.1 (1/2 - p_e)".into(),
        ));
    }
    let xi0 = rel_entropy_coherence(&atom_state(atom));
    Ok(-xi0 * (1.0 + 2.0 * cfg.mean_photon_number()) * cfg.g * cfg.g * tau * tau)
}

/// Coherence-decay rate of the atom stream: `Γ = g² (1 + 2<n>) / r`.
pub fn gamma_coefficient(g: f64, r: f64, n_mean: f64) -> f64 {
    assert!(r > 0.0, "atom rate must be positive");
    g * g * (1.0 + 2.0 * n_mean) / r
}

/// Whether each atom sees a fresh thermal field (the idealisation behind the
/// Γ law) or the field accumulated from previous atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldMode {
    FrozenField,
    UpdatingField,
}

/// A repeated-interaction run: `n_atoms` identical atoms cross the field at
/// rate `r`, each interacting for `τ = 1/r`.
#[derive(Debug, Clone)]
pub struct MicromaserRun {
    pub cfg: JCConfig,
    pub atom: AtomSpec,
    pub rate: f64,
    pub n_atoms: usize,
}

impl MicromaserRun {
    pub fn tau(&self) -> f64 {
        1.0 / self.rate
    }

    pub fn total_time(&self) -> f64 {
        self.n_atoms as f64 * self.tau()
    }
}

/// Per-atom ledger entry.
#[derive(Debug, Clone, Serialize)]
pub struct AtomRecord {
    pub atom_index: usize,
    /// Exit time of this atom, `atom_index · τ`.
    pub t: f64,
    pub xi_before: f64,
    pub xi_after: f64,
    pub delta_xi: f64,
    /// Heat absorbed by the field while this atom crossed it.
    pub q_step: f64,
    /// Mean photon number the atom saw on entry.
    pub n_mean_field: f64,
    /// Frobenius distance of the entry field state from the initial thermal
    /// field; only tracked in updating-field mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field_drift: Option<f64>,
}

/// Full ledger of a micromaser run.
#[derive(Debug, Clone, Serialize)]
pub struct MicromaserLedger {
    pub mode: FieldMode,
    pub records: Vec<AtomRecord>,
    /// Cumulative coherence change of the atom stream, `Σ Δξ`.
    pub delta_xi_total: f64,
    /// Cumulative heat into the field.
    pub heat_total: f64,
    /// `-Γ ξ_a(0) t_f` for comparison.
    pub delta_xi_formula: f64,
    pub gamma: f64,
    pub xi_initial: f64,
    pub t_f: f64,
}

impl MicromaserLedger {
    /// Relative gap between the simulated coherence change and the Γ-law
    /// prediction; `None` when the prediction is zero (no atoms or no
    /// initial coherence).
    pub fn relative_gap(&self) -> Option<f64> {
        if self.delta_xi_formula == 0.0 {
            None
        } else {
            Some((self.delta_xi_total - self.delta_xi_formula).abs() / self.delta_xi_formula.abs())
        }
    }

    /// Effective field temperature trajectory as βω = ln(1 + 1/<n>), one
    /// entry per atom. Reported instead of asserting isothermality.
    pub fn field_beta_omega_trajectory(&self) -> Vec<f64> {
        self.records
            .iter()
            .map(|r| {
                if r.n_mean_field > 0.0 {
                    (1.0 + 1.0 / r.n_mean_field).ln()
                } else {
                    f64::INFINITY
                }
            })
            .collect()
    }

    pub fn csv_header(mode: FieldMode) -> &'static str {
        match mode {
            FieldMode::FrozenField => {
                "atom_index,t,xi_before,xi_after,delta_xi,q_step,n_mean_field"
            }
            FieldMode::UpdatingField => {
                "atom_index,t,xi_before,xi_after,delta_xi,q_step,n_mean_field,field_drift"
            }
        }
    }

    pub fn csv_rows(&self) -> Vec<String> {
        self.records
            .iter()
            .map(|r| {
                let mut cols = vec![
                    r.atom_index.to_string(),
                    format!("{:.16e}", r.t),
                    format!("{:.16e}", r.xi_before),
                    format!("{:.16e}", r.xi_after),
                    format!("{:.16e}", r.delta_xi),
                    format!("{:.16e}", r.q_step),
                    format!("{:.16e}", r.n_mean_field),
                ];
                if let Some(d) = r.field_drift {
                    cols.push(format!("{d:.16e}"));
                }
                cols.join(",")
            })
            .collect()
    }
}

/// Drive `n_atoms` atoms through the cavity field, one interaction time τ
/// each, and record the coherence ledger.
///
/// In frozen-field mode every atom sees the same initial thermal field; in
/// updating-field mode the field evolved by each atom is handed to the next.
pub fn run_micromaser(run: &MicromaserRun, mode: FieldMode) -> Result<MicromaserLedger, JcError> {
    if !run.rate.is_finite() || run.rate <= 0.0 {
        return Err(JcError::InvalidParameter(format!("rate = {}", run.rate)));
    }
    let cfg = &run.cfg;
    let tau = run.tau();
    let evolver = JCEvolver::new(cfg.clone())?;
    let field0 = cfg.field_thermal_state();
    let field_numbers: Vec<f64> = (0..cfg.fock_dim()).map(|n| n as f64).collect();
    let field_energies = cfg.field_energies();
    let atom0 = atom_state(&run.atom);
    let xi_initial = rel_entropy_coherence(&atom0);

    let mut records = Vec::with_capacity(run.n_atoms);
    let mut delta_xi_total = 0.0;
    let mut heat_total = 0.0;
    let mut field = field0.clone();

    for k in 0..run.n_atoms {
        let field_in = match mode {
            FieldMode::FrozenField => &field0,
            FieldMode::UpdatingField => &field,
        };
        let n_mean_in = field_in.diag_expectation(&field_numbers);
        let u_field_in = field_in.diag_expectation(&field_energies);
        let joint0 = atom0.product(field_in);
        let joint_t = evolver.evolve_state(&joint0, tau)?;
        let (atom_t, field_t) = evolver.reduce(&joint_t)?;

        let xi_after = rel_entropy_coherence(&atom_t);
        let delta_xi = xi_after - xi_initial;
        let q_step = field_t.diag_expectation(&field_energies) - u_field_in;
        let field_drift = match mode {
            FieldMode::FrozenField => None,
            FieldMode::UpdatingField => {
                Some(field_in.matrix().sub(field0.matrix()).frobenius_norm())
            }
        };

        delta_xi_total += delta_xi;
        heat_total += q_step;
        records.push(AtomRecord {
            atom_index: k + 1,
            t: (k + 1) as f64 * tau,
            xi_before: xi_initial,
            xi_after,
            delta_xi,
            q_step,
            n_mean_field: n_mean_in,
            field_drift,
        });

        if mode == FieldMode::UpdatingField {
            field = field_t;
        }
    }

    let gamma = gamma_coefficient(cfg.g, run.rate, cfg.mean_photon_number());
    let t_f = run.total_time();
    Ok(MicromaserLedger {
        mode,
        records,
        delta_xi_total,
        heat_total,
        delta_xi_formula: -gamma * xi_initial * t_f,
        gamma,
        xi_initial,
        t_f,
    })
}

/// Solve for the coherence amplitude (real, non-negative) that gives a
/// two-level atom the requested exact relative entropy of coherence at fixed
/// `p_e`. Used to prepare atom streams with a prescribed ξ_a(0).
pub fn mu_for_target_coherence(p_e: f64, xi_target: f64) -> Result<AtomSpec, JcError> {
    if !(0.0..1.0).contains(&p_e) {
        return Err(JcError::InvalidParameter(format!("p_e = {p_e}")));
    }
    if xi_target < 0.0 {
        return Err(JcError::InvalidParameter(format!("xi = {xi_target}")));
    }
    if xi_target == 0.0 {
        return Ok(AtomSpec::new(p_e, Complex64::new(0.0, 0.0))
            .expect("mu = 0 is always valid"));
    }
    let mu_max = (p_e * (1.0 - p_e)).sqrt();
    let xi_at = |mu: f64| {
        let spec = AtomSpec::new(p_e, Complex64::new(mu, 0.0)).expect("mu within bound");
        rel_entropy_coherence(&atom_state(&spec))
    };
    if xi_target >= xi_at(mu_max * (1.0 - 1e-12)) {
        return Err(JcError::InvalidParameter(format!(
            "coherence target {xi_target} unreachable at p_e = {p_e}"
        )));
    }
    let (mut lo, mut hi) = (0.0, mu_max * (1.0 - 1e-12));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if xi_at(mid) < xi_target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mu = 0.5 * (lo + hi);
    Ok(AtomSpec::new(p_e, Complex64::new(mu, 0.0)).expect("mu within bound"))
}
