//! Information-theoretic functionals: von Neumann entropy, quantum relative
//! entropy, relative entropy of coherence, l1-norm coherence and mutual
//! information. All values are in nats (natural logarithm, `k_B = 1`).
//!
//! The l1-norm coherence is provided for empirical contrast only; the
//! entropy balances in [`crate::reservoir`] close with the relative entropy
//! of coherence and do not with the l1 norm.

use crate::linalg::eigh;
use crate::states::{dephase, AtomSpec, DensityMatrix};
use thiserror::Error;

/// Eigenvalues of σ at or below this threshold count as outside its support.
pub const SUPPORT_TOL: f64 = 1e-12;

/// Weight of ρ outside the support of σ above which the relative entropy is
/// reported as infinite.
pub const SUPPORT_WEIGHT_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("outside validity regime: {0}")]
    RegimeViolation(String),
}

/// A joint state on `d_A ⊗ d_B` with the split recorded.
#[derive(Debug, Clone)]
pub struct BipartiteState {
    rho: DensityMatrix,
    d_a: usize,
    d_b: usize,
}

impl BipartiteState {
    pub fn new(rho: DensityMatrix, d_a: usize, d_b: usize) -> Result<Self, MeasureError> {
        if rho.dim() != d_a * d_b {
            return Err(MeasureError::DimensionMismatch(format!(
                "state dimension {} is not {d_a}*{d_b}",
                rho.dim()
            )));
        }
        Ok(BipartiteState { rho, d_a, d_b })
    }

    pub fn joint(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d_a, self.d_b)
    }

    pub fn reduced_a(&self) -> DensityMatrix {
        let m = self
            .rho
            .matrix()
            .partial_trace((self.d_a, self.d_b), crate::linalg::Subsystem::A)
            .expect("dims validated at construction");
        DensityMatrix::from_trusted(m)
    }

    pub fn reduced_b(&self) -> DensityMatrix {
        let m = self
            .rho
            .matrix()
            .partial_trace((self.d_a, self.d_b), crate::linalg::Subsystem::B)
            .expect("dims validated at construction");
        DensityMatrix::from_trusted(m)
    }
}

fn clamped_spectrum(rho: &DensityMatrix) -> Vec<f64> {
    // Exactly diagonal states (thermal, dephased) read off directly.
    let raw = match rho.matrix().exactly_diagonal() {
        Some(d) => d,
        None => rho.eigenvalues(),
    };
    raw.iter().map(|&l| l.clamp(0.0, 1.0)).collect()
}

fn shannon(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum()
}

/// Von Neumann entropy `-tr[ρ ln ρ]`, with the convention `0 ln 0 = 0`.
pub fn vn_entropy(rho: &DensityMatrix) -> f64 {
    shannon(&clamped_spectrum(rho))
}

/// Quantum relative entropy `tr[ρ ln ρ] - tr[ρ ln σ]`.
///
/// Returns `+∞` when ρ puts more than [`SUPPORT_WEIGHT_TOL`] weight outside
/// the support of σ; that value is a legitimate result, not an error.
pub fn rel_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64, MeasureError> {
    if rho.dim() != sigma.dim() {
        return Err(MeasureError::DimensionMismatch(format!(
            "rho is {}-dimensional, sigma is {}-dimensional",
            rho.dim(),
            sigma.dim()
        )));
    }
    let sig = eigh(sigma.matrix()).expect("validated state must decompose");
    // Weight of ρ on each eigenvector of σ: <v_i| ρ |v_i>.
    let n = rho.dim();
    let mut cross = 0.0;
    let mut null_weight = 0.0;
    for i in 0..n {
        let mut w = 0.0;
        for r in 0..n {
            let vir = sig.eigenvectors[(r, i)];
            for s in 0..n {
                let vis = sig.eigenvectors[(s, i)];
                w += (vir.conj() * rho.matrix()[(r, s)] * vis).re;
            }
        }
        let w = w.max(0.0);
        let lam = sig.eigenvalues[i];
        if lam <= SUPPORT_TOL {
            null_weight += w;
        } else {
            cross += w * lam.ln();
        }
    }
    if null_weight > SUPPORT_WEIGHT_TOL {
        return Ok(f64::INFINITY);
    }
    Ok(-vn_entropy(rho) - cross)
}

/// Relative entropy of coherence `S[ρ^d] - S[ρ]` in the computational basis.
pub fn rel_entropy_coherence(rho: &DensityMatrix) -> f64 {
    let diag: Vec<f64> = rho.populations().iter().map(|&p| p.clamp(0.0, 1.0)).collect();
    shannon(&diag) - vn_entropy(rho)
}

/// First-order weak-coherence approximation
/// `ξ_a ≈ ln[p_g/(1-p_g)] · |μ|² / (1-2p_e)` for a two-level atom.
///
/// Valid for `p_e < 1/2` and `|μ| ≤ 0.1 (1/2 - p_e)`; the relative error
/// against the exact coherence is bounded by `5 (|μ|/(1/2-p_e))²`.
pub fn weak_coherence_approx(spec: &AtomSpec) -> Result<f64, MeasureError> {
    let p_e = spec.p_e();
    if p_e >= 0.5 {
        return Err(MeasureError::RegimeViolation(format!(
            "requires p_e < 1/2, got {p_e}"
        )));
    }
    let margin = 0.5 - p_e;
    let mu_abs = spec.mu().norm();
    if mu_abs > 0.1 * margin {
        return Err(MeasureError::RegimeViolation(format!(
            "requires |mu| <= 0.1*(1/2 - p_e) = {:.3e}, got {mu_abs:.3e}",
            0.1 * margin
        )));
    }
    let p_g = spec.p_g();
    Ok((p_g / (1.0 - p_g)).ln() * mu_abs * mu_abs / (1.0 - 2.0 * p_e))
}

/// l1-norm coherence `Σ_{i≠j} |ρ_ij|` (comparison measure only).
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    let n = rho.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += rho.matrix()[(i, j)].norm();
            }
        }
    }
    sum
}

/// Mutual information `I(A:B) = S_A + S_B - S_AB`.
pub fn mutual_information(bs: &BipartiteState) -> f64 {
    vn_entropy(&bs.reduced_a()) + vn_entropy(&bs.reduced_b()) - vn_entropy(bs.joint())
}

/// Consistency check used across the crate: the coherence measure equals the
/// relative entropy between a state and its dephased version.
pub fn coherence_matches_rel_entropy(rho: &DensityMatrix, tol: f64) -> bool {
    let via_rel = rel_entropy(rho, &dephase(rho)).expect("same dimension");
    (via_rel - rel_entropy_coherence(rho)).abs() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CMatrix;
    use crate::random::SplitMix64;
    use crate::states::{atom_state, thermal_state};
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn binary_entropy(p: f64) -> f64 {
        if p <= 0.0 || p >= 1.0 {
            0.0
        } else {
            -p * p.ln() - (1.0 - p) * (1.0 - p).ln()
        }
    }

    #[test]
    fn entropy_of_pure_state_is_zero() {
        let plus = atom_state(&AtomSpec::new(0.5, c(0.5, 0.)).unwrap());
        assert!(vn_entropy(&plus).abs() < 1e-12);
    }

    #[test]
    fn entropy_of_maximally_mixed_qubit() {
        let rho = thermal_state(&[0.0, 1.0], 0.0).unwrap();
        assert!((vn_entropy(&rho) - 2.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn entropy_of_thermal_qubit() {
        let rho = thermal_state(&[0.0, 1.0], 1.0).unwrap();
        let p_e = (-1.0f64).exp() / (1.0 + (-1.0f64).exp());
        assert!((vn_entropy(&rho) - binary_entropy(p_e)).abs() < 1e-12);
        assert!((vn_entropy(&rho) - 0.582203).abs() < 1e-6);
    }

    #[test]
    fn entropy_bounds() {
        let mut rng = SplitMix64::new(1);
        for _ in 0..50 {
            let rho = crate::random::random_density(&mut rng, 4);
            let s = vn_entropy(&rho);
            assert!(s >= -1e-10 && s <= 4.0f64.ln() + 1e-10);
        }
    }

    #[test]
    fn rel_entropy_of_state_with_itself_is_zero() {
        let rho = atom_state(&AtomSpec::new(0.3, c(0.1, 0.05)).unwrap());
        assert!(rel_entropy(&rho, &rho).unwrap().abs() < 1e-12);
    }

    #[test]
    fn rel_entropy_classical_kl() {
        let rho = DensityMatrix::new(CMatrix::from_real_diag(&[1.0, 0.0])).unwrap();
        let sigma = DensityMatrix::new(CMatrix::from_real_diag(&[0.5, 0.5])).unwrap();
        assert!((rel_entropy(&rho, &sigma).unwrap() - 2.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn rel_entropy_support_violation_is_infinite() {
        let rho = DensityMatrix::new(CMatrix::from_real_diag(&[0.5, 0.5])).unwrap();
        let sigma = DensityMatrix::new(CMatrix::from_real_diag(&[1.0, 0.0])).unwrap();
        assert!(rel_entropy(&rho, &sigma).unwrap().is_infinite());
    }

    /// Oracle: expand both traces over separate eigendecompositions,
    /// including the overlap matrix |<r_i|s_j>|².
    fn rel_entropy_oracle(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
        let er = eigh(rho.matrix()).unwrap();
        let es = eigh(sigma.matrix()).unwrap();
        let n = rho.dim();
        let mut out = 0.0;
        for i in 0..n {
            let ri = er.eigenvalues[i].clamp(0.0, 1.0);
            if ri > 0.0 {
                out += ri * ri.ln();
            }
            for j in 0..n {
                let sj = es.eigenvalues[j].clamp(0.0, 1.0);
                let mut overlap = Complex64::new(0.0, 0.0);
                for r in 0..n {
                    overlap += er.eigenvectors[(r, i)].conj() * es.eigenvectors[(r, j)];
                }
                let p_ij = overlap.norm_sqr();
                if sj > 0.0 && ri > 0.0 && p_ij > 0.0 {
                    out -= ri * p_ij * sj.ln();
                }
            }
        }
        out
    }

    #[test]
    fn rel_entropy_matches_independent_oracle() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..20 {
            let rho = crate::random::random_density(&mut rng, 3);
            let sigma = crate::random::random_density(&mut rng, 3);
            let fast = rel_entropy(&rho, &sigma).unwrap();
            let slow = rel_entropy_oracle(&rho, &sigma);
            assert!(
                (fast - slow).abs() < 1e-9,
                "fast {fast} vs oracle {slow}"
            );
        }
    }

    #[test]
    fn rel_entropy_klein_inequality() {
        let mut rng = SplitMix64::new(21);
        for _ in 0..50 {
            let rho = crate::random::random_density(&mut rng, 4);
            let sigma = crate::random::random_density(&mut rng, 4);
            let d = rel_entropy(&rho, &sigma).unwrap();
            assert!(d >= -1e-10);
            let dist = rho.matrix().sub(sigma.matrix()).frobenius_norm();
            if dist < 1e-8 {
                assert!(d < 1e-10);
            }
            if d < 1e-12 {
                assert!(dist < 1e-5, "zero divergence implies equal states");
            }
        }
    }

    #[test]
    fn coherence_examples() {
        let diag = thermal_state(&[0.0, 1.0, 2.0], 0.7).unwrap();
        assert!(rel_entropy_coherence(&diag).abs() < 1e-12);

        let plus = atom_state(&AtomSpec::new(0.5, c(0.5, 0.)).unwrap());
        assert!((rel_entropy_coherence(&plus) - 2.0f64.ln()).abs() < 1e-12);

        // S[diag(0.3, 0.7)] - S[eigs 1/2 ± sqrt(0.05)]
        let atom = atom_state(&AtomSpec::new(0.3, c(0.1, 0.)).unwrap());
        let expect = binary_entropy(0.3) - binary_entropy(0.5 - 0.05f64.sqrt());
        assert!((rel_entropy_coherence(&atom) - expect).abs() < 1e-12);
    }

    #[test]
    fn coherence_equals_rel_entropy_to_dephased() {
        let mut rng = SplitMix64::new(99);
        for _ in 0..200 {
            let rho = crate::random::random_density(&mut rng, 3);
            assert!(coherence_matches_rel_entropy(&rho, 1e-9));
        }
    }

    #[test]
    fn weak_coherence_zero_mu() {
        let spec = AtomSpec::new(0.2, c(0., 0.)).unwrap();
        assert_eq!(weak_coherence_approx(&spec).unwrap(), 0.0);
    }

    #[test]
    fn weak_coherence_formula_value_and_accuracy() {
        let spec = AtomSpec::new(0.2, c(0.01, 0.)).unwrap();
        let approx = weak_coherence_approx(&spec).unwrap();
        let expect = 4.0f64.ln() * 1e-4 / 0.6;
        assert!((approx - expect).abs() < 1e-12);
        assert!((approx - 2.3104906e-4).abs() < 1e-9);

        let exact = rel_entropy_coherence(&atom_state(&spec));
        let ratio = (0.01f64 / 0.3).powi(2);
        assert!((approx - exact).abs() / exact <= 5.0 * ratio);
    }

    #[test]
    fn weak_coherence_quadratic_scaling() {
        let small = weak_coherence_approx(&AtomSpec::new(0.2, c(0.01, 0.)).unwrap()).unwrap();
        let large = weak_coherence_approx(&AtomSpec::new(0.2, c(0.02, 0.)).unwrap()).unwrap();
        assert!((large / small - 4.0).abs() < 1e-12);
        // The exact coherence scales the same way to leading order.
        let exact_small = rel_entropy_coherence(&atom_state(&AtomSpec::new(0.2, c(0.01, 0.)).unwrap()));
        let exact_large = rel_entropy_coherence(&atom_state(&AtomSpec::new(0.2, c(0.02, 0.)).unwrap()));
        assert!((exact_large / exact_small - 4.0).abs() < 0.01);
    }

    #[test]
    fn weak_coherence_regime_violations() {
        let hot = AtomSpec::new(0.6, c(0.01, 0.)).unwrap();
        assert!(matches!(
            weak_coherence_approx(&hot),
            Err(MeasureError::RegimeViolation(_))
        ));
        let strong = AtomSpec::new(0.2, c(0.2, 0.)).unwrap();
        assert!(matches!(
            weak_coherence_approx(&strong),
            Err(MeasureError::RegimeViolation(_))
        ));
    }

    #[test]
    fn l1_examples() {
        let diag = thermal_state(&[0.0, 1.0], 1.0).unwrap();
        assert_eq!(l1_coherence(&diag), 0.0);
        let plus = atom_state(&AtomSpec::new(0.5, c(0.5, 0.)).unwrap());
        assert!((l1_coherence(&plus) - 1.0).abs() < 1e-12);
        let atom = atom_state(&AtomSpec::new(0.3, c(0.1, 0.)).unwrap());
        assert!((l1_coherence(&atom) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_product_state_is_zero() {
        let mut rng = SplitMix64::new(5);
        let a = crate::random::random_density(&mut rng, 2);
        let b = crate::random::random_density(&mut rng, 3);
        let bs = BipartiteState::new(a.product(&b), 2, 3).unwrap();
        assert!(mutual_information(&bs).abs() < 1e-10);
    }

    #[test]
    fn mutual_information_bell_state() {
        let mut bell = CMatrix::zeros(4, 4);
        for &i in &[0usize, 3] {
            for &j in &[0usize, 3] {
                bell[(i, j)] = c(0.5, 0.0);
            }
        }
        let bs = BipartiteState::new(DensityMatrix::new(bell).unwrap(), 2, 2).unwrap();
        assert!((mutual_information(&bs) - 2.0 * 2.0f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn mutual_information_matches_three_eig_oracle() {
        let mut rng = SplitMix64::new(31);
        for _ in 0..20 {
            let rho = crate::random::random_density(&mut rng, 6);
            let bs = BipartiteState::new(rho, 2, 3).unwrap();
            let via_parts = {
                let sa = shannon(&bs.reduced_a().eigenvalues().iter().map(|&x| x.clamp(0.0, 1.0)).collect::<Vec<_>>());
                let sb = shannon(&bs.reduced_b().eigenvalues().iter().map(|&x| x.clamp(0.0, 1.0)).collect::<Vec<_>>());
                let sab = shannon(&bs.joint().eigenvalues().iter().map(|&x| x.clamp(0.0, 1.0)).collect::<Vec<_>>());
                sa + sb - sab
            };
            let i = mutual_information(&bs);
            assert!((i - via_parts).abs() < 1e-9);
            assert!(i >= -1e-9);
        }
    }

    #[test]
    fn mutual_information_invariant_under_local_unitaries() {
        let mut rng = SplitMix64::new(77);
        for _ in 0..10 {
            let rho = crate::random::random_density(&mut rng, 6);
            let bs = BipartiteState::new(rho.clone(), 2, 3).unwrap();
            let ua = crate::random::random_unitary(&mut rng, 2);
            let ub = crate::random::random_unitary(&mut rng, 3);
            let u = ua.kron(&ub);
            let rotated = u.matmul(rho.matrix()).matmul(&u.adjoint());
            let bs2 = BipartiteState::new(DensityMatrix::new(rotated).unwrap(), 2, 3).unwrap();
            assert!((mutual_information(&bs) - mutual_information(&bs2)).abs() < 1e-9);
        }
    }

    #[test]
    fn entropies_invariant_under_global_unitary() {
        let mut rng = SplitMix64::new(13);
        let rho = crate::random::random_density(&mut rng, 4);
        let u = crate::random::random_unitary(&mut rng, 4);
        let rotated =
            DensityMatrix::new(u.matmul(rho.matrix()).matmul(&u.adjoint())).unwrap();
        assert!((vn_entropy(&rho) - vn_entropy(&rotated)).abs() < 1e-10);
    }
}
