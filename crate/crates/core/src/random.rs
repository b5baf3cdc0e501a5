//! Seeded random matrices and states for the verification suites.
//!
//! A single 64-bit seed drives a splitmix64 stream; everything downstream
//! (Gaussians via Box-Muller, unitaries via Gram-Schmidt) is deterministic,
//! so identical seeds reproduce identical instances on any platform.

use crate::linalg::CMatrix;
use crate::states::DensityMatrix;
use num_complex::Complex64;

/// splitmix64: state advances by the golden-ratio increment, output is the
/// finalizer of Steele et al. Small, seedable and portable.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Standard normal via Box-Muller.
    pub fn next_gaussian(&mut self) -> f64 {
        // Guard the log against u = 0.
        let u = loop {
            let u = self.next_f64();
            if u > 0.0 {
                break u;
            }
        };
        let v = self.next_f64();
        (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
    }

    pub fn next_complex_gaussian(&mut self) -> Complex64 {
        Complex64::new(self.next_gaussian(), self.next_gaussian())
    }
}

/// Ginibre matrix: independent standard complex Gaussian entries.
pub fn random_ginibre(rng: &mut SplitMix64, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| rng.next_complex_gaussian())
}

/// Random Hermitian matrix `(G + G†)/2` with O(1) entries.
pub fn random_hermitian(rng: &mut SplitMix64, n: usize) -> CMatrix {
    let g = random_ginibre(rng, n);
    g.add(&g.adjoint()).scale(Complex64::new(0.5, 0.0))
}

/// Haar-like random unitary: Gram-Schmidt orthonormalisation of a Ginibre
/// matrix with the R-diagonal phases divided out.
pub fn random_unitary(rng: &mut SplitMix64, n: usize) -> CMatrix {
    let g = random_ginibre(rng, n);
    // Modified Gram-Schmidt on columns, with one re-orthogonalisation pass.
    let mut q = g;
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let mut proj = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    proj += q[(i, k)].conj() * q[(i, j)];
                }
                for i in 0..n {
                    let qk = q[(i, k)];
                    q[(i, j)] -= proj * qk;
                }
            }
        }
        let norm: f64 = (0..n).map(|i| q[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        // Ginibre columns are never degenerate in practice; normalise and fix
        // the phase so the distribution does not depend on the GS pivoting.
        let phase = {
            let pivot = q[(0, j)];
            if pivot.norm() > 1e-300 {
                pivot / pivot.norm()
            } else {
                Complex64::new(1.0, 0.0)
            }
        };
        for i in 0..n {
            let v = q[(i, j)];
            q[(i, j)] = v / (norm * phase);
        }
    }
    q
}

/// Random density matrix from the Hilbert-Schmidt ensemble: `G G† / tr`.
pub fn random_density(rng: &mut SplitMix64, n: usize) -> DensityMatrix {
    let g = random_ginibre(rng, n);
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    DensityMatrix::new(m.scale(Complex64::new(1.0 / tr, 0.0)))
        .expect("normalised G G† is a density matrix")
}

/// Sorted non-degenerate energies in [0, 1] with a minimum level spacing.
pub fn random_energies(rng: &mut SplitMix64, n: usize, min_gap: f64) -> Vec<f64> {
    assert!(n >= 1);
    assert!(min_gap * (n as f64) < 1.0, "cannot fit {n} levels with gap {min_gap}");
    loop {
        let mut e: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
        e.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if e.windows(2).all(|w| w[1] - w[0] >= min_gap) {
            return e;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CMatrix;

    #[test]
    fn stream_is_deterministic() {
        let mut a = SplitMix64::new(1234);
        let mut b = SplitMix64::new(1234);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn unitary_is_unitary() {
        let mut rng = SplitMix64::new(5);
        for n in [2usize, 3, 6] {
            let u = random_unitary(&mut rng, n);
            let err = u
                .adjoint()
                .matmul(&u)
                .sub(&CMatrix::identity(n))
                .max_abs();
            assert!(err < 1e-12, "unitarity defect {err} at n = {n}");
        }
    }

    #[test]
    fn density_is_valid_and_full_rank_generically() {
        let mut rng = SplitMix64::new(6);
        let rho = random_density(&mut rng, 4);
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        assert!(rho.eigenvalues()[0] > 0.0);
    }

    #[test]
    fn energies_sorted_with_gap() {
        let mut rng = SplitMix64::new(7);
        let e = random_energies(&mut rng, 6, 0.03);
        for w in e.windows(2) {
            assert!(w[1] - w[0] >= 0.03);
        }
    }

    #[test]
    fn gaussian_moments_are_sane() {
        let mut rng = SplitMix64::new(8);
        let n = 20000;
        let samples: Vec<f64> = (0..n).map(|_| rng.next_gaussian()).collect();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.05);
        assert!((var - 1.0).abs() < 0.05);
    }
}
