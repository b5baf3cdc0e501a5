//! Dense complex linear algebra for Hilbert-space dimensions up to a few
//! hundred: Hermitian eigendecomposition, matrix functions of Hermitian
//! operators, tensor products, and partial traces.
//!
//! Everything here is plain row-major storage over `Complex64`. The
//! eigensolver is a cyclic Jacobi iteration specialised to Hermitian
//! matrices; at these dimensions it is accurate to close to machine
//! precision and has no external dependencies, which keeps results
//! bit-reproducible across platforms.

use num_complex::Complex64;
use thiserror::Error;

/// Default tolerance for `‖m − m†‖_max` when an operation requires a
/// Hermitian input.
pub const DEFAULT_HERMITICITY_TOL: f64 = 1e-10;

/// Jacobi sweep cap. Convergence is quadratic; well-conditioned inputs
/// finish in fewer than 15 sweeps even at dimension ~300.
const MAX_JACOBI_SWEEPS: usize = 100;

/// The sweep loop stops once the off-diagonal Frobenius norm drops below
/// this factor times the Frobenius norm of the input.
const JACOBI_OFFDIAG_FACTOR: f64 = 1e-14;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: max |m - m\u{2020}| = {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { defect: f64, tol: f64 },
    #[error("Jacobi eigensolver did not converge in {sweeps} sweeps (off-diagonal norm {offdiag:.3e})")]
    ConvergenceFailure { sweeps: usize, offdiag: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("scalar function undefined at eigenvalue {eigenvalue}")]
    DomainError { eigenvalue: f64 },
}

/// Which subsystem of a bipartite operator to keep in a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be >= 1");
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build a square matrix with the given real diagonal.
    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = CMatrix::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Row-major construction from a flat slice; `data.len()` must be `rows*cols`.
    pub fn from_slice(rows: usize, cols: usize, data: &[Complex64]) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be >= 1");
        CMatrix {
            rows,
            cols,
            data: data.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(
            self.cols, other.rows,
            "matmul: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a_ik = self[(i, k)];
                if a_ik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row_out = i * other.cols;
                let row_b = k * other.cols;
                for j in 0..other.cols {
                    out.data[row_out + j] += a_ik * other.data[row_b + j];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x += y;
        }
        out
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x -= y;
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> CMatrix {
        let mut out = self.clone();
        for x in out.data.iter_mut() {
            *x *= factor;
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `‖m − m†‖_max`; zero for exactly Hermitian input.
    pub fn hermiticity_defect(&self) -> f64 {
        assert!(self.is_square(), "hermiticity defect of non-square matrix");
        let mut defect = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                defect = defect.max(d);
            }
        }
        defect
    }

    /// Real parts of the diagonal.
    pub fn real_diag(&self) -> Vec<f64> {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)].re).collect()
    }

    /// Returns the diagonal as real values when every off-diagonal entry is
    /// exactly zero, otherwise `None`.
    pub fn exactly_diagonal(&self) -> Option<Vec<f64>> {
        if !self.is_square() {
            return None;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j && self[(i, j)] != Complex64::new(0.0, 0.0) {
                    return None;
                }
            }
        }
        Some(self.real_diag())
    }

    /// Tensor product with index convention `(i_a, i_b) -> i_a * dim_b + i_b`.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for ia in 0..self.rows {
            for ja in 0..self.cols {
                let a = self[(ia, ja)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for ib in 0..other.rows {
                    for jb in 0..other.cols {
                        out[(ia * other.rows + ib, ja * other.cols + jb)] = a * other[(ib, jb)];
                    }
                }
            }
        }
        out
    }

    /// Partial trace of a square operator on a `d_a ⊗ d_b` space.
    pub fn partial_trace(&self, dims: (usize, usize), keep: Subsystem) -> Result<CMatrix, LinalgError> {
        let (d_a, d_b) = dims;
        if !self.is_square() || self.rows != d_a * d_b {
            return Err(LinalgError::DimensionMismatch(format!(
                "partial trace expects a {n}x{n} operator for dims {d_a}x{d_b}, got {r}x{c}",
                n = d_a * d_b,
                r = self.rows,
                c = self.cols
            )));
        }
        let out = match keep {
            Subsystem::A => CMatrix::from_fn(d_a, d_a, |i, j| {
                (0..d_b).map(|k| self[(i * d_b + k, j * d_b + k)]).sum()
            }),
            Subsystem::B => CMatrix::from_fn(d_b, d_b, |k, l| {
                (0..d_a).map(|i| self[(i * d_b + k, i * d_b + l)]).sum()
            }),
        };
        Ok(out)
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Free-function tensor product; same convention as [`CMatrix::kron`].
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kron(b)
}

/// Free-function partial trace; same convention as [`CMatrix::partial_trace`].
pub fn partial_trace(
    m: &CMatrix,
    dims: (usize, usize),
    keep: Subsystem,
) -> Result<CMatrix, LinalgError> {
    m.partial_trace(dims, keep)
}

/// Eigendecomposition of a Hermitian matrix: real ascending eigenvalues and
/// a unitary matrix whose columns are the matching eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V diag(d) V†` for an arbitrary complex diagonal `d`.
    pub fn conjugate_diag(&self, diag: &[Complex64]) -> CMatrix {
        let n = self.dim();
        assert_eq!(diag.len(), n);
        let v = &self.eigenvectors;
        // scaled = V diag(d)
        let mut scaled = v.clone();
        for j in 0..n {
            for i in 0..n {
                scaled[(i, j)] *= diag[j];
            }
        }
        scaled.matmul(&v.adjoint())
    }

    /// Rebuild `V diag(λ) V†`.
    pub fn reconstruct(&self) -> CMatrix {
        let diag: Vec<Complex64> = self
            .eigenvalues
            .iter()
            .map(|&l| Complex64::new(l, 0.0))
            .collect();
        self.conjugate_diag(&diag)
    }

    /// Propagator `e^{-iHt} = V e^{-iλt} V†` of the decomposed Hamiltonian.
    pub fn propagator(&self, t: f64) -> CMatrix {
        let diag: Vec<Complex64> = self
            .eigenvalues
            .iter()
            .map(|&l| Complex64::new(0.0, -l * t).exp())
            .collect();
        self.conjugate_diag(&diag)
    }
}

/// Hermitian eigendecomposition via cyclic Jacobi rotations.
///
/// The input is symmetrised to `(m + m†)/2` before iterating, provided its
/// hermiticity defect does not exceed `hermiticity_tol`. Eigenvalues come
/// back ascending.
pub fn hermitian_eig(m: &CMatrix, hermiticity_tol: f64) -> Result<EigenDecomposition, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let defect = m.hermiticity_defect();
    if defect > hermiticity_tol {
        return Err(LinalgError::NotHermitian {
            defect,
            tol: hermiticity_tol,
        });
    }
    let n = m.rows();
    // Symmetrise. Diagonal imaginary parts are dropped with the defect bound.
    let mut a = CMatrix::from_fn(n, n, |i, j| {
        let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
        if i == j {
            Complex64::new(z.re, 0.0)
        } else {
            z
        }
    });
    let mut v = CMatrix::identity(n);

    let scale = a.frobenius_norm();
    let threshold = JACOBI_OFFDIAG_FACTOR * scale;
    if scale > 0.0 {
        let mut converged = false;
        for _sweep in 0..MAX_JACOBI_SWEEPS {
            if offdiag_norm(&a) <= threshold {
                converged = true;
                break;
            }
            // One cyclic sweep; elements too small to move the off-diagonal
            // norm past the threshold are skipped.
            let skip = threshold / (n as f64);
            for p in 0..n - 1 {
                for q in p + 1..n {
                    rotate_pair(&mut a, &mut v, p, q, skip);
                }
            }
        }
        if !converged && offdiag_norm(&a) > threshold {
            return Err(LinalgError::ConvergenceFailure {
                sweeps: MAX_JACOBI_SWEEPS,
                offdiag: offdiag_norm(&a),
            });
        }
    }

    // Sort ascending, permuting eigenvector columns to match.
    let mut order: Vec<usize> = (0..n).collect();
    let diag = a.real_diag();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// [`hermitian_eig`] with the default hermiticity tolerance.
pub fn eigh(m: &CMatrix) -> Result<EigenDecomposition, LinalgError> {
    hermitian_eig(m, DEFAULT_HERMITICITY_TOL)
}

fn offdiag_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Zero out `a[(p,q)]` with a unitary rotation in the (p,q) plane, applied
/// two-sided to `a` and accumulated on the right of `v`.
fn rotate_pair(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, skip: f64) {
    let apq = a[(p, q)];
    let b = apq.norm();
    if b <= skip {
        return;
    }
    let phase = apq / b; // e^{i φ}; a[(p,q)] = |a_pq| e^{i φ}
    let alpha = a[(p, p)].re;
    let gamma = a[(q, q)].re;
    let tau = (gamma - alpha) / (2.0 * b);
    // Smaller-magnitude root of t² − 2τt − 1 = 0; keeps rotation angles ≤ π/4.
    let t = if tau >= 0.0 {
        -1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let n = a.rows();

    // Column update: A <- A·U with U_pp = c, U_pq = -s·e^{iφ}, U_qp = s·e^{-iφ}, U_qq = c.
    let s_phase_conj = s * phase.conj();
    let s_phase = s * phase;
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * c + aiq * s_phase_conj;
        a[(i, q)] = aiq * c - aip * s_phase;
    }
    // Row update: A <- U†·A.
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = apj * c + aqj * s_phase;
        a[(q, j)] = aqj * c - apj * s_phase_conj;
    }
    // Clean the rotated pair exactly; the diagonal stays real.
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * c + viq * s_phase_conj;
        v[(i, q)] = viq * c - vip * s_phase;
    }
}

/// `V f(diag λ) V†` for a Hermitian `m` and a real scalar map `f`.
///
/// Errors with [`LinalgError::DomainError`] when `f` returns a non-finite
/// value at any eigenvalue.
pub fn matrix_function(
    m: &CMatrix,
    f: impl Fn(f64) -> f64,
) -> Result<CMatrix, LinalgError> {
    let eig = eigh(m)?;
    let mut diag = Vec::with_capacity(eig.dim());
    for &l in &eig.eigenvalues {
        let y = f(l);
        if !y.is_finite() {
            return Err(LinalgError::DomainError { eigenvalue: l });
        }
        diag.push(Complex64::new(y, 0.0));
    }
    Ok(eig.conjugate_diag(&diag))
}

/// `U ρ U†` with `U = e^{-iht}` built from the eigendecomposition of `h`.
pub fn unitary_evolve(h: &CMatrix, t: f64, state: &CMatrix) -> Result<CMatrix, LinalgError> {
    if !state.is_square() || state.rows() != h.rows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "state is {}x{}, Hamiltonian is {}x{}",
            state.rows(),
            state.cols(),
            h.rows(),
            h.cols()
        )));
    }
    let eig = eigh(h)?;
    let u = eig.propagator(t);
    Ok(u.matmul(state).matmul(&u.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // Small deterministic generator so the tests do not depend on the crate's
    // public RNG module.
    struct TestRng(u64);
    impl TestRng {
        fn next_f64(&mut self) -> f64 {
            self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
            let mut z = self.0;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
            z = z ^ (z >> 31);
            (z >> 11) as f64 / (1u64 << 53) as f64
        }
        fn hermitian(&mut self, n: usize) -> CMatrix {
            let g = CMatrix::from_fn(n, n, |_, _| {
                c(self.next_f64() - 0.5, self.next_f64() - 0.5)
            });
            g.add(&g.adjoint()).scale(c(0.5, 0.0))
        }
    }

    #[test]
    fn eig_identity() {
        let eig = eigh(&CMatrix::identity(2)).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
        let vtv = eig.eigenvectors.adjoint().matmul(&eig.eigenvectors);
        assert!(vtv.sub(&CMatrix::identity(2)).max_abs() < 1e-10);
    }

    #[test]
    fn eig_pauli_x() {
        let m = CMatrix::from_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let eig = eigh(&m).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-12);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eig_reconstruction_random() {
        let mut rng = TestRng(42);
        for _ in 0..20 {
            let m = rng.hermitian(6);
            let eig = eigh(&m).unwrap();
            let sym = m.add(&m.adjoint()).scale(c(0.5, 0.0));
            let rel = eig.reconstruct().sub(&sym).frobenius_norm() / sym.frobenius_norm();
            assert!(rel < 1e-10, "reconstruction residual {rel}");
            let vtv = eig.eigenvectors.adjoint().matmul(&eig.eigenvectors);
            assert!(vtv.sub(&CMatrix::identity(6)).max_abs() < 1e-10);
            for w in eig.eigenvalues.windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn eig_rejects_non_square_and_non_hermitian() {
        let rect = CMatrix::zeros(2, 3);
        assert!(matches!(
            eigh(&rect),
            Err(LinalgError::NonSquare { .. })
        ));
        let m = CMatrix::from_slice(2, 2, &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]);
        assert!(matches!(
            eigh(&m),
            Err(LinalgError::NotHermitian { .. })
        ));
    }

    #[test]
    fn eig_zero_matrix() {
        let eig = eigh(&CMatrix::zeros(3, 3)).unwrap();
        assert_eq!(eig.eigenvalues, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn matrix_function_identity_map() {
        let mut rng = TestRng(7);
        let m = rng.hermitian(4);
        let out = matrix_function(&m, |x| x).unwrap();
        assert!(out.sub(&m).max_abs() < 1e-12);
    }

    #[test]
    fn matrix_function_exp_of_zero() {
        let out = matrix_function(&CMatrix::zeros(3, 3), f64::exp).unwrap();
        assert!(out.sub(&CMatrix::identity(3)).max_abs() < 1e-14);
    }

    #[test]
    fn matrix_function_log_diagonal() {
        let m = CMatrix::from_real_diag(&[0.25, 0.75]);
        let out = matrix_function(&m, f64::ln).unwrap();
        assert!((out[(0, 0)].re - 0.25f64.ln()).abs() < 1e-14);
        assert!((out[(1, 1)].re - 0.75f64.ln()).abs() < 1e-14);
        assert!(out[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn matrix_function_domain_error() {
        let m = CMatrix::from_real_diag(&[-0.5, 0.5]);
        assert!(matches!(
            matrix_function(&m, f64::ln),
            Err(LinalgError::DomainError { .. })
        ));
    }

    #[test]
    fn evolve_t_zero_is_identity() {
        let mut rng = TestRng(3);
        let h = rng.hermitian(4);
        let state = rng.hermitian(4);
        let out = unitary_evolve(&h, 0.0, &state).unwrap();
        assert!(out.sub(&state).max_abs() < 1e-12);
    }

    #[test]
    fn evolve_commuting_diagonal() {
        let h = CMatrix::from_real_diag(&[0.3, 1.7, 2.2]);
        let state = CMatrix::from_real_diag(&[0.5, 0.3, 0.2]);
        let out = unitary_evolve(&h, 2.37, &state).unwrap();
        assert!(out.sub(&state).max_abs() < 1e-12);
    }

    #[test]
    fn evolve_rabi_block() {
        // Resonant {|e,0>, |g,1>} block: H = g σ_x up to a constant, so the
        // excited population follows cos²(gt).
        let g = 0.7;
        let h = CMatrix::from_slice(2, 2, &[c(1., 0.), c(g, 0.), c(g, 0.), c(1., 0.)]);
        let state = CMatrix::from_real_diag(&[1.0, 0.0]);
        for &t in &[0.1, 0.5, std::f64::consts::FRAC_PI_2 / g, 2.0] {
            let out = unitary_evolve(&h, t, &state).unwrap();
            let expect = (g * t).cos().powi(2);
            assert!((out[(0, 0)].re - expect).abs() < 1e-12, "t = {t}");
        }
        let t = std::f64::consts::FRAC_PI_2 / g;
        let out = unitary_evolve(&h, t, &state).unwrap();
        assert!(out[(0, 0)].re.abs() < 1e-12);
        assert!((out[(1, 1)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn evolve_preserves_trace_and_spectrum() {
        let mut rng = TestRng(11);
        let h = rng.hermitian(5);
        let state = rng.hermitian(5);
        let out = unitary_evolve(&h, 1.3, &state).unwrap();
        assert!((out.trace() - state.trace()).norm() < 1e-12);
        let before = eigh(&state).unwrap().eigenvalues;
        let after = eigh(&out).unwrap().eigenvalues;
        for (x, y) in before.iter().zip(&after) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn kron_with_scalar_identity() {
        let mut rng = TestRng(5);
        let a = rng.hermitian(3);
        let out = a.kron(&CMatrix::identity(1));
        assert!(out.sub(&a).max_abs() == 0.0);
    }

    #[test]
    fn kron_block_structure_and_trace() {
        let mut rng = TestRng(9);
        let a = rng.hermitian(2);
        let b = rng.hermitian(3);
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (6, 6));
        for ia in 0..2 {
            for ja in 0..2 {
                for ib in 0..3 {
                    for jb in 0..3 {
                        let lhs = k[(ia * 3 + ib, ja * 3 + jb)];
                        let rhs = a[(ia, ja)] * b[(ib, jb)];
                        assert!((lhs - rhs).norm() < 1e-15);
                    }
                }
            }
        }
        assert!((k.trace() - a.trace() * b.trace()).norm() < 1e-12);
    }

    /// Independent quadruple-loop partial trace used as an oracle.
    fn partial_trace_oracle(m: &CMatrix, d_a: usize, d_b: usize, keep: Subsystem) -> CMatrix {
        match keep {
            Subsystem::A => {
                let mut out = CMatrix::zeros(d_a, d_a);
                for i in 0..d_a {
                    for j in 0..d_a {
                        for k in 0..d_b {
                            for l in 0..d_b {
                                if k == l {
                                    let z = m[(i * d_b + k, j * d_b + l)];
                                    out[(i, j)] += z;
                                }
                            }
                        }
                    }
                }
                out
            }
            Subsystem::B => {
                let mut out = CMatrix::zeros(d_b, d_b);
                for k in 0..d_b {
                    for l in 0..d_b {
                        for i in 0..d_a {
                            for j in 0..d_a {
                                if i == j {
                                    out[(k, l)] += m[(i * d_b + k, j * d_b + l)];
                                }
                            }
                        }
                    }
                }
                out
            }
        }
    }

    #[test]
    fn partial_trace_of_product() {
        let mut rng = TestRng(13);
        let a = rng.hermitian(2);
        let b = rng.hermitian(3);
        let k = a.kron(&b);
        let ra = k.partial_trace((2, 3), Subsystem::A).unwrap();
        let rb = k.partial_trace((2, 3), Subsystem::B).unwrap();
        assert!(ra.sub(&a.scale(b.trace())).max_abs() < 1e-12);
        assert!(rb.sub(&b.scale(a.trace())).max_abs() < 1e-12);
    }

    #[test]
    fn partial_trace_bell_state() {
        // |Φ+><Φ+| on 2⊗2 reduces to I/2 on either side.
        let mut bell = CMatrix::zeros(4, 4);
        for &i in &[0usize, 3] {
            for &j in &[0usize, 3] {
                bell[(i, j)] = c(0.5, 0.0);
            }
        }
        let ra = bell.partial_trace((2, 2), Subsystem::A).unwrap();
        assert!(ra.sub(&CMatrix::identity(2).scale(c(0.5, 0.0))).max_abs() < 1e-15);
    }

    #[test]
    fn partial_trace_matches_oracle_and_preserves_trace() {
        let mut rng = TestRng(17);
        for _ in 0..50 {
            let m = rng.hermitian(6);
            for keep in [Subsystem::A, Subsystem::B] {
                let fast = m.partial_trace((2, 3), keep).unwrap();
                let slow = partial_trace_oracle(&m, 2, 3, keep);
                assert!(fast.sub(&slow).max_abs() < 1e-13);
                assert!((fast.trace() - m.trace()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn partial_trace_dimension_error() {
        let m = CMatrix::zeros(5, 5);
        assert!(m.partial_trace((2, 3), Subsystem::A).is_err());
    }
}
