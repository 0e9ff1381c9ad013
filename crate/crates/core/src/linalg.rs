//! Minimal dense complex linear algebra for the 2x2 and 4x4
//! Hermitian/unitary matrices that underpin all channel arithmetic.
//!
//! Everything here is a pure function on immutable values; dimensions are
//! always 2 (qubit operators) or 4 (Choi states and two-qubit projectors).

use num_complex::Complex64;
use thiserror::Error;

/// Tolerance for structural invariants (Hermiticity, unit trace) of values
/// produced by this crate.
pub const STRUCTURAL_TOL: f64 = 1e-10;
/// Tolerance used when validating caller-supplied matrices.
pub const INPUT_TOL: f64 = 1e-8;
/// Eigenvalues above `-PSD_TOL` count as nonnegative.
pub const PSD_TOL: f64 = 1e-10;
/// Pure states must be normalized to within this tolerance.
pub const STATE_NORM_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("unsupported dimension {0} (only 2 and 4)")]
    UnsupportedDimension(usize),
    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("density matrix has trace {0} (expected 1)")]
    NotUnitTrace(f64),
    #[error("density matrix has negative eigenvalue {0:.3e}")]
    NotPositive(f64),
    #[error("state vector has norm {0} (expected 1)")]
    NotNormalized(f64),
    #[error("entry length {0} does not match dim {1}")]
    BadEntryCount(usize, usize),
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Dense square complex matrix of dimension 2 or 4, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim != 2 && dim != 4 {
            return Err(LinalgError::UnsupportedDimension(dim));
        }
        if entries.len() != dim * dim {
            return Err(LinalgError::BadEntryCount(entries.len(), dim));
        }
        Ok(Self { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// 2x2 matrix from rows, in reading order.
    pub fn from_rows2(rows: [[Complex64; 2]; 2]) -> Self {
        Self {
            dim: 2,
            entries: vec![rows[0][0], rows[0][1], rows[1][0], rows[1][1]],
        }
    }

    /// 2x2 matrix with real entries.
    pub fn from_real2(rows: [[f64; 2]; 2]) -> Self {
        Self::from_rows2([
            [Complex64::new(rows[0][0], 0.0), Complex64::new(rows[0][1], 0.0)],
            [Complex64::new(rows[1][0], 0.0), Complex64::new(rows[1][1], 0.0)],
        ])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.dim + j] = v;
    }

    /// Standard matrix product `self * other`.
    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.dim != other.dim {
            return Err(LinalgError::DimensionMismatch(self.dim, other.dim));
        }
        let d = self.dim;
        let mut out = ComplexMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for l in 0..d {
                    acc += self.get(i, l) * other.get(l, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        let d = self.dim;
        let mut out = ComplexMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.set(i, j, self.get(j, i).conj());
            }
        }
        out
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.dim != other.dim {
            return Err(LinalgError::DimensionMismatch(self.dim, other.dim));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(ComplexMatrix {
            dim: self.dim,
            entries,
        })
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.dim != other.dim {
            return Err(LinalgError::DimensionMismatch(self.dim, other.dim));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(ComplexMatrix {
            dim: self.dim,
            entries,
        })
    }

    pub fn scale(&self, c: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Kronecker product; only 2x2 (x) 2x2 is needed, yielding 4x4.
    pub fn kron(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let d = self.dim * other.dim;
        let mut out = ComplexMatrix {
            dim: d,
            entries: vec![Complex64::new(0.0, 0.0); d * d],
        };
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..other.dim {
                    for l in 0..other.dim {
                        out.set(
                            i * other.dim + k,
                            j * other.dim + l,
                            self.get(i, j) * other.get(k, l),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        for i in 0..self.dim {
            for j in i..self.dim {
                if (self.get(i, j) - self.get(j, i).conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        match self.adjoint().matmul(self) {
            Ok(p) => p.max_abs_diff(&ComplexMatrix::identity(self.dim)) <= tol,
            Err(_) => false,
        }
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol.max(INPUT_TOL)) {
            return false;
        }
        match hermitian_eigenvalues(self) {
            Ok(eigs) => eigs.iter().all(|&e| e >= -tol),
            Err(_) => false,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|e| e.re.is_finite() && e.im.is_finite())
    }

    /// Sum of absolute eigenvalues (Schatten 1-norm of a Hermitian matrix).
    pub fn trace_norm(&self) -> Result<f64> {
        Ok(hermitian_eigenvalues(self)?.iter().map(|e| e.abs()).sum())
    }

    /// Trace over the second tensor factor of a 4x4 operator on
    /// `system (x) ancilla`, returning the 2x2 system marginal.
    pub fn partial_trace_second(&self) -> Result<ComplexMatrix> {
        if self.dim != 4 {
            return Err(LinalgError::UnsupportedDimension(self.dim));
        }
        let mut out = ComplexMatrix::zeros(2);
        for s in 0..2 {
            for t in 0..2 {
                let v = self.get(2 * s, 2 * t) + self.get(2 * s + 1, 2 * t + 1);
                out.set(s, t, v);
            }
        }
        Ok(out)
    }
}

/// Pauli matrices and common gates, in the canonical basis.
pub mod gates {
    use super::ComplexMatrix;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::from_real2([[1.0, 0.0], [0.0, 1.0]])
    }

    pub fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real2([[0.0, 1.0], [1.0, 0.0]])
    }

    pub fn pauli_y() -> ComplexMatrix {
        ComplexMatrix::from_rows2([[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]])
    }

    pub fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::from_real2([[1.0, 0.0], [0.0, -1.0]])
    }

    pub fn hadamard() -> ComplexMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::from_real2([[s, s], [s, -s]])
    }

    pub fn phase_s() -> ComplexMatrix {
        ComplexMatrix::from_rows2([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]])
    }

    /// The four Paulis in the fixed order I, X, Y, Z.
    pub fn paulis() -> [ComplexMatrix; 4] {
        [identity(), pauli_x(), pauli_y(), pauli_z()]
    }
}

/// Eigenvalues of a Hermitian 2x2 or 4x4 matrix, sorted ascending.
///
/// Dimension 2 uses the closed-form quadratic; dimension 4 runs cyclic
/// Jacobi sweeps until the off-diagonal mass is below 1e-14, which puts the
/// eigenpair residual well under 1e-10.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    if !a.is_hermitian(INPUT_TOL) {
        let mut dev: f64 = 0.0;
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                dev = dev.max((a.get(i, j) - a.get(j, i).conj()).norm());
            }
        }
        return Err(LinalgError::NotHermitian(dev));
    }
    match a.dim() {
        2 => {
            let p = a.get(0, 0).re;
            let q = a.get(1, 1).re;
            let b = a.get(0, 1).norm();
            let mid = 0.5 * (p + q);
            let rad = (0.25 * (p - q) * (p - q) + b * b).sqrt();
            Ok(vec![mid - rad, mid + rad])
        }
        4 => {
            let mut eigs = jacobi_hermitian(a).0;
            eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
            Ok(eigs)
        }
        d => Err(LinalgError::UnsupportedDimension(d)),
    }
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvector `k` stored in
/// column `k` of the returned matrix, unsorted.
pub fn jacobi_hermitian(a: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let d = a.dim();
    let mut m = a.clone();
    let mut v = ComplexMatrix::identity(d);

    for _sweep in 0..100 {
        let off: f64 = (0..d)
            .flat_map(|p| (0..d).map(move |q| (p, q)))
            .filter(|&(p, q)| p != q)
            .map(|(p, q)| m.get(p, q).norm_sqr())
            .sum();
        if off.sqrt() < 1e-14 {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = m.get(p, q);
                if apq.norm() < 1e-300 {
                    continue;
                }
                let app = m.get(p, p).re;
                let aqq = m.get(q, q).re;
                let phase = apq / apq.norm();
                let tau = (aqq - app) / (2.0 * apq.norm());
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cth = 1.0 / (1.0 + t * t).sqrt();
                let sth = t * cth;

                // Plane rotation J: identity except
                //   J[p][p]=c, J[q][q]=c, J[p][q]=s*phase, J[q][p]=-s*conj(phase).
                let mut j = ComplexMatrix::identity(d);
                j.set(p, p, Complex64::new(cth, 0.0));
                j.set(q, q, Complex64::new(cth, 0.0));
                j.set(p, q, phase * sth);
                j.set(q, p, -(phase.conj()) * sth);

                m = j.adjoint().matmul(&m).unwrap().matmul(&j).unwrap();
                v = v.matmul(&j).unwrap();
            }
        }
    }
    ((0..d).map(|i| m.get(i, i).re).collect(), v)
}

/// Normalized pure state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: Vec<Complex64>,
}

impl PureState {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > STATE_NORM_TOL {
            return Err(LinalgError::NotNormalized(norm));
        }
        Ok(Self { amps })
    }

    /// Normalizes the given amplitudes; errors on the zero vector.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(LinalgError::NotNormalized(norm));
        }
        Ok(Self {
            amps: amps.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// The rank-1 projector |psi><psi|.
    pub fn projector(&self) -> ComplexMatrix {
        let d = self.amps.len();
        let mut m = ComplexMatrix {
            dim: d,
            entries: vec![Complex64::new(0.0, 0.0); d * d],
        };
        for i in 0..d {
            for j in 0..d {
                m.set(i, j, self.amps[i] * self.amps[j].conj());
            }
        }
        m
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix: the state rho.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity and unit trace at 1e-10 and positivity at
    /// eigenvalue >= -1e-10.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_hermitian(STRUCTURAL_TOL) {
            let mut dev: f64 = 0.0;
            for i in 0..mat.dim() {
                for j in 0..mat.dim() {
                    dev = dev.max((mat.get(i, j) - mat.get(j, i).conj()).norm());
                }
            }
            return Err(LinalgError::NotHermitian(dev));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > STRUCTURAL_TOL || tr.im.abs() > STRUCTURAL_TOL {
            return Err(LinalgError::NotUnitTrace(tr.re));
        }
        let eigs = hermitian_eigenvalues(&mat)?;
        if let Some(&min) = eigs.first() {
            if min < -PSD_TOL {
                return Err(LinalgError::NotPositive(min));
            }
        }
        Ok(Self { mat })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        // A projector of a normalized state always satisfies the invariants.
        Self {
            mat: psi.projector(),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0)),
        }
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// Tr[rho * op], real part (the operators used here are Hermitian).
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<f64> {
        Ok(self.mat.matmul(op)?.trace().re)
    }
}

/// Tr[a * b] for Hermitian a, b: the Hilbert-Schmidt overlap, real part.
pub fn overlap(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    Ok(a.matmul(b)?.trace().re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use gates::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Independent scalar-loop product used as the oracle for matmul.
    fn matmul_oracle(a: &ComplexMatrix, b: &ComplexMatrix) -> Vec<Complex64> {
        let d = a.dim();
        let mut out = vec![c(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let (ar, ai) = (a.get(i, k).re, a.get(i, k).im);
                    let (br, bi) = (b.get(k, j).re, b.get(k, j).im);
                    out[i * d + j] += c(ar * br - ai * bi, ar * bi + ai * br);
                }
            }
        }
        out
    }

    #[test]
    fn matmul_identity_cases() {
        let i = identity();
        assert_eq!(i.matmul(&i).unwrap(), i);
        let x = pauli_x();
        assert_eq!(x.matmul(&x).unwrap(), i);
    }

    #[test]
    fn matmul_h_times_s_matches_scalar_oracle() {
        let h = hadamard();
        let s = phase_s();
        let hs = h.matmul(&s).unwrap();
        let expect = matmul_oracle(&h, &s);
        for (got, want) in hs.entries().iter().zip(&expect) {
            assert!((got - want).norm() < 1e-15);
        }
        // Frozen values: (1/sqrt2) [[1, i], [1, -i]].
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((hs.get(0, 0) - c(r, 0.0)).norm() < 1e-15);
        assert!((hs.get(0, 1) - c(0.0, r)).norm() < 1e-15);
        assert!((hs.get(1, 0) - c(r, 0.0)).norm() < 1e-15);
        assert!((hs.get(1, 1) - c(0.0, -r)).norm() < 1e-15);
    }

    #[test]
    fn matmul_dimension_mismatch() {
        let a = identity();
        let b = ComplexMatrix::identity(4);
        assert!(matches!(
            a.matmul(&b),
            Err(LinalgError::DimensionMismatch(2, 4))
        ));
    }

    #[test]
    fn eigenvalues_dim2() {
        assert_eq!(hermitian_eigenvalues(&identity()).unwrap(), vec![1.0, 1.0]);
        assert_eq!(hermitian_eigenvalues(&pauli_z()).unwrap(), vec![-1.0, 1.0]);
        // (X+Z)/sqrt2 has characteristic polynomial l^2 - 1: eigenvalues -1, 1.
        let m = pauli_x()
            .add(&pauli_z())
            .unwrap()
            .scale(c(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        let eigs = hermitian_eigenvalues(&m).unwrap();
        assert!((eigs[0] + 1.0).abs() < 1e-12);
        assert!((eigs[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows2([[c(0.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]]);
        assert!(matches!(
            hermitian_eigenvalues(&m),
            Err(LinalgError::NotHermitian(_))
        ));
    }

    #[test]
    fn jacobi_dim4_residuals() {
        // Hermitian test matrix with distinct eigenvalues.
        let mut a = ComplexMatrix::zeros(4);
        let vals = [
            [c(2.0, 0.0), c(0.5, 0.3), c(0.0, -0.2), c(0.1, 0.0)],
            [c(0.5, -0.3), c(-1.0, 0.0), c(0.7, 0.1), c(0.0, 0.4)],
            [c(0.0, 0.2), c(0.7, -0.1), c(0.5, 0.0), c(-0.3, 0.0)],
            [c(0.1, 0.0), c(0.0, -0.4), c(-0.3, 0.0), c(1.5, 0.0)],
        ];
        for i in 0..4 {
            for j in 0..4 {
                a.set(i, j, vals[i][j]);
            }
        }
        let (eigs, vecs) = jacobi_hermitian(&a);
        // Residual ||A v - lambda v|| <= 1e-10 for every pair.
        for k in 0..4 {
            let mut r: f64 = 0.0;
            for i in 0..4 {
                let mut av = c(0.0, 0.0);
                for j in 0..4 {
                    av += a.get(i, j) * vecs.get(j, k);
                }
                r += (av - vecs.get(i, k) * eigs[k]).norm_sqr();
            }
            assert!(r.sqrt() <= 1e-10, "residual {} for eigenpair {}", r.sqrt(), k);
        }
        // Trace is preserved.
        let sum: f64 = eigs.iter().sum();
        assert!((sum - 3.0).abs() < 1e-12);
    }

    #[test]
    fn trace_norm_cases() {
        assert_eq!(ComplexMatrix::zeros(2).trace_norm().unwrap(), 0.0);
        assert_eq!(pauli_z().trace_norm().unwrap(), 2.0);
        // |0><0| - I/2 has eigenvalues +-1/2.
        let zero = PureState::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let diff = zero
            .projector()
            .sub(&identity().scale(c(0.5, 0.0)))
            .unwrap();
        assert!((diff.trace_norm().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_cases() {
        let i4 = ComplexMatrix::identity(4).scale(c(0.25, 0.0));
        let half = identity().scale(c(0.5, 0.0));
        assert!(i4.partial_trace_second().unwrap().max_abs_diff(&half) < 1e-15);

        // Maximally entangled |Phi+> marginal is I/2.
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let phi = PureState::new(vec![c(r, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(r, 0.0)]).unwrap();
        assert!(
            phi.projector()
                .partial_trace_second()
                .unwrap()
                .max_abs_diff(&half)
                < 1e-15
        );

        // |01><01| -> |0><0| under the system (x) ancilla convention.
        let s01 = PureState::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let zero = PureState::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(
            s01.projector()
                .partial_trace_second()
                .unwrap()
                .max_abs_diff(&zero.projector())
                < 1e-15
        );

        assert!(identity().partial_trace_second().is_err());
    }

    #[test]
    fn density_matrix_invariants() {
        let ok = DensityMatrix::maximally_mixed(2);
        assert!((ok.mat().trace().re - 1.0).abs() < 1e-15);

        // Trace 2 rejected.
        assert!(matches!(
            DensityMatrix::new(identity()),
            Err(LinalgError::NotUnitTrace(_))
        ));
        // Negative eigenvalue rejected.
        let neg = ComplexMatrix::from_real2([[1.5, 0.0], [0.0, -0.5]]);
        assert!(matches!(
            DensityMatrix::new(neg),
            Err(LinalgError::NotPositive(_))
        ));
        // Non-Hermitian rejected.
        let nh = ComplexMatrix::from_rows2([[c(0.5, 0.0), c(0.3, 0.0)], [c(0.0, 0.0), c(0.5, 0.0)]]);
        assert!(matches!(
            DensityMatrix::new(nh),
            Err(LinalgError::NotHermitian(_))
        ));
    }

    #[test]
    fn pure_state_normalization() {
        assert!(PureState::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
        let s = PureState::normalized(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let n: f64 = s.amps().iter().map(|a| a.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-15);
    }

    #[test]
    fn predicates() {
        assert!(identity().is_hermitian(0.0));
        assert!(hadamard().is_unitary(1e-12));
        assert!(!pauli_x().add(&pauli_x()).unwrap().is_unitary(1e-12));
        assert!(DensityMatrix::maximally_mixed(2).mat().is_psd(1e-12));
        assert!(!pauli_z().is_psd(1e-12));
    }
}
