use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{StateVector, MAX_QUBITS};
use crate::{Error, Result, EPS};

/// Most negative eigenvalue accepted as numerical noise.
pub const EIGEN_TOL: f64 = 1e-10;

/// Density matrix on a small number of qubits (three for channel states).
///
/// Uses the same qubit ordering as [`StateVector`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates shape, hermiticity, unit trace and positivity.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let dm = Self::unchecked(matrix)?;
        dm.validate()?;
        Ok(dm)
    }

    pub(crate) fn unchecked(matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = matrix.nrows();
        if dim != matrix.ncols() {
            return Err(Error::InvalidDensityMatrix(format!(
                "not square: {}x{}",
                dim,
                matrix.ncols()
            )));
        }
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::BadLength(dim));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        if num_qubits > MAX_QUBITS {
            return Err(Error::QubitCount(num_qubits));
        }
        Ok(Self { num_qubits, matrix })
    }

    /// Builds from row-major entries.
    pub fn from_entries(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::InvalidDensityMatrix(format!(
                "{} entries for dimension {dim}",
                entries.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.matrix;
        let dim = m.nrows();
        for i in 0..dim {
            for j in i..dim {
                if (m[(i, j)] - m[(j, i)].conj()).norm() > EPS {
                    return Err(Error::InvalidDensityMatrix(format!(
                        "not Hermitian at ({i}, {j})"
                    )));
                }
            }
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > EPS || tr.im.abs() > EPS {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr}")));
        }
        let min = self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -EIGEN_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(())
    }

    /// `|ψ⟩⟨ψ|` for a state of any supported size.
    pub fn from_pure(state: &StateVector) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        Self {
            num_qubits: state.num_qubits(),
            matrix: &v * v.adjoint(),
        }
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::QubitCount(num_qubits));
        }
        let dim = 1 << num_qubits;
        Ok(Self {
            num_qubits,
            matrix: DMatrix::identity(dim, dim).map(|x: Complex64| x / dim as f64),
        })
    }

    /// Convex combination `Σ w_k ρ_k`. Weights must be non-negative and sum to 1.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidDensityMatrix("empty mixture".into()))?;
        let dim = first.1.dim();
        let mut acc = DMatrix::zeros(dim, dim);
        let mut total = 0.0;
        for (w, rho) in parts {
            if *w < 0.0 || rho.dim() != dim {
                return Err(Error::InvalidDensityMatrix("bad mixture component".into()));
            }
            total += w;
            acc += rho.matrix.map(|x| x * *w);
        }
        if (total - 1.0).abs() > EPS {
            return Err(Error::InvalidDensityMatrix(format!(
                "weights sum to {total}"
            )));
        }
        Self::new(acc)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.matrix + self.matrix.adjoint()).map(|x| x * 0.5);
        let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::WrongQubitCount {
                expected: self.num_qubits,
                actual: state.num_qubits(),
            });
        }
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        Ok((v.adjoint() * &self.matrix * &v)[(0, 0)].re)
    }

    /// `U ρ U†` for a full-dimension operator `U`.
    pub fn conjugate(&self, unitary: &DMatrix<Complex64>) -> Result<DensityMatrix> {
        if unitary.nrows() != self.dim() || unitary.ncols() != self.dim() {
            return Err(Error::InvalidDensityMatrix(format!(
                "operator shape {}x{} does not match dimension {}",
                unitary.nrows(),
                unitary.ncols(),
                self.dim()
            )));
        }
        Ok(DensityMatrix {
            num_qubits: self.num_qubits,
            matrix: unitary * &self.matrix * unitary.adjoint(),
        })
    }

    /// `ρ ⊗ σ`.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let num_qubits = self.num_qubits + other.num_qubits;
        if num_qubits > MAX_QUBITS {
            return Err(Error::QubitCount(num_qubits));
        }
        Ok(DensityMatrix {
            num_qubits,
            matrix: self.matrix.kronecker(&other.matrix),
        })
    }

    /// Traces out the highest-indexed qubit.
    pub fn trace_out_last(&self) -> Result<DensityMatrix> {
        if self.num_qubits < 2 {
            return Err(Error::QubitCount(self.num_qubits - 1));
        }
        let half = self.dim() / 2;
        let m = DMatrix::from_fn(half, half, |i, j| {
            self.matrix[(2 * i, 2 * j)] + self.matrix[(2 * i + 1, 2 * j + 1)]
        });
        Ok(DensityMatrix {
            num_qubits: self.num_qubits - 1,
            matrix: m,
        })
    }

    /// Largest entry-wise distance to another matrix.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// `|ψ⟩⟨ψ|` for a three-qubit channel state.
pub fn density_from_pure(state: &StateVector) -> Result<DensityMatrix> {
    if state.num_qubits() != 3 {
        return Err(Error::WrongQubitCount {
            expected: 3,
            actual: state.num_qubits(),
        });
    }
    Ok(DensityMatrix::from_pure(state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{make_bell, make_ghz, BellOutcome, GhzLabel};

    #[test]
    fn pure_ghz_projector_is_idempotent_rank_one() {
        let rho = density_from_pure(&make_ghz(GhzLabel::Pp)).unwrap();
        rho.validate().unwrap();
        let sq = rho.matrix() * rho.matrix();
        assert!(sq
            .iter()
            .zip(rho.matrix().iter())
            .all(|(a, b)| (a - b).norm() < EPS));
        let ev = rho.eigenvalues();
        assert!((ev[7] - 1.0).abs() < EPS);
        assert!(ev[..7].iter().all(|e| e.abs() < EPS));
    }

    #[test]
    fn ghz_diagonal_of_own_projector_is_point_mass() {
        for g in GhzLabel::ALL {
            let rho = density_from_pure(&make_ghz(g)).unwrap();
            for h in GhzLabel::ALL {
                let want = if g == h { 1.0 } else { 0.0 };
                assert!((rho.expectation(&make_ghz(h)).unwrap() - want).abs() < EPS);
            }
        }
    }

    #[test]
    fn wrong_qubit_count_rejected() {
        assert_eq!(
            density_from_pure(&make_bell(BellOutcome::PhiPlus)),
            Err(Error::WrongQubitCount {
                expected: 3,
                actual: 2
            })
        );
    }

    #[test]
    fn validation_catches_bad_matrices() {
        let mut m = DMatrix::<Complex64>::identity(8, 8);
        assert!(DensityMatrix::new(m.clone()).is_err()); // trace 8
        m = m.map(|x| x / 8.0);
        assert!(DensityMatrix::new(m.clone()).is_ok());
        m[(0, 1)] = Complex64::new(0.1, 0.0);
        assert!(DensityMatrix::new(m.clone()).is_err()); // not Hermitian
        let mut neg = DMatrix::<Complex64>::zeros(2, 2);
        neg[(0, 0)] = Complex64::new(1.5, 0.0);
        neg[(1, 1)] = Complex64::new(-0.5, 0.0);
        assert!(DensityMatrix::new(neg).is_err());
    }

    #[test]
    fn partial_trace_of_product() {
        let a = density_from_pure(&make_ghz(GhzLabel::Qm)).unwrap();
        let b = DensityMatrix::maximally_mixed(1).unwrap();
        let back = a.tensor(&b).unwrap().trace_out_last().unwrap();
        assert!(back.max_abs_diff(&a) < EPS);
    }
}
