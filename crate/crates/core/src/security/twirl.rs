use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{GhzDiagonal, StabilizerElement};
use crate::quantum::{make_ghz, DensityMatrix, GhzLabel};
use crate::{Error, Result};

fn check_channel_state(rho: &DensityMatrix) -> Result<()> {
    if rho.num_qubits() != 3 {
        return Err(Error::WrongQubitCount {
            expected: 3,
            actual: rho.num_qubits(),
        });
    }
    rho.validate()
}

/// Unitary whose column `x` is the GHZ state with label index `x`.
pub fn ghz_basis() -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(8, 8);
    for g in GhzLabel::ALL {
        let col = g.label_bits().index();
        for (row, a) in make_ghz(g).amplitudes().iter().enumerate() {
            m[(row, col)] = *a;
        }
    }
    m
}

/// `ρ` expressed in the GHZ basis, rows and columns ordered by label index.
pub fn in_ghz_basis(rho: &DensityMatrix) -> Result<DMatrix<Complex64>> {
    check_channel_state(rho)?;
    let g = ghz_basis();
    Ok(g.adjoint() * rho.matrix() * g)
}

/// `⟨GHZ_x|ρ|GHZ_x⟩` for every label.
pub fn ghz_diagonal(rho: &DensityMatrix) -> Result<GhzDiagonal> {
    let m = in_ghz_basis(rho)?;
    let mut probs = [0.0; 8];
    for (x, p) in probs.iter_mut().enumerate() {
        *p = m[(x, x)].re;
    }
    GhzDiagonal::new(probs)
}

/// Uniform mixture of `ρ` conjugated by each stabilizer group element.
pub fn twirl(rho: &DensityMatrix) -> Result<(DensityMatrix, GhzDiagonal)> {
    check_channel_state(rho)?;
    let mut sum = rho.matrix().clone();
    for el in StabilizerElement::all() {
        let u = el.matrix();
        sum += &u * rho.matrix() * u.adjoint();
    }
    let out = DensityMatrix::new(sum.map(|x| x / 8.0))?;
    let diag = ghz_diagonal(&out)?;
    Ok((out, diag))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::EPS;

    #[test]
    fn pure_ghz_is_fixed() {
        let rho = DensityMatrix::from_pure(&make_ghz(GhzLabel::Pp));
        let (out, d) = twirl(&rho).unwrap();
        assert!(out.max_abs_diff(&rho) < EPS);
        let point = GhzDiagonal::point(GhzLabel::Pp);
        for (a, b) in d.probs().iter().zip(point.probs()) {
            assert!((a - b).abs() < EPS);
        }
    }

    #[test]
    fn computational_basis_mixture() {
        // diag(1/8) is already maximally mixed, so every label gets 1/8
        let rho = DensityMatrix::maximally_mixed(3).unwrap();
        let (out, d) = twirl(&rho).unwrap();
        assert!(out.max_abs_diff(&rho) < EPS);
        assert!(d.probs().iter().all(|p| (p - 0.125).abs() < EPS));
    }

    #[test]
    fn rejects_wrong_size() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(twirl(&rho).is_err());
    }
}
