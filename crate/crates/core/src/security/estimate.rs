use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{LocalPauli, StabilizerElement, StabilizerRates};
use crate::quantum::{sample_index, DensityMatrix};
use crate::{Error, Result};

/// Source of single-copy stabilizer measurements.
pub trait StabilizerSampler {
    /// Measures `element` on a fresh copy and returns its eigenvalue, `+1` or `-1`.
    fn sample<R: Rng + ?Sized>(&self, element: StabilizerElement, rng: &mut R) -> i8;
}

/// Rotation taking the eigenbasis of `p` to the computational basis.
fn basis_change(p: LocalPauli) -> DMatrix<Complex64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64, im: f64| Complex64::new(re, im);
    match p {
        LocalPauli::I | LocalPauli::Z => DMatrix::identity(2, 2),
        LocalPauli::X => {
            DMatrix::from_row_slice(2, 2, &[c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)])
        }
        // H S†
        LocalPauli::Y => {
            DMatrix::from_row_slice(2, 2, &[c(h, 0.0), c(0.0, -h), c(h, 0.0), c(0.0, h)])
        }
    }
}

/// Simulates the parties measuring each qubit of a copy of `ρ` in the local
/// X, Y or Z basis and multiplying the outcomes.
#[derive(Debug, Clone)]
pub struct LocalPauliSampler {
    outcome_probs: [[f64; 8]; 7],
}

impl LocalPauliSampler {
    pub fn new(rho: &DensityMatrix) -> Result<Self> {
        if rho.num_qubits() != 3 {
            return Err(Error::WrongQubitCount {
                expected: 3,
                actual: rho.num_qubits(),
            });
        }
        let mut outcome_probs = [[0.0; 8]; 7];
        for el in StabilizerElement::all() {
            let ([p0, p1, p2], _) = el.paulis();
            let v = basis_change(p0)
                .kronecker(&basis_change(p1))
                .kronecker(&basis_change(p2));
            let rotated = &v * rho.matrix() * v.adjoint();
            for (x, p) in outcome_probs[el.slot()].iter_mut().enumerate() {
                *p = rotated[(x, x)].re.max(0.0);
            }
        }
        Ok(Self { outcome_probs })
    }

    /// Outcome distribution over the 8 local bit strings for `element`.
    pub fn outcome_probs(&self, element: StabilizerElement) -> &[f64; 8] {
        &self.outcome_probs[element.slot()]
    }
}

/// Product of the local outcomes on the qubits `element` acts on, times its sign.
pub fn local_parity(element: StabilizerElement, outcome: usize) -> i8 {
    let (paulis, sign) = element.paulis();
    let flips = paulis
        .iter()
        .enumerate()
        .filter(|(q, p)| **p != LocalPauli::I && (outcome >> (2 - q)) & 1 == 1)
        .count();
    if flips % 2 == 1 {
        -sign
    } else {
        sign
    }
}

impl StabilizerSampler for LocalPauliSampler {
    fn sample<R: Rng + ?Sized>(&self, element: StabilizerElement, rng: &mut R) -> i8 {
        let outcome = sample_index(&self.outcome_probs[element.slot()], rng);
        local_parity(element, outcome)
    }
}

/// Empirical error rates with binomial standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub rates: StabilizerRates,
    pub std_errors: [f64; 7],
    pub shots: u64,
}

impl RateEstimate {
    /// Elements whose rate is positive and more than `z` standard errors above 0.
    pub fn detected(&self, z: f64) -> Vec<StabilizerElement> {
        StabilizerElement::all()
            .filter(|el| {
                let (s, se) = (self.rates.get(*el), self.std_errors[el.slot()]);
                s > 0.0 && s > z * se
            })
            .collect()
    }
}

/// Measures each of the 7 elements on `shots` fresh copies.
pub fn estimate_rates<S, R>(sampler: &S, shots: u64, rng: &mut R) -> Result<RateEstimate>
where
    S: StabilizerSampler + ?Sized,
    R: Rng + ?Sized,
{
    if shots == 0 {
        return Err(Error::Config("shots must be at least 1".into()));
    }
    let mut rates = [0.0; 7];
    let mut std_errors = [0.0; 7];
    for el in StabilizerElement::all() {
        let errors = (0..shots).filter(|_| sampler.sample(el, rng) < 0).count();
        let s = errors as f64 / shots as f64;
        rates[el.slot()] = s;
        std_errors[el.slot()] = (s * (1.0 - s) / shots as f64).sqrt();
    }
    Ok(RateEstimate {
        rates: StabilizerRates(rates),
        std_errors,
        shots,
    })
}
