use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::protocol::ChannelSource;
use crate::quantum::{make_ghz, sample_index, DensityMatrix, GhzLabel, StateVector};
use crate::{Error, Result};

/// Basis in which the in-transit qubit controls the ancilla rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CouplingBasis {
    Z,
    X,
}

/// Eavesdropper interference during channel distribution.
#[derive(Debug, Clone, PartialEq)]
pub enum TamperModel {
    None,
    /// A fresh ancilla in `|0⟩` is rotated by `R_y(angle)` when `qubit` is in
    /// the second state of `basis`; the ancilla is then kept by Eve.
    /// `angle = π` copies the qubit's value in that basis.
    AncillaCoupling {
        qubit: usize,
        angle: f64,
        basis: CouplingBasis,
    },
    /// The triplet is swapped for a state of Eve's choosing.
    Replacement(DensityMatrix),
}

/// A three-qubit channel state in either representation.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelState {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

impl From<StateVector> for ChannelState {
    fn from(s: StateVector) -> Self {
        ChannelState::Pure(s)
    }
}

impl From<DensityMatrix> for ChannelState {
    fn from(d: DensityMatrix) -> Self {
        ChannelState::Mixed(d)
    }
}

impl ChannelState {
    fn into_density(self) -> Result<DensityMatrix> {
        let rho = match self {
            ChannelState::Pure(s) => DensityMatrix::from_pure(&s),
            ChannelState::Mixed(d) => d,
        };
        if rho.num_qubits() != 3 {
            return Err(Error::WrongQubitCount {
                expected: 3,
                actual: rho.num_qubits(),
            });
        }
        rho.validate()?;
        Ok(rho)
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `proj` on `qubit` of three, identity elsewhere.
fn embed(proj: &DMatrix<Complex64>, qubit: usize) -> DMatrix<Complex64> {
    let id = DMatrix::<Complex64>::identity(2, 2);
    let factors: Vec<&DMatrix<Complex64>> = (0..3)
        .map(|q| if q == qubit { proj } else { &id })
        .collect();
    factors[0].kronecker(factors[1]).kronecker(factors[2])
}

/// Controlled rotation on system qubits `0..3` plus an ancilla as qubit 3.
fn coupling_unitary(qubit: usize, angle: f64, basis: CouplingBasis) -> DMatrix<Complex64> {
    let (v0, v1) = match basis {
        CouplingBasis::Z => ([c(1.0), c(0.0)], [c(0.0), c(1.0)]),
        CouplingBasis::X => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            ([c(h), c(h)], [c(h), c(-h)])
        }
    };
    let proj = |v: [Complex64; 2]| DMatrix::from_fn(2, 2, |i, j| v[i] * v[j].conj());
    let (cos, sin) = ((angle / 2.0).cos(), (angle / 2.0).sin());
    let rot = DMatrix::from_row_slice(2, 2, &[c(cos), c(-sin), c(sin), c(cos)]);
    embed(&proj(v0), qubit).kronecker(&DMatrix::identity(2, 2))
        + embed(&proj(v1), qubit).kronecker(&rot)
}

impl TamperModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            TamperModel::None => Ok(()),
            TamperModel::AncillaCoupling { qubit, angle, .. } => {
                if *qubit > 2 {
                    return Err(Error::InvalidTamper(format!(
                        "qubit {qubit} is not in a triplet"
                    )));
                }
                if !angle.is_finite() {
                    return Err(Error::InvalidTamper(format!("angle {angle} is not finite")));
                }
                Ok(())
            }
            TamperModel::Replacement(rho) => {
                if rho.num_qubits() != 3 {
                    return Err(Error::InvalidTamper(format!(
                        "replacement has {} qubits",
                        rho.num_qubits()
                    )));
                }
                rho.validate()
            }
        }
    }
}

/// State of one triplet after Eve's interference, with her ancilla traced out.
pub fn apply_tamper(
    model: &TamperModel,
    channel: impl Into<ChannelState>,
) -> Result<DensityMatrix> {
    model.validate()?;
    let rho = channel.into().into_density()?;
    match model {
        TamperModel::None => Ok(rho),
        TamperModel::Replacement(r) => Ok(r.clone()),
        TamperModel::AncillaCoupling {
            qubit,
            angle,
            basis,
        } => {
            let ancilla = DensityMatrix::from_pure(&StateVector::basis(1, 0)?);
            let joint = rho
                .tensor(&ancilla)?
                .conjugate(&coupling_unitary(*qubit, *angle, *basis))?;
            joint.trace_out_last()
        }
    }
}

/// `⟨P+|ρ|P+⟩`.
pub fn fidelity_to_pp(rho: &DensityMatrix) -> Result<f64> {
    rho.expectation(&make_ghz(GhzLabel::Pp))
}

/// Channel source that hands the parties tampered triplets. Each mixed
/// triplet is realised per group as one of its eigenvectors, drawn with its
/// eigenvalue as probability.
#[derive(Debug, Clone)]
pub struct TamperedChannel {
    model: TamperModel,
}

impl TamperedChannel {
    pub fn new(model: TamperModel) -> Result<Self> {
        model.validate()?;
        Ok(Self { model })
    }

    fn sample_triplet<R: Rng + ?Sized>(&self, label: GhzLabel, rng: &mut R) -> Result<StateVector> {
        let rho = apply_tamper(&self.model, make_ghz(label))?;
        let eig = rho.matrix().clone().symmetric_eigen();
        let weights: Vec<f64> = eig.eigenvalues.iter().map(|&w| w.max(0.0)).collect();
        let k = sample_index(&weights, rng);
        StateVector::normalized(eig.eigenvectors.column(k).iter().copied().collect())
    }
}

impl ChannelSource for TamperedChannel {
    fn prepare<R: Rng + ?Sized>(
        &mut self,
        _group: usize,
        (g1, g2): (GhzLabel, GhzLabel),
        rng: &mut R,
    ) -> Result<StateVector> {
        self.sample_triplet(g1, rng)?
            .tensor(&self.sample_triplet(g2, rng)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::security::{rates_from_diagonal, twirl};
    use crate::EPS;
    use std::f64::consts::PI;

    fn pp() -> StateVector {
        make_ghz(GhzLabel::Pp)
    }

    #[test]
    fn no_tamper_is_identity() {
        let rho = apply_tamper(&TamperModel::None, pp()).unwrap();
        assert!(rho.max_abs_diff(&DensityMatrix::from_pure(&pp())) < EPS);
        let (_, d) = twirl(&rho).unwrap();
        assert!(rates_from_diagonal(&d)
            .values()
            .iter()
            .all(|s| s.abs() < EPS));
    }

    #[test]
    fn full_z_copy_on_charlie_dephases() {
        let model = TamperModel::AncillaCoupling {
            qubit: 2,
            angle: PI,
            basis: CouplingBasis::Z,
        };
        let rho = apply_tamper(&model, pp()).unwrap();
        let (_, d) = twirl(&rho).unwrap();
        // P+ and P- equally likely: phase bit fully randomised
        assert!((d.probs()[0b000] - 0.5).abs() < EPS);
        assert!((d.probs()[0b100] - 0.5).abs() < EPS);
        let s = rates_from_diagonal(&d);
        assert!((s.values()[0] - 0.5).abs() < EPS);
        assert!(s.values()[1].abs() < EPS);
    }

    #[test]
    fn coupling_fidelity_closed_form() {
        for k in 0..=16 {
            let angle = PI * f64::from(k) / 16.0;
            for basis in [CouplingBasis::Z, CouplingBasis::X] {
                let model = TamperModel::AncillaCoupling {
                    qubit: 0,
                    angle,
                    basis,
                };
                let f = fidelity_to_pp(&apply_tamper(&model, pp()).unwrap()).unwrap();
                assert!((f - (1.0 + (angle / 2.0).cos()) / 2.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn invalid_models_rejected() {
        let bad = TamperModel::AncillaCoupling {
            qubit: 3,
            angle: 1.0,
            basis: CouplingBasis::Z,
        };
        assert!(apply_tamper(&bad, pp()).is_err());
        let bad = TamperModel::Replacement(DensityMatrix::maximally_mixed(2).unwrap());
        assert!(TamperedChannel::new(bad).is_err());
    }
}
