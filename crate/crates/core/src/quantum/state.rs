use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{BellOutcome, GhzLabel, PauliOp};
use crate::{Error, Result, EPS};

pub const MAX_QUBITS: usize = 8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Pure state of `num_qubits` qubits.
///
/// Qubit 0 is the most significant bit of the amplitude index, so the ket
/// `|q0 q1 ... q(n-1)⟩` lives at index `Σ q_k 2^(n-1-k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Validates length and normalization.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::BadLength(len));
        }
        let num_qubits = len.trailing_zeros() as usize;
        if num_qubits > MAX_QUBITS {
            return Err(Error::QubitCount(num_qubits));
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > EPS {
            return Err(Error::NotNormalized(norm_sq));
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Rescales an arbitrary nonzero vector to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm * norm));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Self::new(amplitudes)
    }

    /// Computational basis state `|index⟩` on `num_qubits` qubits.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::QubitCount(num_qubits));
        }
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::QubitIndex { index, num_qubits });
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Amplitude-wise equality within `tol`.
    pub fn approx_eq(&self, other: &StateVector, tol: f64) -> bool {
        self.num_qubits == other.num_qubits
            && self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Equality up to a global phase: `|⟨self|other⟩| = 1` within `tol`.
    pub fn approx_eq_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        self.num_qubits == other.num_qubits && (self.inner(other).norm() - 1.0).abs() <= tol
    }

    pub fn scaled(&self, factor: Complex64) -> StateVector {
        StateVector {
            num_qubits: self.num_qubits,
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }

    /// Kronecker product with this state's qubits first.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let num_qubits = self.num_qubits + other.num_qubits;
        if num_qubits > MAX_QUBITS {
            return Err(Error::QubitCount(num_qubits));
        }
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Ok(StateVector {
            num_qubits,
            amplitudes,
        })
    }

    /// Reorders qubits: qubit `j` of the result is qubit `order[j]` of `self`.
    pub fn permute_qubits(&self, order: &[usize]) -> Result<StateVector> {
        let n = self.num_qubits;
        let mut seen = vec![false; n];
        if order.len() != n {
            return Err(Error::WrongQubitCount {
                expected: n,
                actual: order.len(),
            });
        }
        for &q in order {
            self.check_qubit(q)?;
            if std::mem::replace(&mut seen[q], true) {
                return Err(Error::DuplicateQubits(q, q));
            }
        }
        let mut out = vec![ZERO; self.amplitudes.len()];
        for (src, amp) in self.amplitudes.iter().enumerate() {
            let dst = order.iter().enumerate().fold(0, |acc, (j, &q)| {
                acc | (((src >> (n - 1 - q)) & 1) << (n - 1 - j))
            });
            out[dst] = *amp;
        }
        Ok(StateVector {
            num_qubits: n,
            amplitudes: out,
        })
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitIndex {
                index: qubit,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    fn check_pair(&self, (a, b): (usize, usize)) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(Error::DuplicateQubits(a, b));
        }
        Ok(())
    }

    fn bit_mask(&self, qubit: usize) -> usize {
        1 << (self.num_qubits - 1 - qubit)
    }

    /// Applies a single-qubit operator. The global sign is kept as computed.
    pub fn apply_local(&self, op: PauliOp, qubit: usize) -> Result<StateVector> {
        self.check_qubit(qubit)?;
        let m = op.matrix();
        let mask = self.bit_mask(qubit);
        let mut out = vec![ZERO; self.amplitudes.len()];
        for i0 in (0..self.amplitudes.len()).filter(|i| i & mask == 0) {
            let i1 = i0 | mask;
            let (a0, a1) = (self.amplitudes[i0], self.amplitudes[i1]);
            out[i0] = a0 * m[0][0] + a1 * m[0][1];
            out[i1] = a0 * m[1][0] + a1 * m[1][1];
        }
        Ok(StateVector {
            num_qubits: self.num_qubits,
            amplitudes: out,
        })
    }

    /// Overlap coefficients `c_r = Σ_xy conj(β_xy) ψ[r; a=x, b=y]` of the pair
    /// `(a, b)` with a Bell state, indexed by the remaining qubits `r`.
    fn bell_overlaps(
        &self,
        (a, b): (usize, usize),
        outcome: BellOutcome,
    ) -> Vec<(usize, Complex64)> {
        let (ma, mb) = (self.bit_mask(a), self.bit_mask(b));
        let bell = bell_coefficients(outcome);
        (0..self.amplitudes.len())
            .filter(|i| i & (ma | mb) == 0)
            .map(|rest| {
                let mut c = ZERO;
                for (xy, coeff) in bell.iter().enumerate() {
                    let idx =
                        rest | if xy & 2 != 0 { ma } else { 0 } | if xy & 1 != 0 { mb } else { 0 };
                    c += coeff * self.amplitudes[idx];
                }
                (rest, c)
            })
            .collect()
    }

    /// Born-rule probabilities of projecting the pair onto each Bell state,
    /// ordered as [`BellOutcome::ALL`]. The first index of `pair` is the first
    /// qubit of the Bell state.
    pub fn bell_probabilities(&self, pair: (usize, usize)) -> Result<[f64; 4]> {
        self.check_pair(pair)?;
        let mut probs = [0.0; 4];
        for outcome in BellOutcome::ALL {
            probs[outcome.index()] = self
                .bell_overlaps(pair, outcome)
                .iter()
                .map(|(_, c)| c.norm_sqr())
                .sum();
        }
        Ok(probs)
    }

    /// Projects the pair onto one Bell state.
    ///
    /// Returns the outcome probability and, when it is nonzero, the renormalized
    /// post-measurement state (still on all qubits).
    pub fn bell_project(
        &self,
        pair: (usize, usize),
        outcome: BellOutcome,
    ) -> Result<(f64, Option<StateVector>)> {
        self.check_pair(pair)?;
        let overlaps = self.bell_overlaps(pair, outcome);
        let prob: f64 = overlaps.iter().map(|(_, c)| c.norm_sqr()).sum();
        if prob <= EPS * EPS {
            return Ok((prob, None));
        }
        let (ma, mb) = (self.bit_mask(pair.0), self.bit_mask(pair.1));
        let bell = bell_coefficients(outcome);
        let scale = prob.sqrt();
        let mut out = vec![ZERO; self.amplitudes.len()];
        for (rest, c) in overlaps {
            for (xy, coeff) in bell.iter().enumerate() {
                let idx =
                    rest | if xy & 2 != 0 { ma } else { 0 } | if xy & 1 != 0 { mb } else { 0 };
                // Bell coefficients are real, so conj(β) = β.
                out[idx] = coeff * c / scale;
            }
        }
        Ok((
            prob,
            Some(StateVector {
                num_qubits: self.num_qubits,
                amplitudes: out,
            }),
        ))
    }

    /// Samples a Bell-basis measurement of the pair and returns the outcome with
    /// the collapsed state.
    pub fn bell_measure<R: Rng + ?Sized>(
        &self,
        pair: (usize, usize),
        rng: &mut R,
    ) -> Result<(BellOutcome, StateVector)> {
        let probs = self.bell_probabilities(pair)?;
        let outcome = sample_index(&probs, rng);
        let outcome = BellOutcome::ALL[outcome];
        let (_, post) = self.bell_project(pair, outcome)?;
        // A sampled outcome always has positive probability.
        Ok((
            outcome,
            post.expect("sampled outcome has nonzero probability"),
        ))
    }
}

/// Picks an index with probability proportional to `weights`; weights below
/// `EPS^2` are treated as impossible.
pub(crate) fn sample_index<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().filter(|w| **w > EPS * EPS).sum();
    let mut target = rng.random::<f64>() * total;
    let mut last = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w <= EPS * EPS {
            continue;
        }
        last = i;
        if target < w {
            return i;
        }
        target -= w;
    }
    last
}

/// Real coefficients of a Bell state on `|00⟩, |01⟩, |10⟩, |11⟩`.
fn bell_coefficients(outcome: BellOutcome) -> [f64; 4] {
    let h = FRAC_1_SQRT_2;
    match outcome {
        BellOutcome::PhiPlus => [h, 0.0, 0.0, h],
        BellOutcome::PhiMinus => [h, 0.0, 0.0, -h],
        BellOutcome::PsiPlus => [0.0, h, h, 0.0],
        BellOutcome::PsiMinus => [0.0, h, -h, 0.0],
    }
}

/// The two-qubit Bell state for `outcome`.
pub fn make_bell(outcome: BellOutcome) -> StateVector {
    StateVector {
        num_qubits: 2,
        amplitudes: bell_coefficients(outcome)
            .iter()
            .map(|&c| Complex64::new(c, 0.0))
            .collect(),
    }
}

/// The three-qubit GHZ basis state `(|0 i1 i2⟩ + (-1)^p |1 ī1 ī2⟩)/√2`.
pub fn make_ghz(label: GhzLabel) -> StateVector {
    let bits = label.label_bits();
    let low = usize::from((bits.i1 << 1) | bits.i2);
    let high = 0b100 | (!low & 0b11);
    let mut amplitudes = vec![ZERO; 8];
    amplitudes[low] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    amplitudes[high] = Complex64::new(
        if bits.p == 0 {
            FRAC_1_SQRT_2
        } else {
            -FRAC_1_SQRT_2
        },
        0.0,
    );
    StateVector {
        num_qubits: 3,
        amplitudes,
    }
}

/// Six-qubit product `Bell(1,4) ⊗ Bell(2,5) ⊗ Bell(3,6)` in particle order.
pub fn bell_triple(alice: BellOutcome, bob: BellOutcome, charlie: BellOutcome) -> StateVector {
    let grouped = make_bell(alice)
        .tensor(&make_bell(bob))
        .and_then(|ab| ab.tensor(&make_bell(charlie)))
        .expect("six qubits fit");
    // grouped order is (1,4,2,5,3,6)
    grouped
        .permute_qubits(&[0, 2, 4, 1, 3, 5])
        .expect("valid permutation")
}

pub fn tensor(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    a.tensor(b)
}

pub fn apply_local(state: &StateVector, op: PauliOp, qubit: usize) -> Result<StateVector> {
    state.apply_local(op, qubit)
}

pub fn bell_probabilities(state: &StateVector, pair: (usize, usize)) -> Result<[f64; 4]> {
    state.bell_probabilities(pair)
}

pub fn bell_measure<R: Rng + ?Sized>(
    state: &StateVector,
    pair: (usize, usize),
    rng: &mut R,
) -> Result<(BellOutcome, StateVector)> {
    state.bell_measure(pair, rng)
}
