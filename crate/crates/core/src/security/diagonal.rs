use serde::{Deserialize, Serialize};

use super::StabilizerElement;
use crate::quantum::{make_ghz, DensityMatrix, GhzLabel, LabelBits};
use crate::{Error, Result, EPS};

/// Tolerance for linear-inversion noise in [`diagonal_from_rates`].
pub const RATE_TOL: f64 = 1e-10;

/// Probabilities `p_{b0 b1 b2}` of a GHZ-diagonal state, indexed by
/// [`LabelBits::index`] (`b0` is the phase bit).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DiagonalFields", into = "DiagonalFields")]
pub struct GhzDiagonal([f64; 8]);

impl GhzDiagonal {
    pub fn new(probs: [f64; 8]) -> Result<Self> {
        let mut probs = probs;
        for p in &mut probs {
            if !p.is_finite() || *p < -EPS {
                return Err(Error::InvalidDistribution(format!("entry {p} is negative")));
            }
            *p = p.max(0.0);
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > EPS {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {total}"
            )));
        }
        Ok(Self(probs))
    }

    /// All weight on one GHZ basis state.
    pub fn point(label: GhzLabel) -> Self {
        let mut probs = [0.0; 8];
        probs[label.label_bits().index()] = 1.0;
        Self(probs)
    }

    pub fn uniform() -> Self {
        Self([0.125; 8])
    }

    pub fn probs(&self) -> &[f64; 8] {
        &self.0
    }

    pub fn get(&self, bits: LabelBits) -> f64 {
        self.0[bits.index()]
    }

    /// `Σ_x p_x |GHZ_x⟩⟨GHZ_x|`.
    pub fn to_density(&self) -> DensityMatrix {
        let parts: Vec<_> = GhzLabel::ALL
            .iter()
            .map(|&g| {
                (
                    self.0[g.label_bits().index()],
                    DensityMatrix::from_pure(&make_ghz(g)),
                )
            })
            .collect();
        DensityMatrix::mixture(&parts).expect("GHZ projectors mix to a valid state")
    }
}

#[derive(Serialize, Deserialize)]
struct DiagonalFields {
    #[serde(default)]
    p000: f64,
    #[serde(default)]
    p001: f64,
    #[serde(default)]
    p010: f64,
    #[serde(default)]
    p011: f64,
    #[serde(default)]
    p100: f64,
    #[serde(default)]
    p101: f64,
    #[serde(default)]
    p110: f64,
    #[serde(default)]
    p111: f64,
}

impl TryFrom<DiagonalFields> for GhzDiagonal {
    type Error = Error;

    fn try_from(f: DiagonalFields) -> Result<Self> {
        GhzDiagonal::new([
            f.p000, f.p001, f.p010, f.p011, f.p100, f.p101, f.p110, f.p111,
        ])
    }
}

impl From<GhzDiagonal> for DiagonalFields {
    fn from(d: GhzDiagonal) -> Self {
        let [p000, p001, p010, p011, p100, p101, p110, p111] = d.0;
        Self {
            p000,
            p001,
            p010,
            p011,
            p100,
            p101,
            p110,
            p111,
        }
    }
}

/// Error rates `s1..s7` of the non-trivial stabilizer elements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "RateFields", into = "RateFields")]
pub struct StabilizerRates(pub [f64; 7]);

impl StabilizerRates {
    pub fn get(&self, element: StabilizerElement) -> f64 {
        self.0[element.slot()]
    }

    pub fn values(&self) -> &[f64; 7] {
        &self.0
    }
}

#[derive(Serialize, Deserialize)]
struct RateFields {
    #[serde(default)]
    s1: f64,
    #[serde(default)]
    s2: f64,
    #[serde(default)]
    s3: f64,
    #[serde(default)]
    s4: f64,
    #[serde(default)]
    s5: f64,
    #[serde(default)]
    s6: f64,
    #[serde(default)]
    s7: f64,
}

impl From<RateFields> for StabilizerRates {
    fn from(f: RateFields) -> Self {
        Self([f.s1, f.s2, f.s3, f.s4, f.s5, f.s6, f.s7])
    }
}

impl From<StabilizerRates> for RateFields {
    fn from(r: StabilizerRates) -> Self {
        let [s1, s2, s3, s4, s5, s6, s7] = r.0;
        Self {
            s1,
            s2,
            s3,
            s4,
            s5,
            s6,
            s7,
        }
    }
}

/// `s_k` is the weight of labels on which element `k` has eigenvalue -1.
pub fn rates_from_diagonal(d: &GhzDiagonal) -> StabilizerRates {
    let mut rates = [0.0; 7];
    for el in StabilizerElement::all() {
        rates[el.slot()] = (0..8)
            .filter(|&x| el.eigenvalue(LabelBits::from_index(x)) < 0)
            .map(|x| d.0[x])
            .sum();
    }
    StabilizerRates(rates)
}

/// Label index, constant term, and the coefficients of `s1..s7` (all over 4).
const RATE_TO_DIAGONAL: [(usize, f64, [f64; 7]); 8] = [
    (0b000, 4.0, [-1.0, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0]),
    (0b100, 0.0, [1.0, -1.0, -1.0, 1.0, -1.0, 1.0, 1.0]),
    (0b011, 0.0, [-1.0, 1.0, 1.0, 1.0, -1.0, 1.0, -1.0]),
    (0b111, 0.0, [1.0, 1.0, 1.0, -1.0, -1.0, -1.0, 1.0]),
    (0b010, 0.0, [-1.0, 1.0, -1.0, 1.0, 1.0, -1.0, 1.0]),
    (0b110, 0.0, [1.0, 1.0, -1.0, -1.0, 1.0, 1.0, -1.0]),
    (0b001, 0.0, [-1.0, -1.0, 1.0, -1.0, 1.0, 1.0, 1.0]),
    (0b101, 0.0, [1.0, -1.0, 1.0, 1.0, 1.0, -1.0, -1.0]),
];

/// Inverts [`rates_from_diagonal`]. Entries within [`RATE_TOL`] of `[0, 1]`
/// are clamped; anything further out means the rates cannot come from a state.
pub fn diagonal_from_rates(s: &StabilizerRates) -> Result<GhzDiagonal> {
    let mut probs = [0.0; 8];
    for (index, constant, coeffs) in RATE_TO_DIAGONAL {
        let sum: f64 = coeffs.iter().zip(&s.0).map(|(c, r)| c * r).sum();
        let value = (constant + sum) / 4.0;
        if !(-RATE_TOL..=1.0 + RATE_TOL).contains(&value) {
            return Err(Error::InconsistentRates {
                label: index as u8,
                value,
            });
        }
        probs[index] = value.clamp(0.0, 1.0);
    }
    let total: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= total);
    GhzDiagonal::new(probs)
}
