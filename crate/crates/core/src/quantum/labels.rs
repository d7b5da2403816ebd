use std::fmt;

use serde::{Deserialize, Serialize};

/// One of the four Bell states.
///
/// Each state is `(|0 t⟩ + (-1)^s |1 t̄⟩)/√2` with phase bit `s` and parity bit `t`:
/// `Φ±` have parity 0, `Ψ±` parity 1, and the `-` states carry phase 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BellOutcome {
    #[serde(rename = "Phi+")]
    PhiPlus,
    #[serde(rename = "Phi-")]
    PhiMinus,
    #[serde(rename = "Psi+")]
    PsiPlus,
    #[serde(rename = "Psi-")]
    PsiMinus,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] = [
        BellOutcome::PhiPlus,
        BellOutcome::PhiMinus,
        BellOutcome::PsiPlus,
        BellOutcome::PsiMinus,
    ];

    /// Position in [`BellOutcome::ALL`]; equals `2 * parity + phase`.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    pub fn from_bits(phase: u8, parity: u8) -> Self {
        Self::ALL[usize::from(2 * (parity & 1) + (phase & 1))]
    }

    pub fn phase(self) -> u8 {
        (self.index() & 1) as u8
    }

    pub fn parity(self) -> u8 {
        (self.index() >> 1) as u8
    }

    /// Action of a local Pauli operator on the first qubit of the pair.
    ///
    /// Returns the resulting Bell state and the sign it picks up.
    pub fn apply_first(self, op: PauliOp) -> (BellOutcome, i8) {
        let (mut phase, mut parity) = (self.phase(), self.parity());
        let mut sign = 1i8;
        if op.has_x() {
            if phase == 1 {
                sign = -sign;
            }
            parity ^= 1;
        }
        if op.has_z() {
            phase ^= 1;
        }
        (BellOutcome::from_bits(phase, parity), sign)
    }

    pub fn name(self) -> &'static str {
        match self {
            BellOutcome::PhiPlus => "Phi+",
            BellOutcome::PhiMinus => "Phi-",
            BellOutcome::PsiPlus => "Psi+",
            BellOutcome::PsiMinus => "Psi-",
        }
    }
}

impl fmt::Display for BellOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for BellOutcome {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|b| b.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| crate::Error::Config(format!("unknown Bell outcome {s:?}")))
    }
}

/// Label bits `(p, i1, i2)` of a GHZ basis state.
///
/// The bits are the eigenvalue labels of the stabilizer generators
/// `XXX`, `ZZI`, `ZIZ`, with eigenvalue +1 mapped to 0 and -1 to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LabelBits {
    pub p: u8,
    pub i1: u8,
    pub i2: u8,
}

impl LabelBits {
    pub fn new(p: u8, i1: u8, i2: u8) -> Self {
        Self {
            p: p & 1,
            i1: i1 & 1,
            i2: i2 & 1,
        }
    }

    /// Packed index `4p + 2 i1 + i2`, used for label-indexed storage.
    pub fn index(self) -> usize {
        usize::from((self.p << 2) | (self.i1 << 1) | self.i2)
    }

    pub fn from_index(index: usize) -> Self {
        Self::new((index >> 2) as u8, (index >> 1) as u8, index as u8)
    }
}

impl fmt::Display for LabelBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.p, self.i1, self.i2)
    }
}

/// One of the eight GHZ basis states `|P±⟩, |Q±⟩, |R±⟩, |S±⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GhzLabel {
    #[serde(rename = "P+")]
    Pp,
    #[serde(rename = "P-")]
    Pm,
    #[serde(rename = "Q+")]
    Qp,
    #[serde(rename = "Q-")]
    Qm,
    #[serde(rename = "R+")]
    Rp,
    #[serde(rename = "R-")]
    Rm,
    #[serde(rename = "S+")]
    Sp,
    #[serde(rename = "S-")]
    Sm,
}

impl GhzLabel {
    pub const ALL: [GhzLabel; 8] = [
        GhzLabel::Pp,
        GhzLabel::Pm,
        GhzLabel::Qp,
        GhzLabel::Qm,
        GhzLabel::Rp,
        GhzLabel::Rm,
        GhzLabel::Sp,
        GhzLabel::Sm,
    ];

    pub fn label_bits(self) -> LabelBits {
        // P, Q, R, S carry (i1, i2) = 00, 01, 10, 11; the sign is the phase bit.
        let n = self as u8;
        let letter = n >> 1;
        LabelBits::new(n & 1, letter >> 1, letter & 1)
    }

    pub fn from_label_bits(bits: LabelBits) -> Self {
        let letter = (bits.i1 << 1) | bits.i2;
        Self::ALL[usize::from((letter << 1) | bits.p)]
    }

    /// Action of a local Pauli operator on `qubit` (0, 1 or 2) of this GHZ state.
    ///
    /// Returns the resulting GHZ label and the sign it picks up.
    pub fn apply(self, op: PauliOp, qubit: usize) -> (GhzLabel, i8) {
        assert!(qubit < 3, "GHZ states have three qubits");
        let LabelBits {
            mut p,
            mut i1,
            mut i2,
        } = self.label_bits();
        let mut sign = 1i8;
        if op.has_x() {
            match qubit {
                0 => {
                    if p == 1 {
                        sign = -sign;
                    }
                    i1 ^= 1;
                    i2 ^= 1;
                }
                1 => i1 ^= 1,
                _ => i2 ^= 1,
            }
        }
        if op.has_z() {
            let flips_sign = match qubit {
                0 => 0,
                1 => i1,
                _ => i2,
            };
            if flips_sign == 1 {
                sign = -sign;
            }
            p ^= 1;
        }
        (GhzLabel::from_label_bits(LabelBits::new(p, i1, i2)), sign)
    }

    pub fn name(self) -> &'static str {
        match self {
            GhzLabel::Pp => "P+",
            GhzLabel::Pm => "P-",
            GhzLabel::Qp => "Q+",
            GhzLabel::Qm => "Q-",
            GhzLabel::Rp => "R+",
            GhzLabel::Rm => "R-",
            GhzLabel::Sp => "S+",
            GhzLabel::Sm => "S-",
        }
    }
}

impl fmt::Display for GhzLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for GhzLabel {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| crate::Error::Config(format!("unknown GHZ label {s:?}")))
    }
}

/// Single-qubit operators available to the senders.
///
/// `Sigma10` is the real matrix `iσ_y = |0⟩⟨1| - |1⟩⟨0|`, which factors as `Z·X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PauliOp {
    #[serde(rename = "sigma00")]
    Sigma00,
    #[serde(rename = "sigma01")]
    Sigma01,
    #[serde(rename = "sigma10")]
    Sigma10,
    #[serde(rename = "sigma11")]
    Sigma11,
}

impl PauliOp {
    pub const ALL: [PauliOp; 4] = [
        PauliOp::Sigma00,
        PauliOp::Sigma01,
        PauliOp::Sigma10,
        PauliOp::Sigma11,
    ];

    /// Row-major 2x2 matrix. All four operators are real.
    pub fn matrix(self) -> [[f64; 2]; 2] {
        match self {
            PauliOp::Sigma00 => [[1.0, 0.0], [0.0, 1.0]],
            PauliOp::Sigma01 => [[0.0, 1.0], [1.0, 0.0]],
            PauliOp::Sigma10 => [[0.0, 1.0], [-1.0, 0.0]],
            PauliOp::Sigma11 => [[1.0, 0.0], [0.0, -1.0]],
        }
    }

    /// Whether the operator contains a bit flip.
    pub fn has_x(self) -> bool {
        matches!(self, PauliOp::Sigma01 | PauliOp::Sigma10)
    }

    /// Whether the operator contains a phase flip.
    pub fn has_z(self) -> bool {
        matches!(self, PauliOp::Sigma10 | PauliOp::Sigma11)
    }

    pub fn name(self) -> &'static str {
        match self {
            PauliOp::Sigma00 => "I",
            PauliOp::Sigma01 => "X",
            PauliOp::Sigma10 => "iY",
            PauliOp::Sigma11 => "Z",
        }
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
