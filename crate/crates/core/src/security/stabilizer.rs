use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::quantum::LabelBits;

/// Single-qubit Pauli factor of a stabilizer element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocalPauli {
    I,
    X,
    Y,
    Z,
}

impl LocalPauli {
    pub fn matrix(self) -> DMatrix<Complex64> {
        let (o, l, i) = (
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
        );
        let m = match self {
            LocalPauli::I => [l, o, o, l],
            LocalPauli::X => [o, l, l, o],
            LocalPauli::Y => [o, -i, i, o],
            LocalPauli::Z => [l, o, o, -l],
        };
        DMatrix::from_row_slice(2, 2, &m)
    }
}

/// One of the seven non-trivial elements of the group generated by
/// `S0 = XXX`, `S1 = ZZI`, `S2 = ZIZ`, numbered 1..=7 in the order
/// `XXX, ZZI, ZIZ, -YYX, IZZ, -YXY, -XYY`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StabilizerElement(u8);

const PATTERNS: [(u8, u8, u8); 7] = [
    (1, 0, 0),
    (0, 1, 0),
    (0, 0, 1),
    (1, 1, 0),
    (0, 1, 1),
    (1, 0, 1),
    (1, 1, 1),
];

impl StabilizerElement {
    pub fn all() -> impl Iterator<Item = StabilizerElement> {
        (1..=7).map(StabilizerElement)
    }

    /// `k` in 1..=7.
    pub fn new(k: u8) -> Option<Self> {
        (1..=7).contains(&k).then_some(Self(k))
    }

    pub fn number(self) -> u8 {
        self.0
    }

    /// Position in rate arrays (0..7).
    pub fn slot(self) -> usize {
        usize::from(self.0 - 1)
    }

    /// Exponents `(a, b, c)` with the element equal to `±S0^a S1^b S2^c`.
    pub fn generator_pattern(self) -> (u8, u8, u8) {
        PATTERNS[self.slot()]
    }

    /// Eigenvalue on the GHZ basis state with the given label: `(-1)^(a p + b i1 + c i2)`.
    pub fn eigenvalue(self, label: LabelBits) -> i8 {
        let (a, b, c) = self.generator_pattern();
        if (a & label.p) ^ (b & label.i1) ^ (c & label.i2) == 1 {
            -1
        } else {
            1
        }
    }

    /// Local factors on qubits 0, 1, 2 and the overall sign.
    pub fn paulis(self) -> ([LocalPauli; 3], i8) {
        use LocalPauli::*;
        match self.0 {
            1 => ([X, X, X], 1),
            2 => ([Z, Z, I], 1),
            3 => ([Z, I, Z], 1),
            4 => ([Y, Y, X], -1),
            5 => ([I, Z, Z], 1),
            6 => ([Y, X, Y], -1),
            _ => ([X, Y, Y], -1),
        }
    }

    /// Full 8x8 operator including its sign.
    pub fn matrix(self) -> DMatrix<Complex64> {
        let ([p0, p1, p2], sign) = self.paulis();
        p0.matrix()
            .kronecker(&p1.matrix())
            .kronecker(&p2.matrix())
            .map(|x| x * f64::from(sign))
    }

    pub fn name(self) -> String {
        let (ps, sign) = self.paulis();
        let body: String = ps.iter().map(|p| format!("{p:?}")).collect();
        if sign < 0 {
            format!("-{body}")
        } else {
            body
        }
    }
}
