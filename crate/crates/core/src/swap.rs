//! Closed-form entanglement-swapping algebra for pairs of GHZ triplets.
//!
//! Triplets `(1,2,3)` and `(4,5,6)` are re-expanded in the basis of Bell states
//! on the pairs `(1,4)`, `(2,5)`, `(3,6)` held by Alice, Bob and Charlie. With
//! `g1 = (p, i1, i2)` and `g2 = (q, j1, j2)` the expansion has exactly eight
//! terms of amplitude `±1/(2√2)`: the parities satisfy `tB = tA ⊕ i1 ⊕ j1` and
//! `tC = tA ⊕ i2 ⊕ j2`, the phases satisfy `sA ⊕ sB ⊕ sC = p ⊕ q`, and the sign
//! is `(-1)^(q·tA + sB·i1 + sC·i2)`.

use std::f64::consts::SQRT_2;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::quantum::{BellOutcome, GhzLabel, PauliOp};
use crate::{Error, Result};

/// One term of a swapping decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwapTerm {
    pub alice: BellOutcome,
    pub bob: BellOutcome,
    pub charlie: BellOutcome,
    pub amplitude: f64,
}

impl SwapTerm {
    pub fn outcomes(&self) -> (BellOutcome, BellOutcome, BellOutcome) {
        (self.alice, self.bob, self.charlie)
    }
}

/// Magnitude of every amplitude in a GHZ-pair decomposition.
pub const TERM_AMPLITUDE: f64 = 1.0 / (2.0 * SQRT_2);

/// Expansion of `|g1⟩_123 ⊗ |g2⟩_456` over `Bell(1,4) ⊗ Bell(2,5) ⊗ Bell(3,6)`,
/// sorted by `(alice, bob, charlie)`.
pub fn decompose(g1: GhzLabel, g2: GhzLabel) -> Vec<SwapTerm> {
    let a = g1.label_bits();
    let b = g2.label_bits();
    let mut terms = Vec::with_capacity(8);
    for t_a in 0..2u8 {
        let t_b = t_a ^ a.i1 ^ b.i1;
        let t_c = t_a ^ a.i2 ^ b.i2;
        for s_a in 0..2u8 {
            for s_b in 0..2u8 {
                let s_c = a.p ^ b.p ^ s_a ^ s_b;
                let odd = (b.p & t_a) ^ (s_b & a.i1) ^ (s_c & a.i2);
                terms.push(SwapTerm {
                    alice: BellOutcome::from_bits(s_a, t_a),
                    bob: BellOutcome::from_bits(s_b, t_b),
                    charlie: BellOutcome::from_bits(s_c, t_c),
                    amplitude: if odd == 1 {
                        -TERM_AMPLITUDE
                    } else {
                        TERM_AMPLITUDE
                    },
                });
            }
        }
    }
    terms.sort_by_key(|t| t.outcomes());
    terms
}

/// Operator pair applied by the senders: Alice on particle 1, Bob on particle 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OpPair {
    pub alice_op: PauliOp,
    pub bob_op: PauliOp,
}

impl OpPair {
    pub fn new(alice_op: PauliOp, bob_op: PauliOp) -> Self {
        Self { alice_op, bob_op }
    }

    /// Action on the (Alice, Bob) Bell outcomes; Charlie's pair is untouched.
    pub fn act_on_outcomes(
        &self,
        alice: BellOutcome,
        bob: BellOutcome,
    ) -> (BellOutcome, BellOutcome) {
        (
            alice.apply_first(self.alice_op).0,
            bob.apply_first(self.bob_op).0,
        )
    }
}

/// Operator alphabet a sender encodes with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Alphabet {
    /// `{I, σx, iσy, σz}`, two bits per operation.
    Pauli4,
    /// `{I, σx}`, one bit per operation.
    BitFlip,
    /// `{I, iσy}`, one bit per operation.
    BitPhaseFlip,
    /// `{I, σz}`, one bit per operation. Phase flips alone cannot be told apart
    /// from Charlie's side, so this alphabet collides when paired with `Pauli4`.
    PhaseFlip,
}

impl Alphabet {
    pub fn ops(self) -> &'static [PauliOp] {
        match self {
            Alphabet::Pauli4 => &PauliOp::ALL,
            Alphabet::BitFlip => &[PauliOp::Sigma00, PauliOp::Sigma01],
            Alphabet::BitPhaseFlip => &[PauliOp::Sigma00, PauliOp::Sigma10],
            Alphabet::PhaseFlip => &[PauliOp::Sigma00, PauliOp::Sigma11],
        }
    }

    pub fn size(self) -> usize {
        self.ops().len()
    }

    pub fn bits_per_symbol(self) -> usize {
        self.size().trailing_zeros() as usize
    }

    pub fn position(self, op: PauliOp) -> Option<usize> {
        self.ops().iter().position(|&o| o == op)
    }
}

/// All operator pairs drawn from the two alphabets.
pub fn op_pairs(alice: Alphabet, bob: Alphabet) -> impl Iterator<Item = OpPair> {
    alice
        .ops()
        .iter()
        .flat_map(move |&a| bob.ops().iter().map(move |&b| OpPair::new(a, b)))
}

/// GHZ label and global sign after the senders' operators act on `g`.
pub fn apply_op_pair(g: GhzLabel, ops: OpPair) -> (GhzLabel, i8) {
    let (g, s1) = g.apply(ops.alice_op, 0);
    let (g, s2) = g.apply(ops.bob_op, 1);
    (g, s1 * s2)
}

/// The (Alice, Bob) outcomes that co-occur with `charlie` when no operators
/// are applied.
pub fn charlie_consistent_pairs(
    charlie: BellOutcome,
    g1: GhzLabel,
    g2: GhzLabel,
) -> Vec<(BellOutcome, BellOutcome)> {
    decompose(g1, g2)
        .into_iter()
        .filter(|t| t.charlie == charlie)
        .map(|t| (t.alice, t.bob))
        .collect()
}

/// What Charlie learns from one announced pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeEntry {
    pub ops: OpPair,
    /// The pre-operation (Alice, Bob) branch the operators acted on.
    pub branch: (BellOutcome, BellOutcome),
}

/// Lookup table from `(charlie, announced alice, announced bob)` to the unique
/// operator pair, built from [`apply_op_pair`] and [`decompose`].
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeTable {
    initial: (GhzLabel, GhzLabel),
    alphabets: (Alphabet, Alphabet),
    entries: [Option<DecodeEntry>; 64],
}

fn key(charlie: BellOutcome, alice: BellOutcome, bob: BellOutcome) -> usize {
    charlie.index() * 16 + alice.index() * 4 + bob.index()
}

impl DecodeTable {
    /// Fails with [`Error::DecodeCollision`] if two operator pairs can produce
    /// the same announced pair for the same Charlie outcome.
    pub fn build(g1: GhzLabel, g2: GhzLabel, alice: Alphabet, bob: Alphabet) -> Result<Self> {
        let mut entries: [Option<DecodeEntry>; 64] = [None; 64];
        for ops in op_pairs(alice, bob) {
            let (encoded, _) = apply_op_pair(g1, ops);
            for term in decompose(encoded, g2) {
                // Every operator is an involution up to sign, so it is its own
                // inverse on Bell labels.
                let branch = ops.act_on_outcomes(term.alice, term.bob);
                debug_assert!(charlie_consistent_pairs(term.charlie, g1, g2).contains(&branch));
                let slot = &mut entries[key(term.charlie, term.alice, term.bob)];
                match slot {
                    Some(existing) if existing.ops != ops => {
                        return Err(Error::DecodeCollision {
                            charlie: term.charlie,
                            alice: term.alice,
                            bob: term.bob,
                        })
                    }
                    _ => *slot = Some(DecodeEntry { ops, branch }),
                }
            }
        }
        Ok(Self {
            initial: (g1, g2),
            alphabets: (alice, bob),
            entries,
        })
    }

    /// Cached table for the default alphabets (`Pauli4` for Alice, `BitFlip` for Bob).
    pub fn standard(g1: GhzLabel, g2: GhzLabel) -> &'static DecodeTable {
        static TABLES: OnceLock<Vec<DecodeTable>> = OnceLock::new();
        let tables = TABLES.get_or_init(|| {
            GhzLabel::ALL
                .iter()
                .flat_map(|&a| GhzLabel::ALL.iter().map(move |&b| (a, b)))
                .map(|(a, b)| {
                    DecodeTable::build(a, b, Alphabet::Pauli4, Alphabet::BitFlip)
                        .expect("default alphabets decode uniquely for every GHZ pair")
                })
                .collect()
        });
        &tables[g1 as usize * 8 + g2 as usize]
    }

    pub fn initial(&self) -> (GhzLabel, GhzLabel) {
        self.initial
    }

    pub fn alphabets(&self) -> (Alphabet, Alphabet) {
        self.alphabets
    }

    pub fn lookup(
        &self,
        charlie: BellOutcome,
        announced: (BellOutcome, BellOutcome),
    ) -> Result<DecodeEntry> {
        self.entries[key(charlie, announced.0, announced.1)].ok_or(Error::InconsistentTriple {
            charlie,
            alice: announced.0,
            bob: announced.1,
        })
    }

    /// Number of populated `(charlie, alice, bob)` keys.
    pub fn len(&self) -> usize {
        self.entries.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Charlie's step-8 inference with the default alphabets.
pub fn decode(
    charlie: BellOutcome,
    announced: (BellOutcome, BellOutcome),
    g1: GhzLabel,
    g2: GhzLabel,
) -> Result<OpPair> {
    DecodeTable::standard(g1, g2)
        .lookup(charlie, announced)
        .map(|e| e.ops)
}
