use serde::{Deserialize, Serialize};

use crate::quantum::{BellOutcome, PauliOp};
use crate::swap::Alphabet;
use crate::{Error, Result};

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// The `rank`-th permutation of `0..n` in lexicographic order.
pub fn unrank_permutation(n: usize, rank: usize) -> Result<Vec<u8>> {
    let count = factorial(n);
    if rank >= count {
        return Err(Error::SchemeIndex { index: rank, count });
    }
    let mut pool: Vec<u8> = (0..n as u8).collect();
    let mut rank = rank;
    let mut out = Vec::with_capacity(n);
    for k in (0..n).rev() {
        let f = factorial(k);
        out.push(pool.remove(rank / f));
        rank %= f;
    }
    Ok(out)
}

/// Lexicographic rank of a permutation of `0..perm.len()`.
pub fn rank_permutation(perm: &[u8]) -> usize {
    let n = perm.len();
    (0..n)
        .map(|i| {
            let smaller_after = perm[i + 1..].iter().filter(|&&x| x < perm[i]).count();
            smaller_after * factorial(n - 1 - i)
        })
        .sum()
}

/// Secret assignment of classical symbols to one sender's operators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorEncoding {
    alphabet: Alphabet,
    index: usize,
    /// `symbols[k]` is the symbol carried by `alphabet.ops()[k]`.
    symbols: Vec<u8>,
}

impl OperatorEncoding {
    pub fn new(alphabet: Alphabet, index: usize) -> Result<Self> {
        let symbols = unrank_permutation(alphabet.size(), index)?;
        Ok(Self {
            alphabet,
            index,
            symbols,
        })
    }

    pub fn from_symbols(alphabet: Alphabet, symbols: Vec<u8>) -> Result<Self> {
        let mut sorted = symbols.clone();
        sorted.sort_unstable();
        if sorted != (0..alphabet.size() as u8).collect::<Vec<_>>() {
            return Err(Error::Config(format!("{symbols:?} is not a permutation")));
        }
        let index = rank_permutation(&symbols);
        Ok(Self {
            alphabet,
            index,
            symbols,
        })
    }

    /// Number of distinct encodings for an alphabet (`n!`).
    pub fn count(alphabet: Alphabet) -> usize {
        factorial(alphabet.size())
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.alphabet.bits_per_symbol()
    }

    /// Symbol carried by `op`, or `None` if `op` is outside the alphabet.
    pub fn symbol_of(&self, op: PauliOp) -> Option<u8> {
        self.alphabet.position(op).map(|k| self.symbols[k])
    }

    /// Operator that encodes `symbol`.
    pub fn op_for(&self, symbol: u8) -> Result<PauliOp> {
        self.symbols
            .iter()
            .position(|&s| s == symbol)
            .map(|k| self.alphabet.ops()[k])
            .ok_or_else(|| Error::Config(format!("symbol {symbol} outside alphabet")))
    }
}

/// Both senders' secret encodings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodingScheme {
    pub alice: OperatorEncoding,
    pub bob: OperatorEncoding,
}

impl EncodingScheme {
    pub fn new(alice: OperatorEncoding, bob: OperatorEncoding) -> Self {
        Self { alice, bob }
    }

    pub fn alice_index(&self) -> usize {
        self.alice.index()
    }

    pub fn bob_index(&self) -> usize {
        self.bob.index()
    }
}

/// Scheme for the default alphabets: Alice over `{σ00, σ01, σ10, σ11}`
/// (24 encodings), Bob over `{σ0, σ1}` (2 encodings). Index `(0, 0)` maps
/// `σ00→00, σ01→01, σ10→10, σ11→11` and `σ0→0, σ1→1`.
pub fn scheme_from_index(alice_index: usize, bob_index: usize) -> Result<EncodingScheme> {
    Ok(EncodingScheme::new(
        OperatorEncoding::new(Alphabet::Pauli4, alice_index)?,
        OperatorEncoding::new(Alphabet::BitFlip, bob_index)?,
    ))
}

/// Map from Bell outcomes to two-bit symbols used for random key bits.
/// Index 0 is `Φ+→00, Φ−→01, Ψ+→10, Ψ−→11`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BellCode {
    index: usize,
    symbols: Vec<u8>,
}

impl BellCode {
    pub fn new(index: usize) -> Result<Self> {
        Ok(Self {
            index,
            symbols: unrank_permutation(4, index)?,
        })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn symbol(&self, outcome: BellOutcome) -> u8 {
        self.symbols[outcome.index()]
    }
}

impl Default for BellCode {
    fn default() -> Self {
        Self::new(0).expect("index 0 is always valid")
    }
}
