use rand::Rng;
use serde::{Deserialize, Serialize};

use super::scheme::{BellCode, OperatorEncoding};
use super::session::{transmit_group, ChannelSource, GroupTrace, PureChannel, SessionConfig};
use super::transcript::{EventKind, Party, Payload, Transcript};
use crate::bits::BitString;
use crate::quantum::{BellOutcome, PauliOp};
use crate::swap::OpPair;
use crate::Result;

/// Key bits held by one party for one party pair.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyBits {
    /// The sender's chosen symbols.
    pub certain: BitString,
    /// Code of the sender's pre-operation Bell outcome.
    pub random: BitString,
}

/// Both ends of a sender–Charlie key.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharedKey {
    pub sender: KeyBits,
    pub charlie: KeyBits,
}

impl SharedKey {
    pub fn agree(&self) -> bool {
        self.sender == self.charlie
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyMaterial {
    pub alice_charlie: SharedKey,
    pub bob_charlie: SharedKey,
}

impl KeyMaterial {
    pub fn agree(&self) -> bool {
        self.alice_charlie.agree() && self.bob_charlie.agree()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QkdReport {
    pub keys: KeyMaterial,
    pub groups: Vec<GroupTrace>,
    pub failed_groups: Vec<usize>,
    pub transcript: Transcript,
}

/// The sender's own view: the symbol it encoded, and its pre-operation outcome
/// recovered by undoing its operator on the measured outcome.
fn sender_view(
    enc: &OperatorEncoding,
    code: &BellCode,
    op: PauliOp,
    measured: BellOutcome,
    out: &mut KeyBits,
) {
    let symbol = enc.symbol_of(op).expect("sender uses its own alphabet");
    out.certain
        .push_value(usize::from(symbol), enc.bits_per_symbol());
    let (before, _) = measured.apply_first(op);
    out.random.push_value(usize::from(code.symbol(before)), 2);
}

fn charlie_view(
    enc: &OperatorEncoding,
    code: &BellCode,
    op: PauliOp,
    branch: BellOutcome,
    out: &mut KeyBits,
) {
    let symbol = enc
        .symbol_of(op)
        .expect("decode table is built from the session alphabets");
    out.certain
        .push_value(usize::from(symbol), enc.bits_per_symbol());
    out.random.push_value(usize::from(code.symbol(branch)), 2);
}

/// Key distribution mode: the senders encode fresh random strings, and each
/// sender–Charlie pair keeps the encoded symbols as certain bits and the
/// sender's pre-operation outcome as two random bits per group.
pub fn run_qkd_session<R: Rng + ?Sized>(config: &SessionConfig, rng: &mut R) -> Result<QkdReport> {
    let mut transcript = Transcript::new();
    run_qkd_with(config, &mut PureChannel, rng, &mut transcript)
}

pub fn run_qkd_with<R: Rng + ?Sized, S: ChannelSource>(
    config: &SessionConfig,
    source: &mut S,
    rng: &mut R,
    transcript: &mut Transcript,
) -> Result<QkdReport> {
    config.validate()?;
    let enc = config.encoding()?;
    let code = config.bell_code()?;
    let table = config.decode_table()?;
    let mut keys = KeyMaterial::default();
    let mut groups = Vec::with_capacity(config.groups);
    let mut failed_groups = Vec::new();

    for _ in 0..config.groups {
        let sa = rng.random_range(0..config.alice_alphabet.size()) as u8;
        let sb = rng.random_range(0..config.bob_alphabet.size()) as u8;
        let ops = OpPair::new(enc.alice.op_for(sa)?, enc.bob.op_for(sb)?);
        let trace = transmit_group(config.initial_pair, ops, &table, source, rng, transcript)?;
        match trace.decoded {
            Some(entry) => {
                sender_view(
                    &enc.alice,
                    &code,
                    ops.alice_op,
                    trace.alice,
                    &mut keys.alice_charlie.sender,
                );
                sender_view(
                    &enc.bob,
                    &code,
                    ops.bob_op,
                    trace.bob,
                    &mut keys.bob_charlie.sender,
                );
                charlie_view(
                    &enc.alice,
                    &code,
                    entry.ops.alice_op,
                    entry.branch.0,
                    &mut keys.alice_charlie.charlie,
                );
                charlie_view(
                    &enc.bob,
                    &code,
                    entry.ops.bob_op,
                    entry.branch.1,
                    &mut keys.bob_charlie.charlie,
                );
                for (party, alphabet) in [
                    (Party::Alice, config.alice_alphabet),
                    (Party::Bob, config.bob_alphabet),
                ] {
                    transcript.record(
                        Party::Charlie,
                        EventKind::KeyBit,
                        Payload::KeyCount {
                            group: trace.group,
                            with: party,
                            certain_bits: alphabet.bits_per_symbol(),
                            random_bits: 2,
                        },
                    );
                }
            }
            None => failed_groups.push(trace.group),
        }
        groups.push(trace);
    }
    Ok(QkdReport {
        keys,
        groups,
        failed_groups,
        transcript: transcript.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn note_a_example_bits() {
        // Alice measured Φ+ after σ11: pre-operation Φ−, certain 11, random 01.
        let enc = OperatorEncoding::new(crate::swap::Alphabet::Pauli4, 0).unwrap();
        let code = BellCode::default();
        let mut kb = KeyBits::default();
        sender_view(&enc, &code, PauliOp::Sigma11, BellOutcome::PhiPlus, &mut kb);
        assert_eq!(kb.certain.to_string(), "11");
        assert_eq!(kb.random.to_string(), "01");

        // Bob measured Ψ− after σ1: pre-operation Φ−, certain 1, random 01.
        let enc = OperatorEncoding::new(crate::swap::Alphabet::BitFlip, 0).unwrap();
        let mut kb = KeyBits::default();
        sender_view(
            &enc,
            &code,
            PauliOp::Sigma01,
            BellOutcome::PsiMinus,
            &mut kb,
        );
        assert_eq!(kb.certain.to_string(), "1");
        assert_eq!(kb.random.to_string(), "01");
    }

    #[test]
    fn keys_agree_and_have_expected_lengths() {
        let cfg = SessionConfig::new(25, 0).with_schemes(13, 1);
        let r = run_qkd_session(&cfg, &mut seeded(4)).unwrap();
        assert!(r.keys.agree());
        assert_eq!(r.keys.alice_charlie.charlie.certain.len(), 50);
        assert_eq!(r.keys.alice_charlie.charlie.random.len(), 50);
        assert_eq!(r.keys.bob_charlie.charlie.certain.len(), 25);
        assert_eq!(r.keys.bob_charlie.charlie.random.len(), 50);
        r.transcript.validate().unwrap();
    }
}
