use rand::Rng;
use serde::{Deserialize, Serialize};

use super::scheme::{BellCode, EncodingScheme, OperatorEncoding};
use super::transcript::{EventKind, InferenceStatus, Party, Payload, Transcript};
use crate::bits::BitString;
use crate::quantum::{
    make_ghz, BellOutcome, GhzLabel, StateVector, ALICE_PAIR, BOB_PAIR, CHARLIE_PAIR,
};
use crate::rng::{seeded, SimRng};
use crate::swap::{Alphabet, DecodeEntry, DecodeTable, OpPair};
use crate::{Error, Result};

/// Parameters of one session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionConfig {
    /// Number of groups `N`; each group consumes two fresh triplets.
    pub groups: usize,
    pub initial_pair: (GhzLabel, GhzLabel),
    pub alice_scheme: usize,
    pub bob_scheme: usize,
    pub alice_alphabet: Alphabet,
    pub bob_alphabet: Alphabet,
    /// Bell-outcome-to-bits map for random key bits (see [`BellCode`]).
    pub bell_code: usize,
    pub seed: u64,
}

impl SessionConfig {
    pub fn new(groups: usize, seed: u64) -> Self {
        Self {
            groups,
            initial_pair: (GhzLabel::Pp, GhzLabel::Pp),
            alice_scheme: 0,
            bob_scheme: 0,
            alice_alphabet: Alphabet::Pauli4,
            bob_alphabet: Alphabet::BitFlip,
            bell_code: 0,
            seed,
        }
    }

    pub fn with_schemes(mut self, alice: usize, bob: usize) -> Self {
        self.alice_scheme = alice;
        self.bob_scheme = bob;
        self
    }

    pub fn with_alphabets(mut self, alice: Alphabet, bob: Alphabet) -> Self {
        self.alice_alphabet = alice;
        self.bob_alphabet = bob;
        self
    }

    pub fn with_initial_pair(mut self, g1: GhzLabel, g2: GhzLabel) -> Self {
        self.initial_pair = (g1, g2);
        self
    }

    pub fn rng(&self) -> SimRng {
        seeded(self.seed)
    }

    pub fn encoding(&self) -> Result<EncodingScheme> {
        Ok(EncodingScheme::new(
            OperatorEncoding::new(self.alice_alphabet, self.alice_scheme)?,
            OperatorEncoding::new(self.bob_alphabet, self.bob_scheme)?,
        ))
    }

    pub fn bell_code(&self) -> Result<BellCode> {
        BellCode::new(self.bell_code)
    }

    pub fn decode_table(&self) -> Result<DecodeTable> {
        let (g1, g2) = self.initial_pair;
        DecodeTable::build(g1, g2, self.alice_alphabet, self.bob_alphabet)
    }

    /// Message lengths `(alice, bob)` in bits.
    pub fn message_lengths(&self) -> (usize, usize) {
        (
            self.groups * self.alice_alphabet.bits_per_symbol(),
            self.groups * self.bob_alphabet.bits_per_symbol(),
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.groups == 0 {
            return Err(Error::Config("group count must be at least 1".into()));
        }
        self.encoding()?;
        self.bell_code()?;
        self.decode_table()?;
        Ok(())
    }
}

/// Supplies the six-qubit state `ξ(i)_123 ⊗ η(i)_456` shared in each group.
pub trait ChannelSource {
    fn prepare<R: Rng + ?Sized>(
        &mut self,
        group: usize,
        initial: (GhzLabel, GhzLabel),
        rng: &mut R,
    ) -> Result<StateVector>;
}

/// Noise-free channel: exactly the agreed GHZ pair.
#[derive(Debug, Clone, Copy, Default)]
pub struct PureChannel;

impl ChannelSource for PureChannel {
    fn prepare<R: Rng + ?Sized>(
        &mut self,
        _group: usize,
        (g1, g2): (GhzLabel, GhzLabel),
        _rng: &mut R,
    ) -> Result<StateVector> {
        make_ghz(g1).tensor(&make_ghz(g2))
    }
}

/// Applies the senders' operators to particles 1 and 2, then performs the
/// three Bell measurements in the order Alice, Bob, Charlie.
pub fn measure_group<R: Rng + ?Sized>(
    channel: &StateVector,
    ops: OpPair,
    rng: &mut R,
) -> Result<(BellOutcome, BellOutcome, BellOutcome)> {
    let state = channel
        .apply_local(ops.alice_op, ALICE_PAIR.0)?
        .apply_local(ops.bob_op, BOB_PAIR.0)?;
    let (alice, state) = state.bell_measure(ALICE_PAIR, rng)?;
    let (bob, state) = state.bell_measure(BOB_PAIR, rng)?;
    let (charlie, _) = state.bell_measure(CHARLIE_PAIR, rng)?;
    Ok((alice, bob, charlie))
}

/// Simulator-side record of one group. Only the announced outcomes are public.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupTrace {
    pub group: usize,
    pub initial: (GhzLabel, GhzLabel),
    pub ops: OpPair,
    pub alice: BellOutcome,
    pub bob: BellOutcome,
    pub charlie: BellOutcome,
    /// Charlie's inference, `None` when decoding failed.
    pub decoded: Option<DecodeEntry>,
}

impl GroupTrace {
    /// The pre-operation branch the operators actually acted on.
    pub fn true_branch(&self) -> (BellOutcome, BellOutcome, BellOutcome) {
        let (a, b) = self.ops.act_on_outcomes(self.alice, self.bob);
        (a, b, self.charlie)
    }
}

/// Runs one group of steps (3)-(8) and logs its public events.
pub(crate) fn transmit_group<R: Rng + ?Sized, S: ChannelSource>(
    initial: (GhzLabel, GhzLabel),
    ops: OpPair,
    table: &DecodeTable,
    source: &mut S,
    rng: &mut R,
    transcript: &mut Transcript,
) -> Result<GroupTrace> {
    let group = transcript.next_group();
    let channel = source.prepare(group, initial, rng)?;
    let (alice, bob, charlie) = measure_group(&channel, ops, rng)?;

    // (5) senders announce that they measured, (6) Charlie measures,
    // (7) results are declared publicly, (8) Charlie decodes.
    transcript.announce_measurement(Party::Alice, group, initial);
    transcript.announce_measurement(Party::Bob, group, initial);
    transcript.announce_measurement(Party::Charlie, group, initial);
    transcript.declare_result(Party::Alice, group, alice);
    transcript.declare_result(Party::Bob, group, bob);

    let decoded = table.lookup(charlie, (alice, bob)).ok();
    transcript.record(
        Party::Charlie,
        EventKind::Inference,
        Payload::Inference {
            group,
            status: if decoded.is_some() {
                InferenceStatus::Decoded
            } else {
                InferenceStatus::DecodeFailure
            },
        },
    );
    Ok(GroupTrace {
        group,
        initial,
        ops,
        alice,
        bob,
        charlie,
        decoded,
    })
}

/// Outcome of a direct-communication session.
#[derive(Debug, Clone, PartialEq)]
pub struct QsdcReport {
    /// Bits Charlie read from Alice, over successfully decoded groups.
    pub alice_bits: BitString,
    /// Bits Charlie read from Bob, over successfully decoded groups.
    pub bob_bits: BitString,
    pub groups: Vec<GroupTrace>,
    /// Groups aborted because the announced pair was not decodable.
    pub failed_groups: Vec<usize>,
    pub transcript: Transcript,
}

impl QsdcReport {
    pub fn is_complete(&self) -> bool {
        self.failed_groups.is_empty()
    }
}

fn check_message(msg: &BitString, expected: usize) -> Result<()> {
    if msg.len() != expected {
        return Err(Error::MessageLength {
            expected,
            actual: msg.len(),
        });
    }
    Ok(())
}

/// Direct transmission of `alice_message` and `bob_message` to Charlie over
/// noise-free channels, seeded from `config.seed`.
pub fn run_qsdc_session(
    config: &SessionConfig,
    alice_message: &BitString,
    bob_message: &BitString,
) -> Result<QsdcReport> {
    let mut rng = config.rng();
    let mut transcript = Transcript::new();
    let encoding = config.encoding()?;
    run_qsdc_with(
        config,
        &encoding,
        alice_message,
        bob_message,
        &mut PureChannel,
        &mut rng,
        &mut transcript,
    )
}

/// Session body with an explicit channel source, random source and Charlie's
/// view of the encoding (which may come from scheme negotiation).
pub fn run_qsdc_with<R: Rng + ?Sized, S: ChannelSource>(
    config: &SessionConfig,
    charlie_encoding: &EncodingScheme,
    alice_message: &BitString,
    bob_message: &BitString,
    source: &mut S,
    rng: &mut R,
    transcript: &mut Transcript,
) -> Result<QsdcReport> {
    config.validate()?;
    let (alice_len, bob_len) = config.message_lengths();
    check_message(alice_message, alice_len)?;
    check_message(bob_message, bob_len)?;
    let senders = config.encoding()?;
    let table = config.decode_table()?;
    let (wa, wb) = (
        config.alice_alphabet.bits_per_symbol(),
        config.bob_alphabet.bits_per_symbol(),
    );

    let mut report = QsdcReport {
        alice_bits: BitString::new(),
        bob_bits: BitString::new(),
        groups: Vec::with_capacity(config.groups),
        failed_groups: Vec::new(),
        transcript: Transcript::new(),
    };
    for i in 0..config.groups {
        let ops = OpPair::new(
            senders
                .alice
                .op_for(alice_message.value_at(i * wa, wa) as u8)?,
            senders.bob.op_for(bob_message.value_at(i * wb, wb) as u8)?,
        );
        let trace = transmit_group(config.initial_pair, ops, &table, source, rng, transcript)?;
        match trace.decoded {
            Some(entry) => {
                let sa = charlie_encoding.alice.symbol_of(entry.ops.alice_op);
                let sb = charlie_encoding.bob.symbol_of(entry.ops.bob_op);
                match (sa, sb) {
                    (Some(sa), Some(sb)) => {
                        report.alice_bits.push_value(usize::from(sa), wa);
                        report.bob_bits.push_value(usize::from(sb), wb);
                    }
                    _ => report.failed_groups.push(trace.group),
                }
            }
            None => report.failed_groups.push(trace.group),
        }
        report.groups.push(trace);
    }
    report.transcript = transcript.clone();
    Ok(report)
}
