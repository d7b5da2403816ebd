use rand::Rng;
use serde::{Deserialize, Serialize};

use super::scheme::{EncodingScheme, OperatorEncoding};
use super::session::{run_qsdc_with, ChannelSource, PureChannel, QsdcReport, SessionConfig};
use super::transcript::{EventKind, InferenceStatus, Party, Payload, Transcript};
use crate::bits::BitString;
use crate::quantum::{BellOutcome, GhzLabel};
use crate::swap::decompose;
use crate::{Error, Result};

fn slot(party: Party) -> usize {
    party as usize
}

/// Outcome of `target` implied by the swapping table, given one party's own
/// outcome and another party's announced outcome.
pub fn infer_partner(
    initial: (GhzLabel, GhzLabel),
    own: (Party, BellOutcome),
    announced: (Party, BellOutcome),
    target: Party,
) -> Result<BellOutcome> {
    let candidates: Vec<BellOutcome> = decompose(initial.0, initial.1)
        .iter()
        .map(|t| [t.alice, t.bob, t.charlie])
        .filter(|o| o[slot(own.0)] == own.1 && o[slot(announced.0)] == announced.1)
        .map(|o| o[slot(target)])
        .collect();
    match candidates.as_slice() {
        [only] => Ok(*only),
        other => Err(Error::InferenceAmbiguity(other.len())),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeygenTrace {
    pub group: usize,
    /// Outcomes of Alice, Bob and Charlie.
    pub outcomes: [BellOutcome; 3],
    /// First holder's inference of the second holder's outcome.
    pub first_inferred: BellOutcome,
    /// Second holder's inference of the first holder's outcome.
    pub second_inferred: BellOutcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KeygenReport {
    pub announcer: Party,
    /// Key holders in party order; key bits encode the first holder's outcome.
    pub holders: (Party, Party),
    pub first_key: BitString,
    pub second_key: BitString,
    pub groups: Vec<KeygenTrace>,
    pub transcript: Transcript,
}

impl KeygenReport {
    pub fn keys_agree(&self) -> bool {
        self.first_key == self.second_key
    }

    /// Whether every inference matched the partner's true outcome.
    pub fn inferences_correct(&self) -> bool {
        let (a, b) = self.holders;
        self.groups.iter().all(|g| {
            g.first_inferred == g.outcomes[slot(b)] && g.second_inferred == g.outcomes[slot(a)]
        })
    }
}

fn holders_for(announcer: Party) -> (Party, Party) {
    let mut rest = Party::ALL.into_iter().filter(|&p| p != announcer);
    let first = rest.next().expect("three parties");
    let second = rest.next().expect("three parties");
    (first, second)
}

/// Secret-key generation between two parties with the help of the third:
/// everyone Bell-measures, `announcer` publishes, and the two holders infer
/// each other's outcome. Runs `config.groups` groups.
pub fn run_keygen_subprotocol<R: Rng + ?Sized>(
    config: &SessionConfig,
    announcer: Party,
    rng: &mut R,
) -> Result<KeygenReport> {
    let mut transcript = Transcript::new();
    keygen_into(
        config,
        announcer,
        config.groups,
        &mut PureChannel,
        rng,
        &mut transcript,
    )
}

pub(crate) fn keygen_into<R: Rng + ?Sized, S: ChannelSource>(
    config: &SessionConfig,
    announcer: Party,
    groups: usize,
    source: &mut S,
    rng: &mut R,
    transcript: &mut Transcript,
) -> Result<KeygenReport> {
    let code = config.bell_code()?;
    let initial = config.initial_pair;
    let (first, second) = holders_for(announcer);
    let mut report = KeygenReport {
        announcer,
        holders: (first, second),
        first_key: BitString::new(),
        second_key: BitString::new(),
        groups: Vec::with_capacity(groups),
        transcript: Transcript::new(),
    };

    for _ in 0..groups {
        let group = transcript.next_group();
        let mut state = source.prepare(group, initial, rng)?;
        let mut outcomes = [BellOutcome::PhiPlus; 3];
        for party in Party::ALL {
            let (outcome, post) = state.bell_measure(party.qubits(), rng)?;
            outcomes[slot(party)] = outcome;
            state = post;
            transcript.announce_measurement(party, group, initial);
        }
        let announced = (announcer, outcomes[slot(announcer)]);
        transcript.declare_result(announcer, group, announced.1);

        let first_inferred =
            infer_partner(initial, (first, outcomes[slot(first)]), announced, second)?;
        let second_inferred =
            infer_partner(initial, (second, outcomes[slot(second)]), announced, first)?;
        for party in [first, second] {
            transcript.record(
                party,
                EventKind::Inference,
                Payload::Inference {
                    group,
                    status: InferenceStatus::Inferred,
                },
            );
        }
        report
            .first_key
            .push_value(usize::from(code.symbol(outcomes[slot(first)])), 2);
        report
            .second_key
            .push_value(usize::from(code.symbol(second_inferred)), 2);
        report.groups.push(KeygenTrace {
            group,
            outcomes,
            first_inferred,
            second_inferred,
        });
    }
    report.transcript = transcript.clone();
    Ok(report)
}

/// Bits needed to send a scheme index for an alphabet.
fn index_width(alphabet: crate::swap::Alphabet) -> usize {
    let count = OperatorEncoding::count(alphabet);
    (usize::BITS - (count - 1).leading_zeros()) as usize
}

/// Result of exchanging the secret encodings over one-time-pad keys.
#[derive(Debug, Clone, PartialEq)]
pub struct Negotiation {
    /// Encoding as recovered by Charlie.
    pub charlie_view: EncodingScheme,
    pub alice_keygen: KeygenReport,
    pub bob_keygen: KeygenReport,
}

/// Alice and Bob each send their scheme index to Charlie, one-time-padded with
/// a key from [`run_keygen_subprotocol`] (Bob helps Alice, Alice helps Bob).
pub fn negotiate_schemes<R: Rng + ?Sized>(
    config: &SessionConfig,
    rng: &mut R,
    transcript: &mut Transcript,
) -> Result<Negotiation> {
    config.validate()?;
    let senders = config.encoding()?;
    let mut recovered = Vec::with_capacity(2);
    let mut keygens = Vec::with_capacity(2);
    for (sender, helper, enc) in [
        (Party::Alice, Party::Bob, &senders.alice),
        (Party::Bob, Party::Alice, &senders.bob),
    ] {
        let width = index_width(enc.alphabet());
        let keygen = keygen_into(
            config,
            helper,
            width.div_ceil(2),
            &mut PureChannel,
            rng,
            transcript,
        )?;
        // The sender is always the first holder in party order.
        debug_assert_eq!(keygen.holders, (sender, Party::Charlie));
        let plain = BitString::from_value(enc.index(), width);
        let ciphertext = plain.xor(&keygen.first_key.slice(0, width));
        transcript.record(
            sender,
            EventKind::KeyBit,
            Payload::Ciphertext {
                purpose: format!("{sender}-scheme"),
                width,
                ciphertext: ciphertext.clone(),
            },
        );
        let decrypted = ciphertext.xor(&keygen.second_key.slice(0, width));
        recovered.push(OperatorEncoding::new(
            enc.alphabet(),
            decrypted.value_at(0, width),
        )?);
        keygens.push(keygen);
    }
    let bob_keygen = keygens.pop().expect("two keygens");
    let alice_keygen = keygens.pop().expect("two keygens");
    let bob_view = recovered.pop().expect("two encodings");
    let alice_view = recovered.pop().expect("two encodings");
    Ok(Negotiation {
        charlie_view: EncodingScheme::new(alice_view, bob_view),
        alice_keygen,
        bob_keygen,
    })
}

/// Scheme negotiation followed by direct transmission, on one transcript and
/// one random stream seeded from `config.seed`.
pub fn run_full_session(
    config: &SessionConfig,
    alice_message: &BitString,
    bob_message: &BitString,
) -> Result<QsdcReport> {
    let mut rng = config.rng();
    let mut transcript = Transcript::new();
    let negotiation = negotiate_schemes(config, &mut rng, &mut transcript)?;
    run_qsdc_with(
        config,
        &negotiation.charlie_view,
        alice_message,
        bob_message,
        &mut PureChannel,
        &mut rng,
        &mut transcript,
    )
}
