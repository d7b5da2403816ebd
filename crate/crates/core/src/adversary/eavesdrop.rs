use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::protocol::{
    transmit_group, EncodingScheme, GroupTrace, OperatorEncoding, Party, PureChannel,
    SessionConfig, Transcript,
};
use crate::quantum::{BellOutcome, GhzLabel};
use crate::swap::{decompose, op_pairs, Alphabet, DecodeTable, OpPair};
use crate::Result;

type Branch = (BellOutcome, BellOutcome, BellOutcome);

/// What a listener on the public channel learns about one group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EveObservation {
    pub initial: (GhzLabel, GhzLabel),
    pub alice: BellOutcome,
    pub bob: BellOutcome,
    /// Operator alphabets are part of the protocol, not of the secret scheme.
    pub alphabets: (Alphabet, Alphabet),
}

impl EveObservation {
    /// Reads group `group` from a transcript; `None` if it was not announced.
    pub fn from_transcript(
        transcript: &Transcript,
        group: usize,
        alphabets: (Alphabet, Alphabet),
    ) -> Option<Self> {
        Some(Self {
            initial: transcript.initial_pair(group)?,
            alice: transcript.declared(Party::Alice, group)?,
            bob: transcript.declared(Party::Bob, group)?,
            alphabets,
        })
    }

    /// Pre-operation branches that some allowed operator pair maps onto the
    /// announced outcomes, with that operator pair.
    pub fn candidates(&self) -> Vec<(Branch, OpPair)> {
        let (g1, g2) = self.initial;
        let (a, b) = self.alphabets;
        let mut out = Vec::new();
        for term in decompose(g1, g2) {
            for ops in op_pairs(a, b) {
                if ops.act_on_outcomes(term.alice, term.bob) == (self.alice, self.bob) {
                    out.push((term.outcomes(), ops));
                }
            }
        }
        out
    }
}

/// Extra knowledge handed to the eavesdropper in leak experiments.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Leak {
    pub charlie: Option<BellOutcome>,
    pub scheme: Option<EncodingScheme>,
}

/// Picks a candidate uniformly, restricted to Charlie's outcome when leaked.
pub fn eve_guess_branch<R: Rng + ?Sized>(
    obs: &EveObservation,
    leak: &Leak,
    rng: &mut R,
) -> Option<(Branch, OpPair)> {
    let candidates: Vec<_> = obs
        .candidates()
        .into_iter()
        .filter(|(branch, _)| leak.charlie.is_none_or(|c| branch.2 == c))
        .collect();
    candidates.choose(rng).copied()
}

/// Best guess at the symbols sent in one group: a candidate operator pair
/// read through the leaked scheme, or through a uniformly chosen one.
pub fn eve_message_guess<R: Rng + ?Sized>(
    obs: &EveObservation,
    leak: &Leak,
    rng: &mut R,
) -> Result<(BitString, BitString)> {
    let (a, b) = obs.alphabets;
    let scheme = match &leak.scheme {
        Some(s) => s.clone(),
        None => EncodingScheme::new(
            OperatorEncoding::new(a, rng.random_range(0..OperatorEncoding::count(a)))?,
            OperatorEncoding::new(b, rng.random_range(0..OperatorEncoding::count(b)))?,
        ),
    };
    let ops = match eve_guess_branch(obs, leak, rng) {
        Some((_, ops)) => ops,
        None => OpPair::new(
            *a.ops().choose(rng).expect("non-empty"),
            *b.ops().choose(rng).expect("non-empty"),
        ),
    };
    let symbol = |enc: &OperatorEncoding, op| enc.symbol_of(op).map(usize::from).unwrap_or(0);
    Ok((
        BitString::from_value(symbol(&scheme.alice, ops.alice_op), a.bits_per_symbol()),
        BitString::from_value(symbol(&scheme.bob, ops.bob_op), b.bits_per_symbol()),
    ))
}

/// Repeated single-group experiments under one session configuration.
#[derive(Debug, Clone)]
pub struct EveExperiment {
    initial: (GhzLabel, GhzLabel),
    alphabets: (Alphabet, Alphabet),
    senders: EncodingScheme,
    table: DecodeTable,
}

impl EveExperiment {
    pub fn new(config: &SessionConfig) -> Result<Self> {
        Ok(Self {
            initial: config.initial_pair,
            alphabets: (config.alice_alphabet, config.bob_alphabet),
            senders: config.encoding()?,
            table: config.decode_table()?,
        })
    }

    /// One honest group carrying uniformly random symbols, as seen by both
    /// the simulator and the eavesdropper.
    fn honest_group<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
    ) -> Result<(GroupTrace, EveObservation, BitString, BitString)> {
        let (a, b) = self.alphabets;
        let (sa, sb) = (rng.random_range(0..a.size()), rng.random_range(0..b.size()));
        let ops = OpPair::new(
            self.senders.alice.op_for(sa as u8)?,
            self.senders.bob.op_for(sb as u8)?,
        );
        let mut transcript = Transcript::new();
        let trace = transmit_group(
            self.initial,
            ops,
            &self.table,
            &mut PureChannel,
            rng,
            &mut transcript,
        )?;
        let obs = EveObservation::from_transcript(&transcript, trace.group, self.alphabets)
            .expect("group was announced");
        Ok((
            trace,
            obs,
            BitString::from_value(sa, a.bits_per_symbol()),
            BitString::from_value(sb, b.bits_per_symbol()),
        ))
    }

    /// Does Eve name the true pre-operation branch of a fresh group?
    pub fn state_guess<R: Rng + ?Sized>(&self, leak_charlie: bool, rng: &mut R) -> Result<bool> {
        let (trace, obs, _, _) = self.honest_group(rng)?;
        let leak = Leak {
            charlie: leak_charlie.then_some(trace.charlie),
            scheme: None,
        };
        Ok(eve_guess_branch(&obs, &leak, rng)
            .is_some_and(|(branch, _)| branch == trace.true_branch()))
    }

    /// Hits on (Alice's symbol, Bob's symbol) for a fresh group.
    pub fn message_guess<R: Rng + ?Sized>(
        &self,
        full_info: bool,
        rng: &mut R,
    ) -> Result<(bool, bool)> {
        let (trace, obs, alice_bits, bob_bits) = self.honest_group(rng)?;
        let leak = if full_info {
            Leak {
                charlie: Some(trace.charlie),
                scheme: Some(self.senders.clone()),
            }
        } else {
            Leak::default()
        };
        let (ga, gb) = eve_message_guess(&obs, &leak, rng)?;
        Ok((ga == alice_bits, gb == bob_bits))
    }
}

/// Single state-guess trial; see [`EveExperiment::state_guess`].
pub fn eve_guess_trial<R: Rng + ?Sized>(
    config: &SessionConfig,
    leak_charlie: bool,
    rng: &mut R,
) -> Result<bool> {
    EveExperiment::new(config)?.state_guess(leak_charlie, rng)
}

/// Single message-guess trial; see [`EveExperiment::message_guess`].
pub fn eve_message_trial<R: Rng + ?Sized>(
    config: &SessionConfig,
    full_info: bool,
    rng: &mut R,
) -> Result<(bool, bool)> {
    EveExperiment::new(config)?.message_guess(full_info, rng)
}
