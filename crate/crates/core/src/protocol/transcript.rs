use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::quantum::{BellOutcome, GhzLabel};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    Alice,
    Bob,
    Charlie,
}

impl Party {
    pub const ALL: [Party; 3] = [Party::Alice, Party::Bob, Party::Charlie];

    /// Particles held in each group, numbered 1..=6.
    pub fn particles(self) -> [usize; 2] {
        match self {
            Party::Alice => [1, 4],
            Party::Bob => [2, 5],
            Party::Charlie => [3, 6],
        }
    }

    /// Qubit indices of the particles in a six-qubit group state.
    pub fn qubits(self) -> (usize, usize) {
        let [a, b] = self.particles();
        (a - 1, b - 1)
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Party::Alice => "alice",
            Party::Bob => "bob",
            Party::Charlie => "charlie",
        })
    }
}

impl std::str::FromStr for Party {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Party::ALL
            .into_iter()
            .find(|p| p.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown party {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    MeasurementAnnounced,
    ResultDeclared,
    Inference,
    KeyBit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InferenceStatus {
    Decoded,
    DecodeFailure,
    Inferred,
}

/// Event contents. Every payload is public: party-private values (operators,
/// Charlie's outcome, key bits) never enter the transcript.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Payload {
    Result {
        group: usize,
        particles: [usize; 2],
        outcome: BellOutcome,
    },
    Measurement {
        group: usize,
        particles: [usize; 2],
        /// Ordered pair of triplet indices making up the group.
        triplets: [usize; 2],
        initial: [GhzLabel; 2],
    },
    Inference {
        group: usize,
        status: InferenceStatus,
    },
    Ciphertext {
        purpose: String,
        width: usize,
        ciphertext: BitString,
    },
    KeyCount {
        group: usize,
        with: Party,
        certain_bits: usize,
        random_bits: usize,
    },
}

impl Payload {
    pub fn group(&self) -> Option<usize> {
        match self {
            Payload::Result { group, .. }
            | Payload::Measurement { group, .. }
            | Payload::Inference { group, .. }
            | Payload::KeyCount { group, .. } => Some(*group),
            Payload::Ciphertext { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub seq: u64,
    pub party: Party,
    pub kind: EventKind,
    pub payload: Payload,
}

/// Ordered log of the public classical channel.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Transcript {
    events: Vec<Event>,
    next_group: usize,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Allocates a fresh group number; groups are unique across a transcript.
    pub fn next_group(&mut self) -> usize {
        let g = self.next_group;
        self.next_group += 1;
        g
    }

    pub fn record(&mut self, party: Party, kind: EventKind, payload: Payload) -> u64 {
        let seq = self.events.len() as u64;
        self.events.push(Event {
            seq,
            party,
            kind,
            payload,
        });
        seq
    }

    pub(crate) fn announce_measurement(
        &mut self,
        party: Party,
        group: usize,
        initial: (GhzLabel, GhzLabel),
    ) {
        self.record(
            party,
            EventKind::MeasurementAnnounced,
            Payload::Measurement {
                group,
                particles: party.particles(),
                triplets: [2 * group, 2 * group + 1],
                initial: [initial.0, initial.1],
            },
        );
    }

    pub(crate) fn declare_result(&mut self, party: Party, group: usize, outcome: BellOutcome) {
        self.record(
            party,
            EventKind::ResultDeclared,
            Payload::Result {
                group,
                particles: party.particles(),
                outcome,
            },
        );
    }

    /// Declared outcome of `party` in `group`, if any.
    pub fn declared(&self, party: Party, group: usize) -> Option<BellOutcome> {
        self.events.iter().find_map(|e| match e.payload {
            Payload::Result {
                group: g, outcome, ..
            } if e.party == party && g == group && e.kind == EventKind::ResultDeclared => {
                Some(outcome)
            }
            _ => None,
        })
    }

    /// Initial GHZ pair announced for `group`.
    pub fn initial_pair(&self, group: usize) -> Option<(GhzLabel, GhzLabel)> {
        self.events.iter().find_map(|e| match e.payload {
            Payload::Measurement {
                group: g, initial, ..
            } if g == group => Some((initial[0], initial[1])),
            _ => None,
        })
    }

    /// Checks sequence numbering and, per group, that every declared result
    /// follows the same party's measurement announcement and Charlie's.
    pub fn validate(&self) -> Result<()> {
        for (i, e) in self.events.iter().enumerate() {
            if e.seq != i as u64 {
                return Err(Error::Config(format!(
                    "event {i} has sequence number {}",
                    e.seq
                )));
            }
            if e.kind != EventKind::ResultDeclared {
                continue;
            }
            let group = e.payload.group();
            let announced = |party: Party| {
                self.events[..i].iter().any(|p| {
                    p.party == party
                        && p.kind == EventKind::MeasurementAnnounced
                        && p.payload.group() == group
                })
            };
            if !announced(e.party) {
                return Err(Error::Config(format!(
                    "event {i}: {} declared a result before announcing the measurement",
                    e.party
                )));
            }
            if !announced(Party::Charlie) {
                return Err(Error::Config(format!(
                    "event {i}: result declared before Charlie measured"
                )));
            }
        }
        Ok(())
    }

    /// Appends another transcript, renumbering its events.
    pub fn append(&mut self, other: Transcript) {
        let offset = self.events.len() as u64;
        self.events.extend(other.events.into_iter().map(|mut e| {
            e.seq += offset;
            e
        }));
        self.next_group = self.next_group.max(other.next_group);
    }

    /// One JSON object per line: `{seq, party, kind, payload}`.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&serde_json::to_string(e).expect("events always serialize"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        let events = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| serde_json::from_str::<Event>(l).map_err(|e| Error::Config(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let next_group = events
            .iter()
            .filter_map(|e| e.payload.group())
            .max()
            .map_or(0, |g| g + 1);
        let t = Transcript { events, next_group };
        t.validate()?;
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jsonl_shape() {
        let mut t = Transcript::new();
        let g = t.next_group();
        t.announce_measurement(Party::Alice, g, (GhzLabel::Pp, GhzLabel::Pp));
        t.announce_measurement(Party::Charlie, g, (GhzLabel::Pp, GhzLabel::Pp));
        t.declare_result(Party::Alice, g, BellOutcome::PsiMinus);
        let text = t.to_jsonl();
        let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        let keys: Vec<_> = first.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["kind", "party", "payload", "seq"]);
        assert_eq!(first["kind"], "measurement-announced");
        assert_eq!(first["payload"]["initial"][0], "P+");
        let last: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
        assert_eq!(last["payload"]["outcome"], "Psi-");
        assert_eq!(Transcript::from_jsonl(&text).unwrap(), t);
    }

    #[test]
    fn result_before_charlie_is_rejected() {
        let mut t = Transcript::new();
        t.announce_measurement(Party::Alice, 0, (GhzLabel::Pp, GhzLabel::Pp));
        t.declare_result(Party::Alice, 0, BellOutcome::PhiPlus);
        assert!(t.validate().is_err());
    }

    #[test]
    fn append_renumbers() {
        let mut a = Transcript::new();
        a.announce_measurement(Party::Bob, a.next_group, (GhzLabel::Pp, GhzLabel::Pp));
        let b = a.clone();
        a.append(b);
        assert_eq!(a.events()[1].seq, 1);
        a.validate().unwrap();
    }
}
