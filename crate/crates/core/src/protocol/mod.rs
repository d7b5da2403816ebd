//! Party state machines and session orchestration.
//!
//! Three modes share the same per-group machinery: direct message transmission
//! ([`run_qsdc_session`]), key distribution ([`run_qkd_session`]) and the
//! helper-assisted key generation used to exchange encoding schemes
//! ([`run_keygen_subprotocol`], [`negotiate_schemes`]).

mod keygen;
mod qkd;
mod scheme;
mod session;
mod transcript;

pub use keygen::{
    infer_partner, negotiate_schemes, run_full_session, run_keygen_subprotocol, KeygenReport,
    KeygenTrace, Negotiation,
};
pub use qkd::{run_qkd_session, run_qkd_with, KeyBits, KeyMaterial, QkdReport, SharedKey};
pub use scheme::{
    rank_permutation, scheme_from_index, unrank_permutation, BellCode, EncodingScheme,
    OperatorEncoding,
};
pub(crate) use session::transmit_group;
pub use session::{
    measure_group, run_qsdc_session, run_qsdc_with, ChannelSource, GroupTrace, PureChannel,
    QsdcReport, SessionConfig,
};
pub use transcript::{Event, EventKind, InferenceStatus, Party, Payload, Transcript};
