//! Eavesdropper models: a listener on the public announcements and an
//! interferer on the distribution of GHZ triplets.

mod eavesdrop;
mod harness;
mod tamper;

pub use eavesdrop::{
    eve_guess_branch, eve_guess_trial, eve_message_guess, eve_message_trial, EveExperiment,
    EveObservation, Leak,
};
pub use harness::{monte_carlo, AttackStats};
pub use tamper::{
    apply_tamper, fidelity_to_pp, ChannelState, CouplingBasis, TamperModel, TamperedChannel,
};
