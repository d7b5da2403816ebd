//! Channel verification: GHZ-basis twirling, stabilizer error rates, and
//! hashing yields for deciding whether a shared ensemble is worth distilling.

mod diagonal;
mod estimate;
mod stabilizer;
mod twirl;
mod yields;

pub use diagonal::{
    diagonal_from_rates, rates_from_diagonal, GhzDiagonal, StabilizerRates, RATE_TOL,
};
pub use estimate::{
    estimate_rates, local_parity, LocalPauliSampler, RateEstimate, StabilizerSampler,
};
pub use stabilizer::{LocalPauli, StabilizerElement};
pub use twirl::{ghz_basis, ghz_diagonal, in_ghz_basis, twirl};
pub use yields::{
    channel_verdict, evaluate, shannon, yields, ChannelVerdict, Verdict, YieldReport,
};
