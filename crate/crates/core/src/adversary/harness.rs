use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rng::{stream, SimRng};
use crate::{Error, Result};

/// Success count over independent trials with a normal-approximation 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttackStats {
    pub trials: u64,
    pub successes: u64,
    pub rate: f64,
    pub ci95: [f64; 2],
}

impl AttackStats {
    pub fn new(trials: u64, successes: u64) -> Self {
        let rate = successes as f64 / trials as f64;
        let half = 1.96 * (rate * (1.0 - rate) / trials as f64).sqrt();
        Self {
            trials,
            successes,
            rate,
            ci95: [(rate - half).max(0.0), (rate + half).min(1.0)],
        }
    }
}

/// Runs `trial` once per index with its own generator `stream(seed, i)`, so
/// the result is the same whether or not `parallel` is set.
pub fn monte_carlo<T, F>(seed: u64, trials: u64, parallel: bool, trial: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut SimRng) -> Result<T> + Sync,
{
    if trials == 0 {
        return Err(Error::Config("trial count must be at least 1".into()));
    }
    let run = |i: u64| trial(&mut stream(seed, i));
    if parallel {
        (0..trials).into_par_iter().map(run).collect()
    } else {
        (0..trials).map(run).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn parallel_matches_serial() {
        let f = |rng: &mut SimRng| Ok(rng.random::<u32>());
        let a = monte_carlo(3, 500, false, f).unwrap();
        let b = monte_carlo(3, 500, true, f).unwrap();
        assert_eq!(a, b);
        assert!(monte_carlo(3, 0, false, f).is_err());
    }

    #[test]
    fn interval_brackets_rate() {
        let s = AttackStats::new(100, 25);
        assert_eq!(s.rate, 0.25);
        assert!(s.ci95[0] < 0.25 && s.ci95[1] > 0.25);
    }
}
