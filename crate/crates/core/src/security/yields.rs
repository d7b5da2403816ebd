use serde::{Deserialize, Serialize};

use super::GhzDiagonal;

/// Shannon entropy in bits; zero-probability entries contribute nothing.
pub fn shannon(probs: impl IntoIterator<Item = f64>) -> f64 {
    probs
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

fn marginal(d: &GhzDiagonal, key: impl Fn(usize) -> usize, size: usize) -> Vec<f64> {
    let mut out = vec![0.0; size];
    for (x, p) in d.probs().iter().enumerate() {
        out[key(x)] += p;
    }
    out
}

/// Distill or discard decision for an ensemble of channel copies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "decision", rename_all = "lowercase")]
pub enum Verdict {
    Distill { count: u64 },
    Discard,
}

/// Verdict for `ensemble` copies along with both yields it was judged on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelVerdict {
    pub ensemble: u64,
    pub d_h: f64,
    pub d_h_prime: f64,
    #[serde(flatten)]
    pub verdict: Verdict,
}

/// Entropies (bits) of the label distribution and the two hashing yields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YieldReport {
    pub h_b0: f64,
    pub h_b1: f64,
    pub h_b2: f64,
    pub h_b2_given_b1: f64,
    pub i_b0_b12: f64,
    pub d_h: f64,
    pub d_h_prime: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub verdict: Option<ChannelVerdict>,
}

pub fn yields(d: &GhzDiagonal) -> YieldReport {
    let h_b0 = shannon(marginal(d, |x| x >> 2, 2));
    let h_b1 = shannon(marginal(d, |x| (x >> 1) & 1, 2));
    let h_b2 = shannon(marginal(d, |x| x & 1, 2));
    let h_b12 = shannon(marginal(d, |x| x & 0b11, 4));
    let h_all = shannon(d.probs().iter().copied());
    let h_b2_given_b1 = (h_b12 - h_b1).max(0.0);
    let i_b0_b12 = (h_b0 + h_b12 - h_all).max(0.0);
    YieldReport {
        h_b0,
        h_b1,
        h_b2,
        h_b2_given_b1,
        i_b0_b12,
        d_h: 1.0 - h_b1.max(h_b2) - h_b0,
        d_h_prime: 1.0 - h_b1.max(h_b2_given_b1) - h_b0 + i_b0_b12,
        verdict: None,
    }
}

/// Distill `floor(N' D_h')` copies when `D_h' > 0`, otherwise discard.
pub fn channel_verdict(d: &GhzDiagonal, ensemble: u64) -> ChannelVerdict {
    let report = yields(d);
    let verdict = if report.d_h_prime > 0.0 {
        Verdict::Distill {
            count: (ensemble as f64 * report.d_h_prime).floor() as u64,
        }
    } else {
        Verdict::Discard
    };
    ChannelVerdict {
        ensemble,
        d_h: report.d_h,
        d_h_prime: report.d_h_prime,
        verdict,
    }
}

/// [`yields`] with the verdict for `ensemble` copies attached.
pub fn evaluate(d: &GhzDiagonal, ensemble: u64) -> YieldReport {
    YieldReport {
        verdict: Some(channel_verdict(d, ensemble)),
        ..yields(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::GhzLabel;

    #[test]
    fn pure_channel() {
        let r = evaluate(&GhzDiagonal::point(GhzLabel::Pp), 100);
        assert_eq!((r.h_b0, r.h_b1, r.h_b2), (0.0, 0.0, 0.0));
        assert_eq!((r.d_h, r.d_h_prime), (1.0, 1.0));
        assert_eq!(r.verdict.unwrap().verdict, Verdict::Distill { count: 100 });
    }

    #[test]
    fn uniform_channel() {
        let r = evaluate(&GhzDiagonal::uniform(), 100);
        assert!((r.h_b0 - 1.0).abs() < 1e-12 && (r.h_b1 - 1.0).abs() < 1e-12);
        assert!((r.d_h + 1.0).abs() < 1e-12);
        assert_eq!(r.verdict.unwrap().verdict, Verdict::Discard);
    }

    #[test]
    fn verdict_json() {
        let v = channel_verdict(&GhzDiagonal::point(GhzLabel::Pp), 7);
        let json = serde_json::to_value(v).unwrap();
        assert_eq!(json["decision"], "distill");
        assert_eq!(json["count"], 7);
        let v = channel_verdict(&GhzDiagonal::uniform(), 7);
        assert_eq!(serde_json::to_value(v).unwrap()["decision"], "discard");
    }
}
