//! Acceptance gate. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails.
//!
//! Run with: cargo test -p ghz-qsdc --test acceptance

use std::process::ExitCode;
use std::time::Instant;

use ghz_qsdc::adversary::{
    apply_tamper, fidelity_to_pp, monte_carlo, AttackStats, CouplingBasis, EveExperiment,
    TamperModel,
};
use ghz_qsdc::bits::BitString;
use ghz_qsdc::protocol::{
    infer_partner, run_keygen_subprotocol, run_qkd_session, run_qsdc_session, BellCode, Party,
    SessionConfig,
};
use ghz_qsdc::quantum::{
    bell_triple, make_ghz, BellOutcome, DensityMatrix, GhzLabel, PauliOp, StateVector, ALICE_PAIR,
    BOB_PAIR,
};
use ghz_qsdc::rng::seeded;
use ghz_qsdc::security::{
    channel_verdict, diagonal_from_rates, estimate_rates, in_ghz_basis, rates_from_diagonal, twirl,
    yields, GhzDiagonal, LocalPauliSampler, StabilizerRates, Verdict,
};
use ghz_qsdc::swap::{
    apply_op_pair, charlie_consistent_pairs, decode, decompose, op_pairs, Alphabet, OpPair,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

/// Exact-arithmetic tolerance for amplitudes, probabilities and matrix entries.
const EXACT: f64 = 1e-12;
/// Window for the listener's state-guess rate at 10^5 trials.
const GUESS_WINDOW: (f64, f64) = (0.245, 0.255);
/// Standard errors a stabilizer rate must clear to count as a detection.
const DETECTION_Z: f64 = 3.0;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pair_state(g1: GhzLabel, g2: GhzLabel) -> StateVector {
    make_ghz(g1).tensor(&make_ghz(g2)).unwrap()
}

fn swapping_table() -> Outcome {
    let mut worst: f64 = 0.0;
    for g1 in GhzLabel::ALL {
        for g2 in GhzLabel::ALL {
            let psi = pair_state(g1, g2);
            let terms = decompose(g1, g2);
            for a in BellOutcome::ALL {
                for b in BellOutcome::ALL {
                    for c in BellOutcome::ALL {
                        let direct = bell_triple(a, b, c).inner(&psi);
                        let analytic = terms
                            .iter()
                            .find(|t| t.outcomes() == (a, b, c))
                            .map_or(0.0, |t| t.amplitude);
                        worst = worst.max((direct - Complex64::new(analytic, 0.0)).norm());
                    }
                }
            }
            for t in &terms {
                check((t.amplitude.powi(2) - 0.125).abs() < EXACT, || {
                    format!("{g1}{g2}: branch probability {}", t.amplitude.powi(2))
                })?;
            }
        }
    }
    check(worst < EXACT, || format!("max amplitude error {worst:.2e}"))?;
    check(
        decompose(GhzLabel::Pp, GhzLabel::Pp)
            .iter()
            .all(|t| t.amplitude > 0.0),
        || "P+P+ has a negative term".into(),
    )?;
    let minus = decompose(GhzLabel::Rm, GhzLabel::Pp)
        .iter()
        .filter(|t| t.amplitude < 0.0)
        .count();
    check(minus == 4, || {
        format!("R-P+ has {minus} negative terms, expected 4")
    })?;
    Ok(format!(
        "64 label pairs, max amplitude error {worst:.1e}, all branches 1/8"
    ))
}

fn worked_example() -> Outcome {
    use BellOutcome::*;
    let ops = OpPair::new(PauliOp::Sigma11, PauliOp::Sigma01);
    let encoded = make_ghz(GhzLabel::Pp)
        .apply_local(ops.alice_op, 0)
        .and_then(|s| s.apply_local(ops.bob_op, 1))
        .unwrap();
    check(
        encoded.approx_eq_up_to_phase(&make_ghz(GhzLabel::Rm), EXACT),
        || "encoded state is not R-".into(),
    )?;
    check(apply_op_pair(GhzLabel::Pp, ops).0 == GhzLabel::Rm, || {
        "label algebra disagrees".into()
    })?;

    let (ma, mb): (BitString, BitString) = ("11".parse().unwrap(), "1".parse().unwrap());
    let seed = (0..1000u64)
        .find(|&s| {
            let g = &run_qsdc_session(&SessionConfig::new(1, s), &ma, &mb)
                .unwrap()
                .groups[0];
            (g.alice, g.bob, g.charlie) == (PhiPlus, PsiMinus, PhiPlus)
        })
        .ok_or("no seed produced the announced branch")?;
    let r = run_qsdc_session(&SessionConfig::new(1, seed), &ma, &mb).unwrap();
    check(r.alice_bits == ma && r.bob_bits == mb, || {
        format!("decoded ({}, {})", r.alice_bits, r.bob_bits)
    })?;
    Ok(format!("P+ -> R- under (sigma11, sigma1); seed {seed} announces (Phi+, Psi-) with Charlie Phi+, decodes (11, 1)"))
}

/// Announced outcome of a pair, read from the state after the operators act.
fn measured_outcome(state: &StateVector, pair: (usize, usize)) -> Option<BellOutcome> {
    let p = state.bell_probabilities(pair).ok()?;
    BellOutcome::ALL
        .into_iter()
        .find(|o| (p[o.index()] - 1.0).abs() < EXACT)
}

fn decode_bijection() -> Outcome {
    let (g1, g2) = (GhzLabel::Pp, GhzLabel::Pp);
    let mut cases = 0;
    for charlie in BellOutcome::ALL {
        let mut seen = Vec::new();
        for (a, b) in charlie_consistent_pairs(charlie, g1, g2) {
            for ops in op_pairs(Alphabet::Pauli4, Alphabet::BitFlip) {
                let state = bell_triple(a, b, charlie)
                    .apply_local(ops.alice_op, 0)
                    .and_then(|s| s.apply_local(ops.bob_op, 1))
                    .unwrap();
                let announced = (
                    measured_outcome(&state, ALICE_PAIR)
                        .ok_or("Alice's pair is not a Bell state")?,
                    measured_outcome(&state, BOB_PAIR).ok_or("Bob's pair is not a Bell state")?,
                );
                check(!seen.contains(&announced), || {
                    format!("collision at Charlie {charlie}, announced {announced:?}")
                })?;
                seen.push(announced);
                let decoded = decode(charlie, announced, g1, g2).map_err(|e| e.to_string())?;
                check(decoded == ops, || {
                    format!("decoded {decoded:?}, sent {ops:?}")
                })?;
                cases += 1;
            }
        }
    }
    check(cases == 64, || format!("{cases} cases enumerated"))?;
    Ok(format!(
        "{cases} (operators, branch, Charlie) cases, 0 collisions"
    ))
}

fn end_to_end() -> Outcome {
    let mut rng = seeded(4);
    let mut sessions = 0;
    for a in 0..24 {
        for b in 0..2 {
            for m in 0..100u64 {
                let cfg = SessionConfig::new(8, m * 48 + (a * 2 + b) as u64).with_schemes(a, b);
                let ma = BitString::from_bits((0..16).map(|_| rng.random()).collect());
                let mb = BitString::from_bits((0..8).map(|_| rng.random()).collect());
                let r = run_qsdc_session(&cfg, &ma, &mb).map_err(|e| e.to_string())?;
                check(
                    r.is_complete() && r.alice_bits == ma && r.bob_bits == mb,
                    || format!("scheme ({a}, {b}) message {m} mis-decoded"),
                )?;
                sessions += 1;
            }
        }
    }
    Ok(format!("{sessions} sessions at N=8, 0 bit errors"))
}

fn adversary_bound() -> Outcome {
    let eve = EveExperiment::new(&SessionConfig::new(1, 0).with_schemes(5, 1))
        .map_err(|e| e.to_string())?;
    let trials = 100_000;
    let hits = monte_carlo(2024, trials, true, |rng| eve.state_guess(false, rng))
        .map_err(|e| e.to_string())?;
    let stats = AttackStats::new(trials, hits.iter().filter(|&&h| h).count() as u64);
    check(
        (GUESS_WINDOW.0..=GUESS_WINDOW.1).contains(&stats.rate),
        || format!("state-guess rate {}", stats.rate),
    )?;
    let leaked = monte_carlo(7, 10_000, true, |rng| eve.state_guess(true, rng))
        .map_err(|e| e.to_string())?;
    check(leaked.iter().all(|&h| h), || {
        "leaked-Charlie guess missed".into()
    })?;
    let full = monte_carlo(8, 10_000, true, |rng| eve.message_guess(true, rng))
        .map_err(|e| e.to_string())?;
    check(full.iter().all(|&(a, b)| a && b), || {
        "full-information message guess missed".into()
    })?;
    Ok(format!(
        "state guess {:.4} over {trials} trials; leaked Charlie + scheme: 1.0",
        stats.rate
    ))
}

fn keygen() -> Outcome {
    use BellOutcome::*;
    let initial = (GhzLabel::Rm, GhzLabel::Pp);
    let charlie = infer_partner(
        initial,
        (Party::Alice, PhiMinus),
        (Party::Bob, PsiPlus),
        Party::Charlie,
    )
    .map_err(|e| e.to_string())?;
    let alice = infer_partner(
        initial,
        (Party::Charlie, PhiPlus),
        (Party::Bob, PsiPlus),
        Party::Alice,
    )
    .map_err(|e| e.to_string())?;
    check(charlie == PhiPlus && alice == PhiMinus, || {
        format!("inferred Charlie {charlie}, Alice {alice}")
    })?;
    let bits = BitString::from_value(usize::from(BellCode::default().symbol(alice)), 2);
    check(bits.to_string() == "01", || format!("shared bits {bits}"))?;

    let cfg = SessionConfig::new(10_000, 6).with_initial_pair(initial.0, initial.1);
    let r = run_keygen_subprotocol(&cfg, Party::Bob, &mut cfg.rng()).map_err(|e| e.to_string())?;
    check(r.inferences_correct() && r.keys_agree(), || {
        "keygen inference failed".into()
    })?;
    Ok("Remark example infers Phi+ / Phi- with bits 01; 10^4 groups inferred 100%".into())
}

fn throughput() -> Outcome {
    let cfg = SessionConfig::new(100, 9);
    let r = run_qkd_session(&cfg, &mut cfg.rng()).map_err(|e| e.to_string())?;
    let k = &r.keys;
    check(k.agree(), || "sender and Charlie keys differ".into())?;
    let ac = (
        k.alice_charlie.charlie.certain.len(),
        k.alice_charlie.charlie.random.len(),
    );
    let bc = (
        k.bob_charlie.charlie.certain.len(),
        k.bob_charlie.charlie.random.len(),
    );
    check(ac == (200, 200) && bc == (100, 200), || {
        format!("counts {ac:?} {bc:?}")
    })?;
    Ok(format!(
        "Alice-Charlie {} certain + {} random, Bob-Charlie {} certain + {} random",
        ac.0, ac.1, bc.0, bc.1
    ))
}

fn random_density<R: Rng>(rng: &mut R) -> DensityMatrix {
    let a = DMatrix::from_fn(8, 8, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let m = &a * a.adjoint();
    let tr = m.trace();
    DensityMatrix::new(m.map(|x| x / tr)).unwrap()
}

fn twirl_properties() -> Outcome {
    let mut rng = seeded(8);
    let (mut off, mut diag, mut idem): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..100 {
        let rho = random_density(&mut rng);
        let before = in_ghz_basis(&rho).unwrap();
        let (out, _) = twirl(&rho).map_err(|e| e.to_string())?;
        let after = in_ghz_basis(&out).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                if i == j {
                    diag = diag.max((after[(i, i)] - before[(i, i)]).norm());
                } else {
                    off = off.max(after[(i, j)].norm());
                }
            }
        }
        idem = idem.max(twirl(&out).unwrap().0.max_abs_diff(&out));
    }
    check(off < EXACT && diag < EXACT && idem < EXACT, || {
        format!("off-diagonal {off:.1e}, diagonal drift {diag:.1e}, idempotence {idem:.1e}")
    })?;
    Ok(format!("100 random states: off-diagonal {off:.1e}, diagonal drift {diag:.1e}, idempotence {idem:.1e}"))
}

fn random_diagonal<R: Rng>(rng: &mut R) -> GhzDiagonal {
    let w: [f64; 8] = std::array::from_fn(|_| -(1.0 - rng.random::<f64>()).ln());
    let total: f64 = w.iter().sum();
    GhzDiagonal::new(w.map(|x| x / total)).unwrap()
}

fn rate_round_trip() -> Outcome {
    let mut rng = seeded(9);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let d = random_diagonal(&mut rng);
        let back = diagonal_from_rates(&rates_from_diagonal(&d)).map_err(|e| e.to_string())?;
        for (a, b) in d.probs().iter().zip(back.probs()) {
            worst = worst.max((a - b).abs());
        }
    }
    check(worst < EXACT, || {
        format!("max round-trip error {worst:.1e}")
    })?;
    let pure = diagonal_from_rates(&StabilizerRates([0.0; 7])).map_err(|e| e.to_string())?;
    check(pure.probs()[0] == 1.0, || {
        format!("zero rates give p000 = {}", pure.probs()[0])
    })?;
    Ok(format!(
        "10^4 random diagonals, max error {worst:.1e}; zero rates give p000 = 1"
    ))
}

fn yield_checks() -> Outcome {
    let pure = yields(&GhzDiagonal::point(GhzLabel::Pp));
    check(pure.d_h == 1.0 && pure.d_h_prime == 1.0, || {
        format!("pure yields {} / {}", pure.d_h, pure.d_h_prime)
    })?;
    let uniform = channel_verdict(&GhzDiagonal::uniform(), 1000);
    check(
        (uniform.d_h + 1.0).abs() < EXACT && uniform.verdict == Verdict::Discard,
        || format!("uniform D_h {} verdict {:?}", uniform.d_h, uniform.verdict),
    )?;
    let mut rng = seeded(10);
    let mut min_gap = f64::INFINITY;
    for _ in 0..10_000 {
        let y = yields(&random_diagonal(&mut rng));
        min_gap = min_gap.min(y.d_h_prime - y.d_h);
    }
    check(min_gap >= -EXACT, || {
        format!("D_h' - D_h reached {min_gap:.2e}")
    })?;
    Ok(format!(
        "pure 1/1, uniform D_h = -1 discard, min(D_h' - D_h) = {min_gap:.2e} over 10^4"
    ))
}

fn tamper_detection() -> Outcome {
    let mut models = vec![
        TamperModel::Replacement(DensityMatrix::maximally_mixed(3).unwrap()),
        TamperModel::Replacement(DensityMatrix::from_pure(&make_ghz(GhzLabel::Qp))),
    ];
    for qubit in 0..3 {
        for basis in [CouplingBasis::Z, CouplingBasis::X] {
            for k in 1..=16 {
                models.push(TamperModel::AncillaCoupling {
                    qubit,
                    angle: std::f64::consts::PI * f64::from(k) / 16.0,
                    basis,
                });
            }
        }
    }
    let mut rng = seeded(11);
    let mut tested = 0;
    for model in &models {
        let rho = apply_tamper(model, make_ghz(GhzLabel::Pp)).map_err(|e| e.to_string())?;
        if fidelity_to_pp(&rho).unwrap() >= 1.0 - 1e-9 {
            continue;
        }
        let sampler = LocalPauliSampler::new(&rho).map_err(|e| e.to_string())?;
        let est = estimate_rates(&sampler, 10_000, &mut rng).map_err(|e| e.to_string())?;
        check(!est.detected(DETECTION_Z).is_empty(), || {
            format!("{model:?} went undetected")
        })?;
        tested += 1;
    }
    Ok(format!(
        "{tested} tamper models, all detected at 10^4 shots (> {DETECTION_Z} s.e.)"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("swapping table exactness", swapping_table),
        ("worked example reproduction", worked_example),
        ("decode bijection", decode_bijection),
        ("end-to-end QSDC", end_to_end),
        ("adversary bound", adversary_bound),
        ("key-generation sub-protocol", keygen),
        ("throughput accounting", throughput),
        ("twirl properties", twirl_properties),
        ("rate inversion round trip", rate_round_trip),
        ("yields", yield_checks),
        ("tamper detection", tamper_detection),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS  {:>2}. {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {:>2}. {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
