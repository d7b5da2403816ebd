use std::fs;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use ghz_qsdc::adversary::{
    apply_tamper, fidelity_to_pp, monte_carlo, AttackStats, EveExperiment, TamperModel,
    TamperedChannel,
};
use ghz_qsdc::bits::BitString;
use ghz_qsdc::protocol::{
    run_qkd_with, run_qsdc_with, ChannelSource, PureChannel, SessionConfig, SharedKey, Transcript,
};
use ghz_qsdc::quantum::{make_ghz, GhzLabel, StateVector};
use ghz_qsdc::rng::seeded;
use ghz_qsdc::security::{
    diagonal_from_rates, estimate_rates, evaluate, rates_from_diagonal, twirl, GhzDiagonal,
    LocalPauliSampler, StabilizerRates,
};
use rand::Rng;
use serde::Serialize;
use serde_json::json;

use crate::{AttackArgs, AttackMode, QkdArgs, QsdcArgs, SessionArgs, TamperArgs, YieldArgs};

const PROTOCOL_FAILURE: u8 = 2;

enum Channel {
    Pure(PureChannel),
    Tampered(TamperedChannel),
}

impl ChannelSource for Channel {
    fn prepare<R: Rng + ?Sized>(
        &mut self,
        group: usize,
        initial: (GhzLabel, GhzLabel),
        rng: &mut R,
    ) -> ghz_qsdc::Result<StateVector> {
        match self {
            Channel::Pure(c) => c.prepare(group, initial, rng),
            Channel::Tampered(c) => c.prepare(group, initial, rng),
        }
    }
}

impl TamperArgs {
    fn channel(&self) -> Result<Channel> {
        Ok(match self.tamper_qubit {
            None => Channel::Pure(PureChannel),
            Some(qubit) => Channel::Tampered(TamperedChannel::new(TamperModel::AncillaCoupling {
                qubit,
                angle: self.tamper_angle,
                basis: self.tamper_basis.into(),
            })?),
        })
    }
}

impl SessionArgs {
    fn config(&self) -> Result<SessionConfig> {
        let (g1, g2) = self.initial_pair;
        let config = SessionConfig::new(self.groups, self.seed)
            .with_schemes(self.alice_scheme, self.bob_scheme)
            .with_alphabets(self.alice_alphabet.into(), self.bob_alphabet.into())
            .with_initial_pair(g1, g2);
        config.validate()?;
        Ok(config)
    }

    fn write_transcript(&self, transcript: &Transcript) -> Result<()> {
        if let Some(path) = &self.transcript {
            fs::write(path, transcript.to_jsonl())
                .with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(())
    }
}

fn print_json(value: &impl Serialize) -> Result<()> {
    println!("{}", serde_json::to_string(value)?);
    Ok(())
}

fn exit_for(failed_groups: &[usize]) -> ExitCode {
    if failed_groups.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(PROTOCOL_FAILURE)
    }
}

pub fn qsdc(args: QsdcArgs) -> Result<ExitCode> {
    let config = args.session.config()?;
    let alice: BitString = args.alice_bits.parse().context("--alice-bits")?;
    let bob: BitString = args.bob_bits.parse().context("--bob-bits")?;
    let mut transcript = Transcript::new();
    let report = run_qsdc_with(
        &config,
        &config.encoding()?,
        &alice,
        &bob,
        &mut args.session.tamper.channel()?,
        &mut config.rng(),
        &mut transcript,
    )?;
    args.session.write_transcript(&transcript)?;
    print_json(&json!({
        "groups": config.groups,
        "alice_bits": report.alice_bits,
        "bob_bits": report.bob_bits,
        "failed_groups": report.failed_groups,
        "complete": report.is_complete(),
    }))?;
    eprintln!(
        "qsdc: {} groups, Charlie read alice={} bob={}, {} failed",
        config.groups,
        report.alice_bits,
        report.bob_bits,
        report.failed_groups.len()
    );
    if report.is_complete() && (report.alice_bits != alice || report.bob_bits != bob) {
        eprintln!("qsdc: decoded messages differ from the ones sent");
    }
    Ok(exit_for(&report.failed_groups))
}

fn key_summary(key: &SharedKey) -> serde_json::Value {
    json!({
        "certain_bits": key.charlie.certain.len(),
        "random_bits": key.charlie.random.len(),
        "agree": key.agree(),
    })
}

pub fn qkd(args: QkdArgs) -> Result<ExitCode> {
    let config = args.session.config()?;
    let mut transcript = Transcript::new();
    let report = run_qkd_with(
        &config,
        &mut args.session.tamper.channel()?,
        &mut config.rng(),
        &mut transcript,
    )?;
    args.session.write_transcript(&transcript)?;
    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (name, key) in [
            ("alice-charlie.json", &report.keys.alice_charlie),
            ("bob-charlie.json", &report.keys.bob_charlie),
        ] {
            let path = dir.join(name);
            fs::write(&path, serde_json::to_string_pretty(key)? + "\n")
                .with_context(|| format!("writing {}", path.display()))?;
        }
    }
    let (ac, bc) = (&report.keys.alice_charlie, &report.keys.bob_charlie);
    print_json(&json!({
        "groups": config.groups,
        "alice_charlie": key_summary(ac),
        "bob_charlie": key_summary(bc),
        "failed_groups": report.failed_groups,
    }))?;
    eprintln!(
        "qkd: alice-charlie {}+{} bits, bob-charlie {}+{} bits (certain+random), {} failed groups",
        ac.charlie.certain.len(),
        ac.charlie.random.len(),
        bc.charlie.certain.len(),
        bc.charlie.random.len(),
        report.failed_groups.len()
    );
    Ok(exit_for(&report.failed_groups))
}

fn diagonal_input(args: &YieldArgs) -> Result<GhzDiagonal> {
    let p = [
        args.p000, args.p001, args.p010, args.p011, args.p100, args.p101, args.p110, args.p111,
    ];
    let s = [
        args.s1, args.s2, args.s3, args.s4, args.s5, args.s6, args.s7,
    ];
    let given = [
        p.iter().any(Option::is_some),
        s.iter().any(Option::is_some),
        args.input.is_some(),
    ];
    match given {
        [true, false, false] => Ok(GhzDiagonal::new(p.map(|x| x.unwrap_or(0.0)))?),
        [false, true, false] => Ok(diagonal_from_rates(&StabilizerRates(
            s.map(|x| x.unwrap_or(0.0)),
        ))?),
        [false, false, true] => {
            let path = args.input.as_ref().expect("checked above");
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let value: serde_json::Value =
                serde_json::from_str(&text).context("parsing input JSON")?;
            let is_rates = value
                .as_object()
                .is_some_and(|o| o.keys().any(|k| k.starts_with('s')));
            if is_rates {
                let rates: StabilizerRates = serde_json::from_value(value)?;
                Ok(diagonal_from_rates(&rates)?)
            } else {
                Ok(serde_json::from_value(value)?)
            }
        }
        [false, false, false] => {
            bail!("give a diagonal (--p000..--p111), rates (--s1..--s7) or --input")
        }
        _ => bail!("diagonal, rate and file inputs are mutually exclusive"),
    }
}

pub fn yields(args: YieldArgs) -> Result<ExitCode> {
    let d = diagonal_input(&args)?;
    let report = evaluate(&d, args.ensemble);
    let mut out = serde_json::to_value(report)?;
    out["diagonal"] = serde_json::to_value(d)?;
    out["rates"] = serde_json::to_value(rates_from_diagonal(&d))?;
    print_json(&out)?;
    eprintln!(
        "yield: D_h = {:.6}, D_h' = {:.6}",
        report.d_h, report.d_h_prime
    );
    Ok(ExitCode::SUCCESS)
}

fn count(hits: impl Iterator<Item = bool>, trials: u64) -> AttackStats {
    AttackStats::new(trials, hits.filter(|&h| h).count() as u64)
}

pub fn attack(args: AttackArgs) -> Result<ExitCode> {
    if args.trials == 0 {
        bail!("--trials must be at least 1");
    }
    let config = SessionConfig::new(1, args.seed).with_schemes(args.alice_scheme, args.bob_scheme);
    config.validate()?;
    match args.mode {
        AttackMode::StateGuess => {
            let eve = EveExperiment::new(&config)?;
            let hits = monte_carlo(args.seed, args.trials, args.parallel, |rng| {
                eve.state_guess(args.leak, rng)
            })?;
            let stats = count(hits.into_iter(), args.trials);
            print_json(&stats)?;
            eprintln!(
                "attack: state guess rate {:.4} over {} trials",
                stats.rate, stats.trials
            );
        }
        AttackMode::MessageGuess => {
            let eve = EveExperiment::new(&config)?;
            let hits = monte_carlo(args.seed, args.trials, args.parallel, |rng| {
                eve.message_guess(args.leak, rng)
            })?;
            let alice = count(hits.iter().map(|h| h.0), args.trials);
            let bob = count(hits.iter().map(|h| h.1), args.trials);
            print_json(&json!({ "alice": alice, "bob": bob }))?;
            eprintln!(
                "attack: symbol hit rates alice {:.4}, bob {:.4}",
                alice.rate, bob.rate
            );
        }
        AttackMode::Tamper => {
            let model = TamperModel::AncillaCoupling {
                qubit: args.tamper_qubit,
                angle: args.tamper_angle,
                basis: args.tamper_basis.into(),
            };
            let rho = apply_tamper(&model, make_ghz(GhzLabel::Pp))?;
            let (_, diagonal) = twirl(&rho)?;
            let sampler = LocalPauliSampler::new(&rho)?;
            let estimate = estimate_rates(&sampler, args.trials, &mut seeded(args.seed))?;
            let detected: Vec<String> = estimate.detected(3.0).iter().map(|el| el.name()).collect();
            print_json(&json!({
                "fidelity": fidelity_to_pp(&rho)?,
                "diagonal": diagonal,
                "rates": rates_from_diagonal(&diagonal),
                "estimate": estimate,
                "detected": detected,
                "yield": evaluate(&diagonal, args.trials),
            }))?;
            eprintln!(
                "attack: {} stabilizer elements flag the channel",
                detected.len()
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}
