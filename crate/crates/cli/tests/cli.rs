use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ghz-qsdc"))
        .args(args)
        .env_remove("GHZ_QSDC_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn qsdc_decodes_and_writes_transcript() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.jsonl");
    let out = run(&[
        "qsdc",
        "--n",
        "1",
        "--alice-bits",
        "11",
        "--bob-bits",
        "1",
        "--seed",
        "7",
        "--transcript",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["alice_bits"], "11");
    assert_eq!(v["bob_bits"], "1");
    let text = fs::read_to_string(&path).unwrap();
    for line in text.lines() {
        let event: Value = serde_json::from_str(line).unwrap();
        assert!(event["seq"].is_u64());
    }
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for name in ["a", "b"] {
        let t = dir.path().join(format!("{name}.jsonl"));
        let keys = dir.path().join(name);
        let out = run(&[
            "qkd",
            "--n",
            "12",
            "--seed",
            "99",
            "--alice-scheme",
            "17",
            "--transcript",
            t.to_str().unwrap(),
            "--out-dir",
            keys.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        outputs.push((
            out.stdout,
            fs::read(&t).unwrap(),
            fs::read(keys.join("alice-charlie.json")).unwrap(),
            fs::read(keys.join("bob-charlie.json")).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn seed_comes_from_environment() {
    let args = [
        "qsdc",
        "--n",
        "4",
        "--alice-bits",
        "10110001",
        "--bob-bits",
        "1011",
    ];
    let with_env = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_ghz-qsdc"))
            .args(args)
            .args(["--transcript", "/dev/stdout"])
            .env("GHZ_QSDC_SEED", seed)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(with_env("5"), with_env("5"));
    assert_ne!(with_env("5"), with_env("6"));
}

#[test]
fn qkd_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "qkd",
        "--n",
        "100",
        "--seed",
        "1",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["alice_charlie"]["certain_bits"], 200);
    assert_eq!(v["alice_charlie"]["random_bits"], 200);
    assert_eq!(v["bob_charlie"]["certain_bits"], 100);
    assert_eq!(v["bob_charlie"]["random_bits"], 200);
    let key: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("alice-charlie.json")).unwrap())
            .unwrap();
    assert_eq!(key["sender"], key["charlie"]);
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["qsdc", "--n", "0", "--alice-bits", "", "--bob-bits", ""],
        vec!["qsdc", "--n", "1", "--alice-bits", "1", "--bob-bits", "1"],
        vec!["qsdc", "--n", "1", "--alice-bits", "12", "--bob-bits", "1"],
        vec![
            "qsdc",
            "--n",
            "1",
            "--alice-bits",
            "11",
            "--bob-bits",
            "1",
            "--alice-scheme",
            "24",
        ],
        vec!["attack", "--mode", "state-guess", "--trials", "0"],
        vec!["attack", "--mode", "tamper", "--tamper-qubit", "3"],
        vec!["yield"],
        vec!["yield", "--p000", "0.5"],
        vec!["yield", "--p000", "1", "--s1", "0"],
        vec!["bogus"],
    ] {
        assert_eq!(run(&args).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn undecodable_groups_exit_two() {
    let out = run(&[
        "qsdc",
        "--n",
        "20",
        "--seed",
        "3",
        "--alice-alphabet",
        "bit-flip",
        "--bob-alphabet",
        "bit-flip",
        "--alice-bits",
        "01010101010101010101",
        "--bob-bits",
        "01010101010101010101",
        "--tamper-qubit",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!json(&out)["failed_groups"].as_array().unwrap().is_empty());
}

#[test]
fn yield_inputs_agree() {
    let pure = json(&run(&["yield", "--p000", "1"]));
    assert_eq!(pure["d_h"], 1.0);
    assert_eq!(pure["d_h_prime"], 1.0);

    let mut uniform = vec!["yield".to_string()];
    for k in 0..8 {
        uniform.push(format!("--p{k:03b}"));
        uniform.push("0.125".into());
    }
    let v = json(&run(&uniform
        .iter()
        .map(String::as_str)
        .collect::<Vec<_>>()));
    assert_eq!(v["d_h"], -1.0);
    assert_eq!(v["verdict"]["decision"], "discard");

    let diag = ["--p000", "0.9", "--p100", "0.05", "--p011", "0.05"];
    let from_diag = json(&run(&[&["yield"][..], &diag].concat()));
    let rates = &from_diag["rates"];
    let mut rate_args = vec!["yield".to_string()];
    for k in 1..=7 {
        rate_args.push(format!("--s{k}"));
        rate_args.push(rates[format!("s{k}")].to_string());
    }
    let from_rates = json(&run(&rate_args
        .iter()
        .map(String::as_str)
        .collect::<Vec<_>>()));
    let (a, b) = (
        from_diag["d_h_prime"].as_f64().unwrap(),
        from_rates["d_h_prime"].as_f64().unwrap(),
    );
    assert!((a - b).abs() < 1e-12);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rates.json");
    fs::write(&path, serde_json::to_string(rates).unwrap()).unwrap();
    let from_file = json(&run(&["yield", "--input", path.to_str().unwrap()]));
    assert!(
        (from_file["d_h"].as_f64().unwrap() - from_diag["d_h"].as_f64().unwrap()).abs() < 1e-12
    );
}

#[test]
fn attack_modes() {
    let v = json(&run(&[
        "attack",
        "--mode",
        "state-guess",
        "--trials",
        "20000",
        "--seed",
        "4",
        "--parallel",
    ]));
    assert_eq!(v["trials"], 20000);
    let rate = v["rate"].as_f64().unwrap();
    assert!((rate - 0.25).abs() < 0.015, "{rate}");
    assert!(v["ci95"].is_array());

    let leaked = json(&run(&[
        "attack",
        "--mode",
        "message-guess",
        "--trials",
        "500",
        "--leak",
    ]));
    assert_eq!(leaked["alice"]["rate"], 1.0);
    assert_eq!(leaked["bob"]["rate"], 1.0);

    let t = json(&run(&["attack", "--mode", "tamper", "--trials", "10000"]));
    assert!(t["fidelity"].as_f64().unwrap() < 1.0);
    assert!(!t["detected"].as_array().unwrap().is_empty());
}
