//! End-to-end tests of the `kite` binary: exit codes, output files,
//! determinism across reruns and thread counts.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn kite() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kite"))
}

fn write_config(dir: &Path, name: &str, body: &serde_json::Value) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string_pretty(body).unwrap()).unwrap();
    path
}

fn run_ok(mut cmd: Command) -> Output {
    let out = cmd.output().unwrap();
    assert!(
        out.status.success(),
        "expected success, got {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn assert_config_error(mut cmd: Command) {
    let out = cmd.output().unwrap();
    assert_eq!(out.status.code(), Some(1), "expected exit code 1");
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("config error"), "stderr was: {err}");
}

fn build_config(seed: u64) -> serde_json::Value {
    serde_json::json!({
        "code": { "k": 189, "variant": "improved", "seed": seed },
        "q_source": "formula"
    })
}

#[test]
fn build_is_deterministic_and_seed_sensitive() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "build.json", &build_config(5));

    for sub in ["a", "b"] {
        run_ok({
            let mut c = kite();
            c.args(["build", "--config"])
                .arg(&cfg)
                .arg("--out")
                .arg(dir.path().join(sub).join("code"));
            c
        });
    }
    let alist_a = fs::read(dir.path().join("a/code.alist")).unwrap();
    let alist_b = fs::read(dir.path().join("b/code.alist")).unwrap();
    assert_eq!(
        alist_a, alist_b,
        "same config must rebuild the identical matrix"
    );
    assert_eq!(
        fs::read(dir.path().join("a/code.json")).unwrap(),
        fs::read(dir.path().join("b/code.json")).unwrap()
    );
    // k = 189: n = 3780 coded bits, 3591 parity rows.
    let text = String::from_utf8(alist_a.clone()).unwrap();
    assert_eq!(text.lines().next().unwrap(), "3780 3591");

    // A --seed flag overrides the config seed and must change the matrix.
    run_ok({
        let mut c = kite();
        c.args(["build", "--config"])
            .arg(&cfg)
            .args(["--seed", "6", "--out"])
            .arg(dir.path().join("c").join("code"));
        c
    });
    let alist_c = fs::read(dir.path().join("c/code.alist")).unwrap();
    assert_ne!(alist_a, alist_c);
    let meta: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("c/code.json")).unwrap()).unwrap();
    assert_eq!(meta["seed"], 6);
    assert!(meta["digest"].as_str().unwrap().len() == 64);
}

#[test]
fn config_errors_exit_one() {
    let dir = TempDir::new().unwrap();

    // k below the minimum.
    let bad_k = write_config(
        dir.path(),
        "bad_k.json",
        &serde_json::json!({
            "code": { "k": 19, "variant": "improved", "seed": 0 },
            "q_source": "formula"
        }),
    );
    assert_config_error({
        let mut c = kite();
        c.args(["build", "--config"])
            .arg(&bad_k)
            .arg("--out")
            .arg(dir.path().join("x"));
        c
    });

    // Unknown key.
    let unknown = write_config(
        dir.path(),
        "unknown.json",
        &serde_json::json!({
            "code": { "k": 189, "variant": "improved", "seed": 0 },
            "q_source": "formula",
            "typo_field": 1
        }),
    );
    assert_config_error({
        let mut c = kite();
        c.args(["build", "--config"])
            .arg(&unknown)
            .arg("--out")
            .arg(dir.path().join("x"));
        c
    });

    // Missing config file.
    assert_config_error({
        let mut c = kite();
        c.args(["build", "--config"])
            .arg(dir.path().join("nope.json"))
            .arg("--out")
            .arg(dir.path().join("x"));
        c
    });

    // Rate outside the supported band.
    let bad_rate = write_config(
        dir.path(),
        "bad_rate.json",
        &serde_json::json!({
            "code": { "k": 189, "variant": "improved", "seed": 0 },
            "q_source": "formula",
            "rates": [0.03],
            "ebn0_db": [4.0],
            "frames": 2,
            "seed": 1
        }),
    );
    assert_config_error({
        let mut c = kite();
        c.args(["ber", "--config"])
            .arg(&bad_rate)
            .arg("--out")
            .arg(dir.path().join("x"));
        c
    });

    // Unparsable KITE_THREADS.
    let good = write_config(dir.path(), "good.json", &build_config(5));
    let out = {
        let mut c = kite();
        c.args(["build", "--config"])
            .arg(&good)
            .arg("--out")
            .arg(dir.path().join("x"))
            .env("KITE_THREADS", "zzz");
        c
    }
    .output()
    .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn ber_sweep_is_deterministic_and_clean_at_high_snr() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "ber.json",
        &serde_json::json!({
            "code": { "k": 189, "variant": "improved", "seed": 5 },
            "q_source": "formula",
            "rates": [0.5],
            "ebn0_db": [8.0],
            "frames": 20,
            "seed": 11
        }),
    );
    let mut runs = Vec::new();
    for (sub, threads) in [("a", None), ("b", None), ("t2", Some("2"))] {
        run_ok({
            let mut c = kite();
            c.args(["ber", "--config"])
                .arg(&cfg)
                .arg("--out")
                .arg(dir.path().join(sub));
            if let Some(t) = threads {
                c.args(["--threads", t]);
            }
            c
        });
        runs.push(fs::read(dir.path().join(format!("{sub}.csv"))).unwrap());
    }
    assert_eq!(runs[0], runs[1], "rerun must be byte-identical");
    assert_eq!(runs[0], runs[2], "thread count must not change results");

    let text = String::from_utf8(runs[0].clone()).unwrap();
    assert!(text.starts_with("# kite ber\n"));
    assert!(text.lines().any(|l| l.starts_with("# digest=")));
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(
        data[0],
        "rate,ebn0_db,n,frames,bits,bit_errors,ber,ci95,fer"
    );
    let fields: Vec<&str> = data[1].split(',').collect();
    assert_eq!(fields[0], "0.5");
    assert_eq!(fields[2], "378");
    assert_eq!(fields[6], "0", "8 dB at rate 1/2 must be error-free");
}

#[test]
fn harq_emits_session_and_summary_rows() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "harq.json",
        &serde_json::json!({
            "code": { "k": 189, "variant": "improved", "seed": 5 },
            "q_source": "formula",
            "esn0_db": [20.0],
            "frames": 3,
            "seed": 12
        }),
    );
    run_ok({
        let mut c = kite();
        c.args(["harq", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(dir.path().join("h"));
        c
    });
    let text = fs::read_to_string(dir.path().join("h.csv")).unwrap();
    let sessions: Vec<&str> = text.lines().filter(|l| l.starts_with("session,")).collect();
    let summaries: Vec<&str> = text.lines().filter(|l| l.starts_with("summary,")).collect();
    assert_eq!(sessions.len(), 3);
    assert_eq!(summaries.len(), 1);
    // At 20 dB every session stops at the first transmission: n_18 = 210,
    // eta = 189/210 = 0.9.
    for s in &sessions {
        let f: Vec<&str> = s.split(',').collect();
        assert_eq!(f[6], "210");
        assert_eq!(f[7], "1");
        assert_eq!(f[10], "0.9");
    }
    let f: Vec<&str> = summaries[0].split(',').collect();
    assert_eq!(f[12], "0.9", "summary mean_eta");
    assert_eq!(f[14], "0", "failure rate");
}

#[test]
fn optimize_with_one_eval_budget_reports_midpoints() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "opt.json",
        &serde_json::json!({
            "k": 40,
            "seed": 3,
            "frames": 2,
            "max_evals_per_level": 1
        }),
    );
    run_ok({
        let mut c = kite();
        c.args(["optimize", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(dir.path().join("opt"));
        c
    });
    let doc: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("opt.json")).unwrap()).unwrap();
    assert_eq!(doc["any_budget_exhausted"], true);
    let levels = doc["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 19);
    // Budget below one bracket shrink: the search reports the midpoint of
    // the default bracket (1/(10k), 0.2) without running any simulation.
    let midpoint = (1.0 / 400.0 + 0.2) / 2.0;
    for lt in levels {
        assert_eq!(lt["evaluations"], 0);
        assert_eq!(lt["budget_exhausted"], true);
        let q = lt["q"].as_f64().unwrap();
        assert!(
            (q - midpoint).abs() < 1e-12,
            "q={q} != bracket midpoint {midpoint}"
        );
    }
    // No evaluations anywhere: past the `#` metadata, the trace is just
    // its column header.
    let trace = fs::read_to_string(dir.path().join("opt.trace.csv")).unwrap();
    let rows: Vec<&str> = trace.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows, ["level,eval,q,ber"]);
}
