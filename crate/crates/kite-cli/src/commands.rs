//! Subcommand implementations.
//!
//! Each command resolves its config into library calls, then writes outputs
//! sequentially. Every emitted file embeds the seeds in play and the
//! SHA-256 digest of the constructed matrix, so a rerun with the same config
//! is byte-for-byte reproducible.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use kite_ldpc::channel::Constellation;
use kite_ldpc::construction::{build_mother_code, save_alist, CodeSpec, CodeVariant};
use kite_ldpc::harq::{throughput_point, HarqConfig};
use kite_ldpc::optimizer::{greedy_design, ObjectiveConfig};
use kite_ldpc::sim::{simulate_ber, SimConfig};

use crate::config::{BerConfig, BuildConfig, HarqCmdConfig, OptimizeConfig};
use crate::CliError;

fn variant_name(v: CodeVariant) -> &'static str {
    match v {
        CodeVariant::Original => "original",
        CodeVariant::Improved => "improved",
    }
}

/// Resolve the output base path: the --out flag wins over the config field.
fn out_base(flag: Option<PathBuf>, cfg_out: &Option<String>) -> Result<PathBuf, CliError> {
    let base = flag
        .or_else(|| cfg_out.as_ref().map(PathBuf::from))
        .ok_or_else(|| {
            CliError::Config("no output path: set \"out\" in the config or pass --out".into())
        })?;
    if let Some(parent) = base.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)
            .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", parent.display())))?;
    }
    Ok(base)
}

fn with_ext(base: &Path, ext: &str) -> PathBuf {
    let mut s = base.as_os_str().to_os_string();
    s.push(ext);
    PathBuf::from(s)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn cmd_build(
    cfg: BuildConfig,
    seed_flag: Option<u64>,
    out_flag: Option<PathBuf>,
) -> Result<(), CliError> {
    let base = out_base(out_flag, &cfg.out)?;
    let spec = match seed_flag {
        Some(s) => cfg.code.with_seed(s),
        None => cfg.code,
    };
    let profile = cfg
        .q_source
        .profile(spec.k())
        .map_err(|e| CliError::Config(e.to_string()))?;
    let mother =
        build_mother_code(&spec, &profile).map_err(|e| CliError::Runtime(e.to_string()))?;
    let alist_path = with_ext(&base, ".alist");
    save_alist(&mother, &alist_path)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", alist_path.display())))?;
    println!(
        "wrote {} (n={}, parity rows={})",
        alist_path.display(),
        mother.n(),
        mother.r()
    );

    let meta = serde_json::json!({
        "k": spec.k(),
        "variant": variant_name(spec.variant()),
        "seed": spec.seed(),
        "boundaries": spec.boundaries(),
        "q_source": cfg.q_source.describe(),
        "profile": profile,
        "n": mother.n(),
        "parity_rows": mother.r(),
        "ones": mother.ones(),
        "digest": mother.digest(),
    });
    let text = serde_json::to_string_pretty(&meta).map_err(|e| CliError::Runtime(e.to_string()))?;
    write_file(&with_ext(&base, ".json"), &(text + "\n"))
}

pub fn cmd_ber(
    cfg: BerConfig,
    seed_flag: Option<u64>,
    out_flag: Option<PathBuf>,
) -> Result<(), CliError> {
    let base = out_base(out_flag, &cfg.out)?;
    let (code_spec, sim_seed) = match seed_flag {
        Some(s) => (cfg.code.with_seed(s), s),
        None => (cfg.code, cfg.seed),
    };
    let k = code_spec.k();
    let constellation =
        Constellation::from_name(&cfg.modulation).map_err(|e| CliError::Config(e.to_string()))?;
    if cfg.rates.is_empty() || cfg.ebn0_db.is_empty() {
        return Err(CliError::Config(
            "rates and ebn0_db must be non-empty".into(),
        ));
    }
    let profile = cfg
        .q_source
        .profile(k)
        .map_err(|e| CliError::Config(e.to_string()))?;
    // Map each requested rate to a prefix length before any simulation.
    let mut lengths = Vec::with_capacity(cfg.rates.len());
    for &rate in &cfg.rates {
        if !(rate.is_finite() && rate > 0.05 && rate <= 1.0) {
            return Err(CliError::Config(format!("rate {rate} outside (0.05, 1.0]")));
        }
        let n = (k as f64 / rate).round() as usize;
        if n < k || n > 20 * k {
            return Err(CliError::Config(format!(
                "rate {rate} has no prefix for k={k}"
            )));
        }
        lengths.push(n);
    }
    let mother =
        build_mother_code(&code_spec, &profile).map_err(|e| CliError::Runtime(e.to_string()))?;

    let mut out = String::new();
    out.push_str("# kite ber\n");
    let _ = writeln!(
        out,
        "# seed={sim_seed} code_seed={} k={k} variant={} q_source={} modulation={} \
         frames={} max_iter={} min_sum={} all_zero={}",
        code_spec.seed(),
        variant_name(code_spec.variant()),
        cfg.q_source.describe(),
        constellation.name(),
        cfg.frames,
        cfg.max_iter,
        cfg.min_sum,
        cfg.all_zero,
    );
    let _ = writeln!(out, "# digest={}", mother.digest());
    out.push_str("rate,ebn0_db,n,frames,bits,bit_errors,ber,ci95,fer\n");
    for (ri, (&rate, &n)) in cfg.rates.iter().zip(&lengths).enumerate() {
        let h = mother
            .prefix(n)
            .map_err(|e| CliError::Runtime(e.to_string()))?;
        let actual_rate = k as f64 / n as f64;
        for (si, &db) in cfg.ebn0_db.iter().enumerate() {
            let sigma2 =
                kite_ldpc::channel::ChannelConfig::from_ebn0_db(db, actual_rate, constellation.b())
                    .map_err(|e| CliError::Config(e.to_string()))?
                    .sigma2();
            let sim = SimConfig {
                frames: cfg.frames,
                max_iter: cfg.max_iter,
                min_sum: cfg.min_sum,
                seed: sim_seed,
                lane: (ri * cfg.ebn0_db.len() + si) as u32,
                all_zero: cfg.all_zero,
            };
            let stats = simulate_ber(&h, &constellation, sigma2, &sim)
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            let _ = writeln!(
                out,
                "{rate},{db},{n},{},{},{},{},{},{}",
                stats.frames, stats.bits, stats.bit_errors, stats.ber, stats.ci95, stats.fer
            );
        }
    }
    write_file(&with_ext(&base, ".csv"), &out)
}

pub fn cmd_harq(
    cfg: HarqCmdConfig,
    seed_flag: Option<u64>,
    out_flag: Option<PathBuf>,
) -> Result<(), CliError> {
    let base = out_base(out_flag, &cfg.out)?;
    let (code_spec, sim_seed) = match seed_flag {
        Some(s) => (cfg.code.with_seed(s), s),
        None => (cfg.code, cfg.seed),
    };
    let constellation =
        Constellation::from_name(&cfg.modulation).map_err(|e| CliError::Config(e.to_string()))?;
    if cfg.esn0_db.is_empty() {
        return Err(CliError::Config("esn0_db must be non-empty".into()));
    }
    let profile = cfg
        .q_source
        .profile(code_spec.k())
        .map_err(|e| CliError::Config(e.to_string()))?;
    let harq_cfg = HarqConfig {
        start: cfg.start,
        schedule: cfg.schedule.into(),
        max_iter: cfg.max_iter,
    };
    let mother =
        build_mother_code(&code_spec, &profile).map_err(|e| CliError::Runtime(e.to_string()))?;

    let mut out = String::new();
    out.push_str("# kite harq\n");
    let _ = writeln!(
        out,
        "# seed={sim_seed} code_seed={} k={} variant={} q_source={} modulation={} frames={} \
         start={} schedule={:?} max_iter={}",
        code_spec.seed(),
        code_spec.k(),
        variant_name(code_spec.variant()),
        cfg.q_source.describe(),
        constellation.name(),
        cfg.frames,
        cfg.start.map_or("n_18".into(), |s| s.to_string()),
        cfg.schedule,
        cfg.max_iter,
    );
    let _ = writeln!(out, "# digest={}", mother.digest());
    out.push_str(
        "kind,esn0_db,sigma2,seed,b,frame,n,attempts,success,undetected,eta,\
         frames,mean_eta,ci95,failure_rate,capacity_bits_per_symbol\n",
    );
    let b = constellation.b();
    for (lane, &db) in cfg.esn0_db.iter().enumerate() {
        let (point, traces) = throughput_point(
            &mother,
            &constellation,
            db,
            cfg.frames,
            &harq_cfg,
            sim_seed,
            lane as u32,
        )
        .map_err(|e| CliError::Runtime(e.to_string()))?;
        for (frame, t) in traces.iter().enumerate() {
            let _ = writeln!(
                out,
                "session,{db},{},{sim_seed},{b},{frame},{},{},{},{},{},,,,,",
                point.sigma2,
                t.n,
                t.attempts,
                u8::from(t.success),
                u8::from(t.undetected),
                t.eta,
            );
        }
        let _ = writeln!(
            out,
            "summary,{db},{},{sim_seed},{b},,,,,{},,{},{},{},{},{}",
            point.sigma2,
            point.undetected,
            point.frames,
            point.mean_eta,
            point.ci95,
            point.failure_rate,
            point.capacity_bits_per_symbol,
        );
    }
    write_file(&with_ext(&base, ".csv"), &out)
}

pub fn cmd_optimize(
    cfg: OptimizeConfig,
    seed_flag: Option<u64>,
    out_flag: Option<PathBuf>,
) -> Result<(), CliError> {
    let base = out_base(out_flag, &cfg.out)?;
    let seed = seed_flag.unwrap_or(cfg.seed);
    let obj = ObjectiveConfig {
        frames: cfg.frames,
        max_iter: cfg.max_iter,
        bracket: cfg.bracket,
        tol: cfg.tol,
        max_evals_per_level: cfg.max_evals_per_level,
        snr_margin_db: cfg.snr_margin_db,
        seed,
        variant: cfg.variant,
    };
    let outcome = greedy_design(cfg.k, &obj).map_err(|e| CliError::Runtime(e.to_string()))?;
    // Rebuild the mother code from the designed profile for its digest.
    let spec =
        CodeSpec::new(cfg.k, cfg.variant, seed).map_err(|e| CliError::Runtime(e.to_string()))?;
    let mother =
        build_mother_code(&spec, &outcome.profile).map_err(|e| CliError::Runtime(e.to_string()))?;
    let digest = mother.digest();

    let levels: Vec<serde_json::Value> = outcome
        .levels
        .iter()
        .map(|lt| {
            serde_json::json!({
                "level": lt.ell,
                "q": lt.q,
                "target_ebn0_db": lt.target_ebn0_db,
                "sigma2": lt.sigma2,
                "evaluations": lt.evaluations,
                "budget_exhausted": lt.budget_exhausted,
                "final_bracket": [lt.final_bracket.0, lt.final_bracket.1],
            })
        })
        .collect();
    let doc = serde_json::json!({
        "k": cfg.k,
        "variant": variant_name(cfg.variant),
        "seed": seed,
        "frames": cfg.frames,
        "max_iter": cfg.max_iter,
        "max_evals_per_level": cfg.max_evals_per_level,
        "snr_margin_db": cfg.snr_margin_db,
        "profile": outcome.profile,
        "any_budget_exhausted": outcome.any_budget_exhausted,
        "digest": digest,
        "levels": levels,
    });
    let text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Runtime(e.to_string()))?;
    write_file(&with_ext(&base, ".json"), &(text + "\n"))?;

    let mut csv = String::new();
    csv.push_str("# kite optimize\n");
    let _ = writeln!(
        csv,
        "# seed={seed} k={} variant={} frames={} max_iter={} max_evals_per_level={} \
         snr_margin_db={}",
        cfg.k,
        variant_name(cfg.variant),
        cfg.frames,
        cfg.max_iter,
        cfg.max_evals_per_level,
        cfg.snr_margin_db,
    );
    let _ = writeln!(csv, "# digest={digest}");
    csv.push_str("level,eval,q,ber\n");
    for lt in &outcome.levels {
        for (i, (q, ber)) in lt.evals.iter().enumerate() {
            let _ = writeln!(csv, "{},{},{},{}", lt.ell, i, q, ber);
        }
    }
    write_file(&with_ext(&base, ".trace.csv"), &csv)
}
