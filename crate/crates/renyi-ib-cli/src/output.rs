//! CSV and manifest serialization. All floating-point values are written with
//! 12 significant digits so reruns and fixtures compare byte for byte.

use crate::CliResult;
use renyi_ib::solver::SweepOutcome;
use renyi_ib::{Envelope, TradeoffPoint};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::Path;

/// 12 significant digits, scientific; deterministic across runs and platforms.
pub fn fmt12(v: f64) -> String {
    format!("{v:.11e}")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    let mut f = std::fs::File::create(path)
        .map_err(|e| crate::CliError::internal(format!("cannot create {}: {e}", path.display())))?;
    f.write_all(contents.as_bytes())
        .map_err(|e| crate::CliError::internal(format!("cannot write {}: {e}", path.display())))
}

pub fn write_points_csv(
    path: &Path,
    points: &[TradeoffPoint],
    alpha: f64,
    m: u32,
    source: &str,
) -> CliResult<()> {
    let mut out = String::from("gamma,eta,alpha,M,source,map\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{m},{source},{}\n",
            fmt12(p.gamma),
            fmt12(p.eta),
            fmt12(alpha),
            p.witness.digits()
        ));
    }
    write_file(path, &out)
}

/// Envelope rows: the vertices plus a 101-point evaluation grid on
/// `[0, flat_start]`, merged and sorted by gamma.
pub fn write_envelope_csv(path: &Path, e: &Envelope) -> CliResult<()> {
    let mut rows: Vec<(f64, f64, bool)> =
        e.vertices().iter().map(|v| (v.gamma, v.eta, true)).collect();
    let flat = e.flat_start();
    for k in 0..=100u32 {
        let gamma = flat * k as f64 / 100.0;
        let is_near_vertex = rows.iter().any(|&(g, _, v)| v && (g - gamma).abs() <= 1e-12);
        if !is_near_vertex {
            let eta = e.evaluate(gamma).expect("grid gammas are non-negative");
            rows.push((gamma, eta, false));
        }
    }
    rows.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut out = String::from("gamma,eta,is_vertex\n");
    for (gamma, eta, is_vertex) in rows {
        out.push_str(&format!("{},{},{is_vertex}\n", fmt12(gamma), fmt12(eta)));
    }
    write_file(path, &out)
}

pub fn write_runs_csv(path: &Path, outcome: &SweepOutcome) -> CliResult<()> {
    let mut out =
        String::from("beta,init,iterations,converged,cycle_detected,objective,gamma,eta,map\n");
    for record in &outcome.runs {
        let run = &record.run;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            fmt12(record.beta),
            record.init,
            run.iterations,
            run.converged,
            run.cycle_detected,
            fmt12(run.objective_value),
            fmt12(run.point.gamma),
            fmt12(run.point.eta),
            run.final_map.digits()
        ));
    }
    write_file(path, &out)
}

/// The manifest echoes the command, a content digest of the input joint, the
/// full configuration, the tool version and the seed, so any output file can
/// be reproduced byte for byte.
pub fn write_manifest(
    path: &Path,
    command: &str,
    input_bytes: &[u8],
    seed: Option<u64>,
    config: serde_json::Value,
) -> CliResult<()> {
    let manifest = serde_json::json!({
        "command": command,
        "config": config,
        "input_digest": format!("sha256:{}", sha256_hex(input_bytes)),
        "seed": seed,
        "tool": "renyi-ib",
        "version": env!("CARGO_PKG_VERSION"),
    });
    let mut text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| crate::CliError::internal(format!("manifest serialization: {e}")))?;
    text.push('\n');
    write_file(path, &text)
}
