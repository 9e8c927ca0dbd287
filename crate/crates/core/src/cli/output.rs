//! Result files: `summary.csv`, `curves.csv`, `timing.csv` and
//! `manifest.json`. Floats are written with 17 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::harness::{AggregateStats, ExperimentConfig, TimingRow, TrialResult};

pub const CSV_SCHEMA_VERSION: u32 = 1;
pub const SUMMARY_HEADER: &str = "policy,mean_regret,std,q10,q25,q50,q75,q90,q95";
pub const CURVES_HEADER: &str = "policy,trial,t,regret";
pub const TIMING_HEADER: &str = "policy,n_arms,mean_us,std_us";

/// Round-trip exact float formatting.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn summary_csv(stats: &[AggregateStats]) -> String {
    let mut out = format!("{SUMMARY_HEADER}\n");
    for s in stats {
        let mut row = vec![field(&s.policy), float(s.mean), float(s.std)];
        row.extend(s.quantiles.iter().map(|&q| float(q)));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn curves_csv(results: &[TrialResult]) -> String {
    let mut out = format!("{CURVES_HEADER}\n");
    for r in results {
        let id = field(&r.policy);
        for (t, regret) in r.checkpoints.iter().zip(&r.regret) {
            let _ = writeln!(out, "{id},{},{t},{}", r.trial, float(*regret));
        }
    }
    out
}

pub fn timing_csv(rows: &[TimingRow]) -> String {
    let mut out = format!("{TIMING_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            field(&r.policy),
            r.n_arms,
            float(r.mean_us),
            float(r.std_us)
        );
    }
    out
}

/// Git-style object hash: SHA-256 of `"blob <len>\0" + content`.
pub fn content_hash(content: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", content.len()).as_bytes());
    h.update(content);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Serialize)]
pub struct Layout {
    pub summary: &'static str,
    pub curves: &'static str,
    pub timing: &'static str,
    pub manifest: &'static str,
}

pub const LAYOUT: Layout = Layout {
    summary: "summary.csv",
    curves: "curves.csv",
    timing: "timing.csv",
    manifest: "manifest.json",
};

#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub csv_schema_version: u32,
    pub config_hash: String,
    pub seed: u64,
    pub resolved_config: &'a ExperimentConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep_arms: Option<&'a [usize]>,
    pub layout: &'static Layout,
}

pub fn write_manifest(dir: &Path, manifest: &RunManifest) -> Result<()> {
    let text = serde_json::to_string_pretty(manifest)?;
    std::fs::write(dir.join(LAYOUT.manifest), text + "\n")?;
    Ok(())
}
