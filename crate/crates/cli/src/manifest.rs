//! Reproducibility manifest: the resolved configuration, the seed
//! derivation, a content hash of the inputs, and the list of outputs. A
//! rerun from the same manifest produces byte-identical files.

use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use tns_core::io::write_atomic;

use crate::config::RunConfig;
use crate::error::CliResult;

#[derive(Serialize)]
pub struct Manifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub config: RunConfig,
    pub master_seed: u64,
    pub replica_seeds: Vec<u64>,
    pub input_hash: String,
    pub outputs: Vec<String>,
}

pub fn input_hash(config: &RunConfig, control_bytes: Option<&[u8]>) -> String {
    let mut hasher = Sha256::new();
    hasher.update(serde_json::to_vec(&config.echo_without_output()).expect("config serializes"));
    if let Some(bytes) = control_bytes {
        hasher.update(bytes);
    }
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(2 + digest.len() * 2);
    hex.push_str("sha256:");
    for b in digest {
        hex.push_str(&format!("{b:02x}"));
    }
    hex
}

pub fn write_manifest(
    out_dir: &Path,
    command: &str,
    config: &RunConfig,
    replica_seeds: Vec<u64>,
    control_bytes: Option<&[u8]>,
    mut outputs: Vec<String>,
) -> CliResult<()> {
    outputs.sort();
    outputs.push("manifest.json".to_string());
    let manifest = Manifest {
        tool: "tns",
        version: env!("CARGO_PKG_VERSION"),
        command,
        config: config.echo_without_output(),
        master_seed: config.seed,
        replica_seeds,
        input_hash: input_hash(config, control_bytes),
        outputs,
    };
    let mut bytes = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
    bytes.push(b'\n');
    write_atomic(&out_dir.join("manifest.json"), &bytes)?;
    Ok(())
}
