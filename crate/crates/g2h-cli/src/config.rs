use clap::Args;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::PathBuf;

/// Settings shared by every subcommand; serialised next to every result set.
#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct RunConfig {
    #[arg(long, default_value_t = 256, global = true)]
    pub precision_bits: u32,
    #[arg(long, default_value_t = 1e-8, global = true)]
    pub target_error: f64,
    #[arg(long, default_value_t = 0.25, global = true)]
    pub delta: f64,
    /// Family height cutoff `T`.
    #[arg(long = "T", alias = "t", default_value_t = 1.0, global = true)]
    #[serde(rename = "T")]
    pub t: f64,
    #[arg(long, default_value_t = 4, global = true)]
    pub e_max: u64,
    #[arg(long, default_value_t = 100, global = true)]
    pub s_max: i64,
    #[arg(long, default_value_t = false, global = true)]
    pub theta_enabled: bool,
    #[arg(long, default_value = "out", global = true)]
    pub output_dir: PathBuf,
    #[arg(long, default_value_t = 1, global = true)]
    pub seed: u64,
    /// Run every loop on one thread (results are identical either way).
    #[arg(long, default_value_t = false, global = true)]
    #[serde(skip)]
    pub sequential: bool,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        let ok = self.precision_bits > 0
            && self.target_error > 0.0
            && self.delta > 0.0
            && self.delta < 1.0
            && self.t > 0.0
            && self.e_max > 0
            && self.s_max > 0
            && self.seed > 0;
        if ok {
            Ok(())
        } else {
            Err("numeric settings must be positive (and δ < 1)".into())
        }
    }

    /// First 16 hex digits of SHA-256 over the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serialises");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn exec(&self) -> g2heights::Execution {
        if self.sequential {
            g2heights::Execution::Sequential
        } else {
            g2heights::Execution::Parallel
        }
    }
}
