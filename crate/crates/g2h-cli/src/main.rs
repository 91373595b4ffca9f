mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand};
use commands::{parse_curve, Failure};
use config::RunConfig;
use std::path::PathBuf;
use std::process::ExitCode;

/// Heights, theta functions and gap-principle experiments for y² = x⁵ + a2x³ + a3x² + a4x + a5.
#[derive(Parser)]
#[command(name = "g2h", version)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Stream the height-T family to curves.jsonl (resumes an interrupted run).
    Enumerate,
    /// Rational points in the box e ≤ e_max, |s| ≤ s_max.
    Search {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
    },
    /// Canonical heights of the points found by `search`.
    Heights {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
    },
    /// Period matrix, Igusa ratio and theta local heights.
    Theta {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
    },
    /// Partition labels and the gap-principle audit.
    Gap {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
    },
    /// Kabatiansky–Levenshtein table and angle optimisations.
    Packing,
    /// Points found per curve over the family, by height band.
    Survey,
    /// Fit the monitored constants on a corpus of curves.
    Calibrate {
        /// Defaults to <output_dir>/curves.jsonl.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = 16)]
        corpus_size: usize,
    },
    /// Run every invariant suite on one curve.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        /// Override the expected Kummer table checksums (JSON).
        #[arg(long, hide = true)]
        expect_checksums: Option<String>,
    },
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let cfg = cli.config;
    cfg.validate().map_err(|m| Failure { code: 1, message: m })?;
    match cli.cmd {
        Cmd::Enumerate => commands::enumerate(&cfg),
        Cmd::Search { curve } => commands::search_cmd(&cfg, &parse_curve(&curve)?),
        Cmd::Heights { curve } => commands::heights(&cfg, &parse_curve(&curve)?),
        Cmd::Theta { curve } => commands::theta(&cfg, &parse_curve(&curve)?),
        Cmd::Gap { curve } => commands::gap_cmd(&cfg, &parse_curve(&curve)?),
        Cmd::Packing => commands::packing_cmd(&cfg),
        Cmd::Survey => commands::survey(&cfg),
        Cmd::Calibrate { corpus, corpus_size } => commands::calibrate(&cfg, corpus, corpus_size),
        Cmd::Verify { curve, expect_checksums } => {
            let expected = match expect_checksums {
                Some(s) => serde_json::from_str(&s)?,
                None => commands::EXPECTED_CHECKSUMS,
            };
            commands::verify_cmd(&cfg, &parse_curve(&curve)?, expected)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code as u8)
        }
    }
}
