//! Command-line driver. All logic lives in the library's `cli` module;
//! this binary only parses arguments and prints results. Verbosity is
//! controlled through the `BWTMERGE_LOG` environment variable.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use bwtmerge::cli::{self, BenchFamily, BenchSpec, Mode, DEFAULT_ORACLE_CAP};

#[derive(Parser)]
#[command(
    name = "bwtmerge",
    about = "Build and merge BWT-based compressed indices",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Index family: bwt, bwt-lcp, xbwt, circular or permuterm.
    #[arg(long, default_value = "bwt-lcp")]
    mode: Mode,
    /// Smallest skipped-range size worth recording; 0 picks sigma + 2.
    #[arg(long, default_value_t = 0)]
    tau: usize,
    /// Print machine-readable JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build a reference index from a corpus (line-delimited or FASTA).
    Build {
        #[command(flatten)]
        common: CommonOpts,
        /// Output path prefix; extensions are appended per mode.
        #[arg(long, short)]
        output: PathBuf,
        /// Cap on the corpus size accepted by the quadratic builders.
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        max_oracle_n: usize,
        /// Corpus file.
        corpus: PathBuf,
    },
    /// Merge two index files given by path prefix.
    Merge {
        #[command(flatten)]
        common: CommonOpts,
        /// Output path prefix.
        #[arg(long, short)]
        output: PathBuf,
        /// Write the boundary pair stream here (bwt mode only).
        #[arg(long)]
        emit_pairs: Option<PathBuf>,
        /// Left index prefix.
        left: PathBuf,
        /// Right index prefix.
        right: PathBuf,
    },
    /// Build two corpora, merge, rebuild the union from scratch, compare.
    Verify {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        max_oracle_n: usize,
        corpus_a: PathBuf,
        corpus_b: PathBuf,
    },
    /// Statistics for a corpus or index file; with two corpora the merge
    /// diagnostics are included.
    Stats {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        max_oracle_n: usize,
        /// One corpus/index, or two corpora.
        inputs: Vec<PathBuf>,
    },
    /// Merge synthetic collections and report pass counts, active
    /// positions and skip-record storage.
    Bench {
        #[command(flatten)]
        common: CommonOpts,
        /// shared-prefix or random.
        #[arg(long, default_value = "shared-prefix")]
        family: BenchFamily,
        #[arg(long, default_value_t = 4)]
        min_exp: u32,
        #[arg(long, default_value_t = 10)]
        max_exp: u32,
        #[arg(long, default_value_t = 8)]
        docs: usize,
        #[arg(long, default_value_t = 256)]
        doc_len: usize,
        #[arg(long, default_value_t = 4)]
        sigma: u8,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Comma-separated threshold sweep; empty uses sigma + 2.
        #[arg(long, value_delimiter = ',')]
        taus: Vec<usize>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("BWTMERGE_LOG")).init();
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Build {
            common,
            output,
            max_oracle_n,
            corpus,
        } => {
            let written = cli::cmd_build(&corpus, common.mode, &output, max_oracle_n)
                .with_context(|| format!("building {}", corpus.display()))?;
            for path in written {
                println!("wrote {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Merge {
            common,
            output,
            emit_pairs,
            left,
            right,
        } => {
            let summary = cli::cmd_merge(
                &left,
                &right,
                common.mode,
                common.tau,
                emit_pairs.as_deref(),
                &output,
            )
            .context("merging")?;
            if common.json {
                println!("{}", serde_json::to_string_pretty(&summary)?);
            } else {
                print!("{}", summary.render());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            common,
            max_oracle_n,
            corpus_a,
            corpus_b,
        } => {
            let equal =
                cli::cmd_verify(&corpus_a, &corpus_b, common.mode, common.tau, max_oracle_n)
                    .context("verifying")?;
            if equal {
                println!("verify: OK");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("verify: MISMATCH");
                Ok(ExitCode::FAILURE)
            }
        }
        Command::Stats {
            common,
            max_oracle_n,
            inputs,
        } => {
            let report = cli::cmd_stats(&inputs, common.mode, common.tau, max_oracle_n)
                .context("collecting statistics")?;
            if common.json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", report.render());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench {
            common,
            family,
            min_exp,
            max_exp,
            docs,
            doc_len,
            sigma,
            seed,
            taus,
        } => {
            let spec = BenchSpec {
                family,
                min_exp,
                max_exp,
                docs,
                doc_len,
                sigma,
                seed,
                taus,
            };
            let report = cli::cmd_bench(&spec).context("benchmarking")?;
            if common.json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", report.render());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
