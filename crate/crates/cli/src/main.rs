//! `hecke`: batch computations in congruence Hecke algebras.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hecke_core::error::Error;
use hecke_core::residue::RingError;

use config::{RunConfig, WindowSpec};

#[derive(Parser)]
#[command(
    name = "hecke",
    version,
    about = "Exact congruence Hecke algebras over truncated local rings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config window: `box:B`, `box:B:S` or `l1,l2;l1,l2`.
    #[arg(long)]
    window: Option<WindowSpec>,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate K/K_m and the double coset census of the window.
    Enumerate(Common),
    /// Compare double coset volumes with the closed form.
    Volume(Common),
    /// Structure constants of basis pairs, or the product of two elements.
    Convolve {
        #[command(flatten)]
        common: Common,
        /// Left factor as Hecke element JSON.
        #[arg(long, requires = "right")]
        left: Option<PathBuf>,
        /// Right factor as Hecke element JSON.
        #[arg(long, requires = "left")]
        right: Option<PathBuf>,
    },
    /// Check algebra identities on the window.
    Verify(Common),
    /// Compare structure constants across two close fields.
    Transfer(Common),
    /// Transfer an Eisenstein polynomial across two close fields.
    Eisenstein(Common),
}

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Io(String),
    Core(Error),
    Audit(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) | Failure::Io(_) => 1,
            Failure::Audit(_) => 3,
            Failure::Mismatch(_) => 4,
            Failure::Core(e) => match e {
                Error::Guard { .. } | Error::Ring(RingError::TooLarge { .. }) => 2,
                Error::Audit(_)
                | Error::Consistency(_)
                | Error::Cache(_)
                | Error::NotClose { .. } => 3,
                _ => 1,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(s) => write!(f, "configuration: {s}"),
            Failure::Io(s) => write!(f, "io: {s}"),
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Audit(s) => write!(f, "verification failed: {s}"),
            Failure::Mismatch(s) => write!(f, "transfer mismatch: {s}"),
        }
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let (common, left, right) = match &cli.command {
        Command::Convolve {
            common,
            left,
            right,
        } => (common, left.as_deref(), right.as_deref()),
        Command::Enumerate(c)
        | Command::Volume(c)
        | Command::Verify(c)
        | Command::Transfer(c)
        | Command::Eisenstein(c) => (c, None, None),
    };
    if let Some(n) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Config(format!("thread pool: {e}")))?;
    }
    let mut cfg = RunConfig::load(&common.config)?;
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(w) = &common.window {
        cfg.window = w.clone();
    }
    let out = commands::Output::new(&common.out)?;
    match cli.command {
        Command::Enumerate(_) => commands::enumerate(&cfg, &out),
        Command::Volume(_) => commands::volume(&cfg, &out),
        Command::Convolve { .. } => commands::convolve(&cfg, &out, left, right),
        Command::Verify(_) => commands::verify(&cfg, &out),
        Command::Transfer(_) => commands::transfer(&cfg, &out),
        Command::Eisenstein(_) => commands::eisenstein(&cfg, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(msg) => {
            println!("{msg}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("hecke: {e}");
            ExitCode::from(e.code())
        }
    }
}
