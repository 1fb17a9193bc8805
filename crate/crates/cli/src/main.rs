//! `hdakit`: validation, symmetrisation, path semantics and bisimulation checks for
//! HDA files.

mod commands;
mod dot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hdakit_core::bisim::{BisimKind, SemanticsMode};

#[derive(Debug, Parser)]
#[command(name = "hdakit", version, about = "Order-free semantics for higher-dimensional automata")]
pub struct Cli {
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    pub json: bool,

    /// Write the result to FILE instead of stdout.
    #[arg(short = 'o', long = "output", value_name = "FILE", global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    St,
    Hp,
    Hhp,
}

impl From<KindArg> for BisimKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::St => BisimKind::St,
            KindArg::Hp => BisimKind::Hp,
            KindArg::Hhp => BisimKind::Hhp,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Trace,
    Ipomset,
}

impl From<ModeArg> for SemanticsMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Trace => SemanticsMode::TraceBased,
            ModeArg::Ipomset => SemanticsMode::IpomsetBased,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the precubical identities and label compatibility of a complex.
    Validate { file: PathBuf },
    /// Write the symmetrised complex as an HDA file.
    Symmetrize {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_dim: usize,
    },
    /// List executions (or paths from `--from`) up to a length bound.
    Paths {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        bound: usize,
        /// Start cell; defaults to the initial cell.
        #[arg(long)]
        from: Option<String>,
    },
    /// The ipomset label of a path.
    Label {
        file: PathBuf,
        #[arg(long)]
        path: String,
    },
    /// The split- and ST-trace of an execution.
    StTrace {
        file: PathBuf,
        #[arg(long)]
        path: String,
    },
    /// Decide isomorphism of two ipomset files.
    Iso {
        left: PathBuf,
        right: PathBuf,
        /// Require interface slots to be preserved.
        #[arg(long)]
        strict: bool,
    },
    /// Decide bisimilarity of two HDAs up to a length bound.
    Bisim {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_enum, default_value = "hhp")]
        kind: KindArg,
        #[arg(long, value_enum, default_value = "ipomset")]
        mode: ModeArg,
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
    /// Render the complex as Graphviz DOT.
    ExportDot { file: PathBuf },
    /// Convert between a canonical morphism `tau=[..]; d=[..]` and a base map
    /// `f=[..]; eps="..."` over the given target object.
    Morphism {
        /// Target labels, comma separated, or one label per character.
        #[arg(long)]
        target: String,
        text: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(outcome) => {
            if let Err(e) = commands::emit(&cli, &outcome.text) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if outcome.success { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
