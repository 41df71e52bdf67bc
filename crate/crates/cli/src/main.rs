use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use twogen_cli::{
    cmd_bench, cmd_decide, cmd_embed, cmd_extract, cmd_fuzz, cmd_member, FuzzFamily, RunReport,
};
use twogen_core::DelayModel;

/// Word problem and membership in the 2-generated group G = <c, s> built around
/// a base group H given by an oracle.
#[derive(Debug, Parser)]
#[command(name = "twogen", version)]
struct Cli {
    /// Also write the report as JSON to this file.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether a word in c, s is trivial in G.
    Decide {
        /// e.g. "c s c^-1 s^-1"
        word: String,
        /// trivial, free-abelian, free or cyclic:<m>.
        #[arg(long, default_value = "free")]
        oracle: String,
    },
    /// Decide whether a word lies in the embedded copy of H.
    Member {
        word: String,
        #[arg(long, default_value = "free")]
        oracle: String,
    },
    /// Print the image of an H-word such as "a1 a2^-1".
    Embed { hword: String },
    /// Print the H-word a member of the embedded copy of H comes from.
    Extract {
        word: String,
        #[arg(long, default_value = "free")]
        oracle: String,
    },
    /// Check the deciders against brute-force evaluation on seeded random words.
    Fuzz {
        #[arg(long, default_value_t = 1000)]
        count: u64,
        #[arg(long, default_value_t = 40)]
        max_len: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "free")]
        oracle: String,
        #[arg(long, value_enum, default_value_t)]
        family: FuzzFamily,
    },
    /// Tabulate oracle usage against the query bounds for words of doubling length.
    Bench {
        /// Largest letter length to include.
        #[arg(long, default_value_t = 1024)]
        max_len: u64,
        #[arg(long, default_value = "free")]
        oracle: String,
        #[arg(long, default_value = "linear")]
        delay: DelayModel,
    },
}

fn run(cli: Cli) -> Result<RunReport> {
    match cli.command {
        Command::Decide { word, oracle } => cmd_decide(&word, &oracle),
        Command::Member { word, oracle } => cmd_member(&word, &oracle),
        Command::Embed { hword } => cmd_embed(&hword),
        Command::Extract { word, oracle } => cmd_extract(&word, &oracle),
        Command::Fuzz {
            count,
            max_len,
            seed,
            oracle,
            family,
        } => cmd_fuzz(count, max_len, seed, &oracle, family),
        Command::Bench {
            max_len,
            oracle,
            delay,
        } => cmd_bench(max_len, &oracle, delay),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json.clone();
    let outcome = run(cli).and_then(|report| {
        print!("{report}");
        if let Some(path) = json {
            std::fs::write(&path, report.to_json()? + "\n")
                .with_context(|| format!("cannot write {}", path.display()))?;
        }
        Ok(report.passed())
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
