use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sofic_cli::{cmd_approx, cmd_conj_demo, cmd_fuzz, cmd_subgroup, cmd_verify, error_outcome, JobConfig, Outcome};
use sofic_core::certificate::parse_rational;
use sofic_core::{Result, Strategy};

#[derive(Parser)]
#[command(name = "sofic", version, about = "Build and verify sofic approximations of free group actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a certificate from a job file.
    Approx {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        strategy: Option<Strategy>,
    },
    /// Verify a certificate file. Exit 0 on accept, 1 on reject.
    Verify {
        path: PathBuf,
        /// Check against this `p/q` instead of the certificate's own.
        #[arg(long)]
        epsilon: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Show the core graph of a subgroup and, with --avoid, a Hall separator.
    Subgroup {
        #[arg(long, default_value_t = 2)]
        rank: usize,
        generators: Vec<String>,
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        avoid: Vec<String>,
    },
    /// Conjugation action through the biregular action.
    ConjDemo {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(short = 'F', long = "f", value_delimiter = ',')]
        f: Vec<String>,
        #[arg(short = 'E', long = "e", value_delimiter = ',')]
        e: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        strategy: Option<Strategy>,
    },
    /// Mutation and oracle harness on random coset instances.
    Fuzz {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 20)]
        cases: usize,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Approx { config, out, strategy } => cmd_approx(&JobConfig::load(&config)?, out.as_deref(), strategy),
        Command::Verify { path, epsilon, json } => {
            let epsilon = epsilon.map(|e| parse_rational(&e, "--epsilon")).transpose()?;
            cmd_verify(&path, epsilon, json)
        }
        Command::Subgroup { rank, generators, avoid } => cmd_subgroup(rank, &generators, &avoid),
        Command::ConjDemo { config, rank, f, e, out, strategy } => {
            let mut job = match config {
                Some(path) => JobConfig::load(&path)?,
                None => JobConfig::default(),
            };
            if !f.is_empty() {
                job.f = f;
            }
            if !e.is_empty() {
                job.e = e;
            }
            if strategy.is_some() {
                job.strategy = strategy;
            }
            let rank = rank.or(job.rank).unwrap_or(2);
            let out = out.or(job.out.clone());
            cmd_conj_demo(rank, &job.f, &job.e, &job.build_options(), out.as_deref())
        }
        Command::Fuzz { seed, cases, config, json } => {
            let job = match config {
                Some(path) => JobConfig::load(&path)?,
                None => JobConfig::default(),
            };
            cmd_fuzz(seed.or(job.seed).unwrap_or(1), cases, job.caps.oracle_max_b, json)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(cli.command).unwrap_or_else(|e| error_outcome(&e));
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(outcome.code as u8)
}
