use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use excisive::cli::{self, CliError, Report, SweepOptions};
use excisive::exactlin::RingSpec;

#[derive(Parser)]
#[command(name = "excisive", version, about = "Exact checks for polynomial functors on finite pointed sets")]
struct Args {
    /// Write the JSON result block here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the functor laws of a spec file.
    Validate { path: PathBuf },
    /// Degree and Prim ranks.
    Degree { path: PathBuf },
    /// Compare G with Ind(Prim G).
    Prim { path: PathBuf },
    /// Limit over nonempty sets of size <= ell with surjections.
    Limit {
        path: PathBuf,
        #[arg(long)]
        ell: usize,
    },
    /// H^0 and H^1 of the nerve cochains.
    Derived {
        path: PathBuf,
        #[arg(long)]
        ell: usize,
    },
    /// n-excision on every special cube with more than n blocks.
    Excisive {
        path: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Limit of a special cube truncated at a height.
    Paring {
        path: PathBuf,
        /// Block sizes, e.g. 1,1,1,1.
        #[arg(long)]
        spec: String,
        #[arg(long)]
        height: usize,
    },
    /// Rebuild G(n) from the height <= 2 part of the cube on n singletons.
    Reconstruct {
        path: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// The non-injective comparison for Ind of the constant functor over Z.
    Counterexample {
        #[arg(long)]
        ell: usize,
    },
    /// Symmetric polynomial implication in one degree.
    Sympoly {
        #[arg(long, default_value = "Q")]
        ring: RingSpec,
        #[arg(long)]
        d: usize,
    },
    /// The characteristic-p counterexample of degree p.
    Charp {
        #[arg(long)]
        p: u64,
    },
    /// A seeded random functor of bounded degree.
    Random {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "Q")]
        ring: RingSpec,
        #[arg(long = "N", default_value_t = 4)]
        max_size: usize,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// Write the generated spec file here.
        #[arg(long)]
        spec_out: Option<PathBuf>,
    },
    /// The vanishing check over many seeded random functors.
    Sweep {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value = "Q")]
        ring: RingSpec,
        #[arg(long = "N", default_value_t = 4)]
        max_size: usize,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn write(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn run(args: Args) -> Result<Report, CliError> {
    match args.command {
        Command::Validate { path } => cli::cmd_validate(&path),
        Command::Degree { path } => cli::cmd_degree(&path),
        Command::Prim { path } => cli::cmd_prim(&path),
        Command::Limit { path, ell } => cli::cmd_limit(&path, ell),
        Command::Derived { path, ell } => cli::cmd_derived(&path, ell),
        Command::Excisive { path, n } => cli::cmd_excisive(&path, n),
        Command::Paring { path, spec, height } => cli::cmd_paring(&path, &spec, height),
        Command::Reconstruct { path, n } => cli::cmd_reconstruct(&path, n),
        Command::Counterexample { ell } => cli::cmd_counterexample(ell),
        Command::Sympoly { ring, d } => cli::cmd_sympoly(ring, d),
        Command::Charp { p } => cli::cmd_charp(p),
        Command::Random { seed, ring, max_size, degree, spec_out } => {
            let (report, spec) = cli::cmd_random(ring, max_size, degree, seed)?;
            if let Some(p) = spec_out {
                write(&p, &spec.to_canonical_string())?;
            }
            Ok(report)
        }
        Command::Sweep { seed, count, ring, max_size, degree, jobs } => {
            cli::cmd_sweep(&SweepOptions { ring, max_size, degree, first_seed: seed, count, jobs })
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let out = args.out.clone();
    match run(args) {
        Ok(report) => {
            println!("{report}");
            if let Some(p) = out {
                if let Err(e) = write(&p, &report.to_json_string()) {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
