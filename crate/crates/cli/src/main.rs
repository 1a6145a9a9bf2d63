use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sunada_core::group::DEFAULT_MAX_GROUP_SIZE;
use sunada_core::orbifold::EndsConvention;

mod commands;
mod report;

use commands::GenPreset;
use report::Timer;

#[derive(Parser)]
#[command(
    name = "sunada-lab",
    version,
    about = "Exact checks of Sunada constructions over finite matrix groups"
)]
struct Cli {
    /// Emit the report as JSON
    #[arg(long, global = true)]
    json: bool,

    /// Refuse to build groups larger than this
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_GROUP_SIZE)]
    max_group_size: usize,

    /// Include wall-clock time in the report
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Class-intersection counts of the GL(3,F2) triple
    SunadaVerify {
        /// Replace H2 by H1 ∩ H2 (negative control)
        #[arg(long)]
        corrupt: bool,
    },
    /// Cycle types of every element on both coset spaces
    CycleTable,
    /// Genus and ends of the covers for every orbifold base
    Theorem1 {
        #[arg(long, value_enum, default_value = "paper")]
        ends_convention: Convention,
    },
    /// Find a transplantation and check it against Schreier Laplacians
    Transplant {
        #[arg(long, value_enum, default_value = "triangle")]
        gens: GenPreset,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        coeff_bound: u32,
    },
    /// Congruence triple built from S(4) subgroups of PSL(2, Z/p)
    Theorem2 {
        #[arg(long, default_value_t = 23)]
        p: u64,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Convention {
    Paper,
    Smooth,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limit = cli.max_group_size;
    let timer = Timer::start();
    let result = match cli.command {
        Command::SunadaVerify { corrupt } => commands::sunada_verify(corrupt, limit),
        Command::CycleTable => commands::cycle_table(limit),
        Command::Theorem1 { ends_convention } => {
            let c = match ends_convention {
                Convention::Paper => EndsConvention::Paper,
                Convention::Smooth => EndsConvention::Smooth,
            };
            commands::theorem1(c, limit)
        }
        Command::Transplant {
            gens,
            seed,
            coeff_bound,
        } => commands::transplant(gens, seed, coeff_bound, limit),
        Command::Theorem2 { p } => commands::theorem2(p, limit),
    };
    match result {
        Ok(mut report) => {
            timer.finish(&mut report, cli.timing);
            let mut out = report.render(cli.json);
            if cli.json {
                out.push('\n');
            }
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
