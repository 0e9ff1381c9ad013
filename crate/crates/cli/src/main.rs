//! Command-line front end: config ingestion, experiment orchestration and
//! CSV/JSON emission.
//!
//! Every command is deterministic given (config file, seed): identical
//! bytes out, including under `--jobs > 1`. Exit code 0 means all requested
//! checks passed; failed checks exit 1 with a machine-readable failure
//! list on stdout; configuration errors exit 2.

mod commands;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "pingpong", version, about = "Teleportation-based ping-pong test simulator and certifier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the test; writes a transcript and a rate summary
    RunTest(CommonArgs),
    /// Evaluate the completeness verdict for a device-fidelity estimate
    Certify(CommonArgs),
    /// Evaluate the device consistency check against an observed rate
    Consistency(CommonArgs),
    /// Evaluate diamond-distance performance bounds
    Bound(CommonArgs),
    /// Sweep test fidelity and consistency bounds over noise grids
    Sweep(CommonArgs),
    /// Run a dishonest-prover experiment against the soundness bound
    SoundnessSim(CommonArgs),
    /// Verify the built-in state and unitary 2-designs
    VerifyDesigns(CommonArgs),
    /// Evaluate the quantum-gambling worked example
    QgExample(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config file (strict schema; unknown keys rejected)
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output path (stdout when omitted, where supported)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Seed override; takes precedence over config and PINGPONG_SEED
    #[arg(long)]
    seed: Option<u64>,

    /// Output format where a choice exists
    #[arg(long, value_enum)]
    format: Option<Format>,

    /// Worker threads (parallelism hint; must not change output)
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, runner): (&CommonArgs, commands::Runner) = match &cli.command {
        Command::RunTest(a) => (a, commands::run_test),
        Command::Certify(a) => (a, commands::certify),
        Command::Consistency(a) => (a, commands::consistency),
        Command::Bound(a) => (a, commands::bound),
        Command::Sweep(a) => (a, commands::sweep),
        Command::SoundnessSim(a) => (a, commands::soundness_sim),
        Command::VerifyDesigns(a) => (a, commands::verify_designs),
        Command::QgExample(a) => (a, commands::qg_example),
    };

    if let Some(jobs) = args.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: failed to configure thread pool: {e}");
            return ExitCode::from(2);
        }
    }

    let ctx = commands::Ctx {
        config: args.config.clone(),
        out: args.out.clone(),
        seed: args.seed,
        format: args.format.map(|f| match f {
            Format::Csv => commands::OutputFormat::Csv,
            Format::Json => commands::OutputFormat::Json,
        }),
    };

    match runner(&ctx) {
        Ok(failures) if failures.is_empty() => ExitCode::SUCCESS,
        Ok(failures) => {
            println!("{}", serde_json::json!({ "failures": failures }));
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
