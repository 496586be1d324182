//! `rab`: runs one job and writes a JSON report.
//! Exit status: 0 pass, 1 verdict fail, 2 input error.

mod job;
mod report;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rab_core::config::ConfigError;

use job::{JobArgs, JobConfig, JobKind};
use report::Verdict;

#[derive(Parser)]
#[command(name = "rab", version, about = "Buildings, walls, holonomy and local reflections on finite data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ball of chambers in the building of a graph product.
    Build(JobArgs),
    /// Curvature condition on a polygonal complex.
    Check(JobArgs),
    /// Walls or e-walls of a polygonal complex.
    Walls(JobArgs),
    /// Holonomy of a subgroup at every residue orbit.
    Holonomy(JobArgs),
    /// Commensuration witness for a holonomy-free subgroup.
    Witness(JobArgs),
    /// Kill a 2-cocycle in a finite cover.
    KillCocycle(JobArgs),
    /// Cut a subgroup down by finite quotients until holonomy dies.
    KillHolonomy(JobArgs),
    /// Davis complex ball or quotient: curvature and wall structure.
    Davis(JobArgs),
    /// Kill the holonomy of a local reflection system along e-walls.
    KillLr(JobArgs),
    /// Run a job file `{"job": "<kind>", ...flags}`.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

fn dispatch(cmd: Command) -> Result<Verdict, ConfigError> {
    let (kind, args) = match cmd {
        Command::Build(a) => (JobKind::Build, a),
        Command::Check(a) => (JobKind::Check, a),
        Command::Walls(a) => (JobKind::Walls, a),
        Command::Holonomy(a) => (JobKind::Holonomy, a),
        Command::Witness(a) => (JobKind::Witness, a),
        Command::KillCocycle(a) => (JobKind::KillCocycle, a),
        Command::KillHolonomy(a) => (JobKind::KillHolonomy, a),
        Command::Davis(a) => (JobKind::Davis, a),
        Command::KillLr(a) => (JobKind::KillLr, a),
        Command::Run { config } => {
            let job = JobConfig::load(&config)?;
            (job.job, job.args)
        }
    };
    let report = run::run(kind, &args)?;
    report.emit(args.out.as_deref())?;
    Ok(report.verdict)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
