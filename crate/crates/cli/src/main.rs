//! `erdyn`: simulations and experiments on dynamical critical random graphs.
//!
//! Exit status: 0 on success, 2 on a usage error, 3 on an invalid parameter,
//! 4 when an input or output file cannot be read or written.

mod args;
mod output;
mod run;

use std::io::Write;
use std::process::ExitCode;

use chrono::Utc;
use clap::Parser;
use erdyn::ExperimentPlan;
use rand::Rng;

use args::{Cli, Command};
use output::{create, manifest_path, write_all, Provenance, RunManifest, VERSION};

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(msg) => write!(f, "{msg}"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli.command, argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("erdyn: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(command: Command, argv: Vec<String>) -> Result<(), CliError> {
    let Command::Replay { manifest, out } = command else {
        return run_command(command, argv);
    };
    let recorded = RunManifest::load(&manifest)?;
    let mut replay_argv = vec![argv[0].clone()];
    replay_argv.extend(recorded.replay_args.iter().cloned());
    let mut command = Cli::try_parse_from(&replay_argv)
        .map_err(|e| CliError::Invalid(format!("manifest arguments do not parse: {e}")))?
        .command;
    if let (Some(out), Some(common)) = (out, command.common_mut()) {
        common.out = Some(out);
    }
    run_command(command, replay_argv)
}

fn reps_of(command: &Command) -> u64 {
    match command {
        Command::Sup { reps, .. }
        | Command::Tails { reps, .. }
        | Command::Noise { reps, .. }
        | Command::SecondMoment { reps, .. }
        | Command::UnionBound { reps, .. }
        | Command::Reveal { reps, .. }
        | Command::SpectralCheck { reps, .. } => *reps,
        Command::Simulate { .. } | Command::Replay { .. } => 1,
    }
}

fn run_command(command: Command, argv: Vec<String>) -> Result<(), CliError> {
    let common = command.common().cloned().unwrap_or_default();
    let seed = common.seed.unwrap_or_else(|| rand::rng().random());
    let plan = ExperimentPlan::new(seed, reps_of(&command))?.with_workers(common.workers)?;
    let params =
        serde_json::to_value(&command).map_err(|e| CliError::Invalid(format!("cannot record parameters: {e}")))?;

    let mut replay_args: Vec<String> = argv.iter().skip(1).cloned().collect();
    if common.seed.is_none() {
        replay_args.extend(["--seed".to_string(), seed.to_string()]);
    }

    // Fail on an unwritable destination before spending any time on the run.
    let sink = match &common.out {
        Some(path) => Some((path.clone(), create(path)?, create(&manifest_path(path))?)),
        None => None,
    };

    let started = Utc::now().to_rfc3339();
    let ctx = run::Context {
        format: common.format,
        provenance: Provenance {
            command: command.name(),
            params: params.clone(),
            seed,
            version: VERSION,
        },
        plan,
    };
    let bytes = run::execute(&command, &ctx)?;
    let finished = Utc::now().to_rfc3339();

    match sink {
        Some((path, mut file, mut manifest_file)) => {
            write_all(&mut file, &bytes, &path)?;
            let manifest = RunManifest {
                command: command.name().to_string(),
                params,
                seed,
                version: VERSION.to_string(),
                format: format!("{:?}", common.format).to_lowercase(),
                workers: common.workers,
                started,
                finished,
                outputs: vec![path.clone()],
                argv,
                replay_args,
            };
            let mut text = serde_json::to_vec_pretty(&manifest)
                .map_err(|e| CliError::Io(format!("manifest encoding: {e}")))?;
            text.push(b'\n');
            write_all(&mut manifest_file, &text, &manifest_path(&path))?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(&bytes)
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))?;
        }
    }
    Ok(())
}
