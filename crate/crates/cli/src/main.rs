use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mvfix::FKind;
use mvfix_cli::commands::{run_certify, run_check_f, run_solve, CommandOutput, EXIT_ERROR};
use mvfix_cli::config::{load_config, ModeSpec};
use mvfix_cli::demo::run_paper_demo;
use mvfix_cli::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "mvfix", version, about = "Fixed points of multivalued maps on the real line")]
struct Cli {
    /// Set distance used for H(Tx, Ty); overrides the config.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// Seed for random pair sampling; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for report and trace files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum ModeArg {
    Hausdorff,
    Excess,
}

impl From<ModeArg> for ModeSpec {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Hausdorff => ModeSpec::Hausdorff,
            ModeArg::Excess => ModeSpec::Excess,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample pairs and estimate the largest admissible tau.
    Certify { config: PathBuf },
    /// Run the nearest-point iteration and validate its trace.
    Solve { config: PathBuf },
    /// Recompute the worked example `Tx = [x/4, (x+1)/2]`.
    PaperDemo,
    /// Grid checks of the conditions on a built-in F.
    CheckF {
        #[arg(long, default_value = "log")]
        kind: FKind,
        #[arg(long, default_value_t = 0.5)]
        k: f64,
    },
}

fn run(cli: &Cli) -> Result<CommandOutput, CliError> {
    let with_overrides = |path: &Path| {
        let mut cfg = load_config(path)?;
        if let Some(mode) = cli.mode {
            cfg.mode = mode.into();
        }
        if let Some(seed) = cli.seed {
            cfg.seed = seed;
        }
        Ok::<_, CliError>(cfg)
    };
    let seed = cli.seed.unwrap_or(42);
    match &cli.command {
        Command::Certify { config } => run_certify(&with_overrides(config)?),
        Command::Solve { config } => run_solve(&with_overrides(config)?),
        Command::PaperDemo => run_paper_demo(seed),
        Command::CheckF { kind, k } => run_check_f(*kind, *k, seed),
    }
}

fn write_files(dir: &Path, output: &CommandOutput) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    for (name, contents) in &output.files {
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_ERROR as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = run(&cli).and_then(|output| {
        if let Some(dir) = &cli.out {
            write_files(dir, &output)?;
        }
        Ok(output)
    });
    match result {
        Ok(output) => {
            print!("{}", output.report);
            ExitCode::from(output.exit_code as u8)
        }
        Err(e) => {
            eprintln!("mvfix: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
