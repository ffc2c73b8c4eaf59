use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use logeuler::io::{parse_config, run_experiment, write_report, RunConfig};
use logeuler::Error;

/// Experiments for the 2D Euler equation with logarithmically regularized velocity.
#[derive(Parser)]
#[command(name = "logeuler", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `output_dir` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (default: all cores). Results do not depend on it.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Parse and validate a config file without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print the version.
    Version,
}

const EXIT_VERDICT: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_ABORT: u8 = 3;
const EXIT_IO: u8 = 4;

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config { .. } | Error::InvalidArgument(_) | Error::InvalidGrid(_) => EXIT_CONFIG,
        Error::Io(_) | Error::Json(_) | Error::Snapshot(_) => EXIT_IO,
        _ => EXIT_ABORT,
    }
}

fn fail(err: Error) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(exit_code(&err))
}

fn load(path: &Path) -> Result<RunConfig, ExitCode> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(EXIT_IO)
    })?;
    parse_config(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(EXIT_CONFIG)
    })
}

fn run(config: &Path, out: Option<PathBuf>, threads: Option<usize>) -> ExitCode {
    let cfg = match load(config) {
        Ok(cfg) => cfg,
        Err(code) => return code,
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(k) = threads {
        if k == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_CONFIG);
        }
        pool = pool.num_threads(k);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(EXIT_ABORT);
        }
    };
    let dir = out.unwrap_or_else(|| cfg.output_dir.clone());
    let result = pool.install(|| run_experiment(&cfg).and_then(|r| write_report(&r, &dir).map(|m| (r, m))));
    let (report, manifest) = match result {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    for v in &report.verdicts {
        println!("{} {}: {}", if v.pass { "PASS" } else { "FAIL" }, v.name, v.detail);
    }
    for note in &report.notes {
        println!("note: {note}");
    }
    println!(
        "{} finished in {:.2} s on {} thread(s); {} file(s) in {}",
        manifest.experiment,
        manifest.wall_time_s,
        manifest.threads,
        manifest.files.len() + 1,
        dir.display()
    );
    if manifest.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERDICT)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, out, threads } => run(&config, out, threads),
        Command::Validate { config } => match load(&config) {
            Ok(cfg) => {
                println!("{}: ok ({})", config.display(), cfg.experiment.name());
                ExitCode::SUCCESS
            }
            Err(code) => code,
        },
        Command::Version => {
            println!("logeuler {}", logeuler::experiments::VERSION);
            ExitCode::SUCCESS
        }
    }
}
