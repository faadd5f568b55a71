use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use edslab::cli::{emit_report, run_command, Command, Format, RunConfig, EXIT_CONFIG};

/// Exact experiments on elliptic divisibility sequences.
#[derive(Parser, Debug)]
#[command(name = "edslab", version)]
struct Args {
    command: Command,
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long = "n-max")]
    n_max: Option<u64>,
    #[arg(long = "N")]
    big_n: Option<usize>,
    #[arg(long = "guard-degree")]
    guard_degree: Option<u64>,
}

fn run(args: Args) -> Result<i32, String> {
    let mut cfg = RunConfig::load(&args.config).map_err(|e| e.to_string())?;
    if args.n_max.is_some() {
        cfg.params.n_max = args.n_max;
    }
    if args.big_n.is_some() {
        cfg.params.big_n = args.big_n;
    }
    if let Some(d) = args.guard_degree {
        cfg.guards.degree = d;
    }
    if cfg.params.n_max == Some(0) || cfg.params.big_n == Some(0) || cfg.guards.degree == 0 {
        return Err("--n-max, --N and --guard-degree must be positive".into());
    }
    let report = run_command(&cfg, args.command).map_err(|e| e.to_string())?;
    let mut dest: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| format!("{}: {e}", path.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    emit_report(&report, args.format, &mut dest).and_then(|_| dest.flush()).map_err(|e| e.to_string())?;
    for a in report.assertions.iter().filter(|a| !a.passed) {
        log::error!("assertion failed: {}", a.name);
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG as u8)
        }
    }
}
