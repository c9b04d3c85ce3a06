use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use delaykern::workbench::{run, Command, Format};
use delaykern::Error;

/// Delay-aware H2 gain synthesis, kernels, and verification oracles.
#[derive(Debug, Parser)]
#[command(name = "delaykern", version, about)]
struct Cli {
    #[arg(value_enum, env = "DELAYKERN_COMMAND")]
    command: Command,

    /// JSON config; omitted fields take their defaults.
    #[arg(long, env = "DELAYKERN_CONFIG")]
    config: Option<PathBuf>,

    #[arg(long, env = "DELAYKERN_OUT", default_value = "out")]
    out: PathBuf,

    #[arg(long, value_enum, env = "DELAYKERN_FORMAT", default_value = "csv")]
    format: Format,
}

fn report(kind: &str, message: &str, code: u8) -> ExitCode {
    eprintln!("{}", serde_json::json!({ "error": kind, "message": message, "exit_code": code }));
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return report("usage", e.to_string().trim_end(), 2),
    };
    match run(cli.command, cli.config.as_deref(), &cli.out, cli.format) {
        Ok(summary) => {
            for f in &summary.files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => report(e.kind(), &e.to_string(), exit_code(&e)),
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_numerical() {
        3
    } else {
        2
    }
}
