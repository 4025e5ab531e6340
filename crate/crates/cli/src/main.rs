use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use quadric_landau_cli::{execute, CliError, Command, Format, Invocation};

/// Landau problems on quadrics of revolution.
#[derive(Debug, Parser)]
#[command(name = "quadric-landau", version)]
struct Args {
    command: Command,
    /// Scenario configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Output to compare against.
    #[arg(long, requires = "tol")]
    compare: Option<PathBuf>,
    /// Largest absolute deviation accepted by `--compare`.
    #[arg(long, requires = "compare")]
    tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let err = CliError::new("UsageError", e.render().to_string().trim());
            eprintln!("{}", err.to_json());
            return ExitCode::from(2);
        }
    };
    let inv = Invocation {
        command: args.command,
        config: args.config,
        out: args.out,
        format: args.format.map(|f| match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }),
        compare: args.compare.zip(args.tol),
    };
    match execute(&inv) {
        Ok(outcome) => {
            if outcome.out.is_none() {
                print!("{}", outcome.rendered);
            }
            match outcome.comparison {
                None => ExitCode::SUCCESS,
                Some(report) => {
                    let text = serde_json::to_string_pretty(&report).expect("report serializes");
                    // keep standard output clean when it carries the command output
                    if outcome.out.is_none() {
                        eprintln!("{text}");
                    } else {
                        println!("{text}");
                    }
                    if report.pass {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(3)
                    }
                }
            }
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(2)
        }
    }
}
