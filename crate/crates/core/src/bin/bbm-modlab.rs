use std::path::PathBuf;
use std::process::ExitCode;

use bbm_modlab::harness::{list_experiments, run_path, schema, ExitStatus};
use clap::{Parser, Subcommand};

/// Modulation-space estimates and Picard solver for the generalized BBM equation.
#[derive(Parser)]
#[command(name = "bbm-modlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run { config: PathBuf },
    /// List experiments, their config fields and what they measure.
    List,
    /// Print the JSON schema of the config format.
    Schema,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::List => {
            print!("{}", list_experiments());
            ExitCode::SUCCESS
        }
        Command::Schema => {
            println!(
                "{}",
                serde_json::to_string_pretty(&schema()).expect("schema serializes")
            );
            ExitCode::SUCCESS
        }
        Command::Run { config } => match run_path(&config) {
            Ok(run) => {
                for c in &run.manifest.checks {
                    let mark = if c.passed { "pass" } else { "FAIL" };
                    match (c.value, c.limit) {
                        (Some(v), Some(l)) => println!("{mark}  {}  {v:e} <= {l:e}", c.name),
                        _ if c.detail.is_empty() => println!("{mark}  {}", c.name),
                        _ => println!("{mark}  {}  ({})", c.name, c.detail),
                    }
                }
                if let Some(e) = &run.manifest.error {
                    eprintln!("error: {e}");
                }
                println!("outputs: {}", run.dir.display());
                ExitCode::from(run.status.code() as u8)
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(ExitStatus::of_error(&e).code() as u8)
            }
        },
    }
}
