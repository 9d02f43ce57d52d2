use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use ore_shape::cli::{exit_code, run_command, Command, Options};

/// Shape bases and normal position for zero-dimensional ideals of
/// differential operators.
#[derive(Debug, Parser)]
#[command(name = "ore-shape", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Ideal file; `-` reads standard input
    file: PathBuf,
    /// Emit a JSON document instead of text
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    options: Options,
}

fn read_input(path: &PathBuf) -> std::io::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let input = match read_input(&cli.file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cli.file.display());
            return ExitCode::from(1);
        }
    };
    match run_command(cli.command, &cli.options, &input) {
        Ok(doc) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&doc.to_json()).expect("JSON values serialize")
                );
            } else {
                print!("{}", doc.to_text());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
