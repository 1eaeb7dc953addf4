use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use mhx_cli::{run, Args, EXIT_INPUT};

fn main() -> ExitCode {
    let args = Args::parse();
    let out = run(&args);
    let text = serde_json::to_string_pretty(&out.report).expect("report serializes");
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("cannot write {path}: {e}");
                return ExitCode::from(EXIT_INPUT as u8);
            }
        }
        None => {
            let _ = writeln!(std::io::stdout(), "{text}");
        }
    }
    ExitCode::from(out.code as u8)
}
