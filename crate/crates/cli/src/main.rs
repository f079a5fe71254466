use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use subharm_cli::{exit, run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::CONFIG
            } else {
                exit::OK
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let report = run(&cli);
    if let Some(err) = &report.error {
        eprintln!("error: {err}");
    }
    let json = report.to_json();
    let written = match &cli.json_out {
        Some(path) => std::fs::write(path, &json).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(json.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(exit::CONFIG as u8);
    }
    ExitCode::from(report.exit_code as u8)
}
