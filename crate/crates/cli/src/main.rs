use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use convdom::args::Cli;
use convdom::{early_error, run, Outcome, EXIT_ERROR};

fn emit(outcome: &Outcome, json_path: Option<&Path>, csv_path: Option<&Path>) -> i32 {
    let written = match json_path {
        Some(p) => fs::write(p, &outcome.json),
        None => std::io::stdout().write_all(outcome.json.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("convdom: cannot write report: {e}");
        return EXIT_ERROR;
    }
    if let (Some(p), Some(body)) = (csv_path, &outcome.csv) {
        if let Err(e) = fs::write(p, body) {
            eprintln!("convdom: cannot write {}: {e}", p.display());
            return EXIT_ERROR;
        }
    }
    outcome.exit_code
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            e.exit()
        }
        Err(e) => {
            let msg = e.render().to_string();
            eprint!("{msg}");
            let out = early_error(None, "UsageError", msg.trim(), None);
            return ExitCode::from(emit(&out, None, None) as u8);
        }
    };
    let (name, json_path) = {
        use convdom::args::Cmd::*;
        match &cli.command {
            CheckClass { common, .. } => ("check-class", common.json.clone()),
            CheckDominated { common, .. } => ("check-dominated", common.json.clone()),
            VerifyHh { common, .. } => ("verify-hh", common.json.clone()),
            Decompose { common, .. } => ("decompose", common.json.clone()),
            Crosscheck { common } => ("crosscheck", common.json.clone()),
        }
    };
    let config = match cli.command.into_config() {
        Ok(c) => c,
        Err(e) => {
            let out = early_error(Some(name), e.kind(), &e.to_string(), Some(&e));
            return ExitCode::from(emit(&out, json_path.as_deref(), None) as u8);
        }
    };
    let outcome = run(&config);
    let code = emit(
        &outcome,
        config.output_path.as_deref(),
        config.csv_path.as_deref(),
    );
    ExitCode::from(code as u8)
}
