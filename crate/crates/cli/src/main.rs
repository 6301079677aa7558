use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use ffperiods_cli::{run, Cli, CliError, Outcome};

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match cli.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
            pool.install(|| run(cli))
        }
        None => run(cli),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let json = outcome.report.to_json();
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &json) {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let mut out = std::io::stdout().lock();
    if cli.json {
        let _ = writeln!(out, "{json}");
    } else {
        for line in &outcome.text {
            let _ = writeln!(out, "{line}");
        }
        if let Some(p) = outcome.report.pass {
            let _ = writeln!(out, "{}", if p { "PASS" } else { "FAIL" });
        }
    }
    if cli.require_pass && outcome.report.pass == Some(false) {
        return ExitCode::from(4);
    }
    ExitCode::SUCCESS
}
