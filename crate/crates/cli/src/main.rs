mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;
use qael::json::to_canonical_string;
use qael::{Error, Tolerances};
use serde_json::json;

use args::{Cli, Command};
use commands::Failure;

fn exit_code(f: &Failure) -> u8 {
    match f {
        Failure::Usage(_) => 1,
        Failure::Invariant { .. } => 4,
        Failure::Core(e) => match e.root() {
            Error::Assumption { .. } => 2,
            Error::Order2Unavailable(_) => 3,
            Error::Linalg(_) | Error::NonFinite(_) => 4,
            _ => 1,
        },
    }
}

fn report(f: &Failure) {
    let status = match f {
        Failure::Usage(msg) => {
            eprintln!("error: {msg}");
            return;
        }
        Failure::Invariant { name, value, limit } => {
            eprintln!("error: invariant {name} failed ({value:e} > {limit:e})");
            json!({ "status": "invariant_failed", "invariant": name, "value": value, "limit": limit })
        }
        Failure::Core(e) => {
            eprintln!("error: {e}");
            match e.root() {
                Error::Assumption { check, detail } => {
                    json!({ "status": "assumption_failed", "check": check.as_str(), "detail": detail })
                }
                Error::Order2Unavailable(reason) => {
                    json!({ "status": "order2_unavailable", "reason": reason })
                }
                Error::Linalg(msg) | Error::NonFinite(msg) => {
                    json!({ "status": "invariant_failed", "invariant": "numerical", "detail": msg })
                }
                _ => return,
            }
        }
    };
    print!("{}", to_canonical_string(&status));
}

fn run(cli: Cli) -> Result<(), Failure> {
    let tol =
        Tolerances::from_env().map_err(|e| Failure::Usage(format!("tolerance overrides: {e}")))?;
    let seed = cli.seed;
    match cli.command {
        Command::Analyze { source, out } => commands::analyze(&source, out.as_deref(), &tol),
        Command::Reduce {
            source,
            order,
            epsilon,
            out,
        } => commands::reduce_cmd(&source, order, epsilon, out.as_deref(), &tol),
        Command::Validate {
            source,
            order,
            epsilon,
            run,
        } => commands::validate(&source, order, epsilon, &run, seed, &tol),
        Command::Sweep {
            source,
            order,
            epsilons,
            run,
            jobs,
        } => commands::sweep(&source, order, &epsilons, &run, jobs, seed, &tol),
        Command::Example {
            name,
            params,
            emit_model,
            order,
            out,
        } => commands::example(name, &params, emit_model, order, out.as_ref(), &tol),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            report(&f);
            ExitCode::from(exit_code(&f))
        }
    }
}
