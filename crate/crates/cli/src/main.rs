//! Batch front-end. Exit codes: 0 success, 1 usage or configuration
//! error, 2 a numerical check failed.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod goursat;
mod output;
mod summary;
mod verify;

use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use output::{create, Failure, Outcome};
use summary::Summary;

fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Density { .. } => "density",
        Command::Apply { .. } => "apply",
        Command::Symbol { .. } => "symbol",
        Command::Goursat { .. } => "goursat",
        Command::Verify { .. } => "verify",
        Command::Sample { .. } => "sample",
        Command::Growth { .. } => "growth",
    }
}

fn dispatch(cli: &Cli, sum: &mut Summary) -> Outcome {
    let c = &cli.common;
    match &cli.command {
        Command::Density {
            family,
            times,
            allow_undecayed,
        } => commands::density(family, times, *allow_undecayed, c, sum),
        Command::Apply {
            family,
            times,
            input,
            method,
            binary,
        } => commands::apply(family, times, input.as_deref(), *method, *binary, c, sum),
        Command::Symbol {
            family,
            times,
            method,
            fd_step,
        } => commands::symbol(family, times, *method, *fd_step, c, sum),
        Command::Goursat { problem } => goursat::run(problem, c, sum),
        Command::Verify { suite } => verify::run(*suite, c, sum),
        Command::Sample { family, times, m } => commands::sample(family, times, *m, c, sum),
        Command::Growth {
            family,
            times,
            sigma,
            r_min,
            r_max,
            count,
        } => commands::growth(family, times, sigma, *r_min, *r_max, *count, c, sum),
    }
}

fn write_summary(cli: &Cli, sum: &Summary) -> Outcome {
    let text = serde_json::to_string_pretty(sum).map_err(|e| Failure::Usage(e.to_string()))?;
    println!("{text}");
    let (mut w, _) = create(&cli.common.out, "summary.json")?;
    std::io::Write::write_all(&mut w, text.as_bytes())
        .and_then(|_| std::io::Write::flush(&mut w))
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let mut sum = Summary::new(name(&cli.command));
    sum.input("threads", cli.common.threads);
    let start = Instant::now();
    let result = match cli.common.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(&cli, &mut sum)),
            Err(e) => Err(Failure::Usage(format!("cannot start {t} threads: {e}"))),
        },
        None => dispatch(&cli, &mut sum),
    };
    sum.timings.insert("total_seconds".into(), start.elapsed().as_secs_f64());
    let mut code = match &result {
        Ok(()) if sum.all_passed() => 0,
        Ok(()) => 2,
        Err(Failure::Usage(_)) => 1,
        Err(Failure::Accuracy(_)) => 2,
    };
    if let Err(f) = &result {
        eprintln!("error: {}", f.message());
        sum.error = Some(f.message().to_string());
    }
    sum.passed = code == 0;
    if let Err(f) = write_summary(&cli, &sum) {
        eprintln!("error: {}", f.message());
        code = code.max(1);
    }
    ExitCode::from(code)
}
