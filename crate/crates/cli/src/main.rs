#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::{default_tolerance, fmt_num, CliError, Outcome, EXIT_INPUT};

fn header(cli: &Cli, tolerance: f64) -> String {
    let detail = match &cli.command {
        Command::Table(a) => format!("table cw={} samples={}", a.cw, a.samples),
        Command::Verify(a) => format!(
            "verify loss={} trials={} sizes={} min_mass={}",
            a.loss,
            a.trials,
            a.sizes.iter().map(usize::to_string).collect::<Vec<_>>().join(","),
            a.min_mass
        ),
        Command::Divergence(a) => format!(
            "divergence loss={} pg={} pr={} f={}",
            a.loss,
            a.pg.display(),
            a.pr.display(),
            if a.numeric_f { "numeric" } else { "table" }
        ),
        Command::Conjugate(a) => format!(
            "conjugate loss={} s_grid={} dual={} conjugate_grid={}",
            a.loss,
            a.s_grid,
            a.dual,
            a.conjugate_grid.map_or("none".to_string(), |g| g.to_string())
        ),
        Command::Bound(a) => format!(
            "bound loss={} pr={} pg={} witness={}",
            a.loss,
            a.pr.display(),
            a.pg.display(),
            a.witness
        ),
        Command::Train(a) => format!(
            "train loss={} target={} max_iters={} lr={} fd_step={} stop_tv={} preconditioned={}",
            a.loss,
            a.target.display(),
            a.max_iters,
            a.lr,
            a.fd_step,
            a.stop_tv,
            !a.plain
        ),
    };
    format!(
        "# lossdiv {} {detail} seed={} tolerance={}\n",
        env!("CARGO_PKG_VERSION"),
        cli.seed,
        fmt_num(tolerance)
    )
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Table(_) => "table",
        Command::Verify(_) => "verify",
        Command::Divergence(_) => "divergence",
        Command::Conjugate(_) => "conjugate",
        Command::Bound(_) => "bound",
        Command::Train(_) => "train",
    }
}

fn write_file(path: &std::path::Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let tolerance = cli
        .tolerance
        .unwrap_or_else(|| default_tolerance(command_name(&cli.command)));
    if !(tolerance.is_finite() && tolerance >= 0.0) {
        return Err(CliError::input("--tolerance must be finite and non-negative"));
    }
    let header = header(cli, tolerance);
    match &cli.command {
        Command::Table(a) => commands::run_table(a, tolerance, header),
        Command::Verify(a) => commands::run_verify(a, cli.seed, tolerance, header),
        Command::Divergence(a) => commands::run_divergence(a, header),
        Command::Conjugate(a) => commands::run_conjugate(a, tolerance, header),
        Command::Bound(a) => commands::run_bound(a, cli.seed, tolerance, header),
        Command::Train(a) => {
            let (outcome, trace) = commands::run_train(a, cli.seed, header)?;
            if let (Some(path), Some(trace)) = (&a.out, trace) {
                write_file(path, &trace)?;
            }
            Ok(outcome)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { 0 });
        }
    };
    let result = run(&cli).and_then(|outcome| {
        match &cli.output {
            Some(path) => write_file(path, &outcome.text)?,
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(outcome.text.as_bytes())
                    .and_then(|_| stdout.flush())
                    .map_err(|e| CliError::input(format!("stdout: {e}")))?;
            }
        }
        Ok(outcome.code)
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
