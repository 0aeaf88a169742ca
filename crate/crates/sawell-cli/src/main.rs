mod cli;
mod commands;
mod error;
mod input;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use cli::{Cli, Command};
use error::CliError;

/// Tolerance on the startup check of the analytic continuation between the
/// real and imaginary spectral determinants.
const CONTINUATION_TOL: f64 = 1e-10;

fn run(cli: &Cli) -> Result<String, CliError> {
    let defect = sawell::spectral::continuation_self_test(32);
    if !(defect <= CONTINUATION_TOL) {
        return Err(CliError::Numerical(format!("determinant continuation self-test failed (defect {defect:e})")));
    }
    match &cli.command {
        Command::Classify { ext, roots } => commands::classify_cmd(&input::extension(ext)?, &input::root_config(roots)?, cli.format),
        Command::Spectrum {
            ext,
            roots,
            count,
            oracle,
            grid,
        } => commands::spectrum_cmd(
            &input::extension(ext)?,
            &input::root_config(roots)?,
            *count,
            oracle.then_some(grid),
            cli.format,
        ),
        Command::Scan(args) => commands::scan_cmd(args, cli.format),
        Command::Susy {
            ext,
            roots,
            order,
            points,
            states,
            output_dir,
        } => commands::susy_cmd(&input::extension(ext)?, &input::root_config(roots)?, *order, *points, *states, output_dir),
        Command::Legendre {
            family,
            ell,
            n,
            points,
            theta_max,
            norm_eps,
        } => commands::legendre_cmd(*family, *ell, *n, *points, *theta_max, norm_eps, cli.format),
        Command::Oracle { ext, roots, grid, k, partner } => {
            commands::oracle_cmd(&input::extension(ext)?, &input::root_config(roots)?, grid, *k, *partner, cli.format)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|text| {
        match &cli.output {
            Some(path) => std::fs::write(path, text)?,
            None => std::io::stdout().write_all(text.as_bytes())?,
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sawell: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
