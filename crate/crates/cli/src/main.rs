//! `lame-qes`: band edges of the associated Lamé potential.
//!
//! Exit codes: 0 success, 1 failed verification, 2 invalid input.

mod document;
mod render;

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lame_qes::published::PublishedCase;
use lame_qes::verify::{crosscheck_with, discriminant_trace_with, DEFAULT_STEPS};
use lame_qes::{parse_rational, PotentialParams};

#[derive(Parser)]
#[command(name = "lame-qes", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for all QES band edges.
    #[command(allow_negative_numbers = true)]
    Solve {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Solve, then cross-check every energy against the Floquet discriminant.
    #[command(allow_negative_numbers = true)]
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Write the discriminant Δ(E) on a uniform energy grid as CSV.
    #[command(allow_negative_numbers = true)]
    Bands {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        emin: f64,
        #[arg(long)]
        emax: f64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce the published table for (2, 1) or (7/2, 1/2).
    #[command(allow_negative_numbers = true)]
    Tables {
        #[arg(long)]
        which: u8,
        #[arg(long)]
        m: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args)]
struct ParamArgs {
    /// Integer or p/q rational, e.g. 7/2.
    #[arg(long = "a")]
    a: String,
    #[arg(long = "b")]
    b: String,
    #[arg(long)]
    m: f64,
    /// A number, or "paper" for the published cases' zero-ground-state shift.
    #[arg(long, default_value = "0")]
    shift: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Self { code: 2, message: message.to_string() }
    }
}

impl From<lame_qes::Error> for Failure {
    fn from(e: lame_qes::Error) -> Self {
        Self::input(e)
    }
}

impl ParamArgs {
    fn resolve(&self) -> Result<PotentialParams, Failure> {
        let a = parse_rational(&self.a)?;
        let b = parse_rational(&self.b)?;
        let shift = if self.shift.trim() == "paper" {
            // Validate first so the mixed case reports as such.
            PotentialParams::new(a, b, self.m, 0.0)?;
            PublishedCase::matching(a, b)
                .ok_or_else(|| {
                    Failure::input(format!(
                        "--shift paper is only defined for (a, b) = (2, 1) and (7/2, 1/2), not ({a}, {b})"
                    ))
                })?
                .shift(self.m)
        } else {
            self.shift
                .trim()
                .parse::<f64>()
                .map_err(|_| Failure::input(format!("--shift '{}' is neither a number nor 'paper'", self.shift)))?
        };
        Ok(PotentialParams::new(a, b, self.m, shift)?)
    }
}

fn emit(text: &str) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Failure { code: 1, message: format!("writing output: {e}") })
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| Failure { code: 1, message: format!("serializing output: {e}") })
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve { params, format } => {
            let p = params.resolve()?;
            let (doc, _) = document::build(&p)?;
            emit(&match format {
                Format::Json => to_json(&doc)?,
                Format::Text => render::solution(&doc),
            })
        }
        Command::Verify { params, steps, format } => {
            let p = params.resolve()?;
            if steps == 0 {
                return Err(Failure::input("--steps must be positive"));
            }
            let (mut doc, solutions) = document::build(&p)?;
            let report = crosscheck_with(&solutions, &p, steps)?;
            let passed = report.passed;
            doc.verification = Some(report);
            emit(&match format {
                Format::Json => to_json(&doc)?,
                Format::Text => render::solution(&doc),
            })?;
            if passed {
                Ok(())
            } else {
                Err(Failure { code: 1, message: "verification failed".into() })
            }
        }
        Command::Bands { params, emin, emax, samples, steps, out } => {
            let p = params.resolve()?;
            let sink: Box<dyn Write> = match &out {
                Some(path) => Box::new(
                    File::create(path)
                        .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?,
                ),
                None => Box::new(io::stdout().lock()),
            };
            let trace = discriminant_trace_with(&p, emin, emax, samples, steps)?;
            if steps < 1000 {
                eprintln!("warning: steps = {steps} is below 1000; delta is at the integrator's resolution limit");
            }
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(sink);
            let io_err = |e: csv::Error| Failure { code: 1, message: format!("writing CSV: {e}") };
            w.write_record(["energy", "delta"]).map_err(io_err)?;
            for s in trace {
                w.write_record([format!("{:.11e}", s.energy), format!("{:.11e}", s.delta)])
                    .map_err(io_err)?;
            }
            w.flush().map_err(|e| Failure { code: 1, message: format!("writing CSV: {e}") })
        }
        Command::Tables { which, m, format } => {
            let case = PublishedCase::from_table(which)
                .ok_or_else(|| Failure::input(format!("--which must be 4 or 5, got {which}")))?;
            let doc = document::table(case, m)?;
            emit(&match format {
                Format::Json => to_json(&doc)?,
                Format::Text => render::table(&doc),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
