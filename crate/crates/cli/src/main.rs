//! `spectral` — compute and verify spectral curves of the Halphen and Lamé
//! operators, exactly.
//!
//! Exit codes: 0 success, 1 verification failure (or partial table failure),
//! 2 invalid input, 3 internal assertion failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use spectral::emit;
use spectral::halphen;
use spectral::lame;
use spectral::verify;
use spectral::Error;

#[derive(Parser)]
#[command(
    name = "spectral",
    version,
    about = "Exact spectral curves of the Halphen and Lamé operators"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Operator {
    Halphen,
    Lame,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum Format {
    #[default]
    Text,
    Json,
    Latex,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the spectral curve for one genus
    Curve {
        #[arg(value_enum)]
        operator: Operator,
        /// Genus (halphen: g >= 1 with g != 2 mod 3; lame: g >= 1)
        #[arg(long)]
        g: u32,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Write to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the exact verification suite for one genus
    Verify {
        #[arg(long, value_enum)]
        operator: Operator,
        #[arg(long)]
        g: u32,
        /// Also run the chi-equation check (expensive)
        #[arg(long)]
        deep: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Curves for every valid genus up to a bound, one JSON object per line
    Table {
        #[arg(long, value_enum)]
        operator: Operator,
        #[arg(long)]
        g_max: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::InvalidGenus(_) | Error::NotInCorpus(_) | Error::BadCurveDocument(_) => 2,
        _ => 3,
    }
}

fn emit_output(text: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {:?}: {}", path, e)),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn curve_text(operator: Operator, g: u32, format: Format) -> Result<String, Error> {
    match operator {
        Operator::Halphen => {
            let curve = halphen::spectral_curve(g)?;
            Ok(match format {
                Format::Text => format!("{}\n", emit::text_curve(3, &curve.f)),
                Format::Latex => format!("{}\n", emit::latex_curve(3, &curve.f)),
                Format::Json => {
                    format!("{}\n", serde_json::to_string(&emit::halphen_curve_to_json(&curve)).unwrap())
                }
            })
        }
        Operator::Lame => {
            if g < 1 {
                return Err(Error::InvalidGenus(g));
            }
            let data = lame::lame_data(g);
            Ok(match format {
                Format::Text => format!("{}\n", emit::text_curve(2, &data.curve_rhs)),
                Format::Latex => format!("{}\n", emit::latex_curve(2, &data.curve_rhs)),
                Format::Json => {
                    format!("{}\n", serde_json::to_string(&emit::lame_curve_to_json(&data)).unwrap())
                }
            })
        }
    }
}

fn run_curve(operator: Operator, g: u32, format: Format, out: Option<PathBuf>) -> ExitCode {
    match curve_text(operator, g, format) {
        Ok(text) => match emit_output(&text, out.as_ref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {}", e);
                ExitCode::from(3)
            }
        },
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn run_verify(
    operator: Operator,
    g: u32,
    deep: bool,
    format: Format,
    out: Option<PathBuf>,
) -> ExitCode {
    let report = match operator {
        Operator::Halphen => verify::halphen_report(g, deep),
        Operator::Lame => verify::lame_report(g),
    };
    match report {
        Ok(report) => {
            let text = match format {
                Format::Json => format!("{}\n", serde_json::to_string(&report.to_json()).unwrap()),
                Format::Text => report.to_table(),
                Format::Latex => {
                    eprintln!("error: latex output is not available for verify");
                    return ExitCode::from(2);
                }
            };
            if let Err(e) = emit_output(&text, out.as_ref()) {
                eprintln!("error: {}", e);
                return ExitCode::from(3);
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn run_table(operator: Operator, g_max: u32, out: Option<PathBuf>) -> ExitCode {
    if g_max < 1 {
        eprintln!("error: --g-max must be at least 1");
        return ExitCode::from(2);
    }
    let genera: Vec<u32> = match operator {
        Operator::Halphen => halphen::valid_genera(g_max),
        Operator::Lame => (1..=g_max).collect(),
    };
    // independent genera fan out to workers; emission stays ordered by g
    let rows: Vec<(u32, Result<String, Error>)> = genera
        .par_iter()
        .map(|&g| (g, curve_text(operator, g, Format::Json)))
        .collect();
    let mut text = String::new();
    let mut failed = false;
    for (g, row) in rows {
        match row {
            Ok(line) => text.push_str(&line),
            Err(e) => {
                failed = true;
                text.push_str(&format!(
                    "{}\n",
                    serde_json::json!({ "g": g, "error": e.to_string() })
                ));
            }
        }
    }
    if let Err(e) = emit_output(&text, out.as_ref()) {
        eprintln!("error: {}", e);
        return ExitCode::from(3);
    }
    if failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Curve { operator, g, format, out } => run_curve(operator, g, format, out),
        Cmd::Verify { operator, g, deep, format, out } => {
            run_verify(operator, g, deep, format, out)
        }
        Cmd::Table { operator, g_max, out } => run_table(operator, g_max, out),
    }
}
