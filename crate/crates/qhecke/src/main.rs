//! Command-line verifier and expander for the q-series identity catalog.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use qhecke::catalog::{Catalog, CatalogError, VerificationReport};
use qhecke::dsl::{eval, parse_expr};

/// Exact q-series engine: verify Hecke-Rogers, theta, Appell-Lerch, and
/// false theta identities to any truncation order.
///
/// Set QHECKE_THREADS to cap verification parallelism (0 = automatic).
#[derive(Parser)]
#[command(name = "qhecke", version, about, verbatim_doc_comment)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// List the registered identities with their sources.
    List {
        /// Merge extra identities from a TOML file.
        #[arg(long, value_name = "FILE")]
        catalog: Option<PathBuf>,
    },
    /// Verify one identity (--id) or the whole catalog (--all).
    Verify {
        /// Identity to verify.
        #[arg(long, conflicts_with = "all")]
        id: Option<String>,
        /// Verify every registered identity.
        #[arg(long)]
        all: bool,
        /// Truncation order (defaults to each record's own order).
        #[arg(long)]
        order: Option<i64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Merge extra identities from a TOML file.
        #[arg(long, value_name = "FILE")]
        catalog: Option<PathBuf>,
    },
    /// Expand an expression as a truncated Laurent series.
    Expand {
        /// Expression in the qhecke DSL, e.g. "f(1,2,1; q,q; q) - Jm(1)^2".
        #[arg(long)]
        expr: String,
        /// Truncation order.
        #[arg(long, default_value_t = 20)]
        order: i64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn load_catalog(path: Option<PathBuf>) -> Result<Catalog, String> {
    match path {
        None => Ok(Catalog::builtin().clone()),
        Some(p) => Catalog::builtin_with_file(&p).map_err(|e| e.to_string()),
    }
}

fn run() -> Result<ExitCode, String> {
    match Cli::parse().command {
        Command::List { catalog } => {
            let catalog = load_catalog(catalog)?;
            for record in catalog.records() {
                println!("{:<24} order {:>4}  {}", record.id, record.order, record.reference);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { id, all, order, format, catalog } => {
            let catalog = load_catalog(catalog)?;
            let results: Vec<Result<VerificationReport, CatalogError>> = if all {
                catalog.verify_all(order)
            } else {
                let id = id.ok_or("verify needs --id <label> or --all")?;
                vec![catalog.verify(&id, order)]
            };
            let mut reports = Vec::with_capacity(results.len());
            for result in results {
                reports.push(result.map_err(|e| e.to_string())?);
            }
            let all_equal = reports.iter().all(|r| r.equal);
            match format {
                Format::Text => {
                    for r in &reports {
                        print_report_line(r);
                    }
                    if all || reports.len() > 1 {
                        let passed = reports.iter().filter(|r| r.equal).count();
                        println!("{}/{} identities verified", passed, reports.len());
                    }
                }
                Format::Json => {
                    let payload = if all {
                        serde_json::to_string_pretty(&reports)
                    } else {
                        serde_json::to_string_pretty(&reports[0])
                    };
                    println!("{}", payload.map_err(|e| e.to_string())?);
                }
            }
            Ok(if all_equal { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Expand { expr, order, format } => {
            let ast = parse_expr(&expr).map_err(|e| e.to_string())?;
            let series = eval(&ast, order).map_err(|e| e.to_string())?;
            match format {
                Format::Text => println!("{}", series),
                Format::Json => {
                    let terms: Vec<serde_json::Value> = series
                        .coefficient_strings()
                        .into_iter()
                        .map(|(e, c)| json!([e, c]))
                        .collect();
                    let payload = json!({ "expr": expr, "order": order, "terms": terms });
                    println!("{}", serde_json::to_string_pretty(&payload).map_err(|e| e.to_string())?);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn print_report_line(report: &VerificationReport) {
    if report.equal {
        println!("ok   {:<24} order {:>4}  ({} ms)", report.id, report.order, report.elapsed_ms);
    } else {
        println!(
            "FAIL {:<24} order {:>4}  first mismatch at q^{}: lhs {} vs rhs {}",
            report.id,
            report.order,
            report.first_mismatch_exponent.unwrap(),
            report.lhs_coeff.as_deref().unwrap_or("?"),
            report.rhs_coeff.as_deref().unwrap_or("?"),
        );
    }
}
