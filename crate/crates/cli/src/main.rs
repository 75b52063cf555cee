//! Command-line front end for `coagkernel`.

mod config;
mod output;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use coagkernel::{
    average_kernel, build_trace_with_cap, double_integral, exact_ii, gauss_laguerre_rule_with_cap,
    BuiltinKernel, Derivation, FitMethod, Kernel, StabilityCap,
};
use serde_json::json;

use config::Settings;
use report::ReportOptions;

#[derive(Parser)]
#[command(
    name = "coagkernel",
    version,
    about = "Average coagulation kernels by Gauss-Laguerre quadrature"
)]
struct Cli {
    /// Settings file with `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Largest node count accepted (overrides the config file).
    #[arg(long, global = true)]
    cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum NodeFormat {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ValueFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Markdown,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the nodes and weights of an n-point rule.
    Nodes {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: NodeFormat,
    },
    /// Evaluate the double integral and average kernel for one kernel.
    Integrate {
        #[arg(long)]
        kernel: String,
        #[arg(long, default_value_t = 99)]
        n: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: ValueFormat,
    },
    /// Write the convergence trace `n,Q,epsilon` as CSV.
    Sweep {
        #[arg(long)]
        kernel: String,
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long, default_value_t = 99)]
        n_max: usize,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare quadrature against closed forms for CR, SC, FM and SD.
    Report {
        /// Node count for Q and p.
        #[arg(long, default_value_t = 300)]
        n: usize,
        /// Last node count of the trace used for epsilon, C and R.
        #[arg(long, default_value_t = 360)]
        tail_n: usize,
        #[arg(long)]
        fit: Option<FitMethod>,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long, value_enum, default_value = "markdown")]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the closed-form double integrals.
    Exact {
        #[arg(long)]
        kernel: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: ValueFormat,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => output::write_atomic(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut settings = match &cli.config {
        Some(path) => Settings::load(path)?,
        None => Settings::default(),
    };
    if let Some(cap) = cli.cap {
        settings.stability_cap = StabilityCap::new(cap)?;
    }
    let cap = settings.stability_cap;

    match cli.command {
        Command::Nodes { n, format } => {
            let rule = gauss_laguerre_rule_with_cap(usize::try_from(n)?, cap)?;
            let text = match format {
                NodeFormat::Text => output::nodes_text(&rule),
                NodeFormat::Csv => output::nodes_csv(&rule)?,
                NodeFormat::Json => output::nodes_json(&rule)? + "\n",
            };
            emit(&text, None)
        }
        Command::Integrate { kernel, n, format } => {
            let kernel = Kernel::by_name(&kernel)?;
            let rule = gauss_laguerre_rule_with_cap(n, cap)?;
            let q_value = double_integral(&rule, &kernel)?;
            let ak = average_kernel(&kernel, &rule)?;
            match format {
                ValueFormat::Text => println!(
                    "kernel: {}\nn: {n}\nQ: {q_value}\np: {}\nq: {}\naverage kernel: {}",
                    kernel.id(),
                    ak.p,
                    ak.q,
                    ak.expression(4)
                ),
                ValueFormat::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "kernel": kernel.id().to_string(),
                        "n": n,
                        "Q": q_value,
                        "p": ak.p,
                        "q": ak.q.to_string(),
                        "expression": ak.expression(4),
                    }))?
                ),
            }
            Ok(())
        }
        Command::Sweep {
            kernel,
            n_min,
            n_max,
            out,
        } => {
            let kernel = Kernel::by_name(&kernel)?;
            let trace = build_trace_with_cap(&kernel, n_min, n_max, cap)?;
            emit(&output::trace_csv(&trace)?, out.as_ref())
        }
        Command::Report {
            n,
            tail_n,
            fit,
            window,
            format,
            out,
        } => {
            let window = window.unwrap_or(settings.fit_window);
            if window < 2 {
                bail!("--window must be at least 2");
            }
            let opts = ReportOptions {
                n,
                tail_n,
                window,
                method: fit.unwrap_or(settings.fit_method),
                cap,
            };
            let rows = report::report(&opts)?;
            let text = match format {
                ReportFormat::Markdown => output::report_markdown(&rows),
                ReportFormat::Csv => output::report_csv(&rows)?,
                ReportFormat::Json => output::report_json(&rows)? + "\n",
            };
            emit(&text, out.as_ref())
        }
        Command::Exact { kernel, format } => {
            let kinds = match kernel {
                Some(name) => vec![name.parse::<BuiltinKernel>()?],
                None => BuiltinKernel::PHYSICAL.to_vec(),
            };
            let values = kinds
                .into_iter()
                .map(exact_ii)
                .collect::<coagkernel::Result<Vec<_>>>()?;
            match format {
                ValueFormat::Text => {
                    for v in &values {
                        let how = match v.derivation {
                            Derivation::GammaClosedForm => "gamma closed form",
                            Derivation::GammaPlus1dIntegral => "gamma reduction + 1-D integral",
                        };
                        println!("{:<4} {:.15}  ({how})", v.kernel.label(), v.value);
                    }
                }
                ValueFormat::Json => {
                    let rows: Vec<_> = values
                        .iter()
                        .map(|v| json!({ "kernel": v.kernel.label(), "exact_II": v.value, "p": v.value / 2.0 }))
                        .collect();
                    println!("{}", serde_json::to_string_pretty(&rows)?);
                }
            }
            Ok(())
        }
    }
}
