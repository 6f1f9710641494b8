//! Command-line front end: analyze a graph file, emit a family
//! construction, or run the claim-verification suite.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use hypergraphx::report::{analysis_json, analysis_text, analyze, RulesConfig};
use hypergraphx::verify::{verification_json, verification_text, verify_claims};
use hypergraphx::{build_family, parse_graph, Budget};

#[derive(Parser)]
#[command(
    name = "hypergraphx",
    about = "Topological invariants of finite graphs: hyperspace types through a point, \
             symmetry orbits, and certified counts",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Invariant rule set: `paper` uses only fully proved invariants and
    /// merge rules; `extended` adds the conjectured ordinary-point fields
    /// and the swap extension of the gluing rule.
    #[arg(long, global = true, value_enum, default_value_t = RulesArg::Extended)]
    rules: RulesArg,
    /// Compute k-od core numbers (exhaustive search; may hit the budget).
    #[arg(long, global = true)]
    kappa: bool,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Cap on the subdivided-edge count enumerated by the k-od core search;
    /// overrides the HYPERGRAPHX_BUDGET environment variable.
    #[arg(long, global = true)]
    budget: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a graph from a text file (vertex/edge lines).
    Analyze { file: PathBuf },
    /// Print a built-in family graph (example, sn, pi, qi, xn, yn).
    Family { name: String, param: Option<u32> },
    /// Run the full reference-claim suite and print a status table.
    VerifyPaper,
}

#[derive(Clone, Copy, ValueEnum)]
enum RulesArg {
    Paper,
    Extended,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

fn effective_config(cli: &Cli) -> anyhow::Result<RulesConfig> {
    let mut config = match cli.rules {
        RulesArg::Paper => RulesConfig::paper(),
        RulesArg::Extended => RulesConfig::extended(),
    };
    config.kappa = cli.kappa;
    let env_budget = match std::env::var("HYPERGRAPHX_BUDGET") {
        Ok(s) => Some(
            s.parse::<usize>()
                .with_context(|| format!("invalid HYPERGRAPHX_BUDGET value `{s}`"))?,
        ),
        Err(_) => None,
    };
    if let Some(cap) = cli.budget.or(env_budget) {
        config.budget = Budget::with_subdivided_edge_cap(cap);
    }
    Ok(config)
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let config = effective_config(cli)?;
    match &cli.command {
        Command::Analyze { file } => {
            let text = std::fs::read_to_string(file)
                .with_context(|| format!("cannot read `{}`", file.display()))?;
            let graph = parse_graph(&text)
                .with_context(|| format!("cannot parse `{}`", file.display()))?;
            let report = analyze(&graph, &config)?;
            match cli.format {
                FormatArg::Json => {
                    println!("{}", serde_json::to_string_pretty(&analysis_json(&report))?)
                }
                FormatArg::Text => print!("{}", analysis_text(&report)),
            }
            Ok(true)
        }
        Command::Family { name, param } => {
            let family = build_family(name, *param)?;
            print!("{}", family.serialize_with_landmarks());
            Ok(true)
        }
        Command::VerifyPaper => {
            let report = verify_claims(&config);
            match cli.format {
                FormatArg::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&verification_json(&report))?
                ),
                FormatArg::Text => print!("{}", verification_text(&report)),
            }
            Ok(report.passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
