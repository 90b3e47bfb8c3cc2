//! `ifns` — summability transforms and statistical-convergence
//! diagnostics for sequences in intuitionistic fuzzy normed spaces.
//!
//! Exit codes: 0 success (all claims hold), 1 a claimed verdict was
//! contradicted at scale, 2 a claim came back inconclusive, 64 usage
//! error, 65 inconsistent data (e.g. space mismatch), 74 I/O failure.

mod record;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use ifns_core::axioms::AxiomCheckConfig;
use ifns_core::diagnostics::{OrdinaryReport, TestParams};
use ifns_core::harness::{build_table, summarize_stat, StatSummary};
use ifns_core::report::table_to_csv;
use ifns_core::{
    check_axioms, ordinary_convergence_verdict, sample_axiom_inputs, stat_limit_verdict,
    verify_example, Element, ExampleId, Method, Sequence, SpaceKind, StandardIfNorm,
};

use record::{write_report, RunRecord};

#[derive(Parser)]
#[command(
    name = "ifns",
    version,
    about = "Cesàro, Hölder and logarithmic summability diagnostics in intuitionistic fuzzy normed spaces"
)]
struct Cli {
    /// Seed for the deterministic samplers; echoed in every report.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one bundled example end to end and check its claimed verdicts.
    VerifyExample {
        /// Example number, 1..=4.
        example: u8,
        /// Window length override.
        #[arg(long)]
        n: Option<u64>,
        /// Grid sample count override for the function-space examples.
        #[arg(long)]
        grid: Option<usize>,
        /// Report path; stdout when omitted. Relative paths resolve
        /// against IFNS_OUT_DIR.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide statistical and ordinary convergence of a sequence or of
    /// one of its mean tables against a candidate limit.
    Diagnose {
        /// Sequence name; see `list-sequences`.
        #[arg(long)]
        seq: String,
        /// Mean to apply first: cesaro, holder:M, log or iterlog:M.
        /// Without it the raw sequence is diagnosed.
        #[arg(long)]
        method: Option<String>,
        /// Candidate limit: a scalar, or the constant function with this
        /// value for grid sequences (0 = the zero element).
        #[arg(long)]
        limit: f64,
        /// Fuzziness scales, comma separated.
        #[arg(long, value_delimiter = ',')]
        t: Option<Vec<f64>>,
        /// Levels in (0, 1), comma separated.
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
        /// Window length.
        #[arg(long)]
        n: Option<u64>,
        /// Density threshold for a supported verdict.
        #[arg(long)]
        delta: Option<f64>,
        /// Grid sample count for function-space sequences.
        #[arg(long, default_value_t = 101)]
        grid: usize,
        /// Report path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a mean transform and write the table as CSV.
    Transform {
        #[arg(long)]
        seq: String,
        /// cesaro, holder:M, log or iterlog:M.
        #[arg(long)]
        method: String,
        /// Table length.
        #[arg(long)]
        n: u64,
        /// Grid sample count for function-space sequences.
        #[arg(long, default_value_t = 101)]
        grid: usize,
        /// CSV output path (k,value or k,x,value).
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the fuzzy-norm pair conditions on sampled inputs.
    Axioms {
        /// Space to sample: scalar or grid.
        #[arg(long, default_value = "scalar")]
        space: String,
        /// Number of sample tuples.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Grid sample count when --space grid.
        #[arg(long, default_value_t = 101)]
        grid: usize,
        /// Report path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the sequence names the CLI accepts.
    ListSequences,
}

#[derive(Debug, Serialize, Deserialize)]
struct DiagnoseReport {
    sequence: String,
    method: Option<String>,
    space: String,
    limit: f64,
    params: TestParams,
    statistical: StatSummary,
    ordinary: OrdinaryReport,
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    if let Some(core) = err.downcast_ref::<ifns_core::Error>() {
        return match core {
            ifns_core::Error::UnknownSequence(_)
            | ifns_core::Error::InvalidParams(_)
            | ifns_core::Error::InvalidOrder(_) => 64,
            _ => 65,
        };
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return 74;
    }
    65
}

fn emit<T: Serialize>(
    record: &RunRecord<T>,
    out: Option<&PathBuf>,
    cells: Option<&[ifns_core::harness::CellSummary]>,
) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            let written = write_report(record, path, cells)?;
            eprintln!("report written to {}", written.display());
        }
        None => println!("{}", record.to_json()?),
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let seed = cli.seed;
    match cli.command {
        Command::VerifyExample {
            example,
            n,
            grid,
            out,
        } => {
            let id = ExampleId::from_index(example)?;
            let report = verify_example(id, n, grid)?;
            let code = report.exit_code() as u8;
            for claim in &report.claims {
                eprintln!(
                    "[{}] {}: expected {:?}, got {:?}",
                    if claim.pass { "ok" } else { "--" },
                    claim.claim,
                    claim.expected,
                    claim.status
                );
            }
            let cells = report.pipeline.statistical_summability.cells.clone();
            let record = RunRecord::new(seed, report);
            emit(&record, out.as_ref(), Some(&cells))?;
            Ok(code)
        }
        Command::Diagnose {
            seq,
            method,
            limit,
            t,
            eps,
            n,
            delta,
            grid,
            out,
        } => {
            let sequence = Sequence::from_name(&seq, grid)?;
            let mut params = TestParams::default();
            if let Some(t) = t {
                params.t_grid = t;
            }
            if let Some(eps) = eps {
                params.eps_grid = eps;
            }
            if let Some(n) = n {
                params.n = n;
            }
            if let Some(delta) = delta {
                params.delta = delta;
            }
            params.validate()?;
            let a = match sequence.space() {
                SpaceKind::Scalar => Element::Scalar(limit),
                SpaceKind::Grid { points } => Element::Grid(vec![limit; points]),
            };
            let parsed_method = method.as_deref().map(Method::parse).transpose()?;
            let (statistical, ordinary) = match parsed_method {
                Some(m) => {
                    let table = build_table(&sequence, m, params.n)?;
                    (
                        stat_limit_verdict(&table, &a, &params)?,
                        ordinary_convergence_verdict(&table, &a, &params)?,
                    )
                }
                None => (
                    stat_limit_verdict(&sequence, &a, &params)?,
                    ordinary_convergence_verdict(&sequence, &a, &params)?,
                ),
            };
            let report = DiagnoseReport {
                sequence: sequence.name().to_string(),
                method: parsed_method.map(|m| m.to_string()),
                space: sequence.space().to_string(),
                limit,
                params,
                statistical: summarize_stat(&statistical),
                ordinary,
            };
            let cells = report.statistical.cells.clone();
            let record = RunRecord::new(seed, report);
            emit(&record, out.as_ref(), Some(&cells))?;
            Ok(0)
        }
        Command::Transform {
            seq,
            method,
            n,
            grid,
            out,
        } => {
            let sequence = Sequence::from_name(&seq, grid)?;
            let method = Method::parse(&method)?;
            let table = build_table(&sequence, method, n)?;
            let path = record::resolve_out_path(&out);
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            std::fs::write(&path, table_to_csv(&table))?;
            eprintln!("table written to {}", path.display());
            Ok(0)
        }
        Command::Axioms {
            space,
            samples,
            grid,
            out,
        } => {
            let space = match space.as_str() {
                "scalar" => SpaceKind::Scalar,
                "grid" => SpaceKind::Grid { points: grid },
                other => {
                    return Err(ifns_core::Error::InvalidParams(format!(
                        "unknown space {other:?}, expected scalar or grid"
                    ))
                    .into())
                }
            };
            let inputs = sample_axiom_inputs(&space, samples, seed.unwrap_or(0xf1de));
            let report = check_axioms(&StandardIfNorm, &inputs, &AxiomCheckConfig::default())?;
            let code = u8::from(!report.all_passed());
            for finding in &report.findings {
                eprintln!(
                    "[{}] {} ({} checks){}",
                    if finding.passed { "ok" } else { "--" },
                    finding.label,
                    finding.checks,
                    finding
                        .first_violation
                        .as_deref()
                        .map(|v| format!(": {v}"))
                        .unwrap_or_default()
                );
            }
            let record = RunRecord::new(seed, report);
            emit(&record, out.as_ref(), None)?;
            Ok(code)
        }
        Command::ListSequences => {
            for (name, desc) in Sequence::catalog() {
                println!("{name:<22} {desc}");
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
