//! Command-line front end.
//!
//! Exit codes: 0 optimal, 1 infeasible, 2 no optimal solution (unbounded
//! for `oracle`), 3 a verification check failed, 10 and above for errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use tardos_core::generate::{gen_interval_matrix_lp, gen_mincost_flow, FlowParams, IntervalParams};
use tardos_core::oracle::{enumerate_solve, OracleStatus};
use tardos_core::tu::{is_totally_unimodular_with_budget, DEFAULT_DETERMINANT_BUDGET};
use tardos_core::{solve, LPInstance, SolveOptions, SolveStatus};

use crate::format::{format_vector, parse_instance, serialize_instance};
use crate::harness::{self, CampaignParams, Suite, VerifyConfig};

pub const EXIT_OPTIMAL: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_NO_OPTIMUM: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;
pub const EXIT_IO: i32 = 10;
pub const EXIT_PARSE: i32 = 11;
pub const EXIT_INVALID: i32 = 12;
pub const EXIT_SOLVER: i32 = 13;
pub const EXIT_USAGE: i32 = 14;

#[derive(Debug, Parser)]
#[command(name = "tardos", version, about = "Exact LP solver for totally unimodular instances")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an instance file.
    Solve {
        path: PathBuf,
        /// Reuse the previous iteration's basis where possible.
        #[arg(long)]
        warm_start: bool,
        /// Print one line per outer iteration.
        #[arg(long)]
        trace: bool,
        /// Append a statistics row to this CSV file.
        #[arg(long, value_name = "OUT")]
        stats: Option<PathBuf>,
    },
    /// Generate a random instance.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Run the solver against the enumeration oracle on a generated suite.
    Verify {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, env = "TARDOS_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        max_nodes: usize,
        /// Write one CSV row per instance.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_warm_start: bool,
        /// Draw from the mixed-magnitude suite instead of the standard one.
        #[arg(long)]
        mixed: bool,
    },
    /// Check total unimodularity of an instance's constraint matrix.
    VerifyTu {
        path: PathBuf,
        #[arg(long)]
        max_order: Option<usize>,
    },
    /// Solve by enumerating all bases and print the result.
    Oracle { path: PathBuf },
}

#[derive(Debug, Args)]
pub struct GenCommon {
    #[arg(long, env = "TARDOS_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = -5, allow_negative_numbers = true)]
    pub cost_min: i64,
    #[arg(long, default_value_t = 5, allow_negative_numbers = true)]
    pub cost_max: i64,
    /// Lower end of supplies (flow) or right-hand sides (interval).
    #[arg(long, default_value_t = -5, allow_negative_numbers = true)]
    pub rhs_min: i64,
    #[arg(long, default_value_t = 5, allow_negative_numbers = true)]
    pub rhs_max: i64,
    /// Write here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// Minimum-cost flow on a random connected digraph.
    Flow {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        arcs: usize,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Consecutive-ones constraint rows.
    Interval {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[command(flatten)]
        common: GenCommon,
    },
}

struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn read_instance(path: &Path) -> Result<LPInstance, Failure> {
    let text = fs::read_to_string(path).map_err(|e| fail(EXIT_IO, format!("{}: {e}", path.display())))?;
    let mut p = parse_instance(&text).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    if p.name == "unnamed" {
        if let Some(stem) = path.file_stem() {
            p.name = stem.to_string_lossy().into_owned();
        }
    }
    Ok(p)
}

fn status_code(s: SolveStatus) -> i32 {
    match s {
        SolveStatus::Optimal => EXIT_OPTIMAL,
        SolveStatus::Infeasible => EXIT_INFEASIBLE,
        SolveStatus::NoOptimalSolution => EXIT_NO_OPTIMUM,
    }
}

fn set_label(ix: &[usize]) -> String {
    let parts: Vec<String> = ix.iter().map(usize::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

fn cmd_solve(
    path: &Path,
    warm_start: bool,
    trace: bool,
    stats: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let p = read_instance(path)?;
    let outcome = solve(
        &p,
        SolveOptions {
            warm_start,
            trace: trace || stats.is_some(),
        },
    )
    .map_err(|e| fail(EXIT_SOLVER, format!("solver error: {e}")))?;
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(|e| fail(EXIT_IO, e.to_string()));
    let status = match outcome.status {
        SolveStatus::Optimal => "optimal",
        SolveStatus::Infeasible => "infeasible",
        SolveStatus::NoOptimalSolution => "no optimal solution",
    };
    w(out, format!("status: {status}"))?;
    if let Some(x) = &outcome.solution {
        w(out, format!("objective: {}", p.objective(x)))?;
        w(out, format!("x = {}", format_vector(x)))?;
    }
    if let Some(b) = &outcome.basis {
        w(out, format!("basis: {}", set_label(&b.sorted())))?;
    }
    w(
        out,
        format!(
            "outer iterations: {}, auxiliary problems: {}, pivots: {}",
            outcome.outer_iterations, outcome.auxiliary_problems, outcome.stats.pivots
        ),
    )?;
    if trace {
        for it in &outcome.trace {
            let mut line = format!(
                "iteration {}: fixed {} m'={} n'={}",
                it.iteration,
                set_label(&it.k_bar),
                it.reduced.m_prime(),
                it.reduced.n_prime()
            );
            match (&it.scale, &it.rounded) {
                (Some(k), Some(r)) => {
                    let rhs: Vec<String> = r.rhs.iter().map(ToString::to_string).collect();
                    line.push_str(&format!(" k^2={} rhs=({})", k.k_squared(), rhs.join(", ")));
                }
                _ => line.push_str(" zero rhs"),
            }
            if let Some(x) = &it.x_double_prime {
                line.push_str(&format!(" x''={}", format_vector(x)));
            }
            line.push_str(&format!(
                " J={} pivots={} end={:?}",
                set_label(&it.j_set),
                it.stats.pivots,
                it.end
            ));
            w(out, line)?;
        }
    }
    if let Some(stats) = stats {
        let record = harness::build_record(&outcome, None, false);
        harness::append_csv(stats, &[record]).map_err(|e| fail(EXIT_IO, format!("{}: {e}", stats.display())))?;
    }
    Ok(status_code(outcome.status))
}

fn cmd_gen(family: &Family, out: &mut dyn Write) -> Result<i32, Failure> {
    let (lp, common) = match family {
        Family::Flow { nodes, arcs, common } => (
            gen_mincost_flow(&FlowParams {
                nodes: *nodes,
                arcs: *arcs,
                seed: common.seed,
                cost_range: common.cost_min..=common.cost_max,
                supply_range: common.rhs_min..=common.rhs_max,
            }),
            common,
        ),
        Family::Interval { rows, cols, common } => (
            gen_interval_matrix_lp(&IntervalParams {
                rows: *rows,
                cols: *cols,
                seed: common.seed,
                cost_range: common.cost_min..=common.cost_max,
                rhs_range: common.rhs_min..=common.rhs_max,
            }),
            common,
        ),
    };
    let lp = lp.map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
    let text = serialize_instance(&lp);
    match &common.out {
        Some(path) => fs::write(path, text).map_err(|e| fail(EXIT_IO, format!("{}: {e}", path.display())))?,
        None => out.write_all(text.as_bytes()).map_err(|e| fail(EXIT_IO, e.to_string()))?,
    }
    Ok(0)
}

fn cmd_verify(params: CampaignParams, csv: Option<&Path>, warm_start: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let cfg = VerifyConfig {
        warm_start,
        check_tu: true,
    };
    let records = harness::run_campaign(&params, cfg).map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
    if let Some(path) = csv {
        harness::append_csv(path, &records).map_err(|e| fail(EXIT_IO, format!("{}: {e}", path.display())))?;
    }
    let io = |e: std::io::Error| fail(EXIT_IO, e.to_string());
    write!(out, "{}", harness::format_summary(&records)).map_err(io)?;
    let failed: Vec<_> = records.iter().filter(|r| r.has_failure()).collect();
    for r in &failed {
        writeln!(out, "FAIL {}: {}", r.name, r.notes.join("; ")).map_err(io)?;
    }
    Ok(if failed.is_empty() { 0 } else { EXIT_CHECK_FAILED })
}

fn cmd_verify_tu(path: &Path, max_order: Option<usize>, out: &mut dyn Write) -> Result<i32, Failure> {
    let p = read_instance(path)?;
    let order = max_order.unwrap_or_else(|| p.m().min(p.n()));
    let report = is_totally_unimodular_with_budget(&p.a, order, DEFAULT_DETERMINANT_BUDGET)
        .map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
    let io = |e: std::io::Error| fail(EXIT_IO, e.to_string());
    writeln!(out, "totally unimodular up to order {}: {}", report.max_order_checked, report.is_tu).map_err(io)?;
    if let Some(wit) = &report.witness {
        writeln!(
            out,
            "witness rows {} cols {} det {}",
            set_label(&wit.rows),
            set_label(&wit.cols),
            wit.det
        )
        .map_err(io)?;
    }
    Ok(if report.is_tu { 0 } else { 1 })
}

fn cmd_oracle(path: &Path, out: &mut dyn Write) -> Result<i32, Failure> {
    let p = read_instance(path)?;
    let p = p.rank_reduced().unwrap_or(p);
    let r = enumerate_solve(&p).map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
    let io = |e: std::io::Error| fail(EXIT_IO, e.to_string());
    let status = match r.status {
        OracleStatus::Optimal => "optimal",
        OracleStatus::Infeasible => "infeasible",
        OracleStatus::Unbounded => "unbounded",
    };
    writeln!(out, "status: {status}").map_err(io)?;
    if let (Some(x), Some(obj)) = (&r.solution, &r.objective) {
        writeln!(out, "objective: {obj}").map_err(io)?;
        writeln!(out, "x = {}", format_vector(x)).map_err(io)?;
        writeln!(out, "unique: {}", r.unique).map_err(io)?;
        for b in &r.optimal_bases {
            writeln!(out, "optimal basis: {}", set_label(&b.sorted())).map_err(io)?;
        }
    }
    writeln!(out, "feasible vertices: {}", r.vertices.len()).map_err(io)?;
    Ok(match r.status {
        OracleStatus::Optimal => EXIT_OPTIMAL,
        OracleStatus::Infeasible => EXIT_INFEASIBLE,
        OracleStatus::Unbounded => EXIT_NO_OPTIMUM,
    })
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Solve {
            path,
            warm_start,
            trace,
            stats,
        } => cmd_solve(path, *warm_start, *trace, stats.as_deref(), out),
        Command::Gen { family } => cmd_gen(family, out),
        Command::Verify {
            count,
            seed,
            max_nodes,
            out: csv,
            no_warm_start,
            mixed,
        } => cmd_verify(
            CampaignParams {
                count: *count,
                seed: *seed,
                max_nodes: *max_nodes,
                suite: if *mixed { Suite::Mixed } else { Suite::Standard },
            },
            csv.as_deref(),
            !no_warm_start,
            out,
        ),
        Command::VerifyTu { path, max_order } => cmd_verify_tu(path, *max_order, out),
        Command::Oracle { path } => cmd_oracle(path, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
