//! Command-line surface: generate, verify, attack, vec-sparsify, norms.
//!
//! Exit codes: 0 pass, 1 verified failure, 2 usage or I/O error.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::attack::{self, StrategyKind};
use crate::error::{Error, Result};
use crate::forge::{build_case, CaseId, HardInstance};
use crate::io;
use crate::matrix::Vector;
use crate::report::VerificationReport;
use crate::sparsify;
use crate::spectra::{lp_norm, schatten_norm, singular_values, SchattenExponent};
use crate::verify;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "spnorm",
    version,
    about = "Schatten-norm sparsification: hard instances, verification, and attack benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a hard instance and write A_prime.mtx, B.mtx, A.mtx, instance.json.
    Generate(GenerateArgs),
    /// Check P1-P3 and the analytic facts of a generated instance directory.
    Verify(VerifyArgs),
    /// Run sparsification strategies against an instance's B matrix.
    Attack(AttackArgs),
    /// Promote an lp sparsifier of a vector file to an lq one.
    VecSparsify(VecSparsifyArgs),
    /// Print Schatten norms of a matrix file as JSON.
    Norms(NormsArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Instance family, 1..=4.
    #[arg(long)]
    case: u8,
    /// Size exponent; n = 2^k.
    #[arg(long)]
    k: u32,
    /// Source exponent p ("0", finite, or "inf").
    #[arg(long)]
    p: String,
    /// Target exponent q.
    #[arg(long)]
    q: String,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance directory written by `generate`.
    #[arg(long)]
    dir: PathBuf,
    /// Approximation parameter to verify at.
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// Relative tolerance for the analytic comparisons.
    #[arg(long, default_value_t = verify::DEFAULT_INSTANCE_TOL)]
    tol: f64,
    /// Report path (defaults to <dir>/report.json).
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct AttackArgs {
    /// Instance directory written by `generate`.
    #[arg(long)]
    dir: PathBuf,
    /// Comma-separated strategies: topk, uniform, weighted.
    #[arg(long, default_value = "topk,uniform,weighted")]
    strategy: String,
    /// Comma-separated budget fractions of n^2.
    #[arg(long = "budget-frac", default_value = "0.0625,0.125,0.25")]
    budget_frac: String,
    /// Comma-separated seeds for the sampling strategies.
    #[arg(long, default_value = "7")]
    seed: String,
    /// CSV output path (defaults to <dir>/attack.csv).
    #[arg(long)]
    out_csv: Option<PathBuf>,
    /// JSON summary path (defaults to <dir>/attack_summary.json).
    #[arg(long)]
    out_summary: Option<PathBuf>,
}

#[derive(Args)]
struct VecSparsifyArgs {
    /// Whitespace-separated vector file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    p: String,
    #[arg(long)]
    q: String,
    /// Sparsified vector output path.
    #[arg(long)]
    output: PathBuf,
    /// JSON report path.
    #[arg(long)]
    report: PathBuf,
}

#[derive(Args)]
struct NormsArgs {
    /// Matrix file in coordinate format.
    #[arg(long)]
    matrix: PathBuf,
    /// Comma-separated exponents, e.g. "1,2,inf".
    #[arg(long)]
    p: String,
}

fn parse_list<T, F: Fn(&str) -> Result<T>>(text: &str, parse: F) -> Result<Vec<T>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(parse)
        .collect()
}

fn cmd_generate(args: &GenerateArgs) -> Result<i32> {
    let case = CaseId::from_number(args.case)?;
    let p = SchattenExponent::parse(&args.p)?;
    let q = SchattenExponent::parse(&args.q)?;
    let inst = build_case(case, args.k, p, q)?;
    inst.save(&args.out)?;
    println!(
        "wrote case-{} instance (n = {}, p = {}, q = {}, eps_threshold = {}) to {}",
        inst.case_id.number(),
        inst.n,
        inst.p,
        inst.q,
        io::format_g17(inst.eps_threshold),
        args.out.display()
    );
    Ok(EXIT_PASS)
}

fn print_report_outcome(report: &VerificationReport) {
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }
    for check in &report.checks {
        println!(
            "{} {}: lhs = {}, rhs = {}",
            if check.pass { "pass" } else { "FAIL" },
            check.name,
            io::format_g17(check.lhs),
            io::format_g17(check.rhs),
        );
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32> {
    if !(args.eps > 0.0 && args.eps < 1.0) {
        return Err(Error::invalid(format!(
            "eps = {} must lie in (0, 1)",
            args.eps
        )));
    }
    if !(args.tol > 0.0) {
        return Err(Error::invalid(format!(
            "tol = {} must be positive",
            args.tol
        )));
    }
    let inst = HardInstance::load(&args.dir)?;
    let report = verify::check_instance(&inst, args.eps, args.tol)?;
    let report_path = args
        .report
        .clone()
        .unwrap_or_else(|| args.dir.join("report.json"));
    report.write_json(&report_path)?;
    print_report_outcome(&report);
    Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_attack(args: &AttackArgs) -> Result<i32> {
    let inst = HardInstance::load(&args.dir)?;
    let strategies = parse_list(&args.strategy, StrategyKind::parse)?;
    let fracs = parse_list(&args.budget_frac, |t| {
        t.parse::<f64>()
            .map_err(|_| Error::invalid(format!("invalid budget fraction {t:?}")))
    })?;
    let seeds = parse_list(&args.seed, |t| {
        t.parse::<u64>()
            .map_err(|_| Error::invalid(format!("invalid seed {t:?}")))
    })?;
    if strategies.is_empty() || fracs.is_empty() || seeds.is_empty() {
        return Err(Error::invalid(
            "attack needs at least one strategy, budget fraction, and seed",
        ));
    }
    let results = attack::sweep(&inst, &strategies, &fracs, &seeds)?;
    let csv_path = args
        .out_csv
        .clone()
        .unwrap_or_else(|| args.dir.join("attack.csv"));
    let summary_path = args
        .out_summary
        .clone()
        .unwrap_or_else(|| args.dir.join("attack_summary.json"));
    attack::write_results_csv(&csv_path, &results)?;
    attack::write_summary_json(&summary_path, &results)?;
    println!(
        "ran {} attack cells; results in {} and {}",
        results.len(),
        csv_path.display(),
        summary_path.display()
    );
    Ok(EXIT_PASS)
}

#[derive(serde::Serialize)]
struct VecSparsifyReport {
    s: usize,
    c_exact: f64,
    c_rounded: usize,
    achieved_lq_error: f64,
    eps: f64,
    p: SchattenExponent,
    q: SchattenExponent,
    nnz_output: usize,
}

fn cmd_vec_sparsify(args: &VecSparsifyArgs) -> Result<i32> {
    let x = io::read_vector(&args.input)?;
    let p = SchattenExponent::parse(&args.p)?;
    let q = SchattenExponent::parse(&args.q)?;
    let (promoted, budget) = sparsify::promote_sparsifier(&x, args.eps, p, q)?;
    let residual: Vec<f64> = x
        .entries()
        .iter()
        .zip(promoted.entries())
        .map(|(a, b)| a - b)
        .collect();
    let achieved = match Vector::new(residual) {
        Ok(r) => lp_norm(&r, q),
        Err(_) => 0.0,
    };
    io::write_vector(&args.output, &promoted)?;
    let report = VecSparsifyReport {
        s: budget.s,
        c_exact: budget.c_exact,
        c_rounded: budget.c_rounded,
        achieved_lq_error: achieved,
        eps: args.eps,
        p,
        q,
        nnz_output: promoted.nnz(),
    };
    io::write_atomic(
        &args.report,
        serde_json::to_string_pretty(&report)?.as_bytes(),
    )?;
    println!(
        "s = {}, c_exact = {}, c_rounded = {}, achieved lq error = {}",
        budget.s,
        io::format_g17(budget.c_exact),
        budget.c_rounded,
        io::format_g17(achieved)
    );
    Ok(EXIT_PASS)
}

fn cmd_norms(args: &NormsArgs) -> Result<i32> {
    let m = io::read_matrix(&args.matrix)?;
    let exponents = parse_list(&args.p, SchattenExponent::parse)?;
    let spectrum = singular_values(&m)?;
    let mut norms: BTreeMap<String, f64> = BTreeMap::new();
    for p in exponents {
        norms.insert(format!("S_{p}"), schatten_norm(&spectrum, p));
    }
    println!("{}", serde_json::to_string_pretty(&norms)?);
    Ok(EXIT_PASS)
}

fn dispatch(cli: Cli) -> Result<i32> {
    match &cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Attack(args) => cmd_attack(args),
        Command::VecSparsify(args) => cmd_vec_sparsify(args),
        Command::Norms(args) => cmd_norms(args),
    }
}

/// Parses arguments and runs; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are not usage errors.
            let code = if err.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            EXIT_USAGE
        }
    }
}

/// Runs with the process arguments.
pub fn run_main() -> i32 {
    run(std::env::args_os())
}
