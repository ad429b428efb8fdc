//! Command-line interface.
//!
//! Exit status is 0 when every requested check passes, 1 when a check fails
//! (`MISMATCH`, `FAIL`, an identity failure or a Monte-Carlo estimate outside
//! tolerance) and 2 for invalid input or an error during computation.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stopset_core::codes::{build, CodeFamily, Construction, Family, ParityCheckMatrix};
use stopset_core::decode::ChannelConfig;
use stopset_core::generators::{b_count, g_count};
use stopset_core::geometry::counting::{alpha, count_flats_in_flat, count_flats_through_flat, gaussian_binomial};
use stopset_core::geometry::GeometryKind;
use stopset_core::identities::identity_suite;
use stopset_core::stopping::{ssd_formula, verify_bec_optimal, BecOptimalityReport, StoppingSetDistribution};
use stopset_core::Verification;

use crate::error::{Error, Result};
use crate::formats::{export, import, Format, MatrixTag, MonteCarloJson, SsdJson, SweepRow};
use crate::parallel::{self, THREADS_ENV};

#[derive(Debug, Parser)]
#[command(name = "stopset", version, about = "Stopping-set analysis of Simplex, Hamming and Reed-Muller codes")]
pub struct Cli {
    /// Worker threads for exhaustive enumeration and simulation (0 = all cores).
    #[arg(long, global = true, env = THREADS_ENV, default_value_t = 0)]
    pub threads: usize,

    /// Cross-check generator counts by recursion and explicit sums, and the
    /// summation bounds of the closed forms.
    #[arg(long, global = true)]
    pub verify_mode: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a parity-check matrix and export it.
    Build(BuildArgs),
    /// Stopping-set distribution by closed form, exhaustive search, or both.
    Ssd(SsdArgs),
    /// Generator counts, flat counts and the identity suite.
    Counts(CountsArgs),
    /// Compare a matrix with the all-dual-codewords matrix.
    Verify(VerifyArgs),
    /// Monte-Carlo failure rates of the peeling decoder.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FamilyArg {
    Simplex,
    Hamming,
    Rm1,
    Exthamming,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Simplex => Family::Simplex,
            FamilyArg::Hamming => Family::Hamming,
            FamilyArg::Rm1 => Family::Rm1,
            FamilyArg::Exthamming => Family::ExtHamming,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ConstructionArg {
    H1,
    H2,
    H3,
    H4,
    Hstar,
    Fullrank,
}

impl From<ConstructionArg> for Construction {
    fn from(c: ConstructionArg) -> Construction {
        match c {
            ConstructionArg::H1 => Construction::H1,
            ConstructionArg::H2 => Construction::H2,
            ConstructionArg::H3 => Construction::H3,
            ConstructionArg::H4 => Construction::H4,
            ConstructionArg::Hstar => Construction::HStar,
            ConstructionArg::Fullrank => Construction::FullRank,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Alist,
    Dense,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Alist => Format::Alist,
            FormatArg::Dense => Format::Dense,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Formula,
    Exhaustive,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Eg,
    Pg,
}

impl From<KindArg> for GeometryKind {
    fn from(k: KindArg) -> GeometryKind {
        match k {
            KindArg::Eg => GeometryKind::Eg,
            KindArg::Pg => GeometryKind::Pg,
        }
    }
}

#[derive(Debug, Args)]
pub struct CodeArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Code parameter (m >= 2).
    #[arg(long)]
    pub m: u32,
}

impl CodeArgs {
    fn code_family(&self) -> Result<CodeFamily> {
        Ok(CodeFamily::new(self.family.into(), self.m)?)
    }
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Defaults to the family's incidence construction.
    #[arg(long, value_enum)]
    pub construction: Option<ConstructionArg>,
    #[arg(long, value_enum, default_value = "alist")]
    pub format: FormatArg,
    /// Output file; the matrix goes to standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SsdArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Matrix for exhaustive search; the closed forms only cover the
    /// family's incidence construction.
    #[arg(long, value_enum)]
    pub construction: Option<ConstructionArg>,
    #[arg(long, value_enum, default_value = "formula")]
    pub method: Method,
    /// Largest block length for exhaustive search.
    #[arg(long, default_value_t = stopset_core::stopping::DEFAULT_EXHAUSTIVE_MAX_N)]
    pub max_n: usize,
    /// Write the distribution JSON here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CountsArgs {
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    /// Number of u-generators of an l-flat.
    #[arg(long = "B", num_args = 2, value_names = ["U", "L"], allow_negative_numbers = true)]
    pub b: Option<Vec<i64>>,
    /// Number of stopping u-generators of an l-flat.
    #[arg(long = "G", num_args = 2, value_names = ["U", "L"], allow_negative_numbers = true)]
    pub g: Option<Vec<i64>>,
    #[arg(long, num_args = 2, value_names = ["L", "K"])]
    pub alpha: Option<Vec<i64>>,
    /// Gaussian binomial [N K]_q.
    #[arg(long, num_args = 2, value_names = ["N", "K"], allow_negative_numbers = true)]
    pub gauss: Option<Vec<i64>>,
    /// mu1-flats inside a mu2-flat.
    #[arg(long, num_args = 2, value_names = ["MU2", "MU1"])]
    pub flats: Option<Vec<i64>>,
    /// mu2-flats through a mu1-flat in a geometry of dimension M.
    #[arg(long, num_args = 3, value_names = ["MU2", "MU1", "M"])]
    pub through: Option<Vec<i64>>,
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    /// Run the identity suite.
    #[arg(long)]
    pub identities: bool,
    /// Size bound for the identity suite.
    #[arg(long, default_value_t = 6)]
    pub max: u32,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Construction to check; defaults to the family's incidence matrix.
    #[arg(long, value_enum, conflicts_with = "input")]
    pub matrix: Option<ConstructionArg>,
    /// Check a matrix read from a file instead.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "alist")]
    pub input_format: FormatArg,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long, value_enum)]
    pub construction: Option<ConstructionArg>,
    /// Erasure probabilities (comma separated or repeated).
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    pub epsilon: Vec<f64>,
    #[arg(long)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also compute the exact failure rate by exhaustive enumeration and fail
    /// if an estimate is more than four standard errors away.
    #[arg(long)]
    pub exact: bool,
    /// CSV output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON report file (one report per epsilon).
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Include per-weight counts in the JSON report.
    #[arg(long)]
    pub per_weight: bool,
}

/// Outcome of a subcommand that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    CheckFailed,
}

pub fn main_with(cli: Cli) -> ExitCode {
    match run(&cli) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

pub fn run(cli: &Cli) -> Result<Status> {
    let verify = if cli.verify_mode {
        Verification::On
    } else {
        Verification::Off
    };
    match &cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Ssd(a) => cmd_ssd(a, verify, cli.threads),
        Command::Counts(a) => cmd_counts(a, verify),
        Command::Verify(a) => cmd_verify(a),
        Command::Simulate(a) => cmd_simulate(a, cli.threads),
    }
}

fn matrix_for(family: CodeFamily, construction: Option<ConstructionArg>) -> Result<ParityCheckMatrix> {
    let c = construction
        .map(Construction::from)
        .unwrap_or_else(|| family.family().optimal_construction());
    Ok(build(family, c)?)
}

fn write_output(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn weight_profile(weights: &[usize]) -> String {
    let mut counts = std::collections::BTreeMap::new();
    for &w in weights {
        *counts.entry(w).or_insert(0usize) += 1;
    }
    counts
        .iter()
        .map(|(w, c)| format!("{w}x{c}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_build(a: &BuildArgs) -> Result<Status> {
    let family = a.code.code_family()?;
    let h = matrix_for(family, a.construction)?;
    let text = export(&h, a.format.into())?;
    write_output(a.out.as_ref(), &text)?;
    let summary = format!(
        "{} m={} {}: {} rows x {} cols; row weights {}; column weights {}",
        family.family(),
        family.m(),
        h.construction(),
        h.matrix().num_rows(),
        h.matrix().num_cols(),
        weight_profile(&h.matrix().row_weights()),
        weight_profile(&h.matrix().column_weights()),
    );
    if a.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(Status::Pass)
}

fn ssd_json(tag: MatrixTag, method: &str, ssd: &StoppingSetDistribution) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&SsdJson::new(tag, method, ssd))?;
    s.push('\n');
    Ok(s)
}

fn cmd_ssd(a: &SsdArgs, verify: Verification, threads: usize) -> Result<Status> {
    let family = a.code.code_family()?;
    let optimal = family.family().optimal_construction();
    let construction = a.construction.map(Construction::from).unwrap_or(optimal);
    if a.method != Method::Exhaustive && construction != optimal {
        return Err(Error::Core(stopset_core::Error::InvalidArgument(format!(
            "closed forms exist only for {optimal} of {}; use --method exhaustive",
            family.family()
        ))));
    }
    let formula = || ssd_formula(family, verify);
    let exhaustive = || -> Result<StoppingSetDistribution> {
        let h = build(family, construction)?;
        parallel::exhaustive_ssd_with_cap(&h, threads, a.max_n)
    };
    let tag = MatrixTag {
        family: Some(family.family().name().to_string()),
        m: Some(family.m()),
        construction: construction.name().to_string(),
    };
    match a.method {
        Method::Formula => {
            write_output(a.out.as_ref(), &ssd_json(tag, "formula", &formula()?)?)?;
            Ok(Status::Pass)
        }
        Method::Exhaustive => {
            write_output(a.out.as_ref(), &ssd_json(tag, "exhaustive", &exhaustive()?)?)?;
            Ok(Status::Pass)
        }
        Method::Both => {
            let f = formula()?;
            let e = exhaustive()?;
            write_output(a.out.as_ref(), &ssd_json(tag, "formula", &f)?)?;
            match f.first_mismatch(&e) {
                None => {
                    eprintln!("MATCH");
                    Ok(Status::Pass)
                }
                Some((i, x, y)) => {
                    eprintln!("MISMATCH at size {i}: formula {x}, exhaustive {y}");
                    Ok(Status::CheckFailed)
                }
            }
        }
    }
}

fn pair(v: &[i64]) -> (i64, i64) {
    (v[0], v[1])
}

fn cmd_counts(a: &CountsArgs, verify: Verification) -> Result<Status> {
    let kind = || -> Result<GeometryKind> {
        a.kind.map(GeometryKind::from).ok_or_else(|| {
            Error::Core(stopset_core::Error::InvalidArgument("--kind eg|pg is required".into()))
        })
    };
    let mut any = false;
    if let Some(v) = &a.b {
        let (u, l) = pair(v);
        println!("{}", b_count(kind()?, u, l, verify)?);
        any = true;
    }
    if let Some(v) = &a.g {
        let (u, l) = pair(v);
        println!("{}", g_count(kind()?, u, l, verify)?);
        any = true;
    }
    if let Some(v) = &a.alpha {
        let (l, k) = pair(v);
        println!("{}", alpha(kind()?, l, k)?);
        any = true;
    }
    if let Some(v) = &a.gauss {
        let (n, k) = pair(v);
        if a.q < 2 {
            return Err(Error::Core(stopset_core::Error::InvalidArgument("q must be at least 2".into())));
        }
        println!("{}", gaussian_binomial(n, k, a.q));
        any = true;
    }
    if let Some(v) = &a.flats {
        let (mu2, mu1) = pair(v);
        println!("{}", count_flats_in_flat(kind()?, mu2, mu1, a.q)?);
        any = true;
    }
    if let Some(v) = &a.through {
        println!("{}", count_flats_through_flat(v[0], v[1], v[2], a.q)?);
        any = true;
    }
    let mut status = Status::Pass;
    if a.identities {
        any = true;
        for check in identity_suite(a.max) {
            match &check.failure {
                None => eprintln!("ok   {} ({} cases)", check.name, check.cases),
                Some(f) => {
                    eprintln!("FAIL {}: {f}", check.name);
                    status = Status::CheckFailed;
                }
            }
        }
        println!("{}", if status == Status::Pass { "ALL OK" } else { "FAILED" });
    }
    if !any {
        return Err(Error::Core(stopset_core::Error::InvalidArgument(
            "nothing requested; use --B, --G, --alpha, --gauss, --flats, --through or --identities".into(),
        )));
    }
    Ok(status)
}

fn print_report(r: &BecOptimalityReport) {
    println!("SSD(H)  = {}", r.ssd);
    println!("SSD(H*) = {}", r.ssd_star);
    println!("missing minimum dual codewords: {}", r.missing_minimum_codewords.len());
    for c in r.missing_minimum_codewords.iter().take(10) {
        println!("  {:?}", c.support());
    }
    match r.rows_minimal() {
        Some(true) => println!("row deletion: every row is needed"),
        Some(false) => {
            let redundant: Vec<usize> = r
                .row_deletion_changes_ssd
                .iter()
                .flatten()
                .enumerate()
                .filter(|(_, &changes)| !changes)
                .map(|(i, _)| i + 1)
                .collect();
            println!("row deletion: rows {redundant:?} can be removed without changing the SSD");
        }
        None => println!("row deletion: not checked at this size"),
    }
}

fn cmd_verify(a: &VerifyArgs) -> Result<Status> {
    let family = a.code.code_family()?;
    let h = match &a.input {
        Some(path) => import(&fs::read_to_string(path)?, a.input_format.into(), Some(family))?,
        None => matrix_for(family, a.matrix)?,
    };
    let report = verify_bec_optimal(&h, family)?;
    print_report(&report);
    if report.passes() {
        println!("PASS");
        return Ok(Status::Pass);
    }
    match report.first_mismatch() {
        Some((i, x, y)) => println!("FAIL: first mismatch at size {i}: {x} vs {y}"),
        None => println!("FAIL: minimum dual codewords missing from the rows"),
    }
    Ok(Status::CheckFailed)
}

fn cmd_simulate(a: &SimulateArgs, threads: usize) -> Result<Status> {
    let family = a.code.code_family()?;
    let h = matrix_for(family, a.construction)?;
    let analysis = if a.exact {
        Some(parallel::pattern_analysis(&h, family, threads)?)
    } else {
        None
    };
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    let mut status = Status::Pass;
    for &epsilon in &a.epsilon {
        let cfg = ChannelConfig::new(epsilon, a.trials, a.seed)?;
        let report = parallel::monte_carlo(&h, Some(family), cfg, threads)?;
        let exact = analysis.as_ref().map(|an| an.exact_failure_rates(epsilon).0);
        if let Some(p) = exact {
            let diff = (report.fail_rate_peel() - p).abs();
            if diff > 4.0 * report.stderr() {
                eprintln!(
                    "epsilon {epsilon}: estimate {} is {:.2} standard errors from exact {p}",
                    report.fail_rate_peel(),
                    diff / report.stderr()
                );
                status = Status::CheckFailed;
            }
        }
        rows.push(SweepRow {
            epsilon,
            fail_rate: report.fail_rate_peel(),
            stderr: report.stderr(),
            trials: report.trials.to_string(),
            seed: report.seed.to_string(),
            exact_rate: exact,
        });
        reports.push(MonteCarloJson::new(MatrixTag::of(&h), &report, exact, a.per_weight));
    }

    let mut csv_out = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        csv_out.serialize(row)?;
    }
    let bytes = csv_out.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    write_output(a.out.as_ref(), &String::from_utf8_lossy(&bytes))?;
    if let Some(path) = &a.json {
        let mut s = serde_json::to_string_pretty(&reports)?;
        s.push('\n');
        fs::write(path, s)?;
    }
    Ok(status)
}
