//! Command-line interface: exact counts, equivalence queries, censuses with
//! catalog output, and the self-check battery.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::json;

use crate::census::{
    export_catalog, run_census, CatalogFormat, CensusOptions, ClassCount,
};
use crate::counting::{
    affine_class_count, asymptotic_estimate, count_generating_subsets, hall_eulerian,
    mult_class_count, prime_lifted_count, prime_real_count, prime_total_count,
    prime_unlifted_count,
};
use crate::equivalence::{
    affine_witness, is_exceptional_pair, mult_witness, unitarily_equivalent, BudgetExceeded,
    DEFAULT_NODE_BUDGET,
};
use crate::frames::IndexSubset;
use crate::numtheory::is_prime;
use crate::verify::run_battery;

/// Exit code for malformed or out-of-range arguments.
pub const EXIT_USAGE: u8 = 2;
/// Exit code for a unitary search that ran out of budget.
pub const EXIT_BUDGET: u8 = 3;

/// Environment variable consulted for the census worker count when
/// `--workers` is absent.
pub const WORKERS_ENV: &str = "FRAMECENSUS_WORKERS";

#[derive(Parser, Debug)]
#[command(
    name = "framecensus",
    about = "Exact counts, equivalence tests, and censuses of cyclic harmonic frames",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit machine-readable JSON instead of prose.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact class counts and estimates for one (n, d).
    Count(CountArgs),
    /// Closed-form class counts at a prime modulus.
    Prime(PrimeArgs),
    /// Equivalence of two index subsets.
    Equiv(EquivArgs),
    /// Full census of multiplicative classes with unitary merging.
    Census(CensusArgs),
    /// Cross-check battery over a box of moduli and dimensions.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct CountArgs {
    /// Modulus of the cyclic group.
    #[arg(long)]
    pub n: usize,
    /// Subset size (frame space dimension).
    #[arg(long)]
    pub d: usize,
    /// Which count to print.
    #[arg(long, value_enum)]
    pub which: CountKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CountKind {
    /// Multiplicative classes of generating subsets.
    M,
    /// Affine classes of all subsets.
    P,
    /// First-order estimate of the multiplicative class count.
    A,
    /// Generating subsets.
    Gen,
    /// Generating tuples.
    Hall,
}

#[derive(Args, Debug)]
pub struct PrimeArgs {
    /// Prime modulus.
    #[arg(long)]
    pub p: usize,
    /// Subset size.
    #[arg(long)]
    pub d: usize,
    /// Which closed form to print.
    #[arg(long, value_enum)]
    pub which: PrimeKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PrimeKind {
    /// Classes avoiding the zero residue.
    U,
    /// Classes containing the zero residue.
    L,
    /// All classes.
    Total,
    /// Classes of real frames.
    Real,
}

#[derive(Args, Debug)]
pub struct EquivArgs {
    /// Modulus of the cyclic group.
    #[arg(long)]
    pub n: usize,
    /// First subset, comma-separated residues, e.g. 1,2,5.
    #[arg(long)]
    pub j: String,
    /// Second subset, comma-separated residues.
    #[arg(long)]
    pub k: String,
    /// Which equivalence to decide.
    #[arg(long, value_enum)]
    pub kind: EquivKind,
    /// Node budget for the unitary search.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EquivKind {
    Mult,
    Affine,
    Unitary,
    Exceptional,
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    /// Modulus of the cyclic group.
    #[arg(long)]
    pub n: usize,
    /// Subset size.
    #[arg(long)]
    pub d: usize,
    /// Catalog output path; defaults to `census_n{n}_d{d}.{format}`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Catalog format.
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
    /// Node budget for each unitary search.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget: u64,
    /// Worker threads; falls back to FRAMECENSUS_WORKERS, then to one thread
    /// per core. Never changes the output.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Largest modulus in the box.
    #[arg(long = "max-n")]
    pub max_n: usize,
    /// Largest subset size in the box.
    #[arg(long = "max-d")]
    pub max_d: usize,
}

/// Runs a parsed command line; returns the process exit code.
pub fn run(cli: &Cli) -> ExitCode {
    let result = match &cli.command {
        Command::Count(args) => cmd_count(args, cli.json),
        Command::Prime(args) => cmd_prime(args, cli.json),
        Command::Equiv(args) => cmd_equiv(args, cli.json),
        Command::Census(args) => cmd_census(args, cli.json),
        Command::Verify(args) => cmd_verify(args, cli.json),
    };
    match result {
        Ok(code) => code,
        Err(err) => err.report(),
    }
}

/// CLI-level failures, each mapping to a stable exit code.
#[derive(Debug)]
enum CliError {
    Usage(String),
    Budget(BudgetExceeded),
    Runtime(String),
}

impl CliError {
    fn report(&self) -> ExitCode {
        match self {
            CliError::Usage(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(EXIT_USAGE)
            }
            CliError::Budget(err) => {
                eprintln!("error: {err}; raise --budget to continue the search");
                ExitCode::from(EXIT_BUDGET)
            }
            CliError::Runtime(msg) => {
                eprintln!("error: {msg}");
                ExitCode::FAILURE
            }
        }
    }
}

fn require(condition: bool, msg: impl Into<String>) -> Result<(), CliError> {
    if condition {
        Ok(())
    } else {
        Err(CliError::Usage(msg.into()))
    }
}

fn rational_strings(value: &BigRational) -> (String, String, f64) {
    let num = value.numer().to_string();
    let den = value.denom().to_string();
    let approx = value
        .numer()
        .to_f64()
        .and_then(|n| value.denom().to_f64().map(|d| n / d))
        .unwrap_or(f64::NAN);
    (num, den, approx)
}

fn format_rational(value: &BigRational) -> String {
    let (num, den, approx) = rational_strings(value);
    if den == "1" {
        format!("{num} (= {num}/1)")
    } else {
        format!("{approx:.6} (= {num}/{den})")
    }
}

fn cmd_count(args: &CountArgs, json: bool) -> Result<ExitCode, CliError> {
    require(args.n >= 1, "--n must be at least 1")?;
    require(args.d >= 1, "--d must be at least 1")?;
    if matches!(args.which, CountKind::M | CountKind::P | CountKind::Gen) {
        require(
            args.d <= args.n,
            format!("--d must not exceed --n for this count (got d={} n={})", args.d, args.n),
        )?;
    }
    let (label, text, json_value) = match args.which {
        CountKind::M => {
            let v = mult_class_count(args.n, args.d);
            ("mult_classes", v.to_string(), json!(v.to_string()))
        }
        CountKind::P => {
            let v = affine_class_count(args.n, args.d);
            ("affine_classes", v.to_string(), json!(v.to_string()))
        }
        CountKind::Gen => {
            let v = count_generating_subsets(args.n, args.d);
            ("generating_subsets", v.to_string(), json!(v.to_string()))
        }
        CountKind::Hall => {
            let v = hall_eulerian(args.n, args.d);
            ("generating_tuples", v.to_string(), json!(v.to_string()))
        }
        CountKind::A => {
            let v = asymptotic_estimate(args.n, args.d);
            let (num, den, approx) = rational_strings(&v);
            (
                "estimate",
                format_rational(&v),
                json!({"num": num, "den": den, "approx": approx}),
            )
        }
    };
    if json {
        println!(
            "{}",
            json!({"n": args.n, "d": args.d, "which": label, "value": json_value})
        );
    } else {
        println!("{text}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_prime(args: &PrimeArgs, json: bool) -> Result<ExitCode, CliError> {
    require(
        is_prime(args.p),
        format!("--p must be prime (got {})", args.p),
    )?;
    require(args.d >= 1, "--d must be at least 1")?;
    let value = match args.which {
        PrimeKind::U => prime_unlifted_count(args.p, args.d),
        PrimeKind::L => prime_lifted_count(args.p, args.d),
        PrimeKind::Total => prime_total_count(args.p, args.d),
        PrimeKind::Real => {
            require(
                args.p % 2 == 1,
                "--which real requires an odd prime",
            )?;
            require(args.d >= 2, "--which real requires --d of at least 2")?;
            prime_real_count(args.p, args.d)
        }
    };
    if json {
        let label = match args.which {
            PrimeKind::U => "unlifted",
            PrimeKind::L => "lifted",
            PrimeKind::Total => "total",
            PrimeKind::Real => "real",
        };
        println!(
            "{}",
            json!({"p": args.p, "d": args.d, "which": label, "value": value.to_string()})
        );
    } else {
        println!("{value}");
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_subset(n: usize, text: &str, flag: &str) -> Result<IndexSubset, CliError> {
    let mut residues = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        let value: usize = part.parse().map_err(|_| {
            CliError::Usage(format!("{flag} has a non-integer entry {part:?}"))
        })?;
        residues.push(value);
    }
    IndexSubset::new(n, &residues)
        .map_err(|e| CliError::Usage(format!("{flag} is not a valid subset: {e}")))
}

fn cmd_equiv(args: &EquivArgs, json: bool) -> Result<ExitCode, CliError> {
    require(args.n >= 1, "--n must be at least 1")?;
    let j = parse_subset(args.n, &args.j, "--j")?;
    let k = parse_subset(args.n, &args.k, "--k")?;
    require(
        j.dimension() == k.dimension(),
        format!(
            "subsets must have equal size (got {} and {})",
            j.dimension(),
            k.dimension()
        ),
    )?;
    if matches!(args.kind, EquivKind::Unitary | EquivKind::Exceptional) {
        require(
            j.generates(),
            format!("--j {:?} does not generate Z_{}", j.elements(), args.n),
        )?;
        require(
            k.generates(),
            format!("--k {:?} does not generate Z_{}", k.elements(), args.n),
        )?;
    }

    let (equivalent, witness_text, witness_json) = match args.kind {
        EquivKind::Mult => match mult_witness(&j, &k) {
            Some(a) => (true, format!("a = {a}"), json!({"a": a})),
            None => (false, String::new(), serde_json::Value::Null),
        },
        EquivKind::Affine => match affine_witness(&j, &k) {
            Some((a, b)) => (
                true,
                format!("(a, b) = ({a}, {b})"),
                json!({"a": a, "b": b}),
            ),
            None => (false, String::new(), serde_json::Value::Null),
        },
        EquivKind::Unitary => {
            match unitarily_equivalent(&j, &k, args.budget).map_err(CliError::Budget)? {
                Some(w) => (
                    true,
                    format!("sigma = {}", w.cycle_notation()),
                    json!({"sigma": w.permutation()}),
                ),
                None => (false, String::new(), serde_json::Value::Null),
            }
        }
        EquivKind::Exceptional => {
            if is_exceptional_pair(&j, &k, args.budget).map_err(CliError::Budget)? {
                let w = unitarily_equivalent(&j, &k, args.budget)
                    .map_err(CliError::Budget)?
                    .expect("exceptional pairs are unitarily equivalent");
                (
                    true,
                    format!("sigma = {}", w.cycle_notation()),
                    json!({"sigma": w.permutation()}),
                )
            } else {
                (false, String::new(), serde_json::Value::Null)
            }
        }
    };

    let kind_label = match args.kind {
        EquivKind::Mult => "mult",
        EquivKind::Affine => "affine",
        EquivKind::Unitary => "unitary",
        EquivKind::Exceptional => "exceptional",
    };
    if json {
        println!(
            "{}",
            json!({
                "n": args.n,
                "j": j.elements(),
                "k": k.elements(),
                "kind": kind_label,
                "equivalent": equivalent,
                "witness": witness_json,
            })
        );
    } else if equivalent {
        println!("yes: {witness_text}");
    } else {
        println!("no");
    }
    Ok(ExitCode::SUCCESS)
}

/// Writes via a temporary file in the destination directory followed by an
/// atomic rename, so readers never observe a partial catalog.
fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = match dir {
        Some(dir) => tempfile::NamedTempFile::new_in(dir)?,
        None => tempfile::NamedTempFile::new_in(".")?,
    };
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn cmd_census(args: &CensusArgs, json: bool) -> Result<ExitCode, CliError> {
    require(args.n >= 1, "--n must be at least 1")?;
    require(
        args.d >= 1 && args.d <= args.n,
        format!("--d must satisfy 1 <= d <= n (got d={} n={})", args.d, args.n),
    )?;
    let workers = match args.workers {
        Some(w) => Some(w),
        None => match std::env::var(WORKERS_ENV) {
            Ok(text) => Some(text.parse().map_err(|_| {
                CliError::Usage(format!("{WORKERS_ENV} must be a positive integer, got {text:?}"))
            })?),
            Err(_) => None,
        },
    };
    if let Some(w) = workers {
        require(w >= 1, "worker count must be at least 1")?;
    }

    let options = CensusOptions {
        node_budget: args.budget,
        workers,
    };
    let report =
        run_census(args.n, args.d, &options).map_err(|e| CliError::Runtime(e.to_string()))?;

    let format = match args.format {
        FormatArg::Json => CatalogFormat::Json,
        FormatArg::Csv => CatalogFormat::Csv,
    };
    let extension = match format {
        CatalogFormat::Json => "json",
        CatalogFormat::Csv => "csv",
    };
    let path = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("census_n{}_d{}.{extension}", args.n, args.d)));
    let bytes = export_catalog(&report, format);
    write_atomic(&path, &bytes)
        .map_err(|e| CliError::Runtime(format!("writing {}: {e}", path.display())))?;

    let h_text = match report.unitary_classes {
        ClassCount::Exact(h) => h.to_string(),
        ClassCount::Range { min, max } => format!("[{min},{max}]"),
    };
    let (num, den, approx) = rational_strings(&report.estimate);
    if json {
        let h_json = match report.unitary_classes {
            ClassCount::Exact(h) => json!(h),
            ClassCount::Range { min, max } => json!({"min": min, "max": max}),
        };
        println!(
            "{}",
            json!({
                "n": report.n,
                "d": report.d,
                "m": report.mult_classes,
                "h": h_json,
                "a": {"num": num, "den": den, "approx": approx},
                "exceptional": report.exceptional_pairs.len(),
                "unresolved": report.unresolved_pairs.len(),
                "out": path.display().to_string(),
                "elapsed_ms": report.elapsed_ms,
            })
        );
    } else {
        let a_text = if den == "1" {
            num.clone()
        } else {
            format!("{num}/{den}")
        };
        let mut line = format!(
            "n={} d={} m={} h={} a={} exceptional={}",
            report.n,
            report.d,
            report.mult_classes,
            h_text,
            a_text,
            report.exceptional_pairs.len()
        );
        if !report.unresolved_pairs.is_empty() {
            line.push_str(&format!(" unresolved={}", report.unresolved_pairs.len()));
        }
        line.push_str(&format!(" -> {}", path.display()));
        println!("{line}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &VerifyArgs, json: bool) -> Result<ExitCode, CliError> {
    require(args.max_n >= 1, "--max-n must be at least 1")?;
    require(args.max_d >= 1, "--max-d must be at least 1")?;
    let outcomes = run_battery(args.max_n, args.max_d);
    let all_passed = outcomes.iter().all(|o| o.passed);
    if json {
        let checks: Vec<serde_json::Value> = outcomes
            .iter()
            .map(|o| {
                json!({
                    "name": o.name,
                    "cases": o.cases,
                    "passed": o.passed,
                    "detail": o.detail,
                })
            })
            .collect();
        println!("{}", json!({"passed": all_passed, "checks": checks}));
    } else {
        for o in &outcomes {
            if o.passed {
                println!("{}: ok ({} cases)", o.name, o.cases);
            } else {
                println!("{}: FAILED ({})", o.name, o.detail);
            }
        }
    }
    if all_passed {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(CliError::Runtime(
            "verification failed; see the failing case above".to_string(),
        ))
    }
}
