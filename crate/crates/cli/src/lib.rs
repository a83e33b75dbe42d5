//! Command-line front end for `ghcloud`.
//!
//! Exit codes: 0 success, 1 validation or I/O error, 2 search budget
//! exhausted, 3 a failed check in `verify paper`, 64 usage error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use ghcloud::cloud::{lambda_grid, probe_csv, stabilizer_probe};
use ghcloud::constructions::{Exponent, FamilySpec};
use ghcloud::rational::{self, Rational};
use ghcloud::search::{gh_lower_bound, gh_oracle, gh_upper_bound_greedy, DEFAULT_RESTARTS};
use ghcloud::verify::{verify_paper, VerifyParams, DEFAULT_BUDGET};
use ghcloud::{gh_exact_with, hausdorff_in_ambient, io, scale, ExactOptions, FiniteMetricSpace, GhResult, Realization, SolveStatus};
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_VERIFY_FAIL: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "ghcloud", version, about = "Exact Gromov-Hausdorff distances between finite metric spaces")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate, construct and rescale space files
    #[command(subcommand)]
    Space(SpaceCommand),
    /// Distances and bounds between two space files
    #[command(subcommand)]
    Dist(DistCommand),
    /// Bound curves over scale factors
    #[command(subcommand)]
    Probe(ProbeCommand),
    /// Reproducible check suites
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Debug, Subcommand)]
enum SpaceCommand {
    /// Check the metric axioms of a space file
    Validate { file: PathBuf },
    /// Emit a built-in example space
    Construct(ConstructArgs),
    /// Multiply every distance by a nonnegative factor
    Scale {
        file: PathBuf,
        #[arg(long, value_parser = parse_rational)]
        factor: Rational,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    Integers,
    Segment,
    Rtilde,
    Geometric,
    Phi,
    Gapped,
}

#[derive(Debug, Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, value_parser = parse_rational)]
    h: Option<Rational>,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long, value_parser = parse_rational)]
    q: Option<Rational>,
    #[arg(long, value_parser = parse_rational)]
    a: Option<Rational>,
    #[arg(long, value_parser = parse_rational)]
    d: Option<Rational>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum DistCommand {
    /// Exact distance by branch and bound
    Exact {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        deterministic: bool,
    },
    /// Diameter lower bound and local-search upper bound
    Bounds {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
    },
    /// Exhaustive search over all correspondences (at most 4 points per side)
    Oracle { a: PathBuf, b: PathBuf },
    /// Hausdorff distance between two index subsets of one space
    Hausdorff {
        ambient: PathBuf,
        #[arg(long = "a", value_parser = parse_indices)]
        subset_a: Indices,
        #[arg(long = "b", value_parser = parse_indices)]
        subset_b: Indices,
    },
}

#[derive(Debug, Subcommand)]
enum ProbeCommand {
    /// Bounds on |X, λX| over a grid of λ
    Stabilizer {
        #[arg(long, value_parser = ["geometric"])]
        family: String,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: u32,
        #[arg(long = "lambda-grid", value_parser = parse_grid)]
        lambda_grid: Grid,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    /// Run the full check suite
    Paper {
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long, value_parser = parse_rational, default_value = "1/2")]
        h: Rational,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        deterministic: bool,
    },
}

#[derive(Debug, Clone)]
struct Indices(Vec<usize>);

#[derive(Debug, Clone)]
struct Grid(Rational, Rational, Rational);

fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

fn parse_indices(s: &str) -> Result<Indices, String> {
    s.split(',')
        .map(|part| part.parse::<usize>().map_err(|_| format!("bad index {part:?}")))
        .collect::<Result<Vec<_>, _>>()
        .map(Indices)
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, end, step] = parts.as_slice() else {
        return Err("expected START:END:STEP".into());
    };
    Ok(Grid(parse_rational(start)?, parse_rational(end)?, parse_rational(step)?))
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn invalid(message: impl fmt::Display) -> Failure {
    Failure { code: EXIT_INVALID, message: message.to_string() }
}

fn usage(message: impl fmt::Display) -> Failure {
    Failure { code: EXIT_USAGE, message: message.to_string() }
}

fn read_space(path: &Path) -> Result<FiniteMetricSpace, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    io::from_json(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, contents: &str) -> Result<(), Failure> {
    match path {
        Some(path) => std::fs::write(path, contents).map_err(|e| invalid(format!("{}: {e}", path.display()))),
        None => out.write_all(contents.as_bytes()).map_err(invalid),
    }
}

/// Parses `args` (including the program name) and runs the command. Normal
/// output goes to `out`, diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "error: {failure}");
            failure.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Space(cmd) => space(cmd, out),
        Command::Dist(cmd) => dist(cmd, out),
        Command::Probe(cmd) => probe(cmd),
        Command::Verify(cmd) => verify(cmd, out),
    }
}

fn space(cmd: SpaceCommand, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        SpaceCommand::Validate { file } => {
            let space = read_space(&file)?;
            writeln!(out, "valid: {} points, diameter {}", space.len(), rational::format(&space.diameter()))
                .map_err(invalid)?;
        }
        SpaceCommand::Construct(args) => {
            let spec = family_spec(&args)?;
            let space = spec.build().map_err(invalid)?;
            emit(out, args.out.as_deref(), &format!("{}\n", io::to_canonical_json(&space)))?;
        }
        SpaceCommand::Scale { file, factor, out: path } => {
            let space = read_space(&file)?;
            let scaled = scale(&space, &factor).map_err(invalid)?;
            emit(out, path.as_deref(), &format!("{}\n", io::to_canonical_json(&scaled)))?;
        }
    }
    Ok(EXIT_OK)
}

fn family_spec(args: &ConstructArgs) -> Result<FamilySpec, Failure> {
    let n = || args.n.ok_or_else(|| usage("--n is required for this family"));
    let h = || args.h.clone().unwrap_or_else(rational::one);
    Ok(match args.family {
        Family::Integers => FamilySpec::Integers { n: n()? },
        Family::Segment => FamilySpec::SegmentGrid { n: n()?, h: h() },
        Family::Rtilde => FamilySpec::RTildeGrid { n: n()?, h: h() },
        Family::Geometric => FamilySpec::Geometric { p: args.p.unwrap_or(2), n: n()? },
        Family::Phi => FamilySpec::PhiPowers {
            q: args.q.clone().unwrap_or_else(|| rational::int(2)),
            exponent: Exponent::Square,
            n: n()?,
        },
        Family::Gapped => FamilySpec::GappedSegment {
            n: n()?,
            a: args.a.clone().unwrap_or_else(rational::zero),
            d: args.d.clone().unwrap_or_else(rational::one),
            h: h(),
        },
    })
}

fn witness_line(result: &GhResult) -> String {
    result.witness.pairs().iter().map(|(a, b)| format!("{a}-{b}")).collect::<Vec<_>>().join(" ")
}

fn dist(cmd: DistCommand, out: &mut dyn Write) -> Result<i32, Failure> {
    let mut text = String::new();
    let code = match cmd {
        DistCommand::Exact { a, b, budget, deterministic } => {
            let (x, y) = (read_space(&a)?, read_space(&b)?);
            let options = ExactOptions { budget, deterministic, ..ExactOptions::default() };
            let result = gh_exact_with(&x, &y, &options);
            text.push_str(&format!("value {}\n", rational::format(&result.value)));
            let code = match &result.status {
                SolveStatus::Exact => {
                    text.push_str("status exact\n");
                    EXIT_OK
                }
                SolveStatus::LowerUpper { lower, upper } => {
                    text.push_str(&format!(
                        "status budget-exhausted\nlower {}\nupper {}\n",
                        rational::format(lower),
                        rational::format(upper)
                    ));
                    EXIT_BUDGET
                }
            };
            text.push_str(&format!("witness {}\n", witness_line(&result)));
            code
        }
        DistCommand::Bounds { a, b, restarts } => {
            if restarts == 0 {
                return Err(usage("--restarts must be at least 1"));
            }
            let (x, y) = (read_space(&a)?, read_space(&b)?);
            let lower = gh_lower_bound(&x, &y);
            let (upper, witness) = gh_upper_bound_greedy(&x, &y, restarts);
            let pairs: Vec<String> = witness.pairs().iter().map(|(i, j)| format!("{i}-{j}")).collect();
            text.push_str(&format!(
                "lower {}\nupper {}\nwitness {}\n",
                rational::format(&lower),
                rational::format(&upper),
                pairs.join(" ")
            ));
            EXIT_OK
        }
        DistCommand::Oracle { a, b } => {
            let (x, y) = (read_space(&a)?, read_space(&b)?);
            let result = gh_oracle(&x, &y).map_err(invalid)?;
            text.push_str(&format!(
                "value {}\nstatus exact\nwitness {}\n",
                rational::format(&result.value),
                witness_line(&result)
            ));
            EXIT_OK
        }
        DistCommand::Hausdorff { ambient, subset_a, subset_b } => {
            let space = read_space(&ambient)?;
            let realization = Realization::new(space, subset_a.0, subset_b.0).map_err(invalid)?;
            text.push_str(&format!("{}\n", rational::format(&hausdorff_in_ambient(&realization))));
            EXIT_OK
        }
    };
    out.write_all(text.as_bytes()).map_err(invalid)?;
    Ok(code)
}

fn probe(cmd: ProbeCommand) -> Result<i32, Failure> {
    let ProbeCommand::Stabilizer { family: _, p, n, lambda_grid: Grid(start, end, step), out } = cmd;
    let grid = lambda_grid(&start, &end, &step).map_err(usage)?;
    let points = stabilizer_probe(&FamilySpec::Geometric { p, n }, &grid).map_err(invalid)?;
    std::fs::write(&out, probe_csv(&points)).map_err(|e| invalid(format!("{}: {e}", out.display())))?;
    Ok(EXIT_OK)
}

fn verify(cmd: VerifyCommand, out: &mut dyn Write) -> Result<i32, Failure> {
    let VerifyCommand::Paper { n, h, budget, report, deterministic } = cmd;
    let report_data = verify_paper(&VerifyParams { n, h, budget, deterministic });
    if let Some(path) = report {
        std::fs::write(&path, report_data.to_json()).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    }
    out.write_all(report_data.to_text().as_bytes()).map_err(invalid)?;
    Ok(if report_data.passed() { EXIT_OK } else { EXIT_VERIFY_FAIL })
}
