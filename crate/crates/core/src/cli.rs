//! Command-line front end.
//!
//! Every command reads its inputs, prints a result to standard output and
//! exits 0; domain errors (including malformed input files) exit 1 and usage
//! errors exit 2. Set listings always appear in canonical order, so identical
//! inputs give byte-identical output regardless of `--workers`.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::budget::Budget;
use crate::closure::{close_fixpoint, is_algebra, step, steps_to, StepCount};
use crate::error::SetError;
use crate::family::Family;
use crate::intervals::{parse_rational, IntervalSet};
use crate::minimal::{
    enumerate_n_minimal, generator_1mc, generator_all_n, is_n_minimal_constructible, is_n_minimal_fat,
};
use crate::partition::{algebra_from_partition_with_budget, atoms, census, partition_from_algebra, Partition};
use crate::separability::equivalence_classes;
use crate::steps::{b_set, predicted_b_set, steps_formula};

/// Largest partition size `steps verify` checks without `--deep`.
pub const DEFAULT_VERIFY_MAX: usize = 10;
/// Largest partition size `steps verify --deep` checks.
pub const DEEP_VERIFY_MAX: usize = 14;

#[derive(Debug, Parser)]
#[command(name = "setforge", version, about = "Closure of set families under union, intersection and complement")]
pub struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,

    /// Extend step-formula checks to partitions with 11..=14 blocks.
    #[arg(long, global = true)]
    pub deep: bool,

    /// Refuse to materialize more than this many sets (default 10^6, or
    /// SETFORGE_MAX_SETS).
    #[arg(long, global = true, value_name = "INT")]
    pub max_sets: Option<usize>,

    /// Worker threads for parallel kernels.
    #[arg(long, global = true, value_name = "INT")]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply the construction step to a family.
    Close {
        file: PathBuf,
        /// Number of steps (default 1).
        #[arg(long, conflicts_with = "fixpoint")]
        steps: Option<usize>,
        /// Iterate until the family stops growing and print the trace.
        #[arg(long)]
        fixpoint: bool,
    },
    /// Step counts and B-sets.
    #[command(subcommand)]
    Steps(StepsCommand),
    /// Atoms of a family (points grouped by membership pattern).
    Atoms { file: PathBuf },
    /// Separability classes of a family.
    Classes { file: PathBuf },
    /// Whether a family is closed under complement, union and intersection.
    IsAlgebra { file: PathBuf },
    /// The algebra generated by a partition.
    FromPartition { file: PathBuf },
    /// The partition underlying a finite algebra.
    ToPartition { file: PathBuf },
    /// Count distinct algebras on an n-element universe.
    CountAlgebras {
        n: usize,
        /// Also close every nonempty family and count the results (n <= 4).
        #[arg(long)]
        exhaustive: bool,
    },
    /// Minimal constructibility.
    #[command(subcommand)]
    Minimal(MinimalCommand),
    /// Interval-constructible subsets of the real line.
    #[command(subcommand)]
    Intervals(IntervalsCommand),
}

#[derive(Debug, Subcommand)]
pub enum StepsCommand {
    /// Closed-form step count for an n-block partition.
    Formula { n: u64 },
    /// Steps needed to reach the generated algebra, measured.
    Empirical { file: PathBuf },
    /// B_m: the k whose k-unions all appear after m steps.
    Bset {
        file: PathBuf,
        #[arg(long)]
        m: usize,
    },
    /// Compare the formula with measurement for n-block partitions.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Largest n (default 10, or 14 with --deep).
    #[arg(long)]
    pub max_n: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum MinimalCommand {
    /// Test n-minimal (or n-minimal-fat) constructibility.
    Check {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        fat: bool,
    },
    /// Generating family for a finite algebra.
    Generate {
        file: PathBuf,
        /// Generator that is n-minimal for every n.
        #[arg(long)]
        all_n: bool,
    },
    /// List the n-minimal families over a small universe.
    Enum {
        #[arg(long)]
        universe: usize,
        #[arg(long)]
        n: usize,
        /// Largest family size listed (default: all).
        #[arg(long)]
        max_size: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum IntervalsCommand {
    /// Canonical form of a set.
    Normalize { file: PathBuf },
    Union { a: PathBuf, b: PathBuf },
    Intersect { a: PathBuf, b: PathBuf },
    Complement { a: PathBuf },
    /// Membership of a rational `p/q`.
    Contains {
        a: PathBuf,
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Upper bound on construction steps from open intervals.
    Bound { a: PathBuf },
    /// Whether bounded open intervals suffice to build the set.
    BoundedOk { a: PathBuf },
}

#[derive(Debug)]
enum Failure {
    Domain(String),
    Io(io::Error),
}

impl From<SetError> for Failure {
    fn from(e: SetError) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command. Returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    let result = match cli.workers {
        Some(0) => {
            let _ = writeln!(err, "error: --workers must be at least 1");
            return 2;
        }
        Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
            // the pool runs on its own threads; collect output there, then copy
            Ok(pool) => {
                let (buf, r) = pool.install(|| {
                    let mut buf = Vec::new();
                    let r = dispatch(&cli, &mut buf);
                    (buf, r)
                });
                match out.write_all(&buf) {
                    Ok(()) => r,
                    Err(e) => Err(Failure::Io(e)),
                }
            }
            Err(e) => Err(Failure::Domain(e.to_string())),
        },
        None => dispatch(&cli, out),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn read_input(path: &Path) -> std::result::Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: crate::error::Result<T>) -> std::result::Result<T, Failure> {
    r.map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn read_family(path: &Path) -> std::result::Result<Family, Failure> {
    let text = read_input(path)?;
    with_path(path, Family::from_json(&text))
}

fn read_nonempty_family(path: &Path) -> std::result::Result<Family, Failure> {
    let f = read_family(path)?;
    if f.is_empty() {
        return Err(Failure::Domain(format!("{}: {}", path.display(), SetError::EmptyFamily)));
    }
    Ok(f)
}

fn read_intervals(path: &Path) -> std::result::Result<IntervalSet, Failure> {
    let text = read_input(path)?;
    with_path(path, IntervalSet::from_json(&text))
}

fn budget(cli: &Cli) -> Budget {
    cli.max_sets.map(Budget::new).unwrap_or_else(Budget::from_env)
}

fn check_budget(budget: &Budget, family: &Family) -> Outcome {
    budget.check("family", Some(family.len() as u128))?;
    Ok(())
}

fn write_family_listing(out: &mut dyn Write, family: &Family) -> io::Result<()> {
    for s in family.members() {
        writeln!(out, "{s}")?;
    }
    Ok(())
}

fn json_line<T: Serialize>(out: &mut dyn Write, value: &T) -> io::Result<()> {
    let text = serde_json::to_string(value).expect("output serializes");
    writeln!(out, "{text}")
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Outcome {
    let budget = budget(cli);
    match &cli.command {
        Command::Close { file, steps, fixpoint } => close(cli, out, &budget, file, *steps, *fixpoint),
        Command::Steps(cmd) => steps(cli, out, cmd),
        Command::Atoms { file } => {
            let family = read_nonempty_family(file)?;
            let p = atoms(&family)?;
            write_partition(cli, out, &p)
        }
        Command::Classes { file } => {
            let family = read_family(file)?;
            let p = equivalence_classes(&family).blocks;
            write_partition(cli, out, &p)
        }
        Command::IsAlgebra { file } => {
            let family = read_family(file)?;
            let yes = is_algebra(&family);
            if cli.json {
                writeln!(out, "{{\"is_algebra\":{yes}}}")?;
            } else {
                writeln!(out, "{yes}")?;
            }
            Ok(())
        }
        Command::FromPartition { file } => {
            let text = read_input(file)?;
            let p = with_path(file, Partition::from_json(&text))?;
            let a = algebra_from_partition_with_budget(&p, &budget)?;
            write_family(cli, out, &a)
        }
        Command::ToPartition { file } => {
            let family = read_family(file)?;
            let p = partition_from_algebra(&family)?;
            write_partition(cli, out, &p)
        }
        Command::CountAlgebras { n, exhaustive } => {
            let c = census(*n, *exhaustive)?;
            if cli.json {
                writeln!(out, "{}", c.to_json())?;
            } else {
                writeln!(out, "n: {}", c.n)?;
                writeln!(out, "partition count: {}", c.partition_count)?;
                if let Some(e) = &c.exhaustive_count {
                    writeln!(out, "exhaustive count: {e}")?;
                    if let Some(v) = c.families_enumerated {
                        writeln!(out, "families closed: {v}")?;
                    }
                    writeln!(out, "agree: {}", c.agree().unwrap_or(false))?;
                }
            }
            Ok(())
        }
        Command::Minimal(cmd) => minimal(cli, out, cmd),
        Command::Intervals(cmd) => intervals(cli, out, cmd),
    }
}

fn write_family(cli: &Cli, out: &mut dyn Write, family: &Family) -> Outcome {
    if cli.json {
        writeln!(out, "{}", family.to_json())?;
    } else {
        writeln!(out, "{} sets over |X| = {}", family.len(), family.universe().size())?;
        write_family_listing(out, family)?;
    }
    Ok(())
}

fn write_partition(cli: &Cli, out: &mut dyn Write, p: &Partition) -> Outcome {
    if cli.json {
        writeln!(out, "{}", p.to_json())?;
    } else {
        writeln!(out, "{} blocks over |X| = {}", p.len(), p.universe().size())?;
        for b in p.blocks() {
            writeln!(out, "{b}")?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct FixpointJson {
    family: crate::family::FamilyJson,
    trace: crate::closure::StepTrace,
}

fn close(
    cli: &Cli,
    out: &mut dyn Write,
    budget: &Budget,
    file: &Path,
    steps: Option<usize>,
    fixpoint: bool,
) -> Outcome {
    let family = read_nonempty_family(file)?;
    check_budget(budget, &family)?;
    if fixpoint {
        let (closed, trace) = close_fixpoint(&family)?;
        check_budget(budget, &closed)?;
        if cli.json {
            json_line(
                out,
                &FixpointJson {
                    family: closed.to_json_value(),
                    trace,
                },
            )?;
        } else {
            writeln!(out, "U_inf = U_{} ({} sets)", trace.fixpoint_index, closed.len())?;
            write_family_listing(out, &closed)?;
            for (k, size) in &trace.entries {
                writeln!(out, "|U_{k}| = {size}")?;
            }
            writeln!(out, "fixpoint index: {}", trace.fixpoint_index)?;
        }
        return Ok(());
    }
    let n = steps.unwrap_or(1);
    let mut current = family;
    for _ in 0..n {
        let next = step(&current);
        check_budget(budget, &next)?;
        if next.len() == current.len() {
            break;
        }
        current = next;
    }
    if cli.json {
        writeln!(out, "{}", current.to_json())?;
    } else {
        writeln!(out, "U_{n} ({} sets)", current.len())?;
        write_family_listing(out, &current)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct EmpiricalJson {
    steps: StepCount,
    fixpoint_size: usize,
    is_partition: bool,
    formula: Option<u32>,
}

#[derive(Serialize)]
struct BSetJson {
    m: usize,
    members: Vec<usize>,
    predicted: Option<Vec<usize>>,
}

#[derive(Serialize)]
struct VerifyRow {
    n: usize,
    formula: u32,
    empirical: StepCount,
    agree: bool,
}

fn steps(cli: &Cli, out: &mut dyn Write, cmd: &StepsCommand) -> Outcome {
    match cmd {
        StepsCommand::Formula { n } => {
            let s = steps_formula(*n)?;
            if cli.json {
                writeln!(out, "{{\"n\":{n},\"steps\":{s}}}")?;
            } else {
                writeln!(out, "{s}")?;
            }
        }
        StepsCommand::Empirical { file } => {
            let family = read_nonempty_family(file)?;
            let (closed, _) = close_fixpoint(&family)?;
            let s = steps_to(&family, &closed)?;
            let is_partition = Partition::from_family(&family).is_ok();
            let formula = if is_partition {
                Some(steps_formula(family.len() as u64)?)
            } else {
                None
            };
            if cli.json {
                json_line(
                    out,
                    &EmpiricalJson {
                        steps: s,
                        fixpoint_size: closed.len(),
                        is_partition,
                        formula,
                    },
                )?;
            } else {
                writeln!(out, "steps to U_inf: {s}")?;
                writeln!(out, "|U_inf| = {}", closed.len())?;
                if let Some(f) = formula {
                    writeln!(out, "partition formula: {f}")?;
                }
            }
        }
        StepsCommand::Bset { file, m } => {
            let family = read_nonempty_family(file)?;
            let b = b_set(&family, *m)?;
            let predicted = Partition::from_family(&family)
                .ok()
                .and_then(|_| predicted_b_set(family.len(), *m))
                .map(|s| s.into_iter().collect::<Vec<_>>());
            let members: Vec<usize> = b.members.iter().copied().collect();
            if cli.json {
                json_line(out, &BSetJson { m: *m, members, predicted })?;
            } else {
                let list: Vec<String> = members.iter().map(|k| k.to_string()).collect();
                writeln!(out, "B_{m} = {{{}}}", list.join(", "))?;
                if let Some(p) = predicted {
                    let list: Vec<String> = p.iter().map(|k| k.to_string()).collect();
                    writeln!(out, "predicted = {{{}}}", list.join(", "))?;
                }
            }
        }
        StepsCommand::Verify(args) => {
            let max = args
                .max_n
                .unwrap_or(if cli.deep { DEEP_VERIFY_MAX } else { DEFAULT_VERIFY_MAX });
            if max > DEFAULT_VERIFY_MAX && !cli.deep {
                return Err(Failure::Domain(format!(
                    "partitions above {DEFAULT_VERIFY_MAX} blocks need --deep"
                )));
            }
            let rows = verify_rows(max)?;
            let all_agree = rows.iter().all(|r| r.agree);
            for r in &rows {
                if cli.json {
                    json_line(out, r)?;
                } else {
                    writeln!(
                        out,
                        "n={:<3} formula={} empirical={} {}",
                        r.n,
                        r.formula,
                        r.empirical,
                        if r.agree { "ok" } else { "MISMATCH" }
                    )?;
                }
            }
            if !all_agree {
                return Err(Failure::Domain("formula and measurement disagree".into()));
            }
        }
    }
    Ok(())
}

fn verify_rows(max: usize) -> std::result::Result<Vec<VerifyRow>, Failure> {
    let mut rows = Vec::new();
    for n in 1..=max {
        let universe = crate::family::Universe::new(n)?;
        let p = Partition::discrete(universe);
        let family = p.to_family();
        let target = algebra_from_partition_with_budget(&p, &Budget::default())?;
        let empirical = steps_to(&family, &target)?;
        let formula = steps_formula(n as u64)?;
        rows.push(VerifyRow {
            n,
            formula,
            empirical,
            agree: empirical == StepCount::Finite(formula as usize),
        });
    }
    Ok(rows)
}

fn minimal(cli: &Cli, out: &mut dyn Write, cmd: &MinimalCommand) -> Outcome {
    match cmd {
        MinimalCommand::Check { file, n, fat } => {
            let family = read_family(file)?;
            let report = if *fat {
                is_n_minimal_fat(&family, *n)?
            } else {
                is_n_minimal_constructible(&family, *n)?
            };
            if cli.json {
                writeln!(out, "{}", report.to_json())?;
            } else {
                let kind = if *fat { "minimal-fat" } else { "minimal" };
                match &report.witness {
                    None => writeln!(out, "{n}-{kind} constructible: yes")?,
                    Some(w) => writeln!(
                        out,
                        "{n}-{kind} constructible: no (the others rebuild it without {})",
                        w.removed
                    )?,
                }
            }
        }
        MinimalCommand::Generate { file, all_n } => {
            let algebra = read_family(file)?;
            let h = if *all_n {
                generator_all_n(&algebra)?
            } else {
                generator_1mc(&algebra)?
            };
            write_family(cli, out, &h)?;
        }
        MinimalCommand::Enum { universe, n, max_size } => {
            let families = enumerate_n_minimal(*universe, *n, max_size.unwrap_or(usize::MAX))?;
            for f in &families {
                if cli.json {
                    writeln!(out, "{}", f.to_json())?;
                } else {
                    writeln!(out, "{f}")?;
                }
            }
        }
    }
    Ok(())
}

fn write_intervals(cli: &Cli, out: &mut dyn Write, s: &IntervalSet) -> Outcome {
    if cli.json {
        writeln!(out, "{}", s.to_json())?;
    } else {
        writeln!(out, "{s}")?;
    }
    Ok(())
}

fn intervals(cli: &Cli, out: &mut dyn Write, cmd: &IntervalsCommand) -> Outcome {
    match cmd {
        IntervalsCommand::Normalize { file } => write_intervals(cli, out, &read_intervals(file)?),
        IntervalsCommand::Union { a, b } => {
            let r = read_intervals(a)?.union(&read_intervals(b)?);
            write_intervals(cli, out, &r)
        }
        IntervalsCommand::Intersect { a, b } => {
            let r = read_intervals(a)?.intersect(&read_intervals(b)?);
            write_intervals(cli, out, &r)
        }
        IntervalsCommand::Complement { a } => write_intervals(cli, out, &read_intervals(a)?.complement()),
        IntervalsCommand::Contains { a, x } => {
            let set = read_intervals(a)?;
            let x = parse_rational(x)?;
            let yes = set.contains(&x);
            if cli.json {
                writeln!(out, "{{\"contains\":{yes}}}")?;
            } else {
                writeln!(out, "{yes}")?;
            }
            Ok(())
        }
        IntervalsCommand::Bound { a } => {
            let b = read_intervals(a)?.construction_bound();
            if cli.json {
                writeln!(out, "{{\"bound\":{b}}}")?;
            } else {
                writeln!(out, "{b}")?;
            }
            Ok(())
        }
        IntervalsCommand::BoundedOk { a } => {
            let ok = read_intervals(a)?.bounded_variant_ok();
            if cli.json {
                writeln!(out, "{{\"bounded_variant_ok\":{ok}}}")?;
            } else {
                writeln!(out, "{ok}")?;
            }
            Ok(())
        }
    }
}
