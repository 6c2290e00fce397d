//! Command-line orchestration: argument parsing, file loading, dispatch to
//! the computation modules, and deterministic report emission.
//!
//! Exit codes: 0 success, 2 input or schema error (diagnostic names the
//! field), 3 resource budget exceeded, 4 solver/oracle disagreement.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::optimize;
use crate::oracle;
use crate::rootdatum::DEFAULT_WEYL_BOUND;
use crate::schema::{
    self, ClassOut, CrossCheckOut, InstabilityDto, OracleOut, ParabolicTaskDto, ParabolicTaskOut,
    ProblemDto, RootDatumDto, SubsetDto, ValidateOut, VerifyCentreDto,
};
use crate::{building, instability, Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "destab",
    version,
    about = "Exact optimal-destabilization toolkit: root data, polyhedral cones, quasi-states, \
             instability, and apartment centres"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
struct Common {
    /// Path to the root-datum JSON file.
    #[arg(long)]
    datum: String,
    /// Path to the task's problem JSON file.
    #[arg(long)]
    problem: Option<String>,
    /// Lattice-oracle ball radius in Gram norm.
    #[arg(long, default_value_t = 6)]
    radius: u64,
    /// Maximum lattice points any scan may visit.
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    /// Seed for sampled checks (used by validate when symmetry enumeration
    /// exceeds its bound; other commands are fully deterministic).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a root-datum file against every structural invariant.
    Validate(Common),
    /// Maximize the pairing ratio over a family of constraint pairs.
    Optimize {
        #[command(flatten)]
        common: Common,
        /// Re-verify the result with the independent lattice oracle.
        #[arg(long)]
        cross_check: bool,
    },
    /// Search for an optimal destabilizing cocharacter of a vector set.
    Instability {
        #[command(flatten)]
        common: Common,
        /// Re-verify the result with the independent lattice oracle.
        #[arg(long)]
        cross_check: bool,
    },
    /// Compute the centre of a non-cr convex subset of the apartment.
    Centre(Common),
    /// Verify a candidate centre against its subset.
    VerifyCentre(Common),
    /// Run the brute-force lattice oracle on a problem file.
    Oracle(Common),
    /// Report the parabolic type of a cocharacter.
    Parabolic(Common),
}

/// Parses arguments from the environment and runs; returns the process exit
/// code.
pub fn main_entry() -> i32 {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(Outcome { stdout, stderr, code }) => {
            print!("{stdout}");
            if !stderr.is_empty() {
                eprint!("{stderr}");
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

struct Outcome {
    stdout: String,
    stderr: String,
    code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: 0 }
    }
}

fn problem_path<'a>(c: &'a Common) -> Result<&'a str> {
    c.problem
        .as_deref()
        .ok_or_else(|| Error::input("--problem: required for this command".into()))
}

fn execute(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Validate(c) => run_validate(c),
        Command::Optimize { common, cross_check } => run_optimize(common, *cross_check),
        Command::Instability { common, cross_check } => run_instability(common, *cross_check),
        Command::Centre(c) => run_centre(c),
        Command::VerifyCentre(c) => run_verify_centre(c),
        Command::Oracle(c) => run_oracle(c),
        Command::Parabolic(c) => run_parabolic(c),
    }
}

fn load_datum(c: &Common) -> Result<crate::RootDatum> {
    let dto: RootDatumDto = schema::load_json(&c.datum)?;
    dto.to_datum()
}

fn run_validate(c: &Common) -> Result<Outcome> {
    let datum = load_datum(c)?;
    let report = datum.validate(DEFAULT_WEYL_BOUND, c.seed);
    let out = ValidateOut::from_report(&report);
    let stdout = match c.format {
        Format::Json => schema::to_output(&out),
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "valid: {}", out.valid).unwrap();
            if let Some(order) = out.weyl_order {
                writeln!(s, "weyl order: {order}").unwrap();
            }
            if out.sampled {
                writeln!(s, "symmetry checked by sampling only").unwrap();
            }
            for v in &report.violations {
                writeln!(s, "violation: {v}").unwrap();
            }
            s
        }
    };
    let mut stderr = String::new();
    for v in &report.violations {
        writeln!(stderr, "error: {v}").unwrap();
    }
    let code = if out.valid { 0 } else { 2 };
    Ok(Outcome { stdout, stderr, code })
}

fn class_text(out: &ClassOut) -> String {
    let mut s = String::new();
    writeln!(s, "sign: {}", out.sign).unwrap();
    if let Some(m) = &out.m_squared {
        writeln!(s, "m_squared: {m}").unwrap();
    }
    for w in &out.witnesses {
        writeln!(s, "witness {}: [{}]", w.index, w.ray.join(", ")).unwrap();
    }
    if let Some(p) = &out.parabolic {
        writeln!(
            s,
            "parabolic: levi {:?}, radical {:?}, proper {}",
            p.levi, p.ru, p.proper
        )
        .unwrap();
    }
    writeln!(s, "consistent: {}", out.consistent).unwrap();
    for d in &out.diagnostics {
        writeln!(s, "note: {d}").unwrap();
    }
    s
}

#[derive(serde::Serialize)]
struct IndexedCrossCheckOut {
    index: usize,
    #[serde(flatten)]
    check: CrossCheckOut,
    oracle: OracleOut,
}

#[derive(serde::Serialize)]
struct CheckedClassOut {
    class: ClassOut,
    cross_check: Vec<IndexedCrossCheckOut>,
}

/// Oracle comparison for every index of a solved family; the returned code
/// is 4 when any index disagrees.
fn run_family_cross_check(
    pairs: &[optimize::FamilyPair],
    per_index: &[(usize, crate::optimize::OptimumReport)],
    gram: &crate::matrix::Mat,
    radius: u64,
    budget: u64,
) -> Result<(Vec<IndexedCrossCheckOut>, i32)> {
    let mut rows = Vec::new();
    let mut code = 0;
    for (pair, (idx, report)) in pairs.iter().zip(per_index) {
        let o = oracle::lattice_max(&pair.a, &pair.b, gram, radius, budget)?;
        let check = oracle::cross_check(report, &o, gram);
        if check.is_disagreement() {
            code = 4;
        }
        rows.push(IndexedCrossCheckOut {
            index: *idx,
            check: CrossCheckOut::from_check(&check),
            oracle: OracleOut::from_report(&o),
        });
    }
    Ok((rows, code))
}

fn cross_check_text(rows: &[IndexedCrossCheckOut]) -> String {
    let mut s = String::new();
    for r in rows {
        write!(s, "cross-check {}: {}", r.index, r.check.status).unwrap();
        match (&r.check.detail, &r.oracle.ratio_squared) {
            (Some(d), _) => writeln!(s, " ({d})").unwrap(),
            (None, Some(v)) => writeln!(s, " (oracle {v})").unwrap(),
            (None, None) => writeln!(s).unwrap(),
        }
    }
    s
}

fn run_optimize(c: &Common, cross: bool) -> Result<Outcome> {
    let datum = load_datum(c)?;
    let dto: ProblemDto = schema::load_json(problem_path(c)?)?;
    let (gram, pairs, idents) = dto.to_parts(&datum)?;
    let class = optimize::family_max_with_gram(&datum, &gram, &pairs, &idents)?;
    let out = ClassOut::from_class(&class);
    if !cross {
        let stdout = match c.format {
            Format::Json => schema::to_output(&out),
            Format::Text => class_text(&out),
        };
        return Ok(Outcome::ok(stdout));
    }
    let (rows, code) =
        run_family_cross_check(&pairs, &class.per_index, &gram, c.radius, c.budget)?;
    let stdout = match c.format {
        Format::Json => schema::to_output(&CheckedClassOut { class: out, cross_check: rows }),
        Format::Text => {
            let mut s = class_text(&out);
            s.push_str(&cross_check_text(&rows));
            s
        }
    };
    Ok(Outcome { stdout, stderr: String::new(), code })
}

#[derive(serde::Serialize)]
struct CheckedInstabilityOut {
    #[serde(flatten)]
    report: schema::InstabilityOut,
    cross_check: Vec<IndexedCrossCheckOut>,
}

fn run_instability(c: &Common, cross: bool) -> Result<Outcome> {
    let datum = load_datum(c)?;
    let dto: InstabilityDto = schema::load_json(problem_path(c)?)?;
    let (rep, vectors, transforms, mode, asserted) = dto.to_parts(&datum)?;
    let report =
        instability::optimal_instability(&datum, &rep, &vectors, &transforms, &mode, asserted)?;
    let out = schema::InstabilityOut {
        class: ClassOut::from_class(&report.class),
        search_scope: report.search_scope.to_string(),
        transform_count: report.transform_count,
    };
    if !cross {
        let stdout = match c.format {
            Format::Json => schema::to_output(&out),
            Format::Text => {
                let mut s = class_text(&out.class);
                writeln!(s, "search scope: {}", out.search_scope).unwrap();
                writeln!(s, "transforms searched: {}", out.transform_count).unwrap();
                s
            }
        };
        return Ok(Outcome::ok(stdout));
    }
    let (rows, code) = run_family_cross_check(
        &report.pairs,
        &report.class.per_index,
        &datum.gram,
        c.radius,
        c.budget,
    )?;
    let stdout = match c.format {
        Format::Json => {
            schema::to_output(&CheckedInstabilityOut { report: out, cross_check: rows })
        }
        Format::Text => {
            let mut s = class_text(&out.class);
            writeln!(s, "search scope: {}", out.search_scope).unwrap();
            s.push_str(&cross_check_text(&rows));
            s
        }
    };
    Ok(Outcome { stdout, stderr: String::new(), code })
}

fn run_centre(c: &Common) -> Result<Outcome> {
    let datum = load_datum(c)?;
    let dto: SubsetDto = schema::load_json(problem_path(c)?)?;
    let subset = dto.to_subset(&datum)?;
    let report = building::centre_in_apartment(&datum, &subset)?;
    let out = schema::CentreOut::from_report(&report);
    let stdout = match c.format {
        Format::Json => schema::to_output(&out),
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "centre: {:?}", out.centre).unwrap();
            writeln!(s, "m_squared: {}", out.m_squared).unwrap();
            writeln!(s, "fixed by stabilizer: {}", out.fixed_by_stabilizer).unwrap();
            s
        }
    };
    Ok(Outcome::ok(stdout))
}

fn run_verify_centre(c: &Common) -> Result<Outcome> {
    let datum = load_datum(c)?;
    let dto: VerifyCentreDto = schema::load_json(problem_path(c)?)?;
    let subset = dto.subset.to_subset(&datum)?;
    let coords = dto
        .centre
        .iter()
        .enumerate()
        .map(|(i, r)| r.to_rat(&format!("centre[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let candidate = building::zeta(&crate::Cocharacter::new(coords))?;
    let group = datum.weyl_group(DEFAULT_WEYL_BOUND)?;
    let verification = building::verify_centre(&datum, &group, &subset, &candidate)?;
    let out = schema::VerifyOut::from_verification(&verification);
    let stdout = match c.format {
        Format::Json => schema::to_output(&out),
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "passed: {}", out.passed).unwrap();
            for ch in &out.checks {
                writeln!(
                    s,
                    "{}: {} ({})",
                    ch.name,
                    if ch.passed { "pass" } else { "fail" },
                    ch.detail
                )
                .unwrap();
            }
            s
        }
    };
    Ok(Outcome::ok(stdout))
}

#[derive(serde::Serialize)]
struct IndexedOracleOut {
    index: usize,
    #[serde(flatten)]
    report: OracleOut,
}

#[derive(serde::Serialize)]
struct OracleTaskOut {
    per_index: Vec<IndexedOracleOut>,
}

fn run_oracle(c: &Common) -> Result<Outcome> {
    let datum = load_datum(c)?;
    let dto: ProblemDto = schema::load_json(problem_path(c)?)?;
    let (gram, pairs, _) = dto.to_parts(&datum)?;
    let mut per_index = Vec::new();
    for p in &pairs {
        let r = oracle::lattice_max(&p.a, &p.b, &gram, c.radius, c.budget)?;
        per_index.push(IndexedOracleOut { index: p.index, report: OracleOut::from_report(&r) });
    }
    let stdout = match c.format {
        Format::Json => schema::to_output(&OracleTaskOut { per_index }),
        Format::Text => {
            let mut s = String::new();
            for r in &per_index {
                write!(s, "index {}: sign {}", r.index, r.report.sign).unwrap();
                if let Some(v) = &r.report.ratio_squared {
                    write!(s, ", ratio_squared {v}").unwrap();
                }
                if let Some(b) = &r.report.best {
                    write!(s, ", best [{}]", b.join(", ")).unwrap();
                }
                writeln!(s, " ({} points scanned)", r.report.scanned).unwrap();
            }
            s
        }
    };
    Ok(Outcome::ok(stdout))
}

fn run_parabolic(c: &Common) -> Result<Outcome> {
    let datum = load_datum(c)?;
    let dto: ParabolicTaskDto = schema::load_json(problem_path(c)?)?;
    let coords = dto
        .lambda
        .iter()
        .enumerate()
        .map(|(i, r)| r.to_rat(&format!("lambda[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let lambda = crate::Cocharacter::new(coords);
    let p = datum.parabolic_type(&lambda)?;
    let out = ParabolicTaskOut {
        lambda: lambda.coords.iter().map(crate::rational::format_rat).collect(),
        parabolic: schema::ParabolicOut::from_type(&p),
    };
    let stdout = match c.format {
        Format::Json => schema::to_output(&out),
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "levi roots: {:?}", out.parabolic.levi).unwrap();
            writeln!(s, "radical roots: {:?}", out.parabolic.ru).unwrap();
            writeln!(s, "proper: {}", out.parabolic.proper).unwrap();
            s
        }
    };
    Ok(Outcome::ok(stdout))
}
