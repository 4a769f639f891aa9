//! `liecat`: tables, cohomology, deformations and isomorphism checks from
//! the command line.
//!
//! Exit codes: 0 true / success, 1 false, 2 usage or parse error,
//! 3 inconclusive (a randomized computation ran out of budget).

mod source;

use std::fmt::Display;
use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use liecat_core::catalog;
use liecat_core::cochain::Codifferential;
use liecat_core::cohomology::{
    betti, betti_rational, format_vector, series_invariants, BettiMode, CohomologyError, Evidence,
};
use liecat_core::deformation::{iso_witness_search, verify_parametric_iso, versal, DeformationError, DEFAULT_BUDGET};
use liecat_core::extension::{excluded_form, symmetry_map, ExtensionError, SymmetryMap};
use liecat_core::scalar::{parse_rational, parse_scalar, Field, Matrix, Scalar, ScalarError};
use liecat_core::tables::{table, TableError};
use num_rational::BigRational;

use source::{Source, Structure};

/// Random points per seed for generic ranks.
const GENERIC_TRIALS: usize = 3;

#[derive(Parser)]
#[command(name = "liecat", version, about = "Exact computations on low-dimensional Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// A structure is given as a `.lie` file, a catalog id (`5.d5`), or either
/// followed by `@(a:b:c)` to fix the parameters in declaration order.
#[derive(Subcommand)]
enum Command {
    /// Check the Jacobi identity; prints the failing triples otherwise.
    Jacobi {
        source: String,
        /// Parameter values, e.g. `p=2,q=3`.
        #[arg(long)]
        at: Option<String>,
    },
    /// Betti numbers: exact at a point, otherwise generic.
    Cohomology {
        source: String,
        #[arg(long)]
        at: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Eliminate over the fraction field instead of sampling.
        #[arg(long)]
        symbolic: bool,
    },
    /// Regenerate a cohomology table (`3`, `4`, `5` or `nil`) as TSV.
    Tables {
        table: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the TSV here instead of standard output.
        #[arg(long)]
        out: Option<String>,
    },
    /// The nilpotent table, as `tables nil`.
    NilpotentTable {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Truncated versal deformation.
    Versal {
        source: String,
        #[arg(long, default_value_t = 3)]
        order: u32,
        #[arg(long)]
        at: Option<String>,
    },
    /// Center, central series and Betti numbers.
    Invariants {
        source: String,
        #[arg(long)]
        at: Option<String>,
    },
    /// Check that a witness matrix maps the first structure onto the second.
    IsoVerify {
        first: String,
        second: String,
        /// One matrix row per line, entries separated by whitespace.
        witness: String,
    },
    /// Search for an isomorphism witness.
    IsoSearch {
        first: String,
        second: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        tries: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the witness, in the format `iso-verify` reads.
        #[arg(long)]
        out: Option<String>,
    },
    /// Apply a family symmetry (`sigma` or `tau`) to a point such as `1:2`.
    Symmetry { family: String, map: String, point: String },
    /// Catalog browsing.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// List entries, optionally of one table.
    List { table: Option<String> },
}

/// Outcome of a command: exit code and text for standard output.
struct Report {
    code: u8,
    text: String,
}

impl Report {
    fn new(code: u8) -> Self {
        Report { code, text: String::new() }
    }

    fn line(mut self, key: &str, value: impl Display) -> Self {
        let _ = writeln!(self.text, "{key}\t{value}");
        self
    }
}

/// An error with its exit code.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

pub fn usage(message: impl Display) -> Failure {
    Failure { code: 2, message: message.to_string() }
}

fn inconclusive(message: impl Display) -> Failure {
    Failure { code: 3, message: message.to_string() }
}

impl From<CohomologyError> for Failure {
    fn from(e: CohomologyError) -> Self {
        match e {
            CohomologyError::JacobiFails => Failure { code: 1, message: e.to_string() },
            CohomologyError::Scalar(ScalarError::NoValidSample) => inconclusive(e),
            e => usage(e),
        }
    }
}

impl From<TableError> for Failure {
    fn from(e: TableError) -> Self {
        match e {
            TableError::Inconclusive { .. } => inconclusive(e),
            e => usage(e),
        }
    }
}

fn write_out(path: &str, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| usage(format!("{path}: {e}")))
}

fn tuple<K: Display>(v: &[K]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn matrix_rows<K: Field + Display>(m: &Matrix<K>) -> Vec<String> {
    (0..m.rows()).map(|i| m.row(i).iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")).collect()
}

/// `(i, j, k, J(eᵢ,eⱼ,eₖ))` for every triple where the Jacobiator is nonzero.
fn failing_triples<K: Field>(d: &Codifferential<K>) -> Vec<(usize, usize, usize, Vec<K>)> {
    let n = d.dim();
    let e = |i: usize| (0..n).map(|r| if r == i { K::one() } else { K::zero() }).collect::<Vec<K>>();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (x, y, z) = (e(i), e(j), e(k));
                let terms = [
                    d.bracket(&d.bracket(&x, &y), &z),
                    d.bracket(&d.bracket(&y, &z), &x),
                    d.bracket(&d.bracket(&z, &x), &y),
                ];
                let sum: Vec<K> = (0..n).map(|r| terms.iter().fold(K::zero(), |acc, t| acc.add(&t[r]))).collect();
                if !sum.iter().all(Field::is_zero) {
                    out.push((i, j, k, sum));
                }
            }
        }
    }
    out
}

fn jacobi_report<K: Field + Display>(d: &Codifferential<K>) -> Report {
    let failing = failing_triples(d);
    let mut r = Report::new(if failing.is_empty() { 0 } else { 1 }).line("jacobi", failing.is_empty());
    for (i, j, k, v) in failing {
        r = r.line("failing", format!("e{},e{},e{}\t{}", i + 1, j + 1, k + 1, tuple(&v)));
    }
    r
}

fn cmd_jacobi(source: &str, at: Option<&str>) -> Result<Report, Failure> {
    Ok(match Source::load(source, at)?.structure()? {
        Structure::Exact(d) => jacobi_report(&d),
        Structure::Symbolic(d, _) => jacobi_report(&d),
    })
}

fn cmd_cohomology(source: &str, at: Option<&str>, seed: u64, symbolic: bool) -> Result<Report, Failure> {
    let report = match Source::load(source, at)?.structure()? {
        Structure::Exact(d) => betti_rational(&d)?,
        Structure::Symbolic(d, avoid) => {
            let mode =
                if symbolic { BettiMode::Symbolic } else { BettiMode::Generic { seed, trials: GENERIC_TRIALS, avoid } };
            betti(&d, &mode)?
        }
    };
    let mut r = Report::new(0)
        .line("betti", format_vector(&report.betti))
        .line("euler", report.euler_characteristic())
        .line("mode", report.mode());
    if let Evidence::Probabilistic { seeds, .. } = &report.evidence {
        r = r.line("seeds", seeds.iter().map(ToString::to_string).collect::<Vec<_>>().join(","));
    }
    Ok(r)
}

fn cmd_tables(which: &str, seed: u64, out: Option<&str>) -> Result<Report, Failure> {
    let report = table(which, seed)?;
    let mut r = Report::new(if report.consistent() { 0 } else { 1 });
    let tsv = report.to_tsv();
    match out {
        Some(path) => write_out(path, &tsv)?,
        None => r.text = tsv,
    }
    Ok(r)
}

fn exact(source: &Source, what: &str) -> Result<Codifferential<BigRational>, Failure> {
    match source.structure()? {
        Structure::Exact(d) => Ok(d),
        Structure::Symbolic(..) => Err(usage(format!("{what} needs every parameter fixed; use --at or `@(...)`"))),
    }
}

fn deformation_failure(e: DeformationError) -> Failure {
    match e {
        DeformationError::JacobiFails => Failure { code: 1, message: e.to_string() },
        DeformationError::BudgetExhausted(_) => inconclusive(e),
        e => usage(e),
    }
}

fn cmd_versal(source: &str, order: u32, at: Option<&str>) -> Result<Report, Failure> {
    if order < 2 {
        return Err(usage(DeformationError::OrderTooSmall(order)));
    }
    let d = exact(&Source::load(source, at)?, "versal")?;
    let v = versal(&d, order).map_err(deformation_failure)?;
    let mut r = Report::new(0);
    r.text = v.to_string();
    Ok(r)
}

fn cmd_invariants(source: &str, at: Option<&str>) -> Result<Report, Failure> {
    let d = exact(&Source::load(source, at)?, "invariants")?;
    let mut r = Report::new(0);
    r.text = format!("{}\n", series_invariants(&d)?);
    Ok(r)
}

fn parse_witness(path: &str) -> Result<Matrix<Scalar>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|t| parse_scalar(t).map_err(|e| usage(format!("{path}:{}: {e}", i + 1))))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(usage(format!("{path}: the witness must be a nonempty square matrix")));
    }
    Ok(Matrix::from_rows(rows))
}

fn cmd_iso_verify(first: &str, second: &str, witness: &str) -> Result<Report, Failure> {
    let (a, b) =
        (Source::load(first, None)?.structure()?.to_scalar(), Source::load(second, None)?.structure()?.to_scalar());
    let g = parse_witness(witness)?;
    if a.dim() != b.dim() {
        return Ok(Report::new(1).line("iso", false).line("reason", format!("dimensions {} and {}", a.dim(), b.dim())));
    }
    if g.rows() != a.dim() {
        return Err(usage(format!("witness is {}x{}, structures have dimension {}", g.rows(), g.cols(), a.dim())));
    }
    match verify_parametric_iso(&a, &b, &g) {
        Ok(true) => Ok(Report::new(0).line("iso", true)),
        Ok(false) => Ok(Report::new(1)
            .line("iso", false)
            .line("reason", "the witness does not transform the first structure into the second")),
        Err(DeformationError::SingularMatrix) => {
            Ok(Report::new(1).line("iso", false).line("reason", "singular witness"))
        }
        Err(e) => Err(deformation_failure(e)),
    }
}

fn cmd_iso_search(first: &str, second: &str, tries: usize, seed: u64, out: Option<&str>) -> Result<Report, Failure> {
    let a = exact(&Source::load(first, None)?, "iso-search")?;
    let b = exact(&Source::load(second, None)?, "iso-search")?;
    match iso_witness_search(&a, &b, tries, seed) {
        Ok(g) => {
            let rows = matrix_rows(&g);
            if let Some(path) = out {
                write_out(path, &(rows.join("\n") + "\n"))?;
            }
            let mut r = Report::new(0).line("iso", true);
            for row in rows {
                r = r.line("witness", row);
            }
            Ok(r)
        }
        Err(e @ (DeformationError::InvariantMismatch(_) | DeformationError::DimensionMismatch(..))) => {
            Ok(Report::new(1).line("iso", false).line("reason", e))
        }
        Err(e @ DeformationError::BudgetExhausted(_)) => {
            Ok(Report::new(3).line("iso", "inconclusive").line("reason", e))
        }
        Err(e) => Err(deformation_failure(e)),
    }
}

fn cmd_symmetry(family: &str, map: &str, point: &str) -> Result<Report, Failure> {
    let id = if family.contains('.') { family.to_string() } else { format!("5.{family}") };
    let map: SymmetryMap = map.parse().map_err(usage)?;
    let x = point
        .trim_matches(|c| c == '(' || c == ')')
        .split(':')
        .map(|t| parse_rational(t.trim()).map_err(|e| usage(format!("point `{point}`: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let image = symmetry_map(&id, map, &x).map_err(|e: ExtensionError| usage(e))?;
    if let Ok(Some(form)) = excluded_form(&id, &x) {
        eprintln!("note: {form} vanishes at {point}; the map is not an isomorphism of the family there");
    }
    let mut r = Report::new(0);
    r.text = format!("{}\n", image.iter().map(ToString::to_string).collect::<Vec<_>>().join(":"));
    Ok(r)
}

fn cmd_catalog_list(which: Option<&str>) -> Result<Report, Failure> {
    let defs: Vec<_> = match which {
        Some(t) => catalog::list(t),
        None => catalog::all().iter().collect(),
    };
    if defs.is_empty() {
        return Err(usage(format!("unknown table `{}` (expected 3, 4, 5 or nil)", which.unwrap_or_default())));
    }
    let mut r = Report::new(0);
    r.text.push_str("id\tdim\tparams\tgeneric_betti\tpoints\n");
    for d in defs {
        let params = if d.params.is_empty() { "-".to_string() } else { d.params.join(",") };
        let betti = d.expected_betti_generic.as_deref().map_or("-".to_string(), format_vector);
        let points: Vec<&str> = d.special_points.iter().map(|p| p.name.as_str()).collect();
        let points = if points.is_empty() { "-".to_string() } else { points.join(" ") };
        let _ = writeln!(r.text, "{}\t{}\t{params}\t{betti}\t{points}", d.id, d.dim);
    }
    Ok(r)
}

fn run(cli: Cli) -> Result<Report, Failure> {
    match cli.command {
        Command::Jacobi { source, at } => cmd_jacobi(&source, at.as_deref()),
        Command::Cohomology { source, at, seed, symbolic } => cmd_cohomology(&source, at.as_deref(), seed, symbolic),
        Command::Tables { table, seed, out } => cmd_tables(&table, seed, out.as_deref()),
        Command::NilpotentTable { seed, out } => cmd_tables("nil", seed, out.as_deref()),
        Command::Versal { source, order, at } => cmd_versal(&source, order, at.as_deref()),
        Command::Invariants { source, at } => cmd_invariants(&source, at.as_deref()),
        Command::IsoVerify { first, second, witness } => cmd_iso_verify(&first, &second, &witness),
        Command::IsoSearch { first, second, tries, seed, out } => {
            cmd_iso_search(&first, &second, tries, seed, out.as_deref())
        }
        Command::Symmetry { family, map, point } => cmd_symmetry(&family, &map, &point),
        Command::Catalog { action: CatalogAction::List { table } } => cmd_catalog_list(table.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(report) => {
            print!("{}", report.text);
            ExitCode::from(report.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::parse_assignment;

    #[test]
    fn assignment_syntax() {
        let p = parse_assignment("p=2,q=-1/3").unwrap();
        assert_eq!(p.len(), 2);
        assert!(parse_assignment("p").is_err());
    }

    #[test]
    fn failing_triple_of_a_broken_structure() {
        let d = Codifferential::from_psi(3, &[(1, 2, 3, Scalar::one()), (1, 3, 1, Scalar::one())]).unwrap();
        let bad = failing_triples(&d);
        assert_eq!(bad.len(), 1);
        assert_eq!((bad[0].0, bad[0].1, bad[0].2), (0, 1, 2));
    }
}
