//! The catalog of 3-, 4- and 5-dimensional algebras and the `.lie` format.
//!
//! ```text
//! # comment
//! dim 5                      first non-comment line
//! id 5.d5
//! params p q r
//! projective
//! psi 2 4 -> 1 : 1           one per term, i < j, 1-based
//! avoid p*r - q^2            excluded from generic sampling
//! betti 0 1 2 1 0 0          expected generic Betti vector
//! point (1:0:0) p=1 q=0 r=0 : 1 5 9 7 2 0
//! point (p:q:q) r=q          a subfamily: unassigned parameters stay free
//! symmetry S3 generated by sigma, tau
//! extension 3 2              M and W dimensions of the extension layout
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::OnceLock;

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cochain::{BasisTerm, Cochain, CochainError, Codifferential};
use crate::scalar::{parse_scalar, sample_point, Point, Polynomial, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("line {line}, column {col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("line {line}: duplicate term {term}")]
    DuplicateTerm { line: usize, term: String },
    #[error("line {line}: index {index} out of range for dimension {dim}")]
    IndexOutOfRange { line: usize, index: usize, dim: usize },
    #[error("unknown catalog id `{0}`")]
    UnknownId(String),
    #[error("point `{0}` does not exist")]
    UnknownPoint(String),
    #[error("parameter assignment misses `{0}`")]
    MissingParameter(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A named parameter assignment with an optional expected Betti vector.
///
/// Values may be expressions in the other parameters; parameters that are
/// not assigned stay free, so a point can describe a whole subfamily.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecialPoint {
    pub name: String,
    pub assignment: BTreeMap<String, Scalar>,
    pub expected_betti: Option<Vec<usize>>,
}

impl SpecialPoint {
    /// The point as rational values when every parameter is fixed.
    pub fn as_point(&self, params: &[String]) -> Option<Point> {
        params.iter().map(|p| Some((p.clone(), self.assignment.get(p)?.as_rational()?))).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraDef {
    pub id: String,
    pub dim: usize,
    pub params: Vec<String>,
    pub structure: Codifferential<Scalar>,
    pub avoid: Vec<Polynomial>,
    pub special_points: Vec<SpecialPoint>,
    pub symmetry: Option<String>,
    pub expected_betti_generic: Option<Vec<usize>>,
    /// Parameters are projective coordinates (stored as affine values).
    pub projective: bool,
    /// `(m, w)` when the structure is laid out as an extension with `M`
    /// on the first `m` indices.
    pub extension: Option<(usize, usize)>,
}

impl AlgebraDef {
    /// The bare id without the table prefix (`d5` for `5.d5`).
    pub fn short_id(&self) -> &str {
        self.id.rsplit_once('.').map_or(&self.id, |(_, s)| s)
    }

    pub fn point(&self, name: &str) -> Result<&SpecialPoint, CatalogError> {
        self.special_points.iter().find(|p| p.name == name).ok_or_else(|| CatalogError::UnknownPoint(name.to_string()))
    }

    /// The structure at a full parameter assignment.
    pub fn at(&self, point: &Point) -> Result<Codifferential<BigRational>, CatalogError> {
        for p in &self.params {
            if !point.contains_key(p) {
                return Err(CatalogError::MissingParameter(p.clone()));
            }
        }
        Ok(self.structure.eval_at(point)?)
    }

    /// The subfamily obtained by substituting a special point's
    /// assignment. Avoid-polynomials that vanish identically on it are
    /// dropped; the others are kept, restricted to the subfamily.
    pub fn restrict(&self, sp: &SpecialPoint) -> Result<AlgebraDef, CatalogError> {
        let structure = self.structure.substitute(&sp.assignment)?;
        let params: Vec<String> = self.params.iter().filter(|p| !sp.assignment.contains_key(*p)).cloned().collect();
        let mut avoid = Vec::new();
        for a in &self.avoid {
            let r = a.substitute(|n| sp.assignment.get(n).cloned());
            if !r.is_zero() {
                avoid.push(r.numer().clone().normalize_sign());
            }
        }
        Ok(AlgebraDef {
            id: format!("{}{}", self.id, sp.name),
            dim: self.dim,
            params,
            structure,
            avoid,
            special_points: Vec::new(),
            symmetry: None,
            expected_betti_generic: sp.expected_betti.clone(),
            projective: self.projective,
            extension: self.extension,
        })
    }
}

struct Line<'a> {
    number: usize,
    text: &'a str,
    /// Tokens with their 1-based starting column.
    tokens: Vec<(usize, &'a str)>,
}

impl<'a> Line<'a> {
    fn new(number: usize, text: &'a str) -> Self {
        let mut tokens = Vec::new();
        let mut start = None;
        for (i, c) in text.char_indices() {
            match (c.is_whitespace(), start) {
                (true, Some(s)) => {
                    tokens.push((s + 1, &text[s..i]));
                    start = None;
                }
                (false, None) => start = Some(i),
                _ => {}
            }
        }
        if let Some(s) = start {
            tokens.push((s + 1, &text[s..]));
        }
        Line { number, text, tokens }
    }

    fn err<T>(&self, col: usize, message: impl Into<String>) -> Result<T, CatalogError> {
        Err(CatalogError::Syntax { line: self.number, col, message: message.into() })
    }

    fn end_col(&self) -> usize {
        self.text.len() + 1
    }

    fn token(&self, i: usize, what: &str) -> Result<(usize, &'a str), CatalogError> {
        match self.tokens.get(i) {
            Some(&t) => Ok(t),
            None => self.err(self.end_col(), format!("expected {what}")),
        }
    }

    fn int(&self, i: usize, what: &str) -> Result<usize, CatalogError> {
        let (col, t) = self.token(i, what)?;
        t.parse().or_else(|_| self.err(col, format!("expected {what}, found `{t}`")))
    }

    /// The raw text from token `i` to the end of the line.
    fn rest(&self, i: usize, what: &str) -> Result<(usize, &'a str), CatalogError> {
        let (col, _) = self.token(i, what)?;
        Ok((col, self.text[col - 1..].trim_end()))
    }

    fn expr(&self, col: usize, text: &str, params: &[String]) -> Result<Scalar, CatalogError> {
        let s = parse_scalar(text).or_else(|e| self.err(col + e.offset, e.message))?;
        for p in s.params() {
            if !params.contains(&p) {
                return self.err(col, format!("undeclared parameter `{p}`"));
            }
        }
        Ok(s)
    }

    fn betti(&self, from: usize, dim: usize) -> Result<Vec<usize>, CatalogError> {
        let v = (from..self.tokens.len()).map(|i| self.int(i, "a Betti number")).collect::<Result<Vec<_>, _>>()?;
        if v.len() != dim + 1 {
            return self.err(
                self.tokens.get(from).map_or(self.end_col(), |t| t.0),
                format!("expected {} Betti numbers, found {}", dim + 1, v.len()),
            );
        }
        Ok(v)
    }
}

/// Parses a `.lie` definition.
pub fn parse(text: &str) -> Result<AlgebraDef, CatalogError> {
    let lines: Vec<Line> = text
        .lines()
        .enumerate()
        .map(|(i, l)| Line::new(i + 1, l.split('#').next().unwrap_or("")))
        .filter(|l| !l.tokens.is_empty())
        .collect();
    let Some(first) = lines.first() else {
        return Err(CatalogError::Syntax { line: 1, col: 1, message: "empty definition".into() });
    };
    if first.tokens[0].1 != "dim" {
        return first.err(first.tokens[0].0, "the first line must be `dim N`");
    }
    let dim = first.int(1, "a dimension")?;
    if dim == 0 || dim > crate::cochain::MAX_DIM {
        return first.err(first.tokens[1].0, format!("unsupported dimension {dim}"));
    }
    if first.tokens.len() > 2 {
        return first.err(first.tokens[2].0, "unexpected token");
    }

    let mut def = AlgebraDef {
        id: String::new(),
        dim,
        params: Vec::new(),
        structure: Codifferential::zero(dim),
        avoid: Vec::new(),
        special_points: Vec::new(),
        symmetry: None,
        expected_betti_generic: None,
        projective: false,
        extension: None,
    };
    let mut terms = Cochain::<Scalar>::zero(dim, 2);
    let mut seen: BTreeMap<BasisTerm, usize> = BTreeMap::new();

    for line in &lines[1..] {
        let (kcol, keyword) = line.tokens[0];
        match keyword {
            "id" => {
                let (col, t) = line.token(1, "an id")?;
                if line.tokens.len() > 2 {
                    return line.err(line.tokens[2].0, "unexpected token");
                }
                if !def.id.is_empty() {
                    return line.err(col, "duplicate `id`");
                }
                def.id = t.to_string();
            }
            "params" => {
                if !def.params.is_empty() || !terms.is_zero() {
                    return line.err(kcol, "`params` must come once, before any term");
                }
                for &(col, p) in &line.tokens[1..] {
                    let ok = p.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                        && p.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                    if !ok || def.params.iter().any(|q| q == p) {
                        return line.err(col, format!("invalid parameter name `{p}`"));
                    }
                    def.params.push(p.to_string());
                }
            }
            "projective" => def.projective = true,
            "psi" => {
                let i = line.int(1, "an input index")?;
                let j = line.int(2, "an input index")?;
                let (acol, arrow) = line.token(3, "`->`")?;
                if arrow != "->" {
                    return line.err(acol, format!("expected `->`, found `{arrow}`"));
                }
                let k = line.int(4, "an output index")?;
                let (ccol, colon) = line.token(5, "`:`")?;
                if colon != ":" {
                    return line.err(ccol, format!("expected `:`, found `{colon}`"));
                }
                let (ecol, etext) = line.rest(6, "a coefficient")?;
                for idx in [i, j, k] {
                    if idx == 0 || idx > dim {
                        return Err(CatalogError::IndexOutOfRange { line: line.number, index: idx, dim });
                    }
                }
                if i >= j {
                    return line.err(line.tokens[2].0, "input indices must be strictly increasing");
                }
                let coeff = line.expr(ecol, etext, &def.params)?;
                let term = BasisTerm::new(&[i - 1, j - 1], k - 1).expect("validated indices");
                if seen.insert(term, line.number).is_some() {
                    return Err(CatalogError::DuplicateTerm { line: line.number, term: term.to_string() });
                }
                terms.add_term(term, coeff);
            }
            "avoid" => {
                let (col, t) = line.rest(1, "a polynomial")?;
                let s = line.expr(col, t, &def.params)?;
                if !s.denom().is_constant() {
                    return line.err(col, "avoid expressions must be polynomials");
                }
                if s.is_zero() {
                    return line.err(col, "avoid polynomial is identically zero");
                }
                def.avoid.push(s.numer().clone().normalize_sign());
            }
            "betti" => def.expected_betti_generic = Some(line.betti(1, dim)?),
            "point" => def.special_points.push(parse_point(line, &def)?),
            "symmetry" => def.symmetry = Some(line.rest(1, "a description")?.1.to_string()),
            "extension" => {
                let m = line.int(1, "the dimension of M")?;
                let w = line.int(2, "the dimension of W")?;
                if m + w != dim {
                    return line.err(line.tokens[1].0, format!("{m} + {w} does not equal {dim}"));
                }
                def.extension = Some((m, w));
            }
            "dim" => return line.err(kcol, "duplicate `dim`"),
            other => return line.err(kcol, format!("unknown keyword `{other}`")),
        }
    }
    def.structure = Codifferential::new(terms).map_err(|e: CochainError| CatalogError::Syntax {
        line: 0,
        col: 0,
        message: e.to_string(),
    })?;
    Ok(def)
}

fn parse_point(line: &Line, def: &AlgebraDef) -> Result<SpecialPoint, CatalogError> {
    let (_, name) = line.token(1, "a point name")?;
    let mut assignment = BTreeMap::new();
    let mut i = 2;
    let mut expected = None;
    while i < line.tokens.len() {
        let (col, t) = line.tokens[i];
        if t == ":" {
            expected = Some(line.betti(i + 1, def.dim)?);
            break;
        }
        let Some((p, v)) = t.split_once('=') else {
            return line.err(col, format!("expected `name=value`, found `{t}`"));
        };
        if !def.params.iter().any(|q| q == p) {
            return line.err(col, format!("undeclared parameter `{p}`"));
        }
        if assignment.contains_key(p) {
            return line.err(col, format!("`{p}` assigned twice"));
        }
        let value = line.expr(col + p.len() + 1, v, &def.params)?;
        assignment.insert(p.to_string(), value);
        i += 1;
    }
    for (p, v) in &assignment {
        if v.params().iter().any(|q| assignment.contains_key(q)) {
            return line.err(line.tokens[1].0, format!("value of `{p}` refers to an assigned parameter"));
        }
    }
    Ok(SpecialPoint { name: name.to_string(), assignment, expected_betti: expected })
}

fn join(v: &[usize]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// Deterministic canonical text of a definition.
pub fn serialize(def: &AlgebraDef) -> String {
    let mut out = String::new();
    writeln!(out, "dim {}", def.dim).unwrap();
    if !def.id.is_empty() {
        writeln!(out, "id {}", def.id).unwrap();
    }
    if !def.params.is_empty() {
        writeln!(out, "params {}", def.params.join(" ")).unwrap();
    }
    if def.projective {
        writeln!(out, "projective").unwrap();
    }
    for (t, c) in def.structure.terms() {
        let inputs = t.inputs();
        writeln!(out, "psi {} {} -> {} : {}", inputs[0] + 1, inputs[1] + 1, t.output() + 1, c).unwrap();
    }
    for a in &def.avoid {
        writeln!(out, "avoid {a}").unwrap();
    }
    if let Some(b) = &def.expected_betti_generic {
        writeln!(out, "betti {}", join(b)).unwrap();
    }
    for sp in &def.special_points {
        write!(out, "point {}", sp.name).unwrap();
        for p in &def.params {
            if let Some(v) = sp.assignment.get(p) {
                write!(out, " {p}={}", v.to_string().replace(' ', "")).unwrap();
            }
        }
        if let Some(b) = &sp.expected_betti {
            write!(out, " : {}", join(b)).unwrap();
        }
        out.push('\n');
    }
    if let Some(s) = &def.symmetry {
        writeln!(out, "symmetry {s}").unwrap();
    }
    if let Some((m, w)) = def.extension {
        writeln!(out, "extension {m} {w}").unwrap();
    }
    out
}

macro_rules! sources {
    ($($path:literal),* $(,)?) => {
        &[$(($path, include_str!(concat!("../catalog/", $path)))),*]
    };
}

const SOURCES: &[(&str, &str)] = sources![
    "3/d1.lie",
    "3/d2.lie",
    "3/d3.lie",
    "4/d1.lie",
    "4/d2.lie",
    "4/d3.lie",
    "4/d4.lie",
    "4/d5.lie",
    "4/d6.lie",
    "4/d7.lie",
    "5/d1.lie",
    "5/d2.lie",
    "5/d3.lie",
    "5/d4.lie",
    "5/d5.lie",
    "5/d6.lie",
    "5/d7.lie",
    "5/d8.lie",
    "5/d9.lie",
    "5/d10.lie",
    "5/d11.lie",
    "5/d12.lie",
    "5/d13.lie",
    "5/d14.lie",
    "5/d15.lie",
    "5/d16.lie",
    "5/d17.lie",
    "5/d18.lie",
    "5/d19.lie",
    "5/d20.lie",
    "5/d21.lie",
    "5/d22.lie",
    "5/d23.lie",
    "5/d24.lie",
    "nil/n1.lie",
    "nil/n2.lie",
    "nil/n3.lie",
    "nil/n4.lie",
    "nil/n5.lie",
    "nil/n6.lie",
    "nil/n7.lie",
    "nil/n8.lie",
];

/// Every catalog entry, in table order.
pub fn all() -> &'static [AlgebraDef] {
    static CATALOG: OnceLock<Vec<AlgebraDef>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        SOURCES.iter().map(|(path, text)| parse(text).unwrap_or_else(|e| panic!("catalog file {path}: {e}"))).collect()
    })
}

/// The source text of a catalog entry.
pub fn source(id: &str) -> Option<&'static str> {
    let idx = all().iter().position(|d| d.id == id)?;
    Some(SOURCES[idx].1)
}

/// Looks up an entry by its full id (`5.d8`, `nil.3`).
pub fn by_id(id: &str) -> Result<&'static AlgebraDef, CatalogError> {
    all().iter().find(|d| d.id == id).ok_or_else(|| CatalogError::UnknownId(id.to_string()))
}

/// Looks up `d{k}` in the table of the given dimension.
pub fn get(dim: usize, id: &str) -> Result<&'static AlgebraDef, CatalogError> {
    by_id(&format!("{dim}.{id}"))
}

/// Entries of one table: `"3"`, `"4"`, `"5"` or `"nil"`.
pub fn list(table: &str) -> Vec<&'static AlgebraDef> {
    let prefix = format!("{table}.");
    all().iter().filter(|d| d.id.starts_with(&prefix)).collect()
}

/// The 5-dimensional nilpotent table.
pub fn nilpotent_table() -> Vec<&'static AlgebraDef> {
    list("nil")
}

/// Range of the small integers used for generic catalog samples.
pub const SAMPLE_RANGE: std::ops::RangeInclusive<i64> = 2..=97;

/// A random parameter assignment with distinct values in [`SAMPLE_RANGE`]
/// at which no avoid-polynomial and no coefficient denominator vanishes.
pub fn sample_generic(def: &AlgebraDef, seed: u64) -> Result<Point, CatalogError> {
    let mut nonvanishing: Vec<&Polynomial> = def.avoid.iter().collect();
    nonvanishing.extend(def.structure.terms().map(|(_, c)| c.denom()).filter(|d| !d.is_constant()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(sample_point(&mut rng, &def.params, SAMPLE_RANGE, true, &nonvanishing, 1000)?)
}

/// A formula variant that was not adopted, kept for the record.
#[derive(Debug, Clone)]
pub struct Quarantined {
    pub id: &'static str,
    pub source: &'static str,
    /// The rejected formula in `.lie` syntax.
    pub text: &'static str,
    pub note: &'static str,
}

/// Printed formula variants that were rejected in favour of the catalog
/// entries.
pub fn quarantine() -> &'static [Quarantined] {
    &[
        Quarantined {
            id: "5.d2",
            source: "table",
            text: "dim 5\npsi 1 2 -> 1 : 1\npsi 1 3 -> 1 : -1\npsi 1 5 -> 2 : 1\npsi 2 3 -> 2 : 1\npsi 2 4 -> 1 : 1\npsi 3 4 -> 4 : 2\npsi 3 5 -> 5 : -2\npsi 4 5 -> 3 : 1\n",
            note: "repeats the [1 2 -> 1] term of d1; fails Jacobi",
        },
        Quarantined {
            id: "5.d2",
            source: "prose",
            text: "dim 5\npsi 1 3 -> 1 : -1\npsi 1 5 -> 2 : 1\npsi 2 3 -> 2 : 1\npsi 2 4 -> 1 : 1\npsi 3 4 -> 4 : 2\npsi 3 5 -> 3 : -2\npsi 4 5 -> 3 : 1\n",
            note: "[3 5 -> 3] in place of [3 5 -> 5]; fails Jacobi",
        },
        Quarantined {
            id: "5.d3",
            source: "prose",
            text: "dim 5\npsi 3 4 -> 4 : 2\npsi 3 4 -> 5 : 1\npsi 3 5 -> 5 : -2\n",
            note: "missing operator read as `+`, [3 4 -> 5] in place of [4 5 -> 3]; satisfies Jacobi but is solvable, not sl2 + C^2",
        },
        Quarantined {
            id: "5.d14",
            source: "prose",
            text: "dim 5\nparams p q\npsi 1 5 -> 1 : p\npsi 1 5 -> 2 : p+q\npsi 3 4 -> 2 : 1\npsi 3 5 -> 1 : 1\npsi 3 5 -> 3 : q\npsi 3 5 -> 4 : 1\npsi 4 5 -> 4 : p\n",
            note: "(p+q) on [1 5 -> 2] and no [2 5 -> 2] term; violates the compatibility shape",
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg_parses() {
        let d = parse("dim 3\npsi 2 3 -> 1 : 1").unwrap();
        assert_eq!(d.dim, 3);
        assert_eq!(d.structure.num_terms(), 1);
        assert_eq!(d.structure.to_string(), "[2 3 -> 1]");
    }

    #[test]
    fn syntax_errors_have_positions() {
        let e = parse("dim 3\npsi 3 2 -> 1 : 1").unwrap_err();
        assert!(matches!(e, CatalogError::Syntax { line: 2, col: 7, .. }), "{e}");
        let e = parse("dim 3\npsi 1 2 -> 1 : 1 +* p").unwrap_err();
        assert!(matches!(e, CatalogError::Syntax { line: 2, col: 19, .. }), "{e}");
        let e = parse("# header\n\ndim 3\npsi 1 2 => 3 : 1").unwrap_err();
        assert!(matches!(e, CatalogError::Syntax { line: 4, col: 9, .. }), "{e}");
        let e = parse("psi 1 2 -> 3 : 1\ndim 3").unwrap_err();
        assert!(matches!(e, CatalogError::Syntax { line: 1, col: 1, .. }), "{e}");
        let e = parse("dim 3\npsi 1 2 -> 3 : p").unwrap_err();
        assert!(matches!(e, CatalogError::Syntax { line: 2, .. }), "{e}");
        let e = parse("dim 3\nfrobnicate").unwrap_err();
        assert!(matches!(e, CatalogError::Syntax { line: 2, col: 1, .. }), "{e}");
    }

    #[test]
    fn structural_errors() {
        assert_eq!(
            parse("dim 3\npsi 1 2 -> 3 : 1\npsi 1 2 -> 3 : 2"),
            Err(CatalogError::DuplicateTerm { line: 3, term: "[1 2 -> 3]".into() })
        );
        assert_eq!(parse("dim 3\npsi 1 4 -> 3 : 1"), Err(CatalogError::IndexOutOfRange { line: 2, index: 4, dim: 3 }));
        assert!(parse("dim 3\nbetti 1 2 3").is_err());
    }

    #[test]
    fn lookups() {
        let d1 = get(3, "d1").unwrap();
        assert_eq!(d1.structure.to_string(), "[1 2 -> 3] + [1 3 -> 2] + [2 3 -> 1]");
        let d24 = get(5, "d24").unwrap();
        assert_eq!(d24.structure.to_string(), "[1 5 -> 1] + [2 5 -> 2] + [3 5 -> 3] + [4 5 -> 4]");
        assert_eq!(get(5, "nosuch"), Err(CatalogError::UnknownId("5.nosuch".into())));
        assert_eq!(list("3").len(), 3);
        assert_eq!(list("4").len(), 7);
        assert_eq!(list("5").len(), 24);
        assert_eq!(nilpotent_table().len(), 8);
    }

    #[test]
    fn roundtrip_whole_catalog() {
        for def in all() {
            let text = serialize(def);
            assert_eq!(&parse(&text).unwrap(), def, "{}", def.id);
            assert_eq!(serialize(&parse(&text).unwrap()), text);
        }
    }

    #[test]
    fn sampling_respects_avoid_list() {
        let d5 = get(5, "d5").unwrap();
        for seed in 0..20 {
            let pt = sample_generic(d5, seed).unwrap();
            let v = |n: &str| pt[n].clone();
            let (p, q, r) = (v("p"), v("q"), v("r"));
            assert!(p != q && p != r && q != r);
            assert!(&p * &r != &q * &q);
            assert_eq!(sample_generic(d5, seed).unwrap(), pt);
        }
        let pt = sample_generic(get(5, "d23").unwrap(), 1).unwrap();
        assert_eq!(pt.len(), 2);
        assert!(sample_generic(get(5, "d8").unwrap(), 1).unwrap().is_empty());
        let impossible = parse("dim 2\nparams p\npsi 1 2 -> 1 : p\navoid p-2\navoid p-3\navoid (p-4)*(p-5)\n").unwrap();
        assert!(sample_generic(&impossible, 0).is_ok());
        let mut narrow = impossible.clone();
        narrow.avoid = (2..=97).map(|v| parse_scalar(&format!("p-{v}")).unwrap().numer().clone()).collect();
        assert_eq!(sample_generic(&narrow, 0), Err(CatalogError::Scalar(ScalarError::NoValidSample)));
    }

    #[test]
    fn subfamily_restriction() {
        let d5 = get(5, "d5").unwrap();
        let sub = d5.restrict(d5.point("(p:q:q)").unwrap()).unwrap();
        assert_eq!(sub.params, vec!["p".to_string(), "q".to_string()]);
        // q - r vanishes identically on the subfamily and is dropped.
        assert_eq!(sub.avoid.len(), d5.avoid.len() - 1);
        assert!(sub.structure.params().iter().all(|p| p != "r"));
    }
}
