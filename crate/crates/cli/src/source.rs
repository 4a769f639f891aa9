//! Resolving structure arguments: `.lie` files, catalog ids, `id@(a:b:c)`.

use std::collections::BTreeMap;
use std::path::Path;

use liecat_core::catalog::{self, AlgebraDef, CatalogError};
use liecat_core::cochain::Codifferential;
use liecat_core::scalar::{parse_rational, Point, Polynomial, Scalar};
use num_rational::BigRational;

use crate::{usage, Failure};

pub enum Structure {
    Exact(Codifferential<BigRational>),
    /// Parameters left free, with the loci generic sampling must avoid.
    Symbolic(Codifferential<Scalar>, Vec<Polynomial>),
}

impl Structure {
    pub fn to_scalar(&self) -> Codifferential<Scalar> {
        match self {
            Structure::Exact(d) => d.to_scalar(),
            Structure::Symbolic(d, _) => d.clone(),
        }
    }
}

pub struct Source {
    def: AlgebraDef,
    point: Point,
}

/// `p=2,q=-1/3`.
pub fn parse_assignment(text: &str) -> Result<Point, Failure> {
    let mut point = Point::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = part.split_once('=').ok_or_else(|| usage(format!("`{part}`: expected name=value")))?;
        let value = parse_rational(value.trim()).map_err(|e| usage(format!("`{part}`: {e}")))?;
        point.insert(name.trim().to_string(), value);
    }
    Ok(point)
}

fn lookup(id: &str) -> Result<AlgebraDef, Failure> {
    if let Ok(def) = catalog::by_id(id) {
        return Ok(def.clone());
    }
    let matches: Vec<&AlgebraDef> = catalog::all().iter().filter(|d| d.short_id() == id).collect();
    match matches.as_slice() {
        [one] => Ok((*one).clone()),
        [] => Err(usage(format!("`{id}` is neither a file nor a catalog id"))),
        many => {
            let ids: Vec<&str> = many.iter().map(|d| d.id.as_str()).collect();
            Err(usage(format!("`{id}` is ambiguous: {}", ids.join(", "))))
        }
    }
}

impl Source {
    pub fn load(arg: &str, at: Option<&str>) -> Result<Self, Failure> {
        let (base, values) = match arg.split_once('@') {
            Some((b, v)) if !Path::new(arg).is_file() => (b, Some(v)),
            _ => (arg, None),
        };
        let def = if Path::new(base).is_file() {
            let text = std::fs::read_to_string(base).map_err(|e| usage(format!("{base}: {e}")))?;
            catalog::parse(&text).map_err(|e| usage(format!("{base}: {e}")))?
        } else {
            lookup(base)?
        };
        let mut point = Point::new();
        if let Some(v) = values {
            let parts: Vec<&str> = v
                .trim_matches(|c| c == '(' || c == ')')
                .split([',', ':'])
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .collect();
            if parts.len() != def.params.len() {
                return Err(usage(format!("`{arg}`: {} values for {} parameters", parts.len(), def.params.len())));
            }
            for (name, text) in def.params.iter().zip(parts) {
                let value = parse_rational(text).map_err(|e| usage(format!("`{arg}`: {e}")))?;
                point.insert(name.clone(), value);
            }
        }
        if let Some(a) = at {
            for (name, value) in parse_assignment(a)? {
                if !def.params.contains(&name) {
                    return Err(usage(format!("unknown parameter `{name}`")));
                }
                point.insert(name, value);
            }
        }
        Ok(Source { def, point })
    }

    pub fn structure(&self) -> Result<Structure, Failure> {
        let invalid = |e: CatalogError| usage(format!("{}: {e}", self.def.id));
        if self.def.params.iter().all(|p| self.point.contains_key(p)) {
            return Ok(Structure::Exact(self.def.at(&self.point).map_err(invalid)?));
        }
        if self.point.is_empty() {
            return Ok(Structure::Symbolic(self.def.structure.clone(), self.def.avoid.clone()));
        }
        let assign: BTreeMap<String, Scalar> =
            self.point.iter().map(|(k, v)| (k.clone(), Scalar::from_rational(v))).collect();
        let d = self.def.structure.substitute(&assign).map_err(|e| invalid(e.into()))?;
        Ok(Structure::Symbolic(d, Vec::new()))
    }
}
