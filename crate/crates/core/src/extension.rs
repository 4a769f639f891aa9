//! Extensions `0 → M → L → W → 0` in the form `d = δ + μ + λ + ψ`, the
//! matrix construction for extensions of a trivial algebra by a trivial
//! module, and the symmetry maps of the `d5` and `d6` families.
//!
//! `M` occupies indices `1..=m` and `W` the indices `m+1..=m+w`. The four
//! pieces are told apart by where their inputs and outputs live:
//!
//! | piece | inputs | output |
//! |-------|--------|--------|
//! | `μ`   | M, M   | M      |
//! | `δ`   | W, W   | W      |
//! | `λ`   | M, W   | M      |
//! | `ψ`   | W, W   | M      |

use std::fmt;

use thiserror::Error;

use crate::cochain::{nr_bracket, BasisTerm, Cochain, CochainError, Codifferential};
use crate::scalar::{Field, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// `[μ,μ] = 0`
    MuJacobi,
    /// `[δ,δ] = 0`
    DeltaJacobi,
    /// `[μ,λ] = 0`
    Compatibility,
    /// `½[δ+λ,δ+λ] + [μ,ψ] = 0`
    MaurerCartan,
    /// `[δ+λ,ψ] = 0`
    Cocycle,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::MuJacobi => "mu is not a Lie structure",
            Condition::DeltaJacobi => "delta is not a Lie structure",
            Condition::Compatibility => "compatibility [mu,lambda] = 0",
            Condition::MaurerCartan => "Maurer-Cartan 1/2[delta+lambda,delta+lambda] + [mu,psi] = 0",
            Condition::Cocycle => "cocycle [delta+lambda,psi] = 0",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionError {
    #[error("term {term} does not belong in {piece}")]
    RangeViolation { piece: &'static str, term: String },
    #[error("condition failed: {0}")]
    ConditionFailed(Condition),
    #[error("{m} + {w} does not match dimension {n}")]
    DimensionMismatch { m: usize, w: usize, n: usize },
    #[error("map undefined at this point: {0} vanishes")]
    UndefinedAtPoint(String),
    #[error("no symmetry `{map}` for family `{family}`")]
    UnknownMap { family: String, map: String },
    #[error("expected a point with {expected} coordinates, found {found}")]
    WrongArity { expected: usize, found: usize },
    #[error(transparent)]
    Cochain(#[from] CochainError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Piece {
    Mu,
    Delta,
    Lambda,
    Psi,
}

impl Piece {
    fn name(self) -> &'static str {
        match self {
            Piece::Mu => "mu",
            Piece::Delta => "delta",
            Piece::Lambda => "lambda",
            Piece::Psi => "psi",
        }
    }
}

fn classify(t: &BasisTerm, m: usize) -> Option<Piece> {
    let ins = t.inputs();
    let in_m = ins.iter().filter(|&&i| i < m).count();
    let out_m = t.output() < m;
    match (in_m, out_m) {
        (2, true) => Some(Piece::Mu),
        (0, false) => Some(Piece::Delta),
        (1, true) => Some(Piece::Lambda),
        (0, true) => Some(Piece::Psi),
        _ => None,
    }
}

/// The data of an extension, every piece stored as a cochain on the full
/// dimension `m_dim + w_dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionData<K: Field> {
    pub m_dim: usize,
    pub w_dim: usize,
    pub mu: Cochain<K>,
    pub delta: Cochain<K>,
    pub lambda: Cochain<K>,
    pub psi: Cochain<K>,
}

impl<K: Field> ExtensionData<K> {
    /// Builds the data after checking that every term sits in the right
    /// index ranges.
    pub fn new(
        m_dim: usize,
        w_dim: usize,
        mu: Cochain<K>,
        delta: Cochain<K>,
        lambda: Cochain<K>,
        psi: Cochain<K>,
    ) -> Result<Self, ExtensionError> {
        let n = m_dim + w_dim;
        for (piece, c) in [(Piece::Mu, &mu), (Piece::Delta, &delta), (Piece::Lambda, &lambda), (Piece::Psi, &psi)] {
            if c.dim() != n {
                return Err(ExtensionError::DimensionMismatch { m: m_dim, w: w_dim, n: c.dim() });
            }
            if c.degree() != 2 {
                return Err(CochainError::DegreeMismatch { expected: 2, found: c.degree() }.into());
            }
            for (t, _) in c.terms() {
                if classify(t, m_dim) != Some(piece) {
                    return Err(ExtensionError::RangeViolation { piece: piece.name(), term: t.to_string() });
                }
            }
        }
        Ok(ExtensionData { m_dim, w_dim, mu, delta, lambda, psi })
    }

    /// All-zero data.
    pub fn zero(m_dim: usize, w_dim: usize) -> Self {
        let z = Cochain::zero(m_dim + w_dim, 2);
        ExtensionData { m_dim, w_dim, mu: z.clone(), delta: z.clone(), lambda: z.clone(), psi: z }
    }

    /// Splits a structure on `m_dim + w_dim` indices into its four pieces.
    /// Fails when a term has both inputs in `M` and output in `W`, or mixed
    /// inputs with output in `W`, i.e. when `M` is not an ideal.
    pub fn split(d: &Codifferential<K>, m_dim: usize) -> Result<Self, ExtensionError> {
        let n = d.dim();
        if m_dim > n {
            return Err(ExtensionError::DimensionMismatch { m: m_dim, w: 0, n });
        }
        let mut data = ExtensionData::zero(m_dim, n - m_dim);
        for (t, c) in d.terms() {
            let target = match classify(t, m_dim) {
                Some(Piece::Mu) => &mut data.mu,
                Some(Piece::Delta) => &mut data.delta,
                Some(Piece::Lambda) => &mut data.lambda,
                Some(Piece::Psi) => &mut data.psi,
                None => return Err(ExtensionError::RangeViolation { piece: "M is not an ideal", term: t.to_string() }),
            };
            target.add_term(*t, c.clone());
        }
        Ok(data)
    }

    pub fn dim(&self) -> usize {
        self.m_dim + self.w_dim
    }

    /// The first condition that fails, if any.
    pub fn failing_condition(&self) -> Result<Option<Condition>, ExtensionError> {
        if !nr_bracket(&self.mu, &self.mu)?.is_zero() {
            return Ok(Some(Condition::MuJacobi));
        }
        if !nr_bracket(&self.delta, &self.delta)?.is_zero() {
            return Ok(Some(Condition::DeltaJacobi));
        }
        if !check_compatibility(&self.mu, &self.lambda)? {
            return Ok(Some(Condition::Compatibility));
        }
        if !check_mc(&self.delta, &self.lambda, &self.mu, &self.psi)? {
            return Ok(Some(Condition::MaurerCartan));
        }
        if !check_cocycle(&self.delta, &self.lambda, &self.psi)? {
            return Ok(Some(Condition::Cocycle));
        }
        Ok(None)
    }

    /// `δ + μ + λ + ψ` without any checks.
    pub fn sum(&self) -> Result<Codifferential<K>, ExtensionError> {
        let s = self.delta.add(&self.mu)?.add(&self.lambda)?.add(&self.psi)?;
        Ok(Codifferential::new(s)?)
    }
}

/// `[μ,λ] = 0`.
pub fn check_compatibility<K: Field>(mu: &Cochain<K>, lambda: &Cochain<K>) -> Result<bool, ExtensionError> {
    Ok(nr_bracket(mu, lambda)?.is_zero())
}

/// `½[δ+λ,δ+λ] + [μ,ψ] = 0`.
pub fn check_mc<K: Field>(
    delta: &Cochain<K>,
    lambda: &Cochain<K>,
    mu: &Cochain<K>,
    psi: &Cochain<K>,
) -> Result<bool, ExtensionError> {
    let dl = delta.add(lambda)?;
    let half = K::from_i64(2).inv().expect("characteristic zero");
    let lhs = nr_bracket(&dl, &dl)?.scale(&half).add(&nr_bracket(mu, psi)?)?;
    Ok(lhs.is_zero())
}

/// `[δ+λ,ψ] = 0`.
pub fn check_cocycle<K: Field>(
    delta: &Cochain<K>,
    lambda: &Cochain<K>,
    psi: &Cochain<K>,
) -> Result<bool, ExtensionError> {
    Ok(nr_bracket(&delta.add(lambda)?, psi)?.is_zero())
}

/// `δ + μ + λ + ψ`, after verifying the conditions.
pub fn assemble_extension<K: Field>(data: &ExtensionData<K>) -> Result<Codifferential<K>, ExtensionError> {
    if let Some(c) = data.failing_condition()? {
        return Err(ExtensionError::ConditionFailed(c));
    }
    data.sum()
}

/// Moves a structure on `src` indices to the index block starting at
/// `offset` of a `dim`-dimensional space.
pub fn embed<K: Field>(c: &Cochain<K>, dim: usize, offset: usize) -> Result<Cochain<K>, ExtensionError> {
    if c.dim() + offset > dim {
        return Err(ExtensionError::DimensionMismatch { m: offset, w: c.dim(), n: dim });
    }
    let mut out = Cochain::zero(dim, c.degree());
    for (t, k) in c.terms() {
        let ins: Vec<usize> = t.inputs().iter().map(|i| i + offset).collect();
        out.add_term(BasisTerm::new(&ins, t.output() + offset)?, k.clone());
    }
    Ok(out)
}

/// The extension of the one-dimensional algebra by the trivial module
/// `K^n` on which `e_{n+1}` acts by `A`: `d = Σ a_ij ψ_{j,n+1}→i`.
pub fn algebra_from_matrix<K: Field>(a: &Matrix<K>) -> Result<Codifferential<K>, ExtensionError> {
    let n = a.rows();
    if a.cols() != n {
        return Err(CochainError::DimensionMismatch(a.rows(), a.cols()).into());
    }
    let mut c = Cochain::zero(n + 1, 2);
    for i in 0..n {
        for j in 0..n {
            let v = a.get(i, j);
            if !v.is_zero() {
                c.add_term(BasisTerm::new(&[j, n], i)?, v.clone());
            }
        }
    }
    Ok(Codifferential::new(c)?)
}

/// The matrices by which the `W` basis vectors act on `M` in `λ`:
/// entry `(i, j)` of the `k`-th matrix is the coefficient of
/// `ψ_{j, m+k}→i`.
pub fn module_matrices<K: Field>(data: &ExtensionData<K>) -> Vec<Matrix<K>> {
    let m = data.m_dim;
    (0..data.w_dim)
        .map(|k| {
            Matrix::from_fn(m, m, |i, j| {
                BasisTerm::new(&[j, m + k], i).map_or_else(|_| K::zero(), |t| data.lambda.coeff(&t))
            })
        })
        .collect()
}

/// `u` and `v` are projectively equal: all 2×2 minors vanish.
pub fn projective_eq<K: Field>(u: &[K], v: &[K]) -> bool {
    if u.len() != v.len() {
        return false;
    }
    (0..u.len()).all(|i| (i + 1..u.len()).all(|j| u[i].mul(&v[j]).sub(&u[j].mul(&v[i])).is_zero()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryMap {
    Sigma,
    Tau,
}

impl std::str::FromStr for SymmetryMap {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sigma" => Ok(SymmetryMap::Sigma),
            "tau" => Ok(SymmetryMap::Tau),
            _ => Err(format!("unknown map `{s}` (expected sigma or tau)")),
        }
    }
}

/// Families with a symmetry group, by their 5-dimensional catalog id.
pub const SYMMETRIC_FAMILIES: [&str; 2] = ["5.d5", "5.d6"];

fn checked_div<K: Field>(num: K, den: &K, name: &str) -> Result<K, ExtensionError> {
    num.div(den).ok_or_else(|| ExtensionError::UndefinedAtPoint(name.to_string()))
}

fn first_vanishing<K: Field>(forms: &[(&'static str, K)]) -> Option<&'static str> {
    forms.iter().find(|(_, v)| v.is_zero()).map(|(name, _)| *name)
}

/// Both `d5` maps need `r`, `p - q`, `r - p`, `r - q` and `r*p - q^2`
/// nonzero.
fn d5_defined<K: Field>(x: &[K]) -> Result<(), ExtensionError> {
    let (p, q, r) = (&x[0], &x[1], &x[2]);
    let forms = [
        ("r", r.clone()),
        ("p - q", p.sub(q)),
        ("r - p", r.sub(p)),
        ("r - q", r.sub(q)),
        ("r*p - q^2", r.mul(p).sub(&q.mul(q))),
    ];
    match first_vanishing(&forms) {
        Some(name) => Err(ExtensionError::UndefinedAtPoint(name.to_string())),
        None => Ok(()),
    }
}

/// The first form of the family's excluded divisor vanishing at `point`,
/// if any. Off this divisor the maps act by isomorphisms: for `d5` these
/// are the seven excluded lines, for `d6` the orbit `p q (p - q) = 0` of
/// the special line `p = 0`.
pub fn excluded_form<K: Field>(family: &str, point: &[K]) -> Result<Option<&'static str>, ExtensionError> {
    let family_id = family.strip_prefix("5.").unwrap_or(family);
    let forms: Vec<(&'static str, K)> = match (family_id, point) {
        ("d5", [p, q, r]) => vec![
            ("p", p.clone()),
            ("q", q.clone()),
            ("r", r.clone()),
            ("p - q", p.sub(q)),
            ("r - p", r.sub(p)),
            ("r - q", r.sub(q)),
            ("r*p - q^2", r.mul(p).sub(&q.mul(q))),
        ],
        ("d6", [p, q]) => vec![("p", p.clone()), ("q", q.clone()), ("p - q", p.sub(q))],
        ("d5" | "d6", _) => {
            let expected = if family_id == "d5" { 3 } else { 2 };
            return Err(ExtensionError::WrongArity { expected, found: point.len() });
        }
        _ => return Err(ExtensionError::UnknownMap { family: family.to_string(), map: "any".to_string() }),
    };
    Ok(first_vanishing(&forms))
}

/// Applies `σ` or `τ` of the `d5` or `d6` family to a projective point.
pub fn symmetry_map<K: Field>(family: &str, map: SymmetryMap, point: &[K]) -> Result<Vec<K>, ExtensionError> {
    let family_id = family.strip_prefix("5.").unwrap_or(family);
    let arity = match family_id {
        "d5" => 3,
        "d6" => 2,
        _ => {
            return Err(ExtensionError::UnknownMap {
                family: family.to_string(),
                map: format!("{map:?}").to_lowercase(),
            })
        }
    };
    if point.len() != arity {
        return Err(ExtensionError::WrongArity { expected: arity, found: point.len() });
    }
    let image = match (family_id, map) {
        ("d6", SymmetryMap::Sigma) => vec![point[0].sub(&point[1]), point[0].clone()],
        ("d6", SymmetryMap::Tau) => vec![point[0].clone(), point[0].sub(&point[1])],
        ("d5", SymmetryMap::Sigma) => {
            d5_defined(point)?;
            let (p, q, r) = (&point[0], &point[1], &point[2]);
            let p_q = p.sub(q);
            let r_p = r.sub(p);
            let r_q = r.sub(q);
            vec![
                checked_div(r.mul(&p_q).mul(&p_q), &r_q.mul(&r_p), "(r - q)*(r - p)")?,
                checked_div(p.mul(&p_q), &r_p, "r - p")?,
                checked_div(r_q.mul(p), &r_p, "r - p")?,
            ]
        }
        _ => {
            d5_defined(point)?;
            let (p, q, r) = (&point[0], &point[1], &point[2]);
            let q2 = q.mul(q);
            let disc = r.mul(p).sub(&q2);
            let p_q = p.sub(q);
            let r_q = r.sub(q);
            vec![
                checked_div(q2.mul(&p_q), &disc, "r*p - q^2")?,
                checked_div(q2.mul(q).mul(&r_q).neg(), &r.mul(&disc), "r*(r*p - q^2)")?,
                checked_div(p.mul(&r_q).mul(&r_q).mul(&q2), &r.mul(&p_q).mul(&disc), "r*(p - q)*(r*p - q^2)")?,
            ]
        }
    };
    if image.iter().all(K::is_zero) {
        return Err(ExtensionError::UndefinedAtPoint("every image coordinate".into()));
    }
    Ok(image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type Q = BigRational;

    fn q(v: i64) -> Q {
        Q::from_integer(v.into())
    }

    fn qm(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect())
    }

    fn cd(dim: usize, terms: &[(usize, usize, usize, i64)]) -> Codifferential<Q> {
        let t: Vec<_> = terms.iter().map(|&(i, j, k, c)| (i, j, k, q(c))).collect();
        Codifferential::from_psi(dim, &t).unwrap()
    }

    fn pt(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn matrix_examples() {
        assert_eq!(algebra_from_matrix(&Matrix::<Q>::identity(2)).unwrap(), cd(3, &[(1, 3, 1, 1), (2, 3, 2, 1)]));
        assert_eq!(algebra_from_matrix(&qm(&[&[0, 1], &[0, 0]])).unwrap(), cd(3, &[(2, 3, 1, 1)]));
        assert!(algebra_from_matrix(&Matrix::<Q>::zeros(3, 3)).unwrap().is_zero());
    }

    #[test]
    fn direct_sum_d1() {
        let mut data = ExtensionData::<Q>::zero(2, 3);
        data.mu = cd(5, &[(1, 2, 1, 1)]).into_cochain();
        let sl2 = cd(3, &[(1, 2, 2, 2), (1, 3, 3, -2), (2, 3, 1, 1)]);
        data.delta = embed(&sl2, 5, 2).unwrap();
        let d = assemble_extension(&data).unwrap();
        let d1 = catalog::get(5, "d1").unwrap().structure.clone();
        assert_eq!(d.to_scalar(), d1);
        assert!(assemble_extension(&ExtensionData::<Q>::zero(2, 2)).unwrap().is_zero());
    }

    #[test]
    fn d19_from_module_structure() {
        let mut data = ExtensionData::<Q>::zero(4, 1);
        data.mu = cd(5, &[(3, 4, 2, 1)]).into_cochain();
        data.lambda = cd(5, &[(1, 5, 2, 1)]).into_cochain();
        assert_eq!(assemble_extension(&data).unwrap(), cd(5, &[(1, 5, 2, 1), (3, 4, 2, 1)]));
    }

    #[test]
    fn range_discipline() {
        let bad = cd(5, &[(1, 2, 4, 1)]).into_cochain();
        let z = Cochain::zero(5, 2);
        assert!(matches!(
            ExtensionData::new(2, 3, bad.clone(), z.clone(), z.clone(), z.clone()),
            Err(ExtensionError::RangeViolation { piece: "mu", .. })
        ));
        assert!(matches!(
            ExtensionData::new(2, 3, z.clone(), z.clone(), z.clone(), bad),
            Err(ExtensionError::RangeViolation { piece: "psi", .. })
        ));
        assert!(ExtensionData::<Q>::split(&cd(3, &[(1, 2, 3, 1)]), 2).is_err());
    }

    #[test]
    fn compatibility_examples() {
        // μ = ψ34→2 with the admissible shape for λ = Σ a_ij ψ_{j5}→i.
        let mu = cd(5, &[(3, 4, 2, 1)]).into_cochain();
        let shape = qm(&[&[3, 0, 5, 7], &[2, 9, 0, 0], &[0, 0, 4, 6], &[0, 0, 8, 5]]);
        let lam = algebra_from_matrix(&shape).unwrap().into_cochain();
        assert!(check_compatibility(&mu, &lam).unwrap());
        assert!(check_compatibility(&Cochain::zero(5, 2), &lam).unwrap());
        let mu2 = cd(5, &[(2, 3, 1, 1), (3, 4, 2, 1)]).into_cochain();
        let full = qm(&[&[1, 2, 3, 4], &[5, 6, 7, 8], &[9, 10, 11, 12], &[13, 14, 15, 17]]);
        let lam2 = algebra_from_matrix(&full).unwrap().into_cochain();
        assert!(!check_compatibility(&mu2, &lam2).unwrap());
    }

    fn lambda_pair(a: &Matrix<Q>, b: &Matrix<Q>) -> Cochain<Q> {
        let mut c = Cochain::zero(5, 2);
        for i in 0..3 {
            for j in 0..3 {
                c.add_term(BasisTerm::new(&[j, 3], i).unwrap(), a.get(i, j).clone());
                c.add_term(BasisTerm::new(&[j, 4], i).unwrap(), b.get(i, j).clone());
            }
        }
        c
    }

    #[test]
    fn maurer_cartan_commuting_matrices() {
        let z = Cochain::zero(5, 2);
        let a = qm(&[&[1, 2, 0], &[0, 1, 0], &[0, 0, 3]]);
        let b = a.mul(&a);
        assert!(check_mc(&z, &lambda_pair(&a, &b), &z, &z).unwrap());
        let c = qm(&[&[0, 0, 0], &[1, 0, 0], &[0, 0, 0]]);
        assert!(!check_mc(&z, &lambda_pair(&a, &c), &z, &z).unwrap());
        // A single matrix always satisfies it.
        let z4 = Cochain::zero(4, 2);
        let lam = algebra_from_matrix(&qm(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])).unwrap().into_cochain();
        assert!(check_mc(&z4, &lam, &z4, &z4).unwrap());
    }

    #[test]
    fn cocycle_examples() {
        let z = Cochain::zero(5, 2);
        assert!(check_cocycle(&z, &z, &z).unwrap());
        let d5 = catalog::get(5, "d5").unwrap();
        let at = catalog::sample_generic(d5, 3).unwrap();
        let data = ExtensionData::split(&d5.at(&at).unwrap(), 3).unwrap();
        let psi = cd(5, &[(4, 5, 1, 2), (4, 5, 2, -3), (4, 5, 3, 5)]).into_cochain();
        assert!(check_cocycle(&data.delta, &data.lambda, &psi).unwrap());
        // μ = ψ23→1 with its normal form for λ at (p:q) = (2:3). With W
        // two-dimensional, [δ+λ,ψ] has no room for terms, so the constraint
        // c2 = c3 = 0 comes from the [μ,ψ] part of the Maurer-Cartan equation.
        let mu = cd(5, &[(2, 3, 1, 1)]).into_cochain();
        let lam =
            cd(5, &[(1, 4, 1, 2), (2, 4, 2, 1), (3, 4, 3, 1), (1, 5, 1, 5), (2, 5, 2, 2), (2, 5, 3, 1), (3, 5, 3, 3)])
                .into_cochain();
        assert!(check_compatibility(&mu, &lam).unwrap());
        for (c, ok) in [((4, 5, 1, 1), true), ((4, 5, 2, 1), false), ((4, 5, 3, 1), false)] {
            let psi = cd(5, &[c]).into_cochain();
            assert!(check_cocycle(&z, &lam, &psi).unwrap());
            assert_eq!(check_mc(&z, &lam, &mu, &psi).unwrap(), ok, "{c:?}");
            let data = ExtensionData::new(3, 2, mu.clone(), z.clone(), lam.clone(), psi).unwrap();
            assert_eq!(data.sum().unwrap().jacobi_check(), ok);
            if !ok {
                assert_eq!(assemble_extension(&data), Err(ExtensionError::ConditionFailed(Condition::MaurerCartan)));
            }
        }
    }

    #[test]
    fn catalog_extensions_roundtrip() {
        for def in catalog::all() {
            let Some((m, _)) = def.extension else { continue };
            let point = catalog::sample_generic(def, 11).unwrap();
            let d = def.at(&point).unwrap();
            let data = ExtensionData::split(&d, m).unwrap();
            assert_eq!(data.failing_condition().unwrap(), None, "{}", def.id);
            assert_eq!(assemble_extension(&data).unwrap(), d, "{}", def.id);
        }
    }

    #[test]
    fn d6_maps() {
        assert_eq!(symmetry_map("d6", SymmetryMap::Sigma, &pt(&[1, 2])).unwrap(), pt(&[-1, 1]));
        assert_eq!(symmetry_map("5.d6", SymmetryMap::Tau, &pt(&[1, 2])).unwrap(), pt(&[1, -1]));
        assert!(symmetry_map("d6", SymmetryMap::Tau, &pt(&[0, 0])).is_err());
        assert!(matches!(symmetry_map("d7", SymmetryMap::Tau, &pt(&[0, 0])), Err(ExtensionError::UnknownMap { .. })));
    }

    #[test]
    fn d5_maps() {
        let x = pt(&[2, 3, 7]);
        let s = |v: &[Q]| symmetry_map("d5", SymmetryMap::Sigma, v).unwrap();
        assert!(projective_eq(&s(&s(&s(&x))), &x));
        assert!(!projective_eq(&s(&x), &x));
        assert_eq!(
            symmetry_map("d5", SymmetryMap::Tau, &pt(&[1, 2, 4])),
            Err(ExtensionError::UndefinedAtPoint("r*p - q^2".into()))
        );
        assert_eq!(
            symmetry_map("d5", SymmetryMap::Sigma, &pt(&[1, 3, 1])),
            Err(ExtensionError::UndefinedAtPoint("r - p".into()))
        );
        assert_eq!(
            symmetry_map("d5", SymmetryMap::Tau, &pt(&[1, 1, 0])),
            Err(ExtensionError::UndefinedAtPoint("r".into()))
        );
        assert_eq!(excluded_form("d5", &pt(&[0, 2, 3])).unwrap(), Some("p"));
        assert_eq!(excluded_form("d5", &pt(&[2, 3, 7])).unwrap(), None);
        assert_eq!(excluded_form("5.d6", &pt(&[2, 2])).unwrap(), Some("p - q"));
        assert_eq!(
            symmetry_map("d5", SymmetryMap::Sigma, &pt(&[1, 3])),
            Err(ExtensionError::WrongArity { expected: 3, found: 2 })
        );
    }

    #[test]
    fn group_relations() {
        for (family, x) in [("d5", pt(&[2, 3, 7])), ("d5", pt(&[5, -2, 11])), ("d6", pt(&[3, 8]))] {
            let s = |v: &[Q]| symmetry_map(family, SymmetryMap::Sigma, v).unwrap();
            let t = |v: &[Q]| symmetry_map(family, SymmetryMap::Tau, v).unwrap();
            assert!(projective_eq(&t(&t(&x)), &x), "{family}");
            assert!(projective_eq(&s(&s(&s(&x))), &x), "{family}");
            assert!(projective_eq(&s(&t(&x)), &t(&s(&s(&x)))), "{family}");
        }
    }

    #[test]
    fn projective_equality() {
        assert!(projective_eq(&pt(&[1, 2, 0]), &pt(&[-3, -6, 0])));
        assert!(!projective_eq(&pt(&[1, 2, 0]), &pt(&[1, 2, 1])));
        assert!(projective_eq(&pt(&[0, 0]), &pt(&[1, 5])));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn any_matrix_gives_an_algebra(n in 1usize..=4, seed in prop::collection::vec(-5i64..=5, 16)) {
            let a = Matrix::from_fn(n, n, |i, j| q(seed[i * 4 + j]));
            prop_assert!(algebra_from_matrix(&a).unwrap().jacobi_check());
        }
    }
}
