//! Infinitesimal and versal deformations, and isomorphism witnesses.
//!
//! A versal deformation is built as `d∞ = d + Σ tᵢδⁱ + Σ xⱼγʲ`, where the
//! `δⁱ` represent a basis of H², `D(γʲ) = ½βʲ` for a basis `βʲ` of the
//! 3-coboundaries, and the `xⱼ` are power series in the `tᵢ` without
//! constant or linear part. Decomposing
//!
//! ```text
//! [d∞,d∞] = Σ αⁱ rᵢ + Σ βʲ sⱼ + Σ τᵏ uₖ
//! ```
//!
//! the `xⱼ` are solved from `sⱼ = 0` degree by degree; the `rᵢ` are the
//! relations on the base of the deformation.

mod iso;
mod series;

use std::fmt;

use num_rational::BigRational;
use thiserror::Error;

use crate::cochain::{nr_bracket, transform, Cochain, CochainError, Codifferential};
use crate::cohomology::{coboundary_matrix, span, CohomologyError};
use crate::scalar::{Field, Matrix, Scalar, ScalarError};

pub use iso::{iso_witness_search, DEFAULT_BUDGET};
pub use series::{monomials, Exponents, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeformationError {
    #[error("the structure does not satisfy the Jacobi identity")]
    JacobiFails,
    #[error("order must be at least 2, got {0}")]
    OrderTooSmall(u32),
    #[error("the witness matrix is singular")]
    SingularMatrix,
    #[error("dimensions differ: {0} and {1}")]
    DimensionMismatch(usize, usize),
    #[error("invariants differ: {0}")]
    InvariantMismatch(String),
    #[error("no witness found within {0} trials (inconclusive)")]
    BudgetExhausted(usize),
    #[error(transparent)]
    Cochain(#[from] CochainError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

type Q = BigRational;

/// Bases adapted to the cohomology in degrees 2 and 3.
#[derive(Debug, Clone, PartialEq)]
pub struct Prebases {
    /// 2-cocycles projecting to a basis of H².
    pub delta: Vec<Cochain<Q>>,
    /// 3-cocycles projecting to a basis of H³.
    pub alpha: Vec<Cochain<Q>>,
    /// A basis of the 3-coboundaries.
    pub beta: Vec<Cochain<Q>>,
    /// Standard basis cochains completing `alpha ∪ beta` to a basis of C³.
    pub tau: Vec<Cochain<Q>>,
    /// `D(γʲ) = ½βʲ`.
    pub gamma: Vec<Cochain<Q>>,
}

fn rows_of(m: &Matrix<Q>) -> Vec<Vec<Q>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// Picks, in order, the candidates that are independent of `base` and of
/// the candidates already picked.
fn extend_basis(base: &[Vec<Q>], candidates: Vec<Vec<Q>>) -> Vec<Vec<Q>> {
    // Echelon rows kept as (pivot, row), each row normalized at its pivot.
    let mut echelon: Vec<(usize, Vec<Q>)> = Vec::new();
    let reduce = |v: &[Q], echelon: &mut Vec<(usize, Vec<Q>)>| -> bool {
        let mut v = v.to_vec();
        for (p, row) in echelon.iter() {
            if !Field::is_zero(&v[*p]) {
                let f = v[*p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        let Some(p) = v.iter().position(|x| !Field::is_zero(x)) else { return false };
        let inv = v[p].inv().expect("nonzero");
        let v: Vec<Q> = v.iter().map(|x| x.mul(&inv)).collect();
        echelon.push((p, v));
        true
    };
    for b in base {
        reduce(b, &mut echelon);
    }
    candidates.into_iter().filter(|c| reduce(c, &mut echelon)).collect()
}

fn standard_basis(n: usize) -> Vec<Vec<Q>> {
    let id = Matrix::<Q>::identity(n);
    rows_of(&id)
}

/// Computes the prebases of a parameter-free structure.
///
/// Cocycle and coboundary spaces are taken in reduced row echelon form with
/// respect to the fixed basis order; `delta` and `alpha` are the first
/// echelon cocycles independent of the coboundaries, `tau` the first
/// standard basis vectors completing a basis, and `gamma` the solutions of
/// `D(γ) = ½β` with free variables set to zero.
pub fn h2_prebasis(d: &Codifferential<Q>) -> Result<Prebases, DeformationError> {
    if !d.jacobi_check() {
        return Err(DeformationError::JacobiFails);
    }
    let n = d.dim();
    let d1 = coboundary_matrix(d, 1);
    let d2 = coboundary_matrix(d, 2);
    let d3 = coboundary_matrix(d, 3);
    let c3 = d2.rows();

    let b2 = span(rows_of(&d1.transpose()), d2.cols());
    let z2 = span(d2.kernel(), d2.cols());
    let delta = extend_basis(&b2, z2);

    let beta = span(rows_of(&d2.transpose()), c3);
    let z3 = span(d3.kernel(), c3);
    let alpha = extend_basis(&beta, z3);
    let mut ab = alpha.clone();
    ab.extend(beta.iter().cloned());
    let tau = extend_basis(&ab, standard_basis(c3));

    let half = Q::new(1.into(), 2.into());
    let halves: Vec<Vec<Q>> = beta.iter().map(|b| b.iter().map(|x| x * &half).collect()).collect();
    let gamma = d2.solve_many(&halves).expect("coboundaries are in the image");

    let to = |k: usize| move |v: Vec<Q>| Cochain::from_coords(n, k, &v);
    Ok(Prebases {
        delta: delta.into_iter().map(to(2)).collect(),
        alpha: alpha.into_iter().map(to(3)).collect(),
        beta: beta.into_iter().map(to(3)).collect(),
        tau: tau.into_iter().map(to(3)).collect(),
        gamma: gamma.into_iter().map(to(2)).collect(),
    })
}

/// Names of the deformation parameters `t1..tk`.
pub fn t_names(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("t{i}")).collect()
}

/// The universal infinitesimal deformation `d + Σ tᵢδⁱ` with the `tᵢ` as
/// symbolic parameters.
pub fn infinitesimal(d: &Codifferential<Q>) -> Result<Codifferential<Scalar>, DeformationError> {
    let pre = h2_prebasis(d)?;
    let mut out = d.to_scalar().into_cochain();
    for (name, delta) in t_names(pre.delta.len()).iter().zip(&pre.delta) {
        let t = Scalar::var(name);
        out = out.add(&delta.to_scalar().scale(&t))?;
    }
    Ok(Codifferential::new(out)?)
}

/// True when every coefficient of `[d¹,d¹]` is a polynomial in the
/// parameters with no terms of degree below 2.
pub fn vanishes_to_first_order(d1: &Codifferential<Scalar>) -> bool {
    d1.square().terms().all(|(_, c)| c.denom().is_constant() && c.numer().terms().all(|(m, _)| m.degree() >= 2))
}

/// Whether `u`, up to degree `k`, lies in the ideal generated by `gens`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdealCheck {
    pub degree: u32,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VersalResult {
    pub prebases: Prebases,
    pub order: u32,
    /// One series per `γʲ`.
    pub x_solutions: Vec<TruncatedSeries>,
    /// The relations `rᵢ`, one per `αⁱ`.
    pub relations: Vec<TruncatedSeries>,
    /// The `τ`-components `uₖ`.
    pub tau_components: Vec<TruncatedSeries>,
    pub ideal_checks: Vec<IdealCheck>,
}

impl VersalResult {
    pub fn num_parameters(&self) -> usize {
        self.prebases.delta.len()
    }

    pub fn is_rigid(&self) -> bool {
        self.prebases.delta.is_empty()
    }

    /// True when every relation vanishes through the truncation order.
    pub fn relations_vanish(&self) -> bool {
        self.relations.iter().all(TruncatedSeries::is_zero)
    }
}

impl fmt::Display for VersalResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rigid() {
            return writeln!(f, "rigid: no deformation parameters");
        }
        writeln!(f, "order\t{}", self.order)?;
        writeln!(f, "parameters\t{}", self.num_parameters())?;
        for (i, d) in self.prebases.delta.iter().enumerate() {
            writeln!(f, "delta{}\t{}", i + 1, d)?;
        }
        for (j, (g, x)) in self.prebases.gamma.iter().zip(&self.x_solutions).enumerate() {
            if !x.is_zero() {
                writeln!(f, "x{}\t{}\t{}", j + 1, x, g)?;
            }
        }
        writeln!(f, "relations\t{}", self.relations.len())?;
        for (i, r) in self.relations.iter().enumerate() {
            writeln!(f, "r{}\t{}", i + 1, r)?;
        }
        for c in &self.ideal_checks {
            writeln!(f, "ideal_check\tdegree {}\t{}", c.degree, if c.holds { "holds" } else { "fails" })?;
        }
        Ok(())
    }
}

/// `(a, b, weight, coordinates)`.
type PairTerm = (usize, usize, Q, Vec<(usize, Q)>);

/// Precomputed decomposition of `[εa,εb]` in the basis `α ∪ β ∪ τ`, where
/// the `ε` are the `δ`s followed by the `γ`s.
struct Expansion {
    n_alpha: usize,
    n_beta: usize,
    n_tau: usize,
    /// `(a, b, weight, coordinates)` for `a ≤ b`; the weight accounts for
    /// the two orders of an off-diagonal pair.
    pairs: Vec<PairTerm>,
}

impl Expansion {
    fn new(pre: &Prebases) -> Self {
        let basis: Vec<Vec<Q>> = pre.alpha.iter().chain(&pre.beta).chain(&pre.tau).map(Cochain::coords).collect();
        let m = Matrix::from_rows(basis).transpose();
        let inv = m.inverse().expect("alpha, beta, tau form a basis");
        let eps: Vec<&Cochain<Q>> = pre.delta.iter().chain(&pre.gamma).collect();
        let mut pairs = Vec::new();
        for a in 0..eps.len() {
            for b in a..eps.len() {
                let br = nr_bracket(eps[a], eps[b]).expect("same dimension");
                if br.is_zero() {
                    continue;
                }
                let coords: Vec<(usize, Q)> =
                    inv.mul_vec(&br.coords()).into_iter().enumerate().filter(|(_, c)| !Field::is_zero(c)).collect();
                let w = Q::from_integer(if a == b { 1 } else { 2 }.into());
                pairs.push((a, b, w, coords));
            }
        }
        Expansion { n_alpha: pre.alpha.len(), n_beta: pre.beta.len(), n_tau: pre.tau.len(), pairs }
    }

    /// The quadratic part `Σ c_a c_b [εa,εb]` in coordinates.
    fn quadratic(&self, coeffs: &[TruncatedSeries], nvars: usize, order: u32) -> Vec<TruncatedSeries> {
        let total = self.n_alpha + self.n_beta + self.n_tau;
        let mut out = vec![TruncatedSeries::zero(nvars, order); total];
        for (a, b, w, coords) in &self.pairs {
            let prod = coeffs[*a].mul(&coeffs[*b]);
            if prod.is_zero() {
                continue;
            }
            for (i, c) in coords {
                out[*i].add_scaled(&prod, &(c * w));
            }
        }
        out
    }
}

/// The `β`-components `sⱼ = xⱼ + (quadratic part)` for given `xⱼ`.
pub fn beta_components(pre: &Prebases, x: &[TruncatedSeries], order: u32) -> Vec<TruncatedSeries> {
    let exp = Expansion::new(pre);
    let k = pre.delta.len();
    let coeffs = coefficient_series(k, x, order);
    let quad = exp.quadratic(&coeffs, k, order);
    (0..exp.n_beta).map(|j| quad[exp.n_alpha + j].add(&x[j])).collect()
}

fn coefficient_series(k: usize, x: &[TruncatedSeries], order: u32) -> Vec<TruncatedSeries> {
    let mut coeffs: Vec<TruncatedSeries> = (0..k).map(|i| TruncatedSeries::var(k, order, i)).collect();
    coeffs.extend(x.iter().cloned());
    coeffs
}

/// Solves for a versal deformation of a parameter-free structure through
/// total degree `order`.
pub fn versal(d: &Codifferential<Q>, order: u32) -> Result<VersalResult, DeformationError> {
    if order < 2 {
        return Err(DeformationError::OrderTooSmall(order));
    }
    let pre = h2_prebasis(d)?;
    let k = pre.delta.len();
    let exp = Expansion::new(&pre);
    let mut x = vec![TruncatedSeries::zero(k, order); exp.n_beta];
    for deg in 2..=order {
        let quad = exp.quadratic(&coefficient_series(k, &x, order), k, order);
        for (j, xj) in x.iter_mut().enumerate() {
            let part = quad[exp.n_alpha + j].homogeneous(deg);
            *xj = xj.sub(&part);
        }
    }
    let quad = exp.quadratic(&coefficient_series(k, &x, order), k, order);
    let relations: Vec<TruncatedSeries> = quad[..exp.n_alpha].to_vec();
    let tau_components: Vec<TruncatedSeries> = quad[exp.n_alpha + exp.n_beta..].to_vec();
    let ideal_checks = (2..=order)
        .map(|deg| IdealCheck {
            degree: deg,
            holds: tau_components.iter().all(|u| in_ideal(&u.truncate(deg), &relations, deg)),
        })
        .collect();
    Ok(VersalResult { prebases: pre, order, x_solutions: x, relations, tau_components, ideal_checks })
}

/// Whether `u` (of degree at most `k`) is a combination of the truncations
/// to degree `k` of `m·g` for monomials `m` and generators `g`.
pub fn in_ideal(u: &TruncatedSeries, gens: &[TruncatedSeries], k: u32) -> bool {
    if u.is_zero() {
        return true;
    }
    let nvars = u.nvars();
    let order = u.order();
    let mut products: Vec<TruncatedSeries> = Vec::new();
    for g in gens {
        let Some(low) = g.min_degree() else { continue };
        for mdeg in 0..=k.saturating_sub(low) {
            for e in monomials(nvars, mdeg) {
                let mut m = TruncatedSeries::zero(nvars, order);
                m.add_term(e, Q::from_integer(1.into()));
                let p = m.mul(g).truncate(k);
                if !p.is_zero() {
                    products.push(p);
                }
            }
        }
    }
    if products.is_empty() {
        return false;
    }
    let mut index: Vec<Exponents> = Vec::new();
    for s in products.iter().chain(std::iter::once(u)) {
        for (e, _) in s.terms() {
            if !index.contains(e) {
                index.push(e.clone());
            }
        }
    }
    let a = Matrix::from_fn(index.len(), products.len(), |i, j| products[j].coeff(&index[i]));
    let b: Vec<Q> = index.iter().map(|e| u.coeff(e)).collect();
    a.solve(&b).is_some()
}

/// Checks that `transform(family, g)` equals `target` identically as
/// rational functions of the parameters.
pub fn verify_parametric_iso(
    family: &Codifferential<Scalar>,
    target: &Codifferential<Scalar>,
    g: &Matrix<Scalar>,
) -> Result<bool, DeformationError> {
    if family.dim() != target.dim() {
        return Err(DeformationError::DimensionMismatch(family.dim(), target.dim()));
    }
    if g.rows() != family.dim() || g.cols() != family.dim() {
        return Err(DeformationError::DimensionMismatch(family.dim(), g.rows()));
    }
    if g.determinant().is_zero() {
        return Err(DeformationError::SingularMatrix);
    }
    let image = transform(family, g).map_err(|e| match e {
        CochainError::SingularMatrix => DeformationError::SingularMatrix,
        e => e.into(),
    })?;
    Ok(image.sub(target)?.is_zero())
}
