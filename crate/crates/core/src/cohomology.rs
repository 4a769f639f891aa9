//! Adjoint Chevalley–Eilenberg cohomology and classical invariants.

use std::fmt;

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::cochain::{basis, CochainError, Codifferential};
use crate::scalar::{sample_point, Field, Matrix, Point, Polynomial, Scalar, ScalarError, GENERIC_RANGE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("degree {k} out of range for dimension {n}")]
    OutOfRange { n: usize, k: usize },
    #[error("structure does not satisfy the Jacobi identity")]
    JacobiFails,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Cochain(#[from] CochainError),
}

/// `dim Cᵏ = n·C(n,k)`.
pub fn cochain_dim(n: usize, k: usize) -> Result<usize, CohomologyError> {
    if k > n {
        return Err(CohomologyError::OutOfRange { n, k });
    }
    let binom = (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1));
    Ok(n * binom)
}

/// Matrix of `D: Cᵏ → Cᵏ⁺¹` in the canonical bases (columns index `Cᵏ`).
pub fn coboundary_matrix<K: Field>(d: &Codifferential<K>, k: usize) -> Matrix<K> {
    let n = d.dim();
    let src = basis(n, k);
    let dst = basis(n, k + 1);
    let mut m = Matrix::zeros(dst.len(), src.len());
    for (j, t) in src.iter().enumerate() {
        let mut e = crate::cochain::Cochain::zero(n, k);
        e.add_term(*t, K::one());
        let image = d.coboundary(&e).expect("same dimension");
        for (s, c) in image.terms() {
            let i = dst.binary_search(s).expect("basis term of degree k+1");
            m.set(i, j, c.clone());
        }
    }
    m
}

/// Ranks of `D₀,…,D_{n−1}`.
pub fn coboundary_ranks<K: Field>(d: &Codifferential<K>) -> Vec<usize> {
    (0..d.dim()).into_par_iter().map(|k| K::matrix_rank(&coboundary_matrix(d, k))).collect()
}

fn betti_from_ranks(n: usize, ranks: &[usize]) -> Vec<usize> {
    (0..=n)
        .map(|k| {
            let into = if k == 0 { 0 } else { ranks[k - 1] };
            let out = ranks.get(k).copied().unwrap_or(0);
            cochain_dim(n, k).expect("k ≤ n") - out - into
        })
        .collect()
}

/// How ranks are obtained.
#[derive(Debug, Clone)]
pub enum BettiMode {
    /// Evaluate every parameter at the given point, then exact ranks.
    AtPoint(Point),
    /// Maximum rank over random points, cross-checked between two seeds.
    Generic { seed: u64, trials: usize, avoid: Vec<Polynomial> },
    /// Elimination directly over the fraction field.
    Symbolic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    ExactAtPoint(Point),
    /// Generic ranks; `seeds` lists every seed whose run contributed.
    Probabilistic {
        seeds: Vec<u64>,
        trials: usize,
    },
    ExactSymbolic {
        escalated: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyReport {
    pub dim: usize,
    pub betti: Vec<usize>,
    /// `rank D_k` for `k = 0..n`.
    pub ranks: Vec<usize>,
    pub evidence: Evidence,
}

impl CohomologyReport {
    fn new(dim: usize, ranks: Vec<usize>, evidence: Evidence) -> Self {
        CohomologyReport { dim, betti: betti_from_ranks(dim, &ranks), ranks, evidence }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti.iter().enumerate().map(|(k, &h)| if k % 2 == 0 { h as i64 } else { -(h as i64) }).sum()
    }

    pub fn mode(&self) -> &'static str {
        match self.evidence {
            Evidence::ExactAtPoint(_) => "exact-at-point",
            Evidence::Probabilistic { .. } => "generic-probabilistic",
            Evidence::ExactSymbolic { .. } => "exact-symbolic",
        }
    }
}

impl fmt::Display for CohomologyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_vector(&self.betti))
    }
}

/// `(a,b,c)` formatting used in reports.
pub fn format_vector(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

/// Betti numbers of a parameter-free structure.
pub fn betti_rational(d: &Codifferential<BigRational>) -> Result<CohomologyReport, CohomologyError> {
    if !d.jacobi_check() {
        return Err(CohomologyError::JacobiFails);
    }
    Ok(CohomologyReport::new(d.dim(), coboundary_ranks(d), Evidence::ExactAtPoint(Point::new())))
}

/// Betti numbers of a (possibly parametric) structure.
pub fn betti(d: &Codifferential<Scalar>, mode: &BettiMode) -> Result<CohomologyReport, CohomologyError> {
    match mode {
        BettiMode::AtPoint(point) => {
            let dq = d.eval_at(point)?;
            let mut r = betti_rational(&dq)?;
            r.evidence = Evidence::ExactAtPoint(point.clone());
            Ok(r)
        }
        BettiMode::Symbolic => {
            if !d.jacobi_check() {
                return Err(CohomologyError::JacobiFails);
            }
            Ok(CohomologyReport::new(d.dim(), coboundary_ranks(d), Evidence::ExactSymbolic { escalated: false }))
        }
        BettiMode::Generic { seed, trials, avoid } => {
            if !d.jacobi_check() {
                return Err(CohomologyError::JacobiFails);
            }
            betti_generic(d, *seed, *trials, avoid)
        }
    }
}

/// Derives a second, independent seed.
pub fn next_seed(seed: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn generic_ranks(
    d: &Codifferential<Scalar>,
    seed: u64,
    trials: usize,
    avoid: &[Polynomial],
) -> Result<Vec<usize>, CohomologyError> {
    let mut params = d.params();
    for a in avoid {
        params.extend(a.used_vars());
    }
    params.sort();
    params.dedup();
    let mut nonvanishing: Vec<&Polynomial> = d.terms().map(|(_, c)| c.denom()).filter(|p| !p.is_constant()).collect();
    nonvanishing.extend(avoid);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = vec![0; d.dim()];
    for _ in 0..trials.max(1) {
        let point = sample_point(&mut rng, &params, GENERIC_RANGE, false, &nonvanishing, 1000)?;
        let ranks = coboundary_ranks(&d.eval_at(&point)?);
        for (b, r) in best.iter_mut().zip(ranks) {
            *b = (*b).max(r);
        }
    }
    Ok(best)
}

fn betti_generic(
    d: &Codifferential<Scalar>,
    seed: u64,
    trials: usize,
    avoid: &[Polynomial],
) -> Result<CohomologyReport, CohomologyError> {
    let n = d.dim();
    if d.params().is_empty() {
        let ranks = coboundary_ranks(&d.eval_at(&Point::new())?);
        return Ok(CohomologyReport::new(n, ranks, Evidence::ExactAtPoint(Point::new())));
    }
    let mut seeds = vec![seed, next_seed(seed)];
    let a = generic_ranks(d, seeds[0], trials, avoid)?;
    let b = generic_ranks(d, seeds[1], trials, avoid)?;
    if a == b {
        return Ok(CohomologyReport::new(n, a, Evidence::Probabilistic { seeds, trials }));
    }
    seeds.push(next_seed(seeds[1]));
    seeds.push(next_seed(seeds[2]));
    let c = generic_ranks(d, seeds[2], trials, avoid)?;
    let e = generic_ranks(d, seeds[3], trials, avoid)?;
    if c == e {
        return Ok(CohomologyReport::new(n, c, Evidence::Probabilistic { seeds, trials }));
    }
    Ok(CohomologyReport::new(n, coboundary_ranks(d), Evidence::ExactSymbolic { escalated: true }))
}

/// Dimension of `{v : d(v,x) = 0 for all x}`, computed from the structure
/// constants directly rather than through `D₀`.
pub fn center<K: Field>(d: &Codifferential<K>) -> Result<usize, CohomologyError> {
    if !d.jacobi_check() {
        return Err(CohomologyError::JacobiFails);
    }
    let n = d.dim();
    let mut m = Matrix::zeros(n * n, n);
    for v in 0..n {
        for x in 0..n {
            for (i, c) in d.apply_basis(&[v, x]).into_iter().enumerate() {
                m.set(x * n + i, v, c);
            }
        }
    }
    Ok(n - K::matrix_rank(&m))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantVector {
    pub center_dim: usize,
    /// `dim L⁽⁰⁾, dim L⁽¹⁾, …` until the series stabilizes.
    pub derived_series_dims: Vec<usize>,
    /// `dim L¹, dim L², …` until the series stabilizes.
    pub lower_central_dims: Vec<usize>,
    pub is_solvable: bool,
    pub is_nilpotent: bool,
    pub betti: Vec<usize>,
}

impl fmt::Display for InvariantVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "center\t{}", self.center_dim)?;
        writeln!(f, "derived\t{}", format_vector(&self.derived_series_dims))?;
        writeln!(f, "lower_central\t{}", format_vector(&self.lower_central_dims))?;
        writeln!(f, "solvable\t{}", self.is_solvable)?;
        writeln!(f, "nilpotent\t{}", self.is_nilpotent)?;
        write!(f, "betti\t{}", format_vector(&self.betti))
    }
}

/// Row-reduced basis of the span of `vectors`.
pub(crate) fn span<K: Field>(vectors: Vec<Vec<K>>, n: usize) -> Vec<Vec<K>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    debug_assert!(vectors.iter().all(|v| v.len() == n));
    let (r, pivots) = Matrix::from_rows(vectors).rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

pub(crate) fn bracket_space<K: Field>(d: &Codifferential<K>, a: &[Vec<K>], b: &[Vec<K>]) -> Vec<Vec<K>> {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            let v = d.bracket(x, y);
            if v.iter().any(|c| !c.is_zero()) {
                out.push(v);
            }
        }
    }
    span(out, d.dim())
}

/// Center, derived and lower central series, and Betti numbers.
pub fn series_invariants<K: Field>(d: &Codifferential<K>) -> Result<InvariantVector, CohomologyError> {
    let center_dim = center(d)?;
    let n = d.dim();
    let identity = Matrix::<K>::identity(n);
    let whole: Vec<Vec<K>> = (0..n).map(|i| identity.row(i).to_vec()).collect();

    let mut derived = vec![n];
    let mut cur = whole.clone();
    for _ in 0..=n {
        let next = bracket_space(d, &cur, &cur);
        if next.len() == cur.len() {
            break;
        }
        derived.push(next.len());
        cur = next;
        if cur.is_empty() {
            break;
        }
    }

    let mut lower = vec![n];
    let mut cur = whole.clone();
    for _ in 0..=n {
        let next = bracket_space(d, &whole, &cur);
        if next.len() == cur.len() {
            break;
        }
        lower.push(next.len());
        cur = next;
        if cur.is_empty() {
            break;
        }
    }

    let ranks = coboundary_ranks(d);
    Ok(InvariantVector {
        center_dim,
        is_solvable: derived.last() == Some(&0),
        is_nilpotent: lower.last() == Some(&0),
        derived_series_dims: derived,
        lower_central_dims: lower,
        betti: betti_from_ranks(n, &ranks),
    })
}
