//! Exact and probabilistic matrix rank.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Matrix, Polynomial, Scalar, ScalarError};

/// Sampling range for generic evaluation points.
pub const GENERIC_RANGE: RangeInclusive<i64> = 2..=1_000_000;

/// Rejection budget per trial when a sample hits a denominator or avoid zero.
const RESAMPLE_BUDGET: usize = 1000;

/// Rank of a parameter-free matrix.
pub fn rank_exact(m: &Matrix<Scalar>) -> Result<usize, ScalarError> {
    let q = m.try_map(|s| s.as_rational().ok_or_else(|| ScalarError::ParametricEntry(s.to_string())))?;
    Ok(rank_rational(&q))
}

/// Rank over ℚ by fraction-free elimination on the integer matrix obtained
/// by clearing each row's denominators.
pub fn rank_rational(m: &Matrix<BigRational>) -> usize {
    let mut rows: Vec<Vec<BigInt>> = (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .filter(|r: &Vec<BigInt>| r.iter().any(|x| !x.is_zero()))
        .collect();
    bareiss_rank(&mut rows, m.cols())
}

fn bareiss_rank(rows: &mut [Vec<BigInt>], cols: usize) -> usize {
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows.len() {
            break;
        }
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(piv, rank);
        let (top, rest) = rows.split_at_mut(rank + 1);
        let prow = &top[rank];
        let p = prow[col].clone();
        for row in rest.iter_mut() {
            let f = std::mem::take(&mut row[col]);
            for j in col + 1..cols {
                let v = &p * &row[j] - &f * &prow[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = p;
        rank += 1;
    }
    rank
}

/// Evaluates a parametric matrix at a point.
pub fn eval_matrix(
    m: &Matrix<Scalar>,
    point: &BTreeMap<String, BigRational>,
) -> Result<Matrix<BigRational>, ScalarError> {
    m.try_map(|s| s.eval_at(point))
}

/// Samples an integer point from `range` for `params` at which none of
/// `nonvanishing` is zero.
pub(crate) fn sample_point(
    rng: &mut ChaCha8Rng,
    params: &[String],
    range: RangeInclusive<i64>,
    distinct: bool,
    nonvanishing: &[&Polynomial],
    budget: usize,
) -> Result<BTreeMap<String, BigRational>, ScalarError> {
    'retry: for _ in 0..budget {
        let mut point = BTreeMap::new();
        let mut used = Vec::with_capacity(params.len());
        for p in params {
            let v = rng.gen_range(range.clone());
            if distinct && used.contains(&v) {
                continue 'retry;
            }
            used.push(v);
            point.insert(p.clone(), BigRational::from_integer(v.into()));
        }
        for poly in nonvanishing {
            if poly.eval(|n| point.get(n).cloned())?.is_zero() {
                continue 'retry;
            }
        }
        return Ok(point);
    }
    Err(ScalarError::NoValidSample)
}

/// Generic rank of a matrix over ℚ(params): the maximum rank over `trials`
/// random integer evaluations that avoid every denominator zero and every
/// zero of `avoid`.
///
/// A trial's rank is never larger than the generic rank, and it falls short
/// only on the zero set of some nonzero minor, so by Schwartz–Zippel each
/// trial fails with probability at most `deg / 999_999`.
pub fn rank_generic(m: &Matrix<Scalar>, seed: u64, trials: usize, avoid: &[Polynomial]) -> Result<usize, ScalarError> {
    if trials < 2 {
        return Err(ScalarError::TooFewTrials(trials));
    }
    let mut params: Vec<String> = Vec::new();
    let mut dens: Vec<&Polynomial> = Vec::new();
    for s in m.entries() {
        for p in s.params() {
            if !params.contains(&p) {
                params.push(p);
            }
        }
        if !s.denom().is_constant() && !dens.contains(&s.denom()) {
            dens.push(s.denom());
        }
    }
    for a in avoid {
        for p in a.used_vars() {
            if !params.contains(&p) {
                params.push(p);
            }
        }
    }
    params.sort();
    dens.extend(avoid.iter());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    for _ in 0..trials {
        let point = sample_point(&mut rng, &params, GENERIC_RANGE, false, &dens, RESAMPLE_BUDGET)?;
        best = best.max(rank_rational(&eval_matrix(m, &point)?));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_scalar;
    use proptest::prelude::*;

    fn sm(rows: &[&[&str]]) -> Matrix<Scalar> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|t| parse_scalar(t).unwrap()).collect()).collect())
    }

    #[test]
    fn exact_examples() {
        assert_eq!(rank_exact(&Matrix::zeros(3, 3)).unwrap(), 0);
        assert_eq!(rank_exact(&sm(&[&["1", "2"], &["2", "4"]])).unwrap(), 1);
        assert_eq!(rank_exact(&Matrix::identity(2)).unwrap(), 2);
        assert_eq!(rank_exact(&sm(&[&["1/2", "1/3"], &["3", "2"]])).unwrap(), 1);
        assert!(matches!(rank_exact(&sm(&[&["p"]])), Err(ScalarError::ParametricEntry(_))));
    }

    #[test]
    fn generic_examples() {
        assert_eq!(rank_generic(&sm(&[&["p", "q"], &["q", "p"]]), 1, 2, &[]).unwrap(), 2);
        assert_eq!(rank_generic(&sm(&[&["p", "p"], &["p", "p"]]), 1, 2, &[]).unwrap(), 1);
        assert_eq!(rank_generic(&Matrix::zeros(3, 2), 1, 2, &[]).unwrap(), 0);
        assert_eq!(rank_generic(&Matrix::identity(2), 0, 1, &[]), Err(ScalarError::TooFewTrials(1)));
    }

    #[test]
    fn generic_rank_over_fraction_field() {
        let m = sm(&[&["1/(p-q)", "1"], &["1", "p-q"]]);
        assert_eq!(rank_generic(&m, 7, 3, &[]).unwrap(), 1);
    }

    /// Textbook Gauss-Jordan over ℚ, pivoting on the first nonzero entry.
    #[allow(clippy::needless_range_loop)]
    fn naive_rank(rows: &[Vec<i64>]) -> usize {
        let mut m: Vec<Vec<BigRational>> =
            rows.iter().map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect()).collect();
        let cols = m.first().map_or(0, Vec::len);
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(p, r);
            for i in 0..m.len() {
                if i != r && !m[i][c].is_zero() {
                    let f = &m[i][c] / &m[r][c];
                    for j in 0..cols {
                        let v = &m[r][j] * &f;
                        m[i][j] -= v;
                    }
                }
            }
            r += 1;
        }
        r
    }

    fn int_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..=8, 1usize..=8).prop_flat_map(|(r, c)| {
            // Small entries drawn from a sparse distribution produce plenty of
            // rank-deficient cases.
            prop::collection::vec(prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -3i64..=3], c), r)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn exact_rank_matches_naive(rows in int_matrix()) {
            let m = Matrix::from_rows(
                rows.iter().map(|r| r.iter().map(|&v| Scalar::from_i64(v)).collect()).collect(),
            );
            prop_assert_eq!(rank_exact(&m).unwrap(), naive_rank(&rows));
        }
    }
}
