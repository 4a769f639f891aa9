//! Randomized search for an explicit isomorphism between two structures.
//!
//! With `G eᵢ = cᵢ`, an isomorphism satisfies `G d₁(eᵢ,eⱼ) = d₂(cᵢ,cⱼ)` for
//! all `i < j`. The structure `d₁` is first rewritten in a basis adapted to
//! its lower central series, so the generators come first and every later
//! basis vector is a combination of brackets of generators.
//!
//! Columns are then chosen one at a time:
//!
//! * every column must lie in the characteristic subspaces (central series
//!   terms, centralizers) of `d₂` matching those of `d₁` that contain the
//!   corresponding basis vector;
//! * a generator image `c_m` must satisfy the relations among bracket words
//!   in `e₀..e_m` that use `e_m` once, which are linear in `c_m`; it is then
//!   drawn on a random line `p + λu` of that affine space, with `λ` a
//!   rational root of the remaining relations and of the minors forcing
//!   `rank ad c_m = rank ad e_m`;
//! * a later column is constrained, together with the columns after it, by
//!   the pair equations with `j ≤ m`, which are linear.
//!
//! Free directions get small random coefficients weighted towards zero.
//! This is complete in practice for nilpotent structures; for the others,
//! where generators do not span, it often exhausts its budget.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{extend_basis, rows_of, DeformationError};
use crate::cochain::{transform, Codifferential};
use crate::cohomology::{bracket_space, series_invariants, span};
use crate::scalar::{Field, Matrix};

type Q = BigRational;
/// A subspace, as the rows of a reduced echelon basis.
type Space = Vec<Vec<Q>>;

/// Trials used when no budget is given.
pub const DEFAULT_BUDGET: usize = 1000;

/// Bracket words considered per generator.
const MAX_WORDS: usize = 400;

/// Kernel coefficients in {-3..3}, weighted towards zero.
fn coefficient(rng: &mut ChaCha8Rng) -> i64 {
    const TABLE: [i64; 25] = [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, -1, -1, -1, -1, 2, -2, 2, 3, -3];
    TABLE[rng.gen_range(0..TABLE.len())]
}

/// Searches for `G` with `transform(d1, G) = d2`.
///
/// Failure to find one is inconclusive: it is not a proof that the
/// structures are non-isomorphic.
pub fn iso_witness_search(
    d1: &Codifferential<Q>,
    d2: &Codifferential<Q>,
    budget: usize,
    seed: u64,
) -> Result<Matrix<Q>, DeformationError> {
    let n = d1.dim();
    if n != d2.dim() {
        return Err(DeformationError::DimensionMismatch(n, d2.dim()));
    }
    if !d1.jacobi_check() || !d2.jacobi_check() {
        return Err(DeformationError::JacobiFails);
    }
    let (a, b) = (series_invariants(d1)?, series_invariants(d2)?);
    if a != b {
        let what = if a.center_dim != b.center_dim {
            format!("center dimension {} vs {}", a.center_dim, b.center_dim)
        } else if a.derived_series_dims != b.derived_series_dims {
            format!("derived series {:?} vs {:?}", a.derived_series_dims, b.derived_series_dims)
        } else if a.lower_central_dims != b.lower_central_dims {
            format!("lower central series {:?} vs {:?}", a.lower_central_dims, b.lower_central_dims)
        } else {
            format!("Betti numbers {:?} vs {:?}", a.betti, b.betti)
        };
        return Err(DeformationError::InvariantMismatch(what));
    }
    if d1 == d2 {
        return Ok(Matrix::identity(n));
    }
    let (s1, s2) = (characteristic_subspaces(d1), characteristic_subspaces(d2));
    let dims1: Vec<usize> = s1.iter().map(Vec::len).collect();
    let dims2: Vec<usize> = s2.iter().map(Vec::len).collect();
    if dims1 != dims2 {
        return Err(DeformationError::InvariantMismatch(format!(
            "characteristic subspace dimensions {dims1:?} vs {dims2:?}"
        )));
    }

    let frame = Frame::new(d1, &s1);
    let p_inv = frame.basis.inverse().expect("adapted basis is a basis");
    let d1a = transform(d1, &p_inv)?;
    let annihilators: Vec<Space> = s2.iter().map(|s| annihilator(s, n)).collect();
    let constraints: Vec<&[Vec<Q>]> =
        frame.tags.iter().map(|t| t.map_or(&[][..], |j| annihilators[j].as_slice())).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let Some(g) = attempt(&d1a, d2, frame.generators, &constraints, &mut rng) else { continue };
        let g = g.mul(&p_inv);
        if Field::is_zero(&g.determinant()) {
            continue;
        }
        if transform(d1, &g)? == *d2 {
            return Ok(g);
        }
    }
    Err(DeformationError::BudgetExhausted(budget))
}

fn whole(n: usize) -> Space {
    rows_of(&Matrix::<Q>::identity(n))
}

fn contains(space: &[Vec<Q>], v: &[Q]) -> bool {
    extend_basis(space, vec![v.to_vec()]).is_empty()
}

/// Rows `a` with `a·s = 0` for every `s` in the space.
fn annihilator(space: &[Vec<Q>], n: usize) -> Space {
    if space.is_empty() {
        return whole(n);
    }
    Matrix::from_rows(space.to_vec()).kernel()
}

fn intersect(a: &[Vec<Q>], b: &[Vec<Q>], n: usize) -> Space {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // Columns a₁..a_k, −b₁..−b_l: a kernel vector gives Σ αᵢ aᵢ = Σ βⱼ bⱼ.
    let cols: Vec<Vec<Q>> = a.iter().cloned().chain(b.iter().map(|v| v.iter().map(Field::neg).collect())).collect();
    let vectors: Vec<Vec<Q>> = Matrix::from_rows(cols)
        .transpose()
        .kernel()
        .into_iter()
        .map(|k| {
            let mut v = vec![Q::zero(); n];
            for (alpha, ai) in k.iter().zip(a) {
                for (x, y) in v.iter_mut().zip(ai) {
                    *x = x.add(&alpha.mul(y));
                }
            }
            v
        })
        .collect();
    span(vectors, n)
}

fn kernel_span(rows: Vec<Vec<Q>>, n: usize) -> Space {
    if rows.is_empty() {
        return whole(n);
    }
    span(Matrix::from_rows(rows).kernel(), n)
}

/// `{x : [s, x] = 0 for all s}`.
fn centralizer(d: &Codifferential<Q>, space: &[Vec<Q>]) -> Space {
    let rows = space.iter().flat_map(|s| rows_of(&left_bracket(d, s))).collect();
    kernel_span(rows, d.dim())
}

/// `{x : [e, x] ∈ z for all e}`.
fn upper_step(d: &Codifferential<Q>, z: &[Vec<Q>]) -> Space {
    let n = d.dim();
    let ann = annihilator(z, n);
    let mut rows = Vec::new();
    for e in whole(n) {
        let m = left_bracket(d, &e);
        for a in &ann {
            rows.push((0..n).map(|s| (0..n).fold(Q::zero(), |acc, r| acc.add(&a[r].mul(m.get(r, s))))).collect());
        }
    }
    kernel_span(rows, n)
}

/// Monotone sequence `start, step(start), ...` until the dimension stalls.
fn chain(start: Space, step: impl Fn(&Space) -> Space) -> Vec<Space> {
    let mut out = vec![start];
    loop {
        let last = out.last().expect("nonempty");
        let next = step(last);
        if next.len() == last.len() {
            return out;
        }
        out.push(next);
    }
}

/// Proper nonzero subspaces fixed by every automorphism, built by the same
/// recipe for every structure and sorted by dimension, so an isomorphism
/// maps the `j`-th subspace of one structure onto the `j`-th of the other.
fn characteristic_subspaces(d: &Codifferential<Q>) -> Vec<Space> {
    let n = d.dim();
    let all = whole(n);
    let lower = chain(all.clone(), |s| bracket_space(d, &all, s));
    let derived = chain(all.clone(), |s| bracket_space(d, s, s));
    let upper = chain(upper_step(d, &[]), |z| upper_step(d, z));
    let mut list: Vec<Space> = lower.into_iter().chain(derived).chain(upper).collect();
    let centralizers: Vec<Space> = list.iter().map(|s| centralizer(d, s)).collect();
    list.extend(centralizers);
    let mut out: Vec<Space> = Vec::new();
    for s in list {
        if !s.is_empty() && s.len() < n && !out.contains(&s) {
            out.push(s);
        }
    }
    out.sort_by_key(Vec::len);
    out
}

/// Basis of `d` adapted to its lower central series: a complement of `L²`,
/// then complements of `L^{k+1}` in `L^k`, then the last term. Complements
/// prefer vectors of small characteristic subspaces; the generators are
/// then reversed so that the least constrained come first.
struct Frame {
    basis: Matrix<Q>,
    generators: usize,
    /// For each basis vector, the first characteristic subspace holding it.
    tags: Vec<Option<usize>>,
}

impl Frame {
    fn new(d: &Codifferential<Q>, subspaces: &[Space]) -> Self {
        let n = d.dim();
        let all = whole(n);
        let levels = chain(all.clone(), |s| bracket_space(d, &all, s));
        let candidates = |level: &Space| {
            let mut c: Vec<Vec<Q>> = subspaces.iter().flat_map(|s| intersect(s, level, n)).collect();
            c.extend(level.iter().cloned());
            c
        };
        let mut columns: Vec<Vec<Q>> = Vec::new();
        for (k, w) in levels.windows(2).enumerate() {
            let mut picked = extend_basis(&w[1], candidates(&w[0]));
            if k == 0 {
                picked.reverse();
            }
            columns.extend(picked);
        }
        let generators = if levels.len() > 1 { n - levels[1].len() } else { 0 };
        columns.extend(extend_basis(&[], candidates(levels.last().expect("nonempty"))));
        debug_assert_eq!(columns.len(), n);
        let tags = columns.iter().map(|v| subspaces.iter().position(|s| contains(s, v))).collect();
        Frame { basis: Matrix::from_rows(columns).transpose(), generators, tags }
    }
}

/// `x ↦ d(c, x)` as a matrix.
fn left_bracket(d: &Codifferential<Q>, c: &[Q]) -> Matrix<Q> {
    let n = d.dim();
    let id = Matrix::<Q>::identity(n);
    let cols: Vec<Vec<Q>> = (0..n).map(|s| d.bracket(c, id.row(s))).collect();
    Matrix::from_rows(cols).transpose()
}

/// A bracket word in the generators, valued in `d₁` and, as the affine
/// function `lin·c_m + cst` of the pending image `c_m`, in `d₂`.
struct Word {
    has_m: bool,
    v1: Vec<Q>,
    lin: Option<Matrix<Q>>,
    cst: Vec<Q>,
}

/// Linear equations on the image of generator `m`, given `cols[..m]`.
#[allow(clippy::needless_range_loop)]
fn word_relations(d1: &Codifferential<Q>, d2: &Codifferential<Q>, cols: &[Vec<Q>], m: usize) -> (Vec<Vec<Q>>, Vec<Q>) {
    let n = d1.dim();
    let id = Matrix::<Q>::identity(n);
    let zero = vec![Q::zero(); n];
    let mut words: Vec<Word> = (0..=m)
        .map(|i| Word {
            has_m: i == m,
            v1: id.row(i).to_vec(),
            lin: (i == m).then(|| id.clone()),
            cst: if i == m { zero.clone() } else { cols[i].clone() },
        })
        .collect();
    let mut frontier: Vec<usize> = (0..words.len()).collect();
    for _ in 1..n {
        let mut next = Vec::new();
        for &w in &frontier {
            if words[w].v1.iter().all(Field::is_zero) {
                continue;
            }
            for i in 0..=m {
                if (i == m && words[w].has_m) || words.len() >= MAX_WORDS {
                    continue;
                }
                let v1 = d1.bracket(&words[w].v1, id.row(i));
                let word = if words[w].has_m {
                    // [M c, cᵢ] = −[cᵢ, M c]
                    let lin = left_bracket(d2, &cols[i]).mul(words[w].lin.as_ref().expect("has m")).map(Field::neg);
                    Word { has_m: true, v1, lin: Some(lin), cst: zero.clone() }
                } else if i == m {
                    Word { has_m: true, v1, lin: Some(left_bracket(d2, &words[w].cst)), cst: zero.clone() }
                } else {
                    let cst = d2.bracket(&words[w].cst, &cols[i]);
                    Word { has_m: false, v1, lin: None, cst }
                };
                next.push(words.len());
                words.push(word);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    let values = Matrix::from_rows(words.iter().map(|w| w.v1.clone()).collect()).transpose();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for a in values.kernel() {
        let mut lin = Matrix::<Q>::zeros(n, n);
        let mut cst = zero.clone();
        for (coef, w) in a.iter().zip(&words) {
            if Field::is_zero(coef) {
                continue;
            }
            if let Some(l) = &w.lin {
                for r in 0..n {
                    for s in 0..n {
                        lin.set(r, s, lin.get(r, s).add(&coef.mul(l.get(r, s))));
                    }
                }
            }
            for (x, y) in cst.iter_mut().zip(&w.cst) {
                *x = x.add(&coef.mul(y));
            }
        }
        rows.extend(rows_of(&lin));
        rhs.extend(cst.iter().map(Field::neg));
    }
    (rows, rhs)
}

/// Affine solution space projected to the first `n` of the `nu`
/// unknowns: a particular point and the nonzero kernel projections.
fn solution_space(rows: Vec<Vec<Q>>, rhs: &[Q], nu: usize, n: usize) -> Option<(Vec<Q>, Vec<Vec<Q>>)> {
    let (particular, kernel) = if rows.is_empty() {
        (vec![Q::zero(); nu], whole(nu))
    } else {
        let a = Matrix::from_rows(rows);
        (a.solve(rhs)?, a.kernel())
    };
    let kernel = kernel.into_iter().map(|k| k[..n].to_vec()).filter(|k| !k.iter().all(Field::is_zero)).collect();
    Some((particular[..n].to_vec(), kernel))
}

/// `base + Σ tᵢ kᵢ` with random small `tᵢ`.
fn combine(base: &[Q], kernel: &[Vec<Q>], rng: &mut ChaCha8Rng) -> Vec<Q> {
    let mut c = base.to_vec();
    for k in kernel {
        let t = Q::from_integer(coefficient(rng).into());
        for (x, y) in c.iter_mut().zip(k) {
            *x = x.add(&y.mul(&t));
        }
    }
    c
}

/// Univariate polynomials over `Q`, lowest degree first, no trailing zeros.
type Poly = Vec<Q>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Field::is_zero) {
        p.pop();
    }
    p
}

fn poly_rem(a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    let lead = b.last().expect("nonzero divisor");
    while r.len() >= b.len() {
        let f = r.last().expect("nonempty").div(lead).expect("nonzero lead");
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] = r[shift + i].sub(&f.mul(c));
        }
        r = trim(r);
    }
    r
}

fn monic(p: Poly) -> Poly {
    match p.last() {
        Some(lead) if !lead.is_one() => {
            let lead = lead.clone();
            p.iter().map(|c| c.div(&lead).expect("nonzero lead")).collect()
        }
        _ => p,
    }
}

/// Monic gcd; a linear `a` is only tested at its root.
fn poly_gcd(a: Poly, b: Poly) -> Poly {
    if a.len() == 2 {
        let root = a[0].neg().div(&a[1]).expect("nonzero lead");
        return if Field::is_zero(&eval(&b, &root)) { a } else { vec![Q::one()] };
    }
    let (mut a, mut b) = (monic(a), monic(b));
    while !b.is_empty() {
        let r = monic(poly_rem(&a, &b));
        a = b;
        b = r;
    }
    a
}

fn eval(p: &[Q], x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc.mul(x).add(c))
}

fn divisors(v: &num_bigint::BigInt) -> Option<Vec<num_bigint::BigInt>> {
    use num_traits::{Signed, ToPrimitive};
    let v = v.abs().to_u64().filter(|&v| v <= 1 << 40)?;
    let mut out = Vec::new();
    let mut k = 1u64;
    while k * k <= v {
        if v % k == 0 {
            out.push(k.into());
            if k * k != v {
                out.push((v / k).into());
            }
        }
        k += 1;
    }
    Some(out)
}

/// Rational roots of `p`, by the rational root theorem; `None` when the
/// coefficients are too large to enumerate.
fn rational_roots(p: &Poly) -> Option<Vec<Q>> {
    use num_integer::Integer;
    let mut roots = Vec::new();
    let zeros = p.iter().take_while(|c| Field::is_zero(*c)).count();
    if zeros > 0 {
        roots.push(Q::zero());
    }
    let p = &p[zeros..];
    match p.len() {
        0 | 1 => return Some(roots),
        2 => {
            roots.push(p[0].neg().div(&p[1]).expect("nonzero lead"));
            return Some(roots);
        }
        _ => {}
    }
    let lcm = p.iter().fold(num_bigint::BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<num_bigint::BigInt> = p.iter().map(|c| (c * Q::from_integer(lcm.clone())).to_integer()).collect();
    for num in divisors(&ints[0])? {
        for den in divisors(ints.last().expect("nonempty"))? {
            for x in [Q::new(num.clone(), den.clone()), Q::new(-num.clone(), den.clone())] {
                if Field::is_zero(&eval(p, &x)) && !roots.contains(&x) {
                    roots.push(x);
                }
            }
        }
    }
    Some(roots)
}

fn poly_add(a: &[Q], b: &[Q]) -> Poly {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, x) in out.iter_mut().zip(short) {
        *o = o.add(x);
    }
    trim(out)
}

fn poly_mul(a: &[Q], b: &[Q]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    trim(out)
}

/// Determinant of the submatrix on `rows` × `cols` by cofactor expansion.
fn minor(m: &[Vec<Poly>], rows: &[usize], cols: &[usize]) -> Poly {
    if rows.is_empty() {
        return vec![Q::one()];
    }
    let mut det = Vec::new();
    for (k, &c) in cols.iter().enumerate() {
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = poly_mul(&m[rows[0]][c], &minor(m, &rows[1..], &rest));
        det = if k % 2 == 0 {
            poly_add(&det, &term)
        } else {
            poly_add(&det, &term.iter().map(Field::neg).collect::<Vec<_>>())
        };
    }
    det
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    (k - 1..n)
        .flat_map(|last| {
            subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

/// Largest minors checked for the rank condition on generator images.
const MAX_MINOR: usize = 3;

/// Values `λ` for which `c_m = p + λu` satisfies every relation among
/// bracket words in `e₀..e_m` and `ad c_m` has the rank of `ad e_m`, or
/// `None` if there is none.
fn scale_on_line(
    d1: &Codifferential<Q>,
    d2: &Codifferential<Q>,
    cols: &[Vec<Q>],
    p: &[Q],
    u: &[Q],
    rng: &mut ChaCha8Rng,
) -> Option<Q> {
    let n = d1.dim();
    let m = cols.len();
    let id = Matrix::<Q>::identity(n);
    // Values in d₂ as vectors of λ-coefficients.
    let letter = |i: usize| if i == m { vec![p.to_vec(), u.to_vec()] } else { vec![cols[i].clone()] };
    let bracket = |a: &[Vec<Q>], b: &[Vec<Q>]| {
        let mut out = vec![vec![Q::zero(); n]; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                for (o, v) in out[i + j].iter_mut().zip(d2.bracket(x, y)) {
                    *o = o.add(&v);
                }
            }
        }
        out
    };
    let mut v1: Vec<Vec<Q>> = (0..=m).map(|i| id.row(i).to_vec()).collect();
    let mut v2: Vec<Vec<Vec<Q>>> = (0..=m).map(letter).collect();
    let mut frontier: Vec<usize> = (0..=m).collect();
    for _ in 1..n {
        let mut next = Vec::new();
        for &w in &frontier {
            if v1[w].iter().all(Field::is_zero) {
                continue;
            }
            for i in 0..=m {
                if v1.len() >= MAX_WORDS {
                    break;
                }
                next.push(v1.len());
                v1.push(d1.bracket(&v1[w], id.row(i)));
                v2.push(bracket(&v2[w], &letter(i)));
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    let values = Matrix::from_rows(v1).transpose();
    let mut g: Poly = Vec::new();
    for a in values.kernel() {
        let degree = a.iter().zip(&v2).filter(|(c, _)| !Field::is_zero(*c)).map(|(_, w)| w.len()).max().unwrap_or(0);
        let mut rel = vec![vec![Q::zero(); degree]; n];
        for (coef, w) in a.iter().zip(&v2) {
            if Field::is_zero(coef) {
                continue;
            }
            for (k, vk) in w.iter().enumerate() {
                for (r, x) in vk.iter().enumerate() {
                    rel[r][k] = rel[r][k].add(&coef.mul(x));
                }
            }
        }
        for component in rel {
            g = poly_gcd(g, trim(component));
            if g.len() == 1 {
                return None;
            }
        }
    }
    let rank = left_bracket(d1, id.row(m)).rank();
    if rank < MAX_MINOR {
        let (lp, lu) = (left_bracket(d2, p), left_bracket(d2, u));
        let ad: Vec<Vec<Poly>> =
            (0..n).map(|r| (0..n).map(|s| trim(vec![lp.get(r, s).clone(), lu.get(r, s).clone()])).collect()).collect();
        let sets = subsets(n, rank + 1);
        for rows in &sets {
            for cols in &sets {
                g = poly_gcd(g, minor(&ad, rows, cols));
                if g.len() == 1 {
                    return None;
                }
            }
        }
    }
    if g.is_empty() {
        return Some(Q::from_integer(coefficient(rng).into()));
    }
    let roots = rational_roots(&g)?;
    if roots.is_empty() {
        return None;
    }
    Some(roots[rng.gen_range(0..roots.len())].clone())
}

fn attempt(
    d1: &Codifferential<Q>,
    d2: &Codifferential<Q>,
    generators: usize,
    constraints: &[&[Vec<Q>]],
    rng: &mut ChaCha8Rng,
) -> Option<Matrix<Q>> {
    let n = d1.dim();
    let mut cols: Vec<Vec<Q>> = Vec::with_capacity(n);
    for (m, cons) in constraints.iter().enumerate().take(generators) {
        let (mut rows, mut rhs) = word_relations(d1, d2, &cols, m);
        rows.extend(cons.iter().cloned());
        rhs.resize(rows.len(), Q::zero());
        let (point, kernel) = solution_space(rows, &rhs, n, n)?;
        let p = combine(&point, &kernel, rng);
        let c = match kernel.get(rng.gen_range(0..kernel.len().max(1))) {
            None => p,
            Some(first) => {
                // A direction with at least one guaranteed nonzero term.
                let u = combine(first, &kernel, rng);
                let lambda = scale_on_line(d1, d2, &cols, &p, &u, rng)?;
                p.iter().zip(&u).map(|(x, y)| x.add(&lambda.mul(y))).collect()
            }
        };
        cols.push(c);
    }
    for m in generators..n {
        // Unknowns: columns m..n, column k occupying (k - m)*n .. (k - m + 1)*n.
        let nu = (n - m) * n;
        let mut rows: Vec<Vec<Q>> = Vec::new();
        let mut rhs: Vec<Q> = Vec::new();
        for j in 0..=m {
            for i in 0..j {
                let bracket = d1.apply_basis(&[i, j]);
                let mut eq = vec![vec![Q::zero(); nu]; n];
                let mut known = vec![Q::zero(); n];
                for (k, coef) in bracket.iter().enumerate() {
                    if Field::is_zero(coef) {
                        continue;
                    }
                    if k < m {
                        for r in 0..n {
                            known[r] = known[r].add(&coef.mul(&cols[k][r]));
                        }
                    } else {
                        for (r, row) in eq.iter_mut().enumerate() {
                            row[(k - m) * n + r] = row[(k - m) * n + r].add(coef);
                        }
                    }
                }
                if j < m {
                    let v = d2.bracket(&cols[i], &cols[j]);
                    for r in 0..n {
                        known[r] = known[r].sub(&v[r]);
                    }
                } else {
                    let lb = left_bracket(d2, &cols[i]);
                    for (r, row) in eq.iter_mut().enumerate() {
                        for (x, l) in row.iter_mut().zip(lb.row(r)) {
                            *x = x.sub(l);
                        }
                    }
                }
                for r in 0..n {
                    rows.push(std::mem::take(&mut eq[r]));
                    rhs.push(known[r].neg());
                }
            }
        }
        for k in m..n {
            for a in constraints[k] {
                let mut row = vec![Q::zero(); nu];
                row[(k - m) * n..(k - m + 1) * n].clone_from_slice(a);
                rows.push(row);
                rhs.push(Q::zero());
            }
        }
        let (point, kernel) = solution_space(rows, &rhs, nu, n)?;
        cols.push(combine(&point, &kernel, rng));
    }
    Some(Matrix::from_rows(cols).transpose())
}
