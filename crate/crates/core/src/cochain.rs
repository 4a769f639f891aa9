//! Alternating cochains `Hom(ΛᵏV, V)`, the Nijenhuis–Richardson bracket and
//! basis-change transport.
//!
//! Indices are 0-based internally and 1-based in every textual form.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Deref;

use num_rational::BigRational;
use thiserror::Error;

use crate::scalar::{Field, Matrix, Scalar, ScalarError};

/// Largest supported ambient dimension (input sets are stored as a bitmask).
pub const MAX_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CochainError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("expected a cochain of degree {expected}, found degree {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("input indices must be strictly increasing")]
    UnsortedInputs,
    #[error("basis change matrix is singular")]
    SingularMatrix,
    #[error("bracket of two degree-0 cochains is undefined")]
    NegativeDegree,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// The basis element `e_{i₁}∧…∧e_{i_k} ↦ e_out` of `Cᵏ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisTerm {
    mask: u32,
    output: u8,
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask & (1 << i) != 0)
}

fn below(mask: u32, i: usize) -> u32 {
    (mask & ((1u32 << i) - 1)).count_ones()
}

impl BasisTerm {
    /// `inputs` must be strictly increasing, all indices 0-based.
    pub fn new(inputs: &[usize], output: usize) -> Result<Self, CochainError> {
        let mut mask = 0u32;
        for w in inputs.windows(2) {
            if w[0] >= w[1] {
                return Err(CochainError::UnsortedInputs);
            }
        }
        for &i in inputs {
            if i >= MAX_DIM {
                return Err(CochainError::IndexOutOfRange { index: i + 1, dim: MAX_DIM });
            }
            mask |= 1 << i;
        }
        if output >= MAX_DIM {
            return Err(CochainError::IndexOutOfRange { index: output + 1, dim: MAX_DIM });
        }
        Ok(BasisTerm { mask, output: output as u8 })
    }

    fn from_mask(mask: u32, output: usize) -> Self {
        BasisTerm { mask, output: output as u8 }
    }

    pub fn inputs(&self) -> Vec<usize> {
        bits(self.mask).collect()
    }

    pub fn output(&self) -> usize {
        self.output as usize
    }

    pub fn degree(&self) -> usize {
        self.mask.count_ones() as usize
    }

    fn max_index(&self) -> usize {
        let top = 32 - self.mask.leading_zeros() as usize;
        top.max(self.output as usize + 1)
    }
}

impl Ord for BasisTerm {
    /// Lexicographic on the sorted input list, then on the output.
    fn cmp(&self, other: &Self) -> Ordering {
        bits(self.mask).cmp(bits(other.mask)).then(self.output.cmp(&other.output))
    }
}

impl PartialOrd for BasisTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BasisTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in bits(self.mask) {
            write!(f, "{} ", i + 1)?;
        }
        write!(f, "-> {}]", self.output + 1)
    }
}

/// All `k`-subsets of `0..n` as bitmasks, in lexicographic order of their
/// sorted element lists.
fn subsets(n: usize, k: usize) -> Vec<u32> {
    fn rec(start: usize, n: usize, k: usize, acc: u32, out: &mut Vec<u32>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..n {
            if n - i < k {
                break;
            }
            rec(i + 1, n, k - 1, acc | (1 << i), out);
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, 0, &mut out);
    }
    out
}

/// The basis of `Cᵏ` for ambient dimension `n`, in canonical order.
pub fn basis(n: usize, k: usize) -> Vec<BasisTerm> {
    subsets(n, k).into_iter().flat_map(|m| (0..n).map(move |o| BasisTerm::from_mask(m, o))).collect()
}

/// A sparse element of `Cᵏ = Hom(ΛᵏV, V)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain<K = Scalar> {
    dim: usize,
    degree: usize,
    terms: BTreeMap<BasisTerm, K>,
}

impl<K: Field> Cochain<K> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds {MAX_DIM}");
        Cochain { dim, degree, terms: BTreeMap::new() }
    }

    /// The identity map as an element of `C¹`.
    pub fn identity(dim: usize) -> Self {
        let mut c = Self::zero(dim, 1);
        for i in 0..dim {
            c.add_term(BasisTerm::from_mask(1 << i, i), K::one());
        }
        c
    }

    /// A vector of `V = C⁰`.
    pub fn vector(coords: &[K]) -> Self {
        let mut c = Self::zero(coords.len(), 0);
        for (i, v) in coords.iter().enumerate() {
            c.add_term(BasisTerm::from_mask(0, i), v.clone());
        }
        c
    }

    /// Builds a cochain from 1-based `(inputs, output, coefficient)` triples.
    /// Repeated terms are summed.
    pub fn from_terms<'a, I>(dim: usize, degree: usize, terms: I) -> Result<Self, CochainError>
    where
        I: IntoIterator<Item = (&'a [usize], usize, K)>,
    {
        let mut c = Self::zero(dim, degree);
        for (inputs, out, coeff) in terms {
            if inputs.len() != degree {
                return Err(CochainError::DegreeMismatch { expected: degree, found: inputs.len() });
            }
            for &i in inputs.iter().chain(std::iter::once(&out)) {
                if i == 0 || i > dim {
                    return Err(CochainError::IndexOutOfRange { index: i, dim });
                }
            }
            let zero_based: Vec<usize> = inputs.iter().map(|i| i - 1).collect();
            c.add_term(BasisTerm::new(&zero_based, out - 1)?, coeff);
        }
        Ok(c)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisTerm, &K)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, t: &BasisTerm) -> K {
        self.terms.get(t).cloned().unwrap_or_else(K::zero)
    }

    /// Adds `c` to the coefficient of `t`, dropping the term if it cancels.
    pub fn add_term(&mut self, t: BasisTerm, c: K) {
        debug_assert_eq!(t.degree(), self.degree);
        debug_assert!(t.max_index() <= self.dim);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&t) {
            Some(v) => {
                *v = v.add(&c);
                if v.is_zero() {
                    self.terms.remove(&t);
                }
            }
            None => {
                self.terms.insert(t, c);
            }
        }
    }

    fn check_same_space(&self, o: &Self) -> Result<(), CochainError> {
        if self.dim != o.dim {
            return Err(CochainError::DimensionMismatch(self.dim, o.dim));
        }
        if self.degree != o.degree {
            return Err(CochainError::DegreeMismatch { expected: self.degree, found: o.degree });
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, CochainError> {
        self.check_same_space(o)?;
        let mut out = self.clone();
        for (t, c) in &o.terms {
            out.add_term(*t, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self, CochainError> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn scale(&self, k: &K) -> Self {
        if k.is_zero() {
            return Self::zero(self.dim, self.degree);
        }
        self.map_coeffs(|c| c.mul(k))
    }

    /// Applies `f` to every coefficient, dropping those that become zero.
    pub fn map_coeffs<L: Field>(&self, f: impl Fn(&K) -> L) -> Cochain<L> {
        let mut out = Cochain::zero(self.dim, self.degree);
        for (t, c) in &self.terms {
            out.add_term(*t, f(c));
        }
        out
    }

    pub fn try_map_coeffs<L: Field, E>(&self, f: impl Fn(&K) -> Result<L, E>) -> Result<Cochain<L>, E> {
        let mut out = Cochain::zero(self.dim, self.degree);
        for (t, c) in &self.terms {
            out.add_term(*t, f(c)?);
        }
        Ok(out)
    }

    /// Coordinates in the canonical basis of `Cᵏ`.
    pub fn coords(&self) -> Vec<K> {
        basis(self.dim, self.degree).iter().map(|t| self.coeff(t)).collect()
    }

    pub fn from_coords(dim: usize, degree: usize, coords: &[K]) -> Self {
        let b = basis(dim, degree);
        assert_eq!(b.len(), coords.len(), "coordinate vector has the wrong length");
        let mut c = Self::zero(dim, degree);
        for (t, v) in b.into_iter().zip(coords) {
            c.add_term(t, v.clone());
        }
        c
    }

    /// Value on basis vectors `e_{i₁},…,e_{i_k}` (0-based, any order) as a
    /// coordinate vector of `V`.
    pub fn apply_basis(&self, inputs: &[usize]) -> Vec<K> {
        let mut out = vec![K::zero(); self.dim];
        if inputs.len() != self.degree {
            return out;
        }
        let mut mask = 0u32;
        let mut inversions = 0;
        for (pos, &i) in inputs.iter().enumerate() {
            if mask & (1 << i) != 0 {
                return out;
            }
            mask |= 1 << i;
            inversions += inputs[..pos].iter().filter(|&&j| j > i).count();
        }
        for (t, c) in self.terms.range(BasisTerm::from_mask(mask, 0)..=BasisTerm::from_mask(mask, self.dim - 1)) {
            out[t.output()] = if inversions % 2 == 0 { c.clone() } else { c.neg() };
        }
        out
    }

    /// Value on arbitrary vectors, by multilinearity.
    pub fn apply(&self, vectors: &[Vec<K>]) -> Vec<K> {
        assert_eq!(vectors.len(), self.degree, "wrong number of arguments");
        let cols = Matrix::from_fn(self.dim, self.degree, |i, j| vectors[j][i].clone());
        let mut minors: HashMap<u32, K> = HashMap::new();
        let mut out = vec![K::zero(); self.dim];
        for (t, c) in &self.terms {
            let m = minors.entry(t.mask).or_insert_with(|| minor(&cols, t.mask, full_mask(self.degree)));
            if !m.is_zero() {
                out[t.output()] = out[t.output()].add(&c.mul(m));
            }
        }
        out
    }
}

impl Cochain<Scalar> {
    /// Specializes every coefficient at a parameter point.
    pub fn eval_at(&self, point: &BTreeMap<String, BigRational>) -> Result<Cochain<BigRational>, ScalarError> {
        self.try_map_coeffs(|c| c.eval_at(point))
    }

    /// Substitutes some parameters, leaving the others symbolic.
    pub fn substitute(&self, values: &BTreeMap<String, Scalar>) -> Result<Self, ScalarError> {
        self.try_map_coeffs(|c| c.substitute(values))
    }

    /// Parameters occurring in any coefficient, sorted.
    pub fn params(&self) -> Vec<String> {
        let mut out: Vec<String> = self.terms.values().flat_map(Scalar::params).collect();
        out.sort();
        out.dedup();
        out
    }
}

impl Cochain<BigRational> {
    pub fn to_scalar(&self) -> Cochain<Scalar> {
        self.map_coeffs(Scalar::from_rational)
    }
}

fn full_mask(k: usize) -> u32 {
    (1u32 << k) - 1
}

/// Determinant of the submatrix on the given row and column sets.
fn minor<K: Field>(m: &Matrix<K>, rows: u32, cols: u32) -> K {
    let r: Vec<usize> = bits(rows).collect();
    let c: Vec<usize> = bits(cols).collect();
    if r.is_empty() {
        return K::one();
    }
    if r.len() == 1 {
        return m.get(r[0], c[0]).clone();
    }
    Matrix::from_fn(r.len(), c.len(), |i, j| m.get(r[i], c[j]).clone()).determinant()
}

fn sign<K: Field>(c: K, negative: bool) -> K {
    if negative {
        c.neg()
    } else {
        c
    }
}

/// The insertion `φ∘̄ψ`: the sum over `(q, p−1)`-shuffles of
/// `sign(σ)·φ(ψ(x_σ(1),…,x_σ(q)), x_σ(q+1),…)`.
pub fn compose<K: Field>(phi: &Cochain<K>, psi: &Cochain<K>) -> Result<Cochain<K>, CochainError> {
    if phi.dim != psi.dim {
        return Err(CochainError::DimensionMismatch(phi.dim, psi.dim));
    }
    if phi.degree + psi.degree == 0 {
        return Err(CochainError::NegativeDegree);
    }
    let mut out = Cochain::zero(phi.dim, phi.degree + psi.degree - 1);
    if phi.degree == 0 {
        return Ok(out);
    }
    for (pt, pc) in &phi.terms {
        for (qt, qc) in &psi.terms {
            let c = qt.output();
            if pt.mask & (1 << c) == 0 {
                continue;
            }
            let b = pt.mask & !(1 << c);
            let a = qt.mask;
            if a & b != 0 {
                continue;
            }
            // Move e_c to the front of φ's sorted arguments, then count the
            // inversions of the shuffle (A, B).
            let swaps = below(b, c) + bits(a).map(|i| below(b, i)).sum::<u32>();
            out.add_term(BasisTerm::from_mask(a | b, pt.output()), sign(pc.mul(qc), swaps % 2 == 1));
        }
    }
    Ok(out)
}

/// The graded bracket `[φ,ψ] = φ∘̄ψ − (−1)^{(p−1)(q−1)} ψ∘̄φ`.
///
/// When `p+q−1` exceeds the dimension the result is the zero cochain of that
/// degree.
pub fn nr_bracket<K: Field>(phi: &Cochain<K>, psi: &Cochain<K>) -> Result<Cochain<K>, CochainError> {
    let a = compose(phi, psi)?;
    let b = compose(psi, phi)?;
    let odd = phi.degree.is_multiple_of(2) && psi.degree.is_multiple_of(2);
    if odd {
        a.add(&b)
    } else {
        a.sub(&b)
    }
}

/// A degree-2 cochain viewed as the structure constants of a bracket.
#[derive(Clone, Debug, PartialEq)]
pub struct Codifferential<K = Scalar>(Cochain<K>);

impl<K: Field> Codifferential<K> {
    pub fn new(c: Cochain<K>) -> Result<Self, CochainError> {
        if c.degree != 2 {
            return Err(CochainError::DegreeMismatch { expected: 2, found: c.degree });
        }
        Ok(Codifferential(c))
    }

    pub fn zero(dim: usize) -> Self {
        Codifferential(Cochain::zero(dim, 2))
    }

    /// From 1-based `(i, j, k, c)` meaning `c·ψ_{ij}→k`, `i < j`.
    pub fn from_psi(dim: usize, terms: &[(usize, usize, usize, K)]) -> Result<Self, CochainError> {
        let pairs: Vec<[usize; 2]> = terms.iter().map(|t| [t.0, t.1]).collect();
        let c = Cochain::from_terms(dim, 2, pairs.iter().zip(terms).map(|(p, t)| (&p[..], t.2, t.3.clone())))?;
        Ok(Codifferential(c))
    }

    pub fn as_cochain(&self) -> &Cochain<K> {
        &self.0
    }

    pub fn into_cochain(self) -> Cochain<K> {
        self.0
    }

    /// `[d,d]`, which is twice the Jacobiator.
    pub fn square(&self) -> Cochain<K> {
        nr_bracket(&self.0, &self.0).expect("same space")
    }

    pub fn jacobi_check(&self) -> bool {
        compose(&self.0, &self.0).expect("same space").is_zero()
    }

    /// The coboundary `D(φ) = [d,φ]`; on `C¹` this is
    /// `d(φx,y) + d(x,φy) − φ(d(x,y))`.
    pub fn coboundary(&self, phi: &Cochain<K>) -> Result<Cochain<K>, CochainError> {
        nr_bracket(&self.0, phi)
    }

    /// The bracket of two vectors.
    pub fn bracket(&self, x: &[K], y: &[K]) -> Vec<K> {
        self.0.apply(&[x.to_vec(), y.to_vec()])
    }

    pub fn map_coeffs<L: Field>(&self, f: impl Fn(&K) -> L) -> Codifferential<L> {
        Codifferential(self.0.map_coeffs(f))
    }
}

impl Codifferential<Scalar> {
    pub fn eval_at(&self, point: &BTreeMap<String, BigRational>) -> Result<Codifferential<BigRational>, ScalarError> {
        Ok(Codifferential(self.0.eval_at(point)?))
    }

    pub fn substitute(&self, values: &BTreeMap<String, Scalar>) -> Result<Self, ScalarError> {
        Ok(Codifferential(self.0.substitute(values)?))
    }
}

impl Codifferential<BigRational> {
    pub fn to_scalar(&self) -> Codifferential<Scalar> {
        Codifferential(self.0.to_scalar())
    }
}

impl<K> Deref for Codifferential<K> {
    type Target = Cochain<K>;
    fn deref(&self) -> &Cochain<K> {
        &self.0
    }
}

impl<K: Field> TryFrom<Cochain<K>> for Codifferential<K> {
    type Error = CochainError;
    fn try_from(c: Cochain<K>) -> Result<Self, CochainError> {
        Codifferential::new(c)
    }
}

/// Push-forward of a cochain along `G`:
/// `φ′(x₁,…,x_k) = G·φ(G⁻¹x₁,…,G⁻¹x_k)`.
pub fn transport<K: Field>(phi: &Cochain<K>, g: &Matrix<K>) -> Result<Cochain<K>, CochainError> {
    let n = phi.dim;
    if g.rows() != n || g.cols() != n {
        return Err(CochainError::DimensionMismatch(n, g.rows()));
    }
    let h = g.inverse().ok_or(CochainError::SingularMatrix)?;
    Ok(transport_with_inverse(phi, g, &h))
}

pub(crate) fn transport_with_inverse<K: Field>(phi: &Cochain<K>, g: &Matrix<K>, h: &Matrix<K>) -> Cochain<K> {
    let n = phi.dim;
    let mut out = Cochain::zero(n, phi.degree);
    let mut minors: HashMap<(u32, u32), K> = HashMap::new();
    for t in subsets(n, phi.degree) {
        let mut image = vec![K::zero(); n];
        for (pt, pc) in &phi.terms {
            let m = minors.entry((pt.mask, t)).or_insert_with(|| minor(h, pt.mask, t)).clone();
            if m.is_zero() {
                continue;
            }
            let v = pc.mul(&m);
            for (row, slot) in image.iter_mut().enumerate() {
                let gk = g.get(row, pt.output());
                if !gk.is_zero() {
                    *slot = slot.add(&gk.mul(&v));
                }
            }
        }
        for (o, c) in image.into_iter().enumerate() {
            out.add_term(BasisTerm::from_mask(t, o), c);
        }
    }
    out
}

/// Push-forward of a structure along an invertible basis change.
pub fn transform<K: Field>(d: &Codifferential<K>, g: &Matrix<K>) -> Result<Codifferential<K>, CochainError> {
    Ok(Codifferential(transport(&d.0, g)?))
}

impl<K: Field> fmt::Display for Cochain<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (t, c)) in self.terms.iter().enumerate() {
            let text = c.to_string();
            let (neg, body) = match text.strip_prefix('-') {
                Some(rest) if !rest.contains([' ']) => (true, rest.to_string()),
                _ => (false, text),
            };
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if body != "1" {
                if body.contains([' ', '/']) {
                    write!(f, "({body})*")?;
                } else {
                    write!(f, "{body}*")?;
                }
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl<K: Field> fmt::Display for Codifferential<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_scalar;
    use proptest::prelude::*;

    type Q = BigRational;

    fn q(v: i64) -> Q {
        Q::from_integer(v.into())
    }

    fn psi(dim: usize, terms: &[(usize, usize, usize, i64)]) -> Codifferential<Q> {
        let t: Vec<_> = terms.iter().map(|&(i, j, k, c)| (i, j, k, q(c))).collect();
        Codifferential::from_psi(dim, &t).unwrap()
    }

    fn one_term(dim: usize, inputs: &[usize], out: usize, c: i64) -> Cochain<Q> {
        Cochain::from_terms(dim, inputs.len(), [(inputs, out, q(c))]).unwrap()
    }

    #[test]
    fn basis_order_and_size() {
        let b = basis(3, 2);
        assert_eq!(b.len(), 9);
        assert_eq!(b[0].to_string(), "[1 2 -> 1]");
        assert_eq!(b[3].to_string(), "[1 3 -> 1]");
        assert_eq!(b[8].to_string(), "[2 3 -> 3]");
        assert!(b.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(basis(5, 2).len(), 50);
        assert_eq!(basis(5, 0).len(), 5);
    }

    #[test]
    fn jacobi_examples() {
        let sl2 = psi(3, &[(1, 2, 3, 1), (1, 3, 2, 1), (2, 3, 1, 1)]);
        assert!(sl2.jacobi_check());
        assert!(psi(3, &[(1, 2, 3, 1)]).square().is_zero());
        let bad = psi(3, &[(1, 2, 3, 1), (1, 3, 1, 1)]);
        assert!(!bad.jacobi_check());
        assert!(!bad.square().is_zero());
    }

    #[test]
    fn bracket_with_identity_is_d() {
        let d = psi(3, &[(1, 2, 3, 2), (1, 3, 1, -1), (2, 3, 2, 5)]);
        let id = Cochain::identity(3);
        assert_eq!(d.coboundary(&id).unwrap(), *d.as_cochain());
    }

    #[test]
    fn coboundary_examples() {
        let d = psi(3, &[(2, 3, 1, 1)]);
        let phi = one_term(3, &[1], 1, 1);
        assert_eq!(d.coboundary(&phi).unwrap(), one_term(3, &[2, 3], 1, -1));
        let v = Cochain::vector(&[q(1), q(0), q(0)]);
        assert!(d.coboundary(&v).unwrap().is_zero());
        // D(v)(x) = d(v, x)
        let w = Cochain::vector(&[q(0), q(1), q(0)]);
        assert_eq!(d.coboundary(&w).unwrap(), one_term(3, &[3], 1, 1));
    }

    /// Direct expansion of the derivation formula on basis vectors.
    #[test]
    fn coboundary_on_c1_is_derivation_defect() {
        let d = psi(3, &[(1, 2, 3, 1), (1, 3, 2, 2), (2, 3, 1, -1), (1, 3, 3, 1)]);
        let phi = Cochain::from_coords(3, 1, &(0..9).map(|i| q(i * i - 3 * i + 1)).collect::<Vec<_>>());
        let dphi = d.coboundary(&phi).unwrap();
        let e = |i: usize| (0..3).map(|j| if i == j { q(1) } else { q(0) }).collect::<Vec<_>>();
        for x in 0..3 {
            for y in 0..3 {
                let lhs = dphi.apply_basis(&[x, y]);
                let px = phi.apply(&[e(x)]);
                let py = phi.apply(&[e(y)]);
                let a = d.bracket(&px, &e(y));
                let b = d.bracket(&e(x), &py);
                let c = phi.apply(&[d.bracket(&e(x), &e(y))]);
                let rhs: Vec<Q> = (0..3).map(|i| &a[i] + &b[i] - &c[i]).collect();
                assert_eq!(lhs, rhs, "({x},{y})");
            }
        }
    }

    #[test]
    fn transform_examples() {
        let d = psi(3, &[(1, 2, 3, 1)]);
        assert_eq!(transform(&d, &Matrix::identity(3)).unwrap(), d);
        let g = Matrix::diagonal(vec![q(1), q(1), q(7)]);
        assert_eq!(transform(&d, &g).unwrap(), psi(3, &[(1, 2, 3, 7)]));
        let swap = Matrix::from_fn(3, 3, |i, j| {
            let s = |k: usize| [1, 0, 2][k];
            if s(j) == i {
                q(1)
            } else {
                q(0)
            }
        });
        assert_eq!(transform(&d, &swap).unwrap(), psi(3, &[(1, 2, 3, -1)]));
        let singular = Matrix::<Q>::zeros(3, 3);
        assert_eq!(transform(&d, &singular), Err(CochainError::SingularMatrix));
    }

    #[test]
    fn transform_symbolic() {
        let d = Codifferential::from_psi(3, &[(1, 2, 3, parse_scalar("t").unwrap())]).unwrap();
        let g = Matrix::diagonal(vec![Scalar::one(), Scalar::one(), parse_scalar("1/t").unwrap()]);
        let target = Codifferential::from_psi(3, &[(1, 2, 3, Scalar::one())]).unwrap();
        assert_eq!(transform(&d, &g).unwrap(), target);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(Cochain::from_terms(3, 2, [(&[2usize, 1][..], 1, q(1))]), Err(CochainError::UnsortedInputs)));
        assert!(matches!(
            Cochain::from_terms(3, 2, [(&[1usize, 4][..], 1, q(1))]),
            Err(CochainError::IndexOutOfRange { index: 4, dim: 3 })
        ));
        let a = Cochain::<Q>::zero(3, 2);
        let b = Cochain::<Q>::zero(4, 2);
        assert!(nr_bracket(&a, &b).is_err());
    }

    #[test]
    fn display() {
        let d = psi(3, &[(1, 2, 3, 2), (1, 3, 1, -1), (2, 3, 2, 1)]);
        assert_eq!(d.to_string(), "2*[1 2 -> 3] - [1 3 -> 1] + [2 3 -> 2]");
        let s = Codifferential::from_psi(2, &[(1, 2, 1, parse_scalar("p-q").unwrap())]).unwrap();
        assert_eq!(s.to_string(), "(p - q)*[1 2 -> 1]");
    }

    #[test]
    fn overflow_degree_is_zero() {
        let a = Cochain::<Q>::from_coords(3, 3, &[q(1), q(2), q(3)]);
        let r = nr_bracket(&a, &a).unwrap();
        assert_eq!(r.degree(), 5);
        assert!(r.is_zero());
    }

    fn cochain(dim: usize, degree: usize) -> impl Strategy<Value = Cochain<Q>> {
        let len = basis(dim, degree).len();
        prop::collection::vec(prop_oneof![2 => Just(0i64), 1 => -3i64..=3], len)
            .prop_map(move |v| Cochain::from_coords(dim, degree, &v.into_iter().map(q).collect::<Vec<_>>()))
    }

    fn graded_pair() -> impl Strategy<Value = (Cochain<Q>, Cochain<Q>)> {
        (1usize..=4, 0usize..=3, 0usize..=3)
            .prop_filter("not both vectors", |(_, p, q)| p + q > 0)
            .prop_flat_map(|(n, p, q)| (cochain(n, p.min(n)), cochain(n, q.min(n))))
            .prop_filter("not both vectors", |(a, b)| a.degree() + b.degree() > 0)
    }

    fn triple() -> impl Strategy<Value = (Cochain<Q>, Cochain<Q>, Cochain<Q>)> {
        (2usize..=4, 1usize..=2, 1usize..=2, 1usize..=2)
            .prop_flat_map(|(n, a, b, c)| (cochain(n, a), cochain(n, b), cochain(n, c)))
    }

    fn invertible(n: usize) -> impl Strategy<Value = Matrix<Q>> {
        prop::collection::vec(-2i64..=2, n * n)
            .prop_map(move |v| Matrix::from_fn(n, n, |i, j| q(v[i * n + j])))
            .prop_filter("invertible", |m| !m.determinant().is_zero())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn graded_antisymmetry((a, b) in graded_pair()) {
            let (p, r) = (a.degree() as i64, b.degree() as i64);
            let lhs = nr_bracket(&a, &b).unwrap();
            let rhs = nr_bracket(&b, &a).unwrap();
            let sum = if ((p - 1) * (r - 1)).rem_euclid(2) == 0 { lhs.add(&rhs) } else { lhs.sub(&rhs) };
            prop_assert!(sum.unwrap().is_zero());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        /// (−1)^{(a−1)(c−1)}[x,[y,z]] + cyclic = 0 for degrees a, b, c.
        #[test]
        fn graded_jacobi((x, y, z) in triple()) {
            let s = |u: &Cochain<Q>, v: &Cochain<Q>| ((u.degree() - 1) * (v.degree() - 1)) % 2 == 1;
            let term = |u: &Cochain<Q>, v: &Cochain<Q>, w: &Cochain<Q>| {
                let r = nr_bracket(u, &nr_bracket(v, w).unwrap()).unwrap();
                if s(u, w) { r.neg() } else { r }
            };
            let total = term(&x, &y, &z).add(&term(&y, &z, &x)).unwrap().add(&term(&z, &x, &y)).unwrap();
            prop_assert!(total.is_zero());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn transform_preserves_jacobi(g in invertible(3), c in cochain(3, 2)) {
            let d = Codifferential::new(c).unwrap();
            let moved = transform(&d, &g).unwrap();
            prop_assert_eq!(d.jacobi_check(), moved.jacobi_check());
            let back = transform(&moved, &g.inverse().unwrap()).unwrap();
            prop_assert_eq!(back, d);
        }

        #[test]
        fn transform_composes(a in invertible(3), b in invertible(3), c in cochain(3, 2)) {
            let d = Codifferential::new(c).unwrap();
            let two_step = transform(&transform(&d, &a).unwrap(), &b).unwrap();
            prop_assert_eq!(two_step, transform(&d, &b.mul(&a)).unwrap());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn naturality(g in invertible(3), c in cochain(3, 2), phi in (0usize..=2).prop_flat_map(|k| cochain(3, k))) {
            let d = Codifferential::new(c).unwrap();
            let lhs = transform(&d, &g).unwrap().coboundary(&transport(&phi, &g).unwrap()).unwrap();
            let rhs = transport(&d.coboundary(&phi).unwrap(), &g).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn transform_matches_pointwise_definition(g in invertible(3), c in cochain(3, 2)) {
            let d = Codifferential::new(c).unwrap();
            let moved = transform(&d, &g).unwrap();
            let h = g.inverse().unwrap();
            for x in 0..3 {
                for y in 0..3 {
                    let hx = h.column(x);
                    let hy = h.column(y);
                    let expect = g.mul_vec(&d.bracket(&hx, &hy));
                    prop_assert_eq!(moved.apply_basis(&[x, y]), expect);
                }
            }
        }
    }
}
