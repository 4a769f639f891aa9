//! Multivariate power series truncated at a fixed total degree.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;

use crate::scalar::Field;

/// Exponent vector of a monomial in `t1..tm`.
pub type Exponents = Vec<u32>;

fn degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

/// A power series in `nvars` variables with every term of total degree
/// above `order` discarded.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<K: Field = BigRational> {
    nvars: usize,
    order: u32,
    coeffs: BTreeMap<Exponents, K>,
}

impl<K: Field> TruncatedSeries<K> {
    pub fn zero(nvars: usize, order: u32) -> Self {
        TruncatedSeries { nvars, order, coeffs: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, order: u32, c: K) -> Self {
        let mut s = Self::zero(nvars, order);
        s.add_term(vec![0; nvars], c);
        s
    }

    /// The variable `t_{i+1}`.
    pub fn var(nvars: usize, order: u32, i: usize) -> Self {
        let mut s = Self::zero(nvars, order);
        let mut e = vec![0; nvars];
        e[i] = 1;
        s.add_term(e, K::one());
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &K)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> K {
        self.coeffs.get(e).cloned().unwrap_or_else(K::zero)
    }

    /// Adds `c·t^e`, ignoring it when its degree exceeds the order.
    pub fn add_term(&mut self, e: Exponents, c: K) {
        assert_eq!(e.len(), self.nvars, "exponent vector has the wrong length");
        if c.is_zero() || degree(&e) > self.order {
            return;
        }
        match self.coeffs.get_mut(&e) {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    self.coeffs.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.coeffs.insert(e, c);
            }
        }
    }

    /// Smallest total degree of a term, `None` for the zero series.
    pub fn min_degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|e| degree(e)).min()
    }

    /// The terms of total degree exactly `k`.
    pub fn homogeneous(&self, k: u32) -> Self {
        let mut s = Self::zero(self.nvars, self.order);
        for (e, c) in &self.coeffs {
            if degree(e) == k {
                s.coeffs.insert(e.clone(), c.clone());
            }
        }
        s
    }

    /// The terms of total degree at most `k`.
    pub fn truncate(&self, k: u32) -> Self {
        let mut s = self.clone();
        s.coeffs.retain(|e, _| degree(e) <= k);
        s
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        let mut s = self.clone();
        for (e, c) in &o.coeffs {
            s.add_term(e.clone(), c.clone());
        }
        s
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&K::from_i64(-1))
    }

    pub fn scale(&self, k: &K) -> Self {
        let mut s = Self::zero(self.nvars, self.order);
        for (e, c) in &self.coeffs {
            s.add_term(e.clone(), c.mul(k));
        }
        s
    }

    /// `self += k·o`.
    pub fn add_scaled(&mut self, o: &Self, k: &K) {
        self.check(o);
        for (e, c) in &o.coeffs {
            self.add_term(e.clone(), c.mul(k));
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        let mut s = Self::zero(self.nvars, self.order);
        if let (Some(a), Some(b)) = (self.min_degree(), o.min_degree()) {
            if a + b > self.order {
                return s;
            }
        }
        for (ea, ca) in &self.coeffs {
            let da = degree(ea);
            for (eb, cb) in &o.coeffs {
                if da + degree(eb) > self.order {
                    continue;
                }
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                s.add_term(e, ca.mul(cb));
            }
        }
        s
    }

    fn check(&self, o: &Self) {
        assert!(self.nvars == o.nvars && self.order == o.order, "series over different rings");
    }
}

/// Every exponent vector in `nvars` variables of total degree `k`, in
/// lexicographic order.
pub fn monomials(nvars: usize, k: u32) -> Vec<Exponents> {
    fn go(nvars: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Exponents>) {
        if prefix.len() + 1 == nvars {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            go(nvars, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if k == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(nvars, k, &mut Vec::new(), &mut out);
    out
}

impl<K: Field + fmt::Display> fmt::Display for TruncatedSeries<K> {
    /// Terms by increasing degree, e.g. `t1*t2 - 1/2*t3^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Exponents, &K)> = self.coeffs.iter().collect();
        terms.sort_by(|a, b| degree(a.0).cmp(&degree(b.0)).then_with(|| b.0.cmp(a.0)));
        for (k, (e, c)) in terms.into_iter().enumerate() {
            let text = c.to_string();
            let (neg, abs) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| if x == 1 { format!("t{}", i + 1) } else { format!("t{}^{}", i + 1, x) })
                .collect();
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else if abs == "1" {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{abs}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type S = TruncatedSeries<BigRational>;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn truncation_discards_high_degree() {
        let t1 = S::var(2, 2, 0);
        let t2 = S::var(2, 2, 1);
        let a = t1.add(&t2);
        let sq = a.mul(&a);
        assert_eq!(sq.to_string(), "t1^2 + 2*t1*t2 + t2^2");
        assert!(sq.mul(&a).is_zero());
        let one = S::constant(2, 2, q(1));
        assert_eq!(one.mul(&sq), sq);
    }

    #[test]
    fn display() {
        let t1 = S::var(3, 3, 0);
        let t3 = S::var(3, 3, 2);
        let s = t1.mul(&t3).sub(&t3.mul(&t3).scale(&BigRational::new(1.into(), 2.into()))).add(&t1);
        assert_eq!(s.to_string(), "t1 + t1*t3 - 1/2*t3^2");
        assert_eq!(S::zero(1, 2).to_string(), "0");
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(3, 2).len(), 6);
        assert_eq!(monomials(15, 3).len(), 680);
        assert_eq!(monomials(0, 0), vec![Vec::<u32>::new()]);
        assert_eq!(monomials(2, 1), vec![vec![1, 0], vec![0, 1]]);
    }

    fn series() -> impl Strategy<Value = S> {
        prop::collection::vec(((0u32..3, 0u32..3, 0u32..3), -4i64..=4), 0..6).prop_map(|ts| {
            let mut s = S::zero(3, 3);
            for ((a, b, c), v) in ts {
                s.add_term(vec![a, b, c], q(v));
            }
            s
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in series(), b in series(), c in series()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert!(a.sub(&a).is_zero());
        }
    }
}
