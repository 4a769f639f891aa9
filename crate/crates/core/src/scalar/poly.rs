//! Sparse multivariate polynomials with integer coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded lexicographic in the polynomial's declared variable order. The
//! leading term is therefore always the last entry of the map.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ScalarError;

/// Exponent vector, one entry per declared variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(Monomial(out))
    }

    fn remap(&self, map: &[usize], nvars: usize) -> Monomial {
        let mut out = vec![0; nvars];
        for (i, e) in self.0.iter().enumerate() {
            out[map[i]] = *e;
        }
        Monomial(out)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug)]
pub struct Polynomial {
    vars: Arc<[String]>,
    terms: BTreeMap<Monomial, BigInt>,
}

fn no_vars() -> Arc<[String]> {
    Arc::from(Vec::<String>::new())
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { vars: no_vars(), terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial(Vec::new()), c);
        }
        Polynomial { vars: no_vars(), terms }
    }

    pub fn from_i64(c: i64) -> Self {
        Self::constant(BigInt::from(c))
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn var(name: &str) -> Self {
        let vars: Arc<[String]> = Arc::from(vec![name.to_string()]);
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(vec![1]), BigInt::one());
        Polynomial { vars, terms }
    }

    /// Builds a polynomial from explicit terms over the given variables.
    /// Zero coefficients are dropped; repeated monomials are summed.
    pub fn from_terms<I>(vars: &[String], terms: I) -> Result<Self, ScalarError>
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut map: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (exps, c) in terms {
            if exps.len() != vars.len() {
                return Err(ScalarError::ExponentLength { expected: vars.len(), found: exps.len() });
            }
            *map.entry(Monomial(exps)).or_insert_with(BigInt::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Polynomial { vars: Arc::from(vars.to_vec()), terms: map })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Names of the variables that occur with a positive exponent.
    pub fn used_vars(&self) -> Vec<String> {
        let mut used = vec![false; self.vars.len()];
        for m in self.terms.keys() {
            for (i, e) in m.0.iter().enumerate() {
                if *e > 0 {
                    used[i] = true;
                }
            }
        }
        self.vars.iter().zip(used).filter(|&(_v, u)| u).map(|(v, _u)| v.clone()).collect()
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(BigInt::zero)
    }

    /// Gcd of the integer coefficients, non-negative.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Re-expresses `self` over `vars`, which must contain every variable of `self`.
    fn reexpress(&self, vars: &Arc<[String]>) -> Polynomial {
        if Arc::ptr_eq(&self.vars, vars) || *self.vars == **vars {
            return Polynomial { vars: vars.clone(), terms: self.terms.clone() };
        }
        let map: Vec<usize> =
            self.vars.iter().map(|v| vars.iter().position(|w| w == v).expect("variable missing from union")).collect();
        let terms = self.terms.iter().map(|(m, c)| (m.remap(&map, vars.len()), c.clone())).collect();
        Polynomial { vars: vars.clone(), terms }
    }

    fn union_vars(a: &Arc<[String]>, b: &Arc<[String]>) -> Arc<[String]> {
        if Arc::ptr_eq(a, b) || a == b || b.is_empty() {
            return a.clone();
        }
        if a.is_empty() {
            return b.clone();
        }
        let mut out: Vec<String> = a.to_vec();
        for v in b.iter() {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        if out.len() == a.len() {
            a.clone()
        } else {
            Arc::from(out)
        }
    }

    fn align(&self, other: &Polynomial) -> (Polynomial, Polynomial) {
        let vars = Self::union_vars(&self.vars, &other.vars);
        (self.reexpress(&vars), other.reexpress(&vars))
    }

    /// Declares additional variables without changing the value.
    pub fn with_vars(&self, vars: &[String]) -> Polynomial {
        let target: Arc<[String]> = Arc::from(vars.to_vec());
        let vars = Self::union_vars(&target, &self.vars);
        self.reexpress(&vars)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let (mut a, b) = self.align(other);
        for (m, c) in b.terms {
            let entry = a.terms.entry(m);
            match entry {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    *o.get_mut() += c;
                    if o.get().is_zero() {
                        o.remove();
                    }
                }
            }
        }
        a
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> Polynomial {
        if k.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let (a, b) = self.align(other);
        let mut terms: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                *terms.entry(ma.mul(mb)).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Polynomial { vars: a.vars, terms }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact division. Returns `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Polynomial::zero());
        }
        if let Some(c) = divisor.as_constant() {
            let mut terms = BTreeMap::new();
            for (m, a) in &self.terms {
                let (q, r) = a.div_rem(&c);
                if !r.is_zero() {
                    return None;
                }
                terms.insert(m.clone(), q);
            }
            return Some(Polynomial { vars: self.vars.clone(), terms });
        }
        let (mut rem, d) = self.align(divisor);
        let (dm, dc) = {
            let (m, c) = d.leading().unwrap();
            (m.clone(), c.clone())
        };
        let mut quot: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.div(&dm)?;
            let (qc, r) = rc.div_rem(&dc);
            if !r.is_zero() {
                return None;
            }
            let term = Polynomial { vars: rem.vars.clone(), terms: BTreeMap::from([(qm.clone(), qc.clone())]) };
            rem = rem.sub(&term.mul(&d));
            quot.insert(qm, qc);
        }
        Some(Polynomial { vars: rem.vars, terms: quot })
    }

    /// Evaluates at a rational point. Every variable that actually occurs must
    /// be assigned.
    pub fn eval<F>(&self, lookup: F) -> Result<BigRational, ScalarError>
    where
        F: Fn(&str) -> Option<BigRational>,
    {
        let mut values: Vec<Option<BigRational>> = Vec::with_capacity(self.vars.len());
        let used = self.used_vars();
        for v in self.vars.iter() {
            if used.contains(v) {
                let val = lookup(v).ok_or_else(|| ScalarError::MissingParameter(v.clone()))?;
                values.push(Some(val));
            } else {
                values.push(None);
            }
        }
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (i, e) in m.0.iter().enumerate() {
                if *e > 0 {
                    t *= num_traits::pow(values[i].clone().unwrap(), *e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Coefficients with respect to variable `var`, lowest degree first. The
    /// coefficient polynomials keep the full variable list (with zero exponent
    /// in `var`).
    fn to_univariate(&self, var: usize) -> Vec<Polynomial> {
        let deg = self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0) as usize;
        let mut coeffs: Vec<BTreeMap<Monomial, BigInt>> = vec![BTreeMap::new(); deg + 1];
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            let e = rest.0[var] as usize;
            rest.0[var] = 0;
            coeffs[e].insert(rest, c.clone());
        }
        coeffs.into_iter().map(|terms| Polynomial { vars: self.vars.clone(), terms }).collect()
    }

    fn from_univariate(vars: &Arc<[String]>, var: usize, coeffs: &[Polynomial]) -> Polynomial {
        let mut terms = BTreeMap::new();
        for (e, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.reexpress(vars).terms {
                let mut m = m.clone();
                m.0[var] += e as u32;
                terms.insert(m, a.clone());
            }
        }
        Polynomial { vars: vars.clone(), terms }
    }

    fn first_used_var(&self) -> Option<usize> {
        (0..self.vars.len()).find(|&i| self.terms.keys().any(|m| m.0[i] > 0))
    }

    /// Normalizes the sign so the leading coefficient is positive.
    pub fn normalize_sign(self) -> Polynomial {
        if self.leading_coeff().is_negative() {
            self.neg()
        } else {
            self
        }
    }

    /// Greatest common divisor, with positive leading coefficient.
    ///
    /// Recursive primitive-PRS: the polynomials are viewed as univariate in
    /// their first occurring variable with coefficients in the remaining ones.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() {
            return other.clone().normalize_sign();
        }
        if other.is_zero() {
            return self.clone().normalize_sign();
        }
        if let Some(c) = self.as_constant() {
            return Polynomial::constant(c.gcd(&other.content()));
        }
        if let Some(c) = other.as_constant() {
            return Polynomial::constant(c.gcd(&self.content()));
        }
        let (a, b) = self.align(other);
        let var = match (a.first_used_var(), b.first_used_var()) {
            (Some(x), Some(y)) => x.min(y),
            _ => unreachable!("non-constant polynomials use a variable"),
        };
        let ua = a.to_univariate(var);
        let ub = b.to_univariate(var);
        let ca = univariate_content(&ua);
        let cb = univariate_content(&ub);
        let c = ca.gcd(&cb);
        let mut pa = divide_all(&ua, &ca);
        let mut pb = divide_all(&ub, &cb);
        if pa.len() < pb.len() {
            std::mem::swap(&mut pa, &mut pb);
        }
        while !(pb.len() == 1 && pb[0].is_zero()) && !pb.is_empty() {
            let r = pseudo_remainder(&pa, &pb);
            let next = if r.is_empty() { Vec::new() } else { divide_all(&r, &univariate_content(&r)) };
            pa = std::mem::replace(&mut pb, next);
        }
        let g = if pa.len() == 1 {
            // gcd is free of the main variable; only the contents matter
            Polynomial::one()
        } else {
            let pc = univariate_content(&pa);
            Polynomial::from_univariate(&a.vars, var, &divide_all(&pa, &pc))
        };
        g.mul(&c).normalize_sign()
    }

    /// Substitutes values for variables; the result is generally a rational
    /// function. Variables absent from `values` stay symbolic.
    pub fn substitute<F>(&self, lookup: F) -> super::Scalar
    where
        F: Fn(&str) -> Option<super::Scalar>,
    {
        use super::Scalar;
        let images: Vec<Scalar> = self.vars.iter().map(|v| lookup(v).unwrap_or_else(|| Scalar::var(v))).collect();
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = Scalar::from(c.clone());
            for (i, e) in m.0.iter().enumerate() {
                if *e > 0 {
                    t = t.mul(&images[i].pow(*e));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }
}

fn trim(mut v: Vec<Polynomial>) -> Vec<Polynomial> {
    while v.last().is_some_and(Polynomial::is_zero) {
        v.pop();
    }
    v
}

fn univariate_content(coeffs: &[Polynomial]) -> Polynomial {
    let mut g = Polynomial::zero();
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        g = g.gcd(c);
        if g.as_constant().is_some_and(|k| k.is_one()) {
            break;
        }
    }
    g
}

fn divide_all(coeffs: &[Polynomial], d: &Polynomial) -> Vec<Polynomial> {
    coeffs.iter().map(|c| c.div_exact(d).expect("content divides every coefficient")).collect()
}

/// Pseudo-remainder of univariate polynomials with polynomial coefficients.
fn pseudo_remainder(a: &[Polynomial], b: &[Polynomial]) -> Vec<Polynomial> {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lc = b[db].clone();
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return r;
    }
    let mut e = r.len() - b.len() + 1;
    while !r.is_empty() && r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        let mut next: Vec<Polynomial> = r.iter().map(|c| c.mul(&lc)).collect();
        for (i, bc) in b.iter().enumerate() {
            next[i + shift] = next[i + shift].sub(&lr.mul(bc));
        }
        r = trim(next);
        e -= 1;
    }
    let f = lc.pow(e as u32);
    r.iter().map(|c| c.mul(&f)).collect()
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        if self.terms.len() != other.terms.len() {
            return false;
        }
        let (a, b) = self.align(other);
        a.terms == b.terms
    }
}

impl Eq for Polynomial {}

impl From<BigInt> for Polynomial {
    fn from(c: BigInt) -> Self {
        Polynomial::constant(c)
    }
}

impl fmt::Display for Polynomial {
    /// Terms in descending graded-lex order, e.g. `p^2 - 2*p*q + 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        if !self.vars.is_sorted() {
            let mut sorted = self.vars.to_vec();
            sorted.sort();
            return self.reexpress(&Arc::from(sorted)).fmt(f);
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[i], e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{}", abs)?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", abs, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Polynomial {
        Polynomial::var("p")
    }
    fn q() -> Polynomial {
        Polynomial::var("q")
    }
    fn c(k: i64) -> Polynomial {
        Polynomial::from_i64(k)
    }

    #[test]
    fn grlex_leading_term() {
        let f = p().mul(&q()).add(&p().pow(2)).add(&q().pow(3));
        let (m, _) = f.leading().unwrap();
        assert_eq!(m.exponents(), &[0, 3]);
        assert_eq!(f.to_string(), "q^3 + p^2 + p*q");
    }

    #[test]
    fn exact_division() {
        let a = p().sub(&q());
        let b = p().add(&q());
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(prod.div_exact(&p()).is_none());
        assert!(c(6).mul(&p()).div_exact(&c(4)).is_none());
    }

    #[test]
    fn gcd_of_products() {
        let a = p().sub(&q());
        let b = p().add(&c(2));
        let x = a.mul(&b).mul(&c(6));
        let y = a.mul(&q().add(&c(1))).mul(&c(4));
        assert_eq!(x.gcd(&y), a.mul(&c(2)).normalize_sign());
        assert_eq!(p().gcd(&q()), c(1));
        let sq = p().sub(&q()).pow(2);
        assert_eq!(sq.gcd(&p().pow(2).sub(&q().pow(2))), p().sub(&q()));
    }

    #[test]
    fn gcd_three_vars() {
        let r = Polynomial::var("r");
        let f = p().mul(&r).sub(&q().pow(2));
        let a = f.mul(&p().sub(&r));
        let b = f.mul(&r).mul(&q().add(&r));
        assert_eq!(a.gcd(&b), f);
    }

    #[test]
    fn equality_ignores_var_order() {
        let a = p().add(&q());
        let b = q().add(&p());
        assert_eq!(a, b);
        assert_ne!(a, p());
    }

    #[test]
    fn eval_needs_used_vars_only() {
        let f = p().pow(2).sub(&q());
        let v = f
            .eval(|n| match n {
                "p" => Some(BigRational::from_integer(3.into())),
                "q" => Some(BigRational::from_integer(9.into())),
                _ => None,
            })
            .unwrap();
        assert!(v.is_zero());
        assert!(matches!(f.eval(|_| None), Err(ScalarError::MissingParameter(_))));
    }
}
