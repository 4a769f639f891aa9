//! Exact scalars: rationals and rational functions in family parameters.

mod field;
pub mod matrix;
mod parse;
mod poly;
pub mod rank;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use field::Field;
pub use matrix::Matrix;
pub use parse::{parse_rational, parse_scalar, ParseError};
pub use poly::{Monomial, Polynomial};
pub(crate) use rank::sample_point;
pub use rank::{eval_matrix, rank_exact, rank_generic, rank_rational, GENERIC_RANGE};

/// A parameter assignment.
pub type Point = BTreeMap<String, BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("denominator vanishes at the given point")]
    DenominatorVanishes,
    #[error("no value assigned to parameter `{0}`")]
    MissingParameter(String),
    #[error("matrix entry still depends on parameters: {0}")]
    ParametricEntry(String),
    #[error("no valid sample point found within the retry budget")]
    NoValidSample,
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent vector has length {found}, expected {expected}")]
    ExponentLength { expected: usize, found: usize },
    #[error("rank_generic needs at least 2 trials, got {0}")]
    TooFewTrials(usize),
}

/// A quotient of integer polynomials, kept reduced.
///
/// The numerator and denominator share no polynomial factor, and the
/// denominator's leading coefficient (graded lex) is positive.
#[derive(Clone, Debug)]
pub struct Scalar {
    num: Polynomial,
    den: Polynomial,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { num: Polynomial::zero(), den: Polynomial::one() }
    }

    pub fn one() -> Self {
        Scalar::from_i64(1)
    }

    pub fn from_i64(v: i64) -> Self {
        Scalar { num: Polynomial::from_i64(v), den: Polynomial::one() }
    }

    pub fn var(name: &str) -> Self {
        Scalar { num: Polynomial::var(name), den: Polynomial::one() }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Scalar { num: Polynomial::constant(r.numer().clone()), den: Polynomial::constant(r.denom().clone()) }
    }

    pub fn from_poly(p: Polynomial) -> Self {
        Scalar { num: p, den: Polynomial::one() }
    }

    /// Builds `num / den` and reduces it.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Scalar::zero();
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.as_constant().is_some_and(|c| c.is_one()) {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides numerator"), den.div_exact(&g).expect("gcd divides denominator"))
        };
        if den.leading_coeff().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        Scalar { num, den }
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `Some` when the value does not depend on any parameter.
    pub fn as_rational(&self) -> Option<BigRational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(BigRational::new(n, d))
    }

    pub fn is_parameter_free(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// Parameters that actually occur in the value.
    pub fn params(&self) -> Vec<String> {
        let mut out = self.num.used_vars();
        for v in self.den.used_vars() {
            if !out.contains(&v) {
                out.push(v);
            }
        }
        out
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        if self.den == o.den {
            return Self::reduced(self.num.add(&o.num), self.den.clone());
        }
        Self::reduced(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn neg(&self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        Self::reduced(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(Self::reduced(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Scalar) -> Option<Scalar> {
        Some(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: u32) -> Scalar {
        Scalar { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Exact value at a parameter assignment.
    pub fn eval<F>(&self, lookup: F) -> Result<BigRational, ScalarError>
    where
        F: Fn(&str) -> Option<BigRational>,
    {
        let d = self.den.eval(&lookup)?;
        if Zero::is_zero(&d) {
            return Err(ScalarError::DenominatorVanishes);
        }
        Ok(self.num.eval(&lookup)? / d)
    }

    /// Evaluates against a name → value map.
    pub fn eval_at(&self, assign: &BTreeMap<String, BigRational>) -> Result<BigRational, ScalarError> {
        self.eval(|n| assign.get(n).cloned())
    }

    /// Replaces some parameters by scalars, leaving the others symbolic.
    pub fn substitute(&self, values: &BTreeMap<String, Scalar>) -> Result<Scalar, ScalarError> {
        let lookup = |n: &str| values.get(n).cloned();
        let n = self.num.substitute(lookup);
        let d = self.den.substitute(lookup);
        n.div(&d).ok_or(ScalarError::DenominatorVanishes)
    }
}

impl PartialEq for Scalar {
    /// `a/b == c/d` iff `a·d − c·b` is the zero polynomial.
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den).sub(&other.num.mul(&self.den)).is_zero()
    }
}

impl Eq for Scalar {}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_i64(v)
    }
}

impl From<BigInt> for Scalar {
    fn from(v: BigInt) -> Self {
        Scalar::from_poly(Polynomial::constant(v))
    }
}

impl From<BigRational> for Scalar {
    fn from(v: BigRational) -> Self {
        Scalar::from_rational(&v)
    }
}

impl From<Polynomial> for Scalar {
    fn from(p: Polynomial) -> Self {
        Scalar::from_poly(p)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().is_some_and(|c| c.is_one()) {
            return write!(f, "{}", self.num);
        }
        let num = if self.num.num_terms() > 1 { format!("({})", self.num) } else { self.num.to_string() };
        if self.den.is_constant() {
            write!(f, "{}/{}", num, self.den)
        } else {
            write!(f, "{}/({})", num, self.den)
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $call:expr) => {
        impl std::ops::$tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                $call(self, rhs)
            }
        }
        impl std::ops::$tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                $call(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, Scalar::add);
forward_binop!(Sub, sub, Scalar::sub);
forward_binop!(Mul, mul, Scalar::mul);

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(&self)
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}
