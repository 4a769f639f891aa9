use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{rank::rank_rational, Matrix, Scalar};

/// The arithmetic the cochain and matrix code needs from its coefficients.
///
/// Implemented for [`Scalar`] (rational functions in the family parameters)
/// and for [`BigRational`] (parameter-free values, much cheaper).
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;

    fn div(&self, o: &Self) -> Option<Self> {
        Some(self.mul(&o.inv()?))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Lifts a rational constant into the field.
    fn from_rational(r: &BigRational) -> Self;

    /// Rank of a matrix over this field.
    fn matrix_rank(m: &Matrix<Self>) -> usize {
        m.rank()
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
    fn matrix_rank(m: &Matrix<Self>) -> usize {
        rank_rational(m)
    }
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn from_i64(v: i64) -> Self {
        Scalar::from_i64(v)
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        Scalar::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Scalar::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Scalar::mul(self, o)
    }
    fn neg(&self) -> Self {
        Scalar::neg(self)
    }
    fn inv(&self) -> Option<Self> {
        Scalar::inv(self)
    }
    fn from_rational(r: &BigRational) -> Self {
        Scalar::from_rational(r)
    }
}
