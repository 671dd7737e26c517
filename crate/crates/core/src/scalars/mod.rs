//! Exact coefficient arithmetic.
//!
//! The tower is `Rational -> Poly -> RatFunc -> ExtScalar -> CScalar`:
//! multivariate polynomials over the rationals, their fraction field, one
//! formal square root `s` with a configurable radicand (default `3 + alpha`)
//! and finally complexification by `i`. Everything downstream (forms,
//! differentials, ranks) is generic over [`Scalar`], so the same code also
//! runs over plain `f64` / `Complex64` for floating cross-checks.

mod complex;
mod eval;
mod expr;
mod ext;
mod gcd;
mod poly;
mod ratfunc;
mod rational;

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use thiserror::Error;

pub use complex::CScalar;
pub use eval::{positive_rational_roots, Assignment};
pub use expr::{is_ident_char, parse_expr, parse_ratfunc, ExprContext, ExprError};
pub use ext::{ExtScalar, Radicand};
pub use gcd::poly_gcd;
pub use poly::{Monomial, Poly, Var};
pub use ratfunc::RatFunc;
pub use rational::{parse_rational, rational_sqrt, Rational};

/// Errors raised by exact scalar arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot invert {value}: its norm over the quadratic extension vanishes")]
    ZeroNorm { value: String },
    #[error("pole at the assignment: denominator factor {factor} vanishes")]
    Pole { factor: String },
    #[error("radicand {radicand} evaluates to {value}, which is not the square of a rational; use numeric mode")]
    NotPerfectSquare { radicand: String, value: String },
    #[error("radicand {radicand} evaluates to the negative value {value}")]
    NegativeRadicand { radicand: String, value: String },
    #[error("parameter {0} has no value in the assignment")]
    Unassigned(String),
    #[error("elements over different radicands {0} and {1} cannot be combined")]
    RadicandMismatch(String, String),
}

/// A commutative ring of coefficients.
///
/// `num_traits` supplies the additive and multiplicative identities; the
/// operators are taken by value, so generic code clones where it needs to.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Embeds a rational constant.
    fn from_rational(q: &Rational) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(v.into()))
    }
}

/// A scalar ring that is a field (or where invertibility can be decided).
pub trait Field: Scalar {
    /// Multiplicative inverse, `None` exactly when `self` is zero.
    fn inverse(&self) -> Option<Self>;

    fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        rhs.inverse()
            .map(|inv| self.clone() * inv)
            .ok_or(ScalarError::DivisionByZero)
    }
}

/// Complex conjugation. Real scalar types implement it as the identity.
pub trait Conjugate {
    fn conj(&self) -> Self;
}

/// A field containing `i`, with conjugation `i -> -i`.
pub trait ComplexField: Field + Conjugate {
    fn i() -> Self;
}

impl ComplexField for Complex64 {
    fn i() -> Self {
        Complex64::new(0.0, 1.0)
    }
}

impl ComplexField for CScalar {
    fn i() -> Self {
        CScalar::new(ExtScalar::zero(), ExtScalar::one())
    }
}

/// A ring where division is available whenever the quotient exists in the ring;
/// this is what fraction-free elimination needs.
pub trait ExactDiv: Scalar {
    fn div_exact(&self, rhs: &Self) -> Option<Self>;

    /// Size heuristic used for pivot selection; smaller is preferred.
    fn pivot_cost(&self) -> u64;
}

impl Scalar for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}

impl Field for Rational {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Conjugate for Rational {
    fn conj(&self) -> Self {
        self.clone()
    }
}

impl ExactDiv for Rational {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            None
        } else {
            Some(self / rhs)
        }
    }

    fn pivot_cost(&self) -> u64 {
        self.numer().bits() + self.denom().bits()
    }
}

impl Scalar for f64 {
    fn from_rational(q: &Rational) -> Self {
        rational::to_f64(q)
    }
}

impl Field for f64 {
    fn inverse(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
}

impl Conjugate for f64 {
    fn conj(&self) -> Self {
        *self
    }
}

impl Scalar for Complex64 {
    fn from_rational(q: &Rational) -> Self {
        Complex64::new(rational::to_f64(q), 0.0)
    }
}

impl Field for Complex64 {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.inv())
        }
    }
}

impl Conjugate for Complex64 {
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
}
