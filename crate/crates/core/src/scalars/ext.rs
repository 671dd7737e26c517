use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::ratfunc::owned_ops;
use super::{rational_sqrt, Conjugate, Field, Poly, RatFunc, Rational, Scalar, ScalarError, Var};

/// The radicand `r` of the formal square root `s`, with `s^2 = r` and `s`
/// declared to be the positive real root.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Radicand(Arc<Poly>);

impl Radicand {
    pub fn new(r: Poly) -> Radicand {
        Radicand(Arc::new(r))
    }

    /// `3 + alpha`.
    pub fn default_alpha() -> Radicand {
        Radicand::new(&Poly::from_int(3) + &Poly::var("alpha"))
    }

    pub fn poly(&self) -> &Poly {
        &self.0
    }
}

impl fmt::Debug for Radicand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sqrt({})", self.0)
    }
}

/// `a + b*s` with `a`, `b` rational functions and `s^2 = r`.
///
/// The radicand is only carried while `b != 0`; elements with `b = 0` combine
/// with anything.
#[derive(Clone, Hash)]
pub struct ExtScalar {
    a: RatFunc,
    b: RatFunc,
    radicand: Option<Radicand>,
}

impl ExtScalar {
    pub fn new(a: RatFunc, b: RatFunc, radicand: Radicand) -> ExtScalar {
        let radicand = (!b.is_zero()).then_some(radicand);
        ExtScalar { a, b, radicand }
    }

    pub fn from_ratfunc(a: RatFunc) -> ExtScalar {
        ExtScalar {
            a,
            b: RatFunc::zero(),
            radicand: None,
        }
    }

    /// The square root `s` itself.
    pub fn sqrt_of(radicand: Radicand) -> ExtScalar {
        ExtScalar::new(RatFunc::zero(), RatFunc::one(), radicand)
    }

    pub fn rational_part(&self) -> &RatFunc {
        &self.a
    }

    pub fn radical_part(&self) -> &RatFunc {
        &self.b
    }

    pub fn radicand(&self) -> Option<&Radicand> {
        self.radicand.as_ref()
    }

    /// The value as a rational function when it is free of `s`.
    pub fn as_ratfunc(&self) -> Option<&RatFunc> {
        self.b.is_zero().then_some(&self.a)
    }

    /// `a - b*s`.
    pub fn conj_radical(&self) -> ExtScalar {
        ExtScalar {
            a: self.a.clone(),
            b: -&self.b,
            radicand: self.radicand.clone(),
        }
    }

    /// `a^2 - b^2 r`, the product with the radical conjugate.
    pub fn norm(&self) -> RatFunc {
        match &self.radicand {
            None => &self.a * &self.a,
            Some(r) => {
                let r = RatFunc::from_poly(r.poly().clone());
                &(&self.a * &self.a) - &(&(&self.b * &self.b) * &r)
            }
        }
    }

    /// Inverse by rationalizing with the radical conjugate.
    pub fn recip(&self) -> Result<ExtScalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let n = self.norm();
        let inv = n.recip().map_err(|_| ScalarError::ZeroNorm {
            value: self.to_string(),
        })?;
        let c = self.conj_radical();
        Ok(ExtScalar::build(&c.a * &inv, &c.b * &inv, c.radicand))
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        let mut v = self.a.vars();
        v.extend(self.b.vars());
        v
    }

    /// Substitutes into coefficients and radicand. When the radicand becomes the
    /// square of a rational constant, `s` is replaced by its positive root.
    pub fn substitute(&self, map: &HashMap<Var, Poly>) -> Result<ExtScalar, ScalarError> {
        let a = self.a.substitute(map)?;
        let b = self.b.substitute(map)?;
        let Some(r) = &self.radicand else {
            return Ok(ExtScalar::from_ratfunc(a));
        };
        let r = r.poly().substitute(map);
        if let Some(value) = r.constant_value() {
            if value < Rational::zero() {
                return Err(ScalarError::NegativeRadicand {
                    radicand: self.radicand.as_ref().unwrap().poly().to_string(),
                    value: value.to_string(),
                });
            }
            if let Some(root) = rational_sqrt(&value) {
                return Ok(ExtScalar::from_ratfunc(&a + &(&b * &RatFunc::constant(root))));
            }
        }
        Ok(ExtScalar::new(a, b, Radicand::new(r)))
    }

    pub fn rename(&self, from: &Var, to: &Var) -> ExtScalar {
        ExtScalar {
            a: self.a.rename(from, to),
            b: self.b.rename(from, to),
            radicand: self
                .radicand
                .as_ref()
                .map(|r| Radicand::new(r.poly().rename(from, to))),
        }
    }

    fn merge_radicand(x: &Option<Radicand>, y: &Option<Radicand>) -> Option<Radicand> {
        match (x, y) {
            (Some(r1), Some(r2)) => {
                assert!(
                    r1 == r2,
                    "{}",
                    ScalarError::RadicandMismatch(r1.poly().to_string(), r2.poly().to_string())
                );
                Some(r1.clone())
            }
            (Some(r), None) | (None, Some(r)) => Some(r.clone()),
            (None, None) => None,
        }
    }

    fn build(a: RatFunc, b: RatFunc, radicand: Option<Radicand>) -> ExtScalar {
        let radicand = if b.is_zero() { None } else { radicand };
        ExtScalar { a, b, radicand }
    }
}

impl PartialEq for ExtScalar {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && (self.b.is_zero() || self.radicand == other.radicand)
    }
}

impl Eq for ExtScalar {}

impl Zero for ExtScalar {
    fn zero() -> Self {
        ExtScalar::from_ratfunc(RatFunc::zero())
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for ExtScalar {
    fn one() -> Self {
        ExtScalar::from_ratfunc(RatFunc::one())
    }
}

impl<'a> Add<&'a ExtScalar> for &'a ExtScalar {
    type Output = ExtScalar;
    fn add(self, rhs: &'a ExtScalar) -> ExtScalar {
        let r = ExtScalar::merge_radicand(&self.radicand, &rhs.radicand);
        ExtScalar::build(&self.a + &rhs.a, &self.b + &rhs.b, r)
    }
}

impl<'a> Sub<&'a ExtScalar> for &'a ExtScalar {
    type Output = ExtScalar;
    fn sub(self, rhs: &'a ExtScalar) -> ExtScalar {
        let r = ExtScalar::merge_radicand(&self.radicand, &rhs.radicand);
        ExtScalar::build(&self.a - &rhs.a, &self.b - &rhs.b, r)
    }
}

impl<'a> Mul<&'a ExtScalar> for &'a ExtScalar {
    type Output = ExtScalar;
    fn mul(self, rhs: &'a ExtScalar) -> ExtScalar {
        match (&self.radicand, &rhs.radicand) {
            (None, None) => ExtScalar::from_ratfunc(&self.a * &rhs.a),
            (None, Some(r)) => ExtScalar::build(&self.a * &rhs.a, &self.a * &rhs.b, Some(r.clone())),
            (Some(r), None) => ExtScalar::build(&self.a * &rhs.a, &self.b * &rhs.a, Some(r.clone())),
            (Some(_), Some(_)) => {
                let r = ExtScalar::merge_radicand(&self.radicand, &rhs.radicand).unwrap();
                let rr = RatFunc::from_poly(r.poly().clone());
                // (a1 + b1 s)(a2 + b2 s) = a1 a2 + b1 b2 r + (a1 b2 + a2 b1) s
                let a = &(&self.a * &rhs.a) + &(&(&self.b * &rhs.b) * &rr);
                let b = &(&self.a * &rhs.b) + &(&self.b * &rhs.a);
                ExtScalar::build(a, b, Some(r))
            }
        }
    }
}

impl Neg for &ExtScalar {
    type Output = ExtScalar;
    fn neg(self) -> ExtScalar {
        ExtScalar {
            a: -&self.a,
            b: -&self.b,
            radicand: self.radicand.clone(),
        }
    }
}

owned_ops!(ExtScalar);

impl From<RatFunc> for ExtScalar {
    fn from(a: RatFunc) -> Self {
        ExtScalar::from_ratfunc(a)
    }
}

impl Scalar for ExtScalar {
    fn from_rational(q: &Rational) -> Self {
        ExtScalar::from_ratfunc(RatFunc::constant(q.clone()))
    }
}

impl Field for ExtScalar {
    fn inverse(&self) -> Option<Self> {
        self.recip().ok()
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        Ok(self * &rhs.recip()?)
    }
}

impl Conjugate for ExtScalar {
    /// `s` is real, so the element is fixed.
    fn conj(&self) -> Self {
        self.clone()
    }
}

impl fmt::Display for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(r) = &self.radicand else {
            return write!(f, "{}", self.a);
        };
        let s = format!("sqrt({})", r.poly());
        let b = if self.b.is_one() {
            s
        } else {
            format!("({})*{s}", self.b)
        };
        if self.a.is_zero() {
            f.write_str(&b)
        } else {
            write!(f, "{}+{b}", self.a)
        }
    }
}

impl fmt::Debug for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
