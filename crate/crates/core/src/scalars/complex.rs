use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::ratfunc::owned_ops;
use super::{Conjugate, ExtScalar, Field, Poly, Radicand, RatFunc, Rational, Scalar, ScalarError, Var};

/// `re + i*im` over the quadratic extension. This is the coefficient type of
/// every exact form in the crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CScalar {
    re: ExtScalar,
    im: ExtScalar,
}

impl CScalar {
    pub fn new(re: ExtScalar, im: ExtScalar) -> CScalar {
        CScalar { re, im }
    }

    pub fn i() -> CScalar {
        CScalar::new(ExtScalar::zero(), ExtScalar::one())
    }

    pub fn from_int(k: i64) -> CScalar {
        CScalar::from_i64(k)
    }

    pub fn rational(n: i64, d: i64) -> CScalar {
        CScalar::from_rational(&Rational::new(n.into(), d.into()))
    }

    pub fn param(name: &str) -> CScalar {
        CScalar::from(RatFunc::var(name))
    }

    /// The formal square root of `radicand`.
    pub fn sqrt_of(radicand: Radicand) -> CScalar {
        CScalar::from(ExtScalar::sqrt_of(radicand))
    }

    pub fn re(&self) -> &ExtScalar {
        &self.re
    }

    pub fn im(&self) -> &ExtScalar {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// The value as a real rational function (no `i`, no `s`).
    pub fn as_ratfunc(&self) -> Option<&RatFunc> {
        if self.im.is_zero() {
            self.re.as_ratfunc()
        } else {
            None
        }
    }

    /// The value as a real polynomial.
    pub fn as_poly(&self) -> Option<&Poly> {
        self.as_ratfunc()?.as_poly()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        self.as_ratfunc()?.constant_value()
    }

    pub fn mul_i(&self) -> CScalar {
        CScalar::new(-&self.im, self.re.clone())
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        let mut v = self.re.vars();
        v.extend(self.im.vars());
        v
    }

    pub fn recip(&self) -> Result<CScalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        // 1/(a + ib) = (a - ib) / (a^2 + b^2)
        let n = &(&self.re * &self.re) + &(&self.im * &self.im);
        let inv = n.recip()?;
        Ok(CScalar::new(&self.re * &inv, -&(&self.im * &inv)))
    }

    pub fn substitute(&self, map: &HashMap<Var, Poly>) -> Result<CScalar, ScalarError> {
        Ok(CScalar::new(self.re.substitute(map)?, self.im.substitute(map)?))
    }

    pub fn rename(&self, from: &Var, to: &Var) -> CScalar {
        CScalar::new(self.re.rename(from, to), self.im.rename(from, to))
    }
}

impl Zero for CScalar {
    fn zero() -> Self {
        CScalar::new(ExtScalar::zero(), ExtScalar::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for CScalar {
    fn one() -> Self {
        CScalar::new(ExtScalar::one(), ExtScalar::zero())
    }
}

impl<'a> Add<&'a CScalar> for &'a CScalar {
    type Output = CScalar;
    fn add(self, rhs: &'a CScalar) -> CScalar {
        CScalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a CScalar> for &'a CScalar {
    type Output = CScalar;
    fn sub(self, rhs: &'a CScalar) -> CScalar {
        CScalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a CScalar> for &'a CScalar {
    type Output = CScalar;
    fn mul(self, rhs: &'a CScalar) -> CScalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            return CScalar::new(&self.re * &rhs.re, ExtScalar::zero());
        }
        let re = &(&self.re * &rhs.re) - &(&self.im * &rhs.im);
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        CScalar::new(re, im)
    }
}

impl<'a> Div<&'a CScalar> for &'a CScalar {
    type Output = CScalar;
    /// Panics on division by zero; see [`Field::checked_div`].
    fn div(self, rhs: &'a CScalar) -> CScalar {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Neg for &CScalar {
    type Output = CScalar;
    fn neg(self) -> CScalar {
        CScalar::new(-&self.re, -&self.im)
    }
}

owned_ops!(CScalar);

impl Div for CScalar {
    type Output = CScalar;
    fn div(self, rhs: CScalar) -> CScalar {
        &self / &rhs
    }
}

impl From<ExtScalar> for CScalar {
    fn from(re: ExtScalar) -> Self {
        CScalar::new(re, ExtScalar::zero())
    }
}

impl From<RatFunc> for CScalar {
    fn from(r: RatFunc) -> Self {
        CScalar::from(ExtScalar::from(r))
    }
}

impl From<Poly> for CScalar {
    fn from(p: Poly) -> Self {
        CScalar::from(RatFunc::from_poly(p))
    }
}

impl From<Rational> for CScalar {
    fn from(q: Rational) -> Self {
        CScalar::from_rational(&q)
    }
}

impl Scalar for CScalar {
    fn from_rational(q: &Rational) -> Self {
        CScalar::from(ExtScalar::from_rational(q))
    }
}

impl Field for CScalar {
    fn inverse(&self) -> Option<Self> {
        self.recip().ok()
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        Ok(self * &rhs.recip()?)
    }
}

impl Conjugate for CScalar {
    /// `i -> -i`; `s` and the parameters are real.
    fn conj(&self) -> Self {
        CScalar::new(self.re.clone(), -&self.im)
    }
}

impl fmt::Display for CScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |x: &ExtScalar| {
            let s = x.to_string();
            if s.contains(['+', '-', '/']) && !(s.starts_with('-') && s[1..].chars().all(|c| c.is_ascii_digit())) {
                format!("({s})")
            } else {
                s
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) if self.im.is_one() => f.write_str("i"),
            (true, false) => write!(f, "{}*i", wrap(&self.im)),
            (false, false) if self.im.is_one() => write!(f, "{}+i", self.re),
            (false, false) => write!(f, "{}+{}*i", self.re, wrap(&self.im)),
        }
    }
}

impl fmt::Debug for CScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
