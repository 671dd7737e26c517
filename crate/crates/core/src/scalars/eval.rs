use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use super::rational::to_f64;
use super::{CScalar, ExtScalar, Poly, RatFunc, Rational, ScalarError, Var};

/// Values for parameters, e.g. `alpha = 1/2`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<Var, Rational>);

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn single(name: &str, value: Rational) -> Assignment {
        let mut a = Assignment::new();
        a.set(name, value);
        a
    }

    pub fn set(&mut self, name: &str, value: Rational) {
        self.0.insert(Var::new(name), value);
    }

    pub fn get(&self, name: &str) -> Option<&Rational> {
        self.0.get(&Var::new(name))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Rational)> {
        self.0.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The assignment as a polynomial substitution map.
    pub fn as_substitution(&self) -> HashMap<Var, Poly> {
        self.0
            .iter()
            .map(|(v, q)| (v.clone(), Poly::constant(q.clone())))
            .collect()
    }
}

impl std::fmt::Display for Assignment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(v, q)| format!("{v}={q}")).collect();
        f.write_str(&parts.join(","))
    }
}

fn check_covered(x: &CScalar, assignment: &Assignment) -> Result<(), ScalarError> {
    let mut vars = x.vars();
    for r in [x.re().radicand(), x.im().radicand()].into_iter().flatten() {
        vars.extend(r.poly().vars());
    }
    match vars.into_iter().find(|v| !assignment.0.contains_key(v)) {
        Some(v) => Err(ScalarError::Unassigned(v.name().to_string())),
        None => Ok(()),
    }
}

impl CScalar {
    /// Substitutes parameter values, keeping `s` formal unless its radicand
    /// becomes a perfect rational square. Unassigned parameters stay symbolic.
    pub fn specialize(&self, assignment: &Assignment) -> Result<CScalar, ScalarError> {
        self.substitute(&assignment.as_substitution())
    }

    /// Exact evaluation to a complex rational `(re, im)`.
    ///
    /// Every parameter must be assigned, and the radicand must evaluate to
    /// the square of a rational (the positive root is taken).
    pub fn evaluate(&self, assignment: &Assignment) -> Result<(Rational, Rational), ScalarError> {
        check_covered(self, assignment)?;
        let v = self.specialize(assignment)?;
        let part = |x: &ExtScalar, orig: &ExtScalar| -> Result<Rational, ScalarError> {
            match x.as_ratfunc().and_then(RatFunc::constant_value) {
                Some(q) => Ok(q),
                None => {
                    let r = orig.radicand().expect("symbolic part left only by the radicand");
                    let value = r.poly().substitute(&assignment.as_substitution());
                    Err(ScalarError::NotPerfectSquare {
                        radicand: r.poly().to_string(),
                        value: value.to_string(),
                    })
                }
            }
        };
        Ok((part(v.re(), self.re())?, part(v.im(), self.im())?))
    }

    /// Floating evaluation, `s` mapped to the positive real square root.
    pub fn evaluate_numeric(&self, assignment: &Assignment) -> Result<Complex64, ScalarError> {
        check_covered(self, assignment)?;
        let map = assignment.as_substitution();
        let part = |x: &ExtScalar| -> Result<f64, ScalarError> {
            let a = x.rational_part().substitute(&map)?.constant_value().unwrap_or_else(Rational::zero);
            let b = x.radical_part().substitute(&map)?.constant_value().unwrap_or_else(Rational::zero);
            let mut value = to_f64(&a);
            if let Some(r) = x.radicand() {
                let rv = r.poly().substitute(&map).constant_value().unwrap_or_else(Rational::zero);
                if rv.is_negative() {
                    return Err(ScalarError::NegativeRadicand {
                        radicand: r.poly().to_string(),
                        value: rv.to_string(),
                    });
                }
                value += to_f64(&b) * to_f64(&rv).sqrt();
            }
            Ok(value)
        };
        Ok(Complex64::new(part(self.re())?, part(self.im())?))
    }
}

/// Positive rational roots of a univariate polynomial in `v`, in increasing order.
///
/// Uses the rational root theorem on the integer-normalized polynomial; returns
/// `None` if the polynomial involves other variables or its extreme
/// coefficients are too large to enumerate divisors.
pub fn positive_rational_roots(p: &Poly, v: &Var) -> Option<Vec<Rational>> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, ToPrimitive};

    if p.is_zero() {
        return None;
    }
    let coeffs = p.univariate_coeffs(v)?;
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    // Strip the factor v^k so the constant term is nonzero.
    let start = ints.iter().position(|c| !c.is_zero())?;
    let ints = &ints[start..];
    if ints.len() <= 1 {
        return Some(Vec::new());
    }
    let divisors = |n: &BigInt| -> Option<Vec<u64>> {
        let n = n.abs().to_u64()?;
        if n > 1_000_000_000_000 {
            return None;
        }
        let mut out = Vec::new();
        let mut d = 1u64;
        while d * d <= n {
            if n % d == 0 {
                out.push(d);
                if d * d != n {
                    out.push(n / d);
                }
            }
            d += 1;
            if d > 2_000_000 {
                return None;
            }
        }
        Some(out)
    };
    let ps = divisors(&ints[0])?;
    let qs = divisors(ints.last().unwrap())?;
    let mut roots: Vec<Rational> = Vec::new();
    for p_ in &ps {
        for q_ in &qs {
            let cand = Rational::new(BigInt::from(*p_), BigInt::from(*q_));
            if roots.contains(&cand) {
                continue;
            }
            let mut acc = Rational::zero();
            for c in ints.iter().rev() {
                acc = acc * &cand + Rational::from_integer(c.clone());
            }
            if acc.is_zero() {
                roots.push(cand);
            }
        }
    }
    roots.sort();
    Some(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Radicand;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn roots_of_products() {
        let a = Poly::var("alpha");
        let f1 = &a - &Poly::constant(q(1, 2));
        let f2 = &a + &Poly::from_int(3);
        let f3 = &a - &Poly::from_int(5);
        let p = &(&f1 * &f2) * &(&f3 * &a);
        let roots = positive_rational_roots(&p, &Var::new("alpha")).unwrap();
        assert_eq!(roots, vec![q(1, 2), q(5, 1)]);
    }

    #[test]
    fn exact_and_numeric_sqrt() {
        let s = CScalar::sqrt_of(Radicand::default_alpha());
        let at1 = Assignment::single("alpha", q(1, 1));
        assert_eq!(s.evaluate(&at1).unwrap(), (q(2, 1), q(0, 1)));
        let at2 = Assignment::single("alpha", q(2, 1));
        assert!(matches!(s.evaluate(&at2), Err(ScalarError::NotPerfectSquare { .. })));
        let z = s.evaluate_numeric(&at2).unwrap();
        assert!((z.re - 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn unassigned_parameter() {
        let x = CScalar::param("beta");
        assert_eq!(
            x.evaluate(&Assignment::single("alpha", q(1, 1))),
            Err(ScalarError::Unassigned("beta".into()))
        );
    }
}
