//! The exterior algebra on `n <= 16` generators over any [`Scalar`].
//!
//! A [`Form`] is a sparse map from [`Blade`] to coefficient and may mix
//! degrees (polyforms are first class). [`Polyvector`] holds the same data
//! read over the dual basis `e_j` and acts on forms by interior product.

mod blade;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, BitXor, Neg, Sub};

use thiserror::Error;

pub use blade::Blade;

use crate::scalars::{Conjugate, Rational, Scalar};

pub const MAX_GENERATORS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("dimension mismatch: {left} vs {right} generators")]
    DimensionMismatch { left: usize, right: usize },
    #[error("at most {MAX_GENERATORS} generators are supported, got {0}")]
    TooManyGenerators(usize),
    #[error("exponential is only defined for even forms of degree >= 2; found a term on {0}")]
    NotEvenForm(Blade),
    #[error("expected {expected} images of generators, got {got}")]
    WrongImageCount { expected: usize, got: usize },
}

/// A (possibly inhomogeneous) exterior form on `n` generators.
#[derive(Clone, PartialEq, Eq)]
pub struct Form<S> {
    n: usize,
    terms: BTreeMap<Blade, S>,
}

impl<S: Scalar> Form<S> {
    pub fn zero(n: usize) -> Form<S> {
        assert!(n <= MAX_GENERATORS, "{}", FormError::TooManyGenerators(n));
        Form {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// The constant form `1`.
    pub fn one(n: usize) -> Form<S> {
        Form::monomial(n, Blade::SCALAR, S::one())
    }

    pub fn monomial(n: usize, blade: Blade, coeff: S) -> Form<S> {
        let mut f = Form::zero(n);
        f.add_term(blade, coeff);
        f
    }

    /// The generator `e^j` (1-based).
    pub fn generator(n: usize, j: usize) -> Form<S> {
        assert!((1..=n).contains(&j), "generator e{j} out of range for n = {n}");
        Form::monomial(n, Blade::generator(j), S::one())
    }

    /// `coeff * e^{indices}` with the indices wedged in the given order.
    pub fn wedge_of(n: usize, indices: &[usize], coeff: S) -> Form<S> {
        let mut blade = Blade::SCALAR;
        let mut sign = 1i8;
        for &j in indices {
            assert!((1..=n).contains(&j), "generator e{j} out of range for n = {n}");
            match blade.wedge_sign(Blade::generator(j)) {
                Some(s) => {
                    sign *= s;
                    blade = blade.union(Blade::generator(j));
                }
                None => return Form::zero(n),
            }
        }
        let coeff = if sign < 0 { -coeff } else { coeff };
        Form::monomial(n, blade, coeff)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &S)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, blade: Blade) -> S {
        self.terms.get(&blade).cloned().unwrap_or_else(S::zero)
    }

    /// Adds `coeff * blade`, dropping the entry if it cancels.
    pub fn add_term(&mut self, blade: Blade, coeff: S) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(blade) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn check_dim(&self, other_n: usize) -> Result<(), FormError> {
        if self.n == other_n {
            Ok(())
        } else {
            Err(FormError::DimensionMismatch {
                left: self.n,
                right: other_n,
            })
        }
    }

    pub fn try_add(&self, other: &Form<S>) -> Result<Form<S>, FormError> {
        self.check_dim(other.n)?;
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Form<S> {
        let mut out = Form::zero(self.n);
        for (b, x) in &self.terms {
            out.add_term(*b, x.clone() * c.clone());
        }
        out
    }

    /// Degrees that carry at least one term.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|b| b.grade()).collect();
        d.dedup();
        d
    }

    /// The degree of a nonzero homogeneous form.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        match self.degrees().as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }

    /// The exterior product.
    pub fn wedge(&self, other: &Form<S>) -> Result<Form<S>, FormError> {
        self.check_dim(other.n)?;
        let mut out = Form::zero(self.n);
        for (ba, ca) in &self.terms {
            for (bb, cb) in &other.terms {
                if let Some(sign) = ba.wedge_sign(*bb) {
                    let c = ca.clone() * cb.clone();
                    out.add_term(ba.union(*bb), if sign < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// `self ^ self ^ ... ^ self` (`k` factors; `k = 0` gives 1).
    pub fn power(&self, k: usize) -> Form<S> {
        let mut acc = Form::one(self.n);
        for _ in 0..k {
            acc = &acc ^ self;
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    /// The degree-`k` part.
    pub fn grade_project(&self, k: usize) -> Form<S> {
        Form {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.grade() == k)
                .map(|(b, c)| (*b, c.clone()))
                .collect(),
        }
    }

    /// Coefficient of `e^{1...n}` (zero if absent).
    pub fn top_coefficient(&self) -> S {
        self.coefficient(Blade::full(self.n))
    }

    /// `sum_m B^m / m!` for an even form `B` with no constant term, truncated
    /// at degree `n`.
    pub fn exp_even(&self) -> Result<Form<S>, FormError> {
        if let Some(b) = self.terms.keys().find(|b| b.grade() % 2 == 1 || b.grade() == 0) {
            return Err(FormError::NotEvenForm(*b));
        }
        let mut out = Form::one(self.n);
        let mut power = Form::one(self.n);
        let mut m = 0i64;
        loop {
            m += 1;
            power = &power ^ self;
            if power.is_zero() {
                break;
            }
            let inv = S::from_rational(&Rational::new(1.into(), m.into()));
            power = power.scale(&inv);
            out = &out + &power;
        }
        Ok(out)
    }

    /// Maps every coefficient through `f`.
    pub fn map_coeffs<T: Scalar>(&self, mut f: impl FnMut(&S) -> T) -> Form<T> {
        let mut out = Form::zero(self.n);
        for (b, c) in &self.terms {
            out.add_term(*b, f(c));
        }
        out
    }

    pub fn try_map_coeffs<T: Scalar, E>(&self, mut f: impl FnMut(&S) -> Result<T, E>) -> Result<Form<T>, E> {
        let mut out = Form::zero(self.n);
        for (b, c) in &self.terms {
            out.add_term(*b, f(c)?);
        }
        Ok(out)
    }

    /// The algebra homomorphism determined by `e^j -> images[j - 1]`, mapping
    /// into forms on `images[0].dim()` generators.
    pub fn apply_linear(&self, images: &[Form<S>]) -> Result<Form<S>, FormError> {
        if images.len() != self.n {
            return Err(FormError::WrongImageCount {
                expected: self.n,
                got: images.len(),
            });
        }
        let target = images.first().map(Form::dim).unwrap_or(0);
        if let Some(bad) = images.iter().find(|f| f.dim() != target) {
            return Err(FormError::DimensionMismatch {
                left: target,
                right: bad.dim(),
            });
        }
        let mut out = Form::zero(target);
        let mut cache: BTreeMap<Blade, Form<S>> = BTreeMap::new();
        for (b, c) in &self.terms {
            let image = blade_image(*b, images, target, &mut cache);
            out = &out + &image.scale(c);
        }
        Ok(out)
    }

    /// Interior product by a polyvector, with `i_{X^Y} = i_Y . i_X`.
    pub fn contract(&self, p: &Polyvector<S>) -> Result<Form<S>, FormError> {
        self.check_dim(p.0.n)?;
        let mut out = Form::zero(self.n);
        for (pb, pc) in &p.0.terms {
            for (b, c) in &self.terms {
                if pb.mask() & !b.mask() != 0 {
                    continue;
                }
                let mut blade = *b;
                let mut sign = 1i8;
                for j in pb.indices() {
                    sign *= blade.contract_sign(j).expect("contained");
                    blade = blade.without(j);
                }
                let v = pc.clone() * c.clone();
                out.add_term(blade, if sign < 0 { -v } else { v });
            }
        }
        Ok(out)
    }
}

fn blade_image<S: Scalar>(
    b: Blade,
    images: &[Form<S>],
    target: usize,
    cache: &mut BTreeMap<Blade, Form<S>>,
) -> Form<S> {
    if let Some(f) = cache.get(&b) {
        return f.clone();
    }
    let f = match b.highest() {
        None => Form::one(target),
        Some(j) => {
            let rest = blade_image(b.without(j), images, target, cache);
            &rest ^ &images[j - 1]
        }
    };
    cache.insert(b, f.clone());
    f
}

impl<S: Scalar + Conjugate> Form<S> {
    /// Coefficient-wise conjugation; real generators are fixed.
    pub fn conj(&self) -> Form<S> {
        self.map_coeffs(|c| c.conj())
    }
}

impl<'a, S: Scalar> Add<&'a Form<S>> for &'a Form<S> {
    type Output = Form<S>;
    /// Panics on a dimension mismatch; see [`Form::try_add`].
    fn add(self, rhs: &'a Form<S>) -> Form<S> {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a, S: Scalar> Sub<&'a Form<S>> for &'a Form<S> {
    type Output = Form<S>;
    fn sub(self, rhs: &'a Form<S>) -> Form<S> {
        self + &(-rhs)
    }
}

impl<S: Scalar> Neg for &Form<S> {
    type Output = Form<S>;
    fn neg(self) -> Form<S> {
        Form {
            n: self.n,
            terms: self.terms.iter().map(|(b, c)| (*b, -c.clone())).collect(),
        }
    }
}

impl<'a, S: Scalar> BitXor<&'a Form<S>> for &'a Form<S> {
    type Output = Form<S>;
    /// The wedge product; panics on a dimension mismatch.
    fn bitxor(self, rhs: &'a Form<S>) -> Form<S> {
        self.wedge(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<S: Scalar> Add for Form<S> {
    type Output = Form<S>;
    fn add(self, rhs: Form<S>) -> Form<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Sub for Form<S> {
    type Output = Form<S>;
    fn sub(self, rhs: Form<S>) -> Form<S> {
        &self - &rhs
    }
}

impl<S: Scalar> Neg for Form<S> {
    type Output = Form<S>;
    fn neg(self) -> Form<S> {
        -&self
    }
}

impl<S: Scalar> BitXor for Form<S> {
    type Output = Form<S>;
    fn bitxor(self, rhs: Form<S>) -> Form<S> {
        &self ^ &rhs
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for Form<S> {
    /// `c1 e1^e2 + c2 e3^e4`, coefficients wrapped in parentheses when compound.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (b, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let cs = c.to_string();
            let simple = !cs[1..].contains(['+', '-', '/', '*']);
            let cs = if simple { cs } else { format!("({cs})") };
            if *b == Blade::SCALAR {
                f.write_str(&cs)?;
            } else if cs == "1" {
                write!(f, "{b}")?;
            } else if cs == "-1" {
                write!(f, "-{b}")?;
            } else {
                write!(f, "{cs} {b}")?;
            }
        }
        Ok(())
    }
}

impl<S: fmt::Debug> fmt::Debug for Form<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(b, c)| (b.to_string(), c))).finish()
    }
}

/// A polyvector over the dual basis `e_1, ..., e_n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polyvector<S>(Form<S>);

impl<S: Scalar> Polyvector<S> {
    pub fn zero(n: usize) -> Polyvector<S> {
        Polyvector(Form::zero(n))
    }

    /// The dual basis vector `e_j` (1-based).
    pub fn basis_vector(n: usize, j: usize) -> Polyvector<S> {
        Polyvector(Form::generator(n, j))
    }

    /// A vector `sum_j components[j] e_{j+1}`.
    pub fn vector(components: &[S]) -> Polyvector<S> {
        let n = components.len();
        let mut f = Form::zero(n);
        for (j, c) in components.iter().enumerate() {
            f.add_term(Blade::generator(j + 1), c.clone());
        }
        Polyvector(f)
    }

    pub fn from_terms(form: Form<S>) -> Polyvector<S> {
        Polyvector(form)
    }

    pub fn as_form(&self) -> &Form<S> {
        &self.0
    }

    pub fn wedge(&self, other: &Polyvector<S>) -> Result<Polyvector<S>, FormError> {
        Ok(Polyvector(self.0.wedge(&other.0)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Rational;

    fn q(k: i64) -> Q {
        Q::from_integer(k.into())
    }

    fn e(idx: &[usize]) -> Form<Q> {
        Form::wedge_of(8, idx, q(1))
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(&e(&[1]) ^ &e(&[2]), e(&[1, 2]));
        assert!((&e(&[1, 2]) ^ &e(&[1, 2])).is_zero());
        let w = &e(&[1, 2]) + &e(&[3, 4]);
        assert_eq!(&w ^ &w, e(&[1, 2, 3, 4]).scale(&q(2)));
        assert_eq!(e(&[2, 1]), -&e(&[1, 2]));
    }

    #[test]
    fn dimension_mismatch() {
        let a = Form::<Q>::generator(3, 1);
        let b = Form::<Q>::generator(4, 1);
        assert_eq!(a.wedge(&b), Err(FormError::DimensionMismatch { left: 3, right: 4 }));
    }

    #[test]
    fn grading() {
        let f = &Form::one(8) + &e(&[1, 2]);
        assert_eq!(f.grade_project(2), e(&[1, 2]));
        assert_eq!(e(&[1, 2, 3, 4, 5, 6, 7, 8]).scale(&q(5)).top_coefficient(), q(5));
        assert_eq!(f.top_coefficient(), q(0));
    }

    #[test]
    fn exponential() {
        assert_eq!(Form::<Q>::zero(8).exp_even().unwrap(), Form::one(8));
        let b = &e(&[1, 2]) + &e(&[3, 4]);
        let expected = &(&(&Form::one(8) + &e(&[1, 2])) + &e(&[3, 4])) + &e(&[1, 2, 3, 4]);
        assert_eq!(b.exp_even().unwrap(), expected);
        assert!(matches!(e(&[1]).exp_even(), Err(FormError::NotEvenForm(_))));
        assert!(matches!(Form::<Q>::one(8).exp_even(), Err(FormError::NotEvenForm(_))));
    }

    #[test]
    fn contraction() {
        let x1 = Polyvector::<Q>::basis_vector(8, 1);
        assert_eq!(e(&[1]).contract(&x1).unwrap(), Form::one(8));
        assert!(e(&[2]).contract(&x1).unwrap().is_zero());
        let x34 = Polyvector::basis_vector(8, 3).wedge(&Polyvector::basis_vector(8, 4)).unwrap();
        assert_eq!(e(&[1, 2, 3, 4]).contract(&x34).unwrap(), e(&[1, 2]));
        // i_{e_2}(e^{12}) = -e^1
        assert_eq!(e(&[1, 2]).contract(&Polyvector::basis_vector(8, 2)).unwrap(), -&e(&[1]));
    }

    #[test]
    fn linear_substitution() {
        // e1 -> e1 + e2, e2 -> e2: e^{12} maps to e^{12}.
        let mut images: Vec<Form<Q>> = (1..=8).map(|j| Form::generator(8, j)).collect();
        images[0] = &e(&[1]) + &e(&[2]);
        assert_eq!(e(&[1, 2]).apply_linear(&images).unwrap(), e(&[1, 2]));
        assert_eq!(e(&[1, 3]).apply_linear(&images).unwrap(), &e(&[1, 3]) + &e(&[2, 3]));
    }
}
