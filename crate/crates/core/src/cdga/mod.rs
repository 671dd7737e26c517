//! Lie algebra presentations and their Chevalley-Eilenberg complexes.
//!
//! A presentation stores the structure constants `a^j_{ik}` (with `i < k`)
//! of `de^j = sum a^j_{ik} e^i ^ e^k`. The dual bracket is
//! `[e_i, e_k] = -sum_j a^j_{ik} e_j`.

mod cohomology;
mod family;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::exterior::{Blade, Form, MAX_GENERATORS};
use crate::linalg::Matrix;
use crate::scalars::{Assignment, CScalar, Field, Rational, Scalar, ScalarError};

pub use cohomology::{CohomologyReport, RepresentativeFailure, SampleCheck};
pub use family::{abelian, g_alpha, g_alpha_at, g_alpha_with, ALPHA};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("generator index {index} out of range 1..={n}")]
    OutOfRange { index: usize, n: usize },
    #[error("e{0}^e{0} vanishes; a structure constant needs two distinct indices")]
    RepeatedIndex(usize),
    #[error("dimension {0} exceeds the supported maximum of 16")]
    TooLarge(usize),
    #[error("d e{0} must be a 2-form")]
    NotATwoForm(usize),
    #[error("d^2 != 0 on generators {0:?}")]
    NotASquareZero(Vec<usize>),
    #[error("basis change must be an invertible {0}x{0} matrix")]
    SingularBasisChange(usize),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A nilpotent (or arbitrary) Lie algebra given by its structure constants.
#[derive(Clone, PartialEq)]
pub struct Presentation<S> {
    name: String,
    n: usize,
    parameters: Vec<String>,
    constants: BTreeMap<(usize, usize, usize), S>,
}

/// Outcome of the Jacobi check.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiReport<S> {
    /// Generators `j` with `d(de^j) != 0`, together with that 3-form.
    pub failures: Vec<(usize, Form<S>)>,
}

impl<S> JacobiReport<S> {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl<S: Scalar> Presentation<S> {
    pub fn new(name: &str, n: usize, parameters: &[&str]) -> Result<Presentation<S>, PresentationError> {
        if n > MAX_GENERATORS {
            return Err(PresentationError::TooLarge(n));
        }
        Ok(Presentation {
            name: name.to_string(),
            n,
            parameters: parameters.iter().map(|p| p.to_string()).collect(),
            constants: BTreeMap::new(),
        })
    }

    /// Builds a presentation from `de^1, ..., de^n`.
    pub fn from_differentials(
        name: &str,
        parameters: &[&str],
        de: &[Form<S>],
    ) -> Result<Presentation<S>, PresentationError> {
        let n = de.len();
        let mut p = Presentation::new(name, n, parameters)?;
        for (j, f) in de.iter().enumerate() {
            for (b, c) in f.terms() {
                let idx: Vec<usize> = b.indices().collect();
                let [i, k] = idx[..] else {
                    return Err(PresentationError::NotATwoForm(j + 1));
                };
                p.add_constant(j + 1, i, k, c.clone())?;
            }
        }
        Ok(p)
    }

    fn check_index(&self, index: usize) -> Result<(), PresentationError> {
        if (1..=self.n).contains(&index) {
            Ok(())
        } else {
            Err(PresentationError::OutOfRange { index, n: self.n })
        }
    }

    /// Adds `c * e^i ^ e^k` to `de^j`; `i > k` is stored with a sign flip.
    pub fn add_constant(&mut self, j: usize, i: usize, k: usize, c: S) -> Result<(), PresentationError> {
        for x in [j, i, k] {
            self.check_index(x)?;
        }
        if i == k {
            return Err(PresentationError::RepeatedIndex(i));
        }
        let (i, k, c) = if i < k { (i, k, c) } else { (k, i, -c) };
        let entry = self.constants.remove(&(j, i, k)).unwrap_or_else(S::zero) + c;
        if !entry.is_zero() {
            self.constants.insert((j, i, k), entry);
        }
        Ok(())
    }

    /// Replaces `a^j_{ik}` (with `i < k`).
    pub fn set_constant(&mut self, j: usize, i: usize, k: usize, c: S) -> Result<(), PresentationError> {
        let (i, k, c) = if i < k { (i, k, c) } else { (k, i, -c) };
        self.constants.remove(&(j, i, k));
        self.add_constant(j, i, k, c)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: &str) {
        self.name = name.to_string();
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn parameters(&self) -> &[String] {
        &self.parameters
    }

    /// `a^j_{ik}` for any ordering of `i, k`.
    pub fn constant(&self, j: usize, i: usize, k: usize) -> S {
        if i == k {
            return S::zero();
        }
        let (a, b, sign) = if i < k { (i, k, false) } else { (k, i, true) };
        let c = self.constants.get(&(j, a, b)).cloned().unwrap_or_else(S::zero);
        if sign {
            -c
        } else {
            c
        }
    }

    /// Nonzero constants keyed by `(j, i, k)` with `i < k`.
    pub fn constants(&self) -> impl Iterator<Item = (&(usize, usize, usize), &S)> {
        self.constants.iter()
    }

    pub fn is_abelian(&self) -> bool {
        self.constants.is_empty()
    }

    /// Constants violating `i, k < j`, the triangular shape of a nilpotent
    /// presentation in adapted basis.
    pub fn triangularity_violations(&self) -> Vec<(usize, usize, usize)> {
        self.constants.keys().copied().filter(|&(j, _, k)| k >= j).collect()
    }

    /// `de^j`.
    pub fn de(&self, j: usize) -> Form<S> {
        let mut f = Form::zero(self.n);
        for ((jj, i, k), c) in self.constants.range((j, 0, 0)..(j + 1, 0, 0)) {
            debug_assert_eq!(*jj, j);
            f.add_term(Blade::of(&[*i, *k]), c.clone());
        }
        f
    }

    /// The Chevalley-Eilenberg differential, extended as a degree +1
    /// derivation: `d(e^{i_1...i_k}) = sum_t (-1)^(t-1) de^{i_t} ^ e^{I - i_t}`.
    pub fn differential(&self, a: &Form<S>) -> Form<S> {
        assert_eq!(a.dim(), self.n, "form dimension does not match the presentation");
        let de: Vec<Form<S>> = (1..=self.n).map(|j| self.de(j)).collect();
        let mut out = Form::zero(self.n);
        for (b, c) in a.terms() {
            for (t, i) in b.indices().enumerate() {
                let rest = b.without(i);
                for (db, dc) in de[i - 1].terms() {
                    let Some(sign) = db.wedge_sign(rest) else {
                        continue;
                    };
                    let v = dc.clone() * c.clone();
                    let neg = (sign < 0) != (t % 2 == 1);
                    out.add_term(db.union(rest), if neg { -v } else { v });
                }
            }
        }
        out
    }

    /// `d^2 = 0` on generators, which by the derivation property certifies it
    /// everywhere.
    pub fn check_d_squared(&self) -> JacobiReport<S> {
        let failures = (1..=self.n)
            .filter_map(|j| {
                let dd = self.differential(&self.de(j));
                (!dd.is_zero()).then_some((j, dd))
            })
            .collect();
        JacobiReport { failures }
    }

    pub(crate) fn require_jacobi(&self) -> Result<(), PresentationError> {
        let r = self.check_d_squared();
        if r.passed() {
            Ok(())
        } else {
            Err(PresentationError::NotASquareZero(r.failures.iter().map(|f| f.0).collect()))
        }
    }

    /// Coefficients of the bracket: `[e_i, e_k] = sum_j bracket(i,k)[j-1] e_j`.
    pub fn bracket(&self, i: usize, k: usize) -> Vec<S> {
        (1..=self.n).map(|j| -self.constant(j, i, k)).collect()
    }

    pub fn map_scalars<T: Scalar>(&self, mut f: impl FnMut(&S) -> T) -> Presentation<T> {
        let mut out = Presentation {
            name: self.name.clone(),
            n: self.n,
            parameters: self.parameters.clone(),
            constants: BTreeMap::new(),
        };
        for (&(j, i, k), c) in &self.constants {
            let v = f(c);
            if !v.is_zero() {
                out.constants.insert((j, i, k), v);
            }
        }
        out
    }

    pub fn try_map_scalars<T: Scalar, E>(
        &self,
        mut f: impl FnMut(&S) -> Result<T, E>,
    ) -> Result<Presentation<T>, E> {
        let mut out = Presentation {
            name: self.name.clone(),
            n: self.n,
            parameters: self.parameters.clone(),
            constants: BTreeMap::new(),
        };
        for (&(j, i, k), c) in &self.constants {
            let v = f(c)?;
            if !v.is_zero() {
                out.constants.insert((j, i, k), v);
            }
        }
        Ok(out)
    }
}

impl<S: Field> Presentation<S> {
    /// The same Lie algebra in the basis `e'^i = sum_j m[i][j] e^j` of the dual.
    pub fn change_basis(&self, m: &Matrix<S>) -> Result<Presentation<S>, PresentationError> {
        if m.nrows() != self.n || m.ncols() != self.n {
            return Err(PresentationError::SingularBasisChange(self.n));
        }
        let inv = m.inverse().ok_or(PresentationError::SingularBasisChange(self.n))?;
        // e^j = sum_l inv[j][l] e'^l
        let images: Vec<Form<S>> = (0..self.n)
            .map(|j| {
                let mut f = Form::zero(self.n);
                for l in 0..self.n {
                    f.add_term(Blade::generator(l + 1), inv.get(j, l).clone());
                }
                f
            })
            .collect();
        let mut de_new = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut de_old = Form::zero(self.n);
            for j in 0..self.n {
                let c = m.get(i, j);
                if !c.is_zero() {
                    de_old = &de_old + &self.de(j + 1).scale(c);
                }
            }
            de_new.push(de_old.apply_linear(&images).expect("square basis change"));
        }
        let params: Vec<&str> = self.parameters.iter().map(String::as_str).collect();
        Presentation::from_differentials(&self.name, &params, &de_new)
    }
}

impl Presentation<CScalar> {
    /// Substitutes parameter values; the assigned names leave the parameter list.
    pub fn specialize(&self, assignment: &Assignment) -> Result<Presentation<CScalar>, PresentationError> {
        let mut out = self.try_map_scalars(|c| c.specialize(assignment))?;
        out.parameters.retain(|p| assignment.get(p).is_none());
        Ok(out)
    }

    /// The presentation over the rationals, if every constant is a rational number.
    pub fn to_rational(&self) -> Option<Presentation<Rational>> {
        self.try_map_scalars(|c| c.constant_value().ok_or(())).ok()
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for Presentation<S> {
    /// One `d e<j> = ...` line per nonzero differential.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (dim {})", self.name, self.n)?;
        for j in 1..=self.n {
            let de = self.de(j);
            if !de.is_zero() {
                writeln!(f, "  d e{j} = {de}")?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar + fmt::Debug> fmt::Debug for Presentation<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Presentation")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("parameters", &self.parameters)
            .field("constants", &self.constants)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Rational;

    fn q(k: i64) -> Q {
        Q::from_integer(k.into())
    }

    fn toy() -> Presentation<Q> {
        let mut p = Presentation::new("toy", 6, &[]).unwrap();
        p.add_constant(5, 1, 2, q(1)).unwrap();
        p.add_constant(6, 3, 5, q(1)).unwrap();
        p
    }

    #[test]
    fn toy_fails_jacobi() {
        let r = toy().check_d_squared();
        assert_eq!(r.failures.len(), 1);
        assert_eq!(r.failures[0].0, 6);
        assert_eq!(r.failures[0].1, Form::wedge_of(6, &[1, 2, 3], q(-1)));
    }

    #[test]
    fn sign_flip_on_storage() {
        let mut p = Presentation::<Q>::new("x", 3, &[]).unwrap();
        p.add_constant(3, 2, 1, q(1)).unwrap();
        assert_eq!(p.constant(3, 1, 2), q(-1));
        assert_eq!(p.constant(3, 2, 1), q(1));
        assert_eq!(p.add_constant(3, 1, 1, q(1)), Err(PresentationError::RepeatedIndex(1)));
        assert!(matches!(p.add_constant(4, 1, 2, q(1)), Err(PresentationError::OutOfRange { .. })));
    }

    #[test]
    fn leibniz_on_heisenberg() {
        let mut p = Presentation::<Q>::new("h", 3, &[]).unwrap();
        p.add_constant(3, 1, 2, q(1)).unwrap();
        let e3 = Form::generator(3, 3);
        let e1 = Form::generator(3, 1);
        // d(e1 ^ e3) = -e1 ^ de3 = -e1^e1^e2 = 0; d(e3 ^ e1) likewise.
        assert!(p.differential(&(&e1 ^ &e3)).is_zero());
        assert_eq!(p.differential(&e3), Form::wedge_of(3, &[1, 2], q(1)));
    }
}
