//! Generalized complex structures `rho = exp(B + i omega) ^ Omega` on a
//! presentation: non-degeneracy, integrability, and the built-in catalog for
//! `g_alpha`.

mod catalog;
mod closed;
mod frame;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::cdga::Presentation;
use crate::exterior::{Blade, Form, FormError};
use crate::scalars::{positive_rational_roots, Assignment, CScalar, ComplexField, Rational, ScalarError, Var};

pub use catalog::{catalog, catalog_entry, fi_equations, theta_forms, AlphaMode, FiCheck};
pub use closed::{closed2_general, omega4_coefficient, ClosedTwoFormParams, CLOSED2_NAMES};
pub use frame::{beta_check, BetaCheck, ThetaFrame};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GcsError {
    #[error("type {k} needs exactly {k} one-forms, got {got}")]
    WrongThetaCount { k: usize, got: usize },
    #[error("type {k} exceeds half the dimension {n}")]
    TypeTooLarge { k: usize, n: usize },
    #[error("{0} must be a real 2-form")]
    NotReal2Form(&'static str),
    #[error("theta {0} must be a 1-form")]
    NotOneForm(usize),
    #[error("the dimension {0} is odd")]
    OddDimension(usize),
    #[error("alpha must be a positive rational, got {0}")]
    NonPositiveAlpha(Rational),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A candidate structure of type `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct GcsData<S> {
    pub label: String,
    pub k: usize,
    pub b: Form<S>,
    pub omega: Form<S>,
    pub thetas: Vec<Form<S>>,
}

impl<S: ComplexField> GcsData<S> {
    /// Checks shapes and reality of `B`, `omega`.
    pub fn new(label: &str, k: usize, b: Form<S>, omega: Form<S>, thetas: Vec<Form<S>>) -> Result<GcsData<S>, GcsError> {
        let n = b.dim();
        if n % 2 == 1 {
            return Err(GcsError::OddDimension(n));
        }
        if k > n / 2 {
            return Err(GcsError::TypeTooLarge { k, n });
        }
        if thetas.len() != k {
            return Err(GcsError::WrongThetaCount { k, got: thetas.len() });
        }
        for (name, f) in [("B", &b), ("omega", &omega)] {
            if f.dim() != n || omega.dim() != n {
                return Err(FormError::DimensionMismatch { left: n, right: f.dim() }.into());
            }
            if f.terms().any(|(bl, _)| bl.grade() != 2) || f.conj() != *f {
                return Err(GcsError::NotReal2Form(name));
            }
        }
        for (idx, t) in thetas.iter().enumerate() {
            if t.dim() != n {
                return Err(FormError::DimensionMismatch { left: n, right: t.dim() }.into());
            }
            if t.terms().any(|(bl, _)| bl.grade() != 1) {
                return Err(GcsError::NotOneForm(idx + 1));
            }
        }
        Ok(GcsData {
            label: label.to_string(),
            k,
            b,
            omega,
            thetas,
        })
    }

    pub fn dim(&self) -> usize {
        self.b.dim()
    }

    /// `Omega = theta^1 ^ ... ^ theta^k` (1 for `k = 0`).
    pub fn big_omega(&self) -> Form<S> {
        self.thetas.iter().fold(Form::one(self.dim()), |acc, t| &acc ^ t)
    }

    /// `B + i omega`.
    pub fn complex_two_form(&self) -> Form<S> {
        &self.b + &self.omega.scale(&S::i())
    }

    pub fn map_scalars<T: ComplexField>(&self, f: impl Fn(&S) -> T) -> GcsData<T> {
        GcsData {
            label: self.label.clone(),
            k: self.k,
            b: self.b.map_coeffs(&f),
            omega: self.omega.map_coeffs(&f),
            thetas: self.thetas.iter().map(|t| t.map_coeffs(&f)).collect(),
        }
    }
}

impl GcsData<CScalar> {
    pub fn specialize(&self, a: &Assignment) -> Result<GcsData<CScalar>, ScalarError> {
        let f = |x: &Form<CScalar>| x.try_map_coeffs(|c| c.specialize(a));
        Ok(GcsData {
            label: self.label.clone(),
            k: self.k,
            b: f(&self.b)?,
            omega: f(&self.omega)?,
            thetas: self.thetas.iter().map(f).collect::<Result<_, _>>()?,
        })
    }
}

/// `rho = exp(B + i omega) ^ Omega`, truncated at the top degree.
pub fn build_rho<S: ComplexField>(data: &GcsData<S>) -> Result<Form<S>, GcsError> {
    let e = data.complex_two_form().exp_even()?;
    Ok(&e ^ &data.big_omega())
}

/// `top(omega^(n/2 - k) ^ Omega ^ conj(Omega))`.
pub fn nondegeneracy_coefficient<S: ComplexField>(data: &GcsData<S>) -> S {
    let n = data.dim();
    let om = data.big_omega();
    let w = data.omega.power(n / 2 - data.k);
    (&(&w ^ &om) ^ &om.conj()).top_coefficient()
}

/// Outcome of verifying one structure.
#[derive(Clone, Debug, PartialEq)]
pub struct GcsVerdict<S> {
    pub label: String,
    pub k: usize,
    pub top_coefficient: S,
    pub nondegenerate: bool,
    /// Positive rational values of the (single) parameter at which the top
    /// coefficient vanishes.
    pub exceptional_roots: Vec<Rational>,
    pub integrable: bool,
    /// First nonzero term of `d rho` when integrability fails.
    pub first_failure: Option<(Blade, S)>,
}

impl<S> GcsVerdict<S> {
    pub fn passed(&self) -> bool {
        self.nondegenerate && self.integrable
    }
}

/// `d rho`, all degrees at once.
pub fn d_rho<S: ComplexField>(p: &Presentation<S>, data: &GcsData<S>) -> Result<Form<S>, GcsError> {
    Ok(p.differential(&build_rho(data)?))
}

/// `(d Omega, (dB + i d omega) ^ Omega)`; their vanishing implies `d rho = 0`.
pub fn integrability_parts<S: ComplexField>(p: &Presentation<S>, data: &GcsData<S>) -> (Form<S>, Form<S>) {
    let om = data.big_omega();
    let d_om = p.differential(&om);
    let d_two = p.differential(&data.complex_two_form());
    (d_om, &d_two ^ &om)
}

/// Positive rational `alpha` with `x(alpha) = 0`, for `x` depending on one parameter.
pub fn exceptional_roots(x: &CScalar, param: &str) -> Vec<Rational> {
    let v = Var::new(param);
    if x.is_zero() || x.vars().iter().any(|w| *w != v) {
        return Vec::new();
    }
    // x = 0 forces both parts to vanish, hence their norms over Q(alpha).
    let mut candidates: Option<Vec<Rational>> = None;
    for part in [x.re(), x.im()] {
        if part.is_zero() {
            continue;
        }
        let norm = part.norm();
        let roots = positive_rational_roots(norm.numer(), &v).unwrap_or_default();
        candidates = Some(match candidates {
            None => roots,
            Some(prev) => prev.into_iter().filter(|r| roots.contains(r)).collect(),
        });
    }
    candidates
        .unwrap_or_default()
        .into_iter()
        .filter(|r| {
            x.specialize(&Assignment::single(param, r.clone()))
                .map(|y| y.is_zero())
                .unwrap_or(true)
        })
        .collect()
}

/// Verifies non-degeneracy and integrability exactly.
pub fn verify(p: &Presentation<CScalar>, data: &GcsData<CScalar>) -> Result<GcsVerdict<CScalar>, GcsError> {
    let top = nondegeneracy_coefficient(data);
    let exceptional = match p.parameters() {
        [param] => exceptional_roots(&top, param),
        _ => Vec::new(),
    };
    let drho = d_rho(p, data)?;
    let first_failure = drho.terms().next().map(|(b, c)| (*b, c.clone()));
    Ok(GcsVerdict {
        label: data.label.clone(),
        k: data.k,
        nondegenerate: !top.is_zero(),
        top_coefficient: top,
        exceptional_roots: exceptional,
        integrable: drho.is_zero(),
        first_failure,
    })
}

/// Floating re-verification at a parameter value; agreement of the top
/// coefficient with the exact one is checked to a relative tolerance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericCheck {
    pub top_exact: (f64, f64),
    pub top_numeric: (f64, f64),
    pub top_agrees: bool,
    /// `max |d rho| / max |rho|`.
    pub d_rho_relative: f64,
}

pub fn numeric_check(
    p: &Presentation<CScalar>,
    data: &GcsData<CScalar>,
    at: &Assignment,
    rel_tol: f64,
) -> Result<NumericCheck, GcsError> {
    use num_complex::Complex64;
    let num = |c: &CScalar| c.evaluate_numeric(at);
    let pn: Presentation<Complex64> = p.try_map_scalars(num)?;
    let forms = |f: &Form<CScalar>| f.try_map_coeffs(num);
    let dn = GcsData {
        label: data.label.clone(),
        k: data.k,
        b: forms(&data.b)?,
        omega: forms(&data.omega)?,
        thetas: data.thetas.iter().map(forms).collect::<Result<_, _>>()?,
    };
    let exact = nondegeneracy_coefficient(data).evaluate_numeric(at)?;
    let numeric = nondegeneracy_coefficient(&dn);
    let rho = build_rho(&dn)?;
    let drho = pn.differential(&rho);
    let max = |f: &Form<Complex64>| f.terms().map(|(_, c)| c.norm()).fold(0.0, f64::max);
    let scale = exact.norm().max(numeric.norm()).max(f64::MIN_POSITIVE);
    Ok(NumericCheck {
        top_exact: (exact.re, exact.im),
        top_numeric: (numeric.re, numeric.im),
        top_agrees: (exact - numeric).norm() <= rel_tol * scale,
        d_rho_relative: max(&drho) / max(&rho).max(f64::MIN_POSITIVE),
    })
}
