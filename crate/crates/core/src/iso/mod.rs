//! Isomorphism tests between members of the `g_alpha` family.
//!
//! A linear map `F: g_alpha'^* -> g_alpha^*` is written as
//! `F(e'^i) = sum_j lambda^i_j e^j` with indeterminates `l{i}_{j}`. It
//! extends to a morphism of differential algebras exactly when every
//! residual `d(F e'^i) - F(d e'^i)` vanishes. Structural zeros of the
//! matrix come from characteristic ideals; the replay in [`replay_proof`]
//! then eliminates unknowns until every case ends in a contradiction or in
//! a forced relation between the parameters.

mod pattern;
mod script;
mod state;

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::cdga::{g_alpha_with, Presentation, PresentationError, ALPHA};
use crate::exterior::{Blade, Form};
use crate::invariants::{compare, fingerprint, Comparison, Fingerprint};
use crate::scalars::{Assignment, CScalar, ExprError, Poly, Rational, Scalar, Var};

pub use pattern::{zero_pattern, ZeroPattern};
pub use script::{replay_proof, IsoOutcome, IsoVerdict, TraceStep};
pub use state::{BranchStatus, BranchSummary, ConstraintState};

/// Name of the parameter of the source algebra.
pub const ALPHA_PRIME: &str = "alpha'";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IsoError {
    #[error("the ideal lemma does not apply: {0}")]
    Premises(String),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("step {label}: cannot parse '{text}': {err}")]
    Expr { label: String, text: String, err: ExprError },
    #[error("step {label}: residual is {residual}, claimed {claim}")]
    ClaimMismatch { label: String, residual: String, claim: String },
    #[error("step {label}: cannot show {factor} is nonzero")]
    NotNonzero { label: String, factor: String },
    #[error("step {label}: {factor} does not divide {poly}")]
    NotDivisible { label: String, factor: String, poly: String },
    #[error("step {label}: {poly} cannot be solved for {var}")]
    NotSolvable { label: String, var: String, poly: String },
    #[error("step {label}: {var} normalizes to {got}, expected {expected}")]
    ValueMismatch { label: String, var: String, expected: String, got: String },
    #[error("{0} is not a member of the g_alpha family")]
    NotFamilyMember(String),
}

/// A value of the family parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphaSpec {
    Symbolic,
    Value(Rational),
}

impl AlphaSpec {
    fn as_poly(&self, name: &str) -> Poly {
        match self {
            AlphaSpec::Symbolic => Poly::var(name),
            AlphaSpec::Value(q) => Poly::constant(q.clone()),
        }
    }

    pub fn label(&self, name: &str) -> String {
        match self {
            AlphaSpec::Symbolic => name.to_string(),
            AlphaSpec::Value(q) => q.to_string(),
        }
    }
}

/// Serialized as `"symbolic"` or the value as a string like `"22/7"`.
impl Serialize for AlphaSpec {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        match self {
            AlphaSpec::Symbolic => s.serialize_str("symbolic"),
            AlphaSpec::Value(q) => s.serialize_str(&q.to_string()),
        }
    }
}

/// Whether the unknowns are real or complex numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldMode {
    Real,
    Complex,
}

pub fn lambda_name(i: usize, j: usize) -> String {
    format!("l{i}_{j}")
}

/// Real and imaginary part of a complex unknown.
pub fn split_names(i: usize, j: usize) -> (String, String) {
    (format!("re_l{i}_{j}"), format!("im_l{i}_{j}"))
}

fn split_of(v: &Var) -> Option<(String, String)> {
    let name = v.name();
    name.starts_with('l').then(|| (format!("re_{name}"), format!("im_{name}")))
}

/// The image of `l{i}_{j}` under `lambda -> re + i im`; other variables stay real.
pub fn lift_var(v: &Var) -> CScalar {
    match split_of(v) {
        Some((re, im)) => CScalar::param(&re) + CScalar::param(&im).mul_i(),
        None => CScalar::param(v.name()),
    }
}

/// Ring map `Q[lambda, alpha, alpha'] -> Q[re, im, alpha, alpha'] (x) C`.
pub fn lift_poly(p: &Poly) -> CScalar {
    let mut out = CScalar::zero();
    for (m, c) in p.terms() {
        let mut t = CScalar::from(c.clone());
        for (v, e) in m.factors() {
            let x = lift_var(v);
            for _ in 0..*e {
                t = t * x.clone();
            }
        }
        out = out + t;
    }
    out
}

/// The matrix `(lambda^i_j)` with structural zeros.
#[derive(Clone, Debug)]
pub struct SymbolicMatrix {
    n: usize,
    zeros: BTreeSet<(usize, usize)>,
}

impl SymbolicMatrix {
    pub fn new(n: usize, zeros: BTreeSet<(usize, usize)>) -> SymbolicMatrix {
        SymbolicMatrix { n, zeros }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero_entry(&self, i: usize, j: usize) -> bool {
        self.zeros.contains(&(i, j))
    }

    pub fn unknowns(&self) -> Vec<(usize, usize)> {
        (1..=self.n)
            .flat_map(|i| (1..=self.n).map(move |j| (i, j)))
            .filter(|e| !self.zeros.contains(e))
            .collect()
    }

    /// `F(e'^i)` for all `i`, with entry `(i, j)` given by `entry`.
    pub fn images<S: Scalar>(&self, entry: impl Fn(usize, usize) -> S) -> Vec<Form<S>> {
        (1..=self.n)
            .map(|i| {
                let mut f = Form::zero(self.n);
                for j in 1..=self.n {
                    if !self.is_zero_entry(i, j) {
                        f.add_term(Blade::generator(j), entry(i, j));
                    }
                }
                f
            })
            .collect()
    }

    pub fn real_images(&self) -> Vec<Form<Poly>> {
        self.images(|i, j| Poly::var(&lambda_name(i, j)))
    }

    pub fn split_images(&self) -> Vec<Form<CScalar>> {
        self.images(|i, j| lift_var(&Var::new(&lambda_name(i, j))))
    }
}

/// `R^i = d_target(F e'^i) - F(d_source e'^i)` for `i = 1..n`.
pub fn residual_forms<S: Scalar>(
    target: &Presentation<S>,
    source: &Presentation<S>,
    images: &[Form<S>],
) -> Result<Vec<Form<S>>, IsoError> {
    (1..=source.dim())
        .map(|i| {
            let pulled = source.de(i).apply_linear(images).map_err(|e| {
                IsoError::Premises(format!("dimension mismatch: {e}"))
            })?;
            Ok(&target.differential(&images[i - 1]) - &pulled)
        })
        .collect()
}

/// Residuals of a candidate map between `g_alpha` (target) and
/// `g_alpha'` (source), cached per mode.
pub struct ResidualEngine {
    mode: FieldMode,
    real: Vec<Form<Poly>>,
    split: Option<Vec<Form<CScalar>>>,
}

/// `g_alpha` with coefficients in `Q[alpha]` (or at a value).
pub fn family_poly(spec: &AlphaSpec, param: &str) -> Presentation<Poly> {
    let params: Vec<&str> = match spec {
        AlphaSpec::Symbolic => vec![param],
        AlphaSpec::Value(_) => Vec::new(),
    };
    g_alpha_with(&format!("g_{}", spec.label(param)), &params, spec.as_poly(param))
}

impl ResidualEngine {
    pub fn new(alpha: &AlphaSpec, alpha_p: &AlphaSpec, matrix: &SymbolicMatrix, mode: FieldMode) -> Result<Self, IsoError> {
        let target = family_poly(alpha, ALPHA);
        let source = family_poly(alpha_p, ALPHA_PRIME);
        let real = residual_forms(&target, &source, &matrix.real_images())?;
        let split = match mode {
            FieldMode::Real => None,
            FieldMode::Complex => {
                let t = target.map_scalars(|c| CScalar::from(c.clone()));
                let s = source.map_scalars(|c| CScalar::from(c.clone()));
                Some(residual_forms(&t, &s, &matrix.split_images())?)
            }
        };
        Ok(ResidualEngine { mode, real, split })
    }

    pub fn mode(&self) -> FieldMode {
        self.mode
    }

    /// Coefficient of `e^{jr}` in `R^i`, as a polynomial in the unknowns.
    pub fn residual_coeff(&self, i: usize, j: usize, r: usize) -> Poly {
        let (b, sign) = ordered_pair(j, r);
        let c = self.real[i - 1].coefficient(b);
        if sign < 0 {
            -c
        } else {
            c
        }
    }

    /// Same coefficient with every unknown split into real and imaginary part.
    pub fn split_coeff(&self, i: usize, j: usize, r: usize) -> Option<CScalar> {
        let (b, sign) = ordered_pair(j, r);
        self.split.as_ref().map(|s| {
            let c = s[i - 1].coefficient(b);
            if sign < 0 {
                -c
            } else {
                c
            }
        })
    }

    pub fn residuals(&self) -> &[Form<Poly>] {
        &self.real
    }
}

fn ordered_pair(j: usize, r: usize) -> (Blade, i32) {
    if j < r {
        (Blade::of(&[j, r]), 1)
    } else {
        (Blade::of(&[r, j]), -1)
    }
}

/// Recognizes a presentation as `g_alpha` with symbolic `alpha` or at a value.
pub fn family_parameter(p: &Presentation<CScalar>) -> Option<AlphaSpec> {
    if p.dim() != 8 {
        return None;
    }
    // a^6_24 = 1 - alpha
    let c = p.constant(6, 2, 4);
    let spec = match c.constant_value() {
        Some(v) => AlphaSpec::Value(Rational::from_integer(1.into()) - v),
        None => {
            if c != CScalar::from_int(1) - CScalar::param(ALPHA) {
                return None;
            }
            AlphaSpec::Symbolic
        }
    };
    let expected: Presentation<CScalar> = family_poly(&spec, ALPHA).map_scalars(|c| CScalar::from(c.clone()));
    let same = p.constants().count() == expected.constants().count()
        && expected.constants().all(|(&(j, i, k), v)| p.constant(j, i, k) == *v);
    same.then_some(spec)
}

/// Invariant comparison, the cheap first stage of [`compare_presentations`].
pub fn quick_check(
    a: &Presentation<CScalar>,
    b: &Presentation<CScalar>,
    sample: &Assignment,
) -> Result<(Fingerprint, Fingerprint, Comparison), IsoError> {
    let fa = fingerprint(a, sample)?;
    let fb = fingerprint(b, sample)?;
    let c = compare(&fa, &fb);
    Ok((fa, fb, c))
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CompareOutcome {
    /// Some invariant differs.
    DistinctInvariants(Vec<String>),
    Proof(IsoVerdict),
    /// Invariants agree and no proof script applies.
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareReport {
    pub left: Fingerprint,
    pub right: Fingerprint,
    pub outcome: CompareOutcome,
}

impl CompareReport {
    /// `true` when the two algebras were shown to be non-isomorphic.
    pub fn distinct(&self) -> bool {
        match &self.outcome {
            CompareOutcome::DistinctInvariants(_) => true,
            CompareOutcome::Proof(v) => v.outcome == IsoOutcome::NonIsomorphicCertified,
            CompareOutcome::Inconclusive => false,
        }
    }
}

/// Fingerprints first; when they agree and both inputs belong to the
/// family, the elimination proof is replayed.
pub fn compare_presentations(
    a: &Presentation<CScalar>,
    b: &Presentation<CScalar>,
    sample: &Assignment,
    mode: FieldMode,
) -> Result<CompareReport, IsoError> {
    let (left, right, c) = quick_check(a, b, sample)?;
    let outcome = match c {
        Comparison::Distinct(d) => CompareOutcome::DistinctInvariants(d),
        Comparison::Indistinguishable => match (family_parameter(a), family_parameter(b)) {
            (Some(x), Some(y)) => CompareOutcome::Proof(replay_proof(&x, &y, mode)?),
            _ => CompareOutcome::Inconclusive,
        },
    };
    Ok(CompareReport { left, right, outcome })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(i: usize, j: usize) -> Poly {
        Poly::var(&lambda_name(i, j))
    }

    #[test]
    fn lift_is_multiplicative() {
        let p = &l(1, 2) * &l(5, 3);
        assert_eq!(lift_poly(&p), lift_poly(&l(1, 2)) * lift_poly(&l(5, 3)));
    }

    #[test]
    fn recognizes_family_members() {
        use crate::cdga::{g_alpha, g_alpha_at};
        assert_eq!(family_parameter(&g_alpha()), Some(AlphaSpec::Symbolic));
        let two = Rational::from_integer(2.into());
        assert_eq!(family_parameter(&g_alpha_at(&two)), Some(AlphaSpec::Value(two)));
        let mut bad = g_alpha();
        bad.set_constant(8, 1, 6, CScalar::from_int(2)).unwrap();
        assert_eq!(family_parameter(&bad), None);
    }
}
