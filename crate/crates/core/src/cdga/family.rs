//! Built-in presentations.

use crate::scalars::{CScalar, Rational, Scalar};

use super::Presentation;

/// Name of the family parameter.
pub const ALPHA: &str = "alpha";

/// The 8-dimensional family `g_alpha` for any value of `alpha` in `S`:
///
/// ```text
/// de1 = de2 = de3 = de4 = 0
/// de5 = e12
/// de6 = e15 + (1-alpha) e24
/// de7 = -(1+alpha) e14 - e23 + (1+alpha) e25
/// de8 = e16 + e27 + e34 - 2 e45
/// ```
pub fn g_alpha_with<S: Scalar>(name: &str, parameters: &[&str], alpha: S) -> Presentation<S> {
    let one = S::one();
    let table: [(usize, usize, usize, S); 10] = [
        (5, 1, 2, one.clone()),
        (6, 1, 5, one.clone()),
        (6, 2, 4, one.clone() - alpha.clone()),
        (7, 1, 4, -(one.clone() + alpha.clone())),
        (7, 2, 3, -one.clone()),
        (7, 2, 5, one.clone() + alpha.clone()),
        (8, 1, 6, one.clone()),
        (8, 2, 7, one.clone()),
        (8, 3, 4, one.clone()),
        (8, 4, 5, S::from_i64(-2)),
    ];
    let mut p = Presentation::new(name, 8, parameters).expect("n = 8");
    for (j, i, k, c) in table {
        p.add_constant(j, i, k, c).expect("indices in range");
    }
    p
}

/// `g_alpha` with `alpha` symbolic.
pub fn g_alpha() -> Presentation<CScalar> {
    g_alpha_with("g_alpha", &[ALPHA], CScalar::param(ALPHA))
}

/// `g_alpha` at a rational value of the parameter.
pub fn g_alpha_at(alpha: &Rational) -> Presentation<CScalar> {
    g_alpha_with(&format!("g_{alpha}"), &[], CScalar::from(alpha.clone()))
}

/// The abelian Lie algebra of dimension `n` (all differentials zero).
pub fn abelian<S: Scalar>(n: usize) -> Presentation<S> {
    Presentation::new(&format!("abelian{n}"), n, &[]).expect("n <= 16")
}
