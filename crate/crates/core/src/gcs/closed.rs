//! The 12-parameter family of closed 2-forms on `g_alpha`.

use crate::exterior::Form;
use crate::scalars::{CScalar, Scalar};

/// Names of the free coefficients, in storage order.
pub const CLOSED2_NAMES: [&str; 12] = [
    "x12", "x13", "x14", "x15", "x16", "x17", "x23", "x24", "x25", "x27", "x34", "x37",
];

/// Values for `x12, ..., x37`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedTwoFormParams<S> {
    pub values: [S; 12],
}

impl<S: Scalar> ClosedTwoFormParams<S> {
    pub fn zero() -> ClosedTwoFormParams<S> {
        ClosedTwoFormParams {
            values: std::array::from_fn(|_| S::zero()),
        }
    }

    /// All zero except the named coefficients, which are set to 1.
    pub fn unit(names: &[&str]) -> ClosedTwoFormParams<S> {
        let mut p = ClosedTwoFormParams::zero();
        for name in names {
            p.set(name, S::one());
        }
        p
    }

    pub fn get(&self, name: &str) -> &S {
        &self.values[index(name)]
    }

    pub fn set(&mut self, name: &str, v: S) {
        self.values[index(name)] = v;
    }
}

impl ClosedTwoFormParams<CScalar> {
    /// Every coefficient a free parameter named after it.
    pub fn symbolic() -> ClosedTwoFormParams<CScalar> {
        ClosedTwoFormParams {
            values: CLOSED2_NAMES.map(CScalar::param),
        }
    }
}

fn index(name: &str) -> usize {
    CLOSED2_NAMES
        .iter()
        .position(|n| *n == name)
        .unwrap_or_else(|| panic!("unknown closed 2-form coefficient {name}"))
}

/// The general invariant closed 2-form on `g_alpha`, dependent coefficients included.
pub fn closed2_general<S: Scalar>(params: &ClosedTwoFormParams<S>, alpha: &S) -> Form<S> {
    let x = |name: &str| params.get(name).clone();
    let one = S::one();
    let ap = one.clone() + alpha.clone();
    let am = one.clone() - alpha.clone();
    let three = S::from_i64(3) + alpha.clone();
    let terms: Vec<([usize; 2], S)> = vec![
        ([1, 2], x("x12")),
        ([1, 3], x("x13")),
        ([1, 4], x("x14")),
        ([1, 5], x("x15")),
        ([1, 6], x("x16")),
        ([1, 7], x("x17")),
        ([1, 8], -(ap.clone() * x("x37"))),
        ([2, 3], x("x23")),
        ([2, 4], x("x24")),
        ([2, 5], x("x25")),
        ([2, 6], ap.clone() * x("x17")),
        ([2, 7], x("x27")),
        ([3, 4], x("x34")),
        ([3, 5], x("x17")),
        ([3, 7], x("x37")),
        ([4, 5], -(am * x("x16") + ap.clone() * x("x27"))),
        ([4, 6], ap.clone() * three * x("x37")),
        ([5, 7], -(ap * x("x37"))),
    ];
    let mut f = Form::zero(8);
    for (idx, c) in terms {
        f = &f + &Form::wedge_of(8, &idx, c);
    }
    f
}

/// `top(omega^4)` for the closed form with these parameters.
pub fn omega4_coefficient<S: Scalar>(params: &ClosedTwoFormParams<S>, alpha: &S) -> S {
    closed2_general(params, alpha).power(4).top_coefficient()
}
