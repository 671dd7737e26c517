//! The five structures on `g_alpha`, one of each type `k = 4, 3, 2, 1, 0`.

use crate::cdga::{Presentation, ALPHA};
use crate::exterior::Form;
use crate::scalars::{Assignment, CScalar, Radicand, Rational};

use super::closed::{closed2_general, ClosedTwoFormParams};
use super::{GcsData, GcsError};

#[derive(Clone, Debug, PartialEq)]
pub enum AlphaMode {
    Symbolic,
    Value(Rational),
}

fn c(n: i64) -> CScalar {
    CScalar::from_int(n)
}

fn half() -> CScalar {
    CScalar::rational(1, 2)
}

fn e(j: usize, coeff: CScalar) -> Form<CScalar> {
    Form::wedge_of(8, &[j], coeff)
}

/// The complex 1-forms `theta^1..theta^4` in the basis `e^j`, with `alpha`
/// symbolic and `s = sqrt(3 + alpha)`.
pub fn theta_forms() -> [Form<CScalar>; 4] {
    let alpha = CScalar::param(ALPHA);
    let i = CScalar::i();
    let s = CScalar::sqrt_of(Radicand::default_alpha());
    let inv_s = s.recip().expect("s is invertible");
    let ap2 = {
        let ap = c(1) + alpha.clone();
        ap.clone() * ap
    };
    let inv_ap2 = ap2.recip().expect("(1+alpha)^2 is invertible");

    // theta1 = 1/2 (e1/s - e2) + i/2 (e1/s + e2)
    let t1 = &e(1, half() * inv_s.clone() * (c(1) + i.clone())) + &e(2, half() * (i.clone() - c(1)));
    // theta2 = -alpha e4 - (i/s)(e3/2 + e5)
    let t2 = &(&e(4, -alpha.clone()) + &e(3, -(i.clone() * inv_s.clone() * half())))
        + &e(5, -(i.clone() * inv_s.clone()));
    // theta3 = c (e6 - e7/s) + i c (e6 + e7/s), c = alpha/(1+alpha)^2
    let k3 = alpha.clone() * inv_ap2.clone();
    let t3 = &e(6, k3.clone() * (c(1) + i.clone())) + &e(7, k3 * inv_s.clone() * (i.clone() - c(1)));
    // theta4 = (1/s)(e5 + (1-alpha)/(2(1+alpha)^2) e3) - i alpha (e4 + 2/((1+alpha)^2 s) e8)
    let t4 = &(&e(5, inv_s.clone()) + &e(3, inv_s.clone() * (c(1) - alpha.clone()) * half() * inv_ap2.clone()))
        + &(&e(4, -(i.clone() * alpha.clone())) + &e(8, -(i * alpha * c(2) * inv_ap2 * inv_s)));
    [t1, t2, t3, t4]
}

/// The catalog entry of type `k`, with `alpha` symbolic.
pub fn catalog_entry(k: usize) -> GcsData<CScalar> {
    let th = theta_forms();
    let zero = Form::zero(8);
    let i = CScalar::i();
    let alpha = CScalar::param(ALPHA);
    let build = |label: &str, b: Form<CScalar>, omega: Form<CScalar>, thetas: Vec<Form<CScalar>>| {
        GcsData::new(label, thetas.len(), b, omega, thetas).expect("catalog data is well formed")
    };
    match k {
        4 => build("type4", zero.clone(), zero, th.to_vec()),
        3 => {
            let omega = (&th[3] ^ &th[3].conj()).scale(&i);
            build("type3", zero, omega, th[..3].to_vec())
        }
        2 => {
            let t34 = &th[2] ^ &th[3];
            let t34c = t34.conj();
            let b = (&t34 + &t34c).scale(&half());
            let omega = (&t34 - &t34c).scale(&-(i * half()));
            build("type2", b, omega, th[..2].to_vec())
        }
        1 => {
            let omega = closed2_general(&ClosedTwoFormParams::unit(&["x17", "x37"]), &alpha);
            let big = &e(3, c(1)) + &e(4, CScalar::i());
            build("type1", zero, omega, vec![big])
        }
        0 => {
            let omega = closed2_general(&ClosedTwoFormParams::unit(&["x25", "x37"]), &alpha);
            build("type0", zero, omega, Vec::new())
        }
        _ => panic!("the catalog has types 0..=4, not {k}"),
    }
}

/// Types 4, 3, 2, 1, 0 in that order.
pub fn catalog(mode: &AlphaMode) -> Result<Vec<GcsData<CScalar>>, GcsError> {
    let entries: Vec<GcsData<CScalar>> = [4, 3, 2, 1, 0].into_iter().map(catalog_entry).collect();
    match mode {
        AlphaMode::Symbolic => Ok(entries),
        AlphaMode::Value(q) => {
            if *q <= Rational::from_integer(0.into()) {
                return Err(GcsError::NonPositiveAlpha(q.clone()));
            }
            let a = Assignment::single(ALPHA, q.clone());
            Ok(entries.iter().map(|d| d.specialize(&a)).collect::<Result<_, _>>()?)
        }
    }
}

/// One line of the structure equations in the theta-frame.
#[derive(Clone, Debug, PartialEq)]
pub struct FiCheck {
    pub index: usize,
    pub computed: Form<CScalar>,
    pub expected: Form<CScalar>,
}

impl FiCheck {
    pub fn holds(&self) -> bool {
        self.computed == self.expected
    }
}

/// `d theta^i` against
///
/// ```text
/// d theta1 = 0
/// d theta2 = theta1 ^ conj(theta1)
/// d theta3 = theta1^theta4 + theta1^conj(theta4) + 2 alpha/(1+alpha)^2 theta2^conj(theta1)
///            + 2i/(1+alpha)^2 theta1^conj(theta2)
/// d theta4 = i theta1^conj(theta1) - 2/(1+alpha)^2 theta2^conj(theta2)
///            - i theta1^conj(theta3) + i theta3^conj(theta1)
/// ```
pub fn fi_equations(p: &Presentation<CScalar>) -> Vec<FiCheck> {
    let th = theta_forms();
    let tb: Vec<Form<CScalar>> = th.iter().map(Form::conj).collect();
    let i = CScalar::i();
    let alpha = CScalar::param(ALPHA);
    let inv_ap2 = {
        let ap = c(1) + alpha.clone();
        (ap.clone() * ap).recip().expect("invertible")
    };
    let w = |a: &Form<CScalar>, b: &Form<CScalar>| a ^ b;
    let expected = [
        Form::zero(8),
        w(&th[0], &tb[0]),
        &(&(&w(&th[0], &th[3]) + &w(&th[0], &tb[3])) + &w(&th[1], &tb[0]).scale(&(c(2) * alpha * inv_ap2.clone())))
            + &w(&th[0], &tb[1]).scale(&(c(2) * i.clone() * inv_ap2.clone())),
        &(&(&w(&th[0], &tb[0]).scale(&i) - &w(&th[1], &tb[1]).scale(&(c(2) * inv_ap2)))
            - &w(&th[0], &tb[2]).scale(&i))
            + &w(&th[2], &tb[0]).scale(&i),
    ];
    th.iter()
        .zip(expected)
        .enumerate()
        .map(|(idx, (t, exp))| FiCheck {
            index: idx + 1,
            computed: p.differential(t),
            expected: exp,
        })
        .collect()
}
