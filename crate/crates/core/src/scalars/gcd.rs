//! Multivariate polynomial gcd over the rationals by recursive
//! content / primitive-part splitting and primitive pseudo-remainder sequences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Poly, Rational, Var};

/// Monic greatest common divisor (leading coefficient 1 in graded-lex order).
/// `gcd(0, 0) = 0`.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.monic();
    }
    let (va, vb) = (a.vars(), b.vars());
    // A variable missing from one side cannot occur in the gcd.
    if let Some(v) = va.difference(&vb).next() {
        return poly_gcd(&content(a, v), b);
    }
    if let Some(v) = vb.difference(&va).next() {
        return poly_gcd(a, &content(b, v));
    }
    if va.len() == 1 {
        return euclid(a, b);
    }
    let main = va
        .iter()
        .min_by_key(|v| a.degree_in(v).max(b.degree_in(v)))
        .expect("nonconstant")
        .clone();

    let ca = content(a, &main);
    let cb = content(b, &main);
    let c = poly_gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(&main) < q.degree_in(&main) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = pseudo_remainder(&p, &q, &main);
        if r.is_zero() {
            break;
        }
        if r.degree_in(&main) == 0 {
            q = Poly::one();
            break;
        }
        p = q;
        q = primitive_part(&r, &main);
    }
    (&c * &primitive_part(&q, &main)).monic()
}

/// Univariate gcd over the rationals with monic remainders.
fn euclid(a: &Poly, b: &Poly) -> Poly {
    let v = a.vars().into_iter().next().expect("univariate");
    let (mut p, mut q) = (a.monic(), b.monic());
    if p.degree_in(&v) < q.degree_in(&v) {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        let n = q.degree_in(&v);
        let mut r = p;
        while !r.is_zero() && r.degree_in(&v) >= n {
            let shift = r.degree_in(&v) - n;
            let t = r.lead_coeff_in(&v).mul_monomial(&super::Monomial::power(v.clone(), shift));
            r = &r - &(&t * &q);
        }
        p = q;
        q = if r.is_zero() { r } else { r.monic() };
    }
    p.monic()
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
fn content(p: &Poly, v: &Var) -> Poly {
    let mut g = Poly::zero();
    for c in p.coeffs_in(v).into_values() {
        g = poly_gcd(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// `p` over its content in `v`, scaled to coprime integer coefficients so the
/// remainder sequence does not grow.
fn primitive_part(p: &Poly, v: &Var) -> Poly {
    let c = content(p, v);
    let pp = p.div_exact(&c).expect("content divides");
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for (_, q) in pp.terms() {
        num = num.gcd(q.numer());
        den = den.lcm(q.denom());
    }
    if num.is_zero() {
        return pp;
    }
    pp.scale(&Rational::new(den, num))
}

fn pseudo_remainder(a: &Poly, b: &Poly, v: &Var) -> Poly {
    let n = b.degree_in(v);
    let lcb = b.lead_coeff_in(v);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= n {
        let shift = r.degree_in(v) - n;
        let lcr = r.lead_coeff_in(v);
        let t = lcr.mul_monomial(&super::Monomial::power(v.clone(), shift));
        r = &(&lcb * &r) - &(&t * b);
    }
    r
}
