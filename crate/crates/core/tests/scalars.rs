use nilgcs::scalars::{poly_gcd, Assignment, CScalar, Conjugate, ExtScalar, Poly, RatFunc, Radicand, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn poly() -> impl Strategy<Value = Poly> {
    let vars = ["alpha", "x", "y"];
    prop::collection::vec((-4i64..=4, 1i64..=3, 0u32..3, 0u32..3, 0u32..2), 0..5).prop_map(move |terms| {
        terms.into_iter().fold(Poly::zero(), |acc, (n, d, a, b, c)| {
            let m = &(&Poly::var(vars[0]).pow(a) * &Poly::var(vars[1]).pow(b)) * &Poly::var(vars[2]).pow(c);
            acc + m.scale(&q(n, d))
        })
    })
}

/// Denominators shaped like the ones the library meets: mostly `alpha`, at
/// most linear in one other variable.
fn denominator() -> impl Strategy<Value = Poly> {
    (prop::collection::vec(-3i64..=3, 1..4), -2i64..=2, prop::sample::select(vec!["x", "y"])).prop_map(|(cs, lin, v)| {
        let a = Poly::var("alpha");
        let p = cs.iter().enumerate().fold(Poly::zero(), |acc, (k, &c)| acc + a.pow(k as u32).scale(&q(c, 1)));
        p + Poly::var(v).scale(&q(lin, 1))
    })
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (poly(), denominator()).prop_filter_map("zero denominator", |(n, d)| RatFunc::new(n, d).ok())
}

/// Rational functions in `alpha` only, so evaluation is always exact.
fn alpha_ratfunc() -> impl Strategy<Value = RatFunc> {
    (prop::collection::vec(-3i64..=3, 1..4), prop::collection::vec(0i64..=3, 1..3)).prop_map(|(num, den)| {
        let a = Poly::var("alpha");
        let n = num.iter().enumerate().fold(Poly::zero(), |acc, (k, &c)| acc + a.pow(k as u32).scale(&q(c, 1)));
        // Positive coefficients keep the denominator nonzero at alpha > 0.
        let d = den.iter().enumerate().fold(Poly::from_int(1), |acc, (k, &c)| acc + a.pow(k as u32 + 1).scale(&q(c, 1)));
        RatFunc::new(n, d).unwrap()
    })
}

fn ext() -> impl Strategy<Value = ExtScalar> {
    (alpha_ratfunc(), alpha_ratfunc(), any::<bool>())
        .prop_map(|(a, b, rad)| if rad { ExtScalar::new(a, b, Radicand::default_alpha()) } else { ExtScalar::from_ratfunc(a) })
}

fn cscalar() -> impl Strategy<Value = CScalar> {
    (ext(), ext()).prop_map(|(re, im)| CScalar::new(re, im))
}

/// `3 + alpha` is a rational square at these values.
fn square_assignment() -> impl Strategy<Value = Assignment> {
    prop::sample::select(vec![1i64, 6, 13, 22, 33]).prop_map(|a| Assignment::single("alpha", q(a, 1)))
}

/// `(a + b s)` as a pair, multiplied with `s^2 = r`.
fn pair_mul(x: &(RatFunc, RatFunc), y: &(RatFunc, RatFunc), r: &RatFunc) -> (RatFunc, RatFunc) {
    (
        x.0.clone() * y.0.clone() + x.1.clone() * y.1.clone() * r.clone(),
        x.0.clone() * y.1.clone() + x.1.clone() * y.0.clone(),
    )
}

fn as_pair(e: &ExtScalar) -> (RatFunc, RatFunc) {
    (e.rational_part().clone(), e.radical_part().clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn poly_ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        prop_assert_eq!(a.clone() + b.clone(), b + a.clone());
        prop_assert!((a.clone() - a).is_zero());
    }

    #[test]
    fn ratfunc_field_axioms(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        prop_assert!((a.clone() - a.clone()).is_zero());
        prop_assert_eq!(a.clone() - a.clone(), RatFunc::zero());
        if !b.is_zero() {
            prop_assert_eq!((a.clone() / b.clone()) * b, a);
        }
    }

    #[test]
    fn cscalar_ring_axioms(a in cscalar(), b in cscalar(), c in cscalar()) {
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        prop_assert_eq!(a.clone() * b.clone(), b * a.clone());
        prop_assert_eq!(a.clone() - a, CScalar::zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn conjugation_is_multiplicative(a in cscalar(), b in cscalar()) {
        prop_assert_eq!((a.clone() * b.clone()).conj(), a.conj() * b.conj());
        prop_assert_eq!((a.clone() + b.clone()).conj(), a.conj() + b.conj());
        prop_assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn evaluation_is_multiplicative(a in cscalar(), b in cscalar(), at in square_assignment()) {
        let (ar, ai) = a.evaluate(&at).unwrap();
        let (br, bi) = b.evaluate(&at).unwrap();
        let (pr, pi) = (a * b).evaluate(&at).unwrap();
        prop_assert_eq!(pr, &ar * &br - &ai * &bi);
        prop_assert_eq!(pi, &ar * &bi + &ai * &br);
    }

    #[test]
    fn products_reduce_to_degree_one(xs in prop::collection::vec(ext(), 1..=4)) {
        let r = RatFunc::from(Poly::from_int(3) + Poly::var("alpha"));
        let expect = xs.iter().skip(1).fold(as_pair(&xs[0]), |acc, x| pair_mul(&acc, &as_pair(x), &r));
        let got = xs.iter().skip(1).fold(xs[0].clone(), |acc, x| acc * x.clone());
        prop_assert_eq!(as_pair(&got), expect);
    }

    #[test]
    fn inverse_of_nonzero(a in ext()) {
        prop_assume!(!a.is_zero());
        let inv = a.recip().unwrap();
        prop_assert_eq!(a * inv, ExtScalar::from_ratfunc(RatFunc::from(Poly::from_int(1))));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// The gcd recovers a planted common factor: `gcd(f g, f h)` is `f` up to
    /// the cofactor gcd, checked by exact division both ways.
    #[test]
    fn gcd_finds_planted_factor(f in poly(), g in poly(), h in poly()) {
        prop_assume!(!f.is_zero() && !g.is_zero() && !h.is_zero());
        let a = &f * &g;
        let b = &f * &h;
        let d = poly_gcd(&a, &b);
        prop_assert!(a.div_exact(&d).is_some() && b.div_exact(&d).is_some());
        prop_assert!(d.div_exact(&f.monic()).is_some(), "gcd {} misses factor {}", d, f);
        let (ca, cb) = (a.div_exact(&d).unwrap(), b.div_exact(&d).unwrap());
        prop_assert!(poly_gcd(&ca, &cb).is_one());
    }
}

#[test]
fn s_squared_is_the_radicand() {
    let s = ExtScalar::sqrt_of(Radicand::default_alpha());
    let expect = ExtScalar::from_ratfunc(RatFunc::from(Poly::from_int(3) + Poly::var("alpha")));
    assert_eq!(s.clone() * s, expect);
}
