use num_traits::Zero;
use nilgcs::cdga::{g_alpha, ALPHA};
use nilgcs::exterior::{Blade, Form};
use nilgcs::gcs::{
    beta_check, catalog, catalog_entry, closed2_general, fi_equations, integrability_parts, numeric_check,
    omega4_coefficient, verify, AlphaMode, ClosedTwoFormParams, GcsData, ThetaFrame, CLOSED2_NAMES,
};
use nilgcs::scalars::{Assignment, CScalar, Poly, Rational};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn samples() -> Vec<Rational> {
    vec![q(1, 2), q(1, 1), q(2, 1), q(5, 1), q(22, 7)]
}

fn p(name: &str) -> Poly {
    Poly::var(name)
}

fn k(n: i64) -> Poly {
    Poly::from_int(n)
}

#[test]
fn fi_equations_hold() {
    let g = g_alpha();
    for line in fi_equations(&g) {
        assert!(line.holds(), "d theta{} = {} but expected {}", line.index, line.computed, line.expected);
    }
}

#[test]
fn no_zero_two_component() {
    let g = g_alpha();
    let entry = catalog_entry(4);
    let frame = ThetaFrame::new(&entry.thetas).expect("frame");
    for (a, part) in frame.zero_two_components(&g).iter().enumerate() {
        assert!(part.is_zero(), "d theta{} has (0,2) part {}", a + 1, part);
    }
}

#[test]
fn symbolic_catalog_passes() {
    let g = g_alpha();
    for data in catalog(&AlphaMode::Symbolic).unwrap() {
        let v = verify(&g, &data).unwrap();
        assert!(v.passed(), "{} failed: {:?}", data.label, v);
        assert!(v.exceptional_roots.is_empty(), "{}: {:?}", data.label, v.exceptional_roots);
    }
}

#[test]
fn catalog_at_samples() {
    for a in samples() {
        let g = g_alpha().specialize(&Assignment::single(ALPHA, a.clone())).unwrap();
        for data in catalog(&AlphaMode::Value(a.clone())).unwrap() {
            let v = verify(&g, &data).unwrap();
            assert!(v.passed(), "{} at alpha = {a}", data.label);
        }
    }
}

#[test]
fn nonpositive_alpha_rejected() {
    assert!(catalog(&AlphaMode::Value(q(0, 1))).is_err());
    assert!(catalog(&AlphaMode::Value(q(-1, 2))).is_err());
}

#[test]
fn type1_coefficient() {
    // 12 i (1+alpha)^3 x17 x37^2 with general x17, x37
    let mut params = ClosedTwoFormParams::<CScalar>::zero();
    params.set("x17", CScalar::param("x17"));
    params.set("x37", CScalar::param("x37"));
    let alpha = CScalar::param(ALPHA);
    let omega = closed2_general(&params, &alpha);
    let big = &Form::wedge_of(8, &[3], CScalar::from_int(1)) + &Form::wedge_of(8, &[4], CScalar::i());
    let data = GcsData::new("t1", 1, Form::zero(8), omega, vec![big]).unwrap();
    let top = nilgcs::gcs::verify(&g_alpha(), &data).unwrap().top_coefficient;
    let ap = &k(1) + &p(ALPHA);
    let expected = &(&(&(&ap * &ap) * &ap) * &p("x17")) * &(&p("x37") * &p("x37"));
    assert_eq!(top, CScalar::from(expected.scale(&q(12, 1))).mul_i());
}

#[test]
fn omega4_matches_closed_form() {
    let params = ClosedTwoFormParams::symbolic();
    let top = omega4_coefficient(&params, &CScalar::param(ALPHA));
    let a = p(ALPHA);
    let ap = &k(1) + &a;
    let am = &k(1) - &a;
    let a3 = &k(3) + &a;
    let x = |n: &str| p(n);
    let inner1 = &(&(&am * &x("x16")) - &x("x27").scale(&q(2, 1))) + &(&ap * &x("x34"));
    let inner2 = &(&(&ap * &a3) * &x("x23")) + &(&a3 * &x("x25"));
    let bracket = &(&inner1 * &x("x17")) + &(&inner2 * &x("x37"));
    let expected = (&(&(&ap * &ap) * &(&x("x37") * &x("x37"))) * &bracket).scale(&q(-24, 1));
    assert_eq!(top, CScalar::from(expected));

    // x17 = x23 = 0, x25 = x37 = 1
    let unit = ClosedTwoFormParams::<CScalar>::unit(&["x25", "x37"]);
    let special = omega4_coefficient(&unit, &CScalar::param(ALPHA));
    assert_eq!(special, CScalar::from((&(&ap * &ap) * &a3).scale(&q(-24, 1))));
    assert!(omega4_coefficient(&ClosedTwoFormParams::<CScalar>::zero(), &CScalar::param(ALPHA)).is_zero());
}

#[test]
fn closed_family_is_closed_and_spans_kernel() {
    let g = g_alpha();
    let alpha = CScalar::param(ALPHA);
    let general = closed2_general(&ClosedTwoFormParams::symbolic(), &alpha);
    assert!(g.differential(&general).is_zero());
    let directions: Vec<Form<CScalar>> = CLOSED2_NAMES
        .iter()
        .map(|n| closed2_general(&ClosedTwoFormParams::unit(&[n]), &alpha))
        .collect();
    let kernel = g.closed_basis(2);
    assert_eq!(kernel.len(), 12);
    // Both families are closed; equal rank of the union shows equal spans.
    let rank = |forms: &[Form<CScalar>]| {
        let blades = Blade::all_of_grade(8, 2);
        let rows = forms
            .iter()
            .map(|f| blades.iter().enumerate().filter_map(|(i, b)| {
                let c = f.coefficient(*b);
                (!c.is_zero()).then_some((i, c))
            }).collect())
            .collect();
        <CScalar as nilgcs::linalg::Rank>::rank_of(rows).rank
    };
    assert_eq!(rank(&directions), 12);
    let mut union = directions.clone();
    union.extend(kernel);
    assert_eq!(rank(&union), 12);
}

#[test]
fn type0_with_e18_fails() {
    let g = g_alpha();
    let omega = Form::wedge_of(8, &[1, 8], CScalar::from_int(1));
    let data = GcsData::new("bad", 0, Form::zero(8), omega, vec![]).unwrap();
    let v = verify(&g, &data).unwrap();
    assert!(!v.integrable);
    let d = g.differential(&Form::wedge_of(8, &[1, 8], CScalar::from_int(1)));
    let expected = &(&Form::wedge_of(8, &[1, 2, 7], CScalar::from_int(-1))
        + &Form::wedge_of(8, &[1, 3, 4], CScalar::from_int(-1)))
        + &Form::wedge_of(8, &[1, 4, 5], CScalar::from_int(2));
    assert_eq!(d, expected);
}

#[test]
fn integrability_splits_for_types_1_and_3() {
    let g = g_alpha();
    for k in [1, 3] {
        let (d_om, twisted) = integrability_parts(&g, &catalog_entry(k));
        assert!(d_om.is_zero() && twisted.is_zero(), "type {k}");
    }
}

#[test]
fn beta_deformation_matches_type2() {
    let frame = ThetaFrame::new(&catalog_entry(4).thetas).unwrap();
    let check = beta_check(&frame, &catalog_entry(2)).unwrap();
    assert_eq!(check.sign, 1);
    assert!(check.e_basis_agrees);
}

#[test]
fn numeric_cross_check() {
    let g = g_alpha();
    for a in samples() {
        let at = Assignment::single(ALPHA, a);
        for data in catalog(&AlphaMode::Symbolic).unwrap() {
            let c = numeric_check(&g, &data, &at, 1e-9).unwrap();
            assert!(c.top_agrees, "{}: {:?}", data.label, c);
            assert!(c.d_rho_relative < 1e-9, "{}: {:?}", data.label, c);
        }
    }
}
