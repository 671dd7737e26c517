use std::path::PathBuf;

use nilgcs::cdga::{g_alpha, Presentation};
use nilgcs::exterior::Form;
use nilgcs::frontend::{parse, pretty, pretty_presentation, Document};
use nilgcs::gcs::GcsData;
use nilgcs::scalars::{CScalar, Poly, RatFunc, Radicand, Rational};
use proptest::prelude::*;

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(path).unwrap()
}

fn doc(text: &str) -> Document {
    let parsed = parse(text);
    assert!(parsed.errors().next().is_none(), "{:?}", parsed.diagnostics);
    parsed.document.unwrap()
}

fn alpha_poly(c0: i64, c1: i64) -> CScalar {
    CScalar::from(&Poly::from_int(c0) + &Poly::var("alpha").scale(&Rational::from_integer(c1.into())))
}

#[test]
fn g_alpha_fixture_matches_golden_table() {
    let d = doc(&fixture("g_alpha.cdga"));
    let p = &d.presentation;
    assert_eq!(p.name(), "g_alpha");
    assert_eq!(p.dim(), 8);
    assert_eq!(p.parameters(), ["alpha".to_string()]);
    let golden = [
        (5, 1, 2, alpha_poly(1, 0)),
        (6, 1, 5, alpha_poly(1, 0)),
        (6, 2, 4, alpha_poly(1, -1)),
        (7, 1, 4, alpha_poly(-1, -1)),
        (7, 2, 3, alpha_poly(-1, 0)),
        (7, 2, 5, alpha_poly(1, 1)),
        (8, 1, 6, alpha_poly(1, 0)),
        (8, 2, 7, alpha_poly(1, 0)),
        (8, 3, 4, alpha_poly(1, 0)),
        (8, 4, 5, alpha_poly(-2, 0)),
    ];
    let got: Vec<_> = p.constants().map(|(&(j, i, k), c)| (j, i, k, c.clone())).collect();
    assert_eq!(got, golden.to_vec());
    assert_eq!(*p, g_alpha());
}

#[test]
fn value_fixtures() {
    for (file, a) in [("g_1.cdga", 1), ("g_2.cdga", 2)] {
        let d = doc(&fixture(file));
        assert_eq!(d.presentation, nilgcs::cdga::g_alpha_at(&Rational::from_integer(a.into())));
    }
}

#[test]
fn spec_examples() {
    let p = doc("algebra t over Q\ndim 8\nd e5 = e1^e2\n").presentation;
    assert_eq!(p.constant(5, 1, 2), CScalar::from_int(1));

    let p = doc("algebra t over Q(alpha)\ndim 8\nd e7 = -(1+alpha) e1^e4 - e2^e3 + (1+alpha) e2^e5\n").presentation;
    assert_eq!(p.constants().count(), 3);
    assert_eq!(p.constant(7, 1, 4), alpha_poly(-1, -1));
    assert_eq!(p.constant(7, 2, 3), CScalar::from_int(-1));
    assert_eq!(p.constant(7, 2, 5), alpha_poly(1, 1));

    let r = parse("algebra t over Q\ndim 8\nd e9 = e1^e2\n");
    let errs: Vec<_> = r.errors().collect();
    assert_eq!(errs.len(), 1);
    assert!(errs[0].message.contains("out of range"), "{}", errs[0]);
    assert_eq!((errs[0].line, errs[0].column), (3, 3));
}

#[test]
fn reversed_wedge_flips_sign_and_warns() {
    let r = parse("algebra t over Q\ndim 3\nd e3 = 2 e2^e1\nd e2 = e1^e3\n");
    let d = r.document.as_ref().unwrap();
    assert_eq!(d.presentation.constant(3, 1, 2), CScalar::from_int(-2));
    let warns: Vec<_> = r.warnings().collect();
    assert_eq!(warns.len(), 1);
    assert_eq!(warns[0].line, 4);
}

#[test]
fn coefficient_forms() {
    let p = doc("algebra t over Q(a, b)\ndim 4\nd e4 = 1/2 e1^e2 - 3*e1^e3 + (a^2 - b)/(1+a) e2^e3\n").presentation;
    assert_eq!(p.constant(4, 1, 2), CScalar::rational(1, 2));
    assert_eq!(p.constant(4, 1, 3), CScalar::from_int(-3));
    let num = &Poly::var("a").pow(2) - &Poly::var("b");
    let den = &Poly::from_int(1) + &Poly::var("a");
    assert_eq!(p.constant(4, 2, 3), CScalar::from(RatFunc::new(num, den).unwrap()));
}

#[test]
fn five_independent_errors() {
    let r = parse(&fixture("five_errors.cdga"));
    assert!(r.document.is_none());
    let errs: Vec<_> = r.errors().map(|d| (d.line, d.message.clone())).collect();
    assert_eq!(errs.len(), 5, "{errs:#?}");
    let expect = [
        (4, "undeclared parameter 'beta'"),
        (5, "out of range"),
        (6, "duplicate definition of d e5"),
        (7, "malformed coefficient"),
        (8, "generator e10 out of range"),
    ];
    for ((line, msg), (eline, emsg)) in errs.iter().zip(expect) {
        assert_eq!(*line, eline);
        assert!(msg.contains(emsg), "line {line}: {msg}");
    }
    let beta = r.diagnostics.iter().find(|d| d.line == 4).unwrap();
    assert_eq!(beta.column, 19);
    assert!(beta.suggestion.as_deref().unwrap().contains("beta"));
}

#[test]
fn structural_errors() {
    let cases = [
        ("dim 2\nd e2 = e1^e1\n", "missing 'algebra' header"),
        ("algebra t over Q\nd e2 = e1^e1\n", "equation before 'dim'"),
        ("algebra t over Q\ndim 3\nd e3 = e1^e1\n", "repeated generator"),
        ("algebra t over Q\ndim 3\nd e3 = e1\n", "expected a 2-form"),
        ("algebra t over Q\ndim 3\nd e3 = 2e1^e2\n", "missing separator"),
        ("algebra t over Q\ndim 3\nfoo bar\n", "unknown statement"),
        ("algebra t over Q(i)\ndim 3\n", "invalid parameter name"),
        ("algebra t over Q\ndim 3\nd e3 = i e1^e2\n", "only allowed in gcs"),
        ("algebra t over Q\ndim 3\nd e3 = 1/0 e1^e2\n", "division by zero"),
        ("algebra t over Q\ndim 3\ngcs x type 1\n  thetas: e1\n", "not closed"),
        ("algebra t over Q\ndim 3\nd e3 = e1^\n", "expected a"),
        ("algebra t over Q(a)\ndim 2\ngcs x type 1\n  thetas: (sqrt(a)+sqrt(1+a)) e1\nend\n", "only one square root"),
        ("algebra t over Q(a)\ndim 2\ngcs x type 1\n  thetas: sqrt(a) e1 + sqrt(1+a) e2\nend\n", "only one square root"),
    ];
    for (text, needle) in cases {
        let r = parse(text);
        assert!(r.document.is_none(), "{text}");
        assert!(r.errors().any(|d| d.message.contains(needle)), "{text}: {:?}", r.diagnostics);
    }
}

#[test]
fn gcs_blocks() {
    let d = doc(&fixture("heisenberg_gcs.cdga"));
    assert_eq!(d.structures.len(), 1);
    let g = &d.structures[0];
    assert_eq!((g.label.as_str(), g.k), ("t1", 1));
    let theta = &Form::wedge_of(4, &[1], CScalar::from_int(1)) + &Form::wedge_of(4, &[2], CScalar::i());
    assert_eq!(g.thetas, vec![theta]);
    assert_eq!(g.omega, Form::wedge_of(4, &[3, 4], CScalar::from_int(1)));

    let d = doc("algebra t over Q(alpha)\ndim 2\ngcs s type 1\n  thetas: sqrt(3+alpha) e1 - i/2 e2\nend\n");
    let s = CScalar::sqrt_of(Radicand::default_alpha());
    let expect = &Form::wedge_of(2, &[1], s) + &Form::wedge_of(2, &[2], -(CScalar::i() * CScalar::rational(1, 2)));
    assert_eq!(d.structures[0].thetas, vec![expect]);
}

#[test]
fn pretty_g_alpha_is_canonical() {
    let text = pretty_presentation(&g_alpha());
    assert_eq!(
        text,
        "algebra g_alpha over Q(alpha)\ndim 8\nd e5 = e1^e2\nd e6 = e1^e5 + (1-alpha) e2^e4\n\
         d e7 = -(1+alpha) e1^e4 - e2^e3 + (1+alpha) e2^e5\nd e8 = e1^e6 + e2^e7 + e3^e4 - 2 e4^e5\n"
    );
}

fn coeff() -> impl Strategy<Value = CScalar> {
    let q = (-6i64..=6, 1i64..=4).prop_map(|(n, d)| CScalar::rational(n, d));
    let poly = (-3i64..=3, -3i64..=3, 0u32..3).prop_map(|(a, b, e)| {
        CScalar::from(&Poly::from_int(a) + &Poly::var("alpha").pow(e).scale(&Rational::from_integer(b.into())))
    });
    let ratf = ((-3i64..=3, 1i64..=3), (1i64..=3, 1i64..=3)).prop_map(|((a, b), (c, d))| {
        let num = &Poly::from_int(a) + &Poly::var("beta").scale(&Rational::from_integer(b.into()));
        let den = &Poly::from_int(c) + &Poly::var("alpha").scale(&Rational::from_integer(d.into()));
        CScalar::from(RatFunc::new(num, den).unwrap())
    });
    prop_oneof![q, poly, ratf]
}

fn complex_coeff() -> impl Strategy<Value = CScalar> {
    (coeff(), coeff(), any::<bool>()).prop_map(|(a, b, rad)| {
        let b = if rad { b * CScalar::sqrt_of(Radicand::default_alpha()) } else { b };
        a + b * CScalar::i()
    })
}

fn presentation() -> impl Strategy<Value = Presentation<CScalar>> {
    (2usize..=7)
        .prop_flat_map(|n| (Just(n), prop::collection::vec((1..=n, 1..=n, 1..=n, coeff()), 0..10)))
        .prop_map(|(n, entries)| {
            let mut p = Presentation::new("rand", n, &["alpha", "beta"]).unwrap();
            for (j, i, k, c) in entries {
                if i != k && i != j && k != j {
                    p.add_constant(j, i, k, c).unwrap();
                }
            }
            p
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pretty_then_parse_round_trips(p in presentation()) {
        let text = pretty_presentation(&p);
        let back = parse(&text);
        prop_assert!(back.errors().next().is_none(), "{}\n{:?}", text, back.diagnostics);
        prop_assert_eq!(back.document.unwrap().presentation, p);
    }

    #[test]
    fn documents_with_gcs_round_trip(p in presentation(), t in prop::collection::vec((1usize..=2, complex_coeff()), 1..4), w in coeff()) {
        let n = p.dim();
        let theta = t.iter().fold(Form::zero(n), |acc, (j, c)| &acc + &Form::wedge_of(n, &[*j], c.clone()));
        let omega = Form::wedge_of(n, &[1, 2], w);
        let data = GcsData::new("g", 1, Form::zero(n), omega, vec![theta]);
        prop_assume!(data.is_ok());
        let d = Document { presentation: p, structures: vec![data.unwrap()] };
        let text = pretty(&d);
        let back = parse(&text);
        prop_assert!(back.errors().next().is_none(), "{}\n{:?}", text, back.diagnostics);
        prop_assert_eq!(back.document.unwrap(), d);
    }
}

fn token_soup() -> impl Strategy<Value = String> {
    let tokens = prop::sample::select(vec![
        "algebra g over Q(a)\n", "dim 3\n", "dim 17\n", "d e3 = ", "d e2 = ", "gcs x type 1\n", "end\n", "thetas: ", "omega: ",
        "B: ", "e1", "e2", "e3", "e9", "^", "+", "-", "*", "/", "(", ")", " ", "0", "1", "2", "a", "i", "sqrt(", "sqrt(a)",
        "sqrt(1+a)", ";", "#", "\n", "^2", "1/(a-a)", "'",
    ]);
    prop::collection::vec(tokens, 0..40).prop_map(|v| v.concat())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn parse_never_panics(text in token_soup()) {
        let r = parse(&text);
        prop_assert_eq!(r.document.is_some(), r.errors().next().is_none());
    }
}
