use nilgcs::cdga::{g_alpha_with, Presentation};
use nilgcs::exterior::Form;
use nilgcs::frontend::parse;
use nilgcs::scalars::{Assignment, Rational};
use num_traits::One;
use proptest::prelude::*;

mod common;
use common::{dense_betti, fixtures, q, Table};

fn g_at(a: &Rational) -> Presentation<Rational> {
    g_alpha_with("g", &[], a.clone())
}

fn form(n: usize, k: usize) -> impl Strategy<Value = Form<Rational>> {
    prop::collection::vec((prop::sample::subsequence((1..=n).collect::<Vec<_>>(), k), -3i64..=3), 0..4).prop_map(
        move |terms| terms.into_iter().fold(Form::zero(n), |acc, (idx, c)| &acc + &Form::wedge_of(n, &idx, q(c, 1))),
    )
}

fn graded(n: usize) -> impl Strategy<Value = (usize, Form<Rational>)> {
    (0..=n).prop_flat_map(move |k| (Just(k), form(n, k)))
}

fn alpha() -> impl Strategy<Value = Rational> {
    (1i64..30, 1i64..8).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn leibniz(a in alpha(), (k, x) in graded(8), (_, y) in graded(8)) {
        let g = g_at(&a);
        let lhs = g.differential(&(&x ^ &y));
        let second = &x ^ &g.differential(&y);
        let rhs = &(&g.differential(&x) ^ &y) + &(if k % 2 == 1 { -second } else { second });
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn d_squared_vanishes(a in alpha(), (_, x) in graded(8)) {
        let g = g_at(&a);
        prop_assert!(g.check_d_squared().passed());
        prop_assert!(g.differential(&g.differential(&x)).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3))]

    #[test]
    fn betti_matches_dense_oracle(t in (-9i64..=9, 1i64..=5).prop_map(|(n, d)| q(n, d))) {
        for f in fixtures() {
            let p = parse(f.text).document.expect("fixture parses").presentation;
            let report = p.betti(&[Assignment::single("t", t.clone())]).unwrap();
            let expect = dense_betti(f.n, &(f.table)(&t));
            prop_assert_eq!(&report.samples[0].betti, &expect, "{} at t = {}", p.name(), t);
            prop_assert_eq!(expect.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum::<i64>(), 0);
            prop_assert_eq!(report.euler_characteristic, 0);
        }
    }
}

#[test]
fn dense_oracle_on_g_alpha() {
    let table = |a: &Rational| -> Table {
        let one = Rational::one();
        vec![
            (5, 1, 2, one.clone()),
            (6, 1, 5, one.clone()),
            (6, 2, 4, &one - a),
            (7, 1, 4, -(&one + a)),
            (7, 2, 3, -one.clone()),
            (7, 2, 5, &one + a),
            (8, 1, 6, one.clone()),
            (8, 2, 7, one.clone()),
            (8, 3, 4, one.clone()),
            (8, 4, 5, q(-2, 1)),
        ]
    };
    for a in [q(1, 2), q(1, 1), q(2, 1), q(5, 1), q(22, 7)] {
        let b = dense_betti(8, &table(&a));
        assert_eq!(b, vec![1, 4, 8, 12, 14, 12, 8, 4, 1]);
        assert_eq!(g_at(&a).betti_generic().unwrap().betti, b);
    }
}

#[test]
fn generic_rank_agrees_with_samples() {
    let g = nilgcs::cdga::g_alpha();
    let samples: Vec<Assignment> = [q(1, 2), q(1, 1), q(2, 1), q(5, 1), q(22, 7)]
        .into_iter()
        .map(|a| Assignment::single("alpha", a))
        .collect();
    let r = g.betti(&samples).unwrap();
    assert_eq!(r.betti, vec![1, 4, 8, 12, 14, 12, 8, 4, 1]);
    assert!(r.samples_agree());
}
