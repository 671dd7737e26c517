use std::collections::HashMap;

use nilgcs::cdga::{abelian, g_alpha, g_alpha_at};
use nilgcs::iso::{
    compare_presentations, replay_proof, zero_pattern, AlphaSpec, BranchStatus, CompareOutcome, FieldMode, IsoError,
    IsoOutcome, ResidualEngine, SymbolicMatrix,
};
use nilgcs::scalars::{parse_ratfunc, Assignment, CScalar, Poly, Rational, Var};
use proptest::prelude::*;

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn val(n: i64) -> AlphaSpec {
    AlphaSpec::Value(q(n))
}

fn poly(text: &str) -> Poly {
    parse_ratfunc(text, &|_| true).unwrap().as_poly().cloned().unwrap()
}

fn engine(alpha: &AlphaSpec, alpha_p: &AlphaSpec, mode: FieldMode) -> ResidualEngine {
    let g = g_alpha();
    let pattern = zero_pattern(&g, &g).unwrap();
    ResidualEngine::new(alpha, alpha_p, &SymbolicMatrix::new(8, pattern.zeros), mode).unwrap()
}

/// Structure constants `(j, i, k, c)` of `g_alpha`, `de^j = sum c e^{ik}`.
fn table(a: &Rational) -> Vec<(usize, usize, usize, Rational)> {
    let one = q(1);
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
        (8, 4, 5, q(-2)),
    ]
}

type Two = [[Rational; 9]; 9];

fn zero2() -> Two {
    std::array::from_fn(|_| std::array::from_fn(|_| q(0)))
}

/// Dense residual `d(F e'^i) - F(d e'^i)` as antisymmetric matrices.
fn dense_residuals(lam: &[[Rational; 9]; 9], a: &Rational, ap: &Rational) -> Vec<Two> {
    let t = table(a);
    let s = table(ap);
    (1..=8)
        .map(|i| {
            let mut out = zero2();
            for (j, x, y, c) in &t {
                let f = &lam[i][*j] * c;
                out[*x][*y] += &f;
                out[*y][*x] -= &f;
            }
            for (j, x, y, c) in &s {
                if *j != i {
                    continue;
                }
                for p in 1..=8 {
                    for r in 1..=8 {
                        let w = &(&lam[*x][p] * &lam[*y][r]) - &(&lam[*x][r] * &lam[*y][p]);
                        out[p][r] -= c * &w;
                    }
                }
            }
            out
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn residuals_match_dense_oracle(entries in prop::collection::vec(-4i64..=4, 64), a in 1i64..6, b in 1i64..6) {
        let g = g_alpha();
        let pattern = zero_pattern(&g, &g).unwrap();
        let mut lam: [[Rational; 9]; 9] = std::array::from_fn(|_| std::array::from_fn(|_| q(0)));
        let mut map = HashMap::new();
        for i in 1..=8 {
            for j in 1..=8 {
                let v = if pattern.zeros.contains(&(i, j)) { q(0) } else { q(entries[(i - 1) * 8 + j - 1]) };
                map.insert(Var::new(&format!("l{i}_{j}")), Poly::constant(v.clone()));
                lam[i][j] = v;
            }
        }
        let (qa, qb) = (q(a), q(b));
        let e = engine(&AlphaSpec::Value(qa.clone()), &AlphaSpec::Value(qb.clone()), FieldMode::Real);
        let dense = dense_residuals(&lam, &qa, &qb);
        for i in 1..=8 {
            for j in 1..=8 {
                for r in (j + 1)..=8 {
                    let got = e.residual_coeff(i, j, r).substitute(&map);
                    prop_assert_eq!(got.clone(), Poly::constant(dense[i - 1][j][r].clone()), "R{}_{}{}", i, j, r);
                    prop_assert_eq!(e.residual_coeff(i, r, j).substitute(&map), -got);
                }
            }
        }
    }
}

#[test]
fn displayed_residuals_before_substitution() {
    let e = engine(&AlphaSpec::Symbolic, &AlphaSpec::Symbolic, FieldMode::Real);
    let cases = [
        ((8, 3, 5), "2*l4_3*l5_5"),
        ((6, 2, 3), "alpha'*l2_2*l4_3 - l1_2*l5_3 - l2_2*l4_3 - l6_7"),
        ((7, 2, 3), "alpha'*l1_2*l4_3 - alpha'*l2_2*l5_3 + l1_2*l4_3 + l2_2*l3_3 - l2_2*l5_3 - l7_7"),
        ((6, 2, 5), "(1+alpha)*l6_7 - l1_2*l5_5"),
        ((7, 2, 5), "(1+alpha)*l7_7 - (1+alpha')*l2_2*l5_5"),
        ((8, 3, 4), "-l3_3*l4_4 + l3_4*l4_3 + 2*l4_3*l5_4 - 2*l4_4*l5_3 + l8_8"),
        ((8, 4, 5), "2*l4_4*l5_5 - 2*l8_8"),
        ((5, 1, 2), "l5_5 - l1_1*l2_2 + l1_2*l2_1"),
        ((7, 1, 3), "(1+alpha')*l1_1*l4_3 + l2_1*l3_3 - (1+alpha')*l2_1*l5_3"),
        ((6, 1, 3), "(alpha'-1)*l2_1*l4_3 - l1_1*l5_3"),
    ];
    for ((i, j, r), text) in cases {
        assert_eq!(e.residual_coeff(i, j, r), poly(text), "R{i}_{j}{r}");
    }
}

#[test]
fn distinct_values_are_certified() {
    for mode in [FieldMode::Real, FieldMode::Complex] {
        let v = replay_proof(&val(1), &val(2), mode).unwrap();
        assert_eq!(v.outcome, IsoOutcome::NonIsomorphicCertified);
        assert_eq!(v.hypothesis, None);
        assert!(v.branches.iter().all(|b| matches!(b.status, BranchStatus::Contradiction(_))));
    }
}

#[test]
fn equal_values_give_identity_witness() {
    let v = replay_proof(&val(3), &val(3), FieldMode::Real).unwrap();
    assert_eq!(v.outcome, IsoOutcome::IsomorphicWitness);
}

#[test]
fn symbolic_forces_equal_parameters() {
    for mode in [FieldMode::Real, FieldMode::Complex] {
        let v = replay_proof(&AlphaSpec::Symbolic, &AlphaSpec::Symbolic, mode).unwrap();
        assert_eq!(v.outcome, IsoOutcome::NonIsomorphicCertified);
        assert_eq!(v.hypothesis.as_deref(), Some("1+alpha != 1+alpha'"));
        for b in &v.branches {
            match &b.status {
                BranchStatus::Contradiction(_) => {}
                BranchStatus::Forced(f) => assert_eq!(f, "1+alpha = 1+alpha'"),
                BranchStatus::Open => panic!("branch {} left open", b.name),
            }
        }
        assert!(v.branches.iter().any(|b| b.name == "l1_1 = 0" && matches!(b.status, BranchStatus::Contradiction(_))));
    }
}

#[test]
fn main_branch_final_state() {
    let v = replay_proof(&AlphaSpec::Symbolic, &AlphaSpec::Symbolic, FieldMode::Real).unwrap();
    let main = v.branches.iter().find(|b| b.name == "l1_1 != 0").unwrap();
    let subs: HashMap<&str, &str> = main.substitutions.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    for zero in ["l2_1", "l1_2", "l5_3", "l4_3"] {
        assert_eq!(subs[zero], "0", "{zero}");
    }
    assert_eq!(poly(subs["l3_3"]), poly("l1_1*l2_2"));
    assert_eq!(poly(subs["l5_5"]), poly("l1_1*l2_2"));
    assert!(main.nonzero.iter().any(|f| f.starts_with("l2_2*l5_5")));
    assert_eq!(main.forced, vec![format!("{} = 0", poly("alpha - alpha'"))]);
}

#[test]
fn modes_agree() {
    for (a, b) in [(AlphaSpec::Symbolic, AlphaSpec::Symbolic), (val(1), val(2)), (val(2), val(2))] {
        let r = replay_proof(&a, &b, FieldMode::Real).unwrap();
        let c = replay_proof(&a, &b, FieldMode::Complex).unwrap();
        assert_eq!(r.outcome, c.outcome);
        assert_eq!(r.trace, c.trace);
        assert_eq!(r.branches, c.branches);
    }
}

#[test]
fn mixed_symbolic_and_value() {
    let v = replay_proof(&AlphaSpec::Symbolic, &val(2), FieldMode::Real).unwrap();
    assert_eq!(v.outcome, IsoOutcome::NonIsomorphicCertified);
    assert_eq!(v.hypothesis.as_deref(), Some("1+alpha != 1+2"));
}

#[test]
fn lemma_premises_checked() {
    let a = abelian::<CScalar>(8);
    assert!(matches!(zero_pattern(&a, &g_alpha()), Err(IsoError::Premises(_))));
}

#[test]
fn compare_runs_invariants_then_proof() {
    let sample = Assignment::new();
    let r = compare_presentations(&g_alpha_at(&q(1)), &g_alpha_at(&q(2)), &sample, FieldMode::Real).unwrap();
    assert!(matches!(r.outcome, CompareOutcome::Proof(_)));
    assert!(r.distinct());
    let r = compare_presentations(&g_alpha_at(&q(1)), &abelian(8), &sample, FieldMode::Real).unwrap();
    assert!(matches!(r.outcome, CompareOutcome::DistinctInvariants(_)));
}
