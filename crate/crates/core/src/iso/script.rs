//! The elimination argument showing `g_alpha` and `g_alpha'` are not
//! isomorphic for `alpha != alpha'`, replayed with every identity checked.
//!
//! Each step names a residual coefficient `[R^i]_{jr}` and a claimed value
//! written as text; the claim is compared with the residual after both are
//! normalized under the substitutions made so far, so the text in the
//! trace is exactly what was verified.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::cdga::ALPHA;
use crate::scalars::{is_ident_char, parse_ratfunc, Poly, RatFunc, Var};

use super::state::positive_up_to_sign;
use super::{
    family_poly, lambda_name, lift_poly, zero_pattern, AlphaSpec, BranchStatus, BranchSummary, ConstraintState,
    FieldMode, IsoError, ResidualEngine, SymbolicMatrix, ZeroPattern, ALPHA_PRIME,
};

type Res = (usize, usize, usize);

#[derive(Clone, Debug)]
enum Step {
    /// `[R^i]_{jr} = scale * claim`.
    Verify { label: &'static str, res: Res, claim: &'static str, scale: &'static str },
    /// Verify, cancel nonzero factors from `claim = 0` and solve for `var`.
    Solve {
        label: &'static str,
        res: Res,
        claim: &'static str,
        scale: &'static str,
        cancel: &'static [&'static str],
        var: &'static str,
        expect: Option<&'static str>,
    },
    /// From `claim = 0`: `target = -(claim - target)`, nonzero when the
    /// latter is.
    DeriveNonzero { label: &'static str, res: Res, claim: &'static str, target: &'static str },
    /// A normalized value, recorded for the trace.
    Value { label: &'static str, var: &'static str, expect: &'static str },
    /// Verify, cancel nonzero factors and classify what is left.
    Conclude {
        label: &'static str,
        res: Res,
        claim: &'static str,
        scale: &'static str,
        cancel: &'static [&'static str],
        forced: (&'static str, &'static str),
    },
}

/// The case distinction on one unknown: `var = 0`, then `var != 0`.
struct Split {
    var: &'static str,
    zero: Vec<Step>,
    nonzero: Vec<Step>,
}

fn prelude() -> Vec<Step> {
    use Step::*;
    vec![
        Solve { label: "R8_35", res: (8, 3, 5), claim: "2*l4_3*l5_5", scale: "1", cancel: &["l5_5"], var: "l4_3", expect: Some("0") },
        Verify { label: "R6_23", res: (6, 2, 3), claim: "-(l1_2*l5_3 + l6_7)", scale: "1" },
        Verify { label: "R7_23", res: (7, 2, 3), claim: "l2_2*(l3_3 - (1+alpha')*l5_3) - l7_7", scale: "1" },
        Verify { label: "R6_25", res: (6, 2, 5), claim: "-l1_2*l5_5 + (1+alpha)*l6_7", scale: "1" },
        Verify { label: "R7_25", res: (7, 2, 5), claim: "-(1+alpha')*l2_2*l5_5 + (1+alpha)*l7_7", scale: "1" },
        Solve { label: "R6_23", res: (6, 2, 3), claim: "-(l1_2*l5_3 + l6_7)", scale: "1", cancel: &[], var: "l6_7", expect: Some("-l1_2*l5_3") },
        Solve {
            label: "R7_23",
            res: (7, 2, 3),
            claim: "l2_2*(l3_3 - (1+alpha')*l5_3) - l7_7",
            scale: "1",
            cancel: &[],
            var: "l7_7",
            expect: Some("l2_2*(l3_3 - (1+alpha')*l5_3)"),
        },
        Verify { label: "E1", res: (6, 2, 5), claim: "l1_2*(l5_5 + (1+alpha)*l5_3)", scale: "-1" },
        Verify {
            label: "E2",
            res: (7, 2, 5),
            claim: "l2_2*(l3_3 - (1+alpha')*l5_3 - (1+alpha')/(1+alpha)*l5_5)",
            scale: "1+alpha",
        },
        Verify { label: "R8_34", res: (8, 3, 4), claim: "-l4_4*(l3_3 + 2*l5_3) + l8_8", scale: "1" },
        Verify { label: "R8_45", res: (8, 4, 5), claim: "2*(l4_4*l5_5 - l8_8)", scale: "1" },
        Solve { label: "R8_45", res: (8, 4, 5), claim: "l4_4*l5_5 - l8_8", scale: "2", cancel: &[], var: "l8_8", expect: Some("l4_4*l5_5") },
        Solve {
            label: "R8_34",
            res: (8, 3, 4),
            claim: "l4_4*(l5_5 - l3_3 - 2*l5_3)",
            scale: "1",
            cancel: &["l4_4"],
            var: "l3_3",
            expect: Some("l5_5 - 2*l5_3"),
        },
        Verify { label: "E3a", res: (5, 1, 2), claim: "l5_5 - (l1_1*l2_2 - l1_2*l2_1)", scale: "1" },
        Verify { label: "E3b", res: (7, 1, 3), claim: "l2_1*(l3_3 - (1+alpha')*l5_3)", scale: "1" },
    ]
}

fn split() -> Split {
    use Step::*;
    Split {
        var: "l1_1",
        zero: vec![
            DeriveNonzero { label: "E3a", res: (5, 1, 2), claim: "l5_5 + l1_2*l2_1", target: "l1_2*l2_1" },
            Solve {
                label: "E1",
                res: (6, 2, 5),
                claim: "l1_2*(l5_5 + (1+alpha)*l5_3)",
                scale: "-1",
                cancel: &["l1_2"],
                var: "l5_5",
                expect: Some("-(1+alpha)*l5_3"),
            },
            Value { label: "E2'", var: "l3_3", expect: "-(3+alpha)*l5_3" },
            Solve {
                label: "E3b",
                res: (7, 1, 3),
                claim: "-l2_1*l5_3*(alpha + alpha' + 4)",
                scale: "1",
                cancel: &["l2_1", "alpha + alpha' + 4"],
                var: "l5_3",
                expect: Some("0"),
            },
        ],
        nonzero: vec![
            Solve { label: "R6_13", res: (6, 1, 3), claim: "-l1_1*l5_3", scale: "1", cancel: &["l1_1"], var: "l5_3", expect: Some("0") },
            Solve { label: "E1", res: (6, 2, 5), claim: "l1_2*l5_5", scale: "-1", cancel: &["l5_5"], var: "l1_2", expect: Some("0") },
            Solve { label: "E3b", res: (7, 1, 3), claim: "l2_1*l5_5", scale: "1", cancel: &["l5_5"], var: "l2_1", expect: Some("0") },
            Solve {
                label: "E3a",
                res: (5, 1, 2),
                claim: "l5_5 - l1_1*l2_2",
                scale: "1",
                cancel: &[],
                var: "l5_5",
                expect: Some("l1_1*l2_2"),
            },
            Value { label: "E2'", var: "l3_3", expect: "l1_1*l2_2" },
            Conclude {
                label: "E2",
                res: (7, 2, 5),
                claim: "l2_2*l5_5*(1 - (1+alpha')/(1+alpha))",
                scale: "1+alpha",
                cancel: &["l2_2*l5_5"],
                forced: ("1+alpha", "1+alpha'"),
            },
        ],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IsoOutcome {
    NonIsomorphicCertified,
    IsomorphicWitness,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub branch: String,
    pub rule: String,
    pub label: String,
    /// The identity that was checked, e.g. `[R8]_35 = 2*l4_3*l5_5`.
    pub identity: String,
    pub conclusion: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsoVerdict {
    pub alpha: AlphaSpec,
    pub alpha_prime: AlphaSpec,
    pub mode: FieldMode,
    pub outcome: IsoOutcome,
    /// Condition on the parameters under which a certificate holds.
    pub hypothesis: Option<String>,
    pub zero_pattern: ZeroPattern,
    pub trace: Vec<TraceStep>,
    pub branches: Vec<BranchSummary>,
}

struct Replay<'a> {
    engine: &'a ResidualEngine,
    trace: Vec<TraceStep>,
}

fn allowed(name: &str) -> bool {
    name == ALPHA || name == ALPHA_PRIME || (name.starts_with('l') && name[1..].chars().all(is_ident_char))
}

fn parse(label: &str, text: &str) -> Result<RatFunc, IsoError> {
    parse_ratfunc(text, &allowed).map_err(|err| IsoError::Expr {
        label: label.into(),
        text: text.into(),
        err,
    })
}

fn parse_poly(label: &str, text: &str) -> Result<Poly, IsoError> {
    let r = parse(label, text)?;
    r.as_poly().cloned().ok_or_else(|| IsoError::NotSolvable {
        label: label.into(),
        var: text.into(),
        poly: r.to_string(),
    })
}

/// Fixes the parameters to the values of the compared algebras.
fn specialize_params(r: RatFunc, alpha: &AlphaSpec, alpha_p: &AlphaSpec) -> RatFunc {
    let mut map = std::collections::HashMap::new();
    for (spec, name) in [(alpha, ALPHA), (alpha_p, ALPHA_PRIME)] {
        if let AlphaSpec::Value(q) = spec {
            map.insert(Var::new(name), Poly::constant(q.clone()));
        }
    }
    r.substitute(&map).expect("parameters are positive where denominators live")
}

impl Replay<'_> {
    fn record(&mut self, branch: &str, rule: &str, label: &str, identity: String, conclusion: String) {
        self.trace.push(TraceStep {
            branch: branch.into(),
            rule: rule.into(),
            label: label.into(),
            identity,
            conclusion,
        });
    }

    /// Checks `[R^i]_{jr} = scale * claim` under the current substitutions
    /// and returns the normalized claim (without the scale).
    fn verify(&self, st: &ConstraintState, ctx: &Ctx, label: &str, res: Res, claim: &str, scale: &str) -> Result<RatFunc, IsoError> {
        let c = ctx.param(parse(label, claim)?);
        let s = ctx.param(parse(label, scale)?);
        let s_num = s.numer().clone();
        if !positive_up_to_sign(&s_num) || !positive_up_to_sign(s.denom()) {
            return Err(IsoError::NotNonzero { label: label.into(), factor: s.to_string() });
        }
        let scaled = st.normalize_rf(&(s * c.clone())).map_err(|_| IsoError::NotNonzero {
            label: label.into(),
            factor: claim.into(),
        })?;
        let (i, j, r) = res;
        let mismatch = |residual: String| IsoError::ClaimMismatch {
            label: label.into(),
            residual,
            claim: scaled.to_string(),
        };
        match self.engine.mode() {
            FieldMode::Real => {
                let got = RatFunc::from_poly(st.normalize(&self.engine.residual_coeff(i, j, r)));
                if got != scaled {
                    return Err(mismatch(got.to_string()));
                }
            }
            FieldMode::Complex => {
                let raw = self.engine.split_coeff(i, j, r).expect("complex mode has split residuals");
                let got = st.normalize_split(&raw).map_err(|_| mismatch(raw.to_string()))?;
                let want = lift_poly(scaled.numer()) / lift_poly(scaled.denom());
                if got != want {
                    return Err(mismatch(got.to_string()));
                }
            }
        }
        Ok(st.normalize_rf(&c).expect("denominators only involve parameters"))
    }

    /// Numerator of `claim` with each factor in `cancel` divided out; every
    /// factor must be provably nonzero.
    fn cancel(&self, st: &ConstraintState, ctx: &Ctx, label: &str, claim: &RatFunc, cancel: &[&str]) -> Result<Poly, IsoError> {
        if !positive_up_to_sign(claim.denom()) {
            return Err(IsoError::NotNonzero { label: label.into(), factor: claim.denom().to_string() });
        }
        let mut n = claim.numer().clone();
        for f in cancel {
            let fp = st.normalize(&ctx.param_poly(parse_poly(label, f)?));
            if !st.is_nonzero(&fp) {
                return Err(IsoError::NotNonzero { label: label.into(), factor: f.to_string() });
            }
            n = n.div_exact(&fp).ok_or_else(|| IsoError::NotDivisible {
                label: label.into(),
                factor: f.to_string(),
                poly: n.to_string(),
            })?;
        }
        Ok(n)
    }

    fn run(&mut self, branch: &str, st: &mut ConstraintState, ctx: &Ctx, steps: &[Step]) -> Result<BranchStatus, IsoError> {
        for step in steps {
            match step {
                Step::Verify { label, res, claim, scale } => {
                    self.verify(st, ctx, label, *res, claim, scale)?;
                    self.record(branch, "verify", label, identity(*res, claim, scale), "holds".into());
                }
                Step::Solve { label, res, claim, scale, cancel, var, expect } => {
                    let c = self.verify(st, ctx, label, *res, claim, scale)?;
                    let n = self.cancel(st, ctx, label, &c, cancel)?;
                    let v = Var::new(var);
                    let coeffs = n.coeffs_in(&v);
                    let unsolvable = || IsoError::NotSolvable {
                        label: label.to_string(),
                        var: var.to_string(),
                        poly: n.to_string(),
                    };
                    if coeffs.keys().any(|&e| e > 1) {
                        return Err(unsolvable());
                    }
                    let a = coeffs.get(&1).cloned().unwrap_or_default();
                    let b = coeffs.get(&0).cloned().unwrap_or_default();
                    if !st.is_nonzero(&a) {
                        return Err(unsolvable());
                    }
                    let value = (-&b).div_exact(&a).ok_or_else(unsolvable)?;
                    if let Some(e) = expect {
                        let want = st.normalize(&ctx.param_poly(parse_poly(label, e)?));
                        if want != value {
                            return Err(IsoError::ValueMismatch {
                                label: label.to_string(),
                                var: var.to_string(),
                                expected: want.to_string(),
                                got: value.to_string(),
                            });
                        }
                    }
                    let mut conclusion = format!("{var} := {value}");
                    if !cancel.is_empty() {
                        conclusion = format!("cancel {}; {conclusion}", cancel.join(", "));
                    }
                    let collapsed = st.substitute(&v, &value);
                    self.record(branch, "solve", label, identity(*res, claim, scale), conclusion);
                    if !collapsed.is_empty() {
                        let names: Vec<String> = collapsed.iter().map(ToString::to_string).collect();
                        let msg = format!("{} must be nonzero but reduces to 0", names.join(", "));
                        self.record(branch, "contradiction", label, format!("{} = 0", names.join(" = ")), msg.clone());
                        return Ok(BranchStatus::Contradiction(msg));
                    }
                }
                Step::DeriveNonzero { label, res, claim, target } => {
                    let c = self.verify(st, ctx, label, *res, claim, "1")?;
                    let t = st.normalize(&ctx.param_poly(parse_poly(label, target)?));
                    if !positive_up_to_sign(c.denom()) {
                        return Err(IsoError::NotNonzero { label: label.to_string(), factor: c.denom().to_string() });
                    }
                    let rest = c.numer() - &t;
                    if !st.is_nonzero(&rest) {
                        return Err(IsoError::NotNonzero { label: label.to_string(), factor: target.to_string() });
                    }
                    st.add_fact(t);
                    self.record(
                        branch,
                        "nonzero",
                        label,
                        identity(*res, claim, "1"),
                        format!("{target} = -({rest}) != 0"),
                    );
                }
                Step::Value { label, var, expect } => {
                    let got = st.normalize(&Poly::var(var));
                    let want = st.normalize(&ctx.param_poly(parse_poly(label, expect)?));
                    if got != want {
                        return Err(IsoError::ValueMismatch {
                            label: label.to_string(),
                            var: var.to_string(),
                            expected: want.to_string(),
                            got: got.to_string(),
                        });
                    }
                    self.record(branch, "value", label, format!("{var} = {expect}"), format!("{var} = {got}"));
                }
                Step::Conclude { label, res, claim, scale, cancel, forced } => {
                    let c = self.verify(st, ctx, label, *res, claim, scale)?;
                    let n = self.cancel(st, ctx, label, &c, cancel)?;
                    for f in *cancel {
                        st.add_fact(ctx.param_poly(parse_poly(label, f)?));
                    }
                    let id = identity(*res, claim, scale);
                    if n.is_zero() {
                        self.record(branch, "conclude", label, id, "no obstruction".into());
                        return Ok(BranchStatus::Open);
                    }
                    if positive_up_to_sign(&n) {
                        let msg = format!("{} != 0 would have to vanish", n);
                        self.record(branch, "contradiction", label, id, msg.clone());
                        return Ok(BranchStatus::Contradiction(msg));
                    }
                    let rel = ctx.param_poly(&parse_poly(label, forced.0)? - &parse_poly(label, forced.1)?);
                    let ratio = n.div_exact(&rel).filter(Poly::is_constant);
                    if ratio.is_none() || rel.is_zero() {
                        return Err(IsoError::NotDivisible {
                            label: label.to_string(),
                            factor: format!("{} - ({})", forced.0, forced.1),
                            poly: n.to_string(),
                        });
                    }
                    let msg = format!("{} = {}", ctx.show(forced.0), ctx.show(forced.1));
                    st.add_forced(rel);
                    self.record(branch, "forced", label, id, msg.clone());
                    return Ok(BranchStatus::Forced(msg));
                }
            }
        }
        Ok(BranchStatus::Open)
    }
}

fn identity(res: Res, claim: &str, scale: &str) -> String {
    let (i, j, r) = res;
    if scale == "1" {
        format!("[R{i}]_{j}{r} = {claim}")
    } else {
        format!("[R{i}]_{j}{r} = ({scale}) * ({claim})")
    }
}

struct Ctx<'a> {
    alpha: &'a AlphaSpec,
    alpha_p: &'a AlphaSpec,
}

impl Ctx<'_> {
    fn param(&self, r: RatFunc) -> RatFunc {
        specialize_params(r, self.alpha, self.alpha_p)
    }

    fn param_poly(&self, p: Poly) -> Poly {
        self.param(RatFunc::from_poly(p)).as_poly().cloned().expect("polynomial stays polynomial")
    }

    /// `1+alpha` with the parameter values filled in where known.
    fn show(&self, text: &str) -> String {
        let mut out = String::new();
        let mut rest = text;
        while !rest.is_empty() {
            let (name, tail) = if let Some(t) = rest.strip_prefix(ALPHA_PRIME) {
                (Some(self.alpha_p), t)
            } else if let Some(t) = rest.strip_prefix(ALPHA) {
                (Some(self.alpha), t)
            } else {
                (None, rest)
            };
            match name {
                Some(spec) => {
                    let raw = &rest[..rest.len() - tail.len()];
                    out.push_str(&match spec {
                        AlphaSpec::Symbolic => raw.to_string(),
                        AlphaSpec::Value(q) => q.to_string(),
                    });
                    rest = tail;
                }
                None => {
                    let c = rest.chars().next().expect("nonempty");
                    out.push(c);
                    rest = &rest[c.len_utf8()..];
                }
            }
        }
        out
    }
}

/// Replays the non-isomorphism argument for `g_alpha` (target) and
/// `g_alpha'` (source).
///
/// Every branch ending in a contradiction, or in a forced relation that
/// fails under the hypothesis `alpha != alpha'`, certifies that no
/// isomorphism exists. A branch left open leads to trying the identity map
/// as an explicit isomorphism.
pub fn replay_proof(alpha: &AlphaSpec, alpha_p: &AlphaSpec, mode: FieldMode) -> Result<IsoVerdict, IsoError> {
    let to_c = |spec: &AlphaSpec, name: &str| family_poly(spec, name).map_scalars(|c| crate::scalars::CScalar::from(c.clone()));
    let pattern = zero_pattern(&to_c(alpha, ALPHA), &to_c(alpha_p, ALPHA_PRIME))?;
    let matrix = SymbolicMatrix::new(8, pattern.zeros.clone());
    let engine = ResidualEngine::new(alpha, alpha_p, &matrix, mode)?;
    let ctx = Ctx { alpha, alpha_p };
    let mut replay = Replay {
        engine: &engine,
        trace: Vec::new(),
    };

    let mut root = ConstraintState::new();
    for &(i, j) in &pattern.nonzero {
        root.add_fact(Poly::var(&lambda_name(i, j)));
    }
    replay.record(
        "main",
        "pattern",
        "ideals",
        format!("{} entries vanish", pattern.zeros.len()),
        format!(
            "nonzero: {}",
            pattern.nonzero.iter().map(|&(i, j)| lambda_name(i, j)).collect::<Vec<_>>().join(", ")
        ),
    );

    let mut branches = Vec::new();
    let status = replay.run("main", &mut root, &ctx, &prelude())?;
    if status != BranchStatus::Open {
        branches.push(BranchSummary::of("main", &root, status));
    } else {
        let sp = split();
        let v = Var::new(sp.var);
        let zero_name = format!("{} = 0", sp.var);
        let mut zero = root.clone();
        let collapsed = zero.substitute(&v, &Poly::zero());
        replay.record(&zero_name, "split", sp.var, zero_name.clone(), format!("{} := 0", sp.var));
        let s0 = if collapsed.is_empty() {
            replay.run(&zero_name, &mut zero, &ctx, &sp.zero)?
        } else {
            BranchStatus::Contradiction(format!("{} must be nonzero but reduces to 0", collapsed[0]))
        };
        branches.push(BranchSummary::of(&zero_name, &zero, s0));

        let nz_name = format!("{} != 0", sp.var);
        let mut nz = root.clone();
        nz.add_fact(Poly::var(sp.var));
        replay.record(&nz_name, "split", sp.var, nz_name.clone(), format!("{} is nonzero", sp.var));
        let s1 = replay.run(&nz_name, &mut nz, &ctx, &sp.nonzero)?;
        branches.push(BranchSummary::of(&nz_name, &nz, s1));
    }

    let all_closed = branches.iter().all(|b| b.status != BranchStatus::Open);
    let forced: BTreeSet<String> = branches
        .iter()
        .filter_map(|b| match &b.status {
            BranchStatus::Forced(m) => Some(m.clone()),
            _ => None,
        })
        .collect();
    let (outcome, hypothesis) = if all_closed {
        let hyp = (!forced.is_empty()).then(|| {
            let rel: Vec<String> = forced.iter().map(|f| f.replace(" = ", " != ")).collect();
            rel.join(" and ")
        });
        (IsoOutcome::NonIsomorphicCertified, hyp)
    } else if identity_is_isomorphism(&engine) {
        replay.record("witness", "witness", "identity", "lambda = id".into(), "all residuals vanish".into());
        (IsoOutcome::IsomorphicWitness, None)
    } else {
        (IsoOutcome::Inconclusive, None)
    };
    Ok(IsoVerdict {
        alpha: alpha.clone(),
        alpha_prime: alpha_p.clone(),
        mode,
        outcome,
        hypothesis,
        zero_pattern: pattern,
        trace: replay.trace,
        branches,
    })
}

/// All residuals vanish at `lambda^i_j = delta_ij`.
fn identity_is_isomorphism(engine: &ResidualEngine) -> bool {
    let mut map = std::collections::HashMap::new();
    for i in 1..=8 {
        for j in 1..=8 {
            let value = if i == j { Poly::one() } else { Poly::zero() };
            map.insert(Var::new(&lambda_name(i, j)), value);
        }
    }
    engine
        .residuals()
        .iter()
        .all(|r| r.terms().all(|(_, c)| c.substitute(&map).is_zero()))
}
