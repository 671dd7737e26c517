//! Substitutions, nonzero facts and forced relations of one proof branch.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::Serialize;

use crate::scalars::{CScalar, ExtScalar, Poly, RatFunc, Rational, ScalarError, Var};

use super::{lift_poly, split_of, ALPHA_PRIME};
use crate::cdga::ALPHA;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchStatus {
    Open,
    /// A nonzero quantity was shown to vanish.
    Contradiction(String),
    /// The branch survives only if the parameters satisfy a relation.
    Forced(String),
}

#[derive(Clone, Debug, Default)]
pub struct ConstraintState {
    /// Fully reduced: no right-hand side mentions a substituted variable.
    subs: BTreeMap<Var, Poly>,
    /// Nonzero quantities as first stated, with their normal forms.
    facts: Vec<(Poly, Poly)>,
    forced: Vec<Poly>,
}

impl ConstraintState {
    pub fn new() -> ConstraintState {
        ConstraintState::default()
    }

    pub fn substitutions(&self) -> &BTreeMap<Var, Poly> {
        &self.subs
    }

    pub fn substitution(&self, name: &str) -> Option<&Poly> {
        self.subs.get(&Var::new(name))
    }

    /// Normal forms of the nonzero facts.
    pub fn facts(&self) -> impl Iterator<Item = &Poly> {
        self.facts.iter().map(|(_, n)| n)
    }

    /// Whether `p` was stated as a nonzero fact.
    pub fn has_fact(&self, p: &Poly) -> bool {
        self.facts.iter().any(|(o, _)| o == p)
    }

    pub fn forced(&self) -> &[Poly] {
        &self.forced
    }

    fn map(&self) -> HashMap<Var, Poly> {
        self.subs.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    }

    pub fn normalize(&self, p: &Poly) -> Poly {
        p.substitute(&self.map())
    }

    pub fn normalize_rf(&self, r: &RatFunc) -> Result<RatFunc, ScalarError> {
        r.substitute(&self.map())
    }

    /// The substitutions as seen after splitting every unknown into real
    /// and imaginary parts.
    fn split_map(&self) -> HashMap<Var, Poly> {
        let mut out = HashMap::new();
        for (v, value) in &self.subs {
            let (re, im) = split_of(v).expect("only unknowns are substituted");
            let lifted = lift_poly(value);
            let part = |x: &ExtScalar| {
                x.as_ratfunc()
                    .and_then(RatFunc::as_poly)
                    .cloned()
                    .expect("lifted polynomials stay polynomial")
            };
            out.insert(Var::new(&re), part(lifted.re()));
            out.insert(Var::new(&im), part(lifted.im()));
        }
        out
    }

    pub fn normalize_split(&self, c: &CScalar) -> Result<CScalar, ScalarError> {
        c.substitute(&self.split_map())
    }

    pub fn add_fact(&mut self, p: Poly) {
        if !self.has_fact(&p) {
            let n = self.normalize(&p);
            self.facts.push((p, n));
        }
    }

    pub fn add_forced(&mut self, p: Poly) {
        self.forced.push(p);
    }

    /// Records `var := value`; returns the facts that collapsed to zero.
    pub fn substitute(&mut self, var: &Var, value: &Poly) -> Vec<Poly> {
        let value = self.normalize(value);
        assert!(!value.contains_var(var), "{var} := {value} is not a solved form");
        let single: HashMap<Var, Poly> = [(var.clone(), value.clone())].into();
        for v in self.subs.values_mut() {
            *v = v.substitute(&single);
        }
        self.subs.insert(var.clone(), value);
        let mut collapsed = Vec::new();
        for (origin, f) in &mut self.facts {
            let was_zero = f.is_zero();
            *f = f.substitute(&single);
            if f.is_zero() && !was_zero {
                collapsed.push(origin.clone());
            }
        }
        collapsed
    }

    /// Unknowns known to be nonzero: variables of single-term facts.
    fn nonzero_vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        for f in self.facts() {
            if f.num_terms() == 1 {
                for v in f.vars() {
                    if !out.contains(&v) {
                        out.push(v);
                    }
                }
            }
        }
        out
    }

    /// Whether `p` is provably nonzero: after dividing out stored facts and
    /// nonzero unknowns, a nonzero constant or a polynomial in the
    /// parameters with positive coefficients and positive constant term
    /// must remain.
    pub fn is_nonzero(&self, p: &Poly) -> bool {
        let mut rest = self.normalize(p);
        if rest.is_zero() {
            return false;
        }
        let vars: Vec<Poly> = self.nonzero_vars().into_iter().map(Poly::from_var).collect();
        let divisors: Vec<&Poly> = vars.iter().chain(self.facts().filter(|f| !f.is_constant())).collect();
        'outer: loop {
            for d in &divisors {
                if rest.is_constant() {
                    break 'outer;
                }
                if let Some(q) = rest.div_exact(d) {
                    rest = q;
                    continue 'outer;
                }
            }
            break;
        }
        positive_up_to_sign(&rest)
    }
}

/// A nonzero constant, or `+-q` with `q` a polynomial in the parameters
/// having positive coefficients and a positive constant term.
pub fn positive_up_to_sign(p: &Poly) -> bool {
    if p.is_zero() {
        return false;
    }
    if p.is_constant() {
        return true;
    }
    let params = [Var::new(ALPHA), Var::new(ALPHA_PRIME)];
    if !p.vars().iter().all(|v| params.contains(v)) {
        return false;
    }
    let q = if p.leading_coeff() < Rational::zero() { -p } else { p.clone() };
    let c0 = q.terms().find(|(m, _)| m.is_one()).map(|(_, c)| c.clone());
    q.all_coeffs_positive() && c0.is_some_and(|c| c > Rational::zero())
}

/// What a branch looked like when it ended.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchSummary {
    pub name: String,
    pub status: BranchStatus,
    /// `(variable, value)` pairs, values fully reduced.
    pub substitutions: Vec<(String, String)>,
    pub nonzero: Vec<String>,
    pub forced: Vec<String>,
}

impl BranchSummary {
    pub fn of(name: &str, state: &ConstraintState, status: BranchStatus) -> BranchSummary {
        BranchSummary {
            name: name.to_string(),
            status,
            substitutions: state.subs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            nonzero: state
                .facts
                .iter()
                .map(|(o, n)| if o == n { o.to_string() } else { format!("{o} = {n}") })
                .collect(),
            forced: state.forced.iter().map(|f| format!("{f} = 0")).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Poly {
        Poly::var(s)
    }

    #[test]
    fn substitutions_stay_reduced() {
        let mut s = ConstraintState::new();
        s.add_fact(v("l5_5"));
        assert!(s.substitute(&Var::new("l3_3"), &(&v("l5_5") - &v("l5_3"))).is_empty());
        s.substitute(&Var::new("l5_5"), &(&v("l1_1") * &v("l2_2")));
        assert_eq!(s.substitution("l3_3"), Some(&(&(&v("l1_1") * &v("l2_2")) - &v("l5_3"))));
        assert!(s.is_nonzero(&v("l2_2")));
        assert!(s.is_nonzero(&(&v("l1_1") * &(&Poly::from_int(4) + &v("alpha")))));
        assert!(!s.is_nonzero(&(&v("alpha") - &v("alpha'"))));
        assert_eq!(s.substitute(&Var::new("l1_1"), &Poly::zero()), vec![v("l5_5")]);
    }
}
