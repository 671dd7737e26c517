//! Classical isomorphism invariants: central and derived series, center,
//! nilpotency step, and a comparable fingerprint.
//!
//! Subspaces of the Lie algebra are kept as reduced row echelon bases in the
//! coordinates of `e_1, ..., e_n`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::cdga::{Presentation, PresentationError};
use crate::linalg::{Matrix, Rank};
use crate::scalars::{Assignment, CScalar, Field, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    Ascending,
    Descending,
    Derived,
}

/// A subspace of the Lie algebra, as an rref basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<S> {
    n: usize,
    basis: Vec<Vec<S>>,
}

impl<S: Field> Subspace<S> {
    pub fn span(n: usize, vectors: Vec<Vec<S>>) -> Subspace<S> {
        let basis = if vectors.is_empty() {
            Vec::new()
        } else {
            Matrix::from_rows(vectors).row_space()
        };
        Subspace { n, basis }
    }

    pub fn zero(n: usize) -> Subspace<S> {
        Subspace { n, basis: Vec::new() }
    }

    pub fn whole(n: usize) -> Subspace<S> {
        Subspace::span(n, Matrix::identity(n).row_space())
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<S>] {
        &self.basis
    }

    /// The index set `J` when the subspace is `span{e_j : j in J}` (1-based).
    pub fn coordinate_support(&self) -> Option<BTreeSet<usize>> {
        let mut out = BTreeSet::new();
        for row in &self.basis {
            let nz: Vec<usize> = (0..self.n).filter(|&j| !row[j].is_zero()).collect();
            match nz[..] {
                [j] => {
                    out.insert(j + 1);
                }
                _ => return None,
            }
        }
        Some(out)
    }

    /// Linear functionals vanishing on the subspace.
    fn annihilator(&self) -> Vec<Vec<S>> {
        if self.basis.is_empty() {
            return Matrix::<S>::identity(self.n).row_space();
        }
        Matrix::from_rows(self.basis.clone()).kernel()
    }
}

fn dot<S: Field>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

impl<S: Field> Presentation<S> {
    /// `[x, y]` for coordinate vectors.
    pub fn bracket_vectors(&self, x: &[S], y: &[S]) -> Vec<S> {
        let n = self.dim();
        let mut out = vec![S::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for k in 0..n {
                if i == k || y[k].is_zero() {
                    continue;
                }
                let w = x[i].clone() * y[k].clone();
                for (j, b) in self.bracket(i + 1, k + 1).into_iter().enumerate() {
                    if !b.is_zero() {
                        out[j] = out[j].clone() + w.clone() * b;
                    }
                }
            }
        }
        out
    }

    /// `[a, b]` as a subspace.
    pub fn bracket_subspaces(&self, a: &Subspace<S>, b: &Subspace<S>) -> Subspace<S> {
        let mut vs = Vec::new();
        for x in a.basis() {
            for y in b.basis() {
                let v = self.bracket_vectors(x, y);
                if v.iter().any(|c| !c.is_zero()) {
                    vs.push(v);
                }
            }
        }
        Subspace::span(self.dim(), vs)
    }

    /// `{X : [X, g] in prev}`.
    fn central_preimage(&self, prev: &Subspace<S>) -> Subspace<S> {
        let n = self.dim();
        let ann = prev.annihilator();
        // Conditions phi([e_i, e_m]) summed against x_i, one per (phi, m).
        let mut rows = Vec::new();
        for phi in &ann {
            for m in 1..=n {
                let row: Vec<S> = (1..=n).map(|i| dot(phi, &self.bracket(i, m))).collect();
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                }
            }
        }
        if rows.is_empty() {
            return Subspace::whole(n);
        }
        Subspace::span(n, Matrix::from_rows(rows).kernel())
    }

    /// `g_1 = z(g) ⊂ g_2 ⊂ ...` until it stabilizes.
    pub fn ascending_series(&self) -> Vec<Subspace<S>> {
        let mut out: Vec<Subspace<S>> = Vec::new();
        let mut cur = Subspace::zero(self.dim());
        loop {
            let next = self.central_preimage(&cur);
            if next.dim() == cur.dim() {
                break;
            }
            out.push(next.clone());
            cur = next;
        }
        out
    }

    /// `[g, g] ⊃ [[g, g], g] ⊃ ...` down to a fixed point (the algebra itself excluded).
    pub fn descending_series(&self) -> Vec<Subspace<S>> {
        let g = Subspace::whole(self.dim());
        let mut out = Vec::new();
        let mut cur = g.clone();
        loop {
            let next = self.bracket_subspaces(&g, &cur);
            let stable = next.dim() == cur.dim();
            if stable {
                break;
            }
            out.push(next.clone());
            if next.dim() == 0 {
                break;
            }
            cur = next;
        }
        out
    }

    /// `g ⊃ [g, g] ⊃ [[g,g],[g,g]] ⊃ ...` (the algebra itself included).
    pub fn derived_series(&self) -> Vec<Subspace<S>> {
        let mut out = vec![Subspace::whole(self.dim())];
        loop {
            let cur = out.last().expect("nonempty");
            let next = self.bracket_subspaces(cur, cur);
            if next.dim() == cur.dim() {
                break;
            }
            let done = next.dim() == 0;
            out.push(next);
            if done {
                break;
            }
        }
        out
    }

    pub fn series_dims(&self, kind: SeriesKind) -> Result<Vec<usize>, PresentationError> {
        self.require_jacobi()?;
        let series = match kind {
            SeriesKind::Ascending => self.ascending_series(),
            SeriesKind::Descending => self.descending_series(),
            SeriesKind::Derived => self.derived_series(),
        };
        Ok(series.iter().map(Subspace::dim).collect())
    }

    pub fn center(&self) -> Subspace<S> {
        self.central_preimage(&Subspace::zero(self.dim()))
    }

    /// Nilpotency step, `None` if the algebra is not nilpotent.
    pub fn nilpotency_step(&self) -> Option<usize> {
        let asc = self.ascending_series();
        let top = asc.last().map_or(0, Subspace::dim);
        (top == self.dim()).then_some(asc.len())
    }
}

impl<S: crate::scalars::Scalar> Presentation<S> {
    /// A nilmanifold is formal exactly when its Lie algebra is abelian.
    pub fn is_formal_nilmanifold(&self) -> bool {
        self.is_abelian()
    }
}

/// The tuple of classical invariants used as a fast non-isomorphism filter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub dim: usize,
    pub ascending: Vec<usize>,
    pub descending: Vec<usize>,
    pub derived: Vec<usize>,
    pub center: usize,
    pub step: Option<usize>,
    pub betti: Vec<usize>,
}

impl fmt::Display for Fingerprint {
    /// The canonical one-line form, e.g.
    /// `dim=8 asc=1,3,6,8 desc=4,3,1,0 der=8,4,0 center=1 step=4 betti=1,4,...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        let step = self.step.map_or_else(|| "none".to_string(), |s| s.to_string());
        write!(
            f,
            "dim={} asc={} desc={} der={} center={} step={} betti={}",
            self.dim,
            join(&self.ascending),
            join(&self.descending),
            join(&self.derived),
            self.center,
            step,
            join(&self.betti)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "differing", rename_all = "lowercase")]
pub enum Comparison {
    /// Certifies non-isomorphism; lists the differing components.
    Distinct(Vec<String>),
    /// Inconclusive.
    Indistinguishable,
}

pub fn compare(a: &Fingerprint, b: &Fingerprint) -> Comparison {
    let mut diff = Vec::new();
    let mut check = |name: &str, same: bool| {
        if !same {
            diff.push(name.to_string());
        }
    };
    check("dim", a.dim == b.dim);
    check("ascending", a.ascending == b.ascending);
    check("descending", a.descending == b.descending);
    check("derived", a.derived == b.derived);
    check("center", a.center == b.center);
    check("step", a.step == b.step);
    check("betti", a.betti == b.betti);
    if diff.is_empty() {
        Comparison::Indistinguishable
    } else {
        Comparison::Distinct(diff)
    }
}

/// Sets every parameter to 1.
pub fn default_sample(p: &Presentation<CScalar>) -> Assignment {
    let mut a = Assignment::new();
    for name in p.parameters() {
        a.set(name, Rational::from_integer(1.into()));
    }
    a
}

/// The fingerprint at `sample`. Series are computed on the specialized
/// algebra; with the default sample the Betti numbers are those at 1.
pub fn fingerprint(p: &Presentation<CScalar>, sample: &Assignment) -> Result<Fingerprint, PresentationError> {
    let sp = p.specialize(sample)?;
    match sp.to_rational() {
        Some(q) => fingerprint_of(&q),
        None => fingerprint_of(&sp),
    }
}

/// The fingerprint of a presentation with no free parameters (or generically
/// over the parameters' fraction field).
pub fn fingerprint_of<S: Field + Rank>(p: &Presentation<S>) -> Result<Fingerprint, PresentationError> {
    let betti = p.betti_generic()?.betti;
    Ok(Fingerprint {
        dim: p.dim(),
        ascending: p.series_dims(SeriesKind::Ascending)?,
        descending: p.series_dims(SeriesKind::Descending)?,
        derived: p.series_dims(SeriesKind::Derived)?,
        center: p.center().dim(),
        step: p.nilpotency_step(),
        betti,
    })
}
