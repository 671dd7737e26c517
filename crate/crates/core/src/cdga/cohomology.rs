//! Ranks of the differential, Betti numbers, closed forms and cohomology
//! representatives.

use std::collections::HashMap;

use crate::exterior::{Blade, Form};
use crate::linalg::{Matrix, Rank, RankInfo, SparseRow};
use crate::scalars::{positive_rational_roots, Assignment, CScalar, Field, Poly, Rational, Scalar, Var};

use super::{Presentation, PresentationError};

/// Betti numbers with the data needed to audit them.
#[derive(Clone, Debug, PartialEq)]
pub struct CohomologyReport {
    pub dim: usize,
    /// `rank d_k : Lambda^k -> Lambda^{k+1}` for `k = 0..=n`.
    pub ranks: Vec<usize>,
    pub betti: Vec<usize>,
    pub euler_characteristic: i64,
    /// Per degree, a maximal nonzero minor of `d_k` when it depends on the
    /// parameters. The generic rank persists wherever it does not vanish.
    pub certificates: Vec<Option<Poly>>,
    /// Positive rational parameter values where some certificate vanishes
    /// (single-parameter presentations only). These are the only candidates
    /// for a rank drop; samples decide them.
    pub exceptional_candidates: Vec<Rational>,
    pub samples: Vec<SampleCheck>,
}

/// Ranks recomputed at a specialization of the parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleCheck {
    pub assignment: Assignment,
    pub ranks: Vec<usize>,
    pub betti: Vec<usize>,
    /// Degrees whose rank is smaller than the generic one.
    pub rank_drops: Vec<usize>,
}

impl CohomologyReport {
    /// True when every sample agrees with the generic ranks.
    pub fn samples_agree(&self) -> bool {
        self.samples.iter().all(|s| s.rank_drops.is_empty())
    }

    fn from_ranks(n: usize, ranks: Vec<usize>, certificates: Vec<Option<Poly>>) -> CohomologyReport {
        let betti = betti_from_ranks(n, &ranks);
        let euler_characteristic = betti
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum();
        CohomologyReport {
            dim: n,
            ranks,
            betti,
            euler_characteristic,
            certificates,
            exceptional_candidates: Vec::new(),
            samples: Vec::new(),
        }
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn betti_from_ranks(n: usize, ranks: &[usize]) -> Vec<usize> {
    (0..=n)
        .map(|k| {
            let below = if k == 0 { 0 } else { ranks[k - 1] };
            binomial(n, k) - ranks[k] - below
        })
        .collect()
}

/// Why a list of cohomology representatives was rejected.
#[derive(Clone, Debug, PartialEq)]
pub enum RepresentativeFailure<S> {
    WrongDegree { index: usize },
    NotClosed { index: usize, differential: Form<S> },
    /// The classes span only `rank` dimensions modulo exact forms.
    Dependent { rank: usize, expected: usize },
}

impl<S: Scalar> Presentation<S> {
    fn coordinates(&self, f: &Form<S>, index: &HashMap<Blade, usize>) -> SparseRow<S> {
        f.terms().map(|(b, c)| (index[b], c.clone())).collect()
    }

    fn grade_index(&self, k: usize) -> HashMap<Blade, usize> {
        Blade::all_of_grade(self.n, k)
            .into_iter()
            .enumerate()
            .map(|(i, b)| (b, i))
            .collect()
    }

    /// Rows `d(e^I)` for the degree-`k` basis blades `I`, in the coordinates of
    /// the degree-`k+1` basis.
    pub fn differential_rows(&self, k: usize) -> Vec<SparseRow<S>> {
        let target = self.grade_index(k + 1);
        Blade::all_of_grade(self.n, k)
            .into_iter()
            .map(|b| self.coordinates(&self.differential(&Form::monomial(self.n, b, S::one())), &target))
            .collect()
    }
}

impl<S: Scalar + Rank> Presentation<S> {
    pub fn rank_d(&self, k: usize) -> RankInfo {
        if k >= self.n {
            return RankInfo {
                rank: 0,
                certificate: None,
            };
        }
        S::rank_of(self.differential_rows(k))
    }

    /// Generic Betti numbers (over the fraction field of the parameters).
    /// Degrees are ranked concurrently.
    pub fn betti_generic(&self) -> Result<CohomologyReport, PresentationError> {
        self.require_jacobi()?;
        let infos: Vec<RankInfo> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..=self.n).map(|k| scope.spawn(move || self.rank_d(k))).collect();
            handles.into_iter().map(|h| h.join().expect("rank worker panicked")).collect()
        });
        let ranks = infos.iter().map(|i| i.rank).collect();
        let certs = infos.into_iter().map(|i| i.certificate).collect();
        let mut report = CohomologyReport::from_ranks(self.n, ranks, certs);
        if let [param] = self.parameters() {
            let v = Var::new(param);
            let mut roots: Vec<Rational> = report
                .certificates
                .iter()
                .flatten()
                .filter_map(|c| positive_rational_roots(c, &v))
                .flatten()
                .collect();
            roots.sort();
            roots.dedup();
            report.exceptional_candidates = roots;
        }
        Ok(report)
    }

    /// Whether the representatives are closed degree-`k` forms whose classes
    /// are linearly independent in `H^k`.
    pub fn verify_representatives(&self, k: usize, reps: &[Form<S>]) -> Result<(), RepresentativeFailure<S>> {
        for (index, r) in reps.iter().enumerate() {
            if r.terms().any(|(b, _)| b.grade() != k) {
                return Err(RepresentativeFailure::WrongDegree { index });
            }
            let d = self.differential(r);
            if !d.is_zero() {
                return Err(RepresentativeFailure::NotClosed { index, differential: d });
            }
        }
        let exact = if k == 0 { Vec::new() } else { self.differential_rows(k - 1) };
        let base = S::rank_of(exact.clone()).rank;
        let index = self.grade_index(k);
        let mut all = exact;
        all.extend(reps.iter().map(|r| self.coordinates(r, &index)));
        let rank = S::rank_of(all).rank - base;
        if rank == reps.len() {
            Ok(())
        } else {
            Err(RepresentativeFailure::Dependent {
                rank,
                expected: reps.len(),
            })
        }
    }
}

impl<S: Field> Presentation<S> {
    /// A basis of the closed `k`-forms.
    pub fn closed_basis(&self, k: usize) -> Vec<Form<S>> {
        let blades = Blade::all_of_grade(self.n, k);
        let rows = self.differential_rows(k);
        let target = binomial(self.n, k + 1);
        // Column I of the matrix is d(e^I).
        let mut m = Matrix::zeros(target.max(1), blades.len());
        for (col, row) in rows.iter().enumerate() {
            for (&r, v) in row {
                m.set(r, col, v.clone());
            }
        }
        m.kernel()
            .into_iter()
            .map(|v| {
                let mut f = Form::zero(self.n);
                for (b, c) in blades.iter().zip(v) {
                    f.add_term(*b, c);
                }
                f
            })
            .collect()
    }
}

impl Presentation<CScalar> {
    /// Generic Betti numbers plus recomputation at each sample assignment.
    pub fn betti(&self, samples: &[Assignment]) -> Result<CohomologyReport, PresentationError> {
        let mut report = self.betti_generic()?;
        for a in samples {
            let sp = self.specialize(a)?;
            let ranks: Vec<usize> = match sp.to_rational() {
                Some(qp) => (0..=self.n).map(|k| qp.rank_d(k).rank).collect(),
                None => (0..=self.n).map(|k| sp.rank_d(k).rank).collect(),
            };
            let rank_drops = (0..=self.n).filter(|&k| ranks[k] < report.ranks[k]).collect();
            report.samples.push(SampleCheck {
                assignment: a.clone(),
                betti: betti_from_ranks(self.n, &ranks),
                ranks,
                rank_drops,
            });
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdga::{abelian, g_alpha};

    #[test]
    fn abelian_betti_are_binomials() {
        let r = abelian::<Rational>(8).betti_generic().unwrap();
        assert_eq!(r.betti, (0..=8).map(|k| binomial(8, k)).collect::<Vec<_>>());
        assert_eq!(r.euler_characteristic, 0);
    }

    #[test]
    fn g_alpha_generic_betti() {
        let r = g_alpha().betti_generic().unwrap();
        assert_eq!(r.betti, vec![1, 4, 8, 12, 14, 12, 8, 4, 1]);
    }

    #[test]
    fn closed_one_forms() {
        let basis = g_alpha().closed_basis(1);
        assert_eq!(basis.len(), 4);
        assert!(basis.iter().all(|f| f.terms().all(|(b, _)| b.highest().unwrap() <= 4)));
        assert_eq!(g_alpha().closed_basis(0).len(), 1);
    }
}
