//! Structural zeros of an isomorphism matrix from characteristic ideals.
//!
//! If `a ⊂ g` is spanned by `e_j, j in S`, its image `a' ⊂ g'` by
//! `e'_j, j in S'`, and `f: g -> g'` maps `a` onto `a'`, then `f^*(e'^i)`
//! has no `e^j` component for `i ∉ S'` and `j ∈ S`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::cdga::Presentation;
use crate::invariants::Subspace;
use crate::scalars::CScalar;

use super::IsoError;

/// Ascending central series dimensions the lemma is applied to.
pub const EXPECTED_ASCENDING: [usize; 4] = [1, 3, 6, 8];
pub const EXPECTED_DERIVED_DIM: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroPattern {
    /// `(i, j)` with `lambda^i_j = 0`.
    pub zeros: BTreeSet<(usize, usize)>,
    /// Supports of the ideals used, smallest first.
    pub ideals: Vec<BTreeSet<usize>>,
    /// Diagonal blocks of the resulting block-triangular shape.
    pub blocks: Vec<Vec<usize>>,
    /// Entries that must be nonzero because they form a 1x1 diagonal block.
    pub nonzero: Vec<(usize, usize)>,
}

fn supports(p: &Presentation<CScalar>) -> Result<Vec<BTreeSet<usize>>, IsoError> {
    let name = p.name().to_string();
    if p.dim() != 8 {
        return Err(IsoError::Premises(format!("{name} has dimension {}, not 8", p.dim())));
    }
    if !p.check_d_squared().passed() {
        return Err(IsoError::Premises(format!("{name} violates d^2 = 0")));
    }
    let asc = p.ascending_series();
    let dims: Vec<usize> = asc.iter().map(Subspace::dim).collect();
    if dims != EXPECTED_ASCENDING {
        return Err(IsoError::Premises(format!(
            "{name} has ascending series {dims:?}, expected {EXPECTED_ASCENDING:?}"
        )));
    }
    let derived = p.derived_series();
    let der = derived.get(1).filter(|d| d.dim() == EXPECTED_DERIVED_DIM).ok_or_else(|| {
        IsoError::Premises(format!("{name} has a derived algebra of the wrong dimension"))
    })?;
    let mut out = Vec::new();
    for s in asc[..asc.len() - 1].iter().chain([der]) {
        let support = s
            .coordinate_support()
            .ok_or_else(|| IsoError::Premises(format!("an ideal of {name} is not spanned by basis vectors")))?;
        if !out.contains(&support) {
            out.push(support);
        }
    }
    out.sort_by_key(BTreeSet::len);
    Ok(out)
}

/// Zeros of `F(e'^i) = sum_j lambda^i_j e^j` for a map from `source^*` to
/// `target^*` dual to an isomorphism `target -> source`.
pub fn zero_pattern(target: &Presentation<CScalar>, source: &Presentation<CScalar>) -> Result<ZeroPattern, IsoError> {
    let st = supports(target)?;
    let ss = supports(source)?;
    if st != ss {
        return Err(IsoError::Premises("the two algebras place their ideals differently".into()));
    }
    let n = target.dim();
    let mut zeros = BTreeSet::new();
    for s in &st {
        for i in (1..=n).filter(|i| !s.contains(i)) {
            for &j in s {
                zeros.insert((i, j));
            }
        }
    }
    // The supports form a flag; successive differences are the diagonal blocks.
    let mut blocks = Vec::new();
    let mut prev = BTreeSet::new();
    for s in st.iter().chain([&(1..=n).collect()]) {
        if !prev.is_subset(s) {
            return Err(IsoError::Premises("the ideals are not nested".into()));
        }
        let block: Vec<usize> = s.difference(&prev).copied().collect();
        if !block.is_empty() {
            blocks.push(block);
        }
        prev = s.clone();
    }
    let nonzero = blocks.iter().filter(|b| b.len() == 1).map(|b| (b[0], b[0])).collect();
    Ok(ZeroPattern {
        zeros,
        ideals: st,
        blocks,
        nonzero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdga::{abelian, g_alpha};

    #[test]
    fn g_alpha_pattern() {
        let g = g_alpha();
        let z = zero_pattern(&g, &g).unwrap();
        let mut expected = BTreeSet::new();
        for i in 1..=2 {
            for j in 3..=8 {
                expected.insert((i, j));
            }
        }
        for i in 3..=5 {
            for j in 6..=8 {
                expected.insert((i, j));
            }
        }
        expected.extend([(3, 5), (4, 5), (6, 8), (7, 8)]);
        assert_eq!(z.zeros, expected);
        assert_eq!(z.zeros.len(), 25);
        assert_eq!(z.nonzero, vec![(8, 8), (5, 5)]);
        assert_eq!(z.blocks, vec![vec![8], vec![6, 7], vec![5], vec![3, 4], vec![1, 2]]);
    }

    #[test]
    fn abelian_rejected() {
        let a = abelian::<CScalar>(8);
        assert!(matches!(zero_pattern(&a, &a), Err(IsoError::Premises(_))));
    }
}
