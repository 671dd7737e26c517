use std::cmp::Ordering;
use std::fmt;

/// A basis element `e^{i_1} ^ ... ^ e^{i_k}` in ascending index order, stored
/// as a bitmask (bit `j` set means generator `j + 1` is present).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Blade(u16);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    pub fn from_mask(mask: u16) -> Blade {
        Blade(mask)
    }

    /// Builds a blade from 1-based generator indices in any order; repeated
    /// indices are merged. The orientation is always ascending.
    pub fn of(indices: &[usize]) -> Blade {
        Blade(indices.iter().fold(0u16, |m, &i| m | 1 << (i - 1)))
    }

    /// Generator `e^j` (1-based).
    pub fn generator(j: usize) -> Blade {
        Blade(1 << (j - 1))
    }

    /// The top blade `e^{1...n}`.
    pub fn full(n: usize) -> Blade {
        if n >= 16 {
            Blade(u16::MAX)
        } else {
            Blade((1u16 << n) - 1)
        }
    }

    /// All blades of degree `k` on `n` generators, in [`Ord`] order.
    pub fn all_of_grade(n: usize, k: usize) -> Vec<Blade> {
        let mut out: Vec<Blade> = (0..=Blade::full(n).0)
            .map(Blade)
            .filter(|b| b.grade() == k)
            .collect();
        out.sort();
        out
    }

    pub fn mask(self) -> u16 {
        self.0
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    /// 1-based containment test.
    pub fn contains(self, j: usize) -> bool {
        self.0 & (1 << (j - 1)) != 0
    }

    /// 1-based generator indices in ascending order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..16).filter(move |b| mask & (1 << b) != 0).map(|b| b + 1)
    }

    pub fn highest(self) -> Option<usize> {
        (self.0 != 0).then(|| 16 - self.0.leading_zeros() as usize)
    }

    pub fn without(self, j: usize) -> Blade {
        Blade(self.0 & !(1 << (j - 1)))
    }

    pub fn union(self, other: Blade) -> Blade {
        Blade(self.0 | other.0)
    }

    pub fn overlaps(self, other: Blade) -> bool {
        self.0 & other.0 != 0
    }

    /// Sign of `self ^ other` relative to the ascending blade of the union,
    /// `None` when a generator repeats. The sign is the parity of the number of
    /// pairs (i in self, j in other) with i > j.
    pub fn wedge_sign(self, other: Blade) -> Option<i8> {
        if self.overlaps(other) {
            return None;
        }
        let mut inversions = 0u32;
        let mut rest = other.0;
        while rest != 0 {
            let bit = rest.trailing_zeros();
            rest &= rest - 1;
            let above = if bit >= 15 { 0 } else { self.0 >> (bit + 1) };
            inversions += above.count_ones();
        }
        Some(if inversions % 2 == 0 { 1 } else { -1 })
    }

    /// Sign of the interior product by the dual vector `e_j`: moving `e^j`
    /// to the front passes every generator below it.
    pub fn contract_sign(self, j: usize) -> Option<i8> {
        if !self.contains(j) {
            return None;
        }
        let below = (self.0 & ((1u16 << (j - 1)) - 1)).count_ones();
        Some(if below % 2 == 0 { 1 } else { -1 })
    }
}

impl Ord for Blade {
    /// By grade, then lexicographically on the ascending index lists.
    fn cmp(&self, other: &Self) -> Ordering {
        self.grade().cmp(&other.grade()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else {
                let low = diff & diff.wrapping_neg();
                if self.0 & low != 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        })
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Blade {
    /// `e1^e2^e5`, or `1` for the scalar blade.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.indices().map(|i| format!("e{i}")).collect();
        f.write_str(&parts.join("^"))
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signs() {
        assert_eq!(Blade::of(&[1]).wedge_sign(Blade::of(&[2])), Some(1));
        assert_eq!(Blade::of(&[2]).wedge_sign(Blade::of(&[1])), Some(-1));
        assert_eq!(Blade::of(&[3, 4]).wedge_sign(Blade::of(&[1, 2])), Some(1));
        assert_eq!(Blade::of(&[2, 3]).wedge_sign(Blade::of(&[1])), Some(1));
        assert_eq!(Blade::of(&[1, 3]).wedge_sign(Blade::of(&[2])), Some(-1));
        assert_eq!(Blade::of(&[1, 2]).wedge_sign(Blade::of(&[2])), None);
        assert_eq!(Blade::of(&[16]).wedge_sign(Blade::of(&[1])), Some(-1));
    }

    #[test]
    fn ordering_is_grade_then_lex() {
        let mut v = vec![Blade::of(&[2, 3]), Blade::of(&[1, 3]), Blade::of(&[4]), Blade::of(&[1, 2]), Blade::SCALAR];
        v.sort();
        let shown: Vec<String> = v.iter().map(|b| b.to_string()).collect();
        assert_eq!(shown, ["1", "e4", "e1^e2", "e1^e3", "e2^e3"]);
    }

    #[test]
    fn grade_enumeration() {
        assert_eq!(Blade::all_of_grade(8, 2).len(), 28);
        assert_eq!(Blade::all_of_grade(8, 4).len(), 70);
        assert_eq!(Blade::all_of_grade(3, 0), vec![Blade::SCALAR]);
        assert_eq!(Blade::all_of_grade(3, 2)[0], Blade::of(&[1, 2]));
    }

    #[test]
    fn contraction_sign() {
        assert_eq!(Blade::of(&[1, 2, 3, 4]).contract_sign(3), Some(1));
        assert_eq!(Blade::of(&[1, 3]).contract_sign(3), Some(-1));
        assert_eq!(Blade::of(&[1, 3]).contract_sign(2), None);
    }
}
