//! Dense brute-force oracle shared by the test targets.

#![allow(dead_code)]

use nilgcs::scalars::Rational;
use num_traits::Zero;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Structure equations typed independently of the library: `(j, i, k, c(t))`
/// for `de^j = sum c e^i ^ e^k`.
pub type Table = Vec<(usize, usize, usize, Rational)>;

pub struct Fixture {
    pub text: &'static str,
    pub n: usize,
    pub table: fn(&Rational) -> Table,
}

pub fn fixtures() -> Vec<Fixture> {
    vec![
        Fixture {
            text: "algebra h3 over Q(t)\ndim 3\nd e3 = t e1^e2\n",
            n: 3,
            table: |t| vec![(3, 1, 2, t.clone())],
        },
        Fixture {
            text: "algebra h3r over Q(t)\ndim 4\nd e3 = t e1^e2\n",
            n: 4,
            table: |t| vec![(3, 1, 2, t.clone())],
        },
        Fixture {
            text: "algebra fil4 over Q(t)\ndim 4\nd e3 = e1^e2\nd e4 = t e1^e3\n",
            n: 4,
            table: |t| vec![(3, 1, 2, q(1, 1)), (4, 1, 3, t.clone())],
        },
        Fixture {
            text: "algebra fil5 over Q(t)\ndim 5\nd e3 = e1^e2\nd e4 = e1^e3\nd e5 = t e1^e4 + e2^e3\n",
            n: 5,
            table: |t| vec![(3, 1, 2, q(1, 1)), (4, 1, 3, q(1, 1)), (5, 1, 4, t.clone()), (5, 2, 3, q(1, 1))],
        },
        Fixture {
            text: "algebra l5 over Q(t)\ndim 5\nd e3 = e1^e2\nd e4 = e1^e3\nd e5 = e1^e4 + t e2^e3\n",
            n: 5,
            table: |t| vec![(3, 1, 2, q(1, 1)), (4, 1, 3, q(1, 1)), (5, 1, 4, q(1, 1)), (5, 2, 3, t.clone())],
        },
        Fixture {
            text: "algebra h5 over Q(t)\ndim 5\nd e5 = e1^e2 + t e3^e4\n",
            n: 5,
            table: |t| vec![(5, 1, 2, q(1, 1)), (5, 3, 4, t.clone())],
        },
    ]
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << n))
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (1..=n).filter(|j| m & (1 << (j - 1)) != 0).collect())
        .collect()
}

/// Sorts `idx` by adjacent swaps, returning the sign, or `None` on a repeat.
pub fn sorted_sign(mut idx: Vec<usize>) -> Option<(Vec<usize>, i64)> {
    let mut sign = 1;
    for a in 0..idx.len() {
        for b in 0..idx.len() - 1 - a {
            if idx[b] == idx[b + 1] {
                return None;
            }
            if idx[b] > idx[b + 1] {
                idx.swap(b, b + 1);
                sign = -sign;
            }
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((idx, sign))
}

/// Dense matrix of `d : Lambda^k -> Lambda^{k+1}`.
pub fn dense_d(n: usize, table: &Table, k: usize) -> Vec<Vec<Rational>> {
    let rows = subsets(n, k);
    let cols = subsets(n, k + 1);
    rows.iter()
        .map(|blade| {
            let mut row = vec![Rational::zero(); cols.len()];
            for (pos, &g) in blade.iter().enumerate() {
                let outer = if pos % 2 == 0 { 1 } else { -1 };
                for (j, i, kk, c) in table {
                    if *j != g {
                        continue;
                    }
                    let mut word = blade[..pos].to_vec();
                    word.extend([*i, *kk]);
                    word.extend(&blade[pos + 1..]);
                    if let Some((s, sign)) = sorted_sign(word) {
                        let col = cols.iter().position(|x| *x == s).unwrap();
                        row[col] += c * q(outer * sign, 1);
                    }
                }
            }
            row
        })
        .collect()
}

pub fn dense_rank(mut m: Vec<Vec<Rational>>) -> usize {
    let mut rank = 0;
    let cols = m.first().map_or(0, Vec::len);
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &m[rank][c];
                for cc in c..cols {
                    let v = &f * &m[rank][cc];
                    m[r][cc] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn dense_betti(n: usize, table: &Table) -> Vec<usize> {
    let ranks: Vec<usize> = (0..=n).map(|k| if k == n { 0 } else { dense_rank(dense_d(n, table, k)) }).collect();
    (0..=n)
        .map(|k| {
            let dim = subsets(n, k).len();
            dim - ranks[k] - if k == 0 { 0 } else { ranks[k - 1] }
        })
        .collect()
}
