//! Exact linear algebra: fraction-free rank over integral domains and
//! Gauss-Jordan elimination over fields.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalars::{poly_gcd, CScalar, ExactDiv, Field, Poly, RatFunc, Rational};

/// A sparse row: column index to nonzero entry.
pub type SparseRow<S> = BTreeMap<usize, S>;

/// Outcome of fraction-free elimination.
#[derive(Clone, Debug)]
pub struct Elimination<S> {
    pub rank: usize,
    /// Successive Bareiss pivots. Each one is (up to sign) a nonzero minor of
    /// the input; the last is a maximal nonzero minor, so the rank persists at
    /// any specialization where it does not vanish.
    pub pivots: Vec<S>,
    /// `(row, column)` of each pivot in the input's numbering.
    pub pivot_positions: Vec<(usize, usize)>,
}

impl<S> Elimination<S> {
    pub fn last_pivot(&self) -> Option<&S> {
        self.pivots.last()
    }
}

/// Rank by Bareiss elimination with full pivoting over an integral domain.
///
/// Every step picks, among all remaining entries, the one with the smallest
/// [`ExactDiv::pivot_cost`], ties going to the sparser row. Updates are
/// `(p * a_ij - a_ic * a_rj) / p_prev`, which stays exact because every
/// intermediate entry is a minor of the input.
pub fn bareiss_rank<S: ExactDiv>(rows: Vec<SparseRow<S>>) -> Elimination<S> {
    let mut active: Vec<(usize, SparseRow<S>)> = rows
        .into_iter()
        .enumerate()
        .map(|(i, mut r)| {
            r.retain(|_, v| !v.is_zero());
            (i, r)
        })
        .filter(|(_, r)| !r.is_empty())
        .collect();
    let mut prev = S::one();
    let mut out = Elimination {
        rank: 0,
        pivots: Vec::new(),
        pivot_positions: Vec::new(),
    };
    while !active.is_empty() {
        let (slot, col) = choose_pivot(&active);
        let (orig, prow) = active.swap_remove(slot);
        let p = prow[&col].clone();
        let rescale = p != prev;
        for (_, row) in active.iter_mut() {
            let factor = row.remove(&col);
            match factor {
                None if !rescale => {}
                None => {
                    for v in row.values_mut() {
                        *v = (p.clone() * v.clone()).div_exact(&prev).expect("Bareiss division is exact");
                    }
                }
                Some(f) => {
                    let mut next = SparseRow::new();
                    for (&c, b) in prow.iter().filter(|(c, _)| **c != col) {
                        next.insert(c, -(f.clone() * b.clone()));
                    }
                    for (c, a) in std::mem::take(row) {
                        let pa = p.clone() * a;
                        match next.remove(&c) {
                            Some(t) => next.insert(c, pa + t),
                            None => next.insert(c, pa),
                        };
                    }
                    next.retain(|_, v| !v.is_zero());
                    if !prev.is_one() {
                        for v in next.values_mut() {
                            *v = v.div_exact(&prev).expect("Bareiss division is exact");
                        }
                    }
                    *row = next;
                }
            }
        }
        active.retain(|(_, r)| !r.is_empty());
        out.rank += 1;
        out.pivot_positions.push((orig, col));
        out.pivots.push(p.clone());
        prev = p;
    }
    out
}

fn choose_pivot<S: ExactDiv>(active: &[(usize, SparseRow<S>)]) -> (usize, usize) {
    let mut best: Option<((u64, usize, usize), usize, usize)> = None;
    for (slot, (orig, row)) in active.iter().enumerate() {
        for (c, v) in row {
            let key = (v.pivot_cost(), row.len(), *orig);
            if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
                best = Some((key, slot, *c));
            }
        }
    }
    let (_, slot, col) = best.expect("nonempty active set");
    (slot, col)
}

/// Rank of a sparse row set, with the polynomial pivots that certify it.
#[derive(Clone, Debug, PartialEq)]
pub struct RankInfo {
    pub rank: usize,
    /// A nonzero maximal minor (after clearing row denominators) when the
    /// entries are polynomial or rational in the parameters; `None` for
    /// constant and floating matrices.
    pub certificate: Option<Poly>,
}

/// Scalars whose matrices have a computable rank.
pub trait Rank: Sized {
    fn rank_of(rows: Vec<SparseRow<Self>>) -> RankInfo;
}

impl Rank for Rational {
    fn rank_of(rows: Vec<SparseRow<Self>>) -> RankInfo {
        let ints = rows
            .into_iter()
            .map(|row| {
                let lcm = row.values().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
                row.into_iter()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (c, v.numer() * (&lcm / v.denom())))
                    .collect()
            })
            .collect();
        RankInfo {
            rank: integer_rank(ints),
            certificate: None,
        }
    }
}

/// Bareiss over the integers. Same pivoting as [`bareiss_rank`], without the
/// gcd normalisation a rational entry pays on every operation.
fn integer_rank(rows: Vec<SparseRow<BigInt>>) -> usize {
    let mut active: Vec<(usize, SparseRow<BigInt>)> =
        rows.into_iter().enumerate().filter(|(_, r)| !r.is_empty()).collect();
    let mut prev = BigInt::one();
    let mut rank = 0;
    while !active.is_empty() {
        let mut best: Option<((u64, usize, usize), usize, usize)> = None;
        for (slot, (orig, row)) in active.iter().enumerate() {
            for (c, v) in row {
                let key = (v.bits(), row.len(), *orig);
                if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
                    best = Some((key, slot, *c));
                }
            }
        }
        let (_, slot, col) = best.expect("nonempty active set");
        let (_, prow) = active.swap_remove(slot);
        let p = prow[&col].clone();
        for (_, row) in active.iter_mut() {
            match row.remove(&col) {
                None => {
                    for v in row.values_mut() {
                        *v = &*v * &p / &prev;
                    }
                }
                Some(f) => {
                    let mut next = SparseRow::new();
                    for (&c, b) in prow.iter().filter(|(c, _)| **c != col) {
                        next.insert(c, -(&f * b));
                    }
                    for (c, a) in std::mem::take(row) {
                        let pa = &p * a;
                        match next.remove(&c) {
                            Some(t) => next.insert(c, pa + t),
                            None => next.insert(c, pa),
                        };
                    }
                    next.retain(|_, v| !v.is_zero());
                    for v in next.values_mut() {
                        *v = &*v / &prev;
                    }
                    *row = next;
                }
            }
        }
        active.retain(|(_, r)| !r.is_empty());
        rank += 1;
        prev = p;
    }
    rank
}

impl Rank for Poly {
    fn rank_of(rows: Vec<SparseRow<Self>>) -> RankInfo {
        let e = bareiss_rank(rows);
        RankInfo {
            rank: e.rank,
            certificate: e.pivots.last().cloned().filter(|p| !p.is_constant()),
        }
    }
}

/// Multiplies a row of rational functions by the lcm of its denominators.
pub fn clear_denominators(row: &SparseRow<RatFunc>) -> SparseRow<Poly> {
    let mut lcm = Poly::one();
    for v in row.values() {
        let d = v.denom();
        if !d.is_one() {
            let g = poly_gcd(&lcm, d);
            lcm = &lcm * &d.div_exact(&g).expect("gcd divides");
        }
    }
    row.iter()
        .map(|(&c, v)| {
            let m = lcm.div_exact(v.denom()).expect("denominator divides the lcm");
            (c, v.numer() * &m)
        })
        .collect()
}

impl Rank for RatFunc {
    fn rank_of(rows: Vec<SparseRow<Self>>) -> RankInfo {
        Poly::rank_of(rows.iter().map(clear_denominators).collect())
    }
}

impl Rank for CScalar {
    /// Real rational-function matrices go through the polynomial path;
    /// anything involving `s` or `i` is eliminated over the field directly.
    fn rank_of(rows: Vec<SparseRow<Self>>) -> RankInfo {
        let real: Option<Vec<SparseRow<RatFunc>>> = rows
            .iter()
            .map(|r| r.iter().map(|(&c, v)| v.as_ratfunc().map(|f| (c, f.clone()))).collect())
            .collect();
        if let Some(real) = real {
            return RatFunc::rank_of(real);
        }
        let cols = rows.iter().filter_map(|r| r.keys().next_back()).max().map_or(0, |m| m + 1);
        RankInfo {
            rank: Matrix::from_sparse(&rows, cols).rank(),
            certificate: None,
        }
    }
}

/// Relative tolerance used for every floating rank.
pub const FLOAT_REL_TOL: f64 = 1e-9;

impl Rank for Complex64 {
    fn rank_of(rows: Vec<SparseRow<Self>>) -> RankInfo {
        let cols = rows.iter().filter_map(|r| r.keys().next_back()).max().map_or(0, |m| m + 1);
        let dense: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| {
                let mut v = vec![Complex64::new(0.0, 0.0); cols];
                for (&c, x) in r {
                    v[c] = *x;
                }
                v
            })
            .collect();
        RankInfo {
            rank: numeric_rank(&dense, FLOAT_REL_TOL),
            certificate: None,
        }
    }
}

impl Rank for f64 {
    fn rank_of(rows: Vec<SparseRow<Self>>) -> RankInfo {
        Complex64::rank_of(
            rows.into_iter()
                .map(|r| r.into_iter().map(|(c, x)| (c, Complex64::new(x, 0.0))).collect())
                .collect(),
        )
    }
}

/// A dense matrix over a field.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Field> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Matrix<S> {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix<S> {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Matrix<S> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_sparse(rows: &[SparseRow<S>], cols: usize) -> Matrix<S> {
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            for (&j, v) in row {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix<S> {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out: Matrix<S> = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).clone() + a.clone() * b.clone();
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Reduces in place to reduced row echelon form and returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self.get(r, c).inverse().expect("nonzero pivot");
            for j in c..self.cols {
                let v = self.get(r, j).clone() * inv.clone();
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let b = self.get(r, j);
                    if !b.is_zero() {
                        let v = self.get(i, j).clone() - f.clone() * b.clone();
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// A basis of `{x : A x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<S>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m.get(r, f).clone();
                }
                v
            })
            .collect()
    }

    /// A basis of the row space (the nonzero rows of the rref).
    pub fn row_space(&self) -> Vec<Vec<S>> {
        let mut m = self.clone();
        let k = m.rref().len();
        (0..k).map(|i| m.row(i).to_vec()).collect()
    }

    pub fn inverse(&self) -> Option<Matrix<S>> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, S::one());
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// Solves `A x = b` for one solution, if any.
    pub fn solve(&self, b: &[S]) -> Option<Vec<S>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![S::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }
}

/// Numerical rank of a complex matrix by partial-pivot elimination; entries
/// below `rel_tol` times the largest input modulus count as zero.
pub fn numeric_rank(rows: &[Vec<Complex64>], rel_tol: f64) -> usize {
    let mut m: Vec<Vec<Complex64>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let scale = m.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let tol = rel_tol * scale;
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let (p, best) = (r..m.len())
            .map(|i| (i, m[i][c].norm()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= tol {
            continue;
        }
        m.swap(r, p);
        let pivot = m[r][c];
        for i in r + 1..m.len() {
            let f = m[i][c] / pivot;
            if f.norm() == 0.0 {
                continue;
            }
            for j in c..cols {
                let sub = f * m[r][j];
                m[i][j] -= sub;
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{Poly, Rational};
    use num_traits::Zero;

    fn q(k: i64) -> Rational {
        Rational::from_integer(k.into())
    }

    fn sparse<S: Clone>(dense: &[Vec<S>], zero: impl Fn(&S) -> bool) -> Vec<SparseRow<S>> {
        dense
            .iter()
            .map(|r| r.iter().cloned().enumerate().filter(|(_, v)| !zero(v)).collect())
            .collect()
    }

    #[test]
    fn rational_rank() {
        let m = vec![
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(1), q(0), q(1)],
        ];
        let e = bareiss_rank(sparse(&m, |v: &Rational| v == &q(0)));
        assert_eq!(e.rank, 2);
        assert_eq!(Matrix::from_rows(m).rank(), 2);
    }

    #[test]
    fn polynomial_rank_and_pivots() {
        // [[a, 1], [1, a]] has rank 2 with determinant a^2 - 1.
        let a = Poly::var("alpha");
        let one = Poly::from_int(1);
        let m = vec![vec![a.clone(), one.clone()], vec![one.clone(), a.clone()]];
        let e = bareiss_rank(sparse(&m, |v: &Poly| v.is_zero()));
        assert_eq!(e.rank, 2);
        let det = &(&a * &a) - &one;
        let last = e.last_pivot().unwrap();
        assert!(last == &det || last == &-&det);
    }

    #[test]
    fn bareiss_matches_field_elimination() {
        // A 4x5 integer matrix of rank 3 that forces non-unit pivots.
        let raw = [
            [2, 4, 6, 8, 10],
            [3, 7, 1, 0, 5],
            [5, 11, 7, 8, 15],
            [1, 0, 0, 3, 2],
        ];
        let m: Vec<Vec<Rational>> = raw.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        let e = bareiss_rank(sparse(&m, |v: &Rational| v == &q(0)));
        assert_eq!(e.rank, Matrix::from_rows(m).rank());
        assert_eq!(e.rank, 3);
    }

    #[test]
    fn kernel_and_inverse() {
        let m = Matrix::from_rows(vec![vec![q(1), q(1), q(0)], vec![q(0), q(1), q(1)]]);
        let k = m.kernel();
        assert_eq!(k, vec![vec![q(1), q(-1), q(1)]]);
        let a = Matrix::from_rows(vec![vec![q(2), q(1)], vec![q(1), q(1)]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        let sing = Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(2), q(4)]]);
        assert!(sing.inverse().is_none());
        assert_eq!(a.solve(&[q(3), q(2)]), Some(vec![q(1), q(1)]));
    }

    #[test]
    fn numeric_rank_tolerance() {
        let m = vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)],
            vec![Complex64::new(0.0, 1.0), Complex64::new(-1.0, 1e-14)],
        ];
        assert_eq!(numeric_rank(&m, 1e-9), 1);
    }
}
