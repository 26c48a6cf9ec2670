//! Exact linear algebra over a [`Field`]: small dense matrices and an
//! incremental sparse echelon form for large, very sparse spans.

use std::collections::{BTreeMap, HashMap};

use crate::fields::Field;

/// A dense matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<T: Clone>(&self, f: impl Fn(&E) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl<E: Clone + PartialEq> Matrix<E> {
    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { f.one() } else { f.zero() })
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(f.zero(), |acc, k| f.add(&acc, &f.mul(self.get(i, k), other.get(k, j))))
        })
    }

    /// The scalar `c` with `self = c * I`, if any.
    pub fn as_scalar<F: Field<Elem = E>>(&self, f: &F) -> Option<E> {
        if self.rows != self.cols || self.rows == 0 {
            return None;
        }
        let c = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want = if i == j { &c } else { &f.zero() };
                if self.get(i, j) != want {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn is_identity<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.as_scalar(f).is_some_and(|c| f.is_one(&c))
    }

    /// Block-diagonal sum of `m` copies.
    pub fn block_diag_copies<F: Field<Elem = E>>(&self, f: &F, m: usize) -> Self {
        let (r, c) = (self.rows, self.cols);
        Self::from_fn(r * m, c * m, |i, j| {
            if i / r == j / c {
                self.get(i % r, j % c).clone()
            } else {
                f.zero()
            }
        })
    }

    /// For a matrix with exactly one nonzero entry per column, the row and
    /// value of that entry in each column.
    pub fn monomial_columns<F: Field<Elem = E>>(&self, f: &F) -> Option<Vec<(usize, E)>> {
        (0..self.cols)
            .map(|j| {
                let mut hit = None;
                for i in 0..self.rows {
                    if !f.is_zero(self.get(i, j)) {
                        if hit.is_some() {
                            return None;
                        }
                        hit = Some((i, self.get(i, j).clone()));
                    }
                }
                hit
            })
            .collect()
    }
}

/// Row-reduces in place to reduced row echelon form; returns the pivot columns.
pub fn rref<F: Field>(f: &F, rows: &mut Vec<Vec<F::Elem>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(&rows[r][c]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || f.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x = f.sub_mul(x, &factor, y);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank<F: Field>(f: &F, mut rows: Vec<Vec<F::Elem>>, ncols: usize) -> usize {
    rref(f, &mut rows, ncols).len()
}

/// `dim ker` of the map `v -> M v` for `M` with `ncols` columns.
pub fn kernel_dim<F: Field>(f: &F, rows: Vec<Vec<F::Elem>>, ncols: usize) -> usize {
    ncols - rank(f, rows, ncols)
}

/// A basis of `{v : M v = 0}`.
pub fn kernel_basis<F: Field>(f: &F, mut rows: Vec<Vec<F::Elem>>, ncols: usize) -> Vec<Vec<F::Elem>> {
    let pivots = rref(f, &mut rows, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![f.zero(); ncols];
        v[free] = f.one();
        for (row, &p) in rows.iter().zip(&pivots) {
            v[p] = f.neg(&row[free]);
        }
        basis.push(v);
    }
    basis
}

/// A sparse vector: `(column, value)` pairs with increasing columns and no zeros.
pub type SparseVec<E> = Vec<(usize, E)>;

/// An echelon basis built one vector at a time.
///
/// Every stored row is monic at its pivot, which is its smallest column.
/// Columns are arbitrary `usize` keys, so callers can number a huge ambient
/// space lazily.
#[derive(Debug, Clone)]
pub struct SparseEchelon<F: Field> {
    field: F,
    rows: Vec<SparseVec<F::Elem>>,
    pivot_of: HashMap<usize, usize>,
}

impl<F: Field> SparseEchelon<F> {
    pub fn new(field: F) -> Self {
        SparseEchelon { field, rows: Vec::new(), pivot_of: HashMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<F::Elem>] {
        &self.rows
    }

    /// Reduces `v` against the stored rows.
    pub fn reduce(&self, v: SparseVec<F::Elem>) -> BTreeMap<usize, F::Elem> {
        let f = &self.field;
        let mut work: BTreeMap<usize, F::Elem> = v.into_iter().filter(|(_, c)| !f.is_zero(c)).collect();
        let mut cursor = 0usize;
        loop {
            let next = work
                .range(cursor..)
                .find(|(c, _)| self.pivot_of.contains_key(c))
                .map(|(c, x)| (*c, x.clone()));
            let Some((col, coef)) = next else { break };
            for (c, x) in &self.rows[self.pivot_of[&col]] {
                let e = work.entry(*c).or_insert_with(|| f.zero());
                *e = f.sub_mul(e, &coef, x);
                if f.is_zero(e) {
                    work.remove(c);
                }
            }
            cursor = col + 1;
        }
        work
    }

    /// Adds `v` to the span; true if the rank grew.
    pub fn insert(&mut self, v: SparseVec<F::Elem>) -> bool {
        let work = self.reduce(v);
        let Some((&pivot, lead)) = work.iter().next() else {
            return false;
        };
        let f = &self.field;
        let inv = f.inv(lead).expect("nonzero lead");
        let row: SparseVec<F::Elem> = work.iter().map(|(c, x)| (*c, f.mul(x, &inv))).collect();
        self.pivot_of.insert(pivot, self.rows.len());
        self.rows.push(row);
        true
    }

    pub fn contains(&self, v: SparseVec<F::Elem>) -> bool {
        self.reduce(v).is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{PrimeField, Rationals};

    #[test]
    fn rank_and_kernel_over_f5() {
        let f = PrimeField::new(5).unwrap();
        let rows = vec![vec![1, 2, 3], vec![0, 1, 1], vec![1, 3, 4]];
        // row3 = row1 + row2
        assert_eq!(rank(&f, rows.clone(), 3), 2);
        let ker = kernel_basis(&f, rows.clone(), 3);
        assert_eq!(ker.len(), 1);
        for r in &rows {
            let dot = r.iter().zip(&ker[0]).fold(0, |acc, (a, b)| (acc + a * b) % 5);
            assert_eq!(dot, 0);
        }
    }

    #[test]
    fn sparse_echelon_agrees_with_dense_rank() {
        let q = Rationals;
        let vs: Vec<Vec<i64>> = vec![vec![0, 1, 2, 0], vec![1, 0, 0, 1], vec![1, 1, 2, 1], vec![0, 0, 0, 3]];
        let mut ech = SparseEchelon::new(q);
        for v in &vs {
            ech.insert(
                v.iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(i, &x)| (i, q.from_i64(x)))
                    .collect(),
            );
        }
        let dense: Vec<Vec<_>> = vs.iter().map(|v| v.iter().map(|&x| q.from_i64(x)).collect()).collect();
        assert_eq!(ech.rank(), rank(&q, dense, 4));
        assert_eq!(ech.rank(), 3);
        assert!(ech.contains(vec![(0, q.from_i64(2)), (1, q.from_i64(1)), (2, q.from_i64(2)), (3, q.from_i64(2))]));
    }

    #[test]
    fn matrix_helpers() {
        let f = PrimeField::new(5).unwrap();
        let swap = Matrix::from_rows(vec![vec![0, 1], vec![1, 0]]);
        assert!(swap.mul(&f, &swap).is_identity(&f));
        assert!(swap.as_scalar(&f).is_none());
        let big = swap.block_diag_copies(&f, 3);
        assert_eq!(big.nrows(), 6);
        assert_eq!(*big.get(2, 3), 1);
        assert_eq!(*big.get(0, 3), 0);
        assert_eq!(swap.monomial_columns(&f), Some(vec![(1, 1), (0, 1)]));
    }
}
