//! Exact linear algebra over the rationals.
//!
//! Boundary blocks are stored column-major and sparse. Their ranks are
//! computed by fraction-free elimination on integer vectors: every column is
//! cleared of denominators, reduced by content, and echelonized against the
//! pivots found so far. Pivots are taken at the first nonzero index in a fixed
//! order, so results never depend on scheduling. A dense Bareiss routine and a
//! rational RREF are kept for small problems (Frobenius forms, kernels).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{format_rational, Rational};

/// Dense row-major rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    let delta = &factor * &m[(r, j)];
                    m[(i, j)] -= delta;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of the right kernel `{v : M v = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let mut det = Rational::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det *= &pivot;
            for i in c + 1..m.rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let factor = &m[(i, c)] / &pivot;
                for j in c..m.cols {
                    let delta = &factor * &m[(c, j)];
                    m[(i, j)] -= delta;
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// Rank of a dense matrix by Bareiss fraction-free elimination.
///
/// Rows are first scaled to integers; every intermediate entry is then an
/// integer minor, and the division by the previous pivot is exact.
pub fn bareiss_rank(m: &Matrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows()).map(|i| integer_row(m.row(i))).collect();
    let rows = m.rows();
    let cols = m.cols();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let v = (&a[rank][c] * &a[i][j] - &a[i][c] * &a[rank][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter()
        .map(|q| q.numer() * (&lcm / q.denom()))
        .collect()
}

/// Sparse column-major rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, Rational)>>,
}

/// One nonzero entry, for audit dumps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triplet {
    pub row: usize,
    pub col: usize,
    #[serde(with = "crate::rational::serde_rational")]
    pub value: Rational,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    /// Builds from columns; entries are sorted and zeros dropped.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, Rational)>>) -> Self {
        let cols = columns.len();
        let columns = columns
            .into_iter()
            .map(|col| {
                let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                for (r, v) in col {
                    assert!(r < rows, "row index {r} out of range {rows}");
                    *acc.entry(r).or_insert_with(Rational::zero) += v;
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        SparseMatrix {
            rows,
            cols,
            columns,
        }
    }

    pub fn from_triplets(rows: usize, cols: usize, triplets: &[Triplet]) -> Self {
        let mut columns = vec![Vec::new(); cols];
        for t in triplets {
            columns[t.col].push((t.row, t.value.clone()));
        }
        Self::from_columns(rows, columns)
    }

    pub fn from_dense(m: &Matrix) -> Self {
        let columns = (0..m.cols())
            .map(|j| {
                (0..m.rows())
                    .filter(|&i| !m[(i, j)].is_zero())
                    .map(|i| (i, m[(i, j)].clone()))
                    .collect()
            })
            .collect();
        SparseMatrix {
            rows: m.rows(),
            cols: m.cols(),
            columns,
        }
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                m[(*i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[(usize, Rational)] {
        &self.columns[j]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.columns[j]
            .iter()
            .find(|(r, _)| *r == i)
            .map_or_else(Rational::zero, |(_, v)| v.clone())
    }

    pub fn triplets(&self) -> Vec<Triplet> {
        let mut out: Vec<Triplet> = self
            .columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| {
                col.iter().map(move |(i, v)| Triplet {
                    row: *i,
                    col: j,
                    value: v.clone(),
                })
            })
            .collect();
        out.sort_by_key(|t| (t.row, t.col));
        out
    }

    /// `self · other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "sparse product shape mismatch");
        let columns = other
            .columns
            .iter()
            .map(|bcol| {
                let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                for (k, bv) in bcol {
                    for (i, av) in &self.columns[*k] {
                        *acc.entry(*i).or_insert_with(Rational::zero) += av * bv;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            columns,
        }
    }

    /// Keeps only the rows selected by `keep`, renumbered in order.
    pub fn select_rows(&self, keep: impl Fn(usize) -> bool) -> SparseMatrix {
        let mut remap = vec![usize::MAX; self.rows];
        let mut next = 0;
        for (i, slot) in remap.iter_mut().enumerate() {
            if keep(i) {
                *slot = next;
                next += 1;
            }
        }
        let columns = self
            .columns
            .iter()
            .map(|col| {
                col.iter()
                    .filter(|(i, _)| remap[*i] != usize::MAX)
                    .map(|(i, v)| (remap[*i], v.clone()))
                    .collect()
            })
            .collect();
        SparseMatrix {
            rows: next,
            cols: self.cols,
            columns,
        }
    }

    pub fn rank(&self) -> usize {
        sparse_rank(self.columns.iter().map(|c| c.as_slice()))
    }
}

impl std::fmt::Display for SparseMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{}x{} sparse, {} nonzeros", self.rows, self.cols, self.nnz())?;
        for t in self.triplets() {
            writeln!(f, "  ({}, {}) = {}", t.row, t.col, format_rational(&t.value))?;
        }
        Ok(())
    }
}

type IntVec = Vec<(usize, BigInt)>;

/// Fraction-free echelonization of sparse rational vectors; returns the rank.
pub fn sparse_rank<'a>(vectors: impl IntoIterator<Item = &'a [(usize, Rational)]>) -> usize {
    let mut pivots: BTreeMap<usize, IntVec> = BTreeMap::new();
    for v in vectors {
        let mut cur = primitive(integerize(v));
        while let Some((lead, _)) = cur.first() {
            let lead = *lead;
            match pivots.get(&lead) {
                Some(p) => cur = primitive(eliminate(&cur, p)),
                None => {
                    pivots.insert(lead, cur);
                    break;
                }
            }
        }
    }
    pivots.len()
}

fn integerize(v: &[(usize, Rational)]) -> IntVec {
    let lcm = v.iter().fold(BigInt::one(), |acc, (_, q)| acc.lcm(q.denom()));
    let mut out: IntVec = v
        .iter()
        .filter(|(_, q)| !q.is_zero())
        .map(|(i, q)| (*i, q.numer() * (&lcm / q.denom())))
        .collect();
    out.sort_by_key(|e| e.0);
    out
}

fn primitive(mut v: IntVec) -> IntVec {
    let g = v
        .iter()
        .fold(BigInt::zero(), |acc, (_, x)| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for (_, x) in &mut v {
            *x /= &g;
        }
    }
    if v.first().is_some_and(|(_, x)| x.is_negative()) {
        for (_, x) in &mut v {
            *x = -&*x;
        }
    }
    v
}

/// `a·cur − b·piv` with the leading entries cancelling; both share a lead index.
fn eliminate(cur: &IntVec, piv: &IntVec) -> IntVec {
    let g = cur[0].1.gcd(&piv[0].1);
    let a = &piv[0].1 / &g;
    let b = &cur[0].1 / &g;
    let mut out = Vec::with_capacity(cur.len() + piv.len());
    let (mut i, mut j) = (1, 1);
    while i < cur.len() || j < piv.len() {
        let ci = cur.get(i).map(|e| e.0);
        let pj = piv.get(j).map(|e| e.0);
        match (ci, pj) {
            (Some(x), Some(y)) if x == y => {
                let v = &a * &cur[i].1 - &b * &piv[j].1;
                if !v.is_zero() {
                    out.push((x, v));
                }
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push((x, &a * &cur[i].1));
                i += 1;
            }
            (Some(x), None) => {
                out.push((x, &a * &cur[i].1));
                i += 1;
            }
            (_, Some(y)) => {
                out.push((y, -(&b * &piv[j].1)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}
