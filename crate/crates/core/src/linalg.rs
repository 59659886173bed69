//! Dense linear algebra over an abstract field.
//!
//! Two fields are plugged in: [`PrimeField`] for GF(p) coordinate systems
//! (supports, the decoder's syndrome system) and the extension field
//! context itself for generator and parity-check matrices over GF(q^m).

use std::fmt::Debug;

/// Minimal field interface needed by Gaussian elimination.
pub trait Field {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse. Callers guarantee `a != 0`.
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;
}

/// GF(p) with elements stored as reduced `u64` residues, `p < 2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!((2..(1 << 32)).contains(&p), "prime out of range");
        Self { p }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn pow(&self, mut a: u64, mut n: u64) -> u64 {
        let mut acc = 1 % self.p;
        a %= self.p;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * a % self.p;
            }
            a = a * a % self.p;
            n >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        if self.p == 2 {
            a ^ b
        } else {
            (a + b) % self.p
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if self.p == 2 {
            a ^ b
        } else {
            (a + self.p - b) % self.p
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inverse(&self, a: &u64) -> u64 {
        debug_assert!(*a != 0);
        self.pow(*a, self.p - 2)
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn filled(rows: usize, cols: usize, fill: E) -> Self {
        Self {
            rows,
            cols,
            data: vec![fill; rows * cols],
        }
    }

    /// Builds a matrix from rows of equal length. `cols` is used when
    /// `rows` is empty.
    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Self {
            rows: n,
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
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

impl<E: Clone> Matrix<E> {
    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        let mut m = Self::filled(n, n, f.zero());
        for i in 0..n {
            m.set(i, i, f.one());
        }
        m
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Self::filled(self.rows, rhs.cols, f.zero());
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(i, t);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = f.add(out.get(i, j), &f.mul(a, rhs.get(t, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !f.is_zero(a) && !f.is_zero(x) {
                        acc = f.add(&acc, &f.mul(a, x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.data.iter().all(|x| f.is_zero(x))
    }
}

/// Reduces `m` in place to reduced row echelon form and returns the pivot
/// columns. Rows below `pivots.len()` are zero afterwards.
pub fn rref<F: Field>(f: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(piv) = (row..m.rows).find(|&i| !f.is_zero(m.get(i, col))) else {
            continue;
        };
        m.swap_rows(row, piv);
        let inv = f.inverse(m.get(row, col));
        for j in col..m.cols {
            let v = f.mul(m.get(row, j), &inv);
            m.set(row, j, v);
        }
        for i in 0..m.rows {
            if i == row {
                continue;
            }
            let factor = m.get(i, col).clone();
            if f.is_zero(&factor) {
                continue;
            }
            for j in col..m.cols {
                let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(row, j)));
                m.set(i, j, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    let mut work = m.clone();
    rref(f, &mut work).len()
}

/// Basis of the right null space `{x : m x = 0}`.
pub fn kernel<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let mut work = m.clone();
    let pivots = rref(f, &mut work);
    let mut is_pivot = vec![false; m.cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![f.zero(); m.cols];
        v[free] = f.one();
        for (r, &pc) in pivots.iter().enumerate() {
            let entry = work.get(r, free);
            if !f.is_zero(entry) {
                v[pc] = f.sub(&f.zero(), entry);
            }
        }
        basis.push(v);
    }
    basis
}

/// Outcome of solving `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution<E> {
    Unique(Vec<E>),
    Inconsistent,
    /// Consistent, but the solution set has positive dimension.
    Underdetermined,
}

pub fn solve<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &[F::Elem]) -> Solution<F::Elem> {
    assert_eq!(a.rows, b.len(), "right-hand side length mismatch");
    let cols = a.cols;
    let mut aug = Matrix::filled(a.rows, cols + 1, f.zero());
    for i in 0..a.rows {
        for j in 0..cols {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, cols, b[i].clone());
    }
    let pivots = rref(f, &mut aug);
    if pivots.last() == Some(&cols) {
        return Solution::Inconsistent;
    }
    if pivots.len() < cols {
        return Solution::Underdetermined;
    }
    Solution::Unique((0..cols).map(|r| aug.get(r, cols).clone()).collect())
}

/// Inverse of a square matrix, `None` when singular.
pub fn invert<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut aug = Matrix::filled(n, 2 * n, f.zero());
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, n + i, f.one());
    }
    let pivots = rref(f, &mut aug);
    if pivots.len() < n || (n > 0 && pivots[n - 1] >= n) {
        return None;
    }
    let mut inv = Matrix::filled(n, n, f.zero());
    for i in 0..n {
        for j in 0..n {
            inv.set(i, j, aug.get(i, n + j).clone());
        }
    }
    Some(inv)
}
