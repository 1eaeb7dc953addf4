use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{dim_err, MhxError, Result};
use crate::scalar::Scalar;

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Row reduction to reduced echelon form. Returns the nonzero rows and the
/// pivot column of each.
pub fn rref<T: Scalar>(mut rows: Vec<Vec<T>>, ncols: usize) -> (Vec<Vec<T>>, Vec<usize>) {
    let scale = if T::EXACT {
        1.0
    } else {
        rows.iter().flatten().map(|x| x.magnitude()).fold(0.0, f64::max)
    };
    if !T::EXACT && scale == 0.0 {
        return (Vec::new(), Vec::new());
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let pick = if T::EXACT {
            (r..rows.len()).find(|&k| !rows[k][c].is_zero())
        } else {
            let best = (r..rows.len()).max_by(|&a, &b| {
                rows[a][c].magnitude().partial_cmp(&rows[b][c].magnitude()).unwrap_or(std::cmp::Ordering::Equal)
            });
            best.filter(|&k| !rows[k][c].is_negligible(scale))
        };
        let Some(p) = pick else { continue };
        rows.swap(r, p);
        let inv = T::one().div_ref(&rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = x.mul_ref(&inv);
        }
        rows[r][c] = T::one();
        let (before, rest) = rows.split_at_mut(r);
        let (prow, after) = rest.split_first_mut().unwrap();
        for other in before.iter_mut().chain(after.iter_mut()) {
            if other[c].is_zero() {
                continue;
            }
            let f = other[c].clone();
            for j in c..ncols {
                if !prow[j].is_zero() {
                    other[j].sub_mul_assign(&f, &prow[j]);
                }
            }
            if !T::EXACT {
                for x in other.iter_mut() {
                    if x.is_negligible(scale) {
                        *x = T::zero();
                    }
                }
            }
            other[c] = T::zero();
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(dim_err("ragged rows"));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Square matrix from rows, `n x n` even when `n = 0`.
    pub fn square_from_rows(n: usize, rows: Vec<Vec<T>>) -> Result<Self> {
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(dim_err(format!("expected {n}x{n} matrix")));
        }
        Ok(Matrix { rows: n, cols: n, data: rows.into_iter().flatten().collect() })
    }

    /// Matrix whose columns are the given vectors (of length `n`).
    pub fn from_columns(n: usize, cols: &[Vec<T>]) -> Self {
        Self::from_fn(n, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map(|x| x.conj())
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|x| x.is_real())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude()).fold(0.0, f64::max)
    }

    /// Exactly zero for the exact backend; negligible relative to `1` for floats.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_negligible(1.0))
    }

    pub fn approx_eq(&self, o: &Self) -> bool {
        self.rows == o.rows && self.cols == o.cols && self.data.iter().zip(&o.data).all(|(a, b)| a.approx_eq(b))
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.mul_ref(s))
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(dim_err(format!("{}x{} * {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * o.cols + j].add_mul_assign(a, b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(dim_err("sum of differently shaped matrices"));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add_ref(b)).collect(),
        })
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(dim_err("difference of differently shaped matrices"));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub_ref(b)).collect(),
        })
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    acc.add_mul_assign(a, b);
                }
                acc
            })
            .collect()
    }

    /// `[self, o] = self o - o self`
    pub fn commutator(&self, o: &Self) -> Self {
        &(self * o) - &(o * self)
    }

    pub fn pow(&self, k: usize) -> Self {
        assert!(self.is_square());
        let mut out = Self::identity(self.rows);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn trace(&self) -> T {
        let mut t = T::zero();
        for i in 0..self.rows.min(self.cols) {
            t = t.add_ref(self.get(i, i));
        }
        t
    }

    /// Block diagonal sum.
    pub fn block_diag(blocks: &[Matrix<T>]) -> Self {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Kronecker product.
    pub fn kron(&self, o: &Self) -> Self {
        Self::from_fn(self.rows * o.rows, self.cols * o.cols, |i, j| {
            self.get(i / o.rows, j / o.cols).mul_ref(o.get(i % o.rows, j % o.cols))
        })
    }

    pub fn rank(&self) -> usize {
        rref(self.to_rows(), self.cols).1.len()
    }

    /// Inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug: Vec<Vec<T>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
                r
            })
            .collect();
        let (red, piv) = rref(aug, 2 * n);
        if piv.len() < n || (n > 0 && piv[n - 1] >= n) {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| red[i][n + j].clone()))
    }

    /// Basis of the right null space.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        let (red, piv) = rref(self.to_rows(), self.cols);
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![T::zero(); self.cols];
                v[f] = T::one();
                for (row, &p) in red.iter().zip(&piv) {
                    v[p] = -row[f].clone();
                }
                v
            })
            .collect()
    }

    /// A solution of `self x = b` (free variables zero), or `None`.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows);
        let n = self.cols;
        let aug: Vec<Vec<T>> = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.push(b[i].clone());
                r
            })
            .collect();
        let (red, piv) = rref(aug, n + 1);
        if piv.last() == Some(&n) {
            return None;
        }
        let mut x = vec![T::zero(); n];
        for (row, &p) in red.iter().zip(&piv) {
            x[p] = row[n].clone();
        }
        Some(x)
    }

    /// Nilpotency index `k` with `A^k = 0`, or `None`.
    pub fn nilpotency_index(&self) -> Option<usize> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut p = Self::identity(n);
        for k in 0..=n {
            if p.is_zero() {
                return Some(k);
            }
            p = &p * self;
        }
        None
    }

    pub fn is_nilpotent(&self) -> bool {
        self.nilpotency_index().is_some()
    }

    /// Finite exponential series of a nilpotent matrix.
    pub fn exp_nilpotent(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(dim_err("exp of non-square matrix"));
        }
        let n = self.rows;
        let mut out = Self::identity(n);
        let mut term = Self::identity(n);
        for k in 1..=n + 1 {
            term = (&term * self).scale(&T::from_ratio(1, k as i64));
            if term.is_zero() {
                return Ok(out);
            }
            out = &out + &term;
        }
        Err(MhxError::NotNilpotent)
    }

    /// Finite logarithm series of a unipotent matrix.
    pub fn log_unipotent(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(dim_err("log of non-square matrix"));
        }
        let n = self.rows;
        let a = self - &Self::identity(n);
        let mut out = Self::zeros(n, n);
        let mut power = Self::identity(n);
        for k in 1..=n + 1 {
            power = &power * &a;
            if power.is_zero() {
                return Ok(out);
            }
            let c = T::from_ratio(if k % 2 == 1 { 1 } else { -1 }, k as i64);
            out = &out + &power.scale(&c);
        }
        Err(MhxError::NotUnipotent)
    }

    /// `g self g^{-1}`
    pub fn conjugated_by(&self, g: &Self, g_inv: &Self) -> Self {
        &(g * self) * g_inv
    }
}

impl<'a, T: Scalar> Mul for &'a Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, o: &'a Matrix<T>) -> Matrix<T> {
        self.checked_mul(o).expect("matrix product shape")
    }
}

impl<'a, T: Scalar> Add for &'a Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, o: &'a Matrix<T>) -> Matrix<T> {
        self.checked_add(o).expect("matrix sum shape")
    }
}

impl<'a, T: Scalar> Sub for &'a Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, o: &'a Matrix<T>) -> Matrix<T> {
        self.checked_sub(o).expect("matrix difference shape")
    }
}

impl<'a, T: Scalar> Neg for &'a Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|x| -x.clone())
    }
}

/// Elementary matrix with a single `1` at `(i, j)`.
pub fn unit<T: Scalar>(n: usize, i: usize, j: usize) -> Matrix<T> {
    let mut m = Matrix::zeros(n, n);
    m.set(i, j, T::one());
    m
}
