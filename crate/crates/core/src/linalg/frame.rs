use std::collections::BTreeMap;

use crate::error::{MhxError, Result};
use crate::linalg::matrix::Matrix;
use crate::linalg::subspace::Subspace;
use crate::scalar::Scalar;

/// A basis of `T^n` whose vectors carry labels, with the inverse change of
/// basis cached. Endomorphisms split into blocks between labels.
#[derive(Clone, Debug)]
pub struct Frame<T, L> {
    basis: Matrix<T>,
    inverse: Matrix<T>,
    labels: Vec<L>,
}

impl<T: Scalar, L: Clone + Ord> Frame<T, L> {
    /// Frame from labelled subspaces that must form a direct sum decomposition.
    pub fn from_parts(n: usize, parts: impl IntoIterator<Item = (L, Subspace<T>)>) -> Result<Self> {
        let mut cols = Vec::new();
        let mut labels = Vec::new();
        for (l, s) in parts {
            for b in s.basis() {
                cols.push(b.clone());
                labels.push(l.clone());
            }
        }
        Self::from_vectors(n, cols, labels)
    }

    pub fn from_vectors(n: usize, cols: Vec<Vec<T>>, labels: Vec<L>) -> Result<Self> {
        if cols.len() != n {
            return Err(MhxError::NotGrading(format!("{} basis vectors for dimension {}", cols.len(), n)));
        }
        let basis = Matrix::from_columns(n, &cols);
        let inverse = basis.inverse().ok_or_else(|| MhxError::NotGrading("parts are not independent".into()))?;
        Ok(Frame { basis, inverse, labels })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    pub fn inverse(&self) -> &Matrix<T> {
        &self.inverse
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    /// `P^{-1} a P`
    pub fn to_frame(&self, a: &Matrix<T>) -> Matrix<T> {
        &(&self.inverse * a) * &self.basis
    }

    /// `P a P^{-1}`
    pub fn from_frame(&self, a: &Matrix<T>) -> Matrix<T> {
        &(&self.basis * a) * &self.inverse
    }

    /// Operator acting by `f(label)` on each labelled vector.
    pub fn diagonal_operator(&self, f: impl Fn(&L) -> T) -> Matrix<T> {
        let d: Vec<T> = self.labels.iter().map(f).collect();
        self.from_frame(&Matrix::diagonal(&d))
    }

    /// Decompose `a` by a key computed from (row label, column label).
    /// Zero blocks are omitted.
    pub fn components<K: Ord>(&self, a: &Matrix<T>, key: impl Fn(&L, &L) -> K) -> BTreeMap<K, Matrix<T>> {
        let af = self.to_frame(a);
        let n = self.dim();
        let mut parts: BTreeMap<K, Matrix<T>> = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                let x = af.get(i, j);
                if x.is_negligible(1.0) {
                    continue;
                }
                let k = key(&self.labels[i], &self.labels[j]);
                parts.entry(k).or_insert_with(|| Matrix::zeros(n, n)).set(i, j, x.clone());
            }
        }
        parts.into_iter().map(|(k, m)| (k, self.from_frame(&m))).filter(|(_, m)| !m.is_zero()).collect()
    }

    /// Keep the frame-coordinate entries of `a` whose label pair passes `keep`.
    pub fn filter_blocks(&self, a: &Matrix<T>, keep: impl Fn(&L, &L) -> bool) -> Matrix<T> {
        let af = self.to_frame(a);
        let n = self.dim();
        let m = Matrix::from_fn(n, n, |i, j| {
            if keep(&self.labels[i], &self.labels[j]) {
                af.get(i, j).clone()
            } else {
                T::zero()
            }
        });
        self.from_frame(&m)
    }

    /// True when every nonzero frame entry of `a` has a label pair passing `ok`.
    pub fn blocks_satisfy(&self, a: &Matrix<T>, ok: impl Fn(&L, &L) -> bool) -> bool {
        let af = self.to_frame(a);
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| af.get(i, j).is_negligible(1.0) || ok(&self.labels[i], &self.labels[j])))
    }

    /// Span of the basis vectors with labels passing `pick`.
    pub fn span_where(&self, pick: impl Fn(&L) -> bool) -> Subspace<T> {
        let n = self.dim();
        Subspace::span_of(n, (0..n).filter(|&j| pick(&self.labels[j])).map(|j| self.basis.column(j)).collect())
    }
}
