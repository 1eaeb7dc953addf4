use crate::error::{dim_err, Result};
use crate::linalg::matrix::{rref, Matrix};
use crate::scalar::{Scalar, FLOAT_TOL};

/// Subspace of `T^n`.
///
/// Exact scalars store the reduced echelon basis, so equality is syntactic.
/// The float backend stores an orthonormal basis instead: echelon bases of
/// nearly aligned subspaces have huge entries and lose most digits.
#[derive(Clone, Debug)]
pub struct Subspace<T> {
    ambient: usize,
    basis: Vec<Vec<T>>,
    pivots: Vec<usize>,
}

impl<T: Scalar> PartialEq for Subspace<T> {
    fn eq(&self, o: &Self) -> bool {
        if !T::EXACT {
            return self.ambient == o.ambient && self.dim() == o.dim() && self.is_subspace_of(o);
        }
        self.ambient == o.ambient
            && self.pivots == o.pivots
            && self.basis.iter().flatten().zip(o.basis.iter().flatten()).all(|(a, b)| a.approx_eq(b))
    }
}

/// Which lattice operation `combine` performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combine {
    Sum,
    Intersect,
}

impl<T: Scalar> Subspace<T> {
    pub fn zero(n: usize) -> Self {
        Subspace { ambient: n, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Self::from_reduced(n, (0..n).map(|i| unit_vector(n, i)).collect(), (0..n).collect())
    }

    fn from_reduced(ambient: usize, basis: Vec<Vec<T>>, pivots: Vec<usize>) -> Self {
        Subspace { ambient, basis, pivots }
    }

    fn orthonormal(ambient: usize, basis: Vec<Vec<T>>) -> Self {
        Subspace { ambient, basis, pivots: Vec::new() }
    }

    /// Orthogonal complement for the standard Hermitian product (float only).
    fn perp(&self) -> Self {
        let n = self.ambient;
        let vs = (0..n).map(|k| reject(&unit_vector(n, k), &self.basis)).collect();
        Self::orthonormal(n, orthonormalize(vs, Some(n - self.dim())))
    }

    /// Canonical span of the given vectors.
    pub fn span(ambient: usize, vectors: Vec<Vec<T>>) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != ambient) {
            return Err(dim_err(format!("vector length differs from ambient dimension {ambient}")));
        }
        if !T::EXACT {
            return Ok(Self::orthonormal(ambient, orthonormalize(vectors, None)));
        }
        let (basis, pivots) = rref(vectors, ambient);
        Ok(Subspace { ambient, basis, pivots })
    }

    /// Span of vectors known to have length `ambient`.
    pub fn span_of(ambient: usize, vectors: Vec<Vec<T>>) -> Self {
        Self::span(ambient, vectors).expect("vector lengths")
    }

    /// Column space of a matrix.
    pub fn column_space(m: &Matrix<T>) -> Self {
        Self::span_of(m.rows(), m.columns())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }

    /// Coefficients of `v` against the stored basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[T]) -> Option<Vec<T>> {
        assert_eq!(v.len(), self.ambient);
        let coeffs: Vec<T> = if T::EXACT {
            self.pivots.iter().map(|&p| v[p].clone()).collect()
        } else {
            self.basis.iter().map(|b| inner(b, v)).collect()
        };
        let scale = if T::EXACT { 1.0 } else { v.iter().map(|x| x.magnitude()).fold(1.0, f64::max) };
        for j in 0..self.ambient {
            let mut r = v[j].clone();
            for (c, b) in coeffs.iter().zip(&self.basis) {
                r.sub_mul_assign(c, &b[j]);
            }
            if !r.is_negligible(scale) {
                return None;
            }
        }
        Some(coeffs)
    }

    pub fn contains(&self, v: &[T]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_subspace_of(&self, o: &Self) -> bool {
        self.ambient == o.ambient && self.dim() <= o.dim() && self.basis.iter().all(|b| o.contains(b))
    }

    pub fn combine(&self, o: &Self, mode: Combine) -> Result<Self> {
        if self.ambient != o.ambient {
            return Err(dim_err("subspaces of different ambient spaces"));
        }
        Ok(match mode {
            Combine::Sum => self.sum(o),
            Combine::Intersect => self.intersect(o),
        })
    }

    pub fn sum(&self, o: &Self) -> Self {
        assert_eq!(self.ambient, o.ambient);
        if o.is_zero() || self.is_full() {
            return self.clone();
        }
        if self.is_zero() || o.is_full() {
            return o.clone();
        }
        let mut v = self.basis.clone();
        v.extend(o.basis.iter().cloned());
        Self::span_of(self.ambient, v)
    }

    /// Zassenhaus intersection.
    pub fn intersect(&self, o: &Self) -> Self {
        assert_eq!(self.ambient, o.ambient);
        let n = self.ambient;
        if self.is_zero() || o.is_full() {
            return self.clone();
        }
        if o.is_zero() || self.is_full() {
            return o.clone();
        }
        if !T::EXACT {
            return self.perp().sum(&o.perp()).perp();
        }
        let mut rows = Vec::with_capacity(self.dim() + o.dim());
        for a in &self.basis {
            let mut r = a.clone();
            r.extend(a.iter().cloned());
            rows.push(r);
        }
        for b in &o.basis {
            let mut r = b.clone();
            r.extend(std::iter::repeat(T::zero()).take(n));
            rows.push(r);
        }
        let (red, piv) = rref(rows, 2 * n);
        let vecs: Vec<Vec<T>> = red
            .into_iter()
            .zip(piv)
            .filter(|&(_, p)| p >= n)
            .map(|(r, _)| r[n..].to_vec())
            .collect();
        Self::span_of(n, vecs)
    }

    pub fn conj(&self) -> Self {
        if !T::EXACT {
            return Self::orthonormal(self.ambient, self.basis.iter().map(|r| r.iter().map(|x| x.conj()).collect()).collect());
        }
        Self::span_of(self.ambient, self.basis.iter().map(|r| r.iter().map(|x| x.conj()).collect()).collect())
    }

    /// True when the subspace is spanned by real vectors.
    pub fn is_real(&self) -> bool {
        if !T::EXACT {
            return *self == self.conj();
        }
        self.basis.iter().flatten().all(|x| x.is_real())
    }

    pub fn image(&self, m: &Matrix<T>) -> Self {
        assert_eq!(m.cols(), self.ambient);
        Self::span_of(m.rows(), self.basis.iter().map(|b| m.apply(b)).collect())
    }

    /// `m(self) ⊆ target`
    pub fn maps_into(&self, m: &Matrix<T>, target: &Self) -> bool {
        self.basis.iter().all(|b| target.contains(&m.apply(b)))
    }

    /// Vectors extending the basis of `self` to a basis of `larger`
    /// (echelon completion; `self ⊆ larger` required).
    pub fn complement_in(&self, larger: &Self) -> Vec<Vec<T>> {
        let mut cur = self.clone();
        let mut out = Vec::new();
        for b in &larger.basis {
            if cur.dim() == larger.dim() {
                break;
            }
            if !cur.contains(b) {
                out.push(b.clone());
                cur = cur.sum(&Self::span_of(self.ambient, vec![b.clone()]));
            }
        }
        out
    }

    /// Basis vectors as the columns of an `n x dim` matrix.
    pub fn as_columns(&self) -> Matrix<T> {
        Matrix::from_columns(self.ambient, &self.basis)
    }

    /// Annihilator in the dual space, using the standard dual basis.
    pub fn annihilator(&self) -> Self {
        if self.is_zero() {
            return Self::full(self.ambient);
        }
        if !T::EXACT {
            return self.perp().conj();
        }
        let m = Matrix::from_rows(self.basis.clone()).expect("rows");
        Self::span_of(self.ambient, m.kernel())
    }

    pub fn map_scalars<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Subspace<U> {
        Subspace::span_of(self.ambient, self.basis.iter().map(|r| r.iter().map(&f).collect()).collect())
    }

    /// Direct sum placement: `self ⊕ 0` inside `T^{n + extra}` at `offset`.
    pub fn embed(&self, total: usize, offset: usize) -> Self {
        Self::span_of(
            total,
            self.basis
                .iter()
                .map(|b| {
                    let mut v = vec![T::zero(); total];
                    for (k, x) in b.iter().enumerate() {
                        v[offset + k] = x.clone();
                    }
                    v
                })
                .collect(),
        )
    }

    /// Tensor product of subspaces inside `T^{n m}` (Kronecker ordering).
    pub fn tensor(&self, o: &Self) -> Self {
        let mut v = Vec::new();
        for a in &self.basis {
            for b in &o.basis {
                v.push(a.iter().flat_map(|x| b.iter().map(move |y| x.mul_ref(y))).collect());
            }
        }
        Self::span_of(self.ambient * o.ambient, v)
    }
}

/// `Σ conj(a_j) b_j`
fn inner<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |mut acc, (x, y)| {
        acc.add_mul_assign(&x.conj(), y);
        acc
    })
}

fn norm<T: Scalar>(a: &[T]) -> f64 {
    a.iter().map(|x| x.magnitude().powi(2)).sum::<f64>().sqrt()
}

/// `v` minus its projection onto the span of the orthonormal `q`.
fn reject<T: Scalar>(v: &[T], q: &[Vec<T>]) -> Vec<T> {
    let mut r = v.to_vec();
    for b in q {
        let c = inner(b, &r);
        for (x, y) in r.iter_mut().zip(b) {
            x.sub_mul_assign(&c, y);
        }
    }
    r
}

/// Gram-Schmidt with column pivoting: repeatedly keeps the candidate with the
/// largest residual, reorthogonalized once, until residuals fall below
/// `FLOAT_TOL` times the largest input norm or `limit` vectors are kept.
fn orthonormalize<T: Scalar>(vectors: Vec<Vec<T>>, limit: Option<usize>) -> Vec<Vec<T>> {
    let scale = vectors.iter().map(|v| norm(v)).fold(0.0, f64::max);
    let mut rest = vectors;
    let mut q: Vec<Vec<T>> = Vec::new();
    while limit.map_or(true, |l| q.len() < l) && !rest.is_empty() {
        let norms: Vec<f64> = rest.iter().map(|v| norm(v)).collect();
        let (best, &size) = norms.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).expect("nonempty");
        if size <= FLOAT_TOL * scale {
            break;
        }
        let v = reject(&rest.swap_remove(best), &q);
        let inv = T::from_f64(1.0 / norm(&v));
        let v: Vec<T> = v.iter().map(|x| x.mul_ref(&inv)).collect();
        q.push(v);
        let last = std::slice::from_ref(q.last().expect("pushed"));
        rest = rest.iter().map(|r| reject(r, last)).collect();
    }
    q
}

pub fn unit_vector<T: Scalar>(n: usize, i: usize) -> Vec<T> {
    let mut v = vec![T::zero(); n];
    v[i] = T::one();
    v
}

/// Convenience for dense vector arithmetic.
pub fn vec_add<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.add_ref(y)).collect()
}

pub fn vec_scale<T: Scalar>(a: &[T], s: &T) -> Vec<T> {
    a.iter().map(|x| x.mul_ref(s)).collect()
}

pub fn is_zero_vec<T: Scalar>(a: &[T]) -> bool {
    let scale = if T::EXACT { 1.0 } else { a.iter().map(|x| x.magnitude()).fold(1.0, f64::max) };
    a.iter().all(|x| x.is_negligible(scale))
}
