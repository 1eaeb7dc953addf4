//! Increasing and decreasing filtrations, graded pieces and gradings.

use std::collections::BTreeMap;

use crate::error::{dim_err, MhxError, Result};
use crate::linalg::{Frame, Matrix, Subspace};
use crate::scalar::Scalar;

/// `W_k` for integer `k`; stored on the window `[start, start + steps.len())`,
/// zero below and the full space above.
#[derive(Clone, Debug)]
pub struct IncreasingFiltration<T> {
    ambient: usize,
    start: i64,
    steps: Vec<Subspace<T>>,
    zero: Subspace<T>,
    full: Subspace<T>,
}

impl<T: Scalar> PartialEq for IncreasingFiltration<T> {
    fn eq(&self, o: &Self) -> bool {
        self.ambient == o.ambient && self.start == o.start && self.steps == o.steps
    }
}

impl<T: Scalar> IncreasingFiltration<T> {
    /// From listed steps: `W_k` is the entry at the greatest listed index `<= k`.
    /// The top entry must be the whole space.
    pub fn new(ambient: usize, listed: BTreeMap<i64, Subspace<T>>) -> Result<Self> {
        if listed.values().any(|s| s.ambient_dim() != ambient) {
            return Err(dim_err("filtration step in wrong ambient space"));
        }
        let Some((&lo, _)) = listed.iter().next() else {
            if ambient == 0 {
                return Ok(Self::trivial(0, 0));
            }
            return Err(MhxError::InvalidFiltration("no steps given".into()));
        };
        let hi = *listed.keys().last().unwrap();
        if !listed[&hi].is_full() {
            return Err(MhxError::InvalidFiltration(format!("top step W_{hi} is not the whole space")));
        }
        let mut steps = Vec::new();
        let mut cur = Subspace::zero(ambient);
        for k in lo..=hi {
            if let Some(s) = listed.get(&k) {
                if !cur.is_subspace_of(s) {
                    return Err(MhxError::InvalidFiltration(format!("W_{} is not contained in W_{}", k - 1, k)));
                }
                cur = s.clone();
            }
            steps.push(cur.clone());
        }
        Ok(Self::from_steps(ambient, lo, steps))
    }

    /// Filtration with the single jump `W_{k-1} = 0`, `W_k = V`.
    pub fn trivial(ambient: usize, k: i64) -> Self {
        Self::from_steps(ambient, k, vec![Subspace::full(ambient)])
    }

    /// Normalizes the window; `steps` must be nested and end at the full space.
    pub fn from_steps(ambient: usize, start: i64, mut steps: Vec<Subspace<T>>) -> Self {
        let mut start = start;
        while steps.len() > 1 && steps[0].is_zero() {
            steps.remove(0);
            start += 1;
        }
        while steps.len() > 1 && steps[steps.len() - 2].is_full() {
            steps.pop();
        }
        IncreasingFiltration { ambient, start, steps, zero: Subspace::zero(ambient), full: Subspace::full(ambient) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn get(&self, k: i64) -> &Subspace<T> {
        if k < self.start {
            &self.zero
        } else {
            let idx = (k - self.start) as usize;
            self.steps.get(idx).unwrap_or(&self.full)
        }
    }

    /// `(k_min, k_max)`: first index with `W_k != 0` and first with `W_k = V`.
    pub fn window(&self) -> (i64, i64) {
        (self.start, self.start + self.steps.len() as i64 - 1)
    }

    /// Indices `k` with `Gr_k != 0`, ascending.
    pub fn jumps(&self) -> Vec<i64> {
        let (lo, hi) = self.window();
        (lo..=hi).filter(|&k| self.gr_dim(k) > 0).collect()
    }

    pub fn gr_dim(&self, k: i64) -> usize {
        self.get(k).dim() - self.get(k - 1).dim()
    }

    /// `W[l]_j = W_{j+l}`
    pub fn shift(&self, l: i64) -> Self {
        IncreasingFiltration { start: self.start - l, ..self.clone() }
    }

    /// Image filtration `g W`.
    pub fn image(&self, g: &Matrix<T>) -> Self {
        Self::from_steps(self.ambient, self.start, self.steps.iter().map(|s| s.image(g)).collect())
    }

    pub fn conj(&self) -> Self {
        Self::from_steps(self.ambient, self.start, self.steps.iter().map(|s| s.conj()).collect())
    }

    pub fn is_real(&self) -> bool {
        self.steps.iter().all(|s| *s == s.conj())
    }

    /// `m W_k ⊆ W_{k-r}` for all `k` (for `r = 0`: `m` preserves `W`).
    pub fn lowers_by(&self, m: &Matrix<T>, r: i64) -> bool {
        let (lo, hi) = self.window();
        (lo..=hi).all(|k| self.get(k).maps_into(m, self.get(k - r)))
    }

    pub fn is_preserved_by(&self, m: &Matrix<T>) -> bool {
        self.lowers_by(m, 0)
    }

    /// Largest `r` with `m ∈ Lie_{-r}`; `None` for `m = 0`.
    pub fn lowering_degree(&self, m: &Matrix<T>) -> Option<i64> {
        if m.is_zero() {
            return None;
        }
        let (lo, hi) = self.window();
        let span = hi - lo + 1;
        let mut r = -span;
        while r <= span {
            if !self.lowers_by(m, r + 1) {
                return Some(r);
            }
            r += 1;
        }
        Some(span)
    }

    pub fn graded_piece(&self, k: i64, y: Option<&Grading<T>>) -> Result<GradedPiece<T>> {
        match y {
            Some(y) => {
                if !y.grades(self) {
                    return Err(MhxError::NotGrading("grading does not grade the filtration".into()));
                }
                Ok(GradedPiece::new(k, self.get(k), self.get(k - 1), y.eigenspace(k).basis().to_vec()))
            }
            None => {
                let reps = self.get(k - 1).complement_in(self.get(k));
                Ok(GradedPiece::new(k, self.get(k), self.get(k - 1), reps))
            }
        }
    }

    pub fn map_scalars<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> IncreasingFiltration<U> {
        IncreasingFiltration::from_steps(self.ambient, self.start, self.steps.iter().map(|s| s.map_scalars(f)).collect())
    }

    /// Listed form: the subspace at each index where it changes.
    pub fn listed(&self) -> BTreeMap<i64, Subspace<T>> {
        let (lo, hi) = self.window();
        (lo..=hi).filter(|&k| k == lo || self.gr_dim(k) > 0).map(|k| (k, self.get(k).clone())).collect()
    }

    pub fn direct_sum(&self, o: &Self) -> Self {
        let n = self.ambient + o.ambient;
        let lo = self.window().0.min(o.window().0);
        let hi = self.window().1.max(o.window().1);
        let steps = (lo..=hi).map(|k| self.get(k).embed(n, 0).sum(&o.get(k).embed(n, self.ambient))).collect();
        Self::from_steps(n, lo, steps)
    }

    /// `W*_k = (W_{-k-1})^⊥`
    pub fn dual(&self) -> Self {
        let (lo, hi) = self.window();
        let steps = (-hi - 1..=-lo).map(|k| self.get(-k - 1).annihilator()).collect();
        Self::from_steps(self.ambient, -hi - 1, steps)
    }

    /// `(W ⊗ W')_k = Σ_{a+b=k} W_a ⊗ W'_b`
    pub fn tensor(&self, o: &Self) -> Self {
        let n = self.ambient * o.ambient;
        let (l1, h1) = self.window();
        let (l2, h2) = o.window();
        let steps = (l1 + l2..=h1 + h2)
            .map(|k| {
                (l1..=h1).fold(Subspace::zero(n), |acc, a| acc.sum(&self.get(a).tensor(o.get(k - a))))
            })
            .collect();
        Self::from_steps(n, l1 + l2, steps)
    }
}

/// `F^p` for integer `p`; stored on `[start, start + steps.len())`,
/// the full space below and zero above.
#[derive(Clone, Debug)]
pub struct DecreasingFiltration<T> {
    ambient: usize,
    start: i64,
    steps: Vec<Subspace<T>>,
    zero: Subspace<T>,
    full: Subspace<T>,
}

impl<T: Scalar> PartialEq for DecreasingFiltration<T> {
    fn eq(&self, o: &Self) -> bool {
        self.ambient == o.ambient && self.start == o.start && self.steps == o.steps
    }
}

impl<T: Scalar> DecreasingFiltration<T> {
    /// From listed steps: `F^p` is the entry at the smallest listed index `>= p`,
    /// zero above the top. The lowest entry must be the whole space.
    pub fn new(ambient: usize, listed: BTreeMap<i64, Subspace<T>>) -> Result<Self> {
        if listed.values().any(|s| s.ambient_dim() != ambient) {
            return Err(dim_err("filtration step in wrong ambient space"));
        }
        let Some((&lo, low)) = listed.iter().next() else {
            if ambient == 0 {
                return Ok(Self::trivial(0, 0));
            }
            return Err(MhxError::InvalidFiltration("no steps given".into()));
        };
        if !low.is_full() {
            return Err(MhxError::InvalidFiltration(format!("lowest step F^{lo} is not the whole space")));
        }
        let hi = *listed.keys().last().unwrap();
        let mut steps = Vec::new();
        let mut cur = Subspace::zero(ambient);
        for p in (lo..=hi).rev() {
            if let Some(s) = listed.get(&p) {
                if !cur.is_subspace_of(s) {
                    return Err(MhxError::InvalidFiltration(format!("F^{} is not contained in F^{}", p + 1, p)));
                }
                cur = s.clone();
            }
            steps.push(cur.clone());
        }
        steps.reverse();
        Ok(Self::from_steps(ambient, lo, steps))
    }

    /// `F^p = V`, `F^{p+1} = 0`.
    pub fn trivial(ambient: usize, p: i64) -> Self {
        Self::from_steps(ambient, p, vec![Subspace::full(ambient)])
    }

    pub fn from_steps(ambient: usize, start: i64, mut steps: Vec<Subspace<T>>) -> Self {
        let mut start = start;
        while steps.len() > 1 && steps[1].is_full() {
            steps.remove(0);
            start += 1;
        }
        while steps.len() > 1 && steps[steps.len() - 1].is_zero() {
            steps.pop();
        }
        DecreasingFiltration { ambient, start, steps, zero: Subspace::zero(ambient), full: Subspace::full(ambient) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn get(&self, p: i64) -> &Subspace<T> {
        if p < self.start {
            &self.full
        } else {
            self.steps.get((p - self.start) as usize).unwrap_or(&self.zero)
        }
    }

    /// `(p_min, p_max)`: last index with `F^p = V`, last with `F^p != 0`.
    pub fn window(&self) -> (i64, i64) {
        (self.start, self.start + self.steps.len() as i64 - 1)
    }

    pub fn image(&self, g: &Matrix<T>) -> Self {
        Self::from_steps(self.ambient, self.start, self.steps.iter().map(|s| s.image(g)).collect())
    }

    pub fn conj(&self) -> Self {
        Self::from_steps(self.ambient, self.start, self.steps.iter().map(|s| s.conj()).collect())
    }

    pub fn shift(&self, l: i64) -> Self {
        DecreasingFiltration { start: self.start - l, ..self.clone() }
    }

    /// `m F^p ⊆ F^{p+r}` for all `p`.
    pub fn shifts_by(&self, m: &Matrix<T>, r: i64) -> bool {
        let (lo, hi) = self.window();
        (lo..=hi).all(|p| self.get(p).maps_into(m, self.get(p + r)))
    }

    pub fn map_scalars<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> DecreasingFiltration<U> {
        DecreasingFiltration::from_steps(self.ambient, self.start, self.steps.iter().map(|s| s.map_scalars(f)).collect())
    }

    pub fn listed(&self) -> BTreeMap<i64, Subspace<T>> {
        let (lo, hi) = self.window();
        (lo..=hi).filter(|&p| p == lo || self.get(p) != self.get(p - 1)).map(|p| (p, self.get(p).clone())).collect()
    }

    pub fn direct_sum(&self, o: &Self) -> Self {
        let n = self.ambient + o.ambient;
        let lo = self.window().0.min(o.window().0);
        let hi = self.window().1.max(o.window().1);
        let steps = (lo..=hi).map(|p| self.get(p).embed(n, 0).sum(&o.get(p).embed(n, self.ambient))).collect();
        Self::from_steps(n, lo, steps)
    }
}

/// `Gr_k = W_k / W_{k-1}` with an explicit complement of representatives.
#[derive(Clone, Debug)]
pub struct GradedPiece<T> {
    weight: i64,
    reps: Vec<Vec<T>>,
    ambient: usize,
    /// Inverse of `[reps | basis(W_{k-1}) | completion]`; its first rows give coordinates.
    coords: Matrix<T>,
}

impl<T: Scalar> GradedPiece<T> {
    fn new(weight: i64, wk: &Subspace<T>, wk1: &Subspace<T>, reps: Vec<Vec<T>>) -> Self {
        let n = wk.ambient_dim();
        let mut cols = reps.clone();
        cols.extend(wk1.basis().iter().cloned());
        let rest = Subspace::span_of(n, cols.clone()).complement_in(&Subspace::full(n));
        cols.extend(rest);
        let coords = Matrix::from_columns(n, &cols).inverse().expect("representatives complement W_{k-1}");
        GradedPiece { weight, reps, ambient: n, coords }
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn representatives(&self) -> &[Vec<T>] {
        &self.reps
    }

    pub fn representative_space(&self) -> Subspace<T> {
        Subspace::span_of(self.ambient, self.reps.clone())
    }

    /// Class of `v ∈ W_k` in representative coordinates.
    pub fn project(&self, v: &[T]) -> Vec<T> {
        let c = self.coords.apply(v);
        c[..self.dim()].to_vec()
    }

    /// Representative of a class.
    pub fn section(&self, c: &[T]) -> Vec<T> {
        let mut v = vec![T::zero(); self.ambient];
        for (x, r) in c.iter().zip(&self.reps) {
            for (a, b) in v.iter_mut().zip(r) {
                a.add_mul_assign(x, b);
            }
        }
        v
    }

    /// Operator induced on `Gr_k` by `m` (which must preserve `W`).
    pub fn induced_operator(&self, m: &Matrix<T>) -> Matrix<T> {
        let cols: Vec<Vec<T>> = self.reps.iter().map(|r| self.project(&m.apply(r))).collect();
        Matrix::from_columns(self.dim(), &cols)
    }

    /// Image of `U ∩ W_k` in `Gr_k`, with `wk = W_k`.
    pub fn induced_subspace(&self, u: &Subspace<T>, wk: &Subspace<T>) -> Subspace<T> {
        let inter = u.intersect(wk);
        Subspace::span_of(self.dim(), inter.basis().iter().map(|b| self.project(b)).collect())
    }

    pub fn induced_decreasing(&self, f: &DecreasingFiltration<T>, wk: &Subspace<T>) -> DecreasingFiltration<T> {
        let (lo, hi) = f.window();
        let steps = (lo..=hi + 1).map(|p| self.induced_subspace(f.get(p), wk)).collect();
        DecreasingFiltration::from_steps(self.dim(), lo, steps)
    }

    pub fn induced_increasing(&self, m: &IncreasingFiltration<T>, wk: &Subspace<T>) -> IncreasingFiltration<T> {
        let (lo, hi) = m.window();
        let steps = (lo..=hi).map(|j| self.induced_subspace(m.get(j), wk)).collect();
        IncreasingFiltration::from_steps(self.dim(), lo, steps)
    }
}

/// Filtration induced by `F` on `Gr^W_k`, in the coordinates of the default
/// representatives.
pub fn induce_on_graded<T: Scalar>(f: &DecreasingFiltration<T>, w: &IncreasingFiltration<T>, k: i64) -> DecreasingFiltration<T> {
    let gp = w.graded_piece(k, None).expect("no grading supplied");
    gp.induced_decreasing(f, w.get(k))
}

/// Semisimple operator with integer eigenvalues, kept as its eigenspaces.
#[derive(Clone, Debug)]
pub struct Grading<T> {
    spaces: BTreeMap<i64, Subspace<T>>,
    frame: Frame<T, i64>,
}

impl<T: Scalar> PartialEq for Grading<T> {
    fn eq(&self, o: &Self) -> bool {
        self.spaces == o.spaces
    }
}

impl<T: Scalar> Grading<T> {
    /// From eigenspaces; they must form a direct sum equal to the whole space.
    pub fn new(n: usize, spaces: BTreeMap<i64, Subspace<T>>) -> Result<Self> {
        let spaces: BTreeMap<i64, Subspace<T>> = spaces.into_iter().filter(|(_, s)| !s.is_zero()).collect();
        if spaces.values().any(|s| s.ambient_dim() != n) {
            return Err(dim_err("eigenspace in wrong ambient space"));
        }
        let frame = Frame::from_parts(n, spaces.iter().map(|(k, s)| (*k, s.clone())))?;
        Ok(Grading { spaces, frame })
    }

    /// From a frame of eigenvectors with integer labels.
    pub fn from_frame(frame: Frame<T, i64>) -> Self {
        let n = frame.dim();
        let mut cols: BTreeMap<i64, Vec<Vec<T>>> = BTreeMap::new();
        for (j, l) in frame.labels().iter().enumerate() {
            cols.entry(*l).or_default().push(frame.basis().column(j));
        }
        let spaces = cols.into_iter().map(|(k, v)| (k, Subspace::span_of(n, v))).collect();
        Grading { spaces, frame }
    }

    /// Diagonal grading of the standard basis.
    pub fn diagonal(weights: &[i64]) -> Self {
        let n = weights.len();
        let frame = Frame::from_vectors(n, Matrix::<T>::identity(n).columns(), weights.to_vec()).expect("identity");
        Self::from_frame(frame)
    }

    /// Recover the grading from a semisimple operator with integer spectrum.
    pub fn from_operator(a: &Matrix<T>) -> Result<Self> {
        if !a.is_square() {
            return Err(dim_err("grading operator must be square"));
        }
        let n = a.rows();
        let bound = (0..n)
            .map(|i| a.row(i).iter().map(|x| x.magnitude()).sum::<f64>())
            .fold(0.0, f64::max)
            .ceil() as i64;
        let mut spaces = BTreeMap::new();
        let mut total = 0;
        for k in -bound..=bound {
            let shifted = a - &Matrix::identity(n).scale(&T::from_i64(k));
            let ker = shifted.kernel();
            if !ker.is_empty() {
                total += ker.len();
                spaces.insert(k, Subspace::span_of(n, ker));
            }
        }
        if total != n {
            return Err(MhxError::NotGrading("operator is not semisimple with integer spectrum".into()));
        }
        Self::new(n, spaces)
    }

    pub fn ambient_dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn frame(&self) -> &Frame<T, i64> {
        &self.frame
    }

    pub fn weights(&self) -> Vec<i64> {
        self.spaces.keys().copied().collect()
    }

    pub fn eigenspaces(&self) -> &BTreeMap<i64, Subspace<T>> {
        &self.spaces
    }

    pub fn eigenspace(&self, k: i64) -> Subspace<T> {
        self.spaces.get(&k).cloned().unwrap_or_else(|| Subspace::zero(self.ambient_dim()))
    }

    pub fn as_operator(&self) -> Matrix<T> {
        self.frame.diagonal_operator(|k| T::from_i64(*k))
    }

    /// Projection onto `E_k` along the other eigenspaces.
    pub fn projector(&self, k: i64) -> Matrix<T> {
        self.frame.diagonal_operator(|l| if *l == k { T::one() } else { T::zero() })
    }

    /// `W_k = ⊕_{j<=k} E_j`
    pub fn filtration_of(&self) -> IncreasingFiltration<T> {
        let n = self.ambient_dim();
        let Some((&lo, _)) = self.spaces.iter().next() else {
            return IncreasingFiltration::trivial(n, 0);
        };
        let hi = *self.spaces.keys().last().unwrap();
        let steps = (lo..=hi).map(|k| self.frame.span_where(|l| *l <= k)).collect();
        IncreasingFiltration::from_steps(n, lo, steps)
    }

    pub fn grades(&self, w: &IncreasingFiltration<T>) -> bool {
        self.filtration_of() == *w
    }

    /// Grading with eigenspaces `g E_k`.
    pub fn conjugate_by(&self, g: &Matrix<T>) -> Self {
        let n = self.ambient_dim();
        let cols = (g * self.frame.basis()).columns();
        Self::from_frame(Frame::from_vectors(n, cols, self.frame.labels().to_vec()).expect("g invertible"))
    }

    /// Components `a_m` with `[Y, a_m] = m a_m`.
    pub fn ad_components(&self, a: &Matrix<T>) -> BTreeMap<i64, Matrix<T>> {
        self.frame.components(a, |i, j| i - j)
    }

    pub fn ad_component(&self, a: &Matrix<T>, m: i64) -> Matrix<T> {
        self.frame.filter_blocks(a, |i, j| i - j == m)
    }

    pub fn is_real(&self) -> bool {
        self.as_operator().is_real()
    }

    pub fn shifted(&self, l: i64) -> Self {
        let labels = self.frame.labels().iter().map(|k| k + l).collect();
        let frame = Frame::from_vectors(self.ambient_dim(), self.frame.basis().columns(), labels).expect("frame");
        Self::from_frame(frame)
    }

    pub fn map_scalars<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> Grading<U> {
        let n = self.ambient_dim();
        Grading::new(n, self.spaces.iter().map(|(k, s)| (*k, s.map_scalars(f))).collect()).expect("grading")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit_vector;
    use crate::scalar::{gi, q, GaussRat};

    type S = Subspace<GaussRat>;

    fn e(n: usize, i: usize) -> Vec<GaussRat> {
        unit_vector(n, i)
    }

    fn tate_w() -> IncreasingFiltration<GaussRat> {
        IncreasingFiltration::new(2, BTreeMap::from([(0, S::span_of(2, vec![e(2, 0)])), (2, S::full(2))])).unwrap()
    }

    #[test]
    fn shift_laws() {
        let w = tate_w();
        assert_eq!(w.shift(0), w);
        assert_eq!(w.shift(-2).jumps(), vec![2, 4]);
        assert_eq!(w.shift(3).shift(-1), w.shift(2));
        assert_eq!(w.shift(-2).get(2), w.get(0));
    }

    #[test]
    fn graded_pieces() {
        let w = tate_w();
        assert_eq!(w.gr_dim(2), 1);
        assert_eq!(w.gr_dim(1), 0);
        assert_eq!(w.gr_dim(5), 0);
        let y = Grading::diagonal(&[0, 2]);
        let gp = w.graded_piece(2, Some(&y)).unwrap();
        assert_eq!(gp.representative_space(), S::span_of(2, vec![e(2, 1)]));
        let v = vec![q(5, 1), q(3, 1)];
        assert_eq!(gp.project(&v), vec![q(3, 1)]);
        assert_eq!(gp.project(&gp.section(&[q(7, 1)])), vec![q(7, 1)]);
        let bad = Grading::diagonal(&[2, 0]);
        assert!(w.graded_piece(2, Some(&bad)).is_err());
    }

    #[test]
    fn induced_hodge_filtration() {
        let w = tate_w();
        let f = DecreasingFiltration::new(2, BTreeMap::from([(0, S::full(2)), (1, S::span_of(2, vec![vec![gi(0, 1), q(1, 1)]]))])).unwrap();
        let fg = induce_on_graded(&f, &w, 2);
        assert!(fg.get(1).is_full());
        assert!(fg.get(2).is_zero());
        let fg0 = induce_on_graded(&f, &w, 0);
        assert!(fg0.get(0).is_full());
        assert!(fg0.get(1).is_zero());
    }

    #[test]
    fn grades_examples() {
        let w = tate_w();
        assert!(Grading::<GaussRat>::diagonal(&[0, 2]).grades(&w));
        let sp = BTreeMap::from([(0, S::span_of(2, vec![vec![q(1, 1), q(1, 1)]])), (2, S::span_of(2, vec![e(2, 1)]))]);
        let y = Grading::new(2, sp).unwrap();
        assert!(!y.grades(&w));
        assert!(y.grades(&y.filtration_of()));
    }

    #[test]
    fn operator_round_trip() {
        let y = Grading::<GaussRat>::diagonal(&[0, 2, -1]);
        let g = Matrix::from_rows(vec![
            vec![q(1, 1), q(2, 1), q(0, 1)],
            vec![q(0, 1), q(1, 1), gi(0, 1)],
            vec![q(1, 1), q(0, 1), q(1, 1)],
        ])
        .unwrap();
        let yc = y.conjugate_by(&g);
        let back = Grading::from_operator(&yc.as_operator()).unwrap();
        assert_eq!(back, yc);
        let nil = crate::linalg::unit::<GaussRat>(2, 0, 1);
        assert!(Grading::from_operator(&nil).is_err());
    }

    #[test]
    fn filtration_validation() {
        let bad = IncreasingFiltration::new(
            2,
            BTreeMap::from([(1, S::span_of(2, vec![e(2, 0)])), (2, S::span_of(2, vec![e(2, 1)])), (3, S::full(2))]),
        );
        assert!(matches!(bad, Err(MhxError::InvalidFiltration(_))));
        let no_top = IncreasingFiltration::new(2, BTreeMap::from([(0, S::span_of(2, vec![e(2, 0)]))]));
        assert!(no_top.is_err());
    }

    #[test]
    fn dual_of_tate() {
        let d = tate_w().dual();
        assert_eq!(d.jumps(), vec![-2, 0]);
        assert_eq!(*d.get(-2), S::span_of(2, vec![e(2, 1)]));
    }
}
