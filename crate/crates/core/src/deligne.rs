//! The grading `Y(N, relY)` of a weight filtration, the triple grading
//! `Y(F, W, N)`, its exact conjugation identity and functoriality.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{dim_err, MhxError, Result};
use crate::filtered::{DecreasingFiltration, Grading, IncreasingFiltration};
use crate::hodge::{deligne_bigrading, MixedHodgeStructure, Part};
use crate::linalg::{unit, Frame, Matrix, Subspace};
use crate::scalar::Scalar;
use crate::sl2::sl2_complete;
use crate::weightfilt::{relative_weight, verify_rel};

/// Which adapted frame the solver starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeligneStart {
    Canonical,
    /// Canonical frame moved by a random element of the unipotent group
    /// commuting with `relY`.
    Seeded(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Certificate {
    pub commutes_with_rel: bool,
    pub n_minus_one_vanishes: bool,
    pub primitive: bool,
    pub grades_w: bool,
}

impl Certificate {
    pub fn all(&self) -> bool {
        self.commutes_with_rel && self.n_minus_one_vanishes && self.primitive && self.grades_w
    }
}

#[derive(Debug, Clone)]
pub struct DeligneGradingResult<T> {
    pub y: Grading<T>,
    /// `k -> N_{-k}`, the `ad Y` eigencomponent of `N` with eigenvalue `-k`
    pub n_components: BTreeMap<i64, Matrix<T>>,
    pub certificate: Certificate,
}

impl<T: Scalar> DeligneGradingResult<T> {
    pub fn n_component(&self, k: i64) -> Matrix<T> {
        let n = self.y.ambient_dim();
        self.n_components.get(&k).cloned().unwrap_or_else(|| Matrix::zeros(n, n))
    }
}

/// `(ad a)^k b`
pub fn ad_power<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, k: usize) -> Matrix<T> {
    let mut out = b.clone();
    for _ in 0..k {
        out = a.commutator(&out);
    }
    out
}

fn certify<T: Scalar>(
    n: &Matrix<T>,
    rel_y: &Grading<T>,
    w: &IncreasingFiltration<T>,
    y: &Grading<T>,
) -> (BTreeMap<i64, Matrix<T>>, Certificate) {
    let comps = y.ad_components(n);
    let n0 = comps.get(&0).cloned().unwrap_or_else(|| Matrix::zeros(n.rows(), n.rows()));
    let positive = comps.keys().any(|&m| m > 0);
    let n_components: BTreeMap<i64, Matrix<T>> = comps.into_iter().map(|(m, c)| (-m, c)).collect();
    let primitive = !positive
        && n_components
            .iter()
            .filter(|(&k, _)| k > 0)
            .all(|(&k, c)| ad_power(&n0, c, k as usize - 1).is_zero());
    let certificate = Certificate {
        commutes_with_rel: rel_y.as_operator().commutator(&y.as_operator()).is_zero(),
        n_minus_one_vanishes: !n_components.contains_key(&1) && !positive,
        primitive,
        grades_w: y.grades(w),
    };
    (n_components, certificate)
}

/// Frame adapted to `W` and `relY` at once, labelled `(k, j)`:
/// `W_k ∩ E_j(relY)` modulo `W_{k-1} ∩ E_j(relY)`.
fn joint_frame<T: Scalar>(rel_y: &Grading<T>, w: &IncreasingFiltration<T>) -> Result<Frame<T, (i64, i64)>> {
    let d = w.ambient_dim();
    let mut cols = Vec::new();
    let mut labels = Vec::new();
    for (&j, ej) in rel_y.eigenspaces() {
        for k in w.jumps() {
            let lower = w.get(k - 1).intersect(ej);
            let upper = w.get(k).intersect(ej);
            for v in lower.complement_in(&upper) {
                cols.push(v);
                labels.push((k, j));
            }
        }
    }
    Frame::from_vectors(d, cols, labels).map_err(|_| MhxError::Precondition("relY does not split W".into()))
}

/// The unique grading `Y` of `W` with `[relY, Y] = 0`, `N_{-1} = 0` and
/// `(ad N_0)^{k-1} N_{-k} = 0` for `k > 0`.
pub fn deligne_grading<T: Scalar>(
    n: &Matrix<T>,
    rel_y: &Grading<T>,
    w: &IncreasingFiltration<T>,
    start: DeligneStart,
) -> Result<DeligneGradingResult<T>> {
    let d = n.rows();
    if !n.is_square() || rel_y.ambient_dim() != d || w.ambient_dim() != d {
        return Err(dim_err("N, relY and W live in different spaces"));
    }
    if !n.is_nilpotent() {
        return Err(MhxError::NotNilpotent);
    }
    let rel_op = rel_y.as_operator();
    if !w.is_preserved_by(&rel_op) {
        return Err(MhxError::Precondition("relY does not preserve W".into()));
    }
    if rel_op.commutator(n) != n.scale(&T::from_i64(-2)) {
        return Err(MhxError::Precondition("[relY, N] != -2N".into()));
    }
    if !verify_rel(n, w, &rel_y.filtration_of()) {
        return Err(MhxError::Precondition("relY does not grade the relative weight filtration of (N, W)".into()));
    }

    let frame = joint_frame(rel_y, w)?;
    let labels = frame.labels().to_vec();
    let mut p = frame.basis().clone();
    let lowering = |i: usize, j: usize, r: Option<i64>| {
        let (yi, ri) = labels[i];
        let (yj, rj) = labels[j];
        ri == rj && yi < yj && r.map_or(true, |r| yj - yi == r)
    };

    if let DeligneStart::Seeded(seed) = start {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = Matrix::from_fn(d, d, |i, j| {
            if lowering(i, j, None) {
                T::from_i64(rng.gen_range(-3..=3))
            } else {
                T::zero()
            }
        });
        p = &p * &x.exp_nilpotent()?;
    }

    let ys: Vec<i64> = labels.iter().map(|l| l.0).collect();
    let depth = match (ys.iter().min(), ys.iter().max()) {
        (Some(lo), Some(hi)) => hi - lo,
        _ => 0,
    };
    for r in 1..=depth {
        let pinv = p.inverse().ok_or_else(|| MhxError::Internal("frame became singular".into()))?;
        let nh = &(&pinv * n) * &p;
        let degree = |m: i64| Matrix::from_fn(d, d, |i, j| if ys[i] - ys[j] == m { nh.get(i, j).clone() } else { T::zero() });
        let n0 = degree(0);
        let nr = degree(-r);
        let rhs = -&ad_power(&n0, &nr, r as usize - 1);
        if rhs.is_zero() {
            continue;
        }
        let slots: Vec<(usize, usize)> =
            (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).filter(|&(i, j)| lowering(i, j, Some(r))).collect();
        let cols: Vec<Vec<T>> = slots.iter().map(|&(i, j)| ad_power(&n0, &unit(d, i, j), r as usize).entries().to_vec()).collect();
        let infeasible = || MhxError::Internal(format!("stage {r} of the grading solve is infeasible"));
        if cols.is_empty() {
            return Err(infeasible());
        }
        let a = Matrix::from_columns(d * d, &cols);
        let x = a.solve(rhs.entries()).ok_or_else(infeasible)?;
        let mut xh = Matrix::zeros(d, d);
        for (&(i, j), v) in slots.iter().zip(x) {
            xh.set(i, j, v);
        }
        p = &p * &xh.exp_nilpotent()?;
    }

    let frame = Frame::from_vectors(d, p.columns(), ys).map_err(|_| MhxError::Internal("final frame singular".into()))?;
    let y = Grading::from_frame(frame);
    let (n_components, certificate) = certify(n, rel_y, w, &y);
    if !certificate.all() {
        return Err(MhxError::Internal(format!("grading fails its certificate: {certificate:?}")));
    }
    Ok(DeligneGradingResult { y, n_components, certificate })
}

/// `[N - N_0, N_0⁺] = 0` for the triple completing `(N_0, relY - Y)`.
pub fn remark_commutativity<T: Scalar>(n: &Matrix<T>, rel_y: &Grading<T>, res: &DeligneGradingResult<T>) -> Result<bool> {
    let n0 = res.n_component(0);
    let h = &rel_y.as_operator() - &res.y.as_operator();
    let n0_plus = sl2_complete(&n0, &h)?;
    Ok((n - &n0).commutator(&n0_plus).is_zero())
}

/// Data attached to an admissible triple `(F, W, N)`.
#[derive(Debug, Clone)]
pub struct TripleData<T> {
    pub rel_w: IncreasingFiltration<T>,
    pub rel_mhs: MixedHodgeStructure<T>,
    pub grading: DeligneGradingResult<T>,
}

/// `W_k = ⊕ (W_k ∩ I^{p,q})` for every `k`.
pub fn w_by_sub_mhs<T: Scalar>(mhs: &MixedHodgeStructure<T>, w: &IncreasingFiltration<T>) -> bool {
    let (lo, hi) = w.window();
    (lo..=hi).all(|k| {
        let wk = w.get(k);
        let parts = mhs.bigrading().values().fold(Subspace::zero(wk.ambient_dim()), |acc, s| acc.sum(&s.intersect(wk)));
        parts == *wk
    })
}

/// Checks admissibility of `(F, W, N)` and computes `Y(F, W, N)`.
pub fn triple_data<T: Scalar>(f: &DecreasingFiltration<T>, w: &IncreasingFiltration<T>, n: &Matrix<T>) -> Result<TripleData<T>> {
    let d = n.rows();
    if f.ambient_dim() != d || w.ambient_dim() != d {
        return Err(dim_err("F, W and N live in different spaces"));
    }
    let rel = relative_weight(n, w)?;
    let rel_w = match rel.filtration {
        Some(m) if rel.exists => m,
        _ => {
            return Err(MhxError::Precondition(format!(
                "relative weight filtration does not exist: {}",
                rel.failure_witness.unwrap_or_default()
            )))
        }
    };
    let rel_mhs = deligne_bigrading(f, &rel_w)
        .map_err(|e| MhxError::Precondition(format!("(F, rel W) is not a mixed Hodge structure: {e}")))?;
    if !rel_mhs.morphism_type(n, -1, -1) {
        return Err(MhxError::Precondition("N is not a (-1,-1)-morphism of (F, rel W)".into()));
    }
    if !w_by_sub_mhs(&rel_mhs, w) {
        return Err(MhxError::Precondition("W is not a filtration by sub-MHS of (F, rel W)".into()));
    }
    let grading = deligne_grading(n, rel_mhs.y(), w, DeligneStart::Canonical)?;
    let y = grading.y.as_operator();
    let (pmin, pmax) = f.window();
    if !(pmin..=pmax).all(|p| f.get(p).maps_into(&y, f.get(p))) {
        return Err(MhxError::Internal("Y(F, W, N) does not preserve F".into()));
    }
    if rel_mhs.is_split_real() && !grading.y.is_real() {
        return Err(MhxError::Internal("Y(F, W, N) is not real although (F, rel W) is split".into()));
    }
    Ok(TripleData { rel_w, rel_mhs, grading })
}

pub fn y_of_triple<T: Scalar>(f: &DecreasingFiltration<T>, w: &IncreasingFiltration<T>, n: &Matrix<T>) -> Result<Grading<T>> {
    Ok(triple_data(f, w, n)?.grading.y)
}

#[derive(Debug, Clone)]
pub struct ConjugationPair<T> {
    pub lhs: Grading<T>,
    pub rhs: Grading<T>,
    pub equal: bool,
}

/// `Y_(e^{iyN}F, W)` from scratch against `e^{iyN} Y(F, W, N) e^{-iyN}`.
pub fn theorem2_pair<T: Scalar>(
    f: &DecreasingFiltration<T>,
    w: &IncreasingFiltration<T>,
    n: &Matrix<T>,
    y: &T,
) -> Result<ConjugationPair<T>> {
    let data = triple_data(f, w, n)?;
    if !data.rel_mhs.is_split_real() {
        return Err(MhxError::Precondition("(F, rel W) is not split over R".into()));
    }
    let g = n.scale(&y.mul_ref(&T::i())).exp_nilpotent()?;
    let lhs = deligne_bigrading(&f.image(&g), w)
        .map_err(|e| MhxError::Precondition(format!("(e^(iyN)F, W) is not a mixed Hodge structure: {e}")))?
        .y()
        .clone();
    let rhs = data.grading.y.conjugate_by(&g);
    let equal = lhs == rhs;
    Ok(ConjugationPair { lhs, rhs, equal })
}

/// `log(e^{iyN} e^{-iyN_0})` lies in `Λ` of `(e^{iyN_0}F, W)`.
pub fn star_membership<T: Scalar>(
    f: &DecreasingFiltration<T>,
    w: &IncreasingFiltration<T>,
    n: &Matrix<T>,
    y: &T,
) -> Result<bool> {
    let data = triple_data(f, w, n)?;
    let n0 = data.grading.n_component(0);
    let iy = y.mul_ref(&T::i());
    let g = &n.scale(&iy).exp_nilpotent()? * &n0.scale(&(-iy.clone())).exp_nilpotent()?;
    let l = g.log_unipotent()?;
    let mhs = deligne_bigrading(&f.image(&n0.scale(&iy).exp_nilpotent()?), w)?;
    Ok(mhs.project(&l, Part::Lambda) == l)
}

/// Inputs of [`deligne_grading`].
#[derive(Debug, Clone)]
pub struct GradingInput<T> {
    pub n: Matrix<T>,
    pub rel_y: Grading<T>,
    pub w: IncreasingFiltration<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Functor {
    DirectSum,
    Dual,
    Tensor,
}

impl<T: Scalar> GradingInput<T> {
    pub fn direct_sum(&self, o: &Self) -> Result<Self> {
        let rel = Matrix::block_diag(&[self.rel_y.as_operator(), o.rel_y.as_operator()]);
        Ok(GradingInput {
            n: Matrix::block_diag(&[self.n.clone(), o.n.clone()]),
            rel_y: Grading::from_operator(&rel)?,
            w: self.w.direct_sum(&o.w),
        })
    }

    pub fn dual(&self) -> Result<Self> {
        Ok(GradingInput {
            n: -&self.n.transpose(),
            rel_y: Grading::from_operator(&(-&self.rel_y.as_operator().transpose()))?,
            w: self.w.dual(),
        })
    }

    pub fn tensor(&self, o: &Self) -> Result<Self> {
        let (a, b) = (self.n.rows(), o.n.rows());
        let leibniz = |x: &Matrix<T>, y: &Matrix<T>| &x.kron(&Matrix::identity(b)) + &Matrix::identity(a).kron(y);
        Ok(GradingInput {
            n: leibniz(&self.n, &o.n),
            rel_y: Grading::from_operator(&leibniz(&self.rel_y.as_operator(), &o.rel_y.as_operator()))?,
            w: self.w.tensor(&o.w),
        })
    }

    pub fn grading(&self) -> Result<Grading<T>> {
        Ok(deligne_grading(&self.n, &self.rel_y, &self.w, DeligneStart::Canonical)?.y)
    }
}

/// `Y` of the combined input equals the combination of the `Y`s.
/// `Dual` ignores `b`.
pub fn functoriality_check<T: Scalar>(a: &GradingInput<T>, b: Option<&GradingInput<T>>, op: Functor) -> Result<bool> {
    let second = || b.ok_or_else(|| MhxError::Precondition("operation needs two inputs".into()));
    let ya = a.grading()?.as_operator();
    let (combined, expected) = match op {
        Functor::DirectSum => {
            let b = second()?;
            (a.direct_sum(b)?, Matrix::block_diag(&[ya, b.grading()?.as_operator()]))
        }
        Functor::Dual => (a.dual()?, -&ya.transpose()),
        Functor::Tensor => {
            let b = second()?;
            let yb = b.grading()?.as_operator();
            let (m, k) = (ya.rows(), yb.rows());
            (a.tensor(b)?, &ya.kron(&Matrix::identity(k)) + &Matrix::identity(m).kron(&yb))
        }
    };
    Ok(combined.grading()?.as_operator() == expected)
}
