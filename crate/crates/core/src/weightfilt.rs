//! Monodromy weight filtration `W(N)` and the relative weight filtration
//! `W(N, W)`.

use std::collections::BTreeMap;

use crate::error::{dim_err, MhxError, Result};
use crate::filtered::IncreasingFiltration;
use crate::linalg::{Matrix, Subspace};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct RelWeightResult<T> {
    pub exists: bool,
    pub filtration: Option<IncreasingFiltration<T>>,
    pub failure_witness: Option<String>,
}

/// Jordan strings of a nilpotent matrix: generators `g` with string length
/// `m`, so that `{M^a g : a < m}` over all generators is a basis.
pub fn jordan_strings<T: Scalar>(m: &Matrix<T>) -> Result<Vec<(Vec<T>, usize)>> {
    let d = m.rows();
    let top = m.nilpotency_index().ok_or(MhxError::NotNilpotent)?;
    let kernels: Vec<Subspace<T>> = (0..=top + 1)
        .map(|k| if k == 0 { Subspace::zero(d) } else { Subspace::span_of(d, m.pow(k).kernel()) })
        .collect();
    let mut out = Vec::new();
    for len in (1..=top).rev() {
        let s = kernels[len - 1].sum(&kernels[len + 1].image(m));
        for g in s.complement_in(&kernels[len]) {
            out.push((g, len));
        }
    }
    let mut all = Vec::new();
    for (g, len) in &out {
        let mut v = g.clone();
        for _ in 0..*len {
            let next = m.apply(&v);
            all.push(v);
            v = next;
        }
    }
    if Subspace::span_of(d, all).dim() != d {
        return Err(MhxError::Internal("Jordan strings do not span".into()));
    }
    Ok(out)
}

/// `W(M)` on `T^d` without verification.
fn weight_filtration_raw<T: Scalar>(m: &Matrix<T>) -> IncreasingFiltration<T> {
    let d = m.rows();
    if m.is_zero() {
        return IncreasingFiltration::trivial(d, 0);
    }
    let l = m.nilpotency_index().expect("nilpotent") - 1;
    let ml = m.pow(l);
    let ker = Subspace::span_of(d, ml.kernel());
    let img = Subspace::column_space(&ml);
    let reps = img.complement_in(&ker);
    let r = reps.len();
    let mut cols = reps.clone();
    cols.extend(img.basis().iter().cloned());
    cols.extend(ker.complement_in(&Subspace::full(d)));
    let qinv = Matrix::from_columns(d, &cols).inverse().expect("basis");
    let coords = |v: &[T]| qinv.apply(v)[..r].to_vec();
    let mq = Matrix::from_columns(r, &reps.iter().map(|v| coords(&m.apply(v))).collect::<Vec<_>>());
    let inner = weight_filtration_raw(&mq);
    let lift = |c: &[T]| -> Vec<T> {
        let mut v = vec![T::zero(); d];
        for (x, rep) in c.iter().zip(&reps) {
            for (a, b) in v.iter_mut().zip(rep) {
                a.add_mul_assign(x, b);
            }
        }
        v
    };
    let li = l as i64;
    let steps = (-li..=li)
        .map(|k| {
            if k == li {
                Subspace::full(d)
            } else {
                img.sum(&Subspace::span_of(d, inner.get(k).basis().iter().map(|c| lift(c)).collect()))
            }
        })
        .collect();
    IncreasingFiltration::from_steps(d, -li, steps)
}

/// Both defining properties of `W(N)`.
pub fn is_monodromy_weight<T: Scalar>(n: &Matrix<T>, w: &IncreasingFiltration<T>) -> bool {
    if w.ambient_dim() != n.rows() || !w.lowers_by(n, 2) {
        return false;
    }
    let (lo, hi) = w.window();
    let top = lo.abs().max(hi.abs());
    for l in 0..=top {
        let (up, down) = (w.gr_dim(l), w.gr_dim(-l));
        if up != down {
            return false;
        }
        if up == 0 {
            continue;
        }
        let gu = w.graded_piece(l, None).expect("piece");
        let gd = w.graded_piece(-l, None).expect("piece");
        let nl = n.pow(l as usize);
        let cols: Vec<Vec<T>> = gu.representatives().iter().map(|r| gd.project(&nl.apply(r))).collect();
        if Matrix::from_columns(down, &cols).rank() != down {
            return false;
        }
    }
    true
}

/// `W(N)`, centered at 0, verified.
pub fn monodromy_weight<T: Scalar>(n: &Matrix<T>) -> Result<IncreasingFiltration<T>> {
    if !n.is_square() {
        return Err(dim_err("N must be square"));
    }
    if !n.is_nilpotent() {
        return Err(MhxError::NotNilpotent);
    }
    let w = weight_filtration_raw(n);
    if !is_monodromy_weight(n, &w) {
        return Err(MhxError::Internal("constructed W(N) fails its defining properties".into()));
    }
    Ok(w)
}

/// Conditions (i) and (ii) for a candidate relative weight filtration `m`.
pub fn verify_rel<T: Scalar>(n: &Matrix<T>, w: &IncreasingFiltration<T>, m: &IncreasingFiltration<T>) -> bool {
    let d = n.rows();
    if w.ambient_dim() != d || m.ambient_dim() != d || !n.is_nilpotent() || !w.is_preserved_by(n) {
        return false;
    }
    if !m.lowers_by(n, 2) {
        return false;
    }
    for k in w.jumps() {
        let gp = w.graded_piece(k, None).expect("piece");
        let induced = gp.induced_increasing(m, w.get(k));
        let nk = gp.induced_operator(n);
        if induced != weight_filtration_raw(&nk).shift(-k) {
            return false;
        }
    }
    true
}

/// Filtration of a subspace `top` of `T^n`, clamped to 0 below and `top` above.
struct Partial<T> {
    steps: BTreeMap<i64, Subspace<T>>,
    top: Subspace<T>,
}

impl<T: Scalar> Partial<T> {
    fn get(&self, i: i64) -> Subspace<T> {
        let (lo, hi) = self.window();
        if i < lo {
            Subspace::zero(self.top.ambient_dim())
        } else if i > hi {
            self.top.clone()
        } else {
            self.steps[&i].clone()
        }
    }

    fn window(&self) -> (i64, i64) {
        (*self.steps.keys().next().unwrap(), *self.steps.keys().next_back().unwrap())
    }
}

/// `W(N, W)` by induction over the jumps of `W`; nonexistence comes with the
/// first lifting condition that cannot be met.
pub fn relative_weight<T: Scalar>(n: &Matrix<T>, w: &IncreasingFiltration<T>) -> Result<RelWeightResult<T>> {
    let d = n.rows();
    if !n.is_square() || w.ambient_dim() != d {
        return Err(dim_err("N and W live in different spaces"));
    }
    if !n.is_nilpotent() {
        return Err(MhxError::NotNilpotent);
    }
    if !w.is_preserved_by(n) {
        return Err(MhxError::Precondition("N does not preserve W".into()));
    }
    let jumps = w.jumps();
    let Some(&k0) = jumps.first() else {
        return Ok(RelWeightResult { exists: true, filtration: Some(w.clone()), failure_witness: None });
    };

    // lowest piece: W(N|W_k0) centered at k0
    let base = w.get(k0);
    let bcols = base.basis().to_vec();
    let restricted = Matrix::from_columns(
        base.dim(),
        &bcols.iter().map(|b| base.coordinates(&n.apply(b)).expect("N preserves W")).collect::<Vec<_>>(),
    );
    let wb = weight_filtration_raw(&restricted);
    let (lo, hi) = wb.window();
    let mut part = Partial {
        steps: (lo..=hi)
            .map(|i| {
                let vs = wb.get(i).basis().iter().map(|c| combine(&bcols, c, d)).collect();
                (i + k0, Subspace::span_of(d, vs))
            })
            .collect(),
        top: base.clone(),
    };

    for &b in &jumps[1..] {
        let prev = w.get(b - 1).clone();
        let gp = w.graded_piece(b, None)?;
        let nb = gp.induced_operator(n);
        let mut new_vectors: Vec<(i64, Vec<T>)> = Vec::new();
        for (u, len) in jordan_strings(&nb)? {
            let j = len as i64 - 1;
            let u0 = gp.section(&u);
            let nj1 = n.pow(len);
            let target = part.get(b - j - 2);
            let mut cols: Vec<Vec<T>> = prev.basis().iter().map(|p| nj1.apply(p)).collect();
            let np = cols.len();
            cols.extend(target.basis().iter().cloned());
            let a = Matrix::from_columns(d, &cols);
            let rhs: Vec<T> = nj1.apply(&u0).into_iter().map(|x| -x).collect();
            let sol = if cols.is_empty() {
                if rhs.iter().all(|x| x.is_negligible(1.0)) { Some(Vec::new()) } else { None }
            } else {
                a.solve(&rhs)
            };
            let Some(x) = sol else {
                return Ok(RelWeightResult {
                    exists: false,
                    filtration: None,
                    failure_witness: Some(format!(
                        "Gr_{b}: a generator of weight {} (string length {len}) has N^{len}-image outside M_{} + N^{len} W_{}",
                        b + j,
                        b - j - 2,
                        b - 1
                    )),
                });
            };
            let mut lifted = u0;
            for (c, p) in x[..np].iter().zip(prev.basis()) {
                for (t, s) in lifted.iter_mut().zip(p) {
                    t.add_mul_assign(c, s);
                }
            }
            let mut v = lifted;
            for a in 0..len as i64 {
                let next = n.apply(&v);
                new_vectors.push((b + j - 2 * a, v));
                v = next;
            }
        }
        let (plo, phi) = part.window();
        let lo = new_vectors.iter().map(|(k, _)| *k).min().unwrap_or(plo).min(plo);
        let hi = new_vectors.iter().map(|(k, _)| *k).max().unwrap_or(phi).max(phi);
        let steps = (lo..=hi)
            .map(|i| {
                let extra: Vec<Vec<T>> = new_vectors.iter().filter(|(k, _)| *k <= i).map(|(_, v)| v.clone()).collect();
                (i, part.get(i).sum(&Subspace::span_of(d, extra)))
            })
            .collect();
        part = Partial { steps, top: w.get(b).clone() };
    }

    let (lo, hi) = part.window();
    let m = IncreasingFiltration::from_steps(d, lo, (lo..=hi + 1).map(|i| part.get(i)).collect());
    if !verify_rel(n, w, &m) {
        return Err(MhxError::Internal("constructed relative weight filtration fails verification".into()));
    }
    Ok(RelWeightResult { exists: true, filtration: Some(m), failure_witness: None })
}

fn combine<T: Scalar>(basis: &[Vec<T>], c: &[T], d: usize) -> Vec<T> {
    let mut v = vec![T::zero(); d];
    for (x, b) in c.iter().zip(basis) {
        for (a, y) in v.iter_mut().zip(b) {
            a.add_mul_assign(x, y);
        }
    }
    v
}
