//! Mixed Hodge structures: Deligne bigrading, `Y_(F,W)`, splitness and the
//! induced bigrading of `gl(V)`.

use std::collections::{BTreeMap, HashMap};

use crate::error::{dim_err, MhxError, Result};
use crate::filtered::{DecreasingFiltration, Grading, IncreasingFiltration};
use crate::linalg::{Frame, Matrix, Subspace};
use crate::scalar::Scalar;

/// Summands of `gl(V)` by type `(r, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Part {
    /// `r >= 0, s < 0`
    EtaPlus,
    /// `(0,0)`; for arbitrary `α` this also absorbs the remaining `r, s >= 0`
    EtaZero,
    /// `r < 0, s >= 0`
    EtaMinus,
    /// `r < 0, s < 0`
    Lambda,
}

impl Part {
    pub const ALL: [Part; 4] = [Part::EtaPlus, Part::EtaZero, Part::EtaMinus, Part::Lambda];

    pub fn of_type(r: i64, s: i64) -> Part {
        match (r < 0, s < 0) {
            (false, true) => Part::EtaPlus,
            (false, false) => Part::EtaZero,
            (true, false) => Part::EtaMinus,
            (true, true) => Part::Lambda,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MixedHodgeStructure<T> {
    f: DecreasingFiltration<T>,
    w: IncreasingFiltration<T>,
    bigrading: BTreeMap<(i64, i64), Subspace<T>>,
    y: Grading<T>,
    frame: Frame<T, (i64, i64)>,
}

impl<T: Scalar> PartialEq for MixedHodgeStructure<T> {
    fn eq(&self, o: &Self) -> bool {
        self.f == o.f && self.w == o.w && self.bigrading == o.bigrading
    }
}

fn not_mhs(msg: impl Into<String>) -> MhxError {
    MhxError::NotMixedHodge(msg.into())
}

/// The bigrading of `(F, W)` by the closed formula, verified against its
/// characterization before it is returned.
pub fn deligne_bigrading<T: Scalar>(f: &DecreasingFiltration<T>, w: &IncreasingFiltration<T>) -> Result<MixedHodgeStructure<T>> {
    let n = f.ambient_dim();
    if w.ambient_dim() != n {
        return Err(dim_err("F and W live in different spaces"));
    }
    let (pmin, pmax) = f.window();
    let (kmin, kmax) = w.window();
    let fbar: HashMap<i64, Subspace<T>> = (pmin - 1..=pmax + 1).map(|p| (p, f.get(p).conj())).collect();
    let conj_f = |p: i64| -> &Subspace<T> {
        let p = p.clamp(pmin - 1, pmax + 1);
        &fbar[&p]
    };
    let mut cache: HashMap<(i64, i64), Subspace<T>> = HashMap::new();
    let mut bigrading = BTreeMap::new();
    for p in pmin..=pmax {
        for q in pmin..=pmax {
            let k = p + q;
            if k < kmin || k > kmax {
                continue;
            }
            let a = f.get(p).intersect(w.get(k));
            if a.is_zero() {
                continue;
            }
            let mut b = conj_f(q).intersect(w.get(k));
            let mut j = 1;
            while k - j - 1 >= kmin {
                let key = (q - j, k - j - 1);
                let part = cache
                    .entry(key)
                    .or_insert_with(|| conj_f(q - j).intersect(w.get(k - j - 1)))
                    .clone();
                b = b.sum(&part);
                j += 1;
            }
            let ipq = a.intersect(&b);
            if !ipq.is_zero() {
                bigrading.insert((p, q), ipq);
            }
        }
    }
    MixedHodgeStructure::from_bigrading(f.clone(), w.clone(), bigrading)
}

impl<T: Scalar> MixedHodgeStructure<T> {
    /// Check the defining properties of the bigrading of `(F, W)`.
    fn from_bigrading(
        f: DecreasingFiltration<T>,
        w: IncreasingFiltration<T>,
        bigrading: BTreeMap<(i64, i64), Subspace<T>>,
    ) -> Result<Self> {
        let n = f.ambient_dim();
        let total: usize = bigrading.values().map(|s| s.dim()).sum();
        if total != n {
            return Err(not_mhs(format!("bigrading has total dimension {total}, expected {n}")));
        }
        let frame = Frame::from_parts(n, bigrading.iter().map(|(k, s)| (*k, s.clone())))
            .map_err(|_| not_mhs("the I^{p,q} are not independent"))?;
        let (pmin, pmax) = f.window();
        for p in pmin..=pmax + 1 {
            if frame.span_where(|&(a, _)| a >= p) != *f.get(p) {
                return Err(not_mhs(format!("F^{p} is not the sum of I^(a,b) with a >= {p}")));
            }
        }
        let (kmin, kmax) = w.window();
        for k in kmin - 1..=kmax {
            if frame.span_where(|&(a, b)| a + b <= k) != *w.get(k) {
                return Err(not_mhs(format!("W_{k} is not the sum of I^(a,b) with a+b <= {k}")));
            }
        }
        for (&(p, q), ipq) in &bigrading {
            let lower = frame.span_where(|&(r, s)| r < q && s < p);
            let qp = bigrading.get(&(q, p)).cloned().unwrap_or_else(|| Subspace::zero(n));
            if ipq.conj().sum(&lower) != qp.sum(&lower) {
                return Err(not_mhs(format!("conj I^({p},{q}) is not congruent to I^({q},{p})")));
            }
        }
        let y = Grading::from_frame(Frame::from_vectors(
            n,
            frame.basis().columns(),
            frame.labels().iter().map(|(a, b)| a + b).collect(),
        )?);
        Ok(MixedHodgeStructure { f, w, bigrading, y, frame })
    }

    pub fn f(&self) -> &DecreasingFiltration<T> {
        &self.f
    }

    pub fn w(&self) -> &IncreasingFiltration<T> {
        &self.w
    }

    pub fn ambient_dim(&self) -> usize {
        self.f.ambient_dim()
    }

    pub fn bigrading(&self) -> &BTreeMap<(i64, i64), Subspace<T>> {
        &self.bigrading
    }

    pub fn component(&self, p: i64, q: i64) -> Subspace<T> {
        self.bigrading.get(&(p, q)).cloned().unwrap_or_else(|| Subspace::zero(self.ambient_dim()))
    }

    /// `Y_(F,W)`: acts by `p + q` on `I^{p,q}`.
    pub fn y(&self) -> &Grading<T> {
        &self.y
    }

    pub fn frame(&self) -> &Frame<T, (i64, i64)> {
        &self.frame
    }

    /// `h^{p,q} = dim I^{p,q}`
    pub fn hodge_numbers(&self) -> BTreeMap<(i64, i64), usize> {
        self.bigrading.iter().map(|(k, s)| (*k, s.dim())).collect()
    }

    /// `conj I^{p,q} = I^{q,p}` for all `(p, q)`.
    pub fn is_split_real(&self) -> bool {
        self.bigrading.iter().all(|(&(p, q), s)| s.conj() == self.component(q, p))
    }

    pub fn gl_bigrading(&self) -> GlBigrading<T> {
        GlBigrading { frame: self.frame.clone() }
    }

    /// `α(I^{p,q}) ⊆ I^{p+r,q+s}` for all `(p, q)`.
    pub fn morphism_type(&self, alpha: &Matrix<T>, r: i64, s: i64) -> bool {
        self.frame.blocks_satisfy(alpha, |&(p1, q1), &(p0, q0)| p1 - p0 == r && q1 - q0 == s)
    }

    /// Component of `α` of type `(r, s)`.
    pub fn type_component(&self, alpha: &Matrix<T>, r: i64, s: i64) -> Matrix<T> {
        self.frame.filter_blocks(alpha, |&(p1, q1), &(p0, q0)| p1 - p0 == r && q1 - q0 == s)
    }

    pub fn project(&self, alpha: &Matrix<T>, part: Part) -> Matrix<T> {
        self.frame.filter_blocks(alpha, |&(p1, q1), &(p0, q0)| Part::of_type(p1 - p0, q1 - q0) == part)
    }

    /// The same bigrading pushed forward by an invertible `g`.
    pub fn transport(&self, g: &Matrix<T>) -> Result<Self> {
        let bigrading = self.bigrading.iter().map(|(k, s)| (*k, s.image(g))).collect();
        Self::from_bigrading(self.f.image(g), self.w.image(g), bigrading)
    }

    /// MHS structure on `V` from an explicit bigrading (verified).
    pub fn from_parts(n: usize, bigrading: BTreeMap<(i64, i64), Subspace<T>>) -> Result<Self> {
        let (f, w) = filtrations_of_bigrading(n, &bigrading)?;
        Self::from_bigrading(f, w, bigrading)
    }
}

/// `F^p = ⊕_{a>=p} I^{a,b}`, `W_k = ⊕_{a+b<=k} I^{a,b}`.
pub fn filtrations_of_bigrading<T: Scalar>(
    n: usize,
    bigrading: &BTreeMap<(i64, i64), Subspace<T>>,
) -> Result<(DecreasingFiltration<T>, IncreasingFiltration<T>)> {
    let frame = Frame::from_parts(n, bigrading.iter().map(|(k, s)| (*k, s.clone())))?;
    if bigrading.is_empty() {
        return Ok((DecreasingFiltration::trivial(n, 0), IncreasingFiltration::trivial(n, 0)));
    }
    let pmin = bigrading.keys().map(|k| k.0).min().unwrap();
    let pmax = bigrading.keys().map(|k| k.0).max().unwrap();
    let kmin = bigrading.keys().map(|k| k.0 + k.1).min().unwrap();
    let kmax = bigrading.keys().map(|k| k.0 + k.1).max().unwrap();
    let fs = (pmin..=pmax).map(|p| frame.span_where(|&(a, _)| a >= p)).collect();
    let ws = (kmin..=kmax).map(|k| frame.span_where(|&(a, b)| a + b <= k)).collect();
    Ok((DecreasingFiltration::from_steps(n, pmin, fs), IncreasingFiltration::from_steps(n, kmin, ws)))
}

/// Decomposition of `gl(V)` induced by a bigrading.
#[derive(Clone, Debug)]
pub struct GlBigrading<T> {
    frame: Frame<T, (i64, i64)>,
}

impl<T: Scalar> GlBigrading<T> {
    /// Types `(r, s)` present in `gl(V)`, with dimensions.
    pub fn component_dims(&self) -> BTreeMap<(i64, i64), usize> {
        let mut out = BTreeMap::new();
        for a in self.frame.labels() {
            for b in self.frame.labels() {
                *out.entry((a.0 - b.0, a.1 - b.1)).or_insert(0) += 1;
            }
        }
        out
    }

    /// Basis of `gl(V)^{r,s}` (elementary blocks in the adapted frame).
    pub fn component_basis(&self, r: i64, s: i64) -> Vec<Matrix<T>> {
        let labels = self.frame.labels();
        let n = labels.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if labels[i].0 - labels[j].0 == r && labels[i].1 - labels[j].1 == s {
                    out.push(self.frame.from_frame(&crate::linalg::unit(n, i, j)));
                }
            }
        }
        out
    }

    pub fn decompose(&self, alpha: &Matrix<T>) -> BTreeMap<(i64, i64), Matrix<T>> {
        self.frame.components(alpha, |a, b| (a.0 - b.0, a.1 - b.1))
    }

    pub fn project(&self, alpha: &Matrix<T>, part: Part) -> Matrix<T> {
        self.frame.filter_blocks(alpha, |a, b| Part::of_type(a.0 - b.0, a.1 - b.1) == part)
    }

    /// Parts in which `alpha` has a nonzero projection.
    pub fn support(&self, alpha: &Matrix<T>) -> Vec<Part> {
        Part::ALL.into_iter().filter(|p| !self.project(alpha, *p).is_zero()).collect()
    }
}
