//! Nilpotent orbits and unipotent period-map models: orbit checks,
//! admissibility and splitness verdicts, the structure of `N` under `Y∞`,
//! generators and limit-grading traces.

pub(crate) mod generate;
mod trace;

pub use generate::{generate_split_orbit, generate_unipotent_model, GeneratedOrbit, IrrepSpec, OrbitSpec};
pub use trace::{grading_trace, Trace, TraceMode, TraceSample, TraceVerdict};

use std::collections::BTreeMap;

use crate::deligne::{triple_data, w_by_sub_mhs};
use crate::error::{dim_err, MhxError, Result};
use crate::filtered::{DecreasingFiltration, Grading, IncreasingFiltration};
use crate::hodge::deligne_bigrading;
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::sl2::assemble_rho;
use crate::weightfilt::{monodromy_weight, relative_weight};

#[derive(Debug, Clone)]
pub struct NilpotentOrbit<T> {
    pub n: Matrix<T>,
    pub f: DecreasingFiltration<T>,
    pub w: IncreasingFiltration<T>,
}

/// `F(z) = e^{zN} e^{Γ(s)} F∞` with `Γ(s) = Σ_j Γ_j s^j`.
#[derive(Debug, Clone)]
pub struct PeriodMapModel<T> {
    pub orbit: NilpotentOrbit<T>,
    pub gamma: BTreeMap<usize, Matrix<T>>,
}

impl<T: Scalar> PartialEq for NilpotentOrbit<T> {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n && self.f == o.f && self.w == o.w
    }
}

impl<T: Scalar> PartialEq for PeriodMapModel<T> {
    fn eq(&self, o: &Self) -> bool {
        self.orbit == o.orbit && self.gamma == o.gamma
    }
}

impl<T: Scalar> NilpotentOrbit<T> {
    pub fn new(n: Matrix<T>, f: DecreasingFiltration<T>, w: IncreasingFiltration<T>) -> Result<Self> {
        let d = n.rows();
        if !n.is_square() || f.ambient_dim() != d || w.ambient_dim() != d {
            return Err(dim_err("N, F and W live in different spaces"));
        }
        Ok(NilpotentOrbit { n, f, w })
    }

    pub fn dim(&self) -> usize {
        self.n.rows()
    }

    /// `N F^p ⊆ F^{p-1}`
    pub fn is_horizontal(&self) -> bool {
        self.f.shifts_by(&self.n, -1)
    }

    /// `e^{iyN}` and `e^{-iyN}`
    pub fn shift_pair(&self, y: &T) -> Result<(Matrix<T>, Matrix<T>)> {
        let iy = y.mul_ref(&T::i());
        Ok((self.n.scale(&iy).exp_nilpotent()?, self.n.scale(&(-iy)).exp_nilpotent()?))
    }

    /// `e^{-iyN} Y_(e^{iyN}F, W) e^{iyN}`, or `None` when `(e^{iyN}F, W)` is not a MHS.
    pub fn pulled_back_grading(&self, y: &T) -> Result<Option<Grading<T>>> {
        let (g, ginv) = self.shift_pair(y)?;
        match deligne_bigrading(&self.f.image(&g), &self.w) {
            Ok(mhs) => Ok(Some(mhs.y().conjugate_by(&ginv))),
            Err(MhxError::NotMixedHodge(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }

    pub fn map_scalars<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> NilpotentOrbit<U> {
        NilpotentOrbit { n: self.n.map(f), f: self.f.map_scalars(f), w: self.w.map_scalars(f) }
    }

    /// Same orbit in the basis given by the columns of `g`.
    pub fn transport(&self, g: &Matrix<T>) -> Result<Self> {
        let gi = g.inverse().ok_or_else(|| dim_err("singular change of basis"))?;
        Ok(NilpotentOrbit { n: self.n.conjugated_by(g, &gi), f: self.f.image(g), w: self.w.image(g) })
    }
}

impl<T: Scalar> PeriodMapModel<T> {
    /// `Γ(s)`
    pub fn gamma_at(&self, s: &T) -> Matrix<T> {
        let d = self.orbit.dim();
        let mut out = Matrix::zeros(d, d);
        for (&j, g) in &self.gamma {
            let mut c = T::one();
            for _ in 0..j {
                c = c.mul_ref(s);
            }
            out = &out + &g.scale(&c);
        }
        out
    }

    /// `N` and every `Γ_j` induce zero on `Gr^W`.
    pub fn is_unipotent(&self) -> bool {
        let w = &self.orbit.w;
        w.lowers_by(&self.orbit.n, 1) && self.gamma.values().all(|g| w.lowers_by(g, 1))
    }

    pub fn transport(&self, g: &Matrix<T>) -> Result<Self> {
        let gi = g.inverse().ok_or_else(|| dim_err("singular change of basis"))?;
        Ok(PeriodMapModel {
            orbit: self.orbit.transport(g)?,
            gamma: self.gamma.iter().map(|(j, m)| (*j, m.conjugated_by(g, &gi))).collect(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct OrbitCheck {
    pub horizontal: bool,
    /// `N` real, nilpotent and preserving `W`
    pub monodromy_ok: bool,
    /// `(y, (e^{iyN}F, W) is a MHS with the graded dimensions of F)`
    pub samples: Vec<(String, bool)>,
}

impl OrbitCheck {
    pub fn passed(&self) -> bool {
        self.horizontal && self.monodromy_ok && self.samples.iter().all(|s| s.1)
    }
}

/// `dim F^p Gr_k` for all `p, k` in range.
fn graded_hodge_dims<T: Scalar>(f: &DecreasingFiltration<T>, w: &IncreasingFiltration<T>) -> BTreeMap<(i64, i64), usize> {
    let (plo, phi) = f.window();
    let (klo, khi) = w.window();
    let mut out = BTreeMap::new();
    for k in klo..=khi {
        for p in plo..=phi + 1 {
            let a = f.get(p).intersect(w.get(k)).dim();
            let b = f.get(p).intersect(w.get(k - 1)).dim();
            out.insert((p, k), a - b);
        }
    }
    out
}

pub fn check_orbit<T: Scalar>(orbit: &NilpotentOrbit<T>, ys: &[T]) -> OrbitCheck {
    let n = &orbit.n;
    let horizontal = orbit.is_horizontal();
    let monodromy_ok = n.is_real() && n.is_nilpotent() && orbit.w.is_preserved_by(n);
    let expected = graded_hodge_dims(&orbit.f, &orbit.w);
    let samples = ys
        .iter()
        .map(|y| {
            let ok = monodromy_ok
                && orbit
                    .shift_pair(y)
                    .ok()
                    .and_then(|(g, _)| deligne_bigrading(&orbit.f.image(&g), &orbit.w).ok())
                    .map_or(false, |mhs| {
                        let (plo, phi) = orbit.f.window();
                        let (klo, khi) = orbit.w.window();
                        let h = mhs.hodge_numbers();
                        (klo..=khi).all(|k| {
                            (plo..=phi + 1).all(|p| {
                                let from_h: usize =
                                    h.iter().filter(|(&(a, b), _)| a + b == k && a >= p).map(|(_, c)| *c).sum();
                                expected.get(&(p, k)) == Some(&from_h)
                            })
                        })
                    });
            (y.to_string(), ok)
        })
        .collect();
    OrbitCheck { horizontal, monodromy_ok, samples }
}

/// Structure of `N` under `ad Y∞` together with the assembled representation.
#[derive(Debug, Clone)]
pub struct Theorem4Report<T> {
    /// `k -> N_{-k}`
    pub components: BTreeMap<i64, Matrix<T>>,
    pub n0_equals_rho_nminus: bool,
    pub nminus1_zero: bool,
    pub no_positive_components: bool,
    /// `k -> (ρ(h) N_{-k} = (k-2) N_{-k}, ρ(n₊) N_{-k} = 0)`
    pub highest_weight: BTreeMap<i64, (bool, bool)>,
}

impl<T: Scalar> Theorem4Report<T> {
    pub fn all_pass(&self) -> bool {
        self.n0_equals_rho_nminus
            && self.nminus1_zero
            && self.no_positive_components
            && self.highest_weight.values().all(|&(a, b)| a && b)
    }
}

pub fn theorem4_report<T: Scalar>(orbit: &NilpotentOrbit<T>, yinf: &Grading<T>) -> Result<Theorem4Report<T>> {
    if !yinf.grades(&orbit.w) {
        return Err(MhxError::NotGrading("Y∞ does not grade W".into()));
    }
    if !yinf.is_real() {
        return Err(MhxError::Precondition("Y∞ is not real".into()));
    }
    let rho = assemble_rho(&orbit.n, &orbit.w, &orbit.f, yinf)?;
    let comps = yinf.ad_components(&orbit.n);
    let no_positive_components = comps.keys().all(|&m| m <= 0);
    let components: BTreeMap<i64, Matrix<T>> = comps.into_iter().map(|(m, c)| (-m, c)).collect();
    let d = orbit.dim();
    let n0 = components.get(&0).cloned().unwrap_or_else(|| Matrix::zeros(d, d));
    let highest_weight = components
        .iter()
        .filter(|(&k, _)| k >= 1)
        .map(|(&k, c)| {
            let weight = rho.h.commutator(c) == c.scale(&T::from_i64(k - 2));
            let killed = rho.n_plus.commutator(c).is_zero();
            (k, (weight, killed))
        })
        .collect();
    Ok(Theorem4Report {
        n0_equals_rho_nminus: n0 == rho.n_minus,
        nminus1_zero: !components.contains_key(&1),
        no_positive_components,
        highest_weight,
        components,
    })
}

/// The sampled `e^{-iyN} Y_(e^{iyN}F, W)`.
#[derive(Debug, Clone)]
pub struct LimitRoute<T> {
    pub defined: bool,
    pub constant: bool,
    pub real: bool,
    pub grades_w: bool,
    pub graded_orbits_split: bool,
    pub value: Option<Grading<T>>,
}

impl<T> LimitRoute<T> {
    pub fn verdict(&self) -> bool {
        self.defined && self.constant && self.real && self.grades_w && self.graded_orbits_split
    }
}

#[derive(Debug, Clone)]
pub struct AdmissibilityReport<T> {
    pub orbit: OrbitCheck,
    pub limiting_filtration_exists: bool,
    pub relative_weight_exists: bool,
    pub relative_weight: Option<IncreasingFiltration<T>>,
    pub failure_witness: Option<String>,
    pub is_mhs_pair: bool,
    pub w_by_sub_mhs: bool,
    pub n_is_minus1minus1: bool,
    pub is_split: bool,
    pub limit: LimitRoute<T>,
    pub y_infty: Option<Grading<T>>,
    pub y_infty_real: bool,
    pub theorem4: Option<Theorem4Report<T>>,
}

impl<T: Scalar> AdmissibilityReport<T> {
    /// Limiting filtration and relative weight filtration both exist.
    pub fn admissible(&self) -> bool {
        self.limiting_filtration_exists && self.relative_weight_exists
    }

    /// Direct route: `(F, rel W)` is a split MHS with `N` of type `(-1,-1)`.
    pub fn split_direct(&self) -> bool {
        self.admissible() && self.is_mhs_pair && self.w_by_sub_mhs && self.n_is_minus1minus1 && self.is_split
    }

    pub fn split_limit(&self) -> bool {
        self.limiting_filtration_exists && self.limit.verdict()
    }
}

/// Sample points used by the limit route.
pub const LIMIT_SAMPLES: [i64; 4] = [1, 2, 3, 5];

/// Each `(F Gr_k, W(N_k)[-k])` is a split MHS.
pub fn graded_orbits_split<T: Scalar>(orbit: &NilpotentOrbit<T>) -> bool {
    orbit.w.jumps().into_iter().all(|k| {
        let Ok(gp) = orbit.w.graded_piece(k, None) else { return false };
        let nk = gp.induced_operator(&orbit.n);
        let fk = gp.induced_decreasing(&orbit.f, orbit.w.get(k));
        let Ok(wk) = monodromy_weight(&nk) else { return false };
        deligne_bigrading(&fk, &wk.shift(-k)).map_or(false, |m| m.is_split_real())
    })
}

fn limit_route<T: Scalar>(orbit: &NilpotentOrbit<T>) -> Result<LimitRoute<T>> {
    let mut values = Vec::new();
    for y in LIMIT_SAMPLES {
        match orbit.pulled_back_grading(&T::from_i64(y))? {
            Some(g) => values.push(g),
            None => {
                return Ok(LimitRoute {
                    defined: false,
                    constant: false,
                    real: false,
                    grades_w: false,
                    graded_orbits_split: graded_orbits_split(orbit),
                    value: None,
                })
            }
        }
    }
    let constant = values.windows(2).all(|p| p[0] == p[1]);
    let first = values.swap_remove(0);
    Ok(LimitRoute {
        defined: true,
        constant,
        real: first.is_real(),
        grades_w: first.grades(&orbit.w),
        graded_orbits_split: graded_orbits_split(orbit),
        value: constant.then_some(first),
    })
}

/// Splitness verdict by two routes: directly from `(F, rel W)` and from the
/// sampled pulled-back gradings. The routes must agree.
pub fn split_admissibility<T: Scalar>(orbit: &NilpotentOrbit<T>) -> Result<AdmissibilityReport<T>> {
    let ys: Vec<T> = LIMIT_SAMPLES.iter().map(|&y| T::from_i64(y)).collect();
    let check = check_orbit(orbit, &ys);
    let passed = check.passed();
    let mut report = AdmissibilityReport {
        orbit: check,
        limiting_filtration_exists: passed,
        relative_weight_exists: false,
        relative_weight: None,
        failure_witness: None,
        is_mhs_pair: false,
        w_by_sub_mhs: false,
        n_is_minus1minus1: false,
        is_split: false,
        limit: LimitRoute {
            defined: false,
            constant: false,
            real: false,
            grades_w: false,
            graded_orbits_split: false,
            value: None,
        },
        y_infty: None,
        y_infty_real: false,
        theorem4: None,
    };
    if !passed {
        return Ok(report);
    }

    let rel = relative_weight(&orbit.n, &orbit.w)?;
    report.relative_weight_exists = rel.exists;
    report.failure_witness = rel.failure_witness;
    if let Some(m) = rel.filtration {
        if let Ok(mhs) = deligne_bigrading(&orbit.f, &m) {
            report.is_mhs_pair = true;
            report.w_by_sub_mhs = w_by_sub_mhs(&mhs, &orbit.w);
            report.n_is_minus1minus1 = mhs.morphism_type(&orbit.n, -1, -1);
            report.is_split = mhs.is_split_real();
        }
        report.relative_weight = Some(m);
    }

    report.limit = limit_route(orbit)?;
    let (direct, limit) = (report.split_direct(), report.split_limit());
    if direct != limit {
        return Err(MhxError::Internal(format!(
            "split verdicts disagree: direct route {direct}, limit route {limit}"
        )));
    }
    if direct {
        let y = triple_data(&orbit.f, &orbit.w, &orbit.n)?.grading.y;
        if report.limit.value.as_ref() != Some(&y) {
            return Err(MhxError::Internal("sampled limit grading differs from Y(F, W, N)".into()));
        }
        report.y_infty_real = y.is_real();
        report.theorem4 = Some(theorem4_report(orbit, &y)?);
        report.y_infty = Some(y);
    }
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct UnipotentReport<T> {
    pub horizontal: bool,
    pub admissible: bool,
    pub y_infty: Option<Grading<T>>,
    /// `N^{0,-1}` in the bigrading of `(F∞, W)` when not admissible
    pub obstruction: Option<Matrix<T>>,
}

/// Admissibility of a unipotent model: holds exactly when `N W_k ⊆ W_{k-2}`.
pub fn unipotent_admissibility<T: Scalar>(model: &PeriodMapModel<T>) -> Result<UnipotentReport<T>> {
    let orbit = &model.orbit;
    if !model.is_unipotent() {
        return Err(MhxError::Precondition("N or some Γ_j acts nontrivially on Gr^W".into()));
    }
    let mhs = deligne_bigrading(&orbit.f, &orbit.w)
        .map_err(|e| MhxError::Precondition(format!("(F∞, W) is not a mixed Hodge structure: {e}")))?;
    let admissible = orbit.w.lowers_by(&orbit.n, 2);
    let (y_infty, obstruction) = if admissible {
        (Some(mhs.y().clone()), None)
    } else {
        let ob = mhs.type_component(&orbit.n, 0, -1);
        if ob.is_zero() {
            return Err(MhxError::Internal("N is not in Lie_-2 but N^{0,-1} vanishes".into()));
        }
        (None, Some(ob))
    };
    Ok(UnipotentReport { horizontal: orbit.is_horizontal(), admissible, y_infty, obstruction })
}
