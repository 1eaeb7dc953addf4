use std::collections::BTreeMap;

use num_complex::Complex64;

use super::PeriodMapModel;
use crate::deligne::y_of_triple;
use crate::error::{MhxError, Result};
use crate::filtered::Grading;
use crate::hodge::deligne_bigrading;
use crate::linalg::Matrix;
use crate::scalar::{GaussRat, Scalar};

/// How `s = e^{2πiz}` is coupled to `z = iy`.
#[derive(Debug, Clone, PartialEq)]
pub enum TraceMode {
    /// Exact evaluation with `s` supplied independently of `y`.
    ExactDecoupled { s: GaussRat },
    /// Floating point with `s = e^{-2πy}`.
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceVerdict {
    Converges,
    Diverges,
    Undetermined,
}

#[derive(Debug, Clone)]
pub struct TraceSample {
    pub y: f64,
    /// `e^{-iyN} Y_(F(iy), W) e^{iyN}`
    pub operator: Option<Matrix<Complex64>>,
    pub distance: Option<f64>,
    /// Reason the sample is excluded from the trend.
    pub flagged: Option<String>,
    /// Distances below this are rounding noise.
    pub noise_floor: f64,
}

#[derive(Debug, Clone)]
pub struct Trace {
    pub prediction: Grading<GaussRat>,
    pub samples: Vec<TraceSample>,
    pub verdict: TraceVerdict,
}

/// Final distance below which a trace counts as converged.
pub const CONVERGED: f64 = 1e-6;
/// Distances below `FLOOR` times the condition number of `e^{iyN}` are treated
/// as zero; below `CONVERGED` fluctuations are ignored when checking monotonicity.
pub const FLOOR: f64 = 1e-12;
/// Relative slack on the doubling test; it absorbs the `O(e^{-2πy})` terms.
pub const DOUBLING_SLACK: f64 = 1e-3;

fn max_norm(m: &Matrix<Complex64>) -> f64 {
    m.max_abs()
}

fn prediction(model: &PeriodMapModel<GaussRat>) -> Result<Grading<GaussRat>> {
    let o = &model.orbit;
    if model.is_unipotent() {
        if let Ok(mhs) = deligne_bigrading(&o.f, &o.w) {
            return Ok(mhs.y().clone());
        }
    }
    y_of_triple(&o.f, &o.w, &o.n)
}

fn y_to_f64(y: &GaussRat) -> Result<f64> {
    if !y.is_real() {
        return Err(MhxError::Precondition(format!("sample {y} is not real")));
    }
    Ok(y.to_complex64().re)
}

fn classify(samples: &[TraceSample]) -> TraceVerdict {
    let d: Vec<(f64, f64)> =
        samples.iter().filter(|s| s.flagged.is_none()).filter_map(|s| s.distance.map(|x| (x, s.noise_floor))).collect();
    if d.len() < 2 {
        return TraceVerdict::Undetermined;
    }
    let non_increasing = d.windows(2).all(|p| p[1].0 <= p[0].0 || p[1].0 <= p[1].1.max(CONVERGED));
    if non_increasing && d.last().unwrap().0 < CONVERGED {
        return TraceVerdict::Converges;
    }
    if d.windows(2).all(|p| p[0].0 > p[0].1 && p[1].0 >= 2.0 * (1.0 - DOUBLING_SLACK) * p[0].0) {
        return TraceVerdict::Diverges;
    }
    TraceVerdict::Undetermined
}

/// Samples `Y(iy) = e^{-iyN} Y_(F(iy), W) e^{iyN}` and compares with the
/// predicted limit: `Y_(F∞, W)` for unipotent models, `Y(F∞, W, N)` otherwise.
pub fn grading_trace(model: &PeriodMapModel<GaussRat>, ys: &[GaussRat], mode: &TraceMode) -> Result<Trace> {
    let pred = prediction(model)?;
    let o = &model.orbit;
    let samples = match mode {
        TraceMode::ExactDecoupled { s } => {
            let gamma = model.gamma_at(s).exp_nilpotent()?;
            let start = o.f.image(&gamma);
            let mut out = Vec::new();
            for y in ys {
                let (g, ginv) = o.shift_pair(y)?;
                let yf = y_to_f64(y)?;
                out.push(match deligne_bigrading(&start.image(&g), &o.w) {
                    Ok(mhs) => {
                        let yy = mhs.y().conjugate_by(&ginv).as_operator();
                        let diff = (&yy - &pred.as_operator()).map(|x| x.to_complex64());
                        TraceSample {
                            y: yf,
                            operator: Some(yy.map(|x| x.to_complex64())),
                            distance: Some(max_norm(&diff)),
                            flagged: None,
                            noise_floor: FLOOR,
                        }
                    }
                    Err(e) => TraceSample { y: yf, operator: None, distance: None, flagged: Some(e.to_string()), noise_floor: FLOOR },
                });
            }
            out
        }
        TraceMode::Float => {
            let expected: Option<BTreeMap<(i64, i64), usize>> = o
                .shift_pair(&GaussRat::from_i64(1))
                .ok()
                .and_then(|(g, _)| deligne_bigrading(&o.f.image(&g), &o.w).ok())
                .map(|m| m.hodge_numbers());
            let c = |x: &GaussRat| x.to_complex64();
            let n = o.n.map(c);
            let f = o.f.map_scalars(c);
            let w = o.w.map_scalars(c);
            let gam: BTreeMap<usize, Matrix<Complex64>> = model.gamma.iter().map(|(j, m)| (*j, m.map(c))).collect();
            let pred_f = pred.as_operator().map(c);
            let mut out = Vec::new();
            for y in ys {
                let yf = y_to_f64(y)?;
                let s = (-2.0 * std::f64::consts::PI * yf).exp();
                let mut gs = Matrix::zeros(n.rows(), n.rows());
                for (&j, m) in &gam {
                    gs = &gs + &m.scale(&Complex64::new(s.powi(j as i32), 0.0));
                }
                let iy = Complex64::new(0.0, yf);
                let g = n.scale(&iy).exp_nilpotent()?;
                let ginv = n.scale(&(-iy)).exp_nilpotent()?;
                let noise_floor = FLOOR * (max_norm(&g) * max_norm(&ginv)).max(1.0);
                let fz = f.image(&(&g * &gs.exp_nilpotent()?));
                out.push(match deligne_bigrading(&fz, &w) {
                    Ok(mhs) if expected.as_ref().map_or(true, |h| *h == mhs.hodge_numbers()) => {
                        let yy = mhs.y().as_operator().conjugated_by(&ginv, &g);
                        let dist = max_norm(&(&yy - &pred_f));
                        TraceSample { y: yf, operator: Some(yy), distance: Some(dist), flagged: None, noise_floor }
                    }
                    Ok(_) => TraceSample {
                        y: yf,
                        operator: None,
                        distance: None,
                        flagged: Some("Hodge numbers changed under rounding".into()),
                        noise_floor,
                    },
                    Err(e) => TraceSample { y: yf, operator: None, distance: None, flagged: Some(e.to_string()), noise_floor },
                });
            }
            out
        }
    };
    let verdict = classify(&samples);
    Ok(Trace { prediction: pred, samples, verdict })
}
