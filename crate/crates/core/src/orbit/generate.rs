use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{split_admissibility, NilpotentOrbit, PeriodMapModel};
use crate::error::{MhxError, Result};
use crate::filtered::{DecreasingFiltration, Grading};
use crate::hodge::MixedHodgeStructure;
use crate::linalg::{unit, unit_vector, Matrix, Subspace};
use crate::scalar::{gi, q, GaussRat, Scalar};

type M = Matrix<GaussRat>;

/// One sl2-irreducible string placed in weight `k` of `W`.
///
/// The top vector has Hodge type `(p + offset, p' - offset)` where
/// `p + p' = k + d`, `p >= p'`. Strings with `p != q` come in conjugate pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IrrepSpec {
    pub weight: i64,
    pub d: usize,
    pub offset: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSpec {
    pub irreps: Vec<IrrepSpec>,
    /// Degrees `k >= 2` of the components `N_{-k}`.
    pub extensions: Vec<i64>,
    /// Skip requested extensions that admit no highest-weight vector instead of failing.
    pub optional_extensions: bool,
    pub scramble: bool,
}

impl OrbitSpec {
    /// One trivial string per weight and every extension degree available.
    pub fn from_weights(weights: &[i64]) -> Self {
        let irreps = weights.iter().map(|&weight| IrrepSpec { weight, d: 0, offset: 0 }).collect();
        OrbitSpec { irreps, extensions: extension_degrees(weights), optional_extensions: true, scramble: false }
    }

    /// Random orbit shape of total dimension at most `max_dim`.
    pub fn random(seed: u64, max_dim: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut weights: Vec<i64> = (0..=3).collect();
        weights.shuffle(&mut rng);
        weights.truncate(rng.gen_range(1..=3));
        weights.sort();
        let mut irreps = Vec::new();
        let mut dim = 0;
        for &weight in &weights {
            for _ in 0..rng.gen_range(1..=2) {
                let d = rng.gen_range(0..=2usize);
                let offset = if rng.gen_bool(0.2) { 1 } else { 0 };
                let ir = IrrepSpec { weight, d, offset };
                if dim + ir.dim() <= max_dim {
                    dim += ir.dim();
                    irreps.push(ir);
                }
            }
        }
        if irreps.is_empty() {
            irreps.push(IrrepSpec { weight: weights[0], d: 0, offset: 0 });
        }
        let present: Vec<i64> = irreps.iter().map(|i| i.weight).collect();
        OrbitSpec { irreps, extensions: extension_degrees(&present), optional_extensions: true, scramble: rng.gen_bool(0.5) }
    }
}

fn extension_degrees(weights: &[i64]) -> Vec<i64> {
    let mut ks: Vec<i64> =
        weights.iter().flat_map(|a| weights.iter().map(move |b| a - b)).filter(|&k| k >= 2).collect();
    ks.sort();
    ks.dedup();
    ks
}

impl IrrepSpec {
    fn top_type(&self) -> (i64, i64) {
        let s = self.weight + self.d as i64;
        let p = (s + 1).div_euclid(2);
        (p + self.offset, s - p - self.offset)
    }

    fn paired(&self) -> bool {
        let (p, q) = self.top_type();
        p != q
    }

    pub fn dim(&self) -> usize {
        (self.d + 1) * if self.paired() { 2 } else { 1 }
    }
}

/// Labels of a complex frame vector: `(Y∞ weight, ρ(h) weight, p, q)`.
type Label = (i64, i64, i64, i64);

struct Model {
    dim: usize,
    /// complex frame of bigraded vectors
    frame: Vec<Vec<GaussRat>>,
    labels: Vec<Label>,
    yinf: Vec<i64>,
    n_minus: M,
    n_plus: M,
}

fn build_model(spec: &OrbitSpec) -> Model {
    let dim: usize = spec.irreps.iter().map(|i| i.dim()).sum();
    let mut frame = Vec::new();
    let mut labels = Vec::new();
    let mut yinf = vec![0; dim];
    let mut n_minus = M::zeros(dim, dim);
    let mut n_plus = M::zeros(dim, dim);
    let mut at = 0;
    let real = |i: usize| unit_vector::<GaussRat>(dim, i);
    for ir in &spec.irreps {
        let d = ir.d;
        let (p, qq) = ir.top_type();
        let strings = if ir.paired() { 2 } else { 1 };
        for s in 0..strings {
            let base = at + s * (d + 1);
            for j in 0..=d {
                yinf[base + j] = ir.weight;
                if j < d {
                    n_minus.set(base + j + 1, base + j, q(1, 1));
                }
                if j > 0 {
                    n_plus.set(base + j - 1, base + j, q(j as i64 * (d as i64 - j as i64 + 1), 1));
                }
            }
        }
        for j in 0..=d {
            let h = d as i64 - 2 * j as i64;
            let jj = j as i64;
            if ir.paired() {
                let (e, f) = (real(at + j), real(at + d + 1 + j));
                let plus: Vec<GaussRat> = e.iter().zip(&f).map(|(a, b)| a.add_ref(&b.mul_ref(&GaussRat::i()))).collect();
                let minus: Vec<GaussRat> = plus.iter().map(|x| x.conj()).collect();
                frame.push(plus);
                labels.push((ir.weight, h, p - jj, qq - jj));
                frame.push(minus);
                labels.push((ir.weight, h, qq - jj, p - jj));
            } else {
                frame.push(real(at + j));
                labels.push((ir.weight, h, p - jj, qq - jj));
            }
        }
        at += ir.dim();
    }
    Model { dim, frame, labels, yinf, n_minus, n_plus }
}

/// Real basis of the highest-weight vectors of `ρ`-weight `k - 2`, `Y∞`-degree
/// `-k` and Hodge type `(-1,-1)`.
fn highest_weight_space(m: &Model, k: i64) -> Vec<M> {
    let d = m.dim;
    let b = Matrix::from_columns(d, &m.frame);
    let binv = b.inverse().expect("frame");
    let np_hat = &(&binv * &m.n_plus) * &b;
    let slots: Vec<(usize, usize)> = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .filter(|&(i, j)| {
            let (a, c) = (m.labels[i], m.labels[j]);
            a.0 - c.0 == -k && a.1 - c.1 == k - 2 && a.2 - c.2 == -1 && a.3 - c.3 == -1
        })
        .collect();
    if slots.is_empty() {
        return Vec::new();
    }
    let cols: Vec<Vec<GaussRat>> = slots.iter().map(|&(i, j)| np_hat.commutator(&unit(d, i, j)).entries().to_vec()).collect();
    let kernel = Matrix::from_columns(d * d, &cols).kernel();
    let mut flat = Vec::new();
    for v in kernel {
        let mut xh = M::zeros(d, d);
        for (&(i, j), c) in slots.iter().zip(v) {
            xh.set(i, j, c);
        }
        let x = &(&b * &xh) * &binv;
        let xbar = x.conj();
        flat.push((&x + &xbar).entries().to_vec());
        flat.push((&x - &xbar).scale(&GaussRat::i()).entries().to_vec());
    }
    Subspace::span_of(d * d, flat)
        .basis()
        .iter()
        .map(|v| Matrix::from_fn(d, d, |i, j| v[i * d + j].clone()))
        .collect()
}

fn nonzero_coeffs(rng: &mut ChaCha8Rng, n: usize) -> Vec<i64> {
    loop {
        let c: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        if c.iter().any(|&x| x != 0) {
            return c;
        }
    }
}

/// Random real unimodular integer matrix.
pub(crate) fn scrambler(rng: &mut ChaCha8Rng, d: usize) -> M {
    elementary_product(rng, d, 2 * d, 2)
}

/// Product of `ops` elementary matrices with off-diagonal entries in `-r..=r`.
fn elementary_product(rng: &mut ChaCha8Rng, d: usize, ops: usize, r: i64) -> M {
    let mut g = M::identity(d);
    if d < 2 {
        return g;
    }
    for _ in 0..ops {
        let i = rng.gen_range(0..d);
        let mut j = rng.gen_range(0..d);
        while j == i {
            j = rng.gen_range(0..d);
        }
        let mut e = M::identity(d);
        e.set(i, j, q(rng.gen_range(-r..=r), 1));
        g = &g * &e;
    }
    g
}

/// A split orbit together with the data it was built from.
#[derive(Debug, Clone)]
pub struct GeneratedOrbit {
    pub orbit: NilpotentOrbit<GaussRat>,
    pub yinf: Grading<GaussRat>,
    pub extensions: Vec<i64>,
}

/// Builds `N = ρ(n₋) + Σ N_{-k}` with highest-weight extension data, and `F`
/// from the bigraded frame; the result is verified admissible and split.
pub fn generate_split_orbit(spec: &OrbitSpec, seed: u64) -> Result<GeneratedOrbit> {
    if spec.irreps.is_empty() {
        return Err(MhxError::Precondition("no strings requested".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = build_model(spec);
    let d = m.dim;
    let mut n = m.n_minus.clone();
    let mut used = Vec::new();
    for &k in &spec.extensions {
        if k < 2 {
            return Err(MhxError::Precondition(format!("extension degree {k} must be at least 2")));
        }
        let space = highest_weight_space(&m, k);
        if space.is_empty() {
            if spec.optional_extensions {
                continue;
            }
            return Err(MhxError::Infeasible(format!("no highest-weight vector of weight {} in degree -{k}", k - 2)));
        }
        for (c, x) in nonzero_coeffs(&mut rng, space.len()).into_iter().zip(&space) {
            n = &n + &x.scale(&q(c, 1));
        }
        used.push(k);
    }
    let (pmin, pmax) = m.labels.iter().fold((i64::MAX, i64::MIN), |(a, b), l| (a.min(l.2), b.max(l.2)));
    let fsteps = (pmin..=pmax)
        .map(|p| Subspace::span_of(d, m.frame.iter().zip(&m.labels).filter(|(_, l)| l.2 >= p).map(|(v, _)| v.clone()).collect()))
        .collect();
    let f = DecreasingFiltration::from_steps(d, pmin, fsteps);
    let yinf = Grading::diagonal(&m.yinf);
    let w = yinf.filtration_of();
    let mut orbit = NilpotentOrbit::new(n, f, w)?;
    let mut yinf = yinf;
    if spec.scramble {
        let g = scrambler(&mut rng, d);
        orbit = orbit.transport(&g)?;
        yinf = yinf.conjugate_by(&g);
    }
    let report = split_admissibility(&orbit)?;
    if !report.split_direct() || report.y_infty.as_ref() != Some(&yinf) {
        return Err(MhxError::Internal("generated orbit is not admissible and split".into()));
    }
    Ok(GeneratedOrbit { orbit, yinf, extensions: used })
}

/// Pure split Hodge structures of weights in `0..=3`, at most `max_dim` in total.
fn random_types(rng: &mut ChaCha8Rng, max_dim: usize) -> Vec<(i64, i64)> {
    let mut weights: Vec<i64> = (0..=3).collect();
    weights.shuffle(rng);
    weights.truncate(rng.gen_range(2..=3));
    let mut types = Vec::new();
    for k in weights {
        for _ in 0..rng.gen_range(1..=2) {
            let p = rng.gen_range((k + 1) / 2..=k);
            let q = k - p;
            let size = if p == q { 1 } else { 2 };
            if types.len() + size > max_dim {
                continue;
            }
            types.push((p, q));
            if p != q {
                types.push((q, p));
            }
        }
    }
    types
}

/// Split `(F∞, W)` with `N` real of type `(-1,-1)` plus, for a
/// non-admissible model, a nonzero real part of type `(-1,0) + (0,-1)`.
pub fn generate_unipotent_model(seed: u64, admissible: bool, scramble: bool) -> Result<PeriodMapModel<GaussRat>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..200 {
        let types = random_types(&mut rng, 7);
        let d = types.len();
        // conjugate pairs are adjacent: (p,q) then (q,p)
        let mut frame = Vec::new();
        let mut i = 0;
        while i < d {
            let (p, qq) = types[i];
            if p == qq {
                frame.push(unit_vector::<GaussRat>(d, i));
                i += 1;
            } else {
                let e = unit_vector::<GaussRat>(d, i);
                let f = unit_vector::<GaussRat>(d, i + 1);
                let v: Vec<GaussRat> = e.iter().zip(&f).map(|(a, b)| a.add_ref(&b.mul_ref(&GaussRat::i()))).collect();
                frame.push(v.clone());
                frame.push(v.iter().map(|x| x.conj()).collect());
                i += 2;
            }
        }
        let mut bigrading: BTreeMap<(i64, i64), Vec<Vec<GaussRat>>> = BTreeMap::new();
        for (v, t) in frame.iter().zip(&types) {
            bigrading.entry(*t).or_default().push(v.clone());
        }
        let bigrading = bigrading.into_iter().map(|(t, vs)| (t, Subspace::span_of(d, vs))).collect();
        let mhs = MixedHodgeStructure::from_parts(d, bigrading)?;
        let gl = mhs.gl_bigrading();
        let random_in = |r: i64, s: i64, rng: &mut ChaCha8Rng| -> M {
            let basis = gl.component_basis(r, s);
            let mut x = M::zeros(d, d);
            for b in &basis {
                let c = gi(rng.gen_range(-2..=2), rng.gen_range(-2..=2));
                x = &x + &b.scale(&c);
            }
            x
        };
        let x = random_in(-1, -1, &mut rng);
        let mut n = &x + &x.conj();
        if !admissible {
            let z = random_in(-1, 0, &mut rng);
            if z.is_zero() {
                continue;
            }
            n = &n + &(&z + &z.conj());
        } else if n.is_zero() {
            continue;
        }
        let mut gamma = BTreeMap::new();
        for j in 1..=rng.gen_range(0..=2usize) {
            let mut g = M::zeros(d, d);
            for (&(r, s), _) in gl.component_dims().iter().filter(|(&(r, s), _)| r < 0 && r + s <= -1) {
                if rng.gen_bool(0.5) {
                    g = &g + &random_in(r, s, &mut rng);
                }
            }
            gamma.insert(j, g);
        }
        let orbit = NilpotentOrbit::new(n, mhs.f().clone(), mhs.w().clone())?;
        let mut model = PeriodMapModel { orbit, gamma };
        if scramble {
            // kept well conditioned: the float trace conjugates by e^{iyN}
            let g = elementary_product(&mut rng, d, d, 1);
            model = model.transport(&g)?;
        }
        return Ok(model);
    }
    Err(MhxError::Infeasible("no Hodge types with a (-1,0) component found".into()))
}
