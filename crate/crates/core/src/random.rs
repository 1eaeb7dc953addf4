//! Seeded random mixed Hodge structures and Lie algebra elements.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::filtered::Grading;
use crate::hodge::{deligne_bigrading, MixedHodgeStructure};
use crate::linalg::{unit_vector, Matrix, Subspace};
use crate::orbit::generate::scrambler;
use crate::scalar::{gi, GaussRat};

type M = Matrix<GaussRat>;

#[derive(Debug, Clone)]
pub struct RandomMhs {
    /// Split structure the sample was moved from.
    pub split: MixedHodgeStructure<GaussRat>,
    /// `λ ∈ Λ^{-1,-1}` of `split`; the sample is `e^λ` applied to `split`.
    pub lambda: M,
    /// Recomputed from the filtrations of the moved structure.
    pub mhs: MixedHodgeStructure<GaussRat>,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gaussian integer with both parts in `-r..=r`.
pub fn small_gauss(rng: &mut ChaCha8Rng, r: i64) -> GaussRat {
    gi(rng.gen_range(-r..=r), rng.gen_range(-r..=r))
}

/// Symmetric Hodge numbers spread over one to three weights in `-2..=4`.
pub fn random_hodge_numbers(rng: &mut ChaCha8Rng, max_dim: usize) -> BTreeMap<(i64, i64), usize> {
    let mut weights: Vec<i64> = (-2..=4).collect();
    weights.shuffle(rng);
    weights.truncate(rng.gen_range(1..=3));
    let mut out = BTreeMap::new();
    let mut dim = 0;
    for k in weights {
        for _ in 0..rng.gen_range(1..=2) {
            let p = k.div_euclid(2) + rng.gen_range(0..=2);
            let q = k - p;
            let cost = if p == q { 1 } else { 2 };
            if dim + cost > max_dim {
                continue;
            }
            dim += cost;
            *out.entry((p, q)).or_insert(0) += 1;
            if p != q {
                *out.entry((q, p)).or_insert(0) += 1;
            }
        }
    }
    if out.is_empty() {
        out.insert((0, 0), 1);
    }
    out
}

/// Split structure with the given symmetric Hodge numbers, moved by a random
/// real change of basis.
pub fn split_mhs(rng: &mut ChaCha8Rng, h: &BTreeMap<(i64, i64), usize>) -> Result<MixedHodgeStructure<GaussRat>> {
    let n: usize = h.values().sum();
    let mut parts: BTreeMap<(i64, i64), Vec<Vec<GaussRat>>> = BTreeMap::new();
    let mut next = 0;
    for (&(p, q), &c) in h {
        if p > q {
            continue;
        }
        for _ in 0..c {
            if p == q {
                parts.entry((p, q)).or_default().push(unit_vector(n, next));
                next += 1;
            } else {
                let mut v = unit_vector::<GaussRat>(n, next);
                let mut w = unit_vector::<GaussRat>(n, next);
                v[next + 1] = gi(0, 1);
                w[next + 1] = gi(0, -1);
                parts.entry((p, q)).or_default().push(v);
                parts.entry((q, p)).or_default().push(w);
                next += 2;
            }
        }
    }
    let g = scrambler(rng, n);
    let bigrading = parts.into_iter().map(|(k, vs)| (k, Subspace::span_of(n, vs).image(&g))).collect();
    MixedHodgeStructure::from_parts(n, bigrading)
}

/// Random combination of `gl(V)^{r,s}` over the types accepted by `keep`.
pub fn random_element(rng: &mut ChaCha8Rng, mhs: &MixedHodgeStructure<GaussRat>, keep: impl Fn(i64, i64) -> bool) -> M {
    let n = mhs.ambient_dim();
    let gl = mhs.gl_bigrading();
    let mut out = M::zeros(n, n);
    for &(r, s) in gl.component_dims().keys() {
        if !keep(r, s) {
            continue;
        }
        for b in gl.component_basis(r, s) {
            out = &out + &b.scale(&small_gauss(rng, 2));
        }
    }
    out
}

/// Random element of `Lie₋₁ = {α : α W_k ⊆ W_{k-1}}`.
pub fn random_lie_minus(rng: &mut ChaCha8Rng, mhs: &MixedHodgeStructure<GaussRat>) -> M {
    random_element(rng, mhs, |r, s| r + s <= -1)
}

/// Random element of `Λ^{-1,-1}`.
pub fn random_lambda(rng: &mut ChaCha8Rng, mhs: &MixedHodgeStructure<GaussRat>) -> M {
    random_element(rng, mhs, |r, s| r < 0 && s < 0)
}

/// A generic, usually non-split, structure of dimension at most `max_dim`.
pub fn random_mhs(seed: u64, max_dim: usize) -> Result<RandomMhs> {
    let mut rng = rng(seed);
    let h = random_hodge_numbers(&mut rng, max_dim);
    let split = split_mhs(&mut rng, &h)?;
    let lambda = random_lambda(&mut rng, &split);
    let moved = split.transport(&lambda.exp_nilpotent()?)?;
    let mhs = deligne_bigrading(moved.f(), moved.w())?;
    Ok(RandomMhs { split, lambda, mhs })
}

/// Random real semisimple operator with integer spectrum in `-3..=3`.
pub fn random_grading(rng: &mut ChaCha8Rng, n: usize) -> Grading<GaussRat> {
    let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
    Grading::diagonal(&weights).conjugate_by(&scrambler(rng, n))
}


/// Random real invertible matrix with rational entries.
pub fn random_real_invertible(rng: &mut ChaCha8Rng, n: usize) -> M {
    scrambler(rng, n)
}

/// Random real nilpotent matrix: Jordan blocks of random sizes, conjugated.
pub fn random_nilpotent(rng: &mut ChaCha8Rng, n: usize) -> M {
    let mut out = M::zeros(n, n);
    let mut i = 0;
    while i < n {
        let len = rng.gen_range(1..=n - i);
        for j in i + 1..i + len {
            out.set(j - 1, j, gi(1, 0));
        }
        i += len;
    }
    let g = scrambler(rng, n);
    let ginv = g.inverse().expect("unimodular");
    out.conjugated_by(&g, &ginv)
}
