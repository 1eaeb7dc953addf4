//! `e^α = e^γ e^λ e^φ` for `α ∈ Lie₋₁`, with `γ` real, `λ ∈ Λ^{-1,-1}` and
//! `φ` preserving `F`, computed stage by stage modulo `Lie₋ᵣ`.

use crate::error::{MhxError, Result};
use crate::hodge::{deligne_bigrading, MixedHodgeStructure, Part};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct FactorizationResult<T> {
    pub gamma: Matrix<T>,
    pub lambda: Matrix<T>,
    pub phi: Matrix<T>,
    pub iterations: usize,
    /// `r` with `β ∈ Lie₋ᵣ` and `β = 0` at termination
    pub residual_degree: i64,
}

/// `α W_k ⊆ W_{k-r}` for all `k`.
pub fn in_lie_minus<T: Scalar>(mhs: &MixedHodgeStructure<T>, alpha: &Matrix<T>, r: i64) -> bool {
    mhs.w().lowers_by(alpha, r)
}

fn stage<T: Scalar>(mhs: &MixedHodgeStructure<T>, a: &Matrix<T>) -> (Matrix<T>, Matrix<T>, Matrix<T>) {
    let minus = mhs.project(a, Part::EtaMinus);
    let bar = minus.conj();
    let gamma = &minus + &bar;
    let lambda = &mhs.project(a, Part::Lambda) - &mhs.project(&bar, Part::Lambda);
    let phi = &mhs.project(a, Part::EtaPlus) - &mhs.project(&bar, Part::EtaPlus);
    (gamma, lambda, phi)
}

fn product<T: Scalar>(g: &Matrix<T>, l: &Matrix<T>, p: &Matrix<T>) -> Result<Matrix<T>> {
    Ok(&(&g.exp_nilpotent()? * &l.exp_nilpotent()?) * &p.exp_nilpotent()?)
}

pub fn glp_factor<T: Scalar>(alpha: &Matrix<T>, mhs: &MixedHodgeStructure<T>) -> Result<FactorizationResult<T>> {
    let n = mhs.ambient_dim();
    if alpha.rows() != n || !alpha.is_square() {
        return Err(crate::error::dim_err("alpha has the wrong size"));
    }
    if !mhs.w().is_real() {
        return Err(MhxError::Precondition("W is not defined over R".into()));
    }
    if !in_lie_minus(mhs, alpha, 1) {
        return Err(MhxError::Precondition("alpha does not lie in Lie_-1".into()));
    }
    let (mut gamma, mut lambda, mut phi) = stage(mhs, alpha);
    let mut k = 1usize;
    loop {
        let beta = &product(&gamma, &lambda, &phi)?.log_unipotent()? - alpha;
        if beta.is_zero() {
            break;
        }
        if !in_lie_minus(mhs, &beta, k as i64 + 1) {
            return Err(MhxError::Internal(format!("stage {k} residual is not in Lie_-{}", k + 1)));
        }
        if k > 2 * n + 1 {
            return Err(MhxError::Internal("factorization did not terminate".into()));
        }
        let (dg, dl, dp) = stage(mhs, &beta);
        gamma = &gamma - &dg;
        lambda = &lambda - &dl;
        phi = &phi - &dp;
        k += 1;
    }
    let res = FactorizationResult { gamma, lambda, phi, iterations: k, residual_degree: k as i64 + 1 };
    check_factorization(alpha, mhs, &res)?;
    Ok(res)
}

fn check_factorization<T: Scalar>(alpha: &Matrix<T>, mhs: &MixedHodgeStructure<T>, res: &FactorizationResult<T>) -> Result<()> {
    let fail = |what: &str| Err(MhxError::Internal(format!("factorization invariant fails: {what}")));
    if product(&res.gamma, &res.lambda, &res.phi)? != alpha.exp_nilpotent()? {
        return fail("product");
    }
    if !res.gamma.is_real() || !in_lie_minus(mhs, &res.gamma, 1) {
        return fail("gamma");
    }
    if mhs.project(&res.lambda, Part::Lambda) != res.lambda {
        return fail("lambda");
    }
    if mhs.project(&res.phi, Part::EtaPlus) != res.phi || !in_lie_minus(mhs, &res.phi, 1) {
        return fail("phi");
    }
    let f = mhs.f();
    let (lo, hi) = f.window();
    if !(lo..=hi).all(|p| f.get(p).maps_into(&res.phi, f.get(p))) {
        return fail("phi does not preserve F");
    }
    Ok(())
}

/// Differences between the result and its first-order approximation; each
/// lies in `Lie₋₂`.
pub fn first_order_defect<T: Scalar>(
    res: &FactorizationResult<T>,
    alpha: &Matrix<T>,
    mhs: &MixedHodgeStructure<T>,
) -> Result<(Matrix<T>, Matrix<T>, Matrix<T>)> {
    let (g, l, p) = stage(mhs, alpha);
    let out = (&res.gamma - &g, &res.lambda - &l, &res.phi - &p);
    for (name, m) in [("gamma", &out.0), ("lambda", &out.1), ("phi", &out.2)] {
        if !in_lie_minus(mhs, m, 2) {
            return Err(MhxError::Internal(format!("{name} defect is not in Lie_-2")));
        }
    }
    Ok(out)
}

/// Bigrading of `(gF, W)` for `g = e^λ`, `λ ∈ Λ^{-1,-1}`, computed from scratch
/// and compared with the `g`-image of the bigrading of `(F, W)`.
pub fn lambda_action<T: Scalar>(g: &Matrix<T>, mhs: &MixedHodgeStructure<T>) -> Result<MixedHodgeStructure<T>> {
    let l = g.log_unipotent()?;
    if mhs.project(&l, Part::Lambda) != l {
        return Err(MhxError::Precondition("log g is not in Λ".into()));
    }
    let direct = deligne_bigrading(&mhs.f().image(g), mhs.w())?;
    let moved = mhs.transport(g)?;
    if direct.bigrading() != moved.bigrading() {
        return Err(MhxError::Internal("bigrading of (gF, W) differs from g I^{p,q}".into()));
    }
    Ok(direct)
}
