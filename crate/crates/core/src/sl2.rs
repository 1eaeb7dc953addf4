//! sl2-triples, the representation assembled from graded data, the sinc
//! transform and the weight-pair predicate with its polynomial-model oracle.

use num_traits::Zero;

use crate::error::{dim_err, MhxError, Result};
use crate::filtered::{DecreasingFiltration, Grading, IncreasingFiltration};
use crate::hodge::deligne_bigrading;
use crate::linalg::{Matrix, Subspace};
use crate::scalar::{q, GaussRat, Scalar};
use crate::weightfilt::monodromy_weight;

/// Operators `(N₋, H, N₊)` with `[H,N₋] = -2N₋`, `[H,N₊] = 2N₊`, `[N₊,N₋] = H`.
#[derive(Clone, Debug)]
pub struct Sl2Rep<T> {
    pub n_minus: Matrix<T>,
    pub h: Matrix<T>,
    pub n_plus: Matrix<T>,
    pub weights_h: Grading<T>,
    pub weights_z: Grading<T>,
}

impl<T: Scalar> Sl2Rep<T> {
    pub fn new(n_minus: Matrix<T>, h: Matrix<T>, n_plus: Matrix<T>) -> Result<Self> {
        let two = T::from_i64(2);
        if h.commutator(&n_minus) != n_minus.scale(&(-two.clone()))
            || h.commutator(&n_plus) != n_plus.scale(&two)
            || n_plus.commutator(&n_minus) != h
        {
            return Err(MhxError::Precondition("bracket relations fail".into()));
        }
        let weights_h = Grading::from_operator(&h)?;
        let z = (&n_minus - &n_plus).scale(&T::i());
        let weights_z = Grading::from_operator(&z)?;
        for (k, s) in weights_h.eigenspaces() {
            if weights_h.eigenspace(-k).dim() != s.dim() {
                return Err(MhxError::Precondition("H spectrum is not symmetric".into()));
            }
        }
        Ok(Sl2Rep { n_minus, h, n_plus, weights_h, weights_z })
    }

    pub fn zero(n: usize) -> Self {
        Self::new(Matrix::zeros(n, n), Matrix::zeros(n, n), Matrix::zeros(n, n)).expect("zero rep")
    }

    pub fn dim(&self) -> usize {
        self.h.rows()
    }

    /// `Z = i(N₋ - N₊)`
    pub fn z(&self) -> Matrix<T> {
        (&self.n_minus - &self.n_plus).scale(&T::i())
    }

    /// Image of the abstract element `[[a, c], [b, -a]] = a h + b n₋ + c n₊`.
    pub fn image(&self, x: &Matrix<T>) -> Matrix<T> {
        let (a, b, c) = (x.get(0, 0), x.get(1, 0), x.get(0, 1));
        &(&self.h.scale(a) + &self.n_minus.scale(b)) + &self.n_plus.scale(c)
    }

    pub fn direct_sum(&self, o: &Self) -> Result<Self> {
        Self::new(
            Matrix::block_diag(&[self.n_minus.clone(), o.n_minus.clone()]),
            Matrix::block_diag(&[self.h.clone(), o.h.clone()]),
            Matrix::block_diag(&[self.n_plus.clone(), o.n_plus.clone()]),
        )
    }

    pub fn conjugate_by(&self, g: &Matrix<T>) -> Result<Self> {
        let gi = g.inverse().ok_or_else(|| dim_err("singular change of basis"))?;
        Self::new(self.n_minus.conjugated_by(g, &gi), self.h.conjugated_by(g, &gi), self.n_plus.conjugated_by(g, &gi))
    }

    /// `e^{i N₋}` carries `⊕_{ℓ'>=ℓ} E^H_{ℓ'}` onto `⊕_{ℓ'>=ℓ} E^Z_{ℓ'}` for every `ℓ`.
    pub fn cayley_filtration_check(&self) -> bool {
        let n = self.dim();
        let g = match self.n_minus.scale(&T::i()).exp_nilpotent() {
            Ok(g) => g,
            Err(_) => return false,
        };
        let hs = self.weights_h.weights();
        let lo = hs.first().copied().unwrap_or(0);
        let hi = hs.last().copied().unwrap_or(0);
        (lo..=hi).all(|l| {
            let upper = |gr: &Grading<T>| gr.frame().span_where(|k| *k >= l);
            let eh = upper(&self.weights_h);
            let ez = upper(&self.weights_z);
            eh.dim() == ez.dim() && eh.image(&g) == ez && ez.ambient_dim() == n
        })
    }
}

/// Completes `(N, H)` to an sl2-triple by building `N⁺` on highest-weight strings.
pub fn sl2_complete<T: Scalar>(n: &Matrix<T>, h: &Matrix<T>) -> Result<Matrix<T>> {
    if !n.is_square() || !h.is_square() || n.rows() != h.rows() {
        return Err(dim_err("N and H must be square of equal size"));
    }
    let d = n.rows();
    if !n.is_nilpotent() {
        return Err(MhxError::NotNilpotent);
    }
    if h.commutator(n) != n.scale(&T::from_i64(-2)) {
        return Err(MhxError::Infeasible("[H, N] != -2N".into()));
    }
    let hg = Grading::from_operator(h).map_err(|_| MhxError::Infeasible("H is not an integer grading".into()))?;
    let mut cols = Vec::new();
    let mut images = Vec::new();
    for (&w, space) in hg.eigenspaces() {
        if w < 0 {
            continue;
        }
        let kernel = Subspace::span_of(d, n.pow(w as usize + 1).kernel());
        for v in space.intersect(&kernel).basis() {
            let mut string = vec![v.clone()];
            for _ in 0..w {
                let next = n.apply(string.last().unwrap());
                string.push(next);
            }
            for j in 0..=w as usize {
                cols.push(string[j].clone());
                let c = T::from_i64(j as i64 * (w - j as i64 + 1));
                images.push(if j == 0 { vec![T::zero(); d] } else { string[j - 1].iter().map(|x| x.mul_ref(&c)).collect() });
            }
        }
    }
    let infeasible = || MhxError::Infeasible("(N, H) is not part of an sl2-triple".into());
    if cols.len() != d {
        return Err(infeasible());
    }
    let b = Matrix::from_columns(d, &cols);
    let binv = b.inverse().ok_or_else(infeasible)?;
    let np = &Matrix::from_columns(d, &images) * &binv;
    if np.commutator(n) != *h || h.commutator(&np) != np.scale(&T::from_i64(2)) {
        return Err(infeasible());
    }
    Ok(np)
}

/// The representation on `V` assembled from the graded pieces `E_k(Y∞) ≅ Gr^W_k`.
pub fn assemble_rho<T: Scalar>(
    n: &Matrix<T>,
    w: &IncreasingFiltration<T>,
    finf: &DecreasingFiltration<T>,
    yinf: &Grading<T>,
) -> Result<Sl2Rep<T>> {
    if !yinf.grades(w) {
        return Err(MhxError::NotGrading("Y∞ does not grade W".into()));
    }
    let dim = n.rows();
    let mut cols = Vec::new();
    let (mut nm, mut hh, mut np) = (Vec::new(), Vec::new(), Vec::new());
    for k in yinf.weights() {
        let gp = w.graded_piece(k, Some(yinf))?;
        let nk = gp.induced_operator(n);
        let fk = gp.induced_decreasing(finf, w.get(k));
        let wk = monodromy_weight(&nk)?.shift(-k);
        let mhs = deligne_bigrading(&fk, &wk)
            .map_err(|e| MhxError::Precondition(format!("graded orbit at weight {k} is not a limiting MHS: {e}")))?;
        if !mhs.is_split_real() {
            return Err(MhxError::Precondition(format!("graded orbit at weight {k} is not split")));
        }
        let hk = &mhs.y().as_operator() - &Matrix::identity(gp.dim()).scale(&T::from_i64(k));
        let npk = sl2_complete(&nk, &hk)?;
        cols.extend(gp.representatives().iter().cloned());
        nm.push(nk);
        hh.push(hk);
        np.push(npk);
    }
    let b = Matrix::from_columns(dim, &cols);
    let binv = b.inverse().ok_or_else(|| MhxError::Internal("graded representatives are dependent".into()))?;
    let pull = |blocks: &[Matrix<T>]| Matrix::block_diag(blocks).conjugated_by(&b, &binv);
    Sl2Rep::new(pull(&nm), pull(&hh), pull(&np))
}

/// `T = sin(N)/N = Σ (-1)^n N^{2n} / (2n+1)!`
pub fn sinc_transform<T: Scalar>(n: &Matrix<T>) -> Result<Matrix<T>> {
    if !n.is_square() {
        return Err(dim_err("N must be square"));
    }
    if !n.is_nilpotent() {
        return Err(MhxError::NotNilpotent);
    }
    let d = n.rows();
    let n2 = n * n;
    let mut out = Matrix::identity(d);
    let mut power = Matrix::identity(d);
    let mut fact: i64 = 1;
    let mut k = 0i64;
    loop {
        power = &power * &n2;
        if power.is_zero() {
            return Ok(out);
        }
        k += 1;
        fact *= (2 * k) * (2 * k + 1);
        let c = T::from_ratio(if k % 2 == 1 { -1 } else { 1 }, fact);
        out = &out + &power.scale(&c);
    }
}

/// `z_b T y_a != 0`, with `y_a`, `z_b` the projections to the `H`- and
/// `Z`-weight spaces.
pub fn lemma423_predicate<T: Scalar>(rep: &Sl2Rep<T>, a: i64, b: i64) -> bool {
    if rep.weights_h.eigenspace(a).is_zero() || rep.weights_z.eigenspace(b).is_zero() {
        return false;
    }
    let t = sinc_transform(&rep.n_minus).expect("nilpotent");
    let ya = rep.weights_h.projector(a);
    let zb = rep.weights_z.projector(b);
    !(&(&zb * &t) * &ya).is_zero()
}

fn binomial(n: usize, k: usize) -> i64 {
    let mut c: i64 = 1;
    for i in 0..k {
        c = c * (n - i) as i64 / (i + 1) as i64;
    }
    c
}

fn is_weight(d: i64, a: i64) -> bool {
    a.abs() <= d && (a + d) % 2 == 0
}

/// Polynomial model of the irreducible of highest weight `d`: the coefficients
/// of `T(u^p v^{d-p})` in the basis `w^q w̄^{d-q}` (`q = 0..=d`), where
/// `N = v ∂/∂u`, `w = u + i v`.
pub fn polynomial_model_coefficients(d: usize, p: usize) -> Vec<GaussRat> {
    // T applied in the (u, v) monomial basis, indexed by the power of u
    let mut term = vec![GaussRat::zero(); d + 1];
    term[p] = q(1, 1);
    let mut acc = term.clone();
    let lower = |c: &[GaussRat]| -> Vec<GaussRat> {
        let mut out = vec![GaussRat::zero(); d + 1];
        for k in 1..=d {
            out[k - 1] = c[k].mul_ref(&q(k as i64, 1));
        }
        out
    };
    let mut n = 0i64;
    let mut fact = 1i64;
    loop {
        term = lower(&lower(&term));
        if term.iter().all(|x| x.is_zero()) {
            break;
        }
        n += 1;
        fact *= (2 * n) * (2 * n + 1);
        let c = q(if n % 2 == 1 { -1 } else { 1 }, fact);
        for (a, t) in acc.iter_mut().zip(&term) {
            a.add_mul_assign(&c, t);
        }
    }
    // u = (w + w̄)/2, v = (w - w̄)/(2i)
    let half = q(1, 2);
    let v_unit = GaussRat::one_over_two_i();
    let mut out = vec![GaussRat::zero(); d + 1];
    for (pp, c) in acc.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let m = d - pp;
        let mut scale = c.clone();
        for _ in 0..pp {
            scale = scale.mul_ref(&half);
        }
        for _ in 0..m {
            scale = scale.mul_ref(&v_unit);
        }
        for s in 0..=pp {
            for t in 0..=m {
                let sign = if (m - t) % 2 == 1 { -1 } else { 1 };
                let coef = q(binomial(pp, s) * binomial(m, t) * sign, 1);
                out[s + t].add_mul_assign(&scale, &coef);
            }
        }
    }
    out
}

/// The same quantity as [`lemma423_predicate`] for the irreducible of highest
/// weight `d`, computed in the polynomial model.
pub fn lemma423_oracle(d: i64, a: i64, b: i64) -> bool {
    if d < 0 || !is_weight(d, a) || !is_weight(d, b) {
        return false;
    }
    let p = ((a + d) / 2) as usize;
    let qidx = ((b + d) / 2) as usize;
    !polynomial_model_coefficients(d as usize, p)[qidx].is_zero()
}

/// The stated characterization: `a`, `b` weights and (`a` highest or `a < |b|`).
pub fn lemma423_characterization(d: i64, a: i64, b: i64) -> bool {
    is_weight(d, a) && is_weight(d, b) && (a == d || a < b.abs())
}

/// `T u^d = (1/(d+1)) Σ_p w^p w̄^{d-p}` in the polynomial model.
pub fn sinc_highest_weight_identity(d: usize) -> bool {
    let c = polynomial_model_coefficients(d, d);
    c.iter().all(|x| *x == q(1, d as i64 + 1))
}

/// Standard irreducible of highest weight `d` on `e_j = N^j v`.
pub fn standard_irrep(d: usize) -> Sl2Rep<GaussRat> {
    let n = d + 1;
    let nm = Matrix::from_fn(n, n, |i, j| if i == j + 1 { q(1, 1) } else { GaussRat::zero() });
    let h = Matrix::from_fn(n, n, |i, j| if i == j { q(d as i64 - 2 * i as i64, 1) } else { GaussRat::zero() });
    let np = Matrix::from_fn(n, n, |i, j| {
        if j == i + 1 {
            q(j as i64 * (d as i64 - j as i64 + 1), 1)
        } else {
            GaussRat::zero()
        }
    });
    Sl2Rep::new(nm, h, np).expect("standard irreducible")
}

/// `(x⁻, x⁺, z)` as 2x2 matrices in the basis where
/// `n₋ = [[0,0],[1,0]]`, `h = diag(1,-1)`, `n₊ = [[0,1],[0,0]]`.
pub fn sl2_hodge_frame() -> (Matrix<GaussRat>, Matrix<GaussRat>, Matrix<GaussRat>) {
    let i = GaussRat::i();
    let half = q(1, 2);
    let h = Matrix::diagonal(&[q(1, 1), q(-1, 1)]);
    let nm = crate::linalg::unit::<GaussRat>(2, 1, 0);
    let np = crate::linalg::unit::<GaussRat>(2, 0, 1);
    let s = &nm + &np;
    let xm = (&h - &s.scale(&i)).scale(&half);
    let xp = (&h + &s.scale(&i)).scale(&half);
    let z = (&nm - &np).scale(&i);
    (xm, xp, z)
}

impl GaussRat {
    fn one_over_two_i() -> GaussRat {
        // 1/(2i) = -i/2
        GaussRat::i().mul_ref(&q(-1, 2))
    }
}
