use mhx_core::deligne::{
    deligne_grading, remark_commutativity, star_membership, theorem2_pair, triple_data, DeligneStart,
};
use mhx_core::factorize::{first_order_defect, glp_factor, in_lie_minus, lambda_action};
use mhx_core::filtered::induce_on_graded;
use mhx_core::hodge::{deligne_bigrading, Part};
use mhx_core::linalg::{Matrix, Subspace};
use mhx_core::orbit::{
    check_orbit, generate_split_orbit, generate_unipotent_model, grading_trace, split_admissibility, theorem4_report,
    unipotent_admissibility, OrbitSpec, TraceMode, TraceVerdict,
};
use mhx_core::random::{
    random_grading, random_lambda, random_lie_minus, random_mhs, random_nilpotent, random_real_invertible, rng,
    small_gauss,
};
use mhx_core::scalar::q;
use mhx_core::sl2::{assemble_rho, lemma423_oracle, lemma423_predicate, standard_irrep};
use mhx_core::weightfilt::{is_monodromy_weight, monodromy_weight, relative_weight, verify_rel};
use mhx_core::GaussRat;
use proptest::prelude::*;
use rand::Rng;

type M = Matrix<GaussRat>;

fn random_subspace(r: &mut rand_chacha::ChaCha8Rng, n: usize) -> Subspace<GaussRat> {
    let k = r.gen_range(0..=n);
    Subspace::span_of(n, (0..k).map(|_| (0..n).map(|_| small_gauss(r, 2)).collect()).collect())
}

fn samples() -> Vec<GaussRat> {
    [1, 2, 3, 5].iter().map(|&y| q(y, 1)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn subspace_lattice(seed in any::<u64>(), n in 1usize..6) {
        let mut r = rng(seed);
        let (a, b, c) = (random_subspace(&mut r, n), random_subspace(&mut r, n), random_subspace(&mut r, n));
        prop_assert_eq!(a.sum(&b).dim() + a.intersect(&b).dim(), a.dim() + b.dim());
        prop_assert_eq!(a.sum(&b).sum(&c), a.sum(&b.sum(&c)));
        prop_assert!(a.intersect(&b).is_subspace_of(&a));
        prop_assert!(a.is_subspace_of(&a.sum(&b)));
        // modular law for A ⊆ C
        let big = a.sum(&c);
        prop_assert_eq!(a.sum(&b.intersect(&big)), a.sum(&b).intersect(&big));
    }

    #[test]
    fn conjugation_is_involutive(seed in any::<u64>(), n in 1usize..6) {
        let mut r = rng(seed);
        let s = random_subspace(&mut r, n);
        prop_assert_eq!(s.conj().conj(), s);
        let m = M::from_fn(n, n, |_, _| small_gauss(&mut r, 3));
        prop_assert_eq!(m.conj().conj(), m);
    }

    #[test]
    fn exp_of_negative_is_inverse(seed in any::<u64>(), n in 1usize..7) {
        let mut r = rng(seed);
        let a = M::from_fn(n, n, |i, j| if j > i { small_gauss(&mut r, 3) } else { q(0, 1) });
        let prod = &a.exp_nilpotent().unwrap() * &(-&a).exp_nilpotent().unwrap();
        prop_assert_eq!(prod, M::identity(n));
        prop_assert_eq!(a.exp_nilpotent().unwrap().log_unipotent().unwrap(), a);
    }

    #[test]
    fn grading_grades_its_filtration(seed in any::<u64>(), n in 1usize..7) {
        let mut r = rng(seed);
        let y = random_grading(&mut r, n);
        let w = y.filtration_of();
        prop_assert!(y.grades(&w));
        let (lo, hi) = w.window();
        let mut total = 0;
        for k in lo..=hi {
            prop_assert!(w.get(k - 1).is_subspace_of(w.get(k)));
            prop_assert_eq!(w.gr_dim(k), w.get(k).dim() - w.get(k - 1).dim());
            prop_assert_eq!(w.gr_dim(k), y.eigenspace(k).dim());
            total += w.gr_dim(k);
        }
        prop_assert_eq!(total, n);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn induced_filtration_is_monotone_and_exhaustive(seed in any::<u64>()) {
        let s = random_mhs(seed, 7).unwrap();
        let (f, w) = (s.mhs.f(), s.mhs.w());
        let (plo, phi) = f.window();
        for k in w.jumps() {
            let g = induce_on_graded(f, w, k);
            prop_assert_eq!(g.get(plo).dim(), w.gr_dim(k));
            for p in plo..=phi {
                prop_assert!(g.get(p + 1).is_subspace_of(g.get(p)));
            }
        }
    }

    #[test]
    fn bigrading_rebuild_is_identical(seed in any::<u64>()) {
        let s = random_mhs(seed, 8).unwrap();
        let again = deligne_bigrading(s.mhs.f(), s.mhs.w()).unwrap();
        prop_assert_eq!(again.bigrading(), s.mhs.bigrading());
        prop_assert_eq!(again.y(), s.mhs.y());
    }

    #[test]
    fn lambda_moves_the_bigrading(seed in any::<u64>()) {
        let s = random_mhs(seed, 7).unwrap();
        let g = s.lambda.exp_nilpotent().unwrap();
        let moved = s.split.transport(&g).unwrap();
        prop_assert_eq!(moved.bigrading(), s.mhs.bigrading());
        let mut r = rng(seed ^ 0x5a5a);
        let h = random_lambda(&mut r, &s.mhs).exp_nilpotent().unwrap();
        prop_assert!(lambda_action(&h, &s.mhs).is_ok());
    }

    #[test]
    fn y_preserves_f(seed in any::<u64>()) {
        let s = random_mhs(seed, 8).unwrap();
        let f = s.mhs.f();
        let y = s.mhs.y().as_operator();
        let (lo, hi) = f.window();
        for p in lo..=hi {
            prop_assert!(f.get(p).maps_into(&y, f.get(p)));
        }
    }

    /// `conj gl^{r,s} ⊆ gl^{s,r} + Σ_{a<s, b<r} gl^{a,b}`
    #[test]
    fn gl_conjugation_inclusions(seed in any::<u64>()) {
        let s = random_mhs(seed, 6).unwrap();
        let gl = s.mhs.gl_bigrading();
        for &(r, t) in gl.component_dims().keys() {
            for x in gl.component_basis(r, t) {
                for ((a, b), part) in gl.decompose(&x.conj()) {
                    if part.is_zero() {
                        continue;
                    }
                    prop_assert!((a, b) == (t, r) || (a < t && b < r), "type ({},{}) in conj of ({},{})", a, b, r, t);
                }
            }
        }
    }

    #[test]
    fn monodromy_weight_is_conjugation_invariant(seed in any::<u64>(), n in 1usize..7) {
        let mut r = rng(seed);
        let nm = random_nilpotent(&mut r, n);
        let g = random_real_invertible(&mut r, n);
        let gi = g.inverse().unwrap();
        let w = monodromy_weight(&nm).unwrap();
        prop_assert!(is_monodromy_weight(&nm, &w));
        prop_assert_eq!(monodromy_weight(&nm.conjugated_by(&g, &gi)).unwrap(), w.image(&g));
    }

    #[test]
    fn factorization_certified(seed in any::<u64>()) {
        let s = random_mhs(seed, 8).unwrap();
        let mut r = rng(seed.wrapping_add(1));
        let alpha = random_lie_minus(&mut r, &s.mhs);
        let res = glp_factor(&alpha, &s.mhs).unwrap();
        let depth = s.mhs.w().jumps().len().max(1);
        prop_assert!(res.iterations <= depth, "{} stages for depth {}", res.iterations, depth);
        let (dg, dl, dp) = first_order_defect(&res, &alpha, &s.mhs).unwrap();
        for d in [&dg, &dl, &dp] {
            prop_assert!(in_lie_minus(&s.mhs, d, 2));
        }
    }

    /// Real `α ∈ Lie₋₁` without a `Λ` part on a split structure factors as `γ = α`.
    #[test]
    fn factorization_of_real_alpha(seed in any::<u64>()) {
        let s = random_mhs(seed, 8).unwrap();
        let mut r = rng(seed.wrapping_add(2));
        let x = s.split.project(&random_lie_minus(&mut r, &s.split), Part::EtaMinus);
        let alpha = &x + &x.conj();
        let res = glp_factor(&alpha, &s.split).unwrap();
        prop_assert_eq!(&res.gamma, &alpha);
        prop_assert!(res.lambda.is_zero() && res.phi.is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn relative_weight_unique_under_perturbation(seed in any::<u64>()) {
        let g = generate_split_orbit(&OrbitSpec::random(seed, 6), seed).unwrap();
        let o = &g.orbit;
        let m = relative_weight(&o.n, &o.w).unwrap().filtration.unwrap();
        prop_assert!(verify_rel(&o.n, &o.w, &m));
        prop_assert!(!verify_rel(&o.n, &o.w, &m.shift(1)));
        let mut r = rng(seed);
        let ym = m.clone();
        for _ in 0..4 {
            let d = o.dim();
            let raw = M::from_fn(d, d, |_, _| q(r.gen_range(-2..=2), 1));
            // unipotent h preserving W, moving M
            let y = g.yinf.as_operator();
            let x = g.yinf.ad_components(&raw).into_iter().filter(|(k, _)| *k < 0).fold(M::zeros(d, d), |acc, (_, c)| &acc + &c);
            prop_assert!(o.w.lowers_by(&x, 1) || x.is_zero(), "{:?}", y);
            let cand = ym.image(&x.exp_nilpotent().unwrap());
            if verify_rel(&o.n, &o.w, &cand) {
                prop_assert_eq!(&cand, &m);
            }
        }
    }

    /// When `N` acts trivially on `Gr^W`, rel W exists iff `N W_k ⊆ W_{k-2}`, and then equals `W`.
    #[test]
    fn relative_weight_of_unipotent(seed in 0u64..1000, admissible in any::<bool>()) {
        let model = generate_unipotent_model(seed, admissible, true).unwrap();
        let o = &model.orbit;
        let r = relative_weight(&o.n, &o.w).unwrap();
        prop_assert_eq!(r.exists, o.w.lowers_by(&o.n, 2));
        prop_assert_eq!(r.exists, admissible);
        if r.exists {
            prop_assert_eq!(r.filtration.unwrap(), o.w.clone());
        }
    }

    #[test]
    fn assembled_rho_is_an_sl2(seed in any::<u64>()) {
        let g = generate_split_orbit(&OrbitSpec::random(seed, 8), seed).unwrap();
        let o = &g.orbit;
        let rho = assemble_rho(&o.n, &o.w, &o.f, &g.yinf).unwrap();
        let two = q(2, 1);
        prop_assert_eq!(rho.h.commutator(&rho.n_minus), rho.n_minus.scale(&(-two.clone())));
        prop_assert_eq!(rho.h.commutator(&rho.n_plus), rho.n_plus.scale(&two));
        prop_assert_eq!(rho.n_plus.commutator(&rho.n_minus), rho.h.clone());
        let y = g.yinf.as_operator();
        for x in [&rho.n_minus, &rho.h, &rho.n_plus] {
            prop_assert!(x.commutator(&y).is_zero());
        }
        prop_assert!(rho.cayley_filtration_check());
    }

    #[test]
    fn deligne_grading_certified_and_unique(seed in any::<u64>()) {
        let g = generate_split_orbit(&OrbitSpec::random(seed, 8), seed).unwrap();
        let o = &g.orbit;
        let t = triple_data(&o.f, &o.w, &o.n).unwrap();
        let rel_y = t.rel_mhs.y();
        prop_assert!(t.grading.certificate.all());
        let other = deligne_grading(&o.n, rel_y, &o.w, DeligneStart::Seeded(seed)).unwrap();
        prop_assert!(other.certificate.all());
        prop_assert_eq!(&other.y, &t.grading.y);
        prop_assert!(remark_commutativity(&o.n, rel_y, &t.grading).unwrap());
    }

    #[test]
    fn split_orbit_properties(seed in any::<u64>()) {
        let g = generate_split_orbit(&OrbitSpec::random(seed, 8), seed).unwrap();
        let o = &g.orbit;
        prop_assert!(o.is_horizontal());
        prop_assert!(check_orbit(o, &samples()).passed());
        let r = split_admissibility(o).unwrap();
        prop_assert!(r.split_direct() && r.split_limit());
        prop_assert!(r.limit.constant);
        prop_assert!(theorem4_report(o, &g.yinf).unwrap().all_pass());
        for y in samples() {
            prop_assert!(theorem2_pair(&o.f, &o.w, &o.n, &y).unwrap().equal);
            prop_assert!(star_membership(&o.f, &o.w, &o.n, &y).unwrap());
        }
    }

    #[test]
    fn unipotent_trace_biconditional(seed in 0u64..1000, admissible in any::<bool>()) {
        let model = generate_unipotent_model(seed, admissible, true).unwrap();
        let verdict = unipotent_admissibility(&model).unwrap().admissible;
        prop_assert_eq!(verdict, model.orbit.w.lowers_by(&model.orbit.n, 2));
        let ys: Vec<GaussRat> = [2, 4, 8, 16].iter().map(|&y| q(y, 1)).collect();
        let t = grading_trace(&model, &ys, &TraceMode::Float).unwrap();
        let bounded = t.verdict == TraceVerdict::Converges;
        prop_assert_eq!(bounded, verdict, "{:?}", t.samples.iter().map(|s| s.distance).collect::<Vec<_>>());
        if !verdict {
            prop_assert_eq!(t.verdict, TraceVerdict::Diverges);
        }
    }
}

#[test]
fn predicate_matches_oracle_on_irreducibles() {
    for d in 0..=6i64 {
        let rep = standard_irrep(d as usize);
        for a in -d..=d {
            for b in -d..=d {
                assert_eq!(lemma423_predicate(&rep, a, b), lemma423_oracle(d, a, b), "d={d} a={a} b={b}");
            }
        }
    }
}
