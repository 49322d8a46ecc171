//! Property tests for the invariants of each module.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spshrink::algebra::quotient_algebra;
use spshrink::linalg::{self, exact_kernel, ExactMatrix, FloatMatrix};
use spshrink::mapbuilder::{build_block_map, evaluate_map, SourcePipeline};
use spshrink::sma::{
    block_projection, condensation, random_quasi_order, sample_diag_conj, sma_algebra, sma_radical,
    to_matrix,
};
use spshrink::verify::{check_multiplicative, check_preserving, check_shrinking};
use spshrink::wedderburn::{radical_basis, wedderburn_profile, MaximalIdeal};
use spshrink::{Algebra, Element, GaussRational, IdealBasis, QuasiOrder};

fn gr(re: i64, im: i64) -> GaussRational {
    &GaussRational::from_int(re) + &(&GaussRational::from_int(im) * &GaussRational::i())
}

fn exact_matrix() -> impl Strategy<Value = ExactMatrix> {
    (1usize..=5, 1usize..=6).prop_flat_map(|(r, c)| {
        prop::collection::vec((-3i64..=3, -2i64..=2, 1i64..=3), r * c).prop_map(move |v| {
            let rows = (0..r)
                .map(|i| {
                    (0..c)
                        .map(|j| {
                            let (a, b, d) = v[i * c + j];
                            &gr(a, b) / &gr(d, 0)
                        })
                        .collect()
                })
                .collect();
            ExactMatrix::from_rows(rows)
        })
    })
}

/// A product of transvections with Gaussian-integer entries, so the determinant is 1.
fn unimodular(n: usize, seed: u64) -> ExactMatrix {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = ExactMatrix::identity(n);
    if n < 2 {
        return t;
    }
    for _ in 0..n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = gr([-1, 1][rng.gen_range(0..2)], rng.gen_range(-1..=1));
        let mut e = ExactMatrix::identity(n);
        e[(i, j)] = c;
        t = e.mul(&t);
    }
    t
}

fn quasi_order(max_n: usize) -> impl Strategy<Value = QuasiOrder> {
    (1..=max_n, 0.0f64..0.6, any::<u64>()).prop_map(|(n, density, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_quasi_order(n, density, &mut rng)
    })
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_plus_nullity_is_column_count(m in exact_matrix()) {
        let kernel = exact_kernel(&m);
        prop_assert_eq!(m.rank() + kernel.len(), m.ncols());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).iter().all(num_traits::Zero::is_zero));
        }
    }

    #[test]
    fn eigenvalues_survive_permutation_similarity(n in 1usize..=6, seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = Algebra::matrix_algebra(n).unwrap();
        let m = to_matrix(&QuasiOrder::block_equivalence(&[n]).unwrap(), &alg.random_element(seed).to_float());
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let pm = FloatMatrix::from_fn(n, n, |i, j| m[(perm[i], perm[j])]);
        let tol = linalg::default_tol(&m);
        let a = linalg::spectrum_set(&m, tol).unwrap();
        let b = linalg::spectrum_set(&pm, tol).unwrap();
        prop_assert!(linalg::hausdorff(&a, &b) <= 10.0 * tol);
    }

    #[test]
    fn char_poly_of_integer_spectrum(roots in prop::collection::vec(-4i64..=4, 1..=6)) {
        let d: Vec<Complex64> = roots.iter().map(|&r| Complex64::new(r as f64, 0.0)).collect();
        let got = linalg::char_poly(&FloatMatrix::diagonal(&d));
        let mut want = vec![Complex64::new(1.0, 0.0)];
        for r in &d {
            let mut next = vec![Complex64::new(0.0, 0.0); want.len() + 1];
            for (i, c) in want.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            want = next;
        }
        prop_assert_eq!(got.len(), want.len());
        prop_assert_eq!(*got.last().unwrap(), Complex64::new(1.0, 0.0));
        for (g, w) in got.iter().zip(&want) {
            prop_assert!((g - w).norm() <= 1e-8);
        }
    }

    #[test]
    fn spectrum_is_basis_independent(ks in prop::collection::vec(1usize..=2, 1..=3), seed in any::<u64>()) {
        let alg = Algebra::direct_sum_algebra(&ks).unwrap();
        let t = unimodular(alg.dim(), seed);
        let changed = alg.change_basis(&t).unwrap();
        let x = alg.random_element(seed);
        // Coordinates in the new basis: T⁻¹ x.
        let tinv = t.inverse().unwrap().to_float();
        let xf = x.to_float();
        let y: Vec<Complex64> = (0..alg.dim()).map(|i| (0..alg.dim()).map(|j| tinv[(i, j)] * xf[j]).sum()).collect();
        let tol = 1e-9;
        let a = alg.spectrum(&x, tol).unwrap();
        let b = changed.spectrum(&Element::float(y), tol).unwrap();
        let scale = 1.0 + t.to_float().max_abs() * tinv.max_abs();
        prop_assert!(linalg::hausdorff(&a, &b) <= 10.0 * tol * scale, "{:?} vs {:?}", a, b);
    }

    #[test]
    fn direct_sum_spectrum_is_union_of_blocks(ks in prop::collection::vec(1usize..=3, 1..=3), seed in any::<u64>()) {
        let rho = QuasiOrder::block_equivalence(&ks).unwrap();
        let alg = sma_algebra(&rho);
        let x = alg.random_element(seed);
        let source = SourcePipeline::sma(&rho);
        let mut union = Vec::new();
        for b in source.blocks_of(&x).unwrap() {
            union.extend(linalg::spectrum_set(&b, 1e-9).unwrap());
        }
        prop_assert!(linalg::hausdorff(&alg.spectrum(&x, 1e-9).unwrap(), &union) <= 1e-8);
    }

    #[test]
    fn quotients_compose(rho in quasi_order(4)) {
        // A → A/R² → (A/R²)/(R/R²) against A → A/R, with R the radical.
        let alg = sma_algebra(&rho);
        let r = sma_radical(&rho);
        let squares: Vec<Vec<GaussRational>> = r
            .vectors()
            .iter()
            .flat_map(|x| r.vectors().iter().map(|y| alg.mul_exact(x, y)))
            .collect();
        let r2 = IdealBasis::span(&alg, &squares).unwrap();
        let (q1, map1) = quotient_algebra(&alg, &r2).unwrap();
        let image: Vec<Vec<GaussRational>> = r.vectors().iter().map(|v| map1.apply_exact(v)).collect();
        let (q2, _) = quotient_algebra(&q1, &IdealBasis::span(&q1, &image).unwrap()).unwrap();
        let (direct, _) = quotient_algebra(&alg, &r).unwrap();
        let entries = |a: &Algebra| a.structure_entries().map(|(i, j, k, c)| (i, j, k, c.clone())).collect::<Vec<_>>();
        prop_assert_eq!(entries(&q2), entries(&direct));
        prop_assert_eq!(q2.unit(), direct.unit());
    }

    #[test]
    fn wedderburn_invariants(rho in quasi_order(5)) {
        let alg = sma_algebra(&rho);
        let p = wedderburn_profile(&alg, 1, 1e-8).unwrap();
        let sq: usize = p.ks.iter().map(|k| k * k).sum();
        prop_assert_eq!(sq + p.radical.dim(), alg.dim());
        prop_assert_eq!(radical_basis(&p.quotient).unwrap().dim(), 0);
        for (m, k) in p.maximal_ideals.iter().zip(&p.ks) {
            let MaximalIdeal::Exact(ideal) = m else { panic!("structural algebras split exactly") };
            let checked = IdealBasis::new(&alg, ideal.vectors()).unwrap();
            prop_assert_eq!(quotient_algebra(&alg, &checked).unwrap().0.dim(), k * k);
        }
        prop_assert_eq!(sorted(condensation(&rho).block_sizes), p.ks.clone());
        prop_assert_eq!(&p.radical, &sma_radical(&rho));
    }

    #[test]
    fn profile_is_seed_independent(rho in quasi_order(4)) {
        let alg = sma_algebra(&rho);
        let first = wedderburn_profile(&alg, 0, 1e-8).unwrap().ks;
        for seed in 1..10 {
            prop_assert_eq!(&wedderburn_profile(&alg, seed, 1e-8).unwrap().ks, &first);
        }
    }

    #[test]
    fn general_algebras_have_the_structural_profile(rho in quasi_order(3), seed in any::<u64>()) {
        let alg = sma_algebra(&rho);
        let changed = alg.change_basis(&unimodular(alg.dim(), seed)).unwrap();
        let p = wedderburn_profile(&changed, seed, 1e-8).unwrap();
        prop_assert_eq!(p.ks, sorted(condensation(&rho).block_sizes));
    }

    #[test]
    fn sma_invariants(rho in quasi_order(5), seed in any::<u64>()) {
        let c = condensation(&rho);
        prop_assert_eq!(c.block_sizes.iter().sum::<usize>(), rho.n());
        for (i, j) in rho.pairs() {
            prop_assert!(c.class_of[i] <= c.class_of[j]);
        }
        let sq: usize = c.block_sizes.iter().map(|k| k * k).sum();
        prop_assert_eq!(sma_radical(&rho).dim() + sq, rho.len());

        let alg = sma_algebra(&rho);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut small = || -> Vec<GaussRational> {
            use rand::Rng;
            (0..alg.dim()).map(|_| gr(rng.gen_range(-3..=3), rng.gen_range(-1..=1))).collect()
        };
        let (x, y) = (small(), small());
        let proj = |v: &[GaussRational]| block_projection(&rho, &Element::exact(v.to_vec())).as_exact().unwrap().to_vec();
        let diff: Vec<GaussRational> = proj(&alg.mul_exact(&x, &y))
            .iter()
            .zip(alg.mul_exact(&proj(&x), &proj(&y)))
            .map(|(a, b)| a - &b)
            .collect();
        prop_assert!(sma_radical(&rho).contains(&diff));
        prop_assert_eq!(proj(&proj(&x)), proj(&x));

        let s = sample_diag_conj(&rho, seed).unwrap();
        let sp = alg.spectrum(&s.element, 1e-9).unwrap();
        prop_assert!(linalg::hausdorff(&sp, &s.d) <= 1e-8);
    }

    #[test]
    fn block_maps_shrink_and_covering_maps_preserve(
        rho in quasi_order(4),
        extra in prop::collection::vec(0usize..=2, 4),
        seed in any::<u64>(),
    ) {
        let alg = sma_algebra(&rho);
        let source = SourcePipeline::sma(&rho);
        let ks = source.ks();
        let x: Vec<usize> = ks.iter().enumerate().map(|(i, _)| extra[i % extra.len()]).collect();
        prop_assume!(x.iter().any(|&v| v > 0));
        let m: usize = x.iter().zip(&ks).map(|(a, b)| a * b).sum();
        let spec = build_block_map(source, &[m], std::slice::from_ref(&x)).unwrap();
        prop_assert!(check_shrinking(&alg, Some(&rho), &spec, 40, 1e-8, seed).unwrap().passed());
        let preserving = check_preserving(&alg, Some(&rho), &spec, 40, 1e-8, seed).unwrap();
        prop_assert_eq!(preserving.passed(), spec.is_covering());
        let unit = evaluate_map(&spec, &alg.unit_element()).unwrap();
        prop_assert_eq!(unit, FloatMatrix::identity(m));
    }

    #[test]
    fn quotient_maps_are_multiplicative(ks in prop::collection::vec(1usize..=2, 1..=3), seed in any::<u64>()) {
        let alg = Algebra::direct_sum_algebra(&ks).unwrap().change_basis(&unimodular(ks.iter().map(|k| k * k).sum(), seed)).unwrap();
        let source = SourcePipeline::quotient(&alg, seed, 1e-8).unwrap();
        let family = vec![vec![1; ks.len()]];
        let spec = build_block_map(source, &[ks.iter().sum()], &family).unwrap();
        prop_assert!(check_multiplicative(&alg, &spec, 30, 1e-8, seed).unwrap().passed());
        prop_assert!(check_preserving(&alg, None, &spec, 30, 1e-8, seed).unwrap().passed());
    }
}
