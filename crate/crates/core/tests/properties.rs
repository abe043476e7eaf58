//! Property tests. Random inputs are built from proptest-drawn seeds so that
//! shrinking acts on seeds and dimensions, and failures replay exactly.

use std::sync::Arc;

use opkit::commutant::{commutant_basis, star_closure};
use opkit::cpmaps::{choi_of, kraus_from_choi, CPMap, StinespringDilation};
use opkit::groups::{dft_cyclic, gelfand_l1, induce, FiniteGroup, Sequence, SubgroupRep};
use opkit::matrix::{gram_schmidt, inner, norm, InnerProduct};
use opkit::random::{random_density, random_hermitian, random_matrix, random_unital_kraus, random_vector};
use opkit::spectral::{functional_calculus, pvm_evaluate, spectral_decompose};
use opkit::unbounded::cayley_matrix;
use opkit::wavelet::{haar_basis, parseval_defect, DyadicStep, Q};
use opkit::{ComplexMatrix, Tolerance, C64};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Hermitian matrix with repeated eigenvalues drawn from a small integer set.
fn degenerate_hermitian(seed: u64, n: usize) -> ComplexMatrix {
    let mut r = rng(seed);
    let u = opkit::random::random_unitary(&mut r, n);
    let d: Vec<f64> = (0..n).map(|k| ((seed as usize + k * 7) % 3) as f64 - 1.0).collect();
    &(&u * &ComplexMatrix::diag_real(&d)) * &u.adjoint()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spectral_reconstruction(seed in any::<u64>(), n in 1usize..20) {
        let a = random_hermitian(&mut rng(seed), n);
        let s = spectral_decompose(&a, None).unwrap();
        prop_assert!(s.reconstruct().max_dist(&a) <= 1e-8 * a.max_norm().max(1.0));
        prop_assert!(s.validate() <= 1e-8);
        prop_assert_eq!(s.multiplicities.iter().sum::<usize>(), n);
    }

    #[test]
    fn pvm_is_multiplicative(seed in any::<u64>(), n in 2usize..12, lo in -2.0f64..0.5, hi in -0.5f64..2.0) {
        let a = degenerate_hermitian(seed, n);
        let s = spectral_decompose(&a, None).unwrap();
        let e = |x: f64| x >= lo;
        let f = |x: f64| x <= hi;
        let pe = pvm_evaluate(&s, e);
        let pf = pvm_evaluate(&s, f);
        let both = pvm_evaluate(&s, |x| e(x) && f(x));
        prop_assert!(both.max_dist(&(&pe * &pf)) <= 1e-8);
        let either = pvm_evaluate(&s, |x| e(x) || f(x));
        prop_assert!(either.max_dist(&(&(&pe + &pf) - &both)) <= 1e-8);
        prop_assert!(pvm_evaluate(&s, |_| true).max_dist(&ComplexMatrix::identity(n)) <= 1e-8);
    }

    #[test]
    fn functional_calculus_is_a_homomorphism(seed in any::<u64>(), n in 1usize..10) {
        let a = random_hermitian(&mut rng(seed), n);
        let s = spectral_decompose(&a, None).unwrap();
        let f = |x: f64| C64::new(x.sin(), x);
        let g = |x: f64| C64::new(x * x, -1.0);
        let fg = functional_calculus(&s, |x| f(x) * g(x));
        let prod = &functional_calculus(&s, f) * &functional_calculus(&s, g);
        prop_assert!(fg.max_dist(&prod) <= 1e-8 * prod.max_norm().max(1.0));
        let fbar = functional_calculus(&s, |x| f(x).conj());
        prop_assert!(fbar.max_dist(&functional_calculus(&s, f).adjoint()) <= 1e-10);
    }

    #[test]
    fn adjoint_reverses_products(seed in any::<u64>(), n in 1usize..8) {
        let mut r = rng(seed);
        let (a, b) = (random_matrix(&mut r, n, n), random_matrix(&mut r, n, n));
        prop_assert!((&a * &b).adjoint().max_dist(&(&b.adjoint() * &a.adjoint())) <= 1e-12);
        prop_assert_eq!(a.adjoint().adjoint(), a.clone());
        // A = R + iS with R, S Hermitian.
        let (re, im) = (a.real_part(), a.imag_part());
        prop_assert!(re.hermitian_residual().unwrap() <= 1e-15 && im.hermitian_residual().unwrap() <= 1e-15);
        prop_assert!((&re + &im.scale(C64::new(0.0, 1.0))).max_dist(&a) <= 1e-14);
    }

    #[test]
    fn cauchy_schwarz_and_parallelogram(seed in any::<u64>(), n in 1usize..16) {
        let mut r = rng(seed);
        let (x, y) = (random_vector(&mut r, n), random_vector(&mut r, n));
        prop_assert!(inner(&x, &y).norm() <= norm(&x) * norm(&y) * (1.0 + 1e-12));
        let sum: Vec<C64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let diff: Vec<C64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
        let lhs = norm(&sum).powi(2) + norm(&diff).powi(2);
        let rhs = 2.0 * (norm(&x).powi(2) + norm(&y).powi(2));
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs);
    }

    #[test]
    fn gram_schmidt_is_orthonormal_and_triangular(seed in any::<u64>(), n in 2usize..10, k in 1usize..6) {
        let k = k.min(n);
        let mut r = rng(seed);
        let vs: Vec<Vec<C64>> = (0..k).map(|_| random_vector(&mut r, n)).collect();
        let weights: Vec<f64> = (0..n).map(|i| 0.5 + i as f64).collect();
        for ip in [InnerProduct::Standard, InnerProduct::Weighted(weights)] {
            let es = gram_schmidt(&vs, &ip).unwrap();
            for i in 0..k {
                for j in 0..k {
                    let want = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((ip.inner(&es[i], &es[j]) - C64::new(want, 0.0)).norm() <= 1e-10);
                }
                // e_i ⟂ v_j for j < i: the span of the first i outputs equals that of the inputs.
                for v in &vs[..i] {
                    prop_assert!(ip.inner(v, &es[i]).norm() <= 1e-9 * ip.norm(v));
                }
            }
        }
    }

    #[test]
    fn commutant_is_a_unital_star_algebra(seed in any::<u64>(), n in 2usize..5, blocks in 1usize..3) {
        // Generators π(X) = X ⊕ X ⊕ ... have commutant M_blocks ⊗ I_n.
        let mut r = rng(seed);
        let x = random_matrix(&mut r, n, n);
        let gens = vec![ComplexMatrix::identity(blocks).kron(&x)];
        let basis = commutant_basis(&star_closure(&gens)).unwrap();
        prop_assert_eq!(basis.len(), blocks * blocks);
        let comm = |m: &ComplexMatrix| gens.iter().chain(std::iter::once(&gens[0].adjoint())).all(|g| m.commutator(g).unwrap().max_norm() <= 1e-8);
        prop_assert!(comm(&ComplexMatrix::identity(n * blocks)));
        for c in &basis {
            prop_assert!(comm(&c.adjoint()));
            for d in &basis {
                prop_assert!(comm(&(c * d)));
            }
        }
        // Double commutant contains the generators.
        let double = commutant_basis(&basis).unwrap();
        let (_, res) = opkit::linalg::expand_in_basis(&double, &gens[0]).unwrap();
        prop_assert!(res <= 1e-8);
    }

    #[test]
    fn kraus_choi_round_trip(seed in any::<u64>(), n in 2usize..4, m in 2usize..4, count in 1usize..4) {
        // Σ K_i K_i* = I_m needs total rank at least m.
        let count = count.max(m.div_ceil(n));
        let mut r = rng(seed);
        let ops = random_unital_kraus(&mut r, n, m, count);
        let map = CPMap::from_kraus(ops.clone()).unwrap();
        let choi = choi_of(&map);
        let tol = Tolerance::default();
        let back = CPMap::from_kraus(kraus_from_choi(&choi, n, tol).unwrap()).unwrap();
        prop_assert!(back.distance(&map).unwrap() <= 1e-8);
        let via_super = CPMap::from_super(map.to_super(), n, m).unwrap();
        prop_assert!(via_super.distance(&map).unwrap() <= 1e-10);
        let dil = StinespringDilation::from_kraus(&ops).unwrap();
        prop_assert!(dil.isometry_residual() <= 1e-9);
        let rho = random_density(&mut r, n, n);
        prop_assert!(dil.compress(&rho).max_dist(&map.apply(&rho).unwrap()) <= 1e-10);
    }

    #[test]
    fn cyclic_induction_is_a_representation(nk in 1usize..5, m in 1usize..4, l in 0usize..4) {
        // ℤ_{m·k} ⊃ m·ℤ_{m·k} ≅ ℤ_k with character χ_l.
        let k = nk;
        let n = m * k;
        let g = Arc::new(FiniteGroup::cyclic(n).unwrap());
        let elements: Vec<usize> = (0..k).map(|j| j * m).collect();
        let matrices = (0..k).map(|j| ComplexMatrix::diag(&[C64::from_polar(1.0, 2.0 * std::f64::consts::PI * ((j * l) % k) as f64 / k as f64)])).collect();
        let ind = induce(g, &SubgroupRep { elements, matrices }, Tolerance::default()).unwrap();
        prop_assert_eq!(ind.rep.dim, m);
        prop_assert!(ind.rep.homomorphism_residual() <= 1e-12);
        prop_assert!(ind.covariance_residual() <= 1e-12);
    }

    #[test]
    fn dft_is_unitary(seed in any::<u64>(), n in 1usize..64) {
        let f = random_vector(&mut rng(seed), n);
        let u = dft_cyclic(&f);
        prop_assert!((norm(&u) - norm(&f)).abs() <= 1e-12 * norm(&f).max(1.0));
    }

    #[test]
    fn gelfand_transform_is_a_contractive_character(seed in any::<u64>(), s1 in -4i64..4, s2 in -4i64..4, k in 0usize..16) {
        let mut r = rng(seed);
        let a = Sequence::new(s1, random_vector(&mut r, 4));
        let b = Sequence::new(s2, random_vector(&mut r, 3));
        let z = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 16.0);
        let lhs = gelfand_l1(&a.convolve(&b), z).unwrap();
        let rhs = gelfand_l1(&a, z).unwrap() * gelfand_l1(&b, z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        prop_assert!(gelfand_l1(&a, z).unwrap().norm() <= a.l1_norm() * (1.0 + 1e-12));
    }

    #[test]
    fn cayley_transform_is_unitary(seed in any::<u64>(), n in 1usize..10) {
        let h = random_hermitian(&mut rng(seed), n);
        let c = cayley_matrix(&h).unwrap();
        prop_assert!(c.is_unitary(Tolerance::new(1e-10, 1e-10).unwrap()).unwrap());
    }

    #[test]
    fn haar_parseval_is_exact(j in 0u32..4, vals in proptest::collection::vec(-20i128..20, 16)) {
        let cells = 1usize << (j + 1);
        let f = DyadicStep { values: vals[..cells].iter().map(|&v| Q::new(v, 7)).collect() };
        prop_assert!(parseval_defect(&haar_basis(j).unwrap(), &f).is_zero());
    }
}
