//! Cross-module checks: each test ties two independent constructions
//! together through a unitary equivalence or a shared spectrum.

use std::sync::Arc;

use opkit::commutant::commutant;
use opkit::cpmaps::{dilation_equivalence, least_squares_intertwiner, stinespring, to_kraus, CPMap, StinespringDilation};
use opkit::gns::{gns_construct, is_pure, StarAlgebra, State};
use opkit::groups::{heisenberg_group, heisenberg_index, induce, SubgroupRep};
use opkit::matrix::{gram_schmidt, inner, normalized, InnerProduct};
use opkit::random::{random_density, random_unital_kraus, random_unitary, random_vector};
use opkit::unbounded::{oscillator_check, position_oscillator};
use opkit::{ComplexMatrix, Tolerance, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tol() -> Tolerance {
    Tolerance::default()
}

#[test]
fn gns_of_vector_state_is_the_defining_representation() {
    let n = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let v = normalized(&random_vector(&mut rng, n));
    let alg = StarAlgebra::full(n).unwrap();
    let s = State::vector_state(alg.clone(), &v, tol()).unwrap();
    let t = gns_construct(&s).unwrap();
    assert_eq!(t.rep_dim, n);
    // W π(b)Ω = b v for every basis element b.
    let x1 = ComplexMatrix::from_columns(&t.pi.iter().map(|p| p.apply(&t.omega).unwrap()).collect::<Vec<_>>()).unwrap();
    let x2 = ComplexMatrix::from_columns(&alg.basis().iter().map(|b| b.apply(&v).unwrap()).collect::<Vec<_>>()).unwrap();
    let (w, res) = least_squares_intertwiner(&x1, &x2).unwrap();
    assert!(res < 1e-9);
    assert!(w.is_unitary(tol()).unwrap());
    for (b, p) in alg.basis().iter().zip(&t.pi) {
        assert!((&w * p).max_dist(&(b * &w)) < 1e-9);
    }
    assert!(is_pure(&s).unwrap().pure);
}

#[test]
fn gns_of_faithful_state_has_multiplicity_n() {
    let n = 2;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let s = State::new(StarAlgebra::full(n).unwrap(), random_density(&mut rng, n, n), tol()).unwrap();
    let t = gns_construct(&s).unwrap();
    assert_eq!(t.rep_dim, n * n);
    let report = commutant(&t.pi).unwrap();
    assert_eq!(report.dimension, n * n);
    assert_eq!(report.matrix_block_size, Some(n));
    assert!(!report.is_abelian);
}

#[test]
fn dilations_of_one_map_are_unitarily_equivalent() {
    let (n, r) = (2, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let ops = random_unital_kraus(&mut rng, n, n, r);
    // K′_i = Σ_j u_ij K_j describes the same map.
    let u = random_unitary(&mut rng, r);
    let mixed: Vec<ComplexMatrix> = (0..r)
        .map(|i| (0..r).fold(ComplexMatrix::zeros(n, n), |acc, j| &acc + &ops[j].scale(u[(i, j)])))
        .collect();
    let d1 = StinespringDilation::from_kraus(&ops).unwrap();
    let d2 = StinespringDilation::from_kraus(&mixed).unwrap();
    let w = dilation_equivalence(&d1, &d2, Tolerance::new(1e-8, 1e-8).unwrap()).unwrap();
    assert!(w.is_unitary(Tolerance::new(1e-8, 1e-8).unwrap()).unwrap());
    // The canonical dilation of the same map uses the minimal number of Kraus operators.
    let map = CPMap::from_kraus(ops).unwrap();
    let canon = stinespring(&map, tol()).unwrap();
    assert_eq!(canon.rank, to_kraus(&map, tol()).unwrap().len());
    assert!(canon.isometry_residual() < 1e-9);
}

#[test]
fn hermite_functions_diagonalize_the_position_oscillator() {
    // Gram-Schmidt on x^k e^{−x²/2} produces the Hermite functions, whose
    // oscillator levels 2k+1 match the truncated P² + Q².
    let (m, half) = (1601, 10.0);
    let x: Vec<f64> = (0..m).map(|i| -half + 2.0 * half * i as f64 / (m - 1) as f64).collect();
    let h = x[1] - x[0];
    let mono: Vec<Vec<C64>> = (0..5).map(|k| x.iter().map(|&t| C64::new(t.powi(k) * (-t * t / 2.0).exp(), 0.0)).collect()).collect();
    let hermite = gram_schmidt(&mono, &InnerProduct::Weighted(vec![h; m])).unwrap();
    let op = position_oscillator(&x);
    let levels = oscillator_check(5).unwrap();
    for (k, v) in hermite.iter().enumerate() {
        let hv = op.apply(v).unwrap();
        let rayleigh = inner(v, &hv).re / inner(v, v).re;
        assert!((rayleigh - levels[k]).abs() < 1e-3, "level {k}: {rayleigh} vs {}", levels[k]);
    }
}

#[test]
fn schrodinger_representations_of_finite_heisenberg_group() {
    let p = 5;
    let g = Arc::new(heisenberg_group(p).unwrap());
    let center: Vec<usize> = (0..p).map(|c| heisenberg_index(p, 0, 0, c)).collect();
    let mut center_sorted = g.center();
    center_sorted.sort_unstable();
    assert_eq!(center_sorted, center);
    for h in 1..p {
        let elements: Vec<usize> = (0..p * p).map(|bc| heisenberg_index(p, 0, bc / p, bc % p)).collect();
        let matrices = (0..p * p)
            .map(|bc| ComplexMatrix::diag(&[C64::from_polar(1.0, 2.0 * std::f64::consts::PI * (h * (bc % p)) as f64 / p as f64)]))
            .collect();
        let ind = induce(g.clone(), &SubgroupRep { elements, matrices }, tol()).unwrap();
        assert_eq!(commutant(&ind.rep.matrices).unwrap().dimension, 1);
        // Character vanishes off the center and equals p·e^{2πihc/p} on it.
        let chi = ind.rep.character();
        for (el, z) in chi.iter().enumerate() {
            if let Some(c) = center.iter().position(|&x| x == el) {
                let want = C64::from_polar(p as f64, 2.0 * std::f64::consts::PI * (h * c) as f64 / p as f64);
                assert!((z - want).norm() < 1e-10);
            } else {
                assert!(z.norm() < 1e-10);
            }
        }
    }
}
