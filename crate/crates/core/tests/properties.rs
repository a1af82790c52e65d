mod common;

use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;

use psakit::linalg::{
    commutator_norm, eigen_hermitian, partial_trace, tensor_density, tensor_product, ComplexMatrix, DensityMatrix,
    HermitianOperator, Side,
};
use psakit::powers::{bases, generate_graph_from_bases, maximal_contexts};
use psakit::psa::{density_from_psa, psa_from_density, search_binary_valuation};
use psakit::relations::{classify, joint_outcome_distribution, ContextPair, JointScenario, RelationMode};
use psakit::sampler::{empirical_verdict, run_experiment};
use psakit::scenario::presets::{random_density, random_pure, random_unitary};
use psakit::Tolerances;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn hermitian(d: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(-1.0f64..1.0, 2 * d * d).prop_map(move |xs| {
        let mut m = ComplexMatrix::zeros(d, d);
        for r in 0..d {
            for c in 0..d {
                m[(r, c)] = Complex64::new(xs[2 * (r * d + c)], xs[2 * (r * d + c) + 1]);
            }
        }
        (&m + &m.adjoint()).scale(Complex64::new(0.5, 0.0))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn commutator_symmetric_and_zero_on_polynomials(a in hermitian(3), b in hermitian(3)) {
        let ha = HermitianOperator::new(a.clone(), &tol()).unwrap();
        let hb = HermitianOperator::new(b, &tol()).unwrap();
        let ab = commutator_norm(&ha, &hb).unwrap();
        let ba = commutator_norm(&hb, &ha).unwrap();
        prop_assert!((ab - ba).abs() < 1e-12);
        // A commutes with A² + 2A
        let p = &(&a * &a) + &a.scale(Complex64::new(2.0, 0.0));
        let hp = HermitianOperator::new(p, &tol()).unwrap();
        prop_assert!(commutator_norm(&ha, &hp).unwrap() < 1e-12);
    }

    #[test]
    fn eigen_decomposition_reconstructs(a in hermitian(4)) {
        let h = HermitianOperator::new(a.clone(), &tol()).unwrap();
        let (vals, vecs) = eigen_hermitian(&h).unwrap();
        prop_assert!(vals.windows(2).all(|w| w[0] >= w[1]));
        let mut rebuilt = ComplexMatrix::zeros(4, 4);
        for (k, v) in vals.iter().enumerate() {
            let col = vecs.column(k);
            rebuilt = &rebuilt + &ComplexMatrix::outer(&col, &col).scale(Complex64::new(*v, 0.0));
        }
        prop_assert!(rebuilt.distance(&a).unwrap() < 1e-10);
    }

    #[test]
    fn partial_trace_of_product(s1 in 0u64..1000, s2 in 0u64..1000, da in 2usize..4, db in 2usize..4) {
        let ra = random_density(da, s1, &tol()).unwrap();
        let rb = random_density(db, s2, &tol()).unwrap();
        let joint = tensor_density(&ra, &rb, &tol()).unwrap();
        let back_a = partial_trace(&joint, (da, db), Side::A, &tol()).unwrap();
        let back_b = partial_trace(&joint, (da, db), Side::B, &tol()).unwrap();
        prop_assert!(back_a.matrix().distance(ra.matrix()).unwrap() < 1e-12);
        prop_assert!(back_b.matrix().distance(rb.matrix()).unwrap() < 1e-12);
    }

    #[test]
    fn maximal_cliques_match_exhaustive(n in 1usize..=16, p in 0.1f64..0.9, seed in any::<u64>()) {
        let g = common::random_graph(n, p, seed);
        let fast: Vec<Vec<usize>> = maximal_contexts(&g, &tol()).unwrap().into_iter().map(|c| c.node_ids).collect();
        prop_assert_eq!(fast, common::brute_maximal_cliques(n, |i, j| g.adjacent(i, j)));
    }

    #[test]
    fn valuation_search_matches_exhaustive(seed in 0u64..500, k in 1usize..4) {
        // k random qubit bases plus Z: at most 8 nodes
        let mut bs = vec![bases::computational("z", 2)];
        for i in 0..k {
            bs.push(bases::computational(&format!("u{i}"), 2).transformed(&random_unitary(2, seed * 7 + i as u64)).unwrap());
        }
        let g = generate_graph_from_bases(&bs, &tol()).unwrap();
        let search = search_binary_valuation(&g, &tol()).unwrap();
        prop_assert_eq!(search.exists(), common::brute_valuation_exists(&g, &tol()));
    }
}

#[test]
fn context_normalization_over_random_states() {
    for (i, d) in (0..200).map(|i| (i, 2 + i % 2)) {
        let rho = random_density(d, 5000 + i as u64, &tol()).unwrap();
        let g = Arc::new(generate_graph_from_bases(&bases::mutually_unbiased(d).unwrap(), &tol()).unwrap());
        let psa = psa_from_density(&rho, g.clone(), &tol()).unwrap();
        for c in maximal_contexts(&g, &tol()).unwrap().iter().filter(|c| c.resolves_identity) {
            let total: f64 = c.node_ids.iter().map(|&n| psa.get(n)).sum();
            assert!((total - 1.0).abs() <= tol().num, "context sum {total}");
        }
    }
}

#[test]
fn reconstruction_round_trip_with_mub_graphs() {
    for i in 0..100u64 {
        let d = if i % 2 == 0 { 2 } else { 3 };
        let rho = random_density(d, 9000 + i, &tol()).unwrap();
        let g = Arc::new(generate_graph_from_bases(&bases::mutually_unbiased(d).unwrap(), &tol()).unwrap());
        let psa = psa_from_density(&rho, g, &tol()).unwrap();
        let back = density_from_psa(&psa, d, &tol()).unwrap();
        assert!(back.matrix().distance(rho.matrix()).unwrap() <= 1e-8);
    }
}

fn zx_scenario(rho: DensityMatrix, u: &ComplexMatrix, v: &ComplexMatrix) -> JointScenario {
    let local = |w: &ComplexMatrix| {
        let bs: Vec<_> = [bases::computational("z", 2), bases::qubit_x()]
            .iter()
            .map(|b| b.transformed(w).unwrap())
            .collect();
        Arc::new(generate_graph_from_bases(&bs, &tol()).unwrap())
    };
    let (ga, gb) = (local(u), local(v));
    let pairs = ["z", "x"]
        .iter()
        .map(|n| ContextPair {
            a: ga.named_context(n).unwrap().clone(),
            b: gb.named_context(n).unwrap().clone(),
            matching: vec![0, 1],
        })
        .collect();
    JointScenario::new(rho, (2, 2), ga, gb, pairs, RelationMode::DesignatedPairs).unwrap()
}

#[test]
fn local_unitary_covariance() {
    let id = ComplexMatrix::identity(2);
    for seed in 0..30u64 {
        let rho = if seed % 2 == 0 {
            DensityMatrix::pure(&random_pure(4, seed), &tol()).unwrap()
        } else {
            random_density(4, seed, &tol()).unwrap()
        };
        let (u, v) = (random_unitary(2, 100 + seed), random_unitary(2, 200 + seed));
        let uv = tensor_product(&u, &v, 64).unwrap();
        let rotated = DensityMatrix::from_matrix(&(&uv * rho.matrix()) * &uv.adjoint(), &tol()).unwrap();
        let before = classify(&zx_scenario(rho, &id, &id), &tol()).unwrap();
        let after = classify(&zx_scenario(rotated, &u, &v), &tol()).unwrap();
        assert_eq!(before.classification, after.classification, "seed {seed}");
        for (x, y) in before.psa_a.potentia().iter().zip(after.psa_a.potentia()) {
            assert!((x - y).abs() < 1e-9);
        }
    }
}

#[test]
fn marginals_match_local_potentia() {
    for seed in 0..20u64 {
        let rho = random_density(4, 300 + seed, &tol()).unwrap();
        let id = ComplexMatrix::identity(2);
        let s = zx_scenario(rho, &id, &id);
        let (pa, pb) = s.local_psas(&tol()).unwrap();
        for p in &s.context_pairs {
            let t = joint_outcome_distribution(&s, &p.a, &p.b, &tol()).unwrap();
            for (i, &node) in p.a.node_ids.iter().enumerate() {
                assert!((t[i].iter().sum::<f64>() - pa.get(node)).abs() < 1e-12);
            }
            for (j, &node) in p.b.node_ids.iter().enumerate() {
                assert!((t.iter().map(|r| r[j]).sum::<f64>() - pb.get(node)).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn sampler_tv_shrinks_with_shots() {
    let rho = random_density(4, 77, &tol()).unwrap();
    let id = ComplexMatrix::identity(2);
    let s = zx_scenario(rho, &id, &id);
    let median_tv = |shots: u64| {
        let mut tvs: Vec<f64> = (0..20u64)
            .map(|seed| {
                let run = run_experiment(&s, shots, seed, &tol()).unwrap();
                empirical_verdict(&run, 0.01).unwrap().per_pair_tv[0]
            })
            .collect();
        tvs.sort_by(f64::total_cmp);
        (tvs[9] + tvs[10]) / 2.0
    };
    let m: Vec<f64> = [1_000, 10_000, 100_000].into_iter().map(median_tv).collect();
    assert!(m[0] >= m[1] && m[1] >= m[2], "median tv {m:?}");
}
