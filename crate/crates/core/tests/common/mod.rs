//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use psakit::linalg::ComplexMatrix;
use psakit::powers::PowerGraph;
use psakit::Tolerances;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Maximal cliques by checking every subset; sorted, each clique sorted.
pub fn brute_maximal_cliques(n: usize, adj: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    assert!(n <= 20);
    let is_clique = |mask: u32| {
        (0..n).all(|i| mask & (1 << i) == 0 || (0..n).all(|j| mask & (1 << j) == 0 || i == j || adj(i, j)))
    };
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        if !is_clique(mask) {
            continue;
        }
        let extendable = (0..n).any(|v| mask & (1 << v) == 0 && is_clique(mask | (1 << v)));
        if !extendable {
            out.push((0..n).filter(|&i| mask & (1 << i) != 0).collect::<Vec<_>>());
        }
    }
    out.sort();
    out
}

/// Whether some 0/1 assignment puts exactly one true node in every
/// identity-resolving maximal clique and never marks two orthogonal
/// nodes true, by enumerating all 2^n assignments.
pub fn brute_valuation_exists(g: &PowerGraph, tol: &Tolerances) -> bool {
    let n = g.len();
    assert!(n <= 20);
    let d = g.dim();
    let cliques = brute_maximal_cliques(n, |i, j| g.adjacent(i, j));
    let resolving: Vec<u32> = cliques
        .iter()
        .filter(|c| {
            let mut sum = ComplexMatrix::zeros(d, d);
            for &i in c.iter() {
                sum = &sum + g.power(i).projector.matrix();
            }
            (&sum - &ComplexMatrix::identity(d)).frobenius_norm() <= d as f64 * tol.num
        })
        .map(|c| c.iter().fold(0u32, |m, &i| m | (1 << i)))
        .collect();
    let mut orthogonal = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let p = g.power(i).projector.matrix();
            let q = g.power(j).projector.matrix();
            if (p * q).frobenius_norm() <= tol.num {
                orthogonal.push((1u32 << i) | (1u32 << j));
            }
        }
    }
    (0u32..(1 << n)).any(|a| {
        resolving.iter().all(|&c| (a & c).count_ones() == 1) && orthogonal.iter().all(|&o| a & o != o)
    })
}

/// A graph on `n` nodes with random adjacency (edge probability `p`),
/// built from commuting projectors and then rewired.
pub fn random_graph(n: usize, p: f64, seed: u64) -> PowerGraph {
    let tol = Tolerances::default();
    let basis = psakit::powers::bases::computational("r", n);
    let mut g = psakit::powers::generate_graph_from_bases(&[basis], &tol).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..n {
        for j in i + 1..n {
            g.corrupt_adjacency(i, j, rng.random::<f64>() < p);
        }
    }
    g
}
