//! Graphs of powers: projectors as nodes, commutation as edges, and
//! contexts as complete subgraphs.

pub mod bases;
mod cliques;

use rayon::prelude::*;

pub use bases::Basis;
pub(crate) use cliques::BitSet;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{commutator_norm, ComplexMatrix, HermitianOperator};

/// A projector node of a [`PowerGraph`].
#[derive(Debug, Clone, PartialEq)]
pub struct Power {
    pub id: usize,
    pub projector: HermitianOperator,
    pub rank: usize,
    pub label: Option<String>,
}

/// A set of pairwise commuting powers. `node_ids` carries the outcome
/// order used when the context is measured: sorted for enumerated
/// contexts, basis-vector order for contexts generated from a basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Context {
    pub node_ids: Vec<usize>,
    pub is_maximal: bool,
    pub resolves_identity: bool,
}

impl Context {
    pub fn len(&self) -> usize {
        self.node_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.node_ids.is_empty()
    }

    pub fn sorted_ids(&self) -> Vec<usize> {
        let mut ids = self.node_ids.clone();
        ids.sort_unstable();
        ids
    }
}

/// A context generated from one named basis.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedContext {
    pub name: String,
    pub context: Context,
}

/// Finite graph of powers with a reflexive symmetric commutation relation.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerGraph {
    dim: usize,
    powers: Vec<Power>,
    adjacency: Vec<BitSet>,
    named: Vec<NamedContext>,
}

/// Checks idempotence and trace-rank agreement, returning the rank.
pub fn validate_projector(p: &HermitianOperator, index: usize, tol: &Tolerances) -> Result<usize> {
    let m = p.matrix();
    let idem = (&(m * m) - m).frobenius_norm();
    if idem > tol.proj {
        return Err(Error::InvalidPower {
            index,
            defect: idem,
            reason: "not idempotent".into(),
        });
    }
    let tr = m.trace().re;
    let rank = tr.round();
    if (tr - rank).abs() > tol.num || rank < 1.0 {
        return Err(Error::InvalidPower {
            index,
            defect: (tr - rank).abs(),
            reason: format!("trace {tr} is not a positive integer rank"),
        });
    }
    Ok(rank as usize)
}

/// Builds the commutation graph of `projectors`, merging duplicates.
pub fn build_power_graph(projectors: &[HermitianOperator], tol: &Tolerances) -> Result<PowerGraph> {
    let labeled = projectors.iter().map(|p| (p.clone(), None)).collect();
    Ok(PowerGraph::build(labeled, tol)?.0)
}

/// Graph over all rank-1 projectors of the given bases. Each basis also
/// becomes a [`NamedContext`] whose outcome order follows its vectors.
pub fn generate_graph_from_bases(bases: &[Basis], tol: &Tolerances) -> Result<PowerGraph> {
    if bases.is_empty() {
        return Err(Error::Dimension("at least one basis is required".into()));
    }
    let dim = bases[0].dim();
    let mut labeled = Vec::new();
    for (i, b) in bases.iter().enumerate() {
        b.validate(i, tol)?;
        if b.dim() != dim {
            return Err(Error::Dimension(format!(
                "basis {i} has dimension {}, expected {dim}",
                b.dim()
            )));
        }
        for (k, v) in b.vectors.iter().enumerate() {
            labeled.push((HermitianOperator::projector_onto(v)?, Some(format!("{}{}", b.name, k))));
        }
    }
    let (mut graph, node_of_input) = PowerGraph::build(labeled, tol)?;
    let mut offset = 0;
    let mut named = Vec::with_capacity(bases.len());
    for b in bases {
        let ids: Vec<usize> = node_of_input[offset..offset + b.vectors.len()].to_vec();
        offset += b.vectors.len();
        let context = graph.context(ids, tol)?;
        named.push(NamedContext {
            name: b.name.clone(),
            context,
        });
    }
    graph.named = named;
    Ok(graph)
}

impl PowerGraph {
    /// Builds the graph and returns, for every input, the node it became.
    pub fn build(
        labeled: Vec<(HermitianOperator, Option<String>)>,
        tol: &Tolerances,
    ) -> Result<(PowerGraph, Vec<usize>)> {
        let Some(first) = labeled.first() else {
            return Err(Error::Dimension("a power graph needs at least one projector".into()));
        };
        let dim = first.0.dim();
        if dim > tol.max_dim {
            return Err(Error::Dimension(format!("dimension {dim} exceeds max_dim {}", tol.max_dim)));
        }
        let mut powers: Vec<Power> = Vec::new();
        let mut node_of_input = Vec::with_capacity(labeled.len());
        for (index, (p, label)) in labeled.into_iter().enumerate() {
            if p.dim() != dim {
                return Err(Error::Dimension(format!(
                    "projector {index} has dimension {}, expected {dim}",
                    p.dim()
                )));
            }
            let rank = validate_projector(&p, index, tol)?;
            let existing = powers
                .iter()
                .find(|q| q.projector.matrix().distance(p.matrix()).is_ok_and(|d| d <= tol.num));
            match existing {
                Some(q) => node_of_input.push(q.id),
                None => {
                    let id = powers.len();
                    powers.push(Power {
                        id,
                        projector: p,
                        rank,
                        label,
                    });
                    node_of_input.push(id);
                }
            }
        }
        let n = powers.len();
        let rows: Vec<BitSet> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = BitSet::new(n);
                for j in 0..n {
                    let commute = i == j
                        || commutator_norm(&powers[i].projector, &powers[j].projector)
                            .is_ok_and(|c| c <= tol.comm);
                    if commute {
                        row.insert(j);
                    }
                }
                row
            })
            .collect();
        Ok((
            PowerGraph {
                dim,
                powers,
                adjacency: rows,
                named: Vec::new(),
            },
            node_of_input,
        ))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.powers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn powers(&self) -> &[Power] {
        &self.powers
    }

    pub fn power(&self, id: usize) -> &Power {
        &self.powers[id]
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].contains(j)
    }

    /// Number of neighbours excluding the loop.
    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len() - usize::from(self.adjacency[i].contains(i))
    }

    pub fn edge_count(&self) -> usize {
        (0..self.len()).map(|i| self.degree(i)).sum::<usize>() / 2
    }

    /// Contexts generated from named bases, in input order.
    pub fn named_contexts(&self) -> &[NamedContext] {
        &self.named
    }

    pub fn named_context(&self, name: &str) -> Option<&Context> {
        self.named.iter().find(|n| n.name == name).map(|n| &n.context)
    }

    /// Overwrites one adjacency bit (both directions). Only meant for
    /// building negative controls; the resulting graph may violate its
    /// commutation invariant.
    #[doc(hidden)]
    pub fn corrupt_adjacency(&mut self, i: usize, j: usize, value: bool) {
        for (a, b) in [(i, j), (j, i)] {
            if value {
                self.adjacency[a].insert(b);
            } else {
                self.adjacency[a].remove(b);
            }
        }
    }

    pub fn is_clique(&self, ids: &[usize]) -> bool {
        ids.iter()
            .all(|&a| a < self.len() && ids.iter().all(|&b| self.adjacent(a, b)))
    }

    /// ‖Σ P_i − I‖_F ≤ d · tol_num.
    pub fn resolves_identity(&self, ids: &[usize], tol: &Tolerances) -> bool {
        let mut sum = ComplexMatrix::zeros(self.dim, self.dim);
        for &i in ids {
            sum = &sum + self.powers[i].projector.matrix();
        }
        let defect = (&sum - &ComplexMatrix::identity(self.dim)).frobenius_norm();
        defect <= self.dim as f64 * tol.num
    }

    /// Wraps `ids` (kept in the given order) as a context after checking
    /// it is complete.
    pub fn context(&self, ids: Vec<usize>, tol: &Tolerances) -> Result<Context> {
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != ids.len() || !self.is_clique(&ids) {
            return Err(Error::Validation(format!("nodes {ids:?} do not form a context")));
        }
        let is_maximal = (0..self.len())
            .filter(|v| !sorted.contains(v))
            .all(|v| !ids.iter().all(|&u| self.adjacent(u, v)));
        let resolves_identity = self.resolves_identity(&ids, tol);
        Ok(Context {
            node_ids: ids,
            is_maximal,
            resolves_identity,
        })
    }

    pub(crate) fn neighbor_sets(&self) -> Vec<BitSet> {
        self.adjacency
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.remove(i);
                r
            })
            .collect()
    }
}

/// All maximal contexts (maximal cliques), sorted by node-id sequence.
pub fn maximal_contexts(g: &PowerGraph, tol: &Tolerances) -> Result<Vec<Context>> {
    let cliques = cliques::maximal_cliques(&g.neighbor_sets(), tol.clique_cap)?;
    Ok(cliques
        .into_iter()
        .map(|ids| {
            let resolves_identity = g.resolves_identity(&ids, tol);
            Context {
                node_ids: ids,
                is_maximal: true,
                resolves_identity,
            }
        })
        .collect())
}

/// Consistency self-check: the relation is reflexive and symmetric, and
/// every maximal context consists of pairwise commuting members of `g`.
pub fn contexts_contained_check(g: &PowerGraph, tol: &Tolerances) -> bool {
    let n = g.len();
    for i in 0..n {
        if !g.adjacent(i, i) || (0..n).any(|j| g.adjacent(i, j) != g.adjacent(j, i)) {
            return false;
        }
    }
    let Ok(contexts) = maximal_contexts(g, tol) else {
        return false;
    };
    contexts.iter().all(|c| {
        c.node_ids.iter().enumerate().all(|(k, &a)| {
            c.node_ids[k + 1..].iter().all(|&b| {
                commutator_norm(&g.power(a).projector, &g.power(b).projector).is_ok_and(|x| x <= tol.comm)
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::bases::*;
    use super::*;
    use crate::linalg::{ONE, ZERO};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn zx_graph() -> PowerGraph {
        generate_graph_from_bases(&[computational("z", 2), qubit_x()], &tol()).unwrap()
    }

    #[test]
    fn orthogonal_pair() {
        let g = build_power_graph(
            &[
                HermitianOperator::projector_onto(&[ONE, ZERO]).unwrap(),
                HermitianOperator::projector_onto(&[ZERO, ONE]).unwrap(),
            ],
            &tol(),
        )
        .unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.edge_count(), 1);
        assert!(g.adjacent(0, 0) && g.adjacent(1, 1));
    }

    #[test]
    fn z_x_qubit_graph() {
        let g = zx_graph();
        assert_eq!(g.len(), 4);
        // z0=0, z1=1, x0=2, x1=3; edges only inside each pair
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(g.adjacent(i, j), i == j || i / 2 == j / 2, "pair ({i},{j})");
            }
        }
        let ctx = maximal_contexts(&g, &tol()).unwrap();
        assert_eq!(ctx.iter().map(|c| c.node_ids.clone()).collect::<Vec<_>>(), vec![vec![0, 1], vec![2, 3]]);
        assert!(ctx.iter().all(|c| c.is_maximal && c.resolves_identity));
        assert!(contexts_contained_check(&g, &tol()));
    }

    #[test]
    fn single_basis_graph_is_complete() {
        let g = generate_graph_from_bases(&[computational("face", 6)], &tol()).unwrap();
        assert_eq!(g.edge_count(), 15);
        let ctx = maximal_contexts(&g, &tol()).unwrap();
        assert_eq!(ctx.len(), 1);
        assert_eq!(ctx[0].len(), 6);
        assert!(ctx[0].resolves_identity);
        assert_eq!(g.named_context("face").unwrap().node_ids, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn duplicates_are_merged() {
        let z = computational("z", 2);
        let g = generate_graph_from_bases(&[z.clone(), z.clone(), qubit_x()], &tol()).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g.named_context("x").unwrap().node_ids, vec![2, 3]);
        let again = generate_graph_from_bases(&[z.clone(), z, qubit_x()], &tol()).unwrap();
        assert_eq!(again.len(), g.len());
    }

    #[test]
    fn rejects_invalid_inputs() {
        let not_proj = HermitianOperator::new(ComplexMatrix::from_diagonal(&[0.5, 0.0]), &tol()).unwrap();
        let ok = HermitianOperator::projector_onto(&[ONE, ZERO]).unwrap();
        let err = build_power_graph(&[ok.clone(), not_proj], &tol()).unwrap_err();
        assert!(matches!(err, Error::InvalidPower { index: 1, .. }));
        let zero = HermitianOperator::new(ComplexMatrix::zeros(2, 2), &tol()).unwrap();
        assert!(matches!(build_power_graph(&[zero], &tol()), Err(Error::InvalidPower { index: 0, .. })));
        let big = HermitianOperator::identity(3);
        assert!(matches!(build_power_graph(&[ok, big], &tol()), Err(Error::Dimension(_))));
        assert!(build_power_graph(&[], &tol()).is_err());
        let bad = Basis::new("bad", vec![vec![ONE, ONE], vec![ONE, ZERO]]);
        assert!(matches!(
            generate_graph_from_bases(&[qubit_x(), bad], &tol()),
            Err(Error::InvalidBasis { index: 1, .. })
        ));
    }

    #[test]
    fn higher_rank_nodes_are_admitted() {
        let p = HermitianOperator::new(ComplexMatrix::from_diagonal(&[1.0, 1.0, 0.0]), &tol()).unwrap();
        let q = HermitianOperator::new(ComplexMatrix::from_diagonal(&[0.0, 0.0, 1.0]), &tol()).unwrap();
        let g = build_power_graph(&[p, q], &tol()).unwrap();
        assert_eq!(g.power(0).rank, 2);
        let ctx = maximal_contexts(&g, &tol()).unwrap();
        assert_eq!(ctx.len(), 1);
        assert!(ctx[0].resolves_identity);
    }

    #[test]
    fn corrupted_adjacency_fails_self_check() {
        let mut g = zx_graph();
        assert!(contexts_contained_check(&g, &tol()));
        g.corrupt_adjacency(0, 2, true);
        assert!(!contexts_contained_check(&g, &tol()));
    }

    #[test]
    fn context_constructor_checks_completeness() {
        let g = zx_graph();
        assert!(g.context(vec![0, 2], &tol()).is_err());
        let c = g.context(vec![1, 0], &tol()).unwrap();
        assert!(c.is_maximal && c.resolves_identity);
        let single = g.context(vec![0], &tol()).unwrap();
        assert!(!single.is_maximal && !single.resolves_identity);
    }
}
