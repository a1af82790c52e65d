//! Intensive relatedness: a potentia-preserving isomorphism between the
//! graphs of two PSAs, found by pruned backtracking.

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::psa::Psa;

#[derive(Debug, Clone, PartialEq)]
pub struct IntensiveWitness {
    /// `mapping[p]` is the node of the second graph matched to node `p`.
    pub mapping: Vec<usize>,
    pub max_potentia_gap: f64,
}

/// The pruning stage at which an isomorphism was ruled out.
#[derive(Debug, Clone, PartialEq)]
pub enum NotRelatedReason {
    SizeMismatch { left: usize, right: usize },
    EdgeCountMismatch { left: usize, right: usize },
    PotentiaMultiset { max_gap: f64 },
    DegreeSequence,
    NoCandidates { node: usize },
    NoIsomorphism { branches: u64 },
}

impl NotRelatedReason {
    pub fn stage(&self) -> &'static str {
        match self {
            NotRelatedReason::SizeMismatch { .. } => "size_mismatch",
            NotRelatedReason::EdgeCountMismatch { .. } => "edge_count",
            NotRelatedReason::PotentiaMultiset { .. } => "potentia_multiset",
            NotRelatedReason::DegreeSequence => "degree_sequence",
            NotRelatedReason::NoCandidates { .. } => "candidates",
            NotRelatedReason::NoIsomorphism { .. } => "backtracking",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum IntensiveOutcome {
    Related(IntensiveWitness),
    NotRelated(NotRelatedReason),
}

impl IntensiveOutcome {
    pub fn is_related(&self) -> bool {
        matches!(self, IntensiveOutcome::Related(_))
    }
}

struct Matcher<'a> {
    left: &'a Psa,
    right: &'a Psa,
    candidates: Vec<Vec<usize>>,
    order: Vec<usize>,
    budget: u64,
    branches: u64,
}

impl Matcher<'_> {
    fn extend(&mut self, depth: usize, map: &mut [Option<usize>], used: &mut [bool]) -> Result<bool> {
        let Some(&u) = self.order.get(depth) else {
            return Ok(true);
        };
        let g1 = self.left.graph();
        let g2 = self.right.graph();
        for ci in 0..self.candidates[u].len() {
            let v = self.candidates[u][ci];
            if used[v] {
                continue;
            }
            self.branches += 1;
            if self.branches > self.budget {
                return Err(Error::SearchBudget { budget: self.budget });
            }
            let consistent = self.order[..depth].iter().all(|&w| {
                let mw = map[w].expect("earlier nodes are mapped");
                g1.adjacent(u, w) == g2.adjacent(v, mw)
            });
            if !consistent {
                continue;
            }
            map[u] = Some(v);
            used[v] = true;
            if self.extend(depth + 1, map, used)? {
                return Ok(true);
            }
            map[u] = None;
            used[v] = false;
        }
        Ok(false)
    }
}

/// Visit order: repeatedly take the unplaced node with the most placed
/// neighbours, then the fewest candidates, then the smallest id.
fn search_order(psa: &Psa, candidates: &[Vec<usize>]) -> Vec<usize> {
    let g = psa.graph();
    let n = g.len();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n)
            .filter(|&u| !placed[u])
            .min_by_key(|&u| {
                let anchored = order.iter().filter(|&&w| g.adjacent(u, w)).count();
                (std::cmp::Reverse(anchored), candidates[u].len(), u)
            })
            .expect("unplaced node remains");
        placed[next] = true;
        order.push(next);
    }
    order
}

fn sorted(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Searches for a graph isomorphism τ: G₁ → G₂ with Ψ₂(τ(P)) = Ψ₁(P)
/// within `tol.intensive`.
pub fn intensive_related(psa1: &Psa, psa2: &Psa, tol: &Tolerances) -> Result<IntensiveOutcome> {
    let g1 = psa1.graph();
    let g2 = psa2.graph();
    let not = |r| Ok(IntensiveOutcome::NotRelated(r));
    if g1.len() != g2.len() {
        return not(NotRelatedReason::SizeMismatch {
            left: g1.len(),
            right: g2.len(),
        });
    }
    if g1.edge_count() != g2.edge_count() {
        return not(NotRelatedReason::EdgeCountMismatch {
            left: g1.edge_count(),
            right: g2.edge_count(),
        });
    }
    let s1 = sorted(psa1.potentia().iter().copied());
    let s2 = sorted(psa2.potentia().iter().copied());
    let multiset_gap = s1.iter().zip(&s2).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if multiset_gap > tol.intensive {
        return not(NotRelatedReason::PotentiaMultiset { max_gap: multiset_gap });
    }
    let mut d1: Vec<usize> = (0..g1.len()).map(|i| g1.degree(i)).collect();
    let mut d2: Vec<usize> = (0..g2.len()).map(|i| g2.degree(i)).collect();
    d1.sort_unstable();
    d2.sort_unstable();
    if d1 != d2 {
        return not(NotRelatedReason::DegreeSequence);
    }

    let n = g1.len();
    let mut candidates = Vec::with_capacity(n);
    for u in 0..n {
        let c: Vec<usize> = (0..n)
            .filter(|&v| {
                g1.degree(u) == g2.degree(v) && (psa1.get(u) - psa2.get(v)).abs() <= tol.intensive
            })
            .collect();
        if c.is_empty() {
            return not(NotRelatedReason::NoCandidates { node: u });
        }
        candidates.push(c);
    }
    let order = search_order(psa1, &candidates);
    let mut matcher = Matcher {
        left: psa1,
        right: psa2,
        candidates,
        order,
        budget: tol.iso_budget,
        branches: 0,
    };
    let mut map = vec![None; n];
    let mut used = vec![false; n];
    if !matcher.extend(0, &mut map, &mut used)? {
        return not(NotRelatedReason::NoIsomorphism {
            branches: matcher.branches,
        });
    }
    let mapping: Vec<usize> = map.into_iter().map(|m| m.expect("complete mapping")).collect();
    let max_potentia_gap = mapping
        .iter()
        .enumerate()
        .map(|(u, &v)| (psa1.get(u) - psa2.get(v)).abs())
        .fold(0.0, f64::max);
    Ok(IntensiveOutcome::Related(IntensiveWitness {
        mapping,
        max_potentia_gap,
    }))
}
