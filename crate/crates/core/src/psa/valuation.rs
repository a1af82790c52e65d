//! Exhaustive search for binary (0/1) valuations of a power graph.
//!
//! Constraints: exactly one true node in every identity-resolving maximal
//! context, and never two true nodes that are orthogonal (PQ = 0).

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::powers::{maximal_contexts, Context, PowerGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryValuation {
    /// 0/1 per node id.
    pub assignment: Vec<u8>,
    /// The identity-resolving maximal contexts the valuation satisfies.
    pub scope: Vec<Context>,
    pub branches_explored: u64,
}

impl BinaryValuation {
    /// Checks the exactly-one rule on every context of the scope.
    pub fn is_valid(&self) -> bool {
        self.scope.iter().all(|c| {
            c.node_ids.iter().filter(|&&i| self.assignment[i] == 1).count() == 1
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonexistenceCertificate {
    pub branches_explored: u64,
    pub constrained_contexts: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValuationSearch {
    Found(BinaryValuation),
    Nonexistent(NonexistenceCertificate),
}

impl ValuationSearch {
    pub fn exists(&self) -> bool {
        matches!(self, ValuationSearch::Found(_))
    }

    pub fn branches_explored(&self) -> u64 {
        match self {
            ValuationSearch::Found(v) => v.branches_explored,
            ValuationSearch::Nonexistent(c) => c.branches_explored,
        }
    }
}

struct Search<'a> {
    contexts: &'a [Vec<usize>],
    /// contexts containing each node
    member_of: Vec<Vec<usize>>,
    /// orthogonal neighbours of each node
    exclusive: Vec<Vec<usize>>,
    budget: u64,
    branches: u64,
}

type Assignment = Vec<Option<bool>>;

impl Search<'_> {
    /// Sets `node` and propagates; `false` on conflict.
    fn assign(&self, a: &mut Assignment, node: usize, value: bool) -> bool {
        let mut queue = vec![(node, value)];
        while let Some((n, v)) = queue.pop() {
            match a[n] {
                Some(cur) if cur == v => continue,
                Some(_) => return false,
                None => a[n] = Some(v),
            }
            if v {
                queue.extend(self.exclusive[n].iter().map(|&m| (m, false)));
                for &c in &self.member_of[n] {
                    queue.extend(self.contexts[c].iter().filter(|&&m| m != n).map(|&m| (m, false)));
                }
            } else {
                for &c in &self.member_of[n] {
                    let ctx = &self.contexts[c];
                    if ctx.iter().any(|&m| a[m] == Some(true)) {
                        continue;
                    }
                    let open: Vec<usize> = ctx.iter().copied().filter(|&m| a[m].is_none()).collect();
                    match open.len() {
                        0 => return false,
                        1 => queue.push((open[0], true)),
                        _ => {}
                    }
                }
            }
        }
        true
    }

    fn run(&mut self, a: Assignment) -> Result<Option<Assignment>> {
        let next = self
            .contexts
            .iter()
            .find(|c| !c.iter().any(|&m| a[m] == Some(true)));
        let Some(ctx) = next else {
            return Ok(Some(a));
        };
        for &node in ctx.iter().filter(|&&m| a[m].is_none()) {
            self.branches += 1;
            if self.branches > self.budget {
                return Err(Error::SearchBudget { budget: self.budget });
            }
            let mut trial = a.clone();
            if self.assign(&mut trial, node, true) {
                if let Some(done) = self.run(trial)? {
                    return Ok(Some(done));
                }
            }
        }
        Ok(None)
    }
}

/// Searches for a global binary valuation, trying nodes in ascending id
/// order inside contexts taken in sorted order.
pub fn search_binary_valuation(g: &PowerGraph, tol: &Tolerances) -> Result<ValuationSearch> {
    let scope: Vec<Context> = maximal_contexts(g, tol)?
        .into_iter()
        .filter(|c| c.resolves_identity)
        .collect();
    let contexts: Vec<Vec<usize>> = scope.iter().map(|c| c.node_ids.clone()).collect();
    let n = g.len();
    let mut member_of = vec![Vec::new(); n];
    for (k, c) in contexts.iter().enumerate() {
        for &i in c {
            member_of[i].push(k);
        }
    }
    let mut exclusive = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if g.adjacent(i, j) {
                let pi = g.power(i).projector.matrix();
                let pj = g.power(j).projector.matrix();
                if (pi * pj).frobenius_norm() <= tol.comm {
                    exclusive[i].push(j);
                    exclusive[j].push(i);
                }
            }
        }
    }
    let mut search = Search {
        contexts: &contexts,
        member_of,
        exclusive,
        budget: tol.search_budget,
        branches: 0,
    };
    match search.run(vec![None; n])? {
        Some(a) => Ok(ValuationSearch::Found(BinaryValuation {
            assignment: a.into_iter().map(|v| u8::from(v == Some(true))).collect(),
            scope,
            branches_explored: search.branches,
        })),
        None => Ok(ValuationSearch::Nonexistent(NonexistenceCertificate {
            branches_explored: search.branches,
            constrained_contexts: contexts.len(),
        })),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::powers::bases::{cabello_bases, computational, qubit_x};
    use crate::powers::generate_graph_from_bases;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn single_context_takes_first_node() {
        let g = generate_graph_from_bases(&[computational("z", 3)], &tol()).unwrap();
        let ValuationSearch::Found(v) = search_binary_valuation(&g, &tol()).unwrap() else {
            panic!("expected a valuation");
        };
        assert_eq!(v.assignment, vec![1, 0, 0]);
        assert!(v.is_valid());
    }

    #[test]
    fn independent_contexts() {
        let g = generate_graph_from_bases(&[computational("z", 2), qubit_x()], &tol()).unwrap();
        let ValuationSearch::Found(v) = search_binary_valuation(&g, &tol()).unwrap() else {
            panic!("expected a valuation");
        };
        assert_eq!(v.assignment, vec![1, 0, 1, 0]);
    }

    #[test]
    fn cabello_has_no_valuation() {
        let g = generate_graph_from_bases(&cabello_bases(), &tol()).unwrap();
        let r = search_binary_valuation(&g, &tol()).unwrap();
        let ValuationSearch::Nonexistent(cert) = r else {
            panic!("Cabello set admitted a valuation");
        };
        assert_eq!(cert.constrained_contexts, 9);
        assert!(cert.branches_explored > 0);
    }

    #[test]
    fn budget_is_enforced() {
        let g = generate_graph_from_bases(&cabello_bases(), &tol()).unwrap();
        let tight = Tolerances {
            search_budget: 2,
            ..tol()
        };
        assert_eq!(search_binary_valuation(&g, &tight), Err(Error::SearchBudget { budget: 2 }));
    }
}
