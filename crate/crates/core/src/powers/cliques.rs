//! Maximal clique enumeration over a dense adjacency bitset.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(n: usize) -> Self {
        BitSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::new(n);
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn difference(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + bit)
            })
        })
    }
}

/// Bron–Kerbosch with Tomita pivoting. `neighbors[v]` must exclude `v`.
/// Each clique is returned sorted; the list is sorted lexicographically.
pub(crate) fn maximal_cliques(neighbors: &[BitSet], cap: usize) -> Result<Vec<Vec<usize>>> {
    let n = neighbors.len();
    let mut out = Vec::new();
    if n == 0 {
        return Ok(out);
    }
    let mut r = Vec::new();
    expand(neighbors, &mut r, BitSet::full(n), BitSet::new(n), &mut out, cap)?;
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    Ok(out)
}

fn expand(
    nbrs: &[BitSet],
    r: &mut Vec<usize>,
    mut p: BitSet,
    mut x: BitSet,
    out: &mut Vec<Vec<usize>>,
    cap: usize,
) -> Result<()> {
    if p.is_empty() {
        if x.is_empty() {
            if out.len() >= cap {
                return Err(Error::CombinatorialBlowup { cap });
            }
            out.push(r.clone());
        }
        return Ok(());
    }
    // pivot: vertex of P ∪ X with the most neighbours in P
    let pivot = p
        .iter()
        .chain(x.iter())
        .max_by_key(|&u| (nbrs[u].intersection(&p).len(), std::cmp::Reverse(u)))
        .expect("P is nonempty");
    let candidates: Vec<usize> = p.difference(&nbrs[pivot]).iter().collect();
    for v in candidates {
        r.push(v);
        expand(nbrs, r, p.intersection(&nbrs[v]), x.intersection(&nbrs[v]), out, cap)?;
        r.pop();
        p.remove(v);
        x.insert(v);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Vec<BitSet> {
        let mut g = vec![BitSet::new(n); n];
        for &(a, b) in edges {
            g[a].insert(b);
            g[b].insert(a);
        }
        g
    }

    #[test]
    fn small_graph() {
        // 0-1-2 triangle, 2-3 edge, isolated 4
        let g = graph(5, &[(0, 1), (0, 2), (1, 2), (2, 3)]);
        let c = maximal_cliques(&g, 100).unwrap();
        assert_eq!(c, vec![vec![0, 1, 2], vec![2, 3], vec![4]]);
    }

    #[test]
    fn cap_is_enforced() {
        let g = graph(4, &[]);
        assert_eq!(maximal_cliques(&g, 3), Err(Error::CombinatorialBlowup { cap: 3 }));
        assert_eq!(maximal_cliques(&g, 4).unwrap().len(), 4);
    }

    #[test]
    fn bitset_ops() {
        let mut a = BitSet::new(130);
        a.insert(0);
        a.insert(64);
        a.insert(129);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(a.len(), 3);
        a.remove(64);
        assert!(!a.contains(64));
    }
}
