//! `(2,k)`-sparsity and tightness.
//!
//! A graph is `(2,k)`-sparse when every subgraph with at least one edge has
//! `|E(H)| <= 2|V(H)| - k`, and `(2,k)`-tight when it also has exactly
//! `2|V| - k` edges. The decision procedure is the `(2,k)` pebble game, valid
//! for `0 <= k < 4`; an exhaustive subset enumeration is kept as an oracle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

/// Largest graph accepted by [`is_sparse_bruteforce`].
pub const BRUTEFORCE_MAX_N: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsityVerdict {
    pub k: u8,
    pub sparse: bool,
    pub tight: bool,
    /// Vertex set of a violating subgraph, present iff not sparse.
    pub witness: Option<Vec<usize>>,
}

fn check_k(k: u8) -> Result<()> {
    if k <= 3 {
        Ok(())
    } else {
        Err(Error::InvalidK(k))
    }
}

fn has_tight_count(g: &SimpleGraph, k: u8) -> bool {
    g.m() as i64 == 2 * g.n() as i64 - k as i64
}

/// `2|V(H)| - |E(H)|` for the subgraph induced by `vertices`.
pub fn deficiency(g: &SimpleGraph, vertices: &[usize]) -> Result<i64> {
    if vertices.is_empty() {
        return Err(Error::EmptyVertexSet);
    }
    let mut sorted = vertices.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for &v in &sorted {
        g.check_vertex(v)?;
    }
    Ok(2 * sorted.len() as i64 - g.induced_edge_count(&sorted) as i64)
}

/// Pebble-game decision of `(2,k)`-sparsity.
pub fn is_sparse(g: &SimpleGraph, k: u8) -> Result<SparsityVerdict> {
    check_k(k)?;
    let mut game = PebbleGame::new(g.n(), k);
    for (u, v) in g.edges() {
        if !game.insert(u, v) {
            let witness = game.reach(&[u, v]);
            return Ok(SparsityVerdict {
                k,
                sparse: false,
                tight: false,
                witness: Some(witness),
            });
        }
    }
    Ok(SparsityVerdict {
        k,
        sparse: true,
        tight: has_tight_count(g, k),
        witness: None,
    })
}

/// Shorthand for `is_sparse(g, k)?.tight` with `k` assumed valid.
pub fn is_tight(g: &SimpleGraph, k: u8) -> bool {
    is_sparse(g, k).map(|v| v.tight).unwrap_or(false)
}

/// Exhaustive check over all vertex subsets.
pub fn is_sparse_bruteforce(g: &SimpleGraph, k: u8) -> Result<SparsityVerdict> {
    check_k(k)?;
    let n = g.n();
    if n > BRUTEFORCE_MAX_N {
        return Err(Error::TooLarge(n));
    }
    let masks: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |acc, &w| acc | (1 << w)))
        .collect();
    for subset in 1u32..(1u32 << n) {
        let size = subset.count_ones() as i64;
        let twice_edges: u32 = (0..n)
            .filter(|&v| subset & (1 << v) != 0)
            .map(|v| (masks[v] & subset).count_ones())
            .sum();
        let edges = (twice_edges / 2) as i64;
        if edges >= 1 && edges > 2 * size - k as i64 {
            let witness = (0..n).filter(|&v| subset & (1 << v) != 0).collect();
            return Ok(SparsityVerdict {
                k,
                sparse: false,
                tight: false,
                witness: Some(witness),
            });
        }
    }
    Ok(SparsityVerdict {
        k,
        sparse: true,
        tight: has_tight_count(g, k),
        witness: None,
    })
}

/// The `(2,l)` pebble game: two pebbles per vertex; an edge is accepted when
/// `l + 1` pebbles can be collected on its endpoints.
struct PebbleGame {
    pebbles: Vec<u8>,
    out: Vec<Vec<usize>>,
    need: u8,
}

impl PebbleGame {
    fn new(n: usize, l: u8) -> Self {
        Self {
            pebbles: vec![2; n],
            out: vec![Vec::new(); n],
            need: l + 1,
        }
    }

    fn insert(&mut self, u: usize, v: usize) -> bool {
        loop {
            if self.pebbles[u] + self.pebbles[v] >= self.need {
                if self.pebbles[u] > 0 {
                    self.pebbles[u] -= 1;
                    self.out[u].push(v);
                } else {
                    self.pebbles[v] -= 1;
                    self.out[v].push(u);
                }
                return true;
            }
            let gained = (self.pebbles[u] < 2 && self.fetch(u, v))
                || (self.pebbles[v] < 2 && self.fetch(v, u));
            if !gained {
                return false;
            }
        }
    }

    /// Moves a free pebble to `root` along a directed path avoiding `blocked`.
    fn fetch(&mut self, root: usize, blocked: usize) -> bool {
        let n = self.pebbles.len();
        let mut parent = vec![usize::MAX; n];
        parent[root] = root;
        parent[blocked] = blocked;
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for i in 0..self.out[x].len() {
                let y = self.out[x][i];
                if parent[y] != usize::MAX {
                    continue;
                }
                parent[y] = x;
                if self.pebbles[y] > 0 {
                    self.reverse_path(root, y, &parent);
                    return true;
                }
                stack.push(y);
            }
        }
        false
    }

    fn reverse_path(&mut self, root: usize, end: usize, parent: &[usize]) {
        self.pebbles[end] -= 1;
        self.pebbles[root] += 1;
        let mut y = end;
        while y != root {
            let x = parent[y];
            let pos = self.out[x].iter().position(|&t| t == y).expect("path edge");
            self.out[x].swap_remove(pos);
            self.out[y].push(x);
            y = x;
        }
    }

    fn reach(&self, roots: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.pebbles.len()];
        let mut stack = roots.to_vec();
        for &r in roots {
            seen[r] = true;
        }
        while let Some(x) = stack.pop() {
            for &y in &self.out[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..seen.len()).filter(|&v| seen[v]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn witness_violates(g: &SimpleGraph, k: u8, v: &SparsityVerdict) {
        let w = v.witness.as_ref().expect("witness");
        assert!(g.induced_edge_count(w) >= 1);
        assert!(deficiency(g, w).unwrap() < k as i64);
    }

    #[test]
    fn k4_is_22_tight_not_23_sparse() {
        let k4 = SimpleGraph::complete(4);
        let v = is_sparse(&k4, 2).unwrap();
        assert!(v.sparse && v.tight && v.witness.is_none());
        let v = is_sparse(&k4, 3).unwrap();
        assert!(!v.sparse && !v.tight);
        assert_eq!(v.witness.as_deref(), Some(&[0, 1, 2, 3][..]));
        witness_violates(&k4, 3, &v);
    }

    #[test]
    fn k5_minus_e_and_k5() {
        let v = is_sparse(&SimpleGraph::k5_minus_e(), 1).unwrap();
        assert!(v.sparse && v.tight);
        let k5 = SimpleGraph::complete(5);
        let v = is_sparse(&k5, 1).unwrap();
        assert!(!v.sparse);
        witness_violates(&k5, 1, &v);
    }

    #[test]
    fn bruteforce_examples() {
        let g = SimpleGraph::k4_join_k4();
        let v = is_sparse_bruteforce(&g, 1).unwrap();
        assert!(v.sparse && v.tight);
        let v = is_sparse_bruteforce(&g, 2).unwrap();
        assert!(!v.sparse);
        witness_violates(&g, 2, &v);

        let k1 = SimpleGraph::empty(1);
        for k in 0..=3 {
            let v = is_sparse_bruteforce(&k1, k).unwrap();
            assert!(v.sparse);
            assert_eq!(v.tight, k == 2);
            assert_eq!(is_sparse(&k1, k).unwrap(), v);
        }
    }

    #[test]
    fn bruteforce_size_guard() {
        let g = SimpleGraph::empty(BRUTEFORCE_MAX_N + 1);
        assert_eq!(is_sparse_bruteforce(&g, 1), Err(Error::TooLarge(15)));
        assert!(is_sparse_bruteforce(&SimpleGraph::empty(BRUTEFORCE_MAX_N), 1).is_ok());
    }

    #[test]
    fn k_out_of_range() {
        let g = SimpleGraph::complete(3);
        assert_eq!(is_sparse(&g, 4), Err(Error::InvalidK(4)));
        assert_eq!(is_sparse_bruteforce(&g, 7), Err(Error::InvalidK(7)));
    }

    #[test]
    fn deficiency_examples() {
        let g = SimpleGraph::k5_minus_e();
        assert_eq!(deficiency(&g, &[0, 1, 2, 3, 4]).unwrap(), 1);
        assert_eq!(deficiency(&g, &[3]).unwrap(), 2);
        assert_eq!(deficiency(&g, &[0, 1, 2, 3]).unwrap(), 2);
        assert_eq!(deficiency(&g, &[]), Err(Error::EmptyVertexSet));
    }

    #[test]
    fn k0_allows_disconnected_tight() {
        // Two disjoint K5: 20 = 2 * 10 edges, each K5 meeting the k=0 count exactly.
        let g = SimpleGraph::complete(5).disjoint_union(&SimpleGraph::complete(5));
        let v = is_sparse(&g, 0).unwrap();
        assert!(v.sparse && v.tight);
        assert_eq!(v, is_sparse_bruteforce(&g, 0).unwrap());
    }
}
