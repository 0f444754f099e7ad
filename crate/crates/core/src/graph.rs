//! Labeled simple undirected graphs on vertices `0..n`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simple undirected graph whose vertices are the labels `0..n`.
///
/// Equality is labeled equality: two graphs are equal iff they have the same
/// vertex count and the same edge set.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SimpleGraph {
    adj: Vec<BTreeSet<usize>>,
    m: usize,
}

/// Wire form: `{"n": 5, "edges": [[0,1], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl SimpleGraph {
    /// Graph with `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![BTreeSet::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.insert_unchecked(u, v);
            }
        }
        g
    }

    /// `K5` minus the edge `(3,4)`.
    pub fn k5_minus_e() -> Self {
        let mut g = Self::complete(5);
        g.remove_edge(3, 4).expect("edge of K5");
        g
    }

    /// Two copies of `K4` sharing the edge `(0,1)`: `{0,1,2,3}` and `{0,1,4,5}`.
    pub fn k4_join_k4() -> Self {
        let mut g = Self::complete(4);
        let a = g.add_vertex();
        let b = g.add_vertex();
        for (u, v) in [(0, a), (1, a), (0, b), (1, b), (a, b)] {
            g.insert_unchecked(u, v);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].contains(&v)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.range(u + 1..).map(move |&v| (u, v)))
    }

    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        self.edges().collect()
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            })
        }
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(BTreeSet::new());
        self.adj.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::Loop(u));
        }
        if self.has_edge(u, v) {
            return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.insert_unchecked(u, v);
        Ok(())
    }

    pub(crate) fn insert_unchecked(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        if self.adj[u].insert(v) {
            self.adj[v].insert(u);
            self.m += 1;
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if !self.has_edge(u, v) {
            return Err(Error::InvalidMove(format!("edge ({u}, {v}) not present")));
        }
        self.adj[u].remove(&v);
        self.adj[v].remove(&u);
        self.m -= 1;
        Ok(())
    }

    /// Deletes `v` and shifts every larger label down by one.
    pub fn remove_vertex(&self, v: usize) -> SimpleGraph {
        let keep: Vec<usize> = (0..self.n()).filter(|&x| x != v).collect();
        self.induced(&keep)
    }

    /// Subgraph induced by `vertices`, relabeled so that `vertices[i]` becomes `i`.
    pub fn induced(&self, vertices: &[usize]) -> SimpleGraph {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut g = SimpleGraph::empty(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = index[w];
                if j != usize::MAX && i < j {
                    g.insert_unchecked(i, j);
                }
            }
        }
        g
    }

    /// Number of edges with both endpoints in `vertices` (which must be distinct).
    pub fn induced_edge_count(&self, vertices: &[usize]) -> usize {
        let mut inside = vec![false; self.n()];
        for &v in vertices {
            inside[v] = true;
        }
        let twice: usize = vertices
            .iter()
            .map(|&v| self.adj[v].iter().filter(|&&w| inside[w]).count())
            .sum();
        twice / 2
    }

    /// Applies the permutation `perm`: vertex `i` gets label `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<SimpleGraph> {
        check_permutation(perm, self.n())?;
        let mut g = SimpleGraph::empty(self.n());
        for (u, v) in self.edges() {
            g.insert_unchecked(perm[u], perm[v]);
        }
        Ok(g)
    }

    /// Vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &SimpleGraph) -> SimpleGraph {
        let offset = self.n();
        let mut g = self.clone();
        for _ in 0..other.n() {
            g.add_vertex();
        }
        for (u, v) in other.edges() {
            g.insert_unchecked(u + offset, v + offset);
        }
        g
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &y in &self.adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// True if `vertices` are pairwise adjacent.
    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(i, &a)| {
            vertices[i + 1..]
                .iter()
                .all(|&b| a != b && self.has_edge(a, b))
        })
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: self.n(),
            edges: self.edges().map(|(u, v)| [u, v]).collect(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self> {
        let edges: Vec<(usize, usize)> = json.edges.iter().map(|e| (e[0], e[1])).collect();
        Self::from_edges(json.n, &edges)
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidMove(format!(
            "relabeling of length {} for {n} vertices",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidMove("relabeling is not a permutation".into()));
        }
    }
    Ok(())
}

impl std::fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "SimpleGraph(n={}, edges={:?})",
            self.n(),
            self.edge_list()
        )
    }
}

impl Serialize for SimpleGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SimpleGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = GraphJson::deserialize(d)?;
        Self::from_json(&json).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2() {
        let g = SimpleGraph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edge_list(), vec![(0, 1)]);
    }

    #[test]
    fn k5_minus_e_from_pairs() {
        let pairs: Vec<_> = (0..5)
            .flat_map(|u| (u + 1..5).map(move |v| (u, v)))
            .filter(|&e| e != (3, 4))
            .collect();
        let g = SimpleGraph::from_edges(5, &pairs).unwrap();
        assert_eq!(g.m(), 9);
        assert_eq!(g, SimpleGraph::k5_minus_e());
    }

    #[test]
    fn edges_are_normalized() {
        let g = SimpleGraph::from_edges(3, &[(2, 0), (1, 0)]).unwrap();
        assert_eq!(g.edge_list(), vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn input_errors_are_distinct() {
        assert_eq!(
            SimpleGraph::from_edges(3, &[(0, 1), (0, 1)]),
            Err(Error::DuplicateEdge(0, 1))
        );
        assert_eq!(
            SimpleGraph::from_edges(3, &[(1, 0), (0, 1)]),
            Err(Error::DuplicateEdge(0, 1))
        );
        assert_eq!(SimpleGraph::from_edges(3, &[(2, 2)]), Err(Error::Loop(2)));
        assert_eq!(
            SimpleGraph::from_edges(3, &[(0, 3)]),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        );
    }

    #[test]
    fn remove_vertex_compacts() {
        let g = SimpleGraph::from_edges(4, &[(0, 3), (1, 3), (1, 2)]).unwrap();
        let h = g.remove_vertex(1);
        assert_eq!(h.n(), 3);
        assert_eq!(h.edge_list(), vec![(0, 2)]);
    }

    #[test]
    fn k4_join_k4_shape() {
        let g = SimpleGraph::k4_join_k4();
        assert_eq!((g.n(), g.m()), (6, 11));
        assert!(g.is_clique(&[0, 1, 2, 3]));
        assert!(g.is_clique(&[0, 1, 4, 5]));
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let g = SimpleGraph::k5_minus_e();
        let s = serde_json::to_string(&g).unwrap();
        assert!(s.starts_with(r#"{"n":5,"edges":[[0,1],"#));
        let back: SimpleGraph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<SimpleGraph>(r#"{"n":2,"edges":[[0,0]]}"#).is_err());
    }

    #[test]
    fn relabel_rejects_non_permutation() {
        let g = SimpleGraph::complete(3);
        assert!(g.relabel(&[0, 0, 1]).is_err());
        assert!(g.relabel(&[0, 1]).is_err());
        let h = SimpleGraph::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(h.relabel(&[2, 0, 1]).unwrap().edge_list(), vec![(0, 2)]);
    }
}
