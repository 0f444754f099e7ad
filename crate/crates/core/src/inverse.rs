//! Inverse construction moves.
//!
//! Each successful inverse yields a [`Reduction`]: the smaller graph together
//! with the forward [`ConstructionStep`] that rebuilds the original labeled
//! graph from it. Removed vertices are deleted and the remaining labels
//! compact downward; contractions keep the smallest participating label for
//! the merged vertex.

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::moves::{ConstructionStep, JoinOperand, Move, Partition};
use crate::reducer::Certificate;
use crate::sparsity::is_tight;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub graph: SimpleGraph,
    /// Forward step with `step.apply(&graph) == original`.
    pub step: ConstructionStep,
}

/// Old labels that survive the deletion of `removed`, in increasing order;
/// position `i` is the new label of `kept[i]`.
fn kept_labels(n: usize, removed: &[usize]) -> Vec<usize> {
    (0..n).filter(|v| !removed.contains(v)).collect()
}

fn new_label(kept: &[usize], v: usize) -> usize {
    kept.binary_search(&v).expect("vertex survives")
}

/// Relabeling from (compacted labels ++ appended labels) back to the original.
fn restore(kept: &[usize], appended: &[usize]) -> Vec<usize> {
    kept.iter().chain(appended).copied().collect()
}

/// Identifies every vertex in `gone` with `keep`, dropping resulting loops
/// and merging parallel edges.
fn merge(g: &SimpleGraph, keep: usize, gone: &[usize]) -> (SimpleGraph, Vec<usize>) {
    let kept = kept_labels(g.n(), gone);
    let target = new_label(&kept, keep);
    let map = |v: usize| {
        if gone.contains(&v) {
            target
        } else {
            new_label(&kept, v)
        }
    };
    let mut out = SimpleGraph::empty(kept.len());
    for (u, v) in g.edges() {
        let (a, b) = (map(u), map(v));
        if a != b {
            out.insert_unchecked(a, b);
        }
    }
    (out, kept)
}

/// Every degree-2 vertex with the graph left after deleting it.
pub fn inverse_henneberg1_candidates(g: &SimpleGraph, _k: u8) -> Vec<(usize, Reduction)> {
    (0..g.n())
        .filter(|&v| g.degree(v) == 2)
        .map(|v| (v, inverse_henneberg1_at(g, v)))
        .collect()
}

fn inverse_henneberg1_at(g: &SimpleGraph, v: usize) -> Reduction {
    let mut ns = g.neighbors(v).iter().copied();
    let (a, b) = (ns.next().unwrap(), ns.next().unwrap());
    let kept = kept_labels(g.n(), &[v]);
    let mv = Move::Henneberg1 {
        v1: new_label(&kept, a),
        v2: new_label(&kept, b),
    };
    Reduction {
        graph: g.remove_vertex(v),
        step: ConstructionStep::new(mv).with_relabel(restore(&kept, &[v])),
    }
}

/// Deletes the degree-3 vertex `v` and adds the lexicographically first
/// absent neighbour pair that leaves a `(2,k)`-tight graph.
pub fn try_inverse_henneberg2(g: &SimpleGraph, v: usize, k: u8) -> Result<Option<Reduction>> {
    g.check_vertex(v)?;
    if g.degree(v) != 3 {
        return Err(Error::InvalidMove(format!(
            "inverse henneberg2 needs degree 3, vertex {v} has degree {}",
            g.degree(v)
        )));
    }
    let ns: Vec<usize> = g.neighbors(v).iter().copied().collect();
    let kept = kept_labels(g.n(), &[v]);
    let base = g.remove_vertex(v);
    for (i, j, t) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let (a, b, c) = (ns[i], ns[j], ns[t]);
        if g.has_edge(a, b) {
            continue;
        }
        let (a, b, c) = (
            new_label(&kept, a),
            new_label(&kept, b),
            new_label(&kept, c),
        );
        let mut candidate = base.clone();
        candidate.insert_unchecked(a, b);
        if is_tight(&candidate, k) {
            let mv = Move::Henneberg2 {
                edge: [a, b],
                v3: c,
            };
            return Ok(Some(Reduction {
                graph: candidate,
                step: ConstructionStep::new(mv).with_relabel(restore(&kept, &[v])),
            }));
        }
    }
    Ok(None)
}

/// True if the degree-3 vertex `v` together with its neighbours spans a `K4`.
pub fn in_k4(g: &SimpleGraph, v: usize) -> Option<[usize; 4]> {
    if g.degree(v) != 3 {
        return None;
    }
    let ns: Vec<usize> = g.neighbors(v).iter().copied().collect();
    g.is_clique(&ns).then(|| {
        let mut q = [v, ns[0], ns[1], ns[2]];
        q.sort_unstable();
        q
    })
}

/// Contracts the `K4` on `quad` to its smallest vertex.
pub fn try_k4_contraction(g: &SimpleGraph, quad: [usize; 4], k: u8) -> Result<Option<Reduction>> {
    for &v in &quad {
        g.check_vertex(v)?;
    }
    if !g.is_clique(&quad) {
        return Err(Error::InvalidMove(format!("{quad:?} does not induce K4")));
    }
    let mut quad = quad;
    quad.sort_unstable();
    let (graph, kept) = merge(g, quad[0], &quad[1..]);
    if !is_tight(&graph, k) {
        return Ok(None);
    }
    let centre = new_label(&kept, quad[0]);
    let mut assignment = Vec::new();
    for &x in graph.neighbors(centre) {
        let original = kept[x];
        let corner = quad
            .iter()
            .position(|&c| g.has_edge(original, c))
            .expect("merged neighbour touches the K4");
        assignment.push([x, corner]);
    }
    let mv = Move::VertexToK4 {
        v: centre,
        assignment,
    };
    Ok(Some(Reduction {
        graph,
        step: ConstructionStep::new(mv).with_relabel(restore(&kept, &quad[1..])),
    }))
}

/// Identifies `v` (degree 3, in the `K4` `{v,a,b,c}`) with the outside vertex
/// `w` adjacent to `a` and `b`. Returns `None` when `wc` is an edge (the five
/// vertices then span `K5` minus an edge) or when the result is not tight.
pub fn try_4cycle_contraction(
    g: &SimpleGraph,
    v: usize,
    w: usize,
    a: usize,
    b: usize,
    c: usize,
    k: u8,
) -> Result<Option<Reduction>> {
    for &x in &[v, w, a, b, c] {
        g.check_vertex(x)?;
    }
    let bad = |why: &str| Err(Error::InvalidMove(format!("4-cycle contraction: {why}")));
    if !g.is_clique(&[v, a, b, c]) || g.degree(v) != 3 {
        return bad("v must have degree 3 inside the K4 {v,a,b,c}");
    }
    if [v, a, b, c].contains(&w) {
        return bad("w must lie outside the K4");
    }
    if !g.has_edge(w, a) || !g.has_edge(w, b) {
        return bad("w must be adjacent to a and b");
    }
    if g.has_edge(v, w) {
        return bad("v and w must not be adjacent");
    }
    if g.has_edge(w, c) {
        return Ok(None);
    }
    let (keep, gone) = (v.min(w), v.max(w));
    let (graph, kept) = merge(g, keep, &[gone]);
    if !is_tight(&graph, k) {
        return Ok(None);
    }
    let merged = new_label(&kept, keep);
    let (na, nb) = (new_label(&kept, a), new_label(&kept, b));
    let mut partition = Partition::default();
    for &x in graph.neighbors(merged) {
        if x == na || x == nb {
            continue;
        }
        if g.has_edge(kept[x], gone) {
            partition.second.push(x);
        } else {
            partition.first.push(x);
        }
    }
    let mv = Move::VertexTo4Cycle {
        v1: merged,
        v2: na,
        v3: nb,
        partition,
    };
    Ok(Some(Reduction {
        graph,
        step: ConstructionStep::new(mv).with_relabel(restore(&kept, &[gone])),
    }))
}

/// Inverse vertex split: contracts the edge `v1v2`, which must lie in exactly
/// one triangle `u v1 v2`.
pub fn try_edge_contraction(
    g: &SimpleGraph,
    v1: usize,
    v2: usize,
    k: u8,
) -> Result<Option<Reduction>> {
    g.check_vertex(v1)?;
    g.check_vertex(v2)?;
    if !g.has_edge(v1, v2) {
        return Err(Error::InvalidMove(format!("edge ({v1}, {v2}) missing")));
    }
    let common: Vec<usize> = g
        .neighbors(v1)
        .intersection(g.neighbors(v2))
        .copied()
        .collect();
    let [u] = common[..] else {
        return Ok(None);
    };
    let (keep, gone) = (v1.min(v2), v1.max(v2));
    let (graph, kept) = merge(g, keep, &[gone]);
    if !is_tight(&graph, k) {
        return Ok(None);
    }
    let merged = new_label(&kept, keep);
    let nu = new_label(&kept, u);
    let mut partition = Partition::default();
    for &x in graph.neighbors(merged) {
        if x == nu {
            continue;
        }
        if g.has_edge(kept[x], gone) {
            partition.second.push(x);
        } else {
            partition.first.push(x);
        }
    }
    let mv = Move::VertexSplit {
        v: merged,
        u: nu,
        partition,
    };
    Ok(Some(Reduction {
        graph,
        step: ConstructionStep::new(mv).with_relabel(restore(&kept, &[gone])),
    }))
}

/// A bridge whose removal leaves two `(2,1)`-tight components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeJoinSplit {
    /// The bridge in original labels, `left` end first.
    pub edge: (usize, usize),
    /// Original labels of the component holding the smaller label, sorted.
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub left_graph: SimpleGraph,
    pub right_graph: SimpleGraph,
}

impl EdgeJoinSplit {
    /// The forward edge-join step rebuilding the original graph from
    /// `left_graph`, with the right operand supplied as a certificate.
    pub fn step(&self, right: Certificate) -> ConstructionStep {
        let g = self.left.binary_search(&self.edge.0).expect("left end");
        let h = self.right.binary_search(&self.edge.1).expect("right end");
        let mv = Move::EdgeJoin {
            g,
            h,
            right: JoinOperand::Certificate(Box::new(right)),
        };
        ConstructionStep::new(mv).with_relabel(restore(&self.left, &self.right))
    }
}

/// First edge (in edge order) whose removal splits the graph into exactly two
/// `(2,1)`-tight components.
pub fn find_inverse_edge_join(g: &SimpleGraph) -> Option<EdgeJoinSplit> {
    for (u, v) in g.edges() {
        let mut h = g.clone();
        h.remove_edge(u, v).expect("edge present");
        let comps = h.components();
        if comps.len() != 2 {
            continue;
        }
        let left_graph = g.induced(&comps[0]);
        let right_graph = g.induced(&comps[1]);
        if !(is_tight(&left_graph, 1) && is_tight(&right_graph, 1)) {
            continue;
        }
        let edge = if comps[0].binary_search(&u).is_ok() {
            (u, v)
        } else {
            (v, u)
        };
        let mut comps = comps.into_iter();
        return Some(EdgeJoinSplit {
            edge,
            left: comps.next().unwrap(),
            right: comps.next().unwrap(),
            left_graph,
            right_graph,
        });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::{edge_join, henneberg1, henneberg2, vertex_split, vertex_to_k4};

    #[test]
    fn inverse_henneberg1_examples() {
        let base = SimpleGraph::k5_minus_e();
        let (g, _) = henneberg1(&base, 0, 1).unwrap();
        let cands = inverse_henneberg1_candidates(&g, 1);
        assert_eq!(cands.len(), 1);
        assert_eq!(cands[0].0, 5);
        assert_eq!(cands[0].1.graph, base);
        assert_eq!(cands[0].1.step.apply(&base).unwrap(), g);
        assert!(inverse_henneberg1_candidates(&base, 1).is_empty());
        assert!(inverse_henneberg1_candidates(&SimpleGraph::complete(4), 1).is_empty());
    }

    #[test]
    fn inverse_henneberg1_relabels_middle_vertex() {
        // degree-2 vertex 1 in the middle of the label range
        let g = SimpleGraph::from_edges(4, &[(0, 2), (0, 3), (2, 3), (1, 0), (1, 3)]).unwrap();
        let (v, red) = inverse_henneberg1_candidates(&g, 3).remove(0);
        assert_eq!(v, 1);
        assert_eq!(red.step.apply(&red.graph).unwrap(), g);
    }

    #[test]
    fn inverse_henneberg2_examples() {
        let base = SimpleGraph::k5_minus_e();
        assert_eq!(try_inverse_henneberg2(&base, 3, 1).unwrap(), None);
        let (g, _) = henneberg2(&base, (0, 1), 2).unwrap();
        let red = try_inverse_henneberg2(&g, 5, 1).unwrap().unwrap();
        assert_eq!(red.graph.m(), 9);
        assert!(is_tight(&red.graph, 1));
        assert_eq!(red.step.apply(&red.graph).unwrap(), g);
        assert!(try_inverse_henneberg2(&base, 0, 1).is_err());
    }

    #[test]
    fn k4_contraction_examples() {
        let g = SimpleGraph::k4_join_k4();
        assert_eq!(try_k4_contraction(&g, [0, 1, 2, 3], 1).unwrap(), None);
        assert_eq!(try_k4_contraction(&g, [0, 1, 4, 5], 1).unwrap(), None);
        let base = SimpleGraph::k5_minus_e();
        let (big, _) = vertex_to_k4(&base, 3, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let red = try_k4_contraction(&big, [3, 5, 6, 7], 1).unwrap().unwrap();
        assert_eq!(red.graph, base);
        assert_eq!(red.step.apply(&base).unwrap(), big);
        assert!(try_k4_contraction(&big, [0, 1, 3, 5], 1).is_err());
    }

    #[test]
    fn four_cycle_contraction_examples() {
        // K4 {0,1,2,3} and {0,1,4,5}: a=0, b=1, v=2, c=3, w=4
        let g = SimpleGraph::k4_join_k4();
        let red = try_4cycle_contraction(&g, 2, 4, 0, 1, 3, 1)
            .unwrap()
            .unwrap();
        assert_eq!((red.graph.n(), red.graph.m()), (5, 9));
        assert!(is_tight(&red.graph, 1));
        assert_eq!(red.step.apply(&red.graph).unwrap(), g);

        // add the edge wc: now {v,w,a,b,c} spans K5 minus vw
        let mut with_wc = g.clone();
        with_wc.add_edge(4, 3).unwrap();
        assert_eq!(
            try_4cycle_contraction(&with_wc, 2, 4, 0, 1, 3, 1).unwrap(),
            None
        );
        assert_eq!(with_wc.induced_edge_count(&[0, 1, 2, 3, 4]), 9);

        let mut adjacent = g.clone();
        adjacent.add_edge(2, 4).unwrap();
        assert!(try_4cycle_contraction(&adjacent, 2, 4, 0, 1, 3, 1).is_err());
    }

    #[test]
    fn edge_contraction_inverts_split() {
        let k4 = SimpleGraph::complete(4);
        let (g, _) = vertex_split(&k4, 0, 1, Partition::new(vec![2], vec![3])).unwrap();
        let red = try_edge_contraction(&g, 0, 4, 2).unwrap().unwrap();
        assert_eq!(red.graph, k4);
        assert_eq!(red.step.apply(&k4).unwrap(), g);
    }

    #[test]
    fn inverse_edge_join_examples() {
        let k = SimpleGraph::k5_minus_e();
        let (g, _) = edge_join(&k, &k, 2, 4).unwrap();
        let split = find_inverse_edge_join(&g).unwrap();
        assert_eq!(split.edge, (2, 9));
        assert_eq!(split.left_graph, k);
        assert_eq!(split.right_graph, k);
        assert_eq!(find_inverse_edge_join(&k), None);
        assert_eq!(find_inverse_edge_join(&SimpleGraph::complete(2)), None);
    }
}
