//! Certificates: replayable move sequences from a base graph, and the
//! reduction that produces them.
//!
//! | k | base      | moves used by [`reduce`]                                   |
//! |---|-----------|------------------------------------------------------------|
//! | 1 | `K5 - e`  | Henneberg 1/2, vertex-to-K4, vertex-to-4-cycle, edge join  |
//! | 2 | `K1`      | Henneberg 1/2, vertex-to-K4, vertex-to-4-cycle             |
//! | 3 | `K2`      | Henneberg 1/2                                              |

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{check_permutation, SimpleGraph};
use crate::inverse::{
    find_inverse_edge_join, in_k4, inverse_henneberg1_candidates, try_4cycle_contraction,
    try_inverse_henneberg2, try_k4_contraction, Reduction,
};
use crate::moves::ConstructionStep;
use crate::sparsity::{is_sparse, is_tight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Base {
    #[serde(rename = "K5-e")]
    K5MinusE,
    K1,
    K2,
}

impl Base {
    pub fn for_k(k: u8) -> Result<Self> {
        match k {
            1 => Ok(Base::K5MinusE),
            2 => Ok(Base::K1),
            3 => Ok(Base::K2),
            _ => Err(Error::InvalidK(k)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Base::K5MinusE => "K5-e",
            Base::K1 => "K1",
            Base::K2 => "K2",
        }
    }

    pub fn graph(self) -> SimpleGraph {
        match self {
            Base::K5MinusE => SimpleGraph::k5_minus_e(),
            Base::K1 => SimpleGraph::empty(1),
            Base::K2 => SimpleGraph::complete(2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub k: u8,
    pub base: Base,
    /// Relabeling of the base graph before the first step; empty is identity.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub base_relabel: Vec<usize>,
    pub steps: Vec<ConstructionStep>,
}

impl Certificate {
    pub fn empty(k: u8) -> Result<Self> {
        Ok(Self {
            k,
            base: Base::for_k(k)?,
            base_relabel: Vec::new(),
            steps: Vec::new(),
        })
    }

    /// Total number of steps, including those nested in edge joins.
    pub fn total_steps(&self) -> usize {
        self.steps
            .iter()
            .map(|s| match &s.mv {
                crate::moves::Move::EdgeJoin {
                    right: crate::moves::JoinOperand::Certificate(c),
                    ..
                } => 1 + c.total_steps(),
                _ => 1,
            })
            .sum()
    }
}

/// Rebuilds the target graph, checking that every intermediate graph is
/// simple and `(2,k)`-tight.
pub fn replay(cert: &Certificate) -> Result<SimpleGraph> {
    if Base::for_k(cert.k)? != cert.base {
        return Err(Error::InvalidCertificate(format!(
            "base {:?} does not match k={}",
            cert.base, cert.k
        )));
    }
    let mut g = cert.base.graph();
    if !cert.base_relabel.is_empty() {
        check_permutation(&cert.base_relabel, g.n())
            .map_err(|e| Error::InvalidCertificate(e.to_string()))?;
        g = g.relabel(&cert.base_relabel)?;
    }
    for (i, step) in cert.steps.iter().enumerate() {
        g = step.apply(&g).map_err(|e| {
            Error::InvalidCertificate(format!("step {i} ({}): {e}", step.mv.name()))
        })?;
        if !is_tight(&g, cert.k) {
            return Err(Error::InvalidCertificate(format!(
                "step {i} ({}) leaves a graph that is not (2,{})-tight",
                step.mv.name(),
                cert.k
            )));
        }
    }
    Ok(g)
}

/// Reduces a `(2,k)`-tight simple graph to its base, `k` in `1..=3`.
pub fn reduce(g: &SimpleGraph, k: u8) -> Result<Certificate> {
    Base::for_k(k)?;
    if !is_sparse(g, k)?.tight {
        return Err(Error::NotTight { k });
    }
    reduce_tight(g, k)
}

fn reduce_tight(g: &SimpleGraph, k: u8) -> Result<Certificate> {
    let mut current = g.clone();
    let mut reversed = Vec::new();
    loop {
        if let Some(relabel) = base_relabel(&current, k) {
            let mut cert = Certificate::empty(k)?;
            cert.base_relabel = relabel;
            return Ok(finish(cert, reversed));
        }
        if let Some(red) = next_inverse(&current, k)? {
            debug_assert!(is_tight(&red.graph, k));
            reversed.push(red.step);
            current = red.graph;
            continue;
        }
        if k == 1 {
            if let Some(split) = find_inverse_edge_join(&current) {
                let mut cert = reduce_tight(&split.left_graph, k)?;
                let right = reduce_tight(&split.right_graph, k)?;
                cert.steps.push(split.step(right));
                return Ok(finish(cert, reversed));
            }
        }
        return Err(Error::ReductionStalled { n: current.n() });
    }
}

fn finish(mut cert: Certificate, reversed: Vec<ConstructionStep>) -> Certificate {
    cert.steps.extend(reversed.into_iter().rev());
    cert
}

/// `Some(relabel)` if `g` (known to be tight) is the base graph for `k`.
fn base_relabel(g: &SimpleGraph, k: u8) -> Option<Vec<usize>> {
    match k {
        1 if g.n() == 5 => {
            // tight on five vertices forces K5 minus one edge (a, b)
            let (a, b) = (0..5)
                .flat_map(|u| (u + 1..5).map(move |v| (u, v)))
                .find(|&(u, v)| !g.has_edge(u, v))?;
            let mut perm: Vec<usize> = (0..5).filter(|&x| x != a && x != b).collect();
            perm.extend([a, b]);
            let identity = perm.iter().enumerate().all(|(i, &p)| i == p);
            Some(if identity { Vec::new() } else { perm })
        }
        2 if g.n() == 1 => Some(Vec::new()),
        3 if g.n() == 2 => Some(Vec::new()),
        _ => None,
    }
}

/// One inverse move in priority order, lowest labels first.
fn next_inverse(g: &SimpleGraph, k: u8) -> Result<Option<Reduction>> {
    if let Some((_, red)) = inverse_henneberg1_candidates(g, k).into_iter().next() {
        return Ok(Some(red));
    }
    let degree3: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) == 3).collect();
    for &v in &degree3 {
        if in_k4(g, v).is_none() {
            if let Some(red) = try_inverse_henneberg2(g, v, k)? {
                return Ok(Some(red));
            }
        }
    }
    if k == 3 {
        return Ok(None);
    }
    let mut quads: Vec<[usize; 4]> = degree3.iter().filter_map(|&v| in_k4(g, v)).collect();
    quads.dedup();
    for &quad in &quads {
        if let Some(red) = try_k4_contraction(g, quad, k)? {
            return Ok(Some(red));
        }
    }
    for &v in &degree3 {
        let Some(quad) = in_k4(g, v) else { continue };
        let others: Vec<usize> = quad.iter().copied().filter(|&x| x != v).collect();
        for w in 0..g.n() {
            if quad.contains(&w) || g.has_edge(v, w) {
                continue;
            }
            for (i, j, t) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
                let (a, b, c) = (others[i], others[j], others[t]);
                if !(g.has_edge(w, a) && g.has_edge(w, b)) || g.has_edge(w, c) {
                    continue;
                }
                if let Some(red) = try_4cycle_contraction(g, v, w, a, b, c, k)? {
                    return Ok(Some(red));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::Move;

    #[test]
    fn base_graph_has_empty_certificate() {
        let cert = reduce(&SimpleGraph::k5_minus_e(), 1).unwrap();
        assert!(cert.steps.is_empty() && cert.base_relabel.is_empty());
        assert_eq!(replay(&cert).unwrap(), SimpleGraph::k5_minus_e());
    }

    #[test]
    fn relabeled_base() {
        let mut g = SimpleGraph::complete(5);
        g.remove_edge(0, 2).unwrap();
        let cert = reduce(&g, 1).unwrap();
        assert!(cert.steps.is_empty());
        assert_eq!(replay(&cert).unwrap(), g);
    }

    #[test]
    fn k4_join_k4_is_one_4cycle_step() {
        let g = SimpleGraph::k4_join_k4();
        let cert = reduce(&g, 1).unwrap();
        assert_eq!(cert.steps.len(), 1);
        assert!(matches!(cert.steps[0].mv, Move::VertexTo4Cycle { .. }));
        assert_eq!(replay(&cert).unwrap(), g);
    }

    #[test]
    fn rejects_non_tight() {
        assert_eq!(
            reduce(&SimpleGraph::complete(5), 1),
            Err(Error::NotTight { k: 1 })
        );
        assert_eq!(
            reduce(&SimpleGraph::complete(4), 0),
            Err(Error::InvalidK(0))
        );
    }

    #[test]
    fn laman_graphs_use_henneberg_moves_only() {
        // triangular prism: (2,3)-tight, every vertex of degree 3
        let prism = SimpleGraph::from_edges(
            6,
            &[
                (0, 1),
                (1, 2),
                (0, 2),
                (3, 4),
                (4, 5),
                (3, 5),
                (0, 3),
                (1, 4),
                (2, 5),
            ],
        )
        .unwrap();
        let cert = reduce(&prism, 3).unwrap();
        assert!(cert
            .steps
            .iter()
            .all(|s| matches!(s.mv, Move::Henneberg1 { .. } | Move::Henneberg2 { .. })));
        assert_eq!(replay(&cert).unwrap(), prism);
    }

    #[test]
    fn k4_reduces_to_k1() {
        let cert = reduce(&SimpleGraph::complete(4), 2).unwrap();
        assert_eq!(cert.steps.len(), 1);
        assert_eq!(replay(&cert).unwrap(), SimpleGraph::complete(4));
    }

    #[test]
    fn replay_errors() {
        let mut cert = Certificate::empty(1).unwrap();
        assert_eq!(replay(&cert).unwrap(), SimpleGraph::k5_minus_e());
        cert.steps
            .push(ConstructionStep::new(Move::Henneberg1 { v1: 0, v2: 9 }));
        assert!(matches!(replay(&cert), Err(Error::InvalidCertificate(_))));

        // K1 -> K4, then joining a pendant vertex: 7 edges on 5 vertices is not (2,2)-tight
        let mut cert = Certificate::empty(2).unwrap();
        cert.steps.push(ConstructionStep::new(Move::VertexToK4 {
            v: 0,
            assignment: vec![],
        }));
        assert_eq!(replay(&cert).unwrap(), SimpleGraph::complete(4));
        cert.steps.push(ConstructionStep::new(Move::EdgeJoin {
            g: 0,
            h: 0,
            right: crate::moves::JoinOperand::Graph(SimpleGraph::empty(1)),
        }));
        let err = replay(&cert).unwrap_err();
        assert!(err.to_string().contains("step 1"), "{err}");

        let mut cert = Certificate::empty(1).unwrap();
        cert.base = Base::K1;
        assert!(matches!(replay(&cert), Err(Error::InvalidCertificate(_))));
    }

    #[test]
    fn certificate_json_shape() {
        let cert = reduce(&SimpleGraph::k4_join_k4(), 1).unwrap();
        let v = serde_json::to_value(&cert).unwrap();
        assert_eq!(v["k"], 1);
        assert_eq!(v["base"], "K5-e");
        assert_eq!(v["steps"][0]["op"], "vertex_to_4cycle");
        let back: Certificate = serde_json::from_value(v).unwrap();
        assert_eq!(back, cert);
    }
}
