//! Forward construction moves on simple graphs.
//!
//! Every move appends its new vertices at the end of the label range
//! (`n, n+1, ...`). A [`ConstructionStep`] pairs a move with an optional
//! relabeling applied afterwards, which lets inverse moves that delete
//! vertices from the middle of the label range still replay exactly.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{check_permutation, SimpleGraph};
use crate::reducer::{replay, Certificate};

/// Split of a vertex's remaining neighbours between two vertices.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Partition {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
}

impl Partition {
    pub fn new(first: Vec<usize>, second: Vec<usize>) -> Self {
        Self { first, second }
    }

    /// Checks that `first` and `second` partition `expected` exactly.
    fn validate(&self, expected: &BTreeSet<usize>) -> Result<()> {
        let mut seen = BTreeSet::new();
        for &x in self.first.iter().chain(&self.second) {
            if !expected.contains(&x) {
                return Err(Error::InvalidMove(format!(
                    "partition entry {x} is not an edge to redistribute"
                )));
            }
            if !seen.insert(x) {
                return Err(Error::InvalidMove(format!("partition lists {x} twice")));
            }
        }
        if seen.len() != expected.len() {
            let missing: Vec<_> = expected.difference(&seen).collect();
            return Err(Error::InvalidMove(format!("partition omits {missing:?}")));
        }
        Ok(())
    }
}

/// The right-hand operand of an edge join: a literal graph, or a certificate
/// that rebuilds it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JoinOperand {
    Graph(SimpleGraph),
    Certificate(Box<Certificate>),
}

impl JoinOperand {
    fn resolve(&self) -> Result<SimpleGraph> {
        match self {
            JoinOperand::Graph(g) => Ok(g.clone()),
            JoinOperand::Certificate(c) => replay(c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", content = "params", rename_all = "snake_case")]
pub enum Move {
    /// New vertex adjacent to `v1` and `v2`.
    Henneberg1 { v1: usize, v2: usize },
    /// Delete `edge`, add a vertex adjacent to both its ends and `v3`.
    Henneberg2 { edge: [usize; 2], v3: usize },
    /// Replace `v` by a `K4` on corners `[v, n, n+1, n+2]`; `assignment`
    /// lists `[x, corner]` for every former neighbour `x` of `v`.
    VertexToK4 {
        v: usize,
        assignment: Vec<[usize; 2]>,
    },
    /// Split `v1` into `v1` and a new `v0 = n`, both adjacent to `v2` and
    /// `v3`; the other neighbours of `v1` stay (`first`) or move to `v0`
    /// (`second`).
    #[serde(rename = "vertex_to_4cycle")]
    VertexTo4Cycle {
        v1: usize,
        v2: usize,
        v3: usize,
        partition: Partition,
    },
    /// Replace `v` and the edge `uv` by a triangle on `u, v, n`; the other
    /// neighbours of `v` stay (`first`) or move to `n` (`second`).
    VertexSplit {
        v: usize,
        u: usize,
        partition: Partition,
    },
    /// Disjoint union with `right` (shifted by `n`) plus the edge `{g, n + h}`.
    EdgeJoin {
        g: usize,
        h: usize,
        right: JoinOperand,
    },
}

impl Move {
    pub fn name(&self) -> &'static str {
        match self {
            Move::Henneberg1 { .. } => "henneberg1",
            Move::Henneberg2 { .. } => "henneberg2",
            Move::VertexToK4 { .. } => "vertex_to_k4",
            Move::VertexTo4Cycle { .. } => "vertex_to_4cycle",
            Move::VertexSplit { .. } => "vertex_split",
            Move::EdgeJoin { .. } => "edge_join",
        }
    }

    pub fn apply(&self, g: &SimpleGraph) -> Result<SimpleGraph> {
        match self {
            Move::Henneberg1 { v1, v2 } => apply_henneberg1(g, *v1, *v2),
            Move::Henneberg2 { edge, v3 } => apply_henneberg2(g, (edge[0], edge[1]), *v3),
            Move::VertexToK4 { v, assignment } => apply_vertex_to_k4(g, *v, assignment),
            Move::VertexTo4Cycle {
                v1,
                v2,
                v3,
                partition,
            } => apply_vertex_to_4cycle(g, *v1, *v2, *v3, partition),
            Move::VertexSplit { v, u, partition } => apply_vertex_split(g, *v, *u, partition),
            Move::EdgeJoin { g: a, h, right } => apply_edge_join(g, &right.resolve()?, *a, *h),
        }
    }
}

/// A move plus the relabeling applied to its result (`relabel[i]` is the
/// final label of vertex `i`; empty means identity).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionStep {
    #[serde(flatten)]
    pub mv: Move,
    #[serde(default)]
    pub relabel: Vec<usize>,
}

impl ConstructionStep {
    pub fn new(mv: Move) -> Self {
        Self {
            mv,
            relabel: Vec::new(),
        }
    }

    /// Stores `relabel` unless it is the identity.
    pub fn with_relabel(mut self, relabel: Vec<usize>) -> Self {
        let identity = relabel.iter().enumerate().all(|(i, &p)| i == p);
        self.relabel = if identity { Vec::new() } else { relabel };
        self
    }

    pub fn apply(&self, g: &SimpleGraph) -> Result<SimpleGraph> {
        let out = self.mv.apply(g)?;
        if self.relabel.is_empty() {
            return Ok(out);
        }
        check_permutation(&self.relabel, out.n())?;
        out.relabel(&self.relabel)
    }
}

fn missing(v: usize, g: &SimpleGraph) -> Error {
    Error::InvalidMove(format!("vertex {v} not in graph on {} vertices", g.n()))
}

fn check(g: &SimpleGraph, vs: &[usize]) -> Result<()> {
    match vs.iter().find(|&&v| v >= g.n()) {
        Some(&v) => Err(missing(v, g)),
        None => Ok(()),
    }
}

fn apply_henneberg1(g: &SimpleGraph, v1: usize, v2: usize) -> Result<SimpleGraph> {
    check(g, &[v1, v2])?;
    if v1 == v2 {
        return Err(Error::InvalidMove(
            "henneberg1 needs two distinct neighbours".into(),
        ));
    }
    let mut out = g.clone();
    let v = out.add_vertex();
    out.insert_unchecked(v, v1);
    out.insert_unchecked(v, v2);
    Ok(out)
}

fn apply_henneberg2(g: &SimpleGraph, (v1, v2): (usize, usize), v3: usize) -> Result<SimpleGraph> {
    check(g, &[v1, v2, v3])?;
    if !g.has_edge(v1, v2) {
        return Err(Error::InvalidMove(format!(
            "henneberg2: edge ({v1}, {v2}) missing"
        )));
    }
    if v3 == v1 || v3 == v2 {
        return Err(Error::InvalidMove(
            "henneberg2: v3 coincides with an edge end".into(),
        ));
    }
    let mut out = g.clone();
    out.remove_edge(v1, v2)?;
    let v = out.add_vertex();
    for w in [v1, v2, v3] {
        out.insert_unchecked(v, w);
    }
    Ok(out)
}

fn apply_vertex_to_k4(g: &SimpleGraph, v: usize, assignment: &[[usize; 2]]) -> Result<SimpleGraph> {
    check(g, &[v])?;
    let neighbours = g.neighbors(v).clone();
    let mut seen = BTreeSet::new();
    for &[x, corner] in assignment {
        if !neighbours.contains(&x) {
            return Err(Error::InvalidMove(format!(
                "vertex_to_k4: ({x}, {v}) is not an edge"
            )));
        }
        if corner > 3 {
            return Err(Error::InvalidMove(format!(
                "vertex_to_k4: corner {corner} > 3"
            )));
        }
        if !seen.insert(x) {
            return Err(Error::InvalidMove(format!(
                "vertex_to_k4: {x} assigned twice"
            )));
        }
    }
    if seen.len() != neighbours.len() {
        return Err(Error::InvalidMove(
            "vertex_to_k4: assignment incomplete".into(),
        ));
    }
    let mut out = g.clone();
    for &x in &neighbours {
        out.remove_edge(x, v)?;
    }
    let corners = [v, out.add_vertex(), out.add_vertex(), out.add_vertex()];
    for i in 0..4 {
        for j in i + 1..4 {
            out.insert_unchecked(corners[i], corners[j]);
        }
    }
    for &[x, corner] in assignment {
        out.insert_unchecked(x, corners[corner]);
    }
    Ok(out)
}

fn apply_vertex_to_4cycle(
    g: &SimpleGraph,
    v1: usize,
    v2: usize,
    v3: usize,
    partition: &Partition,
) -> Result<SimpleGraph> {
    check(g, &[v1, v2, v3])?;
    if v2 == v3 || !g.has_edge(v1, v2) || !g.has_edge(v1, v3) {
        return Err(Error::InvalidMove(format!(
            "vertex_to_4cycle: needs distinct edges ({v1}, {v2}) and ({v1}, {v3})"
        )));
    }
    let mut rest = g.neighbors(v1).clone();
    rest.remove(&v2);
    rest.remove(&v3);
    partition.validate(&rest)?;
    let mut out = g.clone();
    let v0 = out.add_vertex();
    out.insert_unchecked(v0, v2);
    out.insert_unchecked(v0, v3);
    for &x in &partition.second {
        out.remove_edge(v1, x)?;
        out.insert_unchecked(v0, x);
    }
    debug_assert!(!out.has_edge(v0, v1));
    debug_assert!(out
        .neighbors(v0)
        .intersection(out.neighbors(v1))
        .all(|&w| w == v2 || w == v3));
    Ok(out)
}

fn apply_vertex_split(
    g: &SimpleGraph,
    v: usize,
    u: usize,
    partition: &Partition,
) -> Result<SimpleGraph> {
    check(g, &[v, u])?;
    if !g.has_edge(u, v) {
        return Err(Error::InvalidMove(format!(
            "vertex_split: edge ({u}, {v}) missing"
        )));
    }
    let mut rest = g.neighbors(v).clone();
    rest.remove(&u);
    partition.validate(&rest)?;
    let mut out = g.clone();
    let v2 = out.add_vertex();
    for &x in &partition.second {
        out.remove_edge(v, x)?;
        out.insert_unchecked(v2, x);
    }
    out.insert_unchecked(u, v2);
    out.insert_unchecked(v, v2);
    Ok(out)
}

fn apply_edge_join(g: &SimpleGraph, h: &SimpleGraph, a: usize, b: usize) -> Result<SimpleGraph> {
    check(g, &[a])?;
    check(h, &[b])?;
    let mut out = g.disjoint_union(h);
    out.insert_unchecked(a, g.n() + b);
    Ok(out)
}

fn run(g: &SimpleGraph, mv: Move) -> Result<(SimpleGraph, ConstructionStep)> {
    let out = mv.apply(g)?;
    Ok((out, ConstructionStep::new(mv)))
}

pub fn henneberg1(
    g: &SimpleGraph,
    v1: usize,
    v2: usize,
) -> Result<(SimpleGraph, ConstructionStep)> {
    run(g, Move::Henneberg1 { v1, v2 })
}

pub fn henneberg2(
    g: &SimpleGraph,
    (v1, v2): (usize, usize),
    v3: usize,
) -> Result<(SimpleGraph, ConstructionStep)> {
    run(g, Move::Henneberg2 { edge: [v1, v2], v3 })
}

/// `assignment` pairs each neighbour `x` of `v` with a corner in `0..4`
/// (corner 0 keeps label `v`).
pub fn vertex_to_k4(
    g: &SimpleGraph,
    v: usize,
    assignment: &[(usize, usize)],
) -> Result<(SimpleGraph, ConstructionStep)> {
    let assignment = assignment.iter().map(|&(x, c)| [x, c]).collect();
    run(g, Move::VertexToK4 { v, assignment })
}

pub fn vertex_to_4cycle(
    g: &SimpleGraph,
    v1: usize,
    v2: usize,
    v3: usize,
    partition: Partition,
) -> Result<(SimpleGraph, ConstructionStep)> {
    run(
        g,
        Move::VertexTo4Cycle {
            v1,
            v2,
            v3,
            partition,
        },
    )
}

pub fn vertex_split(
    g: &SimpleGraph,
    v: usize,
    u: usize,
    partition: Partition,
) -> Result<(SimpleGraph, ConstructionStep)> {
    run(g, Move::VertexSplit { v, u, partition })
}

pub fn edge_join(
    g: &SimpleGraph,
    h: &SimpleGraph,
    gv: usize,
    hv: usize,
) -> Result<(SimpleGraph, ConstructionStep)> {
    let out = apply_edge_join(g, h, gv, hv)?;
    let step = ConstructionStep::new(Move::EdgeJoin {
        g: gv,
        h: hv,
        right: JoinOperand::Graph(h.clone()),
    });
    Ok((out, step))
}
