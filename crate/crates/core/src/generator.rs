//! Seeded forward generation of `(2,k)`-tight graphs with their certificates.
//!
//! Move types are drawn from a weighted registry of [`MoveSampler`]s; each
//! sampler draws its own parameters uniformly and the result is kept only if
//! it is still `(2,k)`-tight.

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::moves::{ConstructionStep, JoinOperand, Move, Partition};
use crate::reducer::{Base, Certificate};
use crate::sparsity::is_tight;

const MAX_ATTEMPTS: usize = 10_000;

/// A randomised forward move.
pub trait MoveSampler: Send + Sync {
    fn name(&self) -> &'static str;
    fn weight(&self) -> f64;
    fn supports(&self, k: u8) -> bool;
    /// Fewest vertices the move can add.
    fn min_growth(&self) -> usize;
    /// Draws random parameters for `g`; `None` when the move does not apply
    /// or would overshoot `room` extra vertices.
    fn sample(
        &self,
        g: &SimpleGraph,
        k: u8,
        room: usize,
        rng: &mut dyn RngCore,
    ) -> Result<Option<Move>>;
}

pub struct MoveRegistry {
    samplers: Vec<Box<dyn MoveSampler>>,
}

impl Default for MoveRegistry {
    fn default() -> Self {
        Self {
            samplers: vec![
                Box::new(Henneberg1Sampler),
                Box::new(Henneberg2Sampler),
                Box::new(VertexToK4Sampler),
                Box::new(VertexTo4CycleSampler),
                Box::new(VertexSplitSampler),
                Box::new(EdgeJoinSampler),
            ],
        }
    }
}

impl MoveRegistry {
    pub fn empty() -> Self {
        Self {
            samplers: Vec::new(),
        }
    }

    pub fn register(&mut self, sampler: Box<dyn MoveSampler>) {
        self.samplers.retain(|s| s.name() != sampler.name());
        self.samplers.push(sampler);
    }

    pub fn get(&self, name: &str) -> Option<&dyn MoveSampler> {
        self.samplers
            .iter()
            .find(|s| s.name() == name)
            .map(|b| b.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.samplers.iter().map(|s| s.name())
    }

    /// Grows a random tight graph on exactly `n_target` vertices.
    pub fn generate(
        &self,
        n_target: usize,
        k: u8,
        seed: u64,
    ) -> Result<(SimpleGraph, Certificate)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.generate_with(n_target, k, &mut rng)
    }

    fn generate_with(
        &self,
        n_target: usize,
        k: u8,
        rng: &mut dyn RngCore,
    ) -> Result<(SimpleGraph, Certificate)> {
        let base = Base::for_k(k)?;
        let mut g = base.graph();
        // (2,2)-tight graphs on 2 or 3 vertices would need parallel edges
        if n_target < g.n() || (k == 2 && (n_target == 2 || n_target == 3)) {
            return Err(Error::Unreachable { n: n_target, k });
        }
        let mut cert = Certificate::empty(k)?;
        let mut attempts = 0;
        while g.n() < n_target {
            let room = n_target - g.n();
            let choices: Vec<&dyn MoveSampler> = self
                .samplers
                .iter()
                .map(|s| s.as_ref())
                .filter(|s| s.supports(k) && s.min_growth() <= room && s.weight() > 0.0)
                .filter(|s| !(k == 2 && g.n() == 1 && s.name() != "vertex_to_k4"))
                .collect();
            let sampler = choices
                .choose_weighted(rng, |s| s.weight())
                .map_err(|_| Error::Unreachable { n: n_target, k })?;
            attempts += 1;
            if attempts > MAX_ATTEMPTS {
                return Err(Error::Unreachable { n: n_target, k });
            }
            let Some(mv) = sampler.sample(&g, k, room, rng)? else {
                continue;
            };
            let next = mv.apply(&g)?;
            if next.n() <= n_target && is_tight(&next, k) {
                g = next;
                cert.steps.push(ConstructionStep::new(mv));
            }
        }
        Ok((g, cert))
    }
}

/// [`MoveRegistry::generate`] with the default move weights.
pub fn generate(n_target: usize, k: u8, seed: u64) -> Result<(SimpleGraph, Certificate)> {
    MoveRegistry::default().generate(n_target, k, seed)
}

fn random_vertex(g: &SimpleGraph, rng: &mut dyn RngCore) -> Option<usize> {
    (g.n() > 0).then(|| rng.gen_range(0..g.n()))
}

fn random_partition(items: impl IntoIterator<Item = usize>, rng: &mut dyn RngCore) -> Partition {
    let mut p = Partition::default();
    for x in items {
        if rng.gen_bool(0.5) {
            p.first.push(x);
        } else {
            p.second.push(x);
        }
    }
    p
}

struct Henneberg1Sampler;

impl MoveSampler for Henneberg1Sampler {
    fn name(&self) -> &'static str {
        "henneberg1"
    }
    fn weight(&self) -> f64 {
        0.35
    }
    fn supports(&self, _k: u8) -> bool {
        true
    }
    fn min_growth(&self) -> usize {
        1
    }
    fn sample(
        &self,
        g: &SimpleGraph,
        _k: u8,
        _room: usize,
        rng: &mut dyn RngCore,
    ) -> Result<Option<Move>> {
        if g.n() < 2 {
            return Ok(None);
        }
        let pair = rand::seq::index::sample(rng, g.n(), 2);
        Ok(Some(Move::Henneberg1 {
            v1: pair.index(0),
            v2: pair.index(1),
        }))
    }
}

struct Henneberg2Sampler;

impl MoveSampler for Henneberg2Sampler {
    fn name(&self) -> &'static str {
        "henneberg2"
    }
    fn weight(&self) -> f64 {
        0.35
    }
    fn supports(&self, _k: u8) -> bool {
        true
    }
    fn min_growth(&self) -> usize {
        1
    }
    fn sample(
        &self,
        g: &SimpleGraph,
        _k: u8,
        _room: usize,
        rng: &mut dyn RngCore,
    ) -> Result<Option<Move>> {
        if g.m() == 0 || g.n() < 3 {
            return Ok(None);
        }
        let (a, b) = g.edges().nth(rng.gen_range(0..g.m())).expect("edge index");
        let v3 = loop {
            let c = rng.gen_range(0..g.n());
            if c != a && c != b {
                break c;
            }
        };
        Ok(Some(Move::Henneberg2 { edge: [a, b], v3 }))
    }
}

struct VertexToK4Sampler;

impl MoveSampler for VertexToK4Sampler {
    fn name(&self) -> &'static str {
        "vertex_to_k4"
    }
    fn weight(&self) -> f64 {
        0.1
    }
    fn supports(&self, k: u8) -> bool {
        k <= 2
    }
    fn min_growth(&self) -> usize {
        3
    }
    fn sample(
        &self,
        g: &SimpleGraph,
        _k: u8,
        _room: usize,
        rng: &mut dyn RngCore,
    ) -> Result<Option<Move>> {
        let Some(v) = random_vertex(g, rng) else {
            return Ok(None);
        };
        let assignment = g
            .neighbors(v)
            .iter()
            .map(|&x| [x, rng.gen_range(0..4)])
            .collect();
        Ok(Some(Move::VertexToK4 { v, assignment }))
    }
}

struct VertexTo4CycleSampler;

impl MoveSampler for VertexTo4CycleSampler {
    fn name(&self) -> &'static str {
        "vertex_to_4cycle"
    }
    fn weight(&self) -> f64 {
        0.1
    }
    fn supports(&self, k: u8) -> bool {
        k <= 2
    }
    fn min_growth(&self) -> usize {
        1
    }
    fn sample(
        &self,
        g: &SimpleGraph,
        _k: u8,
        _room: usize,
        rng: &mut dyn RngCore,
    ) -> Result<Option<Move>> {
        let Some(v1) = random_vertex(g, rng) else {
            return Ok(None);
        };
        let ns: Vec<usize> = g.neighbors(v1).iter().copied().collect();
        if ns.len() < 2 {
            return Ok(None);
        }
        let pick = rand::seq::index::sample(rng, ns.len(), 2);
        let (v2, v3) = (ns[pick.index(0)], ns[pick.index(1)]);
        let partition = random_partition(ns.iter().copied().filter(|&x| x != v2 && x != v3), rng);
        Ok(Some(Move::VertexTo4Cycle {
            v1,
            v2,
            v3,
            partition,
        }))
    }
}

struct VertexSplitSampler;

impl MoveSampler for VertexSplitSampler {
    fn name(&self) -> &'static str {
        "vertex_split"
    }
    fn weight(&self) -> f64 {
        0.05
    }
    fn supports(&self, k: u8) -> bool {
        k <= 2
    }
    fn min_growth(&self) -> usize {
        1
    }
    fn sample(
        &self,
        g: &SimpleGraph,
        _k: u8,
        _room: usize,
        rng: &mut dyn RngCore,
    ) -> Result<Option<Move>> {
        let Some(v) = random_vertex(g, rng) else {
            return Ok(None);
        };
        let ns: Vec<usize> = g.neighbors(v).iter().copied().collect();
        let Some(&u) = ns.choose(rng) else {
            return Ok(None);
        };
        let partition = random_partition(ns.iter().copied().filter(|&x| x != u), rng);
        Ok(Some(Move::VertexSplit { v, u, partition }))
    }
}

struct EdgeJoinSampler;

impl MoveSampler for EdgeJoinSampler {
    fn name(&self) -> &'static str {
        "edge_join"
    }
    fn weight(&self) -> f64 {
        0.05
    }
    fn supports(&self, k: u8) -> bool {
        k == 1
    }
    fn min_growth(&self) -> usize {
        5
    }
    fn sample(
        &self,
        g: &SimpleGraph,
        k: u8,
        room: usize,
        rng: &mut dyn RngCore,
    ) -> Result<Option<Move>> {
        if room < 5 {
            return Ok(None);
        }
        let size = rng.gen_range(5..=room);
        let mut child_rng = ChaCha8Rng::seed_from_u64(rng.next_u64());
        let (h, cert) = MoveRegistry::default().generate_with(size, k, &mut child_rng)?;
        let Some(gv) = random_vertex(g, rng) else {
            return Ok(None);
        };
        let hv = rng.gen_range(0..h.n());
        Ok(Some(Move::EdgeJoin {
            g: gv,
            h: hv,
            right: JoinOperand::Certificate(Box::new(cert)),
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reducer::replay;
    use crate::sparsity::is_sparse_bruteforce;

    #[test]
    fn base_size_gives_base() {
        for seed in 0..5 {
            let (g, cert) = generate(5, 1, seed).unwrap();
            assert_eq!(g, SimpleGraph::k5_minus_e());
            assert!(cert.steps.is_empty());
        }
    }

    #[test]
    fn twelve_vertices_k1() {
        let (g, cert) = generate(12, 1, 7).unwrap();
        assert_eq!((g.n(), g.m()), (12, 23));
        assert!(is_sparse_bruteforce(&g, 1).unwrap().tight);
        assert_eq!(replay(&cert).unwrap(), g);
    }

    #[test]
    fn deterministic_in_seed() {
        assert_eq!(generate(11, 1, 3).unwrap(), generate(11, 1, 3).unwrap());
        assert_eq!(generate(9, 2, 3).unwrap(), generate(9, 2, 3).unwrap());
    }

    #[test]
    fn unreachable_targets() {
        assert_eq!(generate(1, 1, 0), Err(Error::Unreachable { n: 1, k: 1 }));
        assert_eq!(generate(3, 2, 0), Err(Error::Unreachable { n: 3, k: 2 }));
        assert_eq!(generate(1, 3, 0), Err(Error::Unreachable { n: 1, k: 3 }));
        assert_eq!(generate(5, 0, 0), Err(Error::InvalidK(0)));
    }

    #[test]
    fn all_k_outputs_are_tight_and_replay() {
        for k in 1..=3u8 {
            for seed in 0..20 {
                let n = 5 + (seed as usize % 8);
                let (g, cert) = generate(n, k, seed).unwrap();
                assert_eq!(g.n(), n);
                assert!(
                    is_sparse_bruteforce(&g, k).unwrap().tight,
                    "k={k} seed={seed}"
                );
                assert_eq!(replay(&cert).unwrap(), g);
            }
        }
    }

    #[test]
    fn k3_certificates_are_henneberg_only() {
        for seed in 0..10 {
            let (_, cert) = generate(9, 3, seed).unwrap();
            assert!(cert
                .steps
                .iter()
                .all(|s| matches!(s.mv, Move::Henneberg1 { .. } | Move::Henneberg2 { .. })));
        }
    }

    #[test]
    fn registry_lookup() {
        let reg = MoveRegistry::default();
        assert_eq!(reg.names().count(), 6);
        assert!(reg.get("edge_join").unwrap().supports(1));
        assert!(!reg.get("edge_join").unwrap().supports(2));
        let mut only_h1 = MoveRegistry::empty();
        only_h1.register(Box::new(Henneberg1Sampler));
        let (g, cert) = only_h1.generate(8, 1, 1).unwrap();
        assert_eq!(g.n(), 8);
        assert!(cert
            .steps
            .iter()
            .all(|s| matches!(s.mv, Move::Henneberg1 { .. })));
    }
}
