//! Named graph families and seeded random balanced digraphs.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DirectedWeightedGraph, VertexId, DEFAULT_BALANCE_TOL};

/// Seed for every randomized generator; equal seeds give equal graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GeneratorSeed(pub u64);

impl GeneratorSeed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Independent seed for sub-stream `index` (SplitMix64 finalizer).
    pub fn derive(self, index: u64) -> GeneratorSeed {
        let mut z = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        GeneratorSeed(z ^ (z >> 31))
    }
}

impl From<u64> for GeneratorSeed {
    fn from(s: u64) -> Self {
        GeneratorSeed(s)
    }
}

const WEIGHT_RANGE: std::ops::RangeInclusive<f64> = 0.5..=2.0;

#[derive(Debug, Clone, Default)]
pub struct CycleOptions {
    /// Weight of edge `(i, i+1 mod n)`; default all ones.
    pub weights: Option<Vec<f64>>,
    /// Vertex measure; default all ones.
    pub measure: Option<Vec<f64>>,
    /// Accept non-constant weights, which break Kirchhoff balance.
    pub allow_unbalanced: bool,
}

/// Simple directed cycle `0 -> 1 -> ... -> n-1 -> 0`.
pub fn cycle(n: usize) -> Result<DirectedWeightedGraph> {
    cycle_with(n, CycleOptions::default())
}

pub fn cycle_with(n: usize, opts: CycleOptions) -> Result<DirectedWeightedGraph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("cycle needs n >= 2, got {n}")));
    }
    let weights = opts.weights.unwrap_or_else(|| vec![1.0; n]);
    let measure = opts.measure.unwrap_or_else(|| vec![1.0; n]);
    if weights.len() != n || measure.len() != n {
        return Err(Error::InvalidParameter(format!("cycle({n}) needs {n} weights and {n} measure values")));
    }
    let constant = weights.iter().all(|&w| w == weights[0]);
    if !constant && !opts.allow_unbalanced {
        return Err(Error::InvalidParameter(
            "non-constant cycle weights violate Kirchhoff balance; set allow_unbalanced".into(),
        ));
    }
    let vertices = (0..n).map(|i| (VertexId::from(i), measure[i])).collect();
    let edges = (0..n).map(|i| (VertexId::from(i), VertexId::from((i + 1) % n), weights[i])).collect();
    DirectedWeightedGraph::from_parts(vertices, edges)
}

/// Symmetric star: center `c`, leaves `1..=q`, unit weights both ways.
pub fn symmetric_star(q: usize) -> Result<DirectedWeightedGraph> {
    if q < 1 {
        return Err(Error::InvalidParameter("star needs q >= 1".into()));
    }
    let mut b = DirectedWeightedGraph::builder().vertex("c", 1.0);
    for leaf in 1..=q {
        b = b.vertex(leaf, 1.0).symmetric_edge("c", leaf, 1.0);
    }
    b.build()
}

/// Uniform random labeled tree on `0..n` (Prüfer decoding), symmetrized with
/// unit weights.
pub fn random_tree(n: usize, seed: GeneratorSeed) -> Result<DirectedWeightedGraph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("tree needs n >= 2, got {n}")));
    }
    let mut rng = seed.rng();
    let code: Vec<usize> = (0..n.saturating_sub(2)).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut pairs = Vec::with_capacity(n - 1);
    for &c in &code {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a Prüfer leaf always exists");
        pairs.push((leaf, c));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    pairs.push((rest[0], rest[1]));

    let mut b = DirectedWeightedGraph::builder().vertices(0..n);
    for (x, y) in pairs {
        b = b.symmetric_edge(x, y, 1.0);
    }
    b.build()
}

/// Random strongly connected Kirchhoff-balanced digraph on `0..n`: a weighted
/// Hamiltonian cycle plus `extra_cycles` random weighted directed cycles.
pub fn random_balanced(n: usize, extra_cycles: usize, seed: GeneratorSeed) -> Result<DirectedWeightedGraph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("random_balanced needs n >= 2, got {n}")));
    }
    let mut rng = seed.rng();
    let mut weights: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut add_cycle = |order: &[usize], w: f64| {
        for k in 0..order.len() {
            let e = (order[k], order[(k + 1) % order.len()]);
            *weights.entry(e).or_insert(0.0) += w;
        }
    };

    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let w = rng.gen_range(WEIGHT_RANGE);
    add_cycle(&perm, w);

    for _ in 0..extra_cycles {
        let len = rng.gen_range(2..=n);
        let mut pool: Vec<usize> = (0..n).collect();
        pool.shuffle(&mut rng);
        pool.truncate(len);
        let w = rng.gen_range(WEIGHT_RANGE);
        add_cycle(&pool, w);
    }

    let vertices = (0..n).map(|i| (VertexId::from(i), 1.0)).collect();
    let edges = weights.into_iter().map(|((i, j), b)| (VertexId::from(i), VertexId::from(j), b)).collect();
    DirectedWeightedGraph::from_parts(vertices, edges)
}

/// Same graph with every id passed through `rename`.
pub fn relabel(g: &DirectedWeightedGraph, rename: impl Fn(&VertexId) -> VertexId) -> Result<DirectedWeightedGraph> {
    let vertices = g.vertex_ids().iter().zip(g.measure()).map(|(id, &m)| (rename(id), m)).collect();
    let edges = g.edges().map(|(x, y, b)| (rename(x), rename(y), b)).collect();
    DirectedWeightedGraph::from_parts(vertices, edges)
}

pub fn with_prefix(g: &DirectedWeightedGraph, prefix: &str) -> Result<DirectedWeightedGraph> {
    relabel(g, |id| VertexId::from(format!("{prefix}{id}")))
}

#[derive(Debug, Clone)]
pub struct Petal {
    pub graph: DirectedWeightedGraph,
    pub attach_core: VertexId,
    pub attach_petal: VertexId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PetalRecord {
    /// Petal vertex set in the composed graph, attach vertex included.
    pub vertices: Vec<VertexId>,
    pub attach: VertexId,
}

/// A graph together with a witness that it is flower-like with respect to
/// its core subgraph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowerDecomposition {
    pub core: Vec<VertexId>,
    pub petals: Vec<PetalRecord>,
    pub graph: DirectedWeightedGraph,
}

impl FlowerDecomposition {
    pub fn core_graph(&self) -> Result<DirectedWeightedGraph> {
        self.graph.induced_subgraph(&self.core)
    }

    /// Re-checks the three flower conditions on `graph`.
    pub fn verify(&self) -> Result<()> {
        let g = &self.graph;
        let core = g.index_set(&self.core)?;
        if core.is_empty() {
            return Err(Error::Flower("core is empty".into()));
        }
        let mut covered = vec![false; g.vertex_count()];
        for &i in &core {
            covered[i] = true;
        }
        let mut owner = vec![usize::MAX; g.vertex_count()];
        for (p, petal) in self.petals.iter().enumerate() {
            let members = g.index_set(&petal.vertices)?;
            let shared: Vec<&VertexId> =
                members.iter().filter(|i| core.binary_search(i).is_ok()).map(|&i| &g.vertex_ids()[i]).collect();
            if shared != [&petal.attach] {
                return Err(Error::Flower(format!(
                    "petal {p} meets the core in {shared:?}, expected exactly {{{}}}",
                    petal.attach
                )));
            }
            let interior = g.boundary_sets(&petal.vertices)?.interior;
            for id in &interior {
                let i = g.require_index(id)?;
                if owner[i] != usize::MAX {
                    return Err(Error::Flower(format!(
                        "vertex {id} lies in the interiors of petals {} and {p}",
                        owner[i]
                    )));
                }
                owner[i] = p;
                covered[i] = true;
            }
        }
        if let Some(i) = covered.iter().position(|&c| !c) {
            return Err(Error::Flower(format!(
                "vertex {} is neither in the core nor in a petal interior",
                g.vertex_ids()[i]
            )));
        }
        for ((i, j), _) in g.indexed_edges() {
            if owner[i] != usize::MAX && owner[j] != usize::MAX && owner[i] != owner[j] {
                return Err(Error::Flower(format!(
                    "petal interiors {} and {} are adjacent via ({}, {})",
                    owner[i],
                    owner[j],
                    g.vertex_ids()[i],
                    g.vertex_ids()[j]
                )));
            }
        }
        Ok(())
    }
}

/// Glues each petal onto the core by identifying `attach_petal` with
/// `attach_core`. The glued vertex keeps the core's measure.
pub fn flower_compose(core: &DirectedWeightedGraph, petals: Vec<Petal>) -> Result<FlowerDecomposition> {
    let mut vertices: Vec<(VertexId, f64)> =
        core.vertex_ids().iter().cloned().zip(core.measure().iter().copied()).collect();
    let mut edges: Vec<(VertexId, VertexId, f64)> = core.edges().map(|(x, y, b)| (x.clone(), y.clone(), b)).collect();
    let mut used: HashSet<VertexId> = core.vertex_ids().iter().cloned().collect();
    let mut attach_points = HashSet::new();
    let mut records = Vec::with_capacity(petals.len());

    for (p, petal) in petals.into_iter().enumerate() {
        if !core.contains_vertex(&petal.attach_core) {
            return Err(Error::UnknownVertex(petal.attach_core.to_string()));
        }
        if !petal.graph.contains_vertex(&petal.attach_petal) {
            return Err(Error::UnknownVertex(petal.attach_petal.to_string()));
        }
        if !attach_points.insert(petal.attach_core.clone()) {
            return Err(Error::Flower(format!("core vertex {} already carries a petal", petal.attach_core)));
        }
        let rename = |id: &VertexId| {
            if *id == petal.attach_petal {
                petal.attach_core.clone()
            } else {
                id.clone()
            }
        };
        let mut members = vec![petal.attach_core.clone()];
        for (id, &m) in petal.graph.vertex_ids().iter().zip(petal.graph.measure()) {
            if *id == petal.attach_petal {
                continue;
            }
            if used.contains(id) {
                return Err(Error::Flower(format!("petal {p} shares vertex {id} with the core or another petal")));
            }
            used.insert(id.clone());
            vertices.push((id.clone(), m));
            members.push(id.clone());
        }
        edges.extend(petal.graph.edges().map(|(x, y, b)| (rename(x), rename(y), b)));
        records.push(PetalRecord { vertices: members, attach: petal.attach_core.clone() });
    }

    let graph = DirectedWeightedGraph::from_parts(vertices, edges)?;
    let flower = FlowerDecomposition { core: core.vertex_ids().to_vec(), petals: records, graph };
    flower.verify()?;
    Ok(flower)
}

/// True when `g` passes the balance test at the default tolerance.
pub fn is_balanced(g: &DirectedWeightedGraph) -> bool {
    g.validate(DEFAULT_BALANCE_TOL).beta_balanced
}
