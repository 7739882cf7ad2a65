//! Finite directed weighted graphs `(V, E, b, m)`.
//!
//! A graph stores a positive measure `m` on vertices and a positive weight
//! `b` on directed edges. There are no loops and at most one edge per ordered
//! pair; parallel edges given at construction are merged by summing weights.
//! Vertices keep a canonical order (insertion order unless re-sorted) so that
//! every matrix and spectrum built from a graph is reproducible.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::GraphDocument;

/// Default relative tolerance for the Kirchhoff balance test.
pub const DEFAULT_BALANCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(String);

impl VertexId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId(s.to_owned())
    }
}

impl From<String> for VertexId {
    fn from(s: String) -> Self {
        VertexId(s)
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId(i.to_string())
    }
}

/// A directed edge given by its endpoints.
pub type Edge = (VertexId, VertexId);

/// Convenience: build an id list from anything id-like.
pub fn ids<I, T>(items: I) -> Vec<VertexId>
where
    I: IntoIterator<Item = T>,
    T: Into<VertexId>,
{
    items.into_iter().map(Into::into).collect()
}

#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    vertices: Vec<(VertexId, f64)>,
    edges: Vec<(VertexId, VertexId, f64)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, id: impl Into<VertexId>, m: f64) -> Self {
        self.vertices.push((id.into(), m));
        self
    }

    pub fn vertices<I, T>(mut self, ids: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<VertexId>,
    {
        self.vertices.extend(ids.into_iter().map(|id| (id.into(), 1.0)));
        self
    }

    pub fn edge(mut self, from: impl Into<VertexId>, to: impl Into<VertexId>, b: f64) -> Self {
        self.edges.push((from.into(), to.into(), b));
        self
    }

    /// Adds `b` in both directions.
    pub fn symmetric_edge(self, x: impl Into<VertexId>, y: impl Into<VertexId>, b: f64) -> Self {
        let (x, y) = (x.into(), y.into());
        self.edge(x.clone(), y.clone(), b).edge(y, x, b)
    }

    pub fn build(self) -> Result<DirectedWeightedGraph> {
        DirectedWeightedGraph::from_parts(self.vertices, self.edges)
    }
}

/// Serializes through the graph JSON document format.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(into = "GraphDocument", try_from = "GraphDocument")]
pub struct DirectedWeightedGraph {
    ids: Vec<VertexId>,
    measure: Vec<f64>,
    index: HashMap<VertexId, usize>,
    edges: BTreeMap<(usize, usize), f64>,
    out_adj: Vec<Vec<(usize, f64)>>,
    in_adj: Vec<Vec<(usize, f64)>>,
    merged_parallel: bool,
}

impl PartialEq for DirectedWeightedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.measure == other.measure && self.edges == other.edges
    }
}

impl DirectedWeightedGraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::new()
    }

    pub fn from_parts(vertices: Vec<(VertexId, f64)>, edges: Vec<(VertexId, VertexId, f64)>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        let mut ids = Vec::with_capacity(vertices.len());
        let mut measure = Vec::with_capacity(vertices.len());
        let mut index = HashMap::with_capacity(vertices.len());
        for (id, m) in vertices {
            if id.0.is_empty() {
                return Err(Error::EmptyVertexId);
            }
            if !(m > 0.0 && m.is_finite()) {
                return Err(Error::NonPositiveMeasure { vertex: id.0, value: m });
            }
            if index.insert(id.clone(), ids.len()).is_some() {
                return Err(Error::DuplicateVertex(id.0));
            }
            ids.push(id);
            measure.push(m);
        }

        let mut merged_parallel = false;
        let mut map = BTreeMap::new();
        for (from, to, b) in edges {
            let i = *index.get(&from).ok_or_else(|| Error::UnknownVertex(from.0.clone()))?;
            let j = *index.get(&to).ok_or_else(|| Error::UnknownVertex(to.0.clone()))?;
            if i == j {
                return Err(Error::SelfLoop(from.0));
            }
            if !(b > 0.0 && b.is_finite()) {
                return Err(Error::NonPositiveWeight { from: from.0, to: to.0, value: b });
            }
            match map.entry((i, j)) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(b);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += b;
                    merged_parallel = true;
                }
            }
        }
        Ok(Self::assemble(ids, measure, index, map, merged_parallel))
    }

    fn assemble(
        ids: Vec<VertexId>,
        measure: Vec<f64>,
        index: HashMap<VertexId, usize>,
        edges: BTreeMap<(usize, usize), f64>,
        merged_parallel: bool,
    ) -> Self {
        let n = ids.len();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for (&(i, j), &b) in &edges {
            out_adj[i].push((j, b));
            in_adj[j].push((i, b));
        }
        for list in &mut in_adj {
            list.sort_by_key(|&(i, _)| i);
        }
        Self { ids, measure, index, edges, out_adj, in_adj, merged_parallel }
    }

    /// Rebuilds from index-level data; callers guarantee validity.
    fn from_indexed(ids: Vec<VertexId>, measure: Vec<f64>, edges: BTreeMap<(usize, usize), f64>) -> Self {
        let index = ids.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect();
        Self::assemble(ids, measure, index, edges, false)
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn measure(&self) -> &[f64] {
        &self.measure
    }

    pub fn index_of(&self, id: &VertexId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub(crate) fn require_index(&self, id: &VertexId) -> Result<usize> {
        self.index_of(id).ok_or_else(|| Error::UnknownVertex(id.0.clone()))
    }

    pub fn contains_vertex(&self, id: &VertexId) -> bool {
        self.index.contains_key(id)
    }

    /// True when construction merged at least one pair of parallel edges.
    pub fn merged_parallel_edges(&self) -> bool {
        self.merged_parallel
    }

    /// `b(x, y)`, zero when `(x, y)` is not an edge.
    pub fn weight(&self, x: &VertexId, y: &VertexId) -> f64 {
        match (self.index_of(x), self.index_of(y)) {
            (Some(i), Some(j)) => self.weight_at(i, j),
            _ => 0.0,
        }
    }

    pub fn weight_at(&self, i: usize, j: usize) -> f64 {
        self.edges.get(&(i, j)).copied().unwrap_or(0.0)
    }

    pub fn contains_edge(&self, x: &VertexId, y: &VertexId) -> bool {
        self.weight(x, y) > 0.0
    }

    /// Edges as `((i, j), b)` in canonical index order.
    pub fn indexed_edges(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.edges.iter().map(|(&k, &b)| (k, b))
    }

    pub fn edges(&self) -> impl Iterator<Item = (&VertexId, &VertexId, f64)> + '_ {
        self.edges.iter().map(|(&(i, j), &b)| (&self.ids[i], &self.ids[j], b))
    }

    pub fn edge_list(&self) -> Vec<Edge> {
        self.edges().map(|(x, y, _)| (x.clone(), y.clone())).collect()
    }

    pub fn out_edges(&self, i: usize) -> &[(usize, f64)] {
        &self.out_adj[i]
    }

    pub fn in_edges(&self, i: usize) -> &[(usize, f64)] {
        &self.in_adj[i]
    }

    pub fn beta_plus_at(&self, i: usize) -> f64 {
        self.out_adj[i].iter().map(|&(_, b)| b).sum()
    }

    pub fn beta_minus_at(&self, i: usize) -> f64 {
        self.in_adj[i].iter().map(|&(_, b)| b).sum()
    }

    pub fn beta_plus(&self) -> Vec<f64> {
        (0..self.vertex_count()).map(|i| self.beta_plus_at(i)).collect()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.values().sum()
    }

    /// Undirected neighbor indices `V_x = V_x+ ∪ V_x-`, ascending.
    pub fn neighbors_at(&self, i: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self.out_adj[i].iter().chain(self.in_adj[i].iter()).map(|&(j, _)| j).collect();
        set.into_iter().collect()
    }

    /// Same graph with the vertex order sorted by id.
    pub fn sorted_by_id(&self) -> Self {
        let mut order: Vec<usize> = (0..self.vertex_count()).collect();
        order.sort_by(|&a, &b| self.ids[a].cmp(&self.ids[b]));
        self.reordered(&order)
    }

    /// Same graph with vertices listed in `order` (a permutation of indices).
    pub fn reordered(&self, order: &[usize]) -> Self {
        let mut new_pos = vec![0; order.len()];
        for (p, &old) in order.iter().enumerate() {
            new_pos[old] = p;
        }
        let ids = order.iter().map(|&i| self.ids[i].clone()).collect();
        let measure = order.iter().map(|&i| self.measure[i]).collect();
        let edges = self.edges.iter().map(|(&(i, j), &b)| ((new_pos[i], new_pos[j]), b)).collect();
        Self::from_indexed(ids, measure, edges)
    }

    /// Same vertices and edges with a replacement measure.
    pub fn with_measure(&self, measure: Vec<f64>) -> Result<Self> {
        if measure.len() != self.vertex_count() {
            return Err(Error::InvalidParameter(format!(
                "measure has {} entries for {} vertices",
                measure.len(),
                self.vertex_count()
            )));
        }
        for (id, &m) in self.ids.iter().zip(&measure) {
            if !(m > 0.0 && m.is_finite()) {
                return Err(Error::NonPositiveMeasure { vertex: id.0.clone(), value: m });
            }
        }
        let mut g = self.clone();
        g.measure = measure;
        Ok(g)
    }

    pub fn is_symmetric(&self) -> bool {
        self.edges.iter().all(|(&(i, j), &b)| self.edges.get(&(j, i)) == Some(&b))
    }

    pub fn degree_profile(&self, x: &VertexId) -> Result<DegreeProfile> {
        let i = self.require_index(x)?;
        let out_neighbors: Vec<VertexId> = self.out_adj[i].iter().map(|&(j, _)| self.ids[j].clone()).collect();
        let in_neighbors: Vec<VertexId> = self.in_adj[i].iter().map(|&(j, _)| self.ids[j].clone()).collect();
        let all_neighbors: Vec<VertexId> = self.neighbors_at(i).into_iter().map(|j| self.ids[j].clone()).collect();
        let beta_plus = self.beta_plus_at(i);
        let beta_minus = self.beta_minus_at(i);
        Ok(DegreeProfile {
            valency: all_neighbors.len(),
            out_neighbors,
            in_neighbors,
            all_neighbors,
            beta_plus,
            beta_minus,
            beta_total: beta_plus + beta_minus,
        })
    }

    pub fn validate(&self, tol: f64) -> ValidationReport {
        let n = self.vertex_count();
        let mut cnx_failures = Vec::new();
        let mut beta_defect = Vec::with_capacity(n);
        let mut max_defect: f64 = 0.0;
        let mut max_beta_plus: f64 = 0.0;
        for i in 0..n {
            if self.out_adj[i].is_empty() || self.in_adj[i].is_empty() {
                cnx_failures.push(self.ids[i].clone());
            }
            let bp = self.beta_plus_at(i);
            let defect = bp - self.beta_minus_at(i);
            max_defect = max_defect.max(defect.abs());
            max_beta_plus = max_beta_plus.max(bp);
            beta_defect.push(BetaDefect { vertex: self.ids[i].clone(), defect });
        }
        ValidationReport {
            has_loops: self.edges.keys().any(|&(i, j)| i == j),
            weights_positive: self.edges.values().all(|&b| b > 0.0) && self.measure.iter().all(|&m| m > 0.0),
            hypothesis_cnx: cnx_failures.is_empty(),
            hypothesis_cnx_failures: cnx_failures,
            connected: self.is_connected(),
            strongly_connected: self.is_strongly_connected(),
            beta_balanced: max_defect <= tol * max_beta_plus.max(1.0),
            max_beta_defect: max_defect,
            beta_defect,
            merged_parallel_edges: self.merged_parallel,
            tolerance_used: tol,
        }
    }

    /// Connectivity through the undirected support `E`.
    pub fn is_connected(&self) -> bool {
        let seen = self.reach(0, |i| self.neighbors_at(i));
        seen.iter().all(|&s| s)
    }

    pub fn is_strongly_connected(&self) -> bool {
        let fwd = self.reach(0, |i| self.out_adj[i].iter().map(|&(j, _)| j).collect());
        let bwd = self.reach(0, |i| self.in_adj[i].iter().map(|&(j, _)| j).collect());
        fwd.iter().chain(bwd.iter()).all(|&s| s)
    }

    fn reach(&self, start: usize, next: impl Fn(usize) -> Vec<usize>) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(i) = queue.pop_front() {
            for j in next(i) {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        seen
    }

    /// Resolves a vertex list to sorted, de-duplicated canonical indices.
    pub(crate) fn index_set(&self, set: &[VertexId]) -> Result<Vec<usize>> {
        let mut idx = set.iter().map(|id| self.require_index(id)).collect::<Result<Vec<_>>>()?;
        idx.sort_unstable();
        idx.dedup();
        Ok(idx)
    }

    /// Subgraph induced by `subset`: every edge of `self` with both endpoints
    /// in the subset is kept. Canonical order is inherited.
    pub fn induced_subgraph(&self, subset: &[VertexId]) -> Result<Self> {
        if subset.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        let keep = self.index_set(subset)?;
        let mut new_pos = vec![usize::MAX; self.vertex_count()];
        for (p, &i) in keep.iter().enumerate() {
            new_pos[i] = p;
        }
        let edges = self
            .edges
            .iter()
            .filter(|(&(i, j), _)| new_pos[i] != usize::MAX && new_pos[j] != usize::MAX)
            .map(|(&(i, j), &b)| ((new_pos[i], new_pos[j]), b))
            .collect();
        let ids = keep.iter().map(|&i| self.ids[i].clone()).collect();
        let measure = keep.iter().map(|&i| self.measure[i]).collect();
        Ok(Self::from_indexed(ids, measure, edges))
    }

    fn edge_index_set(&self, edges: &[Edge]) -> Result<BTreeMap<(usize, usize), f64>> {
        let mut out = BTreeMap::new();
        for (x, y) in edges {
            let i = self.require_index(x)?;
            let j = self.require_index(y)?;
            let b = self
                .edges
                .get(&(i, j))
                .copied()
                .ok_or_else(|| Error::EdgeNotInGraph { from: x.0.clone(), to: y.0.clone() })?;
            out.insert((i, j), b);
        }
        Ok(out)
    }

    /// Partial graph: all vertices kept, edges restricted to `edges`.
    pub fn partial_graph(&self, edges: &[Edge]) -> Result<Self> {
        let kept = self.edge_index_set(edges)?;
        Ok(Self::from_indexed(self.ids.clone(), self.measure.clone(), kept))
    }

    /// A part `(V_U, E_U)`: any vertex subset with any edge subset whose
    /// endpoints lie in it. Induced edges are not added.
    pub fn part(&self, vertices: &[VertexId], edges: &[Edge]) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        let keep = self.index_set(vertices)?;
        let kept = self.edge_index_set(edges)?;
        let mut new_pos = vec![usize::MAX; self.vertex_count()];
        for (p, &i) in keep.iter().enumerate() {
            new_pos[i] = p;
        }
        let mut remapped = BTreeMap::new();
        for ((i, j), b) in kept {
            if new_pos[i] == usize::MAX || new_pos[j] == usize::MAX {
                return Err(Error::EndpointOutsidePart { from: self.ids[i].0.clone(), to: self.ids[j].0.clone() });
            }
            remapped.insert((new_pos[i], new_pos[j]), b);
        }
        let ids = keep.iter().map(|&i| self.ids[i].clone()).collect();
        let measure = keep.iter().map(|&i| self.measure[i]).collect();
        Ok(Self::from_indexed(ids, measure, remapped))
    }

    /// Interior, vertex boundary and edge boundary of `omega`.
    pub fn boundary_sets(&self, omega: &[VertexId]) -> Result<BoundarySets> {
        let inside = self.membership(omega)?;
        let n = self.vertex_count();
        let interior = (0..n)
            .filter(|&i| inside[i] && self.neighbors_at(i).iter().all(|&j| inside[j]))
            .map(|i| self.ids[i].clone())
            .collect();
        let mut in_boundary = vec![false; n];
        for i in (0..n).filter(|&i| inside[i]) {
            for j in self.neighbors_at(i) {
                if !inside[j] {
                    in_boundary[j] = true;
                }
            }
        }
        let vertex_boundary = (0..n).filter(|&i| in_boundary[i]).map(|i| self.ids[i].clone()).collect();
        let edge_boundary = self
            .edges
            .keys()
            .filter(|&&(i, j)| inside[i] != inside[j])
            .map(|&(i, j)| (self.ids[i].clone(), self.ids[j].clone()))
            .collect();
        Ok(BoundarySets { interior, vertex_boundary, edge_boundary })
    }

    pub(crate) fn membership(&self, set: &[VertexId]) -> Result<Vec<bool>> {
        let mut inside = vec![false; self.vertex_count()];
        for id in set {
            inside[self.require_index(id)?] = true;
        }
        Ok(inside)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub out_neighbors: Vec<VertexId>,
    pub in_neighbors: Vec<VertexId>,
    pub all_neighbors: Vec<VertexId>,
    pub beta_plus: f64,
    pub beta_minus: f64,
    pub beta_total: f64,
    pub valency: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaDefect {
    pub vertex: VertexId,
    pub defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub has_loops: bool,
    pub weights_positive: bool,
    /// Every vertex has at least one out- and one in-neighbor.
    pub hypothesis_cnx: bool,
    pub hypothesis_cnx_failures: Vec<VertexId>,
    pub connected: bool,
    pub strongly_connected: bool,
    pub beta_balanced: bool,
    pub max_beta_defect: f64,
    /// `beta+(x) - beta-(x)` per vertex, canonical order.
    pub beta_defect: Vec<BetaDefect>,
    pub merged_parallel_edges: bool,
    pub tolerance_used: f64,
}

impl ValidationReport {
    /// All structural checks a graph needs before operators are assembled.
    pub fn is_valid(&self) -> bool {
        !self.has_loops && self.weights_positive && self.hypothesis_cnx && self.connected && self.beta_balanced
    }

    /// First vertex with the largest `|beta+ - beta-|`.
    pub fn worst_defect(&self) -> Option<&BetaDefect> {
        self.beta_defect.iter().fold(None, |best: Option<&BetaDefect>, d| match best {
            Some(b) if b.defect.abs() >= d.defect.abs() => Some(b),
            _ => Some(d),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundarySets {
    pub interior: Vec<VertexId>,
    pub vertex_boundary: Vec<VertexId>,
    pub edge_boundary: Vec<Edge>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> DirectedWeightedGraph {
        let mut b = DirectedWeightedGraph::builder().vertices(0..n);
        for i in 0..n {
            b = b.edge(i, (i + 1) % n, 1.0);
        }
        b.build().unwrap()
    }

    fn sym_triangle() -> DirectedWeightedGraph {
        DirectedWeightedGraph::builder()
            .vertices(["a", "b", "c"])
            .symmetric_edge("a", "b", 1.0)
            .symmetric_edge("b", "c", 1.0)
            .symmetric_edge("c", "a", 1.0)
            .build()
            .unwrap()
    }

    fn e(x: impl Into<VertexId>, y: impl Into<VertexId>) -> Edge {
        (x.into(), y.into())
    }

    #[test]
    fn degree_profile_on_c3() {
        let p = cycle(3).degree_profile(&0.into()).unwrap();
        assert_eq!(p.out_neighbors, ids([1usize]));
        assert_eq!(p.in_neighbors, ids([2usize]));
        assert_eq!((p.beta_plus, p.beta_minus, p.valency), (1.0, 1.0, 2));
    }

    #[test]
    fn degree_profile_on_symmetric_triangle() {
        let g = sym_triangle();
        for x in g.vertex_ids() {
            let p = g.degree_profile(x).unwrap();
            assert_eq!((p.beta_plus, p.beta_minus, p.valency), (2.0, 2.0, 2));
            assert_eq!(p.beta_total, 4.0);
        }
    }

    #[test]
    fn degree_profile_unbalanced_pair() {
        let g = DirectedWeightedGraph::builder()
            .vertices(["a", "b"])
            .edge("a", "b", 3.0)
            .edge("b", "a", 1.0)
            .build()
            .unwrap();
        let p = g.degree_profile(&"a".into()).unwrap();
        assert_eq!((p.beta_plus, p.beta_minus), (3.0, 1.0));
        let report = g.validate(DEFAULT_BALANCE_TOL);
        assert_eq!(report.beta_defect[0].defect, 2.0);
        assert!(!report.beta_balanced);
    }

    #[test]
    fn unknown_vertex_is_named() {
        let err = cycle(3).degree_profile(&"zz".into()).unwrap_err();
        assert_eq!(err, Error::UnknownVertex("zz".into()));
    }

    #[test]
    fn construction_errors() {
        let loop_err = DirectedWeightedGraph::builder().vertices(["a"]).edge("a", "a", 1.0).build();
        assert_eq!(loop_err.unwrap_err(), Error::SelfLoop("a".into()));
        let neg = DirectedWeightedGraph::builder().vertices(["a", "b"]).edge("a", "b", -1.0).build();
        assert!(matches!(neg, Err(Error::NonPositiveWeight { .. })));
        let m0 = DirectedWeightedGraph::builder().vertex("a", 0.0).build();
        assert!(matches!(m0, Err(Error::NonPositiveMeasure { .. })));
        let dup = DirectedWeightedGraph::builder().vertices(["a", "a"]).build();
        assert_eq!(dup.unwrap_err(), Error::DuplicateVertex("a".into()));
        let dangling = DirectedWeightedGraph::builder().vertices(["a"]).edge("a", "b", 1.0).build();
        assert_eq!(dangling.unwrap_err(), Error::UnknownVertex("b".into()));
        assert_eq!(DirectedWeightedGraph::builder().build().unwrap_err(), Error::EmptyVertexSet);
    }

    #[test]
    fn parallel_edges_merge() {
        let g = DirectedWeightedGraph::builder()
            .vertices(["a", "b"])
            .edge("a", "b", 1.0)
            .edge("a", "b", 2.5)
            .edge("b", "a", 3.5)
            .build()
            .unwrap();
        assert!(g.merged_parallel_edges());
        assert_eq!(g.weight(&"a".into(), &"b".into()), 3.5);
        assert!(g.validate(1e-12).beta_balanced);
    }

    #[test]
    fn validate_cycles() {
        for n in 2..8 {
            let r = cycle(n).validate(DEFAULT_BALANCE_TOL);
            assert!(r.is_valid() && r.strongly_connected);
            assert!(r.beta_defect.iter().all(|d| d.defect == 0.0));
        }
    }

    #[test]
    fn validate_single_edge_path() {
        let g = DirectedWeightedGraph::builder().vertices(["a", "b"]).edge("a", "b", 1.0).build().unwrap();
        let r = g.validate(DEFAULT_BALANCE_TOL);
        assert!(!r.hypothesis_cnx);
        assert_eq!(r.hypothesis_cnx_failures, ids(["a", "b"]));
        assert!(!r.beta_balanced);
        assert!(r.connected && !r.strongly_connected);
    }

    #[test]
    fn induced_subgraph_of_c4() {
        let h = cycle(4).induced_subgraph(&ids([0usize, 1, 2])).unwrap();
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.edge_list(), vec![e(0usize, 1usize), e(1usize, 2usize)]);
        let g = sym_triangle();
        assert_eq!(g.induced_subgraph(g.vertex_ids()).unwrap(), g);
        let ab = g.induced_subgraph(&ids(["a", "b"])).unwrap();
        assert_eq!(ab.edge_list(), vec![e("a", "b"), e("b", "a")]);
        assert_eq!(g.induced_subgraph(&[]).unwrap_err(), Error::EmptyVertexSet);
        assert!(matches!(g.induced_subgraph(&ids(["q"])), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn partial_graphs() {
        let g = cycle(4);
        assert_eq!(g.partial_graph(&g.edge_list()).unwrap(), g);
        let empty = g.partial_graph(&[]).unwrap();
        assert_eq!((empty.vertex_count(), empty.edge_count()), (4, 0));
        let two = g.partial_graph(&[e(0usize, 1usize), e(2usize, 3usize)]).unwrap();
        assert_eq!((two.vertex_count(), two.edge_count()), (4, 2));
        let err = g.partial_graph(&[e(1usize, 0usize)]).unwrap_err();
        assert_eq!(err, Error::EdgeNotInGraph { from: "1".into(), to: "0".into() });
    }

    #[test]
    fn parts_are_not_subgraphs() {
        let g = sym_triangle();
        let p = g.part(&ids(["a", "b", "c"]), &[e("a", "b")]).unwrap();
        assert_eq!((p.vertex_count(), p.edge_count()), (3, 1));
        assert_eq!(g.part(g.vertex_ids(), &g.edge_list()).unwrap(), g);

        let c4 = cycle(4);
        let part = c4.part(&ids([0usize, 1, 2]), &[e(0usize, 1usize)]).unwrap();
        let sub = c4.induced_subgraph(&ids([0usize, 1, 2])).unwrap();
        assert_eq!(part.edge_count(), 1);
        assert!(sub.contains_edge(&1.into(), &2.into()));
        let err = c4.part(&ids([0usize, 1]), &[e(1usize, 2usize)]).unwrap_err();
        assert!(matches!(err, Error::EndpointOutsidePart { .. }));
    }

    #[test]
    fn boundary_sets_of_c4() {
        let g = cycle(4);
        let b = g.boundary_sets(&ids([0usize, 1])).unwrap();
        assert!(b.interior.is_empty());
        assert_eq!(b.vertex_boundary, ids([2usize, 3]));
        assert_eq!(b.edge_boundary, vec![e(1usize, 2usize), e(3usize, 0usize)]);

        let all = g.boundary_sets(g.vertex_ids()).unwrap();
        assert_eq!(all.interior, g.vertex_ids().to_vec());
        assert!(all.vertex_boundary.is_empty() && all.edge_boundary.is_empty());

        let single = g.boundary_sets(&ids([2usize])).unwrap();
        assert!(single.interior.is_empty());
        assert_eq!(single.vertex_boundary, ids([1usize, 3]));
        assert_eq!(single.edge_boundary, vec![e(1usize, 2usize), e(2usize, 3usize)]);
    }

    #[test]
    fn sorting_by_id_keeps_structure() {
        let g = DirectedWeightedGraph::builder()
            .vertex("c", 2.0)
            .vertex("a", 1.0)
            .vertex("b", 3.0)
            .edge("c", "a", 1.0)
            .edge("a", "b", 1.0)
            .edge("b", "c", 1.0)
            .build()
            .unwrap();
        let s = g.sorted_by_id();
        assert_eq!(s.vertex_ids(), ids(["a", "b", "c"]).as_slice());
        assert_eq!(s.measure(), &[1.0, 3.0, 2.0]);
        assert_eq!(s.weight(&"c".into(), &"a".into()), 1.0);
        assert_eq!(s.edge_count(), 3);
    }
}
