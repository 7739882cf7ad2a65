//! Decompositions `G = A ∪ B ∪ U` with two subgraphs `A`, `B` and a part `U`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DirectedWeightedGraph, Edge, VertexId};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub a_vertices: Vec<VertexId>,
    pub b_vertices: Vec<VertexId>,
    pub u_vertices: Vec<VertexId>,
    pub a_edges: Vec<Edge>,
    pub b_edges: Vec<Edge>,
    pub u_edges: Vec<Edge>,
}

impl Partition {
    /// The decomposition determined by `V_A = a` and `V_B = V \ a`: `A` and
    /// `B` are the induced subgraphs, `E_U` the edges between them, and
    /// `V_U` every vertex outside the two interiors.
    pub fn from_split(g: &DirectedWeightedGraph, a: &[VertexId]) -> Result<Self> {
        let in_a = g.membership(a)?;
        let ids = g.vertex_ids();
        let a_vertices: Vec<VertexId> = (0..ids.len()).filter(|&i| in_a[i]).map(|i| ids[i].clone()).collect();
        let b_vertices: Vec<VertexId> = (0..ids.len()).filter(|&i| !in_a[i]).map(|i| ids[i].clone()).collect();
        let (mut a_edges, mut b_edges, mut u_edges) = (Vec::new(), Vec::new(), Vec::new());
        for ((i, j), _) in g.indexed_edges() {
            let e = (ids[i].clone(), ids[j].clone());
            match (in_a[i], in_a[j]) {
                (true, true) => a_edges.push(e),
                (false, false) => b_edges.push(e),
                _ => u_edges.push(e),
            }
        }
        let interior: BTreeSet<VertexId> =
            g.boundary_sets(&a_vertices)?.interior.into_iter().chain(g.boundary_sets(&b_vertices)?.interior).collect();
        let u_vertices = ids.iter().filter(|id| !interior.contains(id)).cloned().collect();
        Ok(Partition { a_vertices, b_vertices, u_vertices, a_edges, b_edges, u_edges })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub holds: bool,
    /// One line per violation, naming the offending vertices or edges.
    pub violations: Vec<String>,
}

impl ConditionReport {
    fn from(violations: Vec<String>) -> Self {
        ConditionReport { holds: violations.is_empty(), violations }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    /// `V = V_A ⊔ V_B = V_Å ⊔ V_B̊ ⊔ V_U`.
    pub condition1: ConditionReport,
    /// `E = E_A ⊔ E_B ⊔ E_U`, with `A` and `B` subgraphs and `U` a part.
    pub condition2: ConditionReport,
    /// `∂_E A = ∂_E B = E_U`.
    pub condition3: ConditionReport,
    pub interior_a: Vec<VertexId>,
    pub interior_b: Vec<VertexId>,
}

impl PartitionReport {
    pub fn pass(&self) -> bool {
        self.condition1.holds && self.condition2.holds && self.condition3.holds
    }

    /// The first violated condition as an error.
    pub fn into_result(self) -> Result<Self> {
        for (k, c) in [(1, &self.condition1), (2, &self.condition2), (3, &self.condition3)] {
            if !c.holds {
                return Err(Error::Hypothesis(format!("partition condition ({k}) fails: {}", c.violations.join("; "))));
            }
        }
        Ok(self)
    }
}

fn edge_str(e: &Edge) -> String {
    format!("({},{})", e.0, e.1)
}

fn vertex_set(g: &DirectedWeightedGraph, name: &str, set: &[VertexId], out: &mut Vec<String>) -> BTreeSet<VertexId> {
    let mut seen = BTreeSet::new();
    for v in set {
        if !g.contains_vertex(v) {
            out.push(format!("{name} names unknown vertex {v}"));
        } else if !seen.insert(v.clone()) {
            out.push(format!("{name} lists vertex {v} twice"));
        }
    }
    seen
}

fn edge_set(g: &DirectedWeightedGraph, name: &str, set: &[Edge], out: &mut Vec<String>) -> BTreeSet<Edge> {
    let mut seen = BTreeSet::new();
    for e in set {
        if !g.contains_edge(&e.0, &e.1) {
            out.push(format!("{name} names {} which is not an edge of G", edge_str(e)));
        } else if !seen.insert(e.clone()) {
            out.push(format!("{name} lists edge {} twice", edge_str(e)));
        }
    }
    seen
}

/// Reports each of the three partition conditions separately. Never fails;
/// unknown vertices and edges are reported as violations.
pub fn validate_partition(g: &DirectedWeightedGraph, p: &Partition) -> PartitionReport {
    let mut c1 = Vec::new();
    let va = vertex_set(g, "V_A", &p.a_vertices, &mut c1);
    let vb = vertex_set(g, "V_B", &p.b_vertices, &mut c1);
    let vu = vertex_set(g, "V_U", &p.u_vertices, &mut c1);
    if va.is_empty() {
        c1.push("V_A is empty".into());
    }
    if vb.is_empty() {
        c1.push("V_B is empty".into());
    }
    for v in va.intersection(&vb) {
        c1.push(format!("vertex {v} lies in both V_A and V_B"));
    }
    for v in g.vertex_ids() {
        if !va.contains(v) && !vb.contains(v) {
            c1.push(format!("vertex {v} lies in neither V_A nor V_B"));
        }
    }
    let known = |s: &BTreeSet<VertexId>| s.iter().cloned().collect::<Vec<_>>();
    let interior_a =
        if va.is_empty() { Vec::new() } else { g.boundary_sets(&known(&va)).map(|b| b.interior).unwrap_or_default() };
    let interior_b =
        if vb.is_empty() { Vec::new() } else { g.boundary_sets(&known(&vb)).map(|b| b.interior).unwrap_or_default() };
    for v in g.vertex_ids() {
        let hits = [interior_a.contains(v), interior_b.contains(v), vu.contains(v)].iter().filter(|&&h| h).count();
        match hits {
            0 => c1.push(format!("vertex {v} lies in none of V_Å, V_B̊, V_U")),
            1 => {}
            _ => c1.push(format!("vertex {v} lies in more than one of V_Å, V_B̊, V_U")),
        }
    }

    let mut c2 = Vec::new();
    let ea = edge_set(g, "E_A", &p.a_edges, &mut c2);
    let eb = edge_set(g, "E_B", &p.b_edges, &mut c2);
    let eu = edge_set(g, "E_U", &p.u_edges, &mut c2);
    for e in g.edge_list() {
        let hits = [ea.contains(&e), eb.contains(&e), eu.contains(&e)].iter().filter(|&&h| h).count();
        match hits {
            0 => c2.push(format!("edge {} lies in none of E_A, E_B, E_U", edge_str(&e))),
            1 => {}
            _ => c2.push(format!("edge {} lies in more than one of E_A, E_B, E_U", edge_str(&e))),
        }
        let (x, y) = &e;
        for (name, vs, es) in [("A", &va, &ea), ("B", &vb, &eb)] {
            if vs.contains(x) && vs.contains(y) && !es.contains(&e) {
                c2.push(format!("{name} is not a subgraph: induced edge {} missing from E_{name}", edge_str(&e)));
            }
        }
    }
    for (name, vs, es) in [("A", &va, &ea), ("B", &vb, &eb), ("U", &vu, &eu)] {
        for e in es {
            if !vs.contains(&e.0) || !vs.contains(&e.1) {
                c2.push(format!("edge {} of E_{name} has an endpoint outside V_{name}", edge_str(e)));
            }
        }
    }

    let mut c3 = Vec::new();
    for (name, vs) in [("A", &va), ("B", &vb)] {
        let boundary: BTreeSet<Edge> = if vs.is_empty() {
            BTreeSet::new()
        } else {
            g.boundary_sets(&known(vs)).map(|b| b.edge_boundary.into_iter().collect()).unwrap_or_default()
        };
        for e in boundary.difference(&eu) {
            c3.push(format!("∂_E {name} ≠ E_U: {} is in ∂_E {name} but not in E_U", edge_str(e)));
        }
        for e in eu.difference(&boundary) {
            c3.push(format!("∂_E {name} ≠ E_U: {} is in E_U but not in ∂_E {name}", edge_str(e)));
        }
    }

    PartitionReport {
        condition1: ConditionReport::from(c1),
        condition2: ConditionReport::from(c2),
        condition3: ConditionReport::from(c3),
        interior_a,
        interior_b,
    }
}
