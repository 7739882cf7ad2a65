//! Certificates: each statement about `Δ`, `Δ*` and `S` is evaluated on a
//! concrete input and every inequality instance is recorded with its margin.
//!
//! A check `lhs ≤ rhs` has margin `rhs - lhs`; a check `lhs ≥ rhs` has margin
//! `lhs - rhs`; an identity has margin `-|lhs - rhs|`. A certificate passes
//! when every asserted check has `margin ≥ -tolerance · scale`.

mod batch;
mod partition;
mod statements;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::generators::FlowerDecomposition;
use crate::graph::{DirectedWeightedGraph, Edge, VertexId};
use crate::operators::Mode;

pub use batch::{batch_certify, generate_instance, BatchFailure, BatchSummary, FamilyKind, FamilySpec};
pub use partition::{validate_partition, ConditionReport, Partition, PartitionReport};

/// Default slack for inequalities, relative to `max(1, ‖S‖)`.
pub const INEQUALITY_TOL: f64 = 1e-8;
/// Default slack for identities.
pub const IDENTITY_TOL: f64 = 1e-10;
/// Default slack for `(Sf, f)_m ≥ 0`, relative to `‖f‖² max(1, ‖S‖)`.
pub const POSITIVITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TheoremId {
    GreenIdentity,
    PositivityS,
    SpectrumBasic,
    RealpartLemma,
    CycleSpectrum,
    CycleCorollary,
    SubgraphInterlace,
    FlowerMonotone,
    TreeStarBound,
    SingleEdgeAttach,
    EdgeWeyl,
    EdgeSandwich,
    EdgeMonotone,
    DirichletRealpart,
    DirichletInterlace,
    DirichletMaxCombine,
    CycleSubgraphCorollary,
    PartitionBound,
    PartitionRealpart,
}

impl TheoremId {
    pub const ALL: [TheoremId; 19] = [
        TheoremId::GreenIdentity,
        TheoremId::PositivityS,
        TheoremId::SpectrumBasic,
        TheoremId::RealpartLemma,
        TheoremId::CycleSpectrum,
        TheoremId::CycleCorollary,
        TheoremId::SubgraphInterlace,
        TheoremId::FlowerMonotone,
        TheoremId::TreeStarBound,
        TheoremId::SingleEdgeAttach,
        TheoremId::EdgeWeyl,
        TheoremId::EdgeSandwich,
        TheoremId::EdgeMonotone,
        TheoremId::DirichletRealpart,
        TheoremId::DirichletInterlace,
        TheoremId::DirichletMaxCombine,
        TheoremId::CycleSubgraphCorollary,
        TheoremId::PartitionBound,
        TheoremId::PartitionRealpart,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::GreenIdentity => "GREEN_IDENTITY",
            TheoremId::PositivityS => "POSITIVITY_S",
            TheoremId::SpectrumBasic => "SPECTRUM_BASIC",
            TheoremId::RealpartLemma => "REALPART_LEMMA",
            TheoremId::CycleSpectrum => "CYCLE_SPECTRUM",
            TheoremId::CycleCorollary => "CYCLE_COROLLARY",
            TheoremId::SubgraphInterlace => "SUBGRAPH_INTERLACE",
            TheoremId::FlowerMonotone => "FLOWER_MONOTONE",
            TheoremId::TreeStarBound => "TREE_STAR_BOUND",
            TheoremId::SingleEdgeAttach => "SINGLE_EDGE_ATTACH",
            TheoremId::EdgeWeyl => "EDGE_WEYL",
            TheoremId::EdgeSandwich => "EDGE_SANDWICH",
            TheoremId::EdgeMonotone => "EDGE_MONOTONE",
            TheoremId::DirichletRealpart => "DIRICHLET_REALPART",
            TheoremId::DirichletInterlace => "DIRICHLET_INTERLACE",
            TheoremId::DirichletMaxCombine => "DIRICHLET_MAX_COMBINE",
            TheoremId::CycleSubgraphCorollary => "CYCLE_SUBGRAPH_COROLLARY",
            TheoremId::PartitionBound => "PARTITION_BOUND",
            TheoremId::PartitionRealpart => "PARTITION_REALPART",
        }
    }

    /// Tolerance used when the caller does not supply one.
    pub fn default_tolerance(self) -> f64 {
        match self {
            TheoremId::GreenIdentity | TheoremId::CycleSpectrum | TheoremId::CycleCorollary => IDENTITY_TOL,
            TheoremId::PositivityS => POSITIVITY_TOL,
            _ => INEQUALITY_TOL,
        }
    }

    /// The [`TheoremInput`] variant the statement is evaluated on.
    pub fn input_kind(self) -> &'static str {
        match self {
            TheoremId::GreenIdentity | TheoremId::PositivityS | TheoremId::SpectrumBasic | TheoremId::RealpartLemma => {
                "graph"
            }
            TheoremId::CycleSpectrum | TheoremId::CycleCorollary => "cycle",
            TheoremId::SubgraphInterlace | TheoremId::DirichletInterlace | TheoremId::DirichletMaxCombine => "subgraph",
            TheoremId::FlowerMonotone => "flower",
            TheoremId::TreeStarBound => "tree",
            TheoremId::SingleEdgeAttach => "single_edge",
            TheoremId::EdgeWeyl | TheoremId::EdgeSandwich => "edge_split",
            TheoremId::EdgeMonotone => "edge_addition",
            TheoremId::DirichletRealpart => "dirichlet_set",
            TheoremId::CycleSubgraphCorollary => "cycle_subgraph",
            TheoremId::PartitionBound | TheoremId::PartitionRealpart => "partition",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().to_ascii_uppercase().replace('-', "_");
        TheoremId::ALL
            .into_iter()
            .find(|t| t.name() == wanted)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown theorem `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "==")]
    Eq,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub desc: String,
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    /// Multiplies the certificate tolerance for this check.
    pub scale: f64,
    /// Informational checks are recorded but never fail a certificate.
    pub asserted: bool,
}

impl Check {
    fn new(desc: String, relation: Relation, lhs: f64, rhs: f64, scale: f64, asserted: bool) -> Self {
        let margin = match relation {
            Relation::Le => rhs - lhs,
            Relation::Ge => lhs - rhs,
            Relation::Eq => -(lhs - rhs).abs(),
        };
        Check { desc, relation, lhs, rhs, margin, scale, asserted }
    }

    pub fn holds(&self, tolerance: f64) -> bool {
        self.margin >= -tolerance * self.scale
    }

    /// `margin / scale`.
    pub fn relative_margin(&self) -> f64 {
        self.margin / self.scale
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub theorem: TheoremId,
    pub pass: bool,
    pub tolerance: f64,
    pub modes: Vec<Mode>,
    pub input_digest: String,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn asserted(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.asserted)
    }

    pub fn failing_checks(&self) -> Vec<&Check> {
        self.asserted().filter(|c| !c.holds(self.tolerance)).collect()
    }

    /// Smallest relative margin over asserted checks; `+∞` when there are none.
    pub fn min_relative_margin(&self) -> f64 {
        self.asserted().map(Check::relative_margin).fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_margin(&self) -> f64 {
        self.asserted().map(|c| c.margin.abs()).fold(0.0, f64::max)
    }
}

/// Inclusive 1-based index range, written `lo..hi` or a single `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexRange {
    pub lo: usize,
    pub hi: usize,
}

impl IndexRange {
    pub fn new(lo: usize, hi: usize) -> Self {
        IndexRange { lo, hi }
    }

    pub fn contains(&self, k: usize) -> bool {
        self.lo <= k && k <= self.hi
    }
}

impl FromStr for IndexRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("bad index range `{s}` (expected `k` or `lo..hi`)"));
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let r = match s.split_once("..") {
            Some((lo, hi)) => IndexRange::new(parse(lo)?, parse(hi.trim_start_matches('='))?),
            None => {
                let k = parse(s)?;
                IndexRange::new(k, k)
            }
        };
        if r.lo > r.hi {
            return Err(bad());
        }
        Ok(r)
    }
}

impl fmt::Display for IndexRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyParams {
    pub mode: Mode,
    /// Overrides [`TheoremId::default_tolerance`].
    pub tolerance: Option<f64>,
    pub k: Option<IndexRange>,
    pub j: Option<IndexRange>,
    pub l: Option<IndexRange>,
    /// Random test functions drawn by the identity and positivity checks.
    pub trials: usize,
    pub seed: u64,
}

impl Default for CertifyParams {
    fn default() -> Self {
        CertifyParams { mode: Mode::Raw, tolerance: None, k: None, j: None, l: None, trials: 16, seed: 0 }
    }
}

impl CertifyParams {
    pub fn with_mode(mode: Mode) -> Self {
        CertifyParams { mode, ..Default::default() }
    }
}

/// What a statement is evaluated on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TheoremInput {
    Graph {
        graph: DirectedWeightedGraph,
    },
    /// The simple directed cycle `C_n`.
    Cycle {
        n: usize,
    },
    /// `graph` and the subgraph induced by `subset`.
    Subgraph {
        graph: DirectedWeightedGraph,
        subset: Vec<VertexId>,
    },
    DirichletSet {
        graph: DirectedWeightedGraph,
        subset: Vec<VertexId>,
    },
    CycleSubgraph {
        n: usize,
        subset: Vec<VertexId>,
    },
    Flower {
        flower: FlowerDecomposition,
    },
    Tree {
        graph: DirectedWeightedGraph,
    },
    /// `attached` joined to `graph` by the symmetric edge pair
    /// `attach_graph <-> attach_attached` of weight `weight`.
    SingleEdge {
        graph: DirectedWeightedGraph,
        attached: DirectedWeightedGraph,
        attach_graph: VertexId,
        attach_attached: VertexId,
        weight: f64,
    },
    /// `E = first ⊔ (E \ first)`.
    EdgeSplit {
        graph: DirectedWeightedGraph,
        first: Vec<Edge>,
    },
    /// `augmented` has the vertices of `graph` and at least its edges.
    EdgeAddition {
        graph: DirectedWeightedGraph,
        augmented: DirectedWeightedGraph,
    },
    Partition {
        graph: DirectedWeightedGraph,
        partition: Partition,
    },
}

impl TheoremInput {
    pub fn graph(graph: DirectedWeightedGraph) -> Self {
        TheoremInput::Graph { graph }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            TheoremInput::Graph { .. } => "graph",
            TheoremInput::Cycle { .. } => "cycle",
            TheoremInput::Subgraph { .. } => "subgraph",
            TheoremInput::DirichletSet { .. } => "dirichlet_set",
            TheoremInput::CycleSubgraph { .. } => "cycle_subgraph",
            TheoremInput::Flower { .. } => "flower",
            TheoremInput::Tree { .. } => "tree",
            TheoremInput::SingleEdge { .. } => "single_edge",
            TheoremInput::EdgeSplit { .. } => "edge_split",
            TheoremInput::EdgeAddition { .. } => "edge_addition",
            TheoremInput::Partition { .. } => "partition",
        }
    }

    /// Hex SHA-256 of the canonical JSON of the input together with `params`.
    pub fn digest(&self, theorem: TheoremId, params: &CertifyParams) -> String {
        let canonical = serde_json::json!({
            "theorem": theorem,
            "input": self,
            "params": params,
        });
        let bytes = serde_json::to_vec(&canonical).expect("inputs always serialize");
        hex::encode(Sha256::digest(&bytes))
    }
}

/// Evaluates `theorem` on `input`.
///
/// Structural hypotheses are checked first and reported as errors; index
/// ranges in `params` must lie inside the statement's own ranges.
pub fn certify(input: &TheoremInput, theorem: TheoremId, params: &CertifyParams) -> Result<Certificate> {
    if let Some(t) = params.tolerance {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidParameter(format!("tolerance must be finite and >= 0, got {t}")));
        }
    }
    let outcome = statements::evaluate(input, theorem, params)?;
    let tolerance = params.tolerance.unwrap_or_else(|| theorem.default_tolerance());
    let pass = outcome.checks.iter().filter(|c| c.asserted).all(|c| c.holds(tolerance));
    Ok(Certificate {
        theorem,
        pass,
        tolerance,
        modes: outcome.modes,
        input_digest: input.digest(theorem, params),
        checks: outcome.checks,
        flags: outcome.flags,
        notes: outcome.notes,
    })
}

/// Checks collected while evaluating one statement.
#[derive(Debug, Default)]
pub(crate) struct Outcome {
    pub checks: Vec<Check>,
    pub modes: Vec<Mode>,
    pub flags: Vec<String>,
    pub notes: Vec<String>,
}

impl Outcome {
    pub fn new(modes: Vec<Mode>) -> Self {
        Outcome { modes, ..Default::default() }
    }

    pub fn le(&mut self, desc: String, lhs: f64, rhs: f64, scale: f64) {
        self.checks.push(Check::new(desc, Relation::Le, lhs, rhs, scale, true));
    }

    pub fn ge(&mut self, desc: String, lhs: f64, rhs: f64, scale: f64) {
        self.checks.push(Check::new(desc, Relation::Ge, lhs, rhs, scale, true));
    }

    pub fn eq(&mut self, desc: String, lhs: f64, rhs: f64, scale: f64) {
        self.checks.push(Check::new(desc, Relation::Eq, lhs, rhs, scale, true));
    }

    pub fn record_le(&mut self, desc: String, lhs: f64, rhs: f64, scale: f64) {
        self.checks.push(Check::new(desc, Relation::Le, lhs, rhs, scale, false));
    }
}
