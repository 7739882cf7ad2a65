//! Dense matrices for `Δ`, `Δ*`, `S = Δ + Δ*` and their Dirichlet restrictions.
//!
//! Every operator carries the vertex order of its rows and the measure `m`
//! defining the inner product `(f, g)_m = Σ m(x) f(x) conj(g(x))`. Adjoints
//! are taken with respect to that inner product, so `Δ*` is `M⁻¹ Δᵀ M`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DirectedWeightedGraph, VertexId, DEFAULT_BALANCE_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Raw,
    Normalized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    GivenM,
    NormalizedBetaPlus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measure {
    pub values: Vec<f64>,
    pub kind: MeasureKind,
}

impl Measure {
    pub fn given(g: &DirectedWeightedGraph) -> Self {
        Measure { values: g.measure().to_vec(), kind: MeasureKind::GivenM }
    }

    /// `m = beta+`; every vertex needs an out-edge.
    pub fn normalized(g: &DirectedWeightedGraph) -> Result<Self> {
        let values = g.beta_plus();
        if let Some(i) = values.iter().position(|&b| b <= 0.0) {
            return Err(Error::ZeroOutDegree(g.vertex_ids()[i].to_string()));
        }
        Ok(Measure { values, kind: MeasureKind::NormalizedBetaPlus })
    }

    pub fn for_mode(g: &DirectedWeightedGraph, mode: Mode) -> Result<Self> {
        match mode {
            Mode::Raw => Ok(Self::given(g)),
            Mode::Normalized => Self::normalized(g),
        }
    }

    /// Restriction of `parent`'s measure to the vertices of `sub`.
    pub fn inherit(
        parent: &DirectedWeightedGraph,
        parent_measure: &Measure,
        sub: &DirectedWeightedGraph,
    ) -> Result<Self> {
        let values = sub
            .vertex_ids()
            .iter()
            .map(|id| parent.require_index(id).map(|i| parent_measure.values[i]))
            .collect::<Result<Vec<_>>>()?;
        Ok(Measure { values, kind: parent_measure.kind })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum OperatorKind {
    Delta,
    /// `Δ*` from the in-neighbor formula.
    DeltaStar,
    /// `Δ*` as `M⁻¹ Δᵀ M`; valid without Kirchhoff balance.
    DeltaStarByAdjoint,
    /// `S = Δ + Δ*` on a balanced graph.
    SpecialS,
    /// The `a(x,y) = b(x,y) + b(y,x)` form without a balance requirement.
    SymmetrizedS,
    /// `Δ + M⁻¹ Δᵀ M`, the sum with the adjoint taken by definition.
    SpecialSByAdjoint,
    MAdjoint {
        of: Box<OperatorKind>,
    },
    Dirichlet {
        of: Box<OperatorKind>,
        subset: Vec<VertexId>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub entries: DMatrix<f64>,
    pub order: Vec<VertexId>,
    pub measure: Measure,
    pub kind: OperatorKind,
}

/// JSON form: row-major entries, vertex order, measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorExport {
    pub kind: OperatorKind,
    pub order: Vec<VertexId>,
    pub measure: Measure,
    pub entries: Vec<Vec<f64>>,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.order.len()
    }

    /// Max absolute row sum; the scale used for every tolerance.
    pub fn norm(&self) -> f64 {
        self.entries.row_iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn scale(&self) -> f64 {
        self.norm().max(1.0)
    }

    pub fn entry(&self, x: &VertexId, y: &VertexId) -> Option<f64> {
        let i = self.order.iter().position(|v| v == x)?;
        let j = self.order.iter().position(|v| v == y)?;
        Some(self.entries[(i, j)])
    }

    pub fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| f[j] * self.entries[(i, j)]).sum()).collect()
    }

    pub fn inner(&self, f: &[Complex64], h: &[Complex64]) -> Complex64 {
        m_inner(&self.measure.values, f, h)
    }

    /// Largest `|m(x)A[x,y] - m(y)A[y,x]|` and where it occurs.
    pub fn max_m_asymmetry(&self) -> (f64, usize, usize) {
        let m = &self.measure.values;
        let mut worst = (0.0, 0, 0);
        for i in 0..self.dim() {
            for j in (i + 1)..self.dim() {
                let d = (m[i] * self.entries[(i, j)] - m[j] * self.entries[(j, i)]).abs();
                if d > worst.0 {
                    worst = (d, i, j);
                }
            }
        }
        worst
    }

    pub fn to_export(&self) -> OperatorExport {
        OperatorExport {
            kind: self.kind.clone(),
            order: self.order.clone(),
            measure: self.measure.clone(),
            entries: self.entries.row_iter().map(|r| r.iter().copied().collect()).collect(),
        }
    }

    /// Same operator with rows and columns listed in `perm` order.
    pub fn permuted(&self, perm: &[usize]) -> OperatorMatrix {
        let n = self.dim();
        let entries = DMatrix::from_fn(n, n, |i, j| self.entries[(perm[i], perm[j])]);
        OperatorMatrix {
            entries,
            order: perm.iter().map(|&i| self.order[i].clone()).collect(),
            measure: Measure {
                values: perm.iter().map(|&i| self.measure.values[i]).collect(),
                kind: self.measure.kind,
            },
            kind: self.kind.clone(),
        }
    }
}

pub fn m_inner(m: &[f64], f: &[Complex64], h: &[Complex64]) -> Complex64 {
    m.iter().zip(f).zip(h).map(|((&w, &a), &b)| a * b.conj() * w).sum()
}

fn check_measure(g: &DirectedWeightedGraph, measure: &Measure) -> Result<()> {
    if measure.len() != g.vertex_count() {
        return Err(Error::InvalidParameter(format!(
            "measure has {} entries for {} vertices",
            measure.len(),
            g.vertex_count()
        )));
    }
    if let Some(i) = measure.values.iter().position(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::NonPositiveMeasure { vertex: g.vertex_ids()[i].to_string(), value: measure.values[i] });
    }
    Ok(())
}

/// Fails with the worst vertex when Kirchhoff balance is violated.
pub fn check_balance(g: &DirectedWeightedGraph) -> Result<()> {
    let report = g.validate(DEFAULT_BALANCE_TOL);
    if report.beta_balanced {
        return Ok(());
    }
    let worst = report.worst_defect().expect("non-empty graph");
    Err(Error::NotBalanced { vertex: worst.vertex.to_string(), defect: worst.defect })
}

/// `Δ f(x) = (1/m(x)) Σ_{y ∈ V_x+} b(x,y) (f(x) - f(y))`.
pub fn laplacian(g: &DirectedWeightedGraph, mode: Mode) -> Result<OperatorMatrix> {
    laplacian_with(g, &Measure::for_mode(g, mode)?)
}

pub fn laplacian_with(g: &DirectedWeightedGraph, measure: &Measure) -> Result<OperatorMatrix> {
    check_measure(g, measure)?;
    let n = g.vertex_count();
    let mut a = DMatrix::zeros(n, n);
    for ((i, j), b) in g.indexed_edges() {
        let w = b / measure.values[i];
        a[(i, i)] += w;
        a[(i, j)] -= w;
    }
    Ok(OperatorMatrix {
        entries: a,
        order: g.vertex_ids().to_vec(),
        measure: measure.clone(),
        kind: OperatorKind::Delta,
    })
}

/// `Δ* f(x) = (1/m(x)) Σ_{y ∈ V_x-} b(y,x) (f(x) - f(y))`; requires balance.
pub fn adjoint_laplacian(g: &DirectedWeightedGraph, mode: Mode) -> Result<OperatorMatrix> {
    adjoint_laplacian_with(g, &Measure::for_mode(g, mode)?)
}

pub fn adjoint_laplacian_with(g: &DirectedWeightedGraph, measure: &Measure) -> Result<OperatorMatrix> {
    check_measure(g, measure)?;
    check_balance(g)?;
    let n = g.vertex_count();
    let mut a = DMatrix::zeros(n, n);
    for ((j, i), b) in g.indexed_edges() {
        // edge (y, x) = (j, i) contributes to row x
        let w = b / measure.values[i];
        a[(i, i)] += w;
        a[(i, j)] -= w;
    }
    Ok(OperatorMatrix {
        entries: a,
        order: g.vertex_ids().to_vec(),
        measure: measure.clone(),
        kind: OperatorKind::DeltaStar,
    })
}

/// `Δ*` by definition, `M⁻¹ Δᵀ M`. Needs no balance.
pub fn adjoint_by_definition(g: &DirectedWeightedGraph, measure: &Measure) -> Result<OperatorMatrix> {
    Ok(m_adjoint(&laplacian_with(g, measure)?))
}

/// Adjoint in the m-inner product: `M⁻¹ Aᵀ M`.
pub fn m_adjoint(a: &OperatorMatrix) -> OperatorMatrix {
    let n = a.dim();
    let m = &a.measure.values;
    let entries = DMatrix::from_fn(n, n, |i, j| a.entries[(j, i)] * m[j] / m[i]);
    let kind = match &a.kind {
        OperatorKind::Delta => OperatorKind::DeltaStarByAdjoint,
        OperatorKind::DeltaStar | OperatorKind::DeltaStarByAdjoint => OperatorKind::Delta,
        OperatorKind::SpecialS => OperatorKind::SpecialS,
        OperatorKind::SymmetrizedS => OperatorKind::SymmetrizedS,
        OperatorKind::MAdjoint { of } => (**of).clone(),
        other => OperatorKind::MAdjoint { of: Box::new(other.clone()) },
    };
    OperatorMatrix { entries, order: a.order.clone(), measure: a.measure.clone(), kind }
}

/// `S = Δ + Δ*` on a balanced graph.
pub fn special_laplacian(g: &DirectedWeightedGraph, mode: Mode) -> Result<OperatorMatrix> {
    special_laplacian_with(g, &Measure::for_mode(g, mode)?)
}

pub fn special_laplacian_with(g: &DirectedWeightedGraph, measure: &Measure) -> Result<OperatorMatrix> {
    check_balance(g)?;
    let mut s = symmetrized_laplacian_with(g, measure)?;
    s.kind = OperatorKind::SpecialS;
    Ok(s)
}

/// `Δ + M⁻¹ Δᵀ M` for a graph that may violate Kirchhoff balance.
pub fn special_by_adjoint_with(g: &DirectedWeightedGraph, measure: &Measure) -> Result<OperatorMatrix> {
    let delta = laplacian_with(g, measure)?;
    let adj = m_adjoint(&delta);
    Ok(OperatorMatrix {
        entries: delta.entries + adj.entries,
        order: delta.order,
        measure: delta.measure,
        kind: OperatorKind::SpecialSByAdjoint,
    })
}

/// `(1/m(x)) Σ_{y ∈ V_x} a(x,y) (f(x) - f(y))` with `a(x,y) = b(x,y) + b(y,x)`.
///
/// This is the operator of the Green form `Σ_E b |f(x) - f(y)|²`. It is
/// m-symmetric and positive for any edge set, so partial graphs and other
/// unbalanced pieces use it; on a balanced graph it equals `Δ + Δ*`.
pub fn symmetrized_laplacian_with(g: &DirectedWeightedGraph, measure: &Measure) -> Result<OperatorMatrix> {
    check_measure(g, measure)?;
    let n = g.vertex_count();
    let mut a = DMatrix::zeros(n, n);
    for ((i, j), b) in g.indexed_edges() {
        let wi = b / measure.values[i];
        let wj = b / measure.values[j];
        a[(i, i)] += wi;
        a[(i, j)] -= wi;
        a[(j, j)] += wj;
        a[(j, i)] -= wj;
    }
    Ok(OperatorMatrix {
        entries: a,
        order: g.vertex_ids().to_vec(),
        measure: measure.clone(),
        kind: OperatorKind::SymmetrizedS,
    })
}

/// Dirichlet restriction `A^D_U`: the principal submatrix on `subset`.
/// Rows keep their full-graph diagonal, so edges leaving `U` still count.
pub fn dirichlet(a: &OperatorMatrix, subset: &[VertexId]) -> Result<OperatorMatrix> {
    if subset.is_empty() {
        return Err(Error::EmptyVertexSet);
    }
    let mut keep = subset
        .iter()
        .map(|id| a.order.iter().position(|v| v == id).ok_or_else(|| Error::UnknownVertex(id.to_string())))
        .collect::<Result<Vec<_>>>()?;
    keep.sort_unstable();
    keep.dedup();
    let k = keep.len();
    let entries = DMatrix::from_fn(k, k, |i, j| a.entries[(keep[i], keep[j])]);
    let order: Vec<VertexId> = keep.iter().map(|&i| a.order[i].clone()).collect();
    Ok(OperatorMatrix {
        entries,
        measure: Measure { values: keep.iter().map(|&i| a.measure.values[i]).collect(), kind: a.measure.kind },
        kind: OperatorKind::Dirichlet { of: Box::new(a.kind.clone()), subset: order.clone() },
        order,
    })
}

/// A complex-valued function on a vertex set.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexFunction {
    pub domain: Vec<VertexId>,
    pub values: Vec<Complex64>,
}

impl VertexFunction {
    pub fn new(domain: Vec<VertexId>, values: Vec<Complex64>) -> Result<Self> {
        if domain.len() != values.len() {
            return Err(Error::DomainMismatch(format!("{} ids but {} values", domain.len(), values.len())));
        }
        Ok(Self { domain, values })
    }

    /// Function on `order` (a graph's or an operator's vertex order).
    pub fn on(order: &[VertexId], values: Vec<Complex64>) -> Result<Self> {
        Self::new(order.to_vec(), values)
    }

    pub fn real(order: &[VertexId], values: &[f64]) -> Result<Self> {
        Self::new(order.to_vec(), values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Values listed in `order`; the domain must be exactly that vertex set.
    pub fn aligned_to(&self, order: &[VertexId]) -> Result<Vec<Complex64>> {
        if self.domain == order {
            return Ok(self.values.clone());
        }
        if self.domain.len() != order.len() {
            return Err(Error::DomainMismatch(format!(
                "function defined on {} vertices, expected {}",
                self.domain.len(),
                order.len()
            )));
        }
        order
            .iter()
            .map(|id| {
                self.domain
                    .iter()
                    .position(|d| d == id)
                    .map(|p| self.values[p])
                    .ok_or_else(|| Error::DomainMismatch(format!("no value at vertex {id}")))
            })
            .collect()
    }
}

/// `Σ_{(x,y) ∈ E} b(x,y) (f(x) - f(y)) conj(h(x) - h(y))`.
pub fn green_form(g: &DirectedWeightedGraph, f: &VertexFunction, h: &VertexFunction) -> Result<Complex64> {
    let fv = f.aligned_to(g.vertex_ids())?;
    let hv = h.aligned_to(g.vertex_ids())?;
    Ok(g.indexed_edges().map(|((i, j), b)| (fv[i] - fv[j]) * (hv[i] - hv[j]).conj() * b).sum())
}
