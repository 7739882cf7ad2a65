//! One evaluator per statement.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand::Rng;

use super::partition::validate_partition;
use super::{CertifyParams, IndexRange, Outcome, Partition, TheoremId, TheoremInput};
use crate::eigen::{
    complex_multiset_distance, cycle_delta_spectrum_closed_form, eig_general, eig_m_symmetric, zero_cluster_size,
    ComplexSpectrum,
};
use crate::error::{Error, Result};
use crate::generators::{cycle, flower_compose, is_balanced, FlowerDecomposition, GeneratorSeed, Petal};
use crate::graph::{DirectedWeightedGraph, Edge, VertexId};
use crate::operators::{
    adjoint_laplacian_with, dirichlet, green_form, laplacian_with, m_inner, special_by_adjoint_with,
    special_laplacian_with, symmetrized_laplacian_with, Measure, Mode, OperatorMatrix, VertexFunction,
};

pub(crate) fn evaluate(input: &TheoremInput, theorem: TheoremId, params: &CertifyParams) -> Result<Outcome> {
    use TheoremId as T;
    use TheoremInput as I;
    reject_unused_ranges(theorem, params)?;
    match (theorem, input) {
        (T::GreenIdentity, I::Graph { graph }) => green_identity(graph, params),
        (T::PositivityS, I::Graph { graph }) => positivity(graph, params),
        (T::SpectrumBasic, I::Graph { graph }) => spectrum_basic(graph),
        (T::RealpartLemma, I::Graph { graph }) => realpart_lemma(graph, params),
        (T::CycleSpectrum, I::Cycle { n }) => cycle_spectrum(&cycle(*n)?),
        (T::CycleSpectrum, I::Graph { graph }) => cycle_spectrum(require_cycle(graph)?),
        (T::CycleCorollary, I::Cycle { n }) => cycle_corollary(&cycle(*n)?),
        (T::CycleCorollary, I::Graph { graph }) => cycle_corollary(require_cycle(graph)?),
        (T::SubgraphInterlace, I::Subgraph { graph, subset }) => subgraph_interlace(graph, subset, params),
        (T::FlowerMonotone, I::Flower { flower }) => flower_monotone(flower, params),
        (T::TreeStarBound, I::Tree { graph } | I::Graph { graph }) => tree_star_bound(graph, params),
        (T::SingleEdgeAttach, I::SingleEdge { graph, attached, attach_graph, attach_attached, weight }) => {
            single_edge_attach(graph, attached, attach_graph, attach_attached, *weight, params)
        }
        (T::EdgeWeyl, I::EdgeSplit { graph, first }) => edge_weyl(graph, first, params),
        (T::EdgeSandwich, I::EdgeSplit { graph, first }) => edge_sandwich(graph, first, params),
        (T::EdgeMonotone, I::EdgeAddition { graph, augmented }) => edge_monotone(graph, augmented, params),
        (T::DirichletRealpart, I::DirichletSet { graph, subset } | I::Subgraph { graph, subset }) => {
            dirichlet_realpart(graph, subset, params)
        }
        (T::DirichletInterlace, I::Subgraph { graph, subset }) => dirichlet_interlace(graph, subset, params),
        (T::DirichletMaxCombine, I::Subgraph { graph, subset }) => dirichlet_max_combine(graph, subset, params),
        (T::CycleSubgraphCorollary, I::CycleSubgraph { n, subset }) => cycle_subgraph_corollary(&cycle(*n)?, subset),
        (T::CycleSubgraphCorollary, I::Subgraph { graph, subset }) => {
            cycle_subgraph_corollary(require_cycle(graph)?, subset)
        }
        (T::PartitionBound, I::Partition { graph, partition }) => partition_bound(graph, partition, params),
        (T::PartitionRealpart, I::Partition { graph, partition }) => partition_realpart(graph, partition, params),
        _ => Err(Error::InvalidParameter(format!(
            "{theorem} expects a `{}` input, got `{}`",
            theorem.input_kind(),
            input.kind()
        ))),
    }
}

fn reject_unused_ranges(theorem: TheoremId, params: &CertifyParams) -> Result<()> {
    use TheoremId as T;
    let takes_k = matches!(
        theorem,
        T::SubgraphInterlace
            | T::FlowerMonotone
            | T::TreeStarBound
            | T::SingleEdgeAttach
            | T::EdgeWeyl
            | T::EdgeSandwich
            | T::EdgeMonotone
            | T::DirichletInterlace
            | T::DirichletMaxCombine
            | T::PartitionBound
    );
    let unused = [
        ("k", params.k.is_some() && !takes_k),
        ("j", params.j.is_some() && theorem != T::EdgeWeyl),
        ("l", params.l.is_some() && theorem != T::PartitionBound),
    ];
    match unused.iter().find(|(_, bad)| *bad) {
        Some((name, _)) => Err(Error::InvalidParameter(format!("{theorem} has no `{name}` index"))),
        None => Ok(()),
    }
}

/// Indices `lo..=hi` of the statement, narrowed to `requested`. A request
/// reaching outside the statement's range is an error.
fn index_range(name: &str, requested: Option<IndexRange>, lo: usize, hi: usize) -> Result<Vec<usize>> {
    match requested {
        None => Ok((lo..=hi).collect()),
        Some(r) if lo <= hi && r.lo >= lo && r.hi <= hi => Ok((r.lo..=r.hi).collect()),
        Some(r) => Err(Error::IndexOutOfRange(format!("{name} = {r} lies outside the statement's range {lo}..{hi}"))),
    }
}

fn symmetric_values(a: &OperatorMatrix) -> Result<Vec<f64>> {
    Ok(eig_m_symmetric(a)?.eigenvalues)
}

fn negated(a: &OperatorMatrix) -> OperatorMatrix {
    OperatorMatrix { entries: -a.entries.clone(), ..a.clone() }
}

fn random_function(n: usize, seed: GeneratorSeed) -> Vec<Complex64> {
    let mut rng = seed.rng();
    (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))).collect()
}

fn require_trials(params: &CertifyParams) -> Result<()> {
    if params.trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    Ok(())
}

fn require_connected(g: &DirectedWeightedGraph, what: &str) -> Result<()> {
    if g.is_connected() {
        Ok(())
    } else {
        Err(Error::Hypothesis(format!("{what} is not connected")))
    }
}

fn connected_subgraph(g: &DirectedWeightedGraph, subset: &[VertexId]) -> Result<DirectedWeightedGraph> {
    let h = g.induced_subgraph(subset)?;
    require_connected(&h, "the induced subgraph H")?;
    Ok(h)
}

/// `S` of a piece that need not be balanced, in the inherited measure.
fn piece_operator(piece: &DirectedWeightedGraph, measure: &Measure) -> Result<OperatorMatrix> {
    if is_balanced(piece) {
        special_laplacian_with(piece, measure)
    } else {
        symmetrized_laplacian_with(piece, measure)
    }
}

/// True for the simple directed cycle with unit weights and unit measure,
/// under any labelling.
pub(crate) fn is_simple_cycle(g: &DirectedWeightedGraph) -> bool {
    let n = g.vertex_count();
    n >= 2
        && g.measure().iter().all(|&m| m == 1.0)
        && (0..n).all(|i| g.out_edges(i).len() == 1 && g.in_edges(i).len() == 1 && g.out_edges(i)[0].1 == 1.0)
        && g.is_strongly_connected()
}

fn require_cycle(g: &DirectedWeightedGraph) -> Result<&DirectedWeightedGraph> {
    if is_simple_cycle(g) {
        Ok(g)
    } else {
        Err(Error::Hypothesis("graph is not a simple directed cycle with unit weights and unit measure".into()))
    }
}

fn green_identity(g: &DirectedWeightedGraph, params: &CertifyParams) -> Result<Outcome> {
    require_trials(params)?;
    let measure = Measure::for_mode(g, params.mode)?;
    let delta = laplacian_with(g, &measure)?;
    let star = adjoint_laplacian_with(g, &measure)?;
    let s_scale = special_laplacian_with(g, &measure)?.scale();
    let order = g.vertex_ids();
    let seed = GeneratorSeed(params.seed);
    let mut out = Outcome::new(vec![params.mode]);
    for t in 0..params.trials as u64 {
        let f = random_function(order.len(), seed.derive(2 * t));
        let h = random_function(order.len(), seed.derive(2 * t + 1));
        let lhs = delta.inner(&delta.apply(&f), &h) + star.inner(&star.apply(&f), &h);
        let rhs = green_form(g, &VertexFunction::on(order, f.clone())?, &VertexFunction::on(order, h.clone())?)?;
        let norm_f = m_inner(&measure.values, &f, &f).re.sqrt();
        let norm_h = m_inner(&measure.values, &h, &h).re.sqrt();
        let scale = s_scale * norm_f * norm_h;
        out.eq(format!("trial {t}: Re[(Δf,h)_m + (Δ*f,h)_m] = Re[green_form(f,h)]"), lhs.re, rhs.re, scale);
        out.eq(format!("trial {t}: Im[(Δf,h)_m + (Δ*f,h)_m] = Im[green_form(f,h)]"), lhs.im, rhs.im, scale);
    }
    Ok(out)
}

fn positivity(g: &DirectedWeightedGraph, params: &CertifyParams) -> Result<Outcome> {
    require_trials(params)?;
    let measure = Measure::for_mode(g, params.mode)?;
    let s = special_laplacian_with(g, &measure)?;
    let seed = GeneratorSeed(params.seed);
    let mut out = Outcome::new(vec![params.mode]);
    for t in 0..params.trials as u64 {
        let f = random_function(g.vertex_count(), seed.derive(t));
        let q = s.inner(&s.apply(&f), &f);
        let scale = m_inner(&measure.values, &f, &f).re * s.scale();
        out.ge(format!("trial {t}: Re (Sf,f)_m ≥ 0"), q.re, 0.0, scale);
        out.eq(format!("trial {t}: Im (Sf,f)_m = 0"), q.im, 0.0, scale);
    }
    let values = symmetric_values(&s)?;
    out.ge("λ_1(S) ≥ 0".into(), values[0], 0.0, s.scale());
    Ok(out)
}

fn spectrum_basic(g: &DirectedWeightedGraph) -> Result<Outcome> {
    require_connected(g, "G")?;
    let mut out = Outcome::new(vec![Mode::Raw, Mode::Normalized]);

    let raw = special_laplacian_with(g, &Measure::given(g))?;
    let raw_values = symmetric_values(&raw)?;
    out.eq(
        "raw: 0 is a simple eigenvalue of S (zero-cluster size)".into(),
        zero_cluster_size(&raw_values, raw.norm()) as f64,
        1.0,
        1.0,
    );

    let measure = Measure::normalized(g)?;
    let s = special_laplacian_with(g, &measure)?;
    let values = symmetric_values(&s)?;
    let n = values.len();
    out.eq(
        "normalized: 0 is a simple eigenvalue of S̃ (zero-cluster size)".into(),
        zero_cluster_size(&values, s.norm()) as f64,
        1.0,
        1.0,
    );
    out.ge("normalized: λ_1(S̃) ≥ 0".into(), values[0], 0.0, 1.0);
    out.le(format!("normalized: λ_{n}(S̃) ≤ 4"), values[n - 1], 4.0, 1.0);

    let delta = eig_general(&laplacian_with(g, &measure)?)?;
    let re = delta.real_parts();
    out.ge("normalized: min Re σ(Δ̃) ≥ 0".into(), re[0], 0.0, 1.0);
    out.le("normalized: max Re σ(Δ̃) ≤ 2".into(), re[n - 1], 2.0, 1.0);
    Ok(out)
}

fn realpart_lemma(g: &DirectedWeightedGraph, params: &CertifyParams) -> Result<Outcome> {
    let measure = Measure::for_mode(g, params.mode)?;
    let s = special_laplacian_with(g, &measure)?;
    let sv = symmetric_values(&s)?;
    let dv = eig_general(&laplacian_with(g, &measure)?)?;
    let n = sv.len();
    let scale = s.scale();
    let mut out = Outcome::new(vec![params.mode]);
    out.le(format!("k={n}: 2Re λ_{n}(Δ) ≤ λ_{n}(S)"), 2.0 * dv.lambda(n).re, sv[n - 1], scale);
    for k in 1..n {
        out.record_le(
            format!("k={k} (informational): 2Re λ_{k}(Δ) ≤ λ_{k}(S)"),
            2.0 * dv.lambda(k).re,
            sv[k - 1],
            scale,
        );
    }
    Ok(out)
}

fn cycle_spectrum(g: &DirectedWeightedGraph) -> Result<Outcome> {
    let n = g.vertex_count();
    let delta = laplacian_with(g, &Measure::given(g))?;
    let computed = eig_general(&delta)?;
    let closed = cycle_delta_spectrum_closed_form(n)?;
    let mut out = Outcome::new(vec![Mode::Raw]);
    out.eq(
        format!("n={n}: multiset distance between σ(Δ) and the closed form"),
        complex_multiset_distance(&computed.eigenvalues, &closed.eigenvalues),
        0.0,
        delta.scale(),
    );
    let near_two = computed.eigenvalues.iter().filter(|z| (*z - Complex64::new(2.0, 0.0)).norm() <= 1e-8).count();
    out.eq(
        format!("n={n}: multiplicity of eigenvalue 2 is {}", if n.is_multiple_of(2) { 1 } else { 0 }),
        near_two as f64,
        if n.is_multiple_of(2) { 1.0 } else { 0.0 },
        1.0,
    );
    out.notes.push(format!("residual {:.3e}", computed.residual));
    Ok(out)
}

fn cycle_corollary(g: &DirectedWeightedGraph) -> Result<Outcome> {
    let measure = Measure::given(g);
    let s = special_laplacian_with(g, &measure)?;
    let sv = symmetric_values(&s)?;
    let dv = eig_general(&laplacian_with(g, &measure)?)?.real_parts();
    let mut out = Outcome::new(vec![Mode::Raw]);
    for k in 1..=sv.len() {
        out.eq(format!("k={k}: λ_{k}(S) = 2Re λ_{k}(Δ)"), sv[k - 1], 2.0 * dv[k - 1], s.scale());
    }
    Ok(out)
}

fn subgraph_interlace(g: &DirectedWeightedGraph, subset: &[VertexId], params: &CertifyParams) -> Result<Outcome> {
    let measure = Measure::for_mode(g, params.mode)?;
    let s_g = special_laplacian_with(g, &measure)?;
    let h = connected_subgraph(g, subset)?;
    let s_h = piece_operator(&h, &Measure::inherit(g, &measure, &h)?)?;
    let lg = symmetric_values(&s_g)?;
    let lh = symmetric_values(&s_h)?;
    let (n, r) = (lg.len(), lh.len());
    let scale = s_g.scale();
    let mut out = Outcome::new(vec![params.mode]);
    for k in index_range("k", params.k, 1, r)? {
        let i = n - r + k;
        out.le(format!("k={k}: λ_{k}(S_H) ≤ λ_{i}(S_G)"), lh[k - 1], lg[i - 1], scale);
        if i < n {
            out.record_le(
                format!("k={k} (shifted index, informational): λ_{k}(S_H) ≤ λ_{}(S_G)", i + 1),
                lh[k - 1],
                lg[i],
                scale,
            );
        }
    }
    out.notes.push(format!("n={n}, r={r}; S_H uses the measure of G restricted to V_H"));
    Ok(out)
}

fn flower_monotone(flower: &FlowerDecomposition, params: &CertifyParams) -> Result<Outcome> {
    flower.verify()?;
    let g = &flower.graph;
    let measure = Measure::for_mode(g, params.mode)?;
    let s_g = special_laplacian_with(g, &measure)?;
    let h = flower.core_graph()?;
    let s_h = piece_operator(&h, &Measure::inherit(g, &measure, &h)?)?;
    let lg = symmetric_values(&s_g)?;
    let lh = symmetric_values(&s_h)?;
    let mut out = Outcome::new(vec![params.mode]);
    for k in index_range("k", params.k, 1, lh.len())? {
        out.ge(format!("k={k}: λ_{k}(S_H) ≥ λ_{k}(S_G)"), lh[k - 1], lg[k - 1], s_g.scale());
    }
    out.notes.push(format!("{} petals on a core of {} vertices", flower.petals.len(), lh.len()));
    Ok(out)
}

fn tree_star_bound(g: &DirectedWeightedGraph, params: &CertifyParams) -> Result<Outcome> {
    let n = g.vertex_count();
    let simple = g.is_symmetric() && g.edges().all(|(_, _, b)| b == 1.0) && g.measure().iter().all(|&m| m == 1.0);
    if !simple {
        return Err(Error::Hypothesis(
            "not a simple symmetric graph (needs b(x,y) = b(y,x) = 1 on every edge and m ≡ 1)".into(),
        ));
    }
    if g.edge_count() != 2 * (n - 1) || !g.is_connected() {
        return Err(Error::Hypothesis("the symmetric graph is not a tree".into()));
    }
    let max_valency = (0..n).map(|i| g.neighbors_at(i).len()).max().unwrap_or(0);
    let q = max_valency / 2;
    let s = special_laplacian_with(g, &Measure::given(g))?;
    let values = symmetric_values(&s)?;
    let mut out = Outcome::new(vec![Mode::Raw]);
    let ks = if q == 0 && params.k.is_none() { Vec::new() } else { index_range("k", params.k, 1, q)? };
    for k in ks {
        out.le(format!("k={k}: λ_{k}(S) ≤ 2"), values[k - 1], 2.0, s.scale());
    }
    if q < n {
        out.le(format!("λ_{}(S) ≤ 2(q+1) = {}", q + 1, 2 * (q + 1)), values[q], 2.0 * (q + 1) as f64, s.scale());
    }
    out.notes.push(format!("max valency {max_valency}, q = {q}"));
    Ok(out)
}

fn single_edge_attach(
    g: &DirectedWeightedGraph,
    attached: &DirectedWeightedGraph,
    attach_graph: &VertexId,
    attach_attached: &VertexId,
    weight: f64,
    params: &CertifyParams,
) -> Result<Outcome> {
    if !(weight.is_finite() && weight > 0.0) {
        return Err(Error::InvalidParameter(format!("connecting edge weight must be positive, got {weight}")));
    }
    if !g.contains_vertex(attach_graph) {
        return Err(Error::UnknownVertex(attach_graph.to_string()));
    }
    if !attached.contains_vertex(attach_attached) {
        return Err(Error::UnknownVertex(attach_attached.to_string()));
    }
    if let Some(v) = attached.vertex_ids().iter().find(|v| g.contains_vertex(v)) {
        return Err(Error::Hypothesis(format!("the two graphs share vertex {v}")));
    }
    let glue_m = g.measure()[g.index_of(attach_graph).expect("checked above")];
    let mut vertices: Vec<(VertexId, f64)> =
        attached.vertex_ids().iter().cloned().zip(attached.measure().iter().copied()).collect();
    vertices.push((attach_graph.clone(), glue_m));
    let mut edges: Vec<(VertexId, VertexId, f64)> =
        attached.edges().map(|(x, y, b)| (x.clone(), y.clone(), b)).collect();
    edges.push((attach_graph.clone(), attach_attached.clone(), weight));
    edges.push((attach_attached.clone(), attach_graph.clone(), weight));
    let petal = DirectedWeightedGraph::from_parts(vertices, edges)?;
    let flower = flower_compose(
        g,
        vec![Petal { graph: petal, attach_core: attach_graph.clone(), attach_petal: attach_graph.clone() }],
    )?;
    let joined = &flower.graph;

    let measure = Measure::for_mode(joined, params.mode)?;
    let s_joined = special_laplacian_with(joined, &measure)?;
    let s_g = piece_operator(g, &Measure::inherit(joined, &measure, g)?)?;
    let lj = symmetric_values(&s_joined)?;
    let lg = symmetric_values(&s_g)?;
    let mut out = Outcome::new(vec![params.mode]);
    for k in index_range("k", params.k, 1, lg.len())? {
        out.ge(format!("k={k}: λ_{k}(S_G) ≥ λ_{k}(S_(G+G1))"), lg[k - 1], lj[k - 1], s_joined.scale());
    }
    out.notes
        .push(format!("G1 joined by the symmetric edge pair {attach_graph} <-> {attach_attached} of weight {weight}"));
    Ok(out)
}

/// The two partial graphs `(V, E_1)` and `(V, E \ E_1)`.
fn edge_split(g: &DirectedWeightedGraph, first: &[Edge]) -> Result<(DirectedWeightedGraph, DirectedWeightedGraph)> {
    let mut seen = BTreeSet::new();
    for e in first {
        if !g.contains_edge(&e.0, &e.1) {
            return Err(Error::Hypothesis(format!("E_1 is not a subset of E: ({},{}) is not an edge", e.0, e.1)));
        }
        if !seen.insert(e.clone()) {
            return Err(Error::Hypothesis(format!("E_1 lists ({},{}) twice", e.0, e.1)));
        }
    }
    let second: Vec<Edge> = g.edge_list().into_iter().filter(|e| !seen.contains(e)).collect();
    Ok((g.partial_graph(first)?, g.partial_graph(&second)?))
}

struct SplitSpectra {
    scale: f64,
    g: Vec<f64>,
    parts: [Vec<f64>; 2],
}

fn split_spectra(g: &DirectedWeightedGraph, first: &[Edge], mode: Mode, negate: bool) -> Result<SplitSpectra> {
    let (g1, g2) = edge_split(g, first)?;
    let measure = Measure::for_mode(g, mode)?;
    let s_g = special_laplacian_with(g, &measure)?;
    let s_1 = symmetrized_laplacian_with(&g1, &measure)?;
    let s_2 = symmetrized_laplacian_with(&g2, &measure)?;
    let values = |a: &OperatorMatrix| if negate { symmetric_values(&negated(a)) } else { symmetric_values(a) };
    Ok(SplitSpectra { scale: s_g.scale(), g: values(&s_g)?, parts: [values(&s_1)?, values(&s_2)?] })
}

fn edge_weyl(g: &DirectedWeightedGraph, first: &[Edge], params: &CertifyParams) -> Result<Outcome> {
    let plain = split_spectra(g, first, params.mode, false)?;
    // The lower family is the upper family applied to -S, re-indexed
    // through λ_k(-S) = -λ_{n-k+1}(S).
    let neg = split_spectra(g, first, params.mode, true)?;
    let n = plain.g.len();
    let ks = index_range("k", params.k, 1, n)?;
    let js = index_range("j", params.j, 0, n)?;
    let scale = plain.scale;
    let mut out = Outcome::new(vec![params.mode]);
    for (s, r) in [(0usize, 1usize), (1, 0)] {
        let (ls, lr) = (&plain.parts[s], &plain.parts[r]);
        let (ns, nr) = (&neg.parts[s], &neg.parts[r]);
        let (s1, r1) = (s + 1, r + 1);
        for &k in &ks {
            for j in js.iter().copied().filter(|&j| j + k <= n) {
                out.le(
                    format!(
                        "s={s1},r={r1} upper k={k} j={j}: λ_{k}(S_G) ≤ λ_{}(S_G{s1}) + λ_{}(S_G{r1})",
                        k + j,
                        n - j
                    ),
                    plain.g[k - 1],
                    ls[k + j - 1] + lr[n - j - 1],
                    scale,
                );
            }
        }
        for &k in &ks {
            for j in js.iter().copied().filter(|&j| 1 <= j && j <= k) {
                let (big_k, big_j) = (n - k + 1, j - 1);
                out.le(
                    format!(
                        "s={s1},r={r1} lower k={k} j={j}: λ_{k}(S_G) ≥ λ_{}(S_G{s1}) + λ_{j}(S_G{r1}), \
                         checked as λ_{big_k}(-S_G) ≤ λ_{}(-S_G{s1}) + λ_{}(-S_G{r1})",
                        k - j + 1,
                        big_k + big_j,
                        n - big_j
                    ),
                    neg.g[big_k - 1],
                    ns[big_k + big_j - 1] + nr[n - big_j - 1],
                    scale,
                );
            }
        }
    }
    Ok(out)
}

fn edge_sandwich(g: &DirectedWeightedGraph, first: &[Edge], params: &CertifyParams) -> Result<Outcome> {
    let sp = split_spectra(g, first, params.mode, false)?;
    let n = sp.g.len();
    let mut out = Outcome::new(vec![params.mode]);
    for (s, r) in [(0usize, 1usize), (1, 0)] {
        let (ls, lr) = (&sp.parts[s], &sp.parts[r]);
        let (s1, r1) = (s + 1, r + 1);
        for k in index_range("k", params.k, 1, n)? {
            out.le(format!("s={s1} k={k}: λ_{k}(S_G{s1}) ≤ λ_{k}(S_G)"), ls[k - 1], sp.g[k - 1], sp.scale);
            out.le(
                format!("s={s1} k={k}: λ_{k}(S_G) ≤ λ_{k}(S_G{s1}) + λ_{n}(S_G{r1})"),
                sp.g[k - 1],
                ls[k - 1] + lr[n - 1],
                sp.scale,
            );
        }
    }
    Ok(out)
}

fn edge_monotone(
    g: &DirectedWeightedGraph,
    augmented: &DirectedWeightedGraph,
    params: &CertifyParams,
) -> Result<Outcome> {
    if augmented.vertex_count() != g.vertex_count() {
        return Err(Error::Hypothesis("the augmented graph has a different vertex set".into()));
    }
    for v in g.vertex_ids() {
        if !augmented.contains_vertex(v) {
            return Err(Error::Hypothesis(format!("vertex {v} is missing from the augmented graph")));
        }
    }
    for (x, y, b) in g.edges() {
        let b_aug = augmented.weight(x, y);
        if b_aug < b * (1.0 - 1e-12) {
            return Err(Error::Hypothesis(format!(
                "edge ({x},{y}) has weight {b} in G but {b_aug} in the augmented graph"
            )));
        }
    }
    let measure = Measure::for_mode(g, params.mode)?;
    let s_g = special_laplacian_with(g, &measure)?;
    let s_aug = piece_operator(augmented, &Measure::inherit(g, &measure, augmented)?)?;
    let lg = symmetric_values(&s_g)?;
    let la = symmetric_values(&s_aug)?;
    let mut out = Outcome::new(vec![params.mode]);
    if !is_balanced(augmented) {
        out.flags.push("augmented-graph-unbalanced".into());
    }
    for k in index_range("k", params.k, 1, lg.len())? {
        out.le(format!("k={k}: λ_{k}(S_G) ≤ λ_{k}(S_G')"), lg[k - 1], la[k - 1], s_aug.scale());
    }
    out.notes.push("both operators use the measure of G".into());
    Ok(out)
}

fn dirichlet_realpart(g: &DirectedWeightedGraph, subset: &[VertexId], params: &CertifyParams) -> Result<Outcome> {
    let measure = Measure::for_mode(g, params.mode)?;
    let s = special_laplacian_with(g, &measure)?;
    let sd = symmetric_values(&dirichlet(&s, subset)?)?;
    let dd = eig_general(&dirichlet(&laplacian_with(g, &measure)?, subset)?)?;
    let u = sd.len();
    let mut out = Outcome::new(vec![params.mode]);
    out.le("λ_1(S^D_U) ≤ 2Re λ_1(Δ^D_U)".into(), sd[0], 2.0 * dd.lambda(1).re, s.scale());
    out.ge(format!("λ_{u}(S^D_U) ≥ 2Re λ_{u}(Δ^D_U)"), sd[u - 1], 2.0 * dd.lambda(u).re, s.scale());
    out.notes.push(format!("top index taken as #U = {u}"));
    Ok(out)
}

fn dirichlet_interlace(g: &DirectedWeightedGraph, subset: &[VertexId], params: &CertifyParams) -> Result<Outcome> {
    let h = connected_subgraph(g, subset)?;
    let mut out = Outcome::new(vec![Mode::Raw, Mode::Normalized]);
    for mode in [Mode::Raw, Mode::Normalized] {
        let s_g = special_laplacian_with(g, &Measure::for_mode(g, mode)?)?;
        let lg = symmetric_values(&s_g)?;
        let ld = symmetric_values(&dirichlet(&s_g, h.vertex_ids())?)?;
        let (n, r) = (lg.len(), ld.len());
        let tag = match mode {
            Mode::Raw => "raw",
            Mode::Normalized => "normalized",
        };
        for k in index_range("k", params.k, 1, r)? {
            out.le(
                format!("{tag} k={k}: λ_{k}(S^D_H) ≤ λ_{}(S_G)", k + n - r),
                ld[k - 1],
                lg[k + n - r - 1],
                s_g.scale(),
            );
        }
    }
    Ok(out)
}

fn dirichlet_max_combine(g: &DirectedWeightedGraph, subset: &[VertexId], params: &CertifyParams) -> Result<Outcome> {
    let measure = Measure::for_mode(g, params.mode)?;
    let h = connected_subgraph(g, subset)?;
    let h_measure = Measure::inherit(g, &measure, &h)?;
    let mut out = Outcome::new(vec![params.mode]);
    let s_h = if is_balanced(&h) {
        special_laplacian_with(&h, &h_measure)?
    } else {
        out.flags.push("adjoint-by-definition".into());
        special_by_adjoint_with(&h, &h_measure)?
    };
    let s_g = special_laplacian_with(g, &measure)?;
    let delta_g = laplacian_with(g, &measure)?;
    let lg = symmetric_values(&s_g)?;
    let lh = symmetric_values(&s_h)?;
    let lhd = symmetric_values(&dirichlet(&s_g, h.vertex_ids())?)?;
    let dh = eig_general(&laplacian_with(&h, &h_measure)?)?;
    let dhd = eig_general(&dirichlet(&delta_g, h.vertex_ids())?)?;
    let (n, r) = (lg.len(), lh.len());
    let scale = s_g.scale();
    for k in index_range("k", params.k, 1, r)? {
        out.ge(
            format!("k={k}: λ_{}(S_G) ≥ max(λ_{k}(S_H), λ_{k}(S^D_H))", k + n - r),
            lg[k + n - r - 1],
            lh[k - 1].max(lhd[k - 1]),
            scale,
        );
    }
    out.ge(
        format!("λ_{n}(S_G) ≥ max(2Re λ_{r}(Δ_H), 2Re λ_{r}(Δ^D_H))"),
        lg[n - 1],
        2.0 * dh.lambda(r).re.max(dhd.lambda(r).re),
        scale,
    );
    Ok(out)
}

fn cycle_subgraph_corollary(g: &DirectedWeightedGraph, subset: &[VertexId]) -> Result<Outcome> {
    let h = connected_subgraph(g, subset)?;
    let measure = Measure::given(g);
    let delta = laplacian_with(g, &measure)?;
    let dg = eig_general(&delta)?;
    let dh = eig_general(&laplacian_with(&h, &Measure::inherit(g, &measure, &h)?)?)?;
    let dhd = eig_general(&dirichlet(&delta, h.vertex_ids())?)?;
    let (n, r) = (dg.len(), dh.len());
    let mut out = Outcome::new(vec![Mode::Raw]);
    out.ge(
        format!("Re λ_{n}(Δ_Cn) ≥ max(Re λ_{r}(Δ_H), Re λ_{r}(Δ^D_H))"),
        dg.lambda(n).re,
        dh.lambda(r).re.max(dhd.lambda(r).re),
        delta.scale(),
    );
    Ok(out)
}

struct Interiors {
    a: Vec<VertexId>,
    b: Vec<VertexId>,
}

fn partition_interiors(g: &DirectedWeightedGraph, p: &Partition) -> Result<Interiors> {
    require_connected(g, "G")?;
    let report = validate_partition(g, p).into_result()?;
    if report.interior_a.is_empty() || report.interior_b.is_empty() {
        return Err(Error::Hypothesis(format!(
            "#Å = {}, #B̊ = {}: the index range 1 ≤ k,l ≤ min(#Å, #B̊) is empty",
            report.interior_a.len(),
            report.interior_b.len()
        )));
    }
    Ok(Interiors { a: report.interior_a, b: report.interior_b })
}

fn partition_bound(g: &DirectedWeightedGraph, p: &Partition, params: &CertifyParams) -> Result<Outcome> {
    let inner = partition_interiors(g, p)?;
    let measure = Measure::for_mode(g, params.mode)?;
    let s = special_laplacian_with(g, &measure)?;
    let lg = symmetric_values(&s)?;
    let la = symmetric_values(&dirichlet(&s, &inner.a)?)?;
    let lb = symmetric_values(&dirichlet(&s, &inner.b)?)?;
    let top = la.len().min(lb.len());
    let ks = index_range("k", params.k, 1, top)?;
    let ls = index_range("l", params.l, 1, top)?;
    let mut out = Outcome::new(vec![params.mode]);
    for &k in &ks {
        for &l in &ls {
            out.le(
                format!("k={k} l={l}: λ_{}(S_G) ≤ max(λ_{k}(S^D_Å), λ_{l}(S^D_B̊))", k + l),
                lg[k + l - 1],
                la[k - 1].max(lb[l - 1]),
                s.scale(),
            );
        }
    }
    out.notes.push(format!("#Å = {}, #B̊ = {}", la.len(), lb.len()));
    Ok(out)
}

fn first_real_part(spec: &ComplexSpectrum) -> f64 {
    spec.lambda(1).re
}

fn partition_realpart(g: &DirectedWeightedGraph, p: &Partition, params: &CertifyParams) -> Result<Outcome> {
    let inner = partition_interiors(g, p)?;
    let measure = Measure::for_mode(g, params.mode)?;
    let s = special_laplacian_with(g, &measure)?;
    let delta = laplacian_with(g, &measure)?;
    let lg = symmetric_values(&s)?;
    let ra = first_real_part(&eig_general(&dirichlet(&delta, &inner.a)?)?);
    let rb = first_real_part(&eig_general(&dirichlet(&delta, &inner.b)?)?);
    let mut out = Outcome::new(vec![params.mode]);
    out.le("λ_2(S_G) ≤ max(2Re λ_1(Δ^D_Å), 2Re λ_1(Δ^D_B̊))".into(), lg[1], 2.0 * ra.max(rb), s.scale());
    if is_simple_cycle(g) {
        let dg = eig_general(&delta)?;
        out.le(
            "cycle: Re λ_2(Δ_Cn) ≤ max(Re λ_1(Δ^D_Å), Re λ_1(Δ^D_B̊))".into(),
            dg.lambda(2).re,
            ra.max(rb),
            delta.scale(),
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::certify;
    use super::*;
    use crate::generators::symmetric_star;
    use crate::graph::ids;

    fn triangle() -> DirectedWeightedGraph {
        DirectedWeightedGraph::builder()
            .vertices(["a", "b", "c"])
            .symmetric_edge("a", "b", 1.0)
            .symmetric_edge("b", "c", 1.0)
            .symmetric_edge("c", "a", 1.0)
            .build()
            .unwrap()
    }

    #[test]
    fn c3_cycle_spectrum_passes() {
        let cert = certify(&TheoremInput::Cycle { n: 3 }, TheoremId::CycleSpectrum, &CertifyParams::default()).unwrap();
        assert!(cert.pass);
        assert!(cert.checks[0].lhs <= 1e-10);
    }

    #[test]
    fn triangle_subgraph_interlace_values() {
        let input = TheoremInput::Subgraph { graph: triangle(), subset: ids(["a", "b"]) };
        let cert = certify(&input, TheoremId::SubgraphInterlace, &CertifyParams::default()).unwrap();
        assert!(cert.pass);
        let asserted: Vec<_> = cert.asserted().collect();
        assert_eq!(asserted.len(), 2);
        // symmetric triangle with a = 2 on every pair: S_G = 2·L(K3), spectrum {0, 6, 6};
        // S_H = 2·L(K2), spectrum {0, 4}
        assert!(asserted[0].lhs.abs() < 1e-12 && (asserted[0].rhs - 6.0).abs() < 1e-12);
        assert!((asserted[1].lhs - 4.0).abs() < 1e-12 && (asserted[1].rhs - 6.0).abs() < 1e-12);
    }

    #[test]
    fn empty_second_part_gives_zero_margins() {
        let g = cycle(5).unwrap();
        let input = TheoremInput::EdgeSplit { first: g.edge_list(), graph: g };
        let cert = certify(&input, TheoremId::EdgeSandwich, &CertifyParams::default()).unwrap();
        assert!(cert.pass);
        for c in cert.checks.iter().filter(|c| c.desc.starts_with("s=1")) {
            assert_eq!(c.margin, 0.0, "{}", c.desc);
        }
    }

    #[test]
    fn index_outside_statement_is_rejected() {
        let input = TheoremInput::Subgraph { graph: triangle(), subset: ids(["a", "b"]) };
        let params = CertifyParams { k: Some(IndexRange::new(1, 3)), ..Default::default() };
        assert!(matches!(certify(&input, TheoremId::SubgraphInterlace, &params), Err(Error::IndexOutOfRange(_))));
        let params = CertifyParams { j: Some(IndexRange::new(0, 1)), ..Default::default() };
        assert!(matches!(certify(&input, TheoremId::SubgraphInterlace, &params), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn wrong_input_kind_is_rejected() {
        let err = certify(&TheoremInput::Cycle { n: 4 }, TheoremId::EdgeWeyl, &CertifyParams::default()).unwrap_err();
        assert!(err.to_string().contains("edge_split"));
    }

    #[test]
    fn disconnected_subgraph_is_a_hypothesis_error() {
        let input = TheoremInput::Subgraph { graph: cycle(6).unwrap(), subset: ids(["0", "3"]) };
        assert!(matches!(
            certify(&input, TheoremId::SubgraphInterlace, &CertifyParams::default()),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn star_tree_bound() {
        let cert = certify(
            &TheoremInput::Tree { graph: symmetric_star(4).unwrap() },
            TheoremId::TreeStarBound,
            &CertifyParams::default(),
        )
        .unwrap();
        assert!(cert.pass);
        assert_eq!(cert.asserted().count(), 3);
    }

    #[test]
    fn dirichlet_interlace_on_whole_graph_is_tight() {
        let g = cycle(5).unwrap();
        let input = TheoremInput::Subgraph { subset: g.vertex_ids().to_vec(), graph: g };
        let cert = certify(&input, TheoremId::DirichletInterlace, &CertifyParams::default()).unwrap();
        assert!(cert.pass);
        assert_eq!(cert.modes, vec![Mode::Raw, Mode::Normalized]);
        assert!(cert.checks.iter().all(|c| c.margin == 0.0));
    }

    #[test]
    fn unbalanced_subgraph_flags_adjoint() {
        let g = cycle(6).unwrap();
        let input = TheoremInput::Subgraph { graph: g, subset: ids(["0", "1", "2"]) };
        let cert = certify(&input, TheoremId::DirichletMaxCombine, &CertifyParams::default()).unwrap();
        assert!(cert.pass);
        assert_eq!(cert.flags, vec!["adjoint-by-definition".to_string()]);
    }

    #[test]
    fn cycle_partition_adds_cycle_version() {
        let g = cycle(8).unwrap();
        let p = Partition::from_split(&g, &ids(["0", "1", "2", "3"])).unwrap();
        let cert = certify(
            &TheoremInput::Partition { graph: g, partition: p },
            TheoremId::PartitionRealpart,
            &CertifyParams::default(),
        )
        .unwrap();
        assert!(cert.pass);
        assert_eq!(cert.checks.len(), 2);
    }

    #[test]
    fn digest_is_stable_and_input_sensitive() {
        let p = CertifyParams::default();
        let a = TheoremInput::Cycle { n: 4 }.digest(TheoremId::CycleSpectrum, &p);
        assert_eq!(a, TheoremInput::Cycle { n: 4 }.digest(TheoremId::CycleSpectrum, &p));
        assert_ne!(a, TheoremInput::Cycle { n: 5 }.digest(TheoremId::CycleSpectrum, &p));
        assert_eq!(a.len(), 64);
    }
}
