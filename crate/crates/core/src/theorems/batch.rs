//! Random instances that satisfy each statement's hypotheses by
//! construction, and batch runs over them.

use std::collections::BTreeSet;

use rand::seq::{IteratorRandom, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::partition::validate_partition;
use super::{certify, Certificate, CertifyParams, Partition, TheoremId, TheoremInput};
use crate::error::{Error, Result};
use crate::generators::{cycle, flower_compose, random_balanced, random_tree, with_prefix, GeneratorSeed, Petal};
use crate::graph::{DirectedWeightedGraph, VertexId};

const MAX_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    RandomBalanced,
    RandomTree,
    Cycle,
}

/// Base graphs for a batch. Statements about cycles or trees always use
/// cycles or trees; the size range still applies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub n_min: usize,
    pub n_max: usize,
    /// Extra random cycles on top of the Hamiltonian one, drawn from `0..=max_extra_cycles`.
    pub max_extra_cycles: usize,
}

impl FamilySpec {
    pub fn random_balanced(n_max: usize) -> Self {
        FamilySpec { kind: FamilyKind::RandomBalanced, n_min: 2, n_max, max_extra_cycles: n_max }
    }

    pub fn random_tree(n_max: usize) -> Self {
        FamilySpec { kind: FamilyKind::RandomTree, n_min: 2, n_max, max_extra_cycles: 0 }
    }

    pub fn cycles(n_min: usize, n_max: usize) -> Self {
        FamilySpec { kind: FamilyKind::Cycle, n_min, n_max, max_extra_cycles: 0 }
    }

    fn validate(&self) -> Result<()> {
        if self.n_min < 2 || self.n_min > self.n_max {
            return Err(Error::InvalidParameter(format!(
                "family size range {}..{} must satisfy 2 <= n_min <= n_max",
                self.n_min, self.n_max
            )));
        }
        Ok(())
    }

    fn size(&self, rng: &mut ChaCha8Rng, at_least: usize) -> usize {
        rng.gen_range(self.n_min.max(at_least)..=self.n_max.max(at_least))
    }

    fn balanced(&self, n: usize, rng: &mut ChaCha8Rng) -> Result<DirectedWeightedGraph> {
        let extra = rng.gen_range(0..=self.max_extra_cycles);
        random_balanced(n, extra, GeneratorSeed(rng.gen()))
    }

    fn base(&self, rng: &mut ChaCha8Rng, at_least: usize) -> Result<DirectedWeightedGraph> {
        let n = self.size(rng, at_least);
        match self.kind {
            FamilyKind::RandomBalanced => self.balanced(n, rng),
            FamilyKind::RandomTree => random_tree(n, GeneratorSeed(rng.gen())),
            FamilyKind::Cycle => cycle(n),
        }
    }
}

/// Connected vertex set of size `r`, grown from a random vertex.
fn connected_subset(g: &DirectedWeightedGraph, r: usize, rng: &mut ChaCha8Rng) -> Vec<VertexId> {
    let n = g.vertex_count();
    let mut chosen = BTreeSet::from([rng.gen_range(0..n)]);
    while chosen.len() < r {
        let frontier: BTreeSet<usize> =
            chosen.iter().flat_map(|&i| g.neighbors_at(i)).filter(|j| !chosen.contains(j)).collect();
        match frontier.into_iter().choose(rng) {
            Some(j) => {
                chosen.insert(j);
            }
            None => break,
        }
    }
    chosen.into_iter().map(|i| g.vertex_ids()[i].clone()).collect()
}

fn random_subset(g: &DirectedWeightedGraph, rng: &mut ChaCha8Rng) -> Vec<VertexId> {
    let r = rng.gen_range(1..=g.vertex_count());
    let mut ids = g.vertex_ids().to_vec();
    ids.shuffle(rng);
    ids.truncate(r);
    ids
}

fn random_flower(family: &FamilySpec, rng: &mut ChaCha8Rng) -> Result<TheoremInput> {
    let core = family.base(rng, 2)?;
    let count = rng.gen_range(1..=4.min(core.vertex_count()));
    let attach: Vec<VertexId> = core.vertex_ids().choose_multiple(rng, count).cloned().collect();
    let petals = attach
        .into_iter()
        .enumerate()
        .map(|(p, attach_core)| {
            let size = rng.gen_range(2..=6);
            let graph = with_prefix(&family.balanced(size, rng)?, &format!("p{p}_"))?;
            let attach_petal = graph.vertex_ids().choose(rng).expect("petals are non-empty").clone();
            Ok(Petal { graph, attach_core, attach_petal })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TheoremInput::Flower { flower: flower_compose(&core, petals)? })
}

/// Two balanced blocks joined by directed cycles through some of their
/// vertices; every block keeps at least one untouched vertex, so both
/// interiors are non-empty.
fn random_partition(family: &FamilySpec, rng: &mut ChaCha8Rng) -> Result<TheoremInput> {
    if family.kind == FamilyKind::Cycle {
        let n = family.size(rng, 6);
        let g = cycle(n)?;
        let a_len = rng.gen_range(3..=n - 3);
        let start = rng.gen_range(0..n);
        let a: Vec<VertexId> = (0..a_len).map(|i| VertexId::from((start + i) % n)).collect();
        let partition = Partition::from_split(&g, &a)?;
        return Ok(TheoremInput::Partition { graph: g, partition });
    }
    let n = family.size(rng, 4);
    let na = rng.gen_range(2..=n - 2);
    let ga = with_prefix(&family.balanced(na, rng)?, "a")?;
    let gb = with_prefix(&family.balanced(n - na, rng)?, "b")?;
    let (ka, kb) = (rng.gen_range(1..na), rng.gen_range(1..n - na));
    let border_a: Vec<VertexId> = ga.vertex_ids().choose_multiple(rng, ka).cloned().collect();
    let border_b: Vec<VertexId> = gb.vertex_ids().choose_multiple(rng, kb).cloned().collect();

    let mut vertices: Vec<(VertexId, f64)> = Vec::new();
    let mut edges: Vec<(VertexId, VertexId, f64)> = Vec::new();
    for g in [&ga, &gb] {
        vertices.extend(g.vertex_ids().iter().cloned().zip(g.measure().iter().copied()));
        edges.extend(g.edges().map(|(x, y, b)| (x.clone(), y.clone(), b)));
    }
    for _ in 0..rng.gen_range(1..=3) {
        let w = rng.gen_range(0.5..=2.0);
        let x1 = border_a.choose(rng).expect("non-empty").clone();
        let y1 = border_b.choose(rng).expect("non-empty").clone();
        if rng.gen_bool(0.5) {
            let x2 = border_a.choose(rng).expect("non-empty").clone();
            let y2 = border_b.choose(rng).expect("non-empty").clone();
            for (p, q) in [(&x1, &y1), (&y1, &x2), (&x2, &y2), (&y2, &x1)] {
                edges.push((p.clone(), q.clone(), w));
            }
        } else {
            edges.push((x1.clone(), y1.clone(), w));
            edges.push((y1, x1, w));
        }
    }
    let g = DirectedWeightedGraph::from_parts(vertices, edges)?;
    let partition = Partition::from_split(&g, ga.vertex_ids())?;
    Ok(TheoremInput::Partition { graph: g, partition })
}

/// Extra weighted directed cycles on the vertices of `g`.
fn augment(g: &DirectedWeightedGraph, rng: &mut ChaCha8Rng) -> Result<DirectedWeightedGraph> {
    let n = g.vertex_count();
    let mut edges: Vec<(VertexId, VertexId, f64)> = g.edges().map(|(x, y, b)| (x.clone(), y.clone(), b)).collect();
    for _ in 0..rng.gen_range(1..=3) {
        let len = rng.gen_range(2..=n);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        order.truncate(len);
        let w = rng.gen_range(0.5..=2.0);
        for k in 0..len {
            let (i, j) = (order[k], order[(k + 1) % len]);
            edges.push((g.vertex_ids()[i].clone(), g.vertex_ids()[j].clone(), w));
        }
    }
    let vertices = g.vertex_ids().iter().cloned().zip(g.measure().iter().copied()).collect();
    DirectedWeightedGraph::from_parts(vertices, edges)
}

fn attempt(theorem: TheoremId, family: &FamilySpec, rng: &mut ChaCha8Rng) -> Result<TheoremInput> {
    use TheoremId as T;
    Ok(match theorem {
        T::GreenIdentity | T::PositivityS | T::SpectrumBasic | T::RealpartLemma => {
            TheoremInput::Graph { graph: family.base(rng, 2)? }
        }
        T::CycleSpectrum | T::CycleCorollary => TheoremInput::Cycle { n: family.size(rng, 2) },
        T::CycleSubgraphCorollary => {
            let n = family.size(rng, 2);
            let g = cycle(n)?;
            let r = rng.gen_range(1..=n);
            TheoremInput::CycleSubgraph { n, subset: connected_subset(&g, r, rng) }
        }
        T::SubgraphInterlace | T::DirichletInterlace | T::DirichletMaxCombine => {
            let graph = family.base(rng, 2)?;
            let r = rng.gen_range(1..=graph.vertex_count());
            let subset = connected_subset(&graph, r, rng);
            TheoremInput::Subgraph { graph, subset }
        }
        T::DirichletRealpart => {
            let graph = family.base(rng, 2)?;
            TheoremInput::DirichletSet { subset: random_subset(&graph, rng), graph }
        }
        T::FlowerMonotone => random_flower(family, rng)?,
        T::TreeStarBound => TheoremInput::Tree { graph: random_tree(family.size(rng, 2), GeneratorSeed(rng.gen()))? },
        T::SingleEdgeAttach => {
            let graph = family.base(rng, 2)?;
            let attached = with_prefix(&family.balanced(rng.gen_range(2..=6), rng)?, "s")?;
            TheoremInput::SingleEdge {
                attach_graph: graph.vertex_ids().choose(rng).expect("non-empty").clone(),
                attach_attached: attached.vertex_ids().choose(rng).expect("non-empty").clone(),
                weight: rng.gen_range(0.5..=2.0),
                graph,
                attached,
            }
        }
        T::EdgeWeyl | T::EdgeSandwich => {
            let graph = family.base(rng, 2)?;
            let first = graph.edge_list().into_iter().filter(|_| rng.gen_bool(0.5)).collect();
            TheoremInput::EdgeSplit { graph, first }
        }
        T::EdgeMonotone => {
            let graph = family.base(rng, 2)?;
            TheoremInput::EdgeAddition { augmented: augment(&graph, rng)?, graph }
        }
        T::PartitionBound | T::PartitionRealpart => random_partition(family, rng)?,
    })
}

fn hypotheses_hold(input: &TheoremInput) -> bool {
    match input {
        TheoremInput::Partition { graph, partition } => {
            let r = validate_partition(graph, partition);
            r.pass() && !r.interior_a.is_empty() && !r.interior_b.is_empty() && graph.is_connected()
        }
        _ => true,
    }
}

/// A random input for `theorem` drawn from `family`, retried a bounded
/// number of times until its hypotheses hold.
pub fn generate_instance(theorem: TheoremId, family: &FamilySpec, seed: GeneratorSeed) -> Result<TheoremInput> {
    family.validate()?;
    let mut rng = seed.rng();
    for _ in 0..MAX_ATTEMPTS {
        let input = attempt(theorem, family, &mut rng)?;
        if hypotheses_hold(&input) {
            return Ok(input);
        }
    }
    Err(Error::GenerationExhausted(MAX_ATTEMPTS))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchFailure {
    pub trial: usize,
    pub seed: GeneratorSeed,
    pub input: TheoremInput,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub theorem: TheoremId,
    pub family: FamilySpec,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub checks: usize,
    /// Smallest `margin / scale` over every asserted check of every trial.
    pub min_relative_margin: f64,
    pub failures: Vec<BatchFailure>,
}

/// Certifies `theorem` on `trials` generated inputs. Trial `i` uses the
/// seed `seed.derive(i)`, so results do not depend on scheduling.
pub fn batch_certify(
    family: &FamilySpec,
    theorem: TheoremId,
    trials: usize,
    seed: GeneratorSeed,
    params: &CertifyParams,
) -> Result<BatchSummary> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    family.validate()?;
    let results = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let trial_seed = seed.derive(trial as u64);
            let input = generate_instance(theorem, family, trial_seed)?;
            let trial_params = CertifyParams { seed: trial_seed.0, ..params.clone() };
            let certificate = certify(&input, theorem, &trial_params)?;
            Ok((trial, trial_seed, input, certificate))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut summary = BatchSummary {
        theorem,
        family: family.clone(),
        trials,
        passed: 0,
        failed: 0,
        checks: 0,
        min_relative_margin: f64::INFINITY,
        failures: Vec::new(),
    };
    for (trial, seed, input, certificate) in results {
        summary.checks += certificate.asserted().count();
        summary.min_relative_margin = summary.min_relative_margin.min(certificate.min_relative_margin());
        if certificate.pass {
            summary.passed += 1;
        } else {
            summary.failed += 1;
            summary.failures.push(BatchFailure { trial, seed, input, certificate });
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_trial_matches_direct_certify() {
        let family = FamilySpec::random_balanced(6);
        let seed = GeneratorSeed(11);
        let params = CertifyParams::default();
        let summary = batch_certify(&family, TheoremId::EdgeWeyl, 1, seed, &params).unwrap();
        let input = generate_instance(TheoremId::EdgeWeyl, &family, seed.derive(0)).unwrap();
        let direct = certify(&input, TheoremId::EdgeWeyl, &CertifyParams { seed: seed.derive(0).0, ..params }).unwrap();
        assert_eq!(summary.trials, 1);
        assert_eq!(summary.passed, 1);
        assert_eq!(summary.checks, direct.asserted().count());
        assert_eq!(summary.min_relative_margin, direct.min_relative_margin());
    }

    #[test]
    fn every_theorem_generates_valid_inputs() {
        let family = FamilySpec::random_balanced(7);
        for t in TheoremId::ALL {
            let s = batch_certify(&family, t, 5, GeneratorSeed(3), &CertifyParams::default()).unwrap();
            assert_eq!(s.failed, 0, "{t}: {:?}", s.failures.first().map(|f| &f.certificate));
        }
    }

    #[test]
    fn cycle_family_partitions() {
        let s = batch_certify(
            &FamilySpec::cycles(6, 12),
            TheoremId::PartitionRealpart,
            10,
            GeneratorSeed(1),
            &CertifyParams::default(),
        )
        .unwrap();
        assert_eq!(s.failed, 0);
        assert_eq!(s.checks, 20);
    }

    #[test]
    fn batches_are_deterministic() {
        let family = FamilySpec::random_balanced(8);
        let a = batch_certify(&family, TheoremId::SubgraphInterlace, 20, GeneratorSeed(5), &CertifyParams::default())
            .unwrap();
        let b = batch_certify(&family, TheoremId::SubgraphInterlace, 20, GeneratorSeed(5), &CertifyParams::default())
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_trials_rejected() {
        let err = batch_certify(
            &FamilySpec::random_balanced(4),
            TheoremId::GreenIdentity,
            0,
            GeneratorSeed(0),
            &CertifyParams::default(),
        );
        assert!(err.is_err());
    }
}
