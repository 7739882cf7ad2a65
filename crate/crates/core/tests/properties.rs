use num_complex::Complex64;
use proptest::prelude::*;

use spectra_core::eigen::{conjugation_deviation, eig_general, eig_m_symmetric, rayleigh};
use spectra_core::generators::{flower_compose, random_balanced, random_tree, with_prefix, GeneratorSeed, Petal};
use spectra_core::graph::DEFAULT_BALANCE_TOL;
use spectra_core::io::{graph_to_json, parse_graph};
use spectra_core::operators::{
    adjoint_by_definition, adjoint_laplacian_with, dirichlet, laplacian_with, special_laplacian_with, Measure, Mode,
    VertexFunction,
};
use spectra_core::DirectedWeightedGraph;

fn balanced() -> impl Strategy<Value = DirectedWeightedGraph> {
    (2usize..=9, 0usize..=6, any::<u64>())
        .prop_map(|(n, extra, seed)| random_balanced(n, extra, GeneratorSeed(seed)).unwrap())
}

fn with_random_measure() -> impl Strategy<Value = DirectedWeightedGraph> {
    balanced().prop_flat_map(|g| {
        let n = g.vertex_count();
        prop::collection::vec(0.25f64..4.0, n).prop_map(move |m| g.with_measure(m).unwrap())
    })
}

fn modes() -> impl Strategy<Value = Mode> {
    prop_oneof![Just(Mode::Raw), Just(Mode::Normalized)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn special_is_sum_of_delta_and_adjoint(g in with_random_measure(), mode in modes()) {
        let m = Measure::for_mode(&g, mode).unwrap();
        let d = laplacian_with(&g, &m).unwrap();
        let a = adjoint_laplacian_with(&g, &m).unwrap();
        let s = special_laplacian_with(&g, &m).unwrap();
        let diff = (&d.entries + &a.entries - &s.entries).abs().max();
        prop_assert!(diff <= 1e-12 * s.scale());
    }

    #[test]
    fn adjoint_formula_matches_definition(g in with_random_measure()) {
        let m = Measure::given(&g);
        let formula = adjoint_laplacian_with(&g, &m).unwrap();
        let definition = adjoint_by_definition(&g, &m).unwrap();
        prop_assert!((&formula.entries - &definition.entries).abs().max() <= 1e-12 * formula.scale());
    }

    #[test]
    fn operators_annihilate_constants(g in with_random_measure(), mode in modes()) {
        let m = Measure::for_mode(&g, mode).unwrap();
        for op in [
            laplacian_with(&g, &m).unwrap(),
            adjoint_laplacian_with(&g, &m).unwrap(),
            special_laplacian_with(&g, &m).unwrap(),
        ] {
            for row in op.entries.row_iter() {
                prop_assert!(row.sum().abs() <= 1e-12 * op.scale());
            }
        }
    }

    #[test]
    fn symmetric_graphs_are_self_adjoint(n in 2usize..12, seed in any::<u64>()) {
        let g = random_tree(n, GeneratorSeed(seed)).unwrap();
        let m = Measure::given(&g);
        let d = laplacian_with(&g, &m).unwrap();
        let a = adjoint_laplacian_with(&g, &m).unwrap();
        prop_assert_eq!(d.entries, a.entries);
    }

    #[test]
    fn dirichlet_is_principal_submatrix(g in balanced(), mask in prop::collection::vec(any::<bool>(), 9)) {
        let subset: Vec<_> = g.vertex_ids().iter().zip(&mask).filter(|(_, &k)| k).map(|(v, _)| v.clone()).collect();
        prop_assume!(!subset.is_empty());
        let s = special_laplacian_with(&g, &Measure::given(&g)).unwrap();
        let d = dirichlet(&s, &subset).unwrap();
        for x in &d.order {
            for y in &d.order {
                prop_assert_eq!(d.entry(x, y), s.entry(x, y));
            }
        }
        let bp = g.beta_plus();
        for (k, x) in d.order.iter().enumerate() {
            let i = g.index_of(x).unwrap();
            prop_assert!((d.entries[(k, k)] - 2.0 * bp[i] / g.measure()[i]).abs() <= 1e-12 * s.scale());
        }
    }

    #[test]
    fn boundary_sets_are_consistent(g in balanced(), mask in prop::collection::vec(any::<bool>(), 9)) {
        let omega: Vec<_> = g.vertex_ids().iter().zip(&mask).filter(|(_, &k)| k).map(|(v, _)| v.clone()).collect();
        prop_assume!(!omega.is_empty());
        let b = g.boundary_sets(&omega).unwrap();
        for v in &b.interior {
            prop_assert!(omega.contains(v));
        }
        for v in &b.vertex_boundary {
            prop_assert!(!omega.contains(v));
        }
        for (x, y) in &b.edge_boundary {
            prop_assert!(omega.contains(x) != omega.contains(y));
        }
        let crossing = g.edges().filter(|(x, y, _)| omega.contains(x) != omega.contains(y)).count();
        prop_assert_eq!(crossing, b.edge_boundary.len());
    }

    #[test]
    fn rayleigh_quotients_lie_in_spectrum_hull(g in with_random_measure(), f in prop::collection::vec(-1.0f64..1.0, 9)) {
        let s = special_laplacian_with(&g, &Measure::given(&g)).unwrap();
        let spec = eig_m_symmetric(&s).unwrap();
        let n = g.vertex_count();
        prop_assume!(f[..n].iter().any(|v| v.abs() > 1e-3));
        let q = rayleigh(&s, &VertexFunction::real(g.vertex_ids(), &f[..n]).unwrap()).unwrap();
        let tol = 1e-10 * s.scale();
        prop_assert!(q.re >= spec.eigenvalues[0] - tol && q.re <= spec.max() + tol);
        prop_assert!(q.im.abs() <= tol);
        let vectors = spec.eigenvectors.as_ref().unwrap();
        for (k, v) in vectors.iter().enumerate() {
            let q = rayleigh(&s, &VertexFunction::real(g.vertex_ids(), v).unwrap()).unwrap();
            prop_assert!((q.re - spec.eigenvalues[k]).abs() <= tol);
        }
    }

    #[test]
    fn delta_spectrum_is_closed_under_conjugation(g in with_random_measure(), mode in modes()) {
        let spec = eig_general(&laplacian_with(&g, &Measure::for_mode(&g, mode).unwrap()).unwrap()).unwrap();
        prop_assert!(conjugation_deviation(&spec.eigenvalues) <= 1e-9);
        let sum: Complex64 = spec.eigenvalues.iter().sum();
        let trace: f64 = laplacian_with(&g, &Measure::for_mode(&g, mode).unwrap()).unwrap().entries.trace();
        prop_assert!((sum.re - trace).abs() <= 1e-9 * trace.max(1.0));
    }

    #[test]
    fn json_round_trip(g in with_random_measure()) {
        let back = parse_graph(&graph_to_json(&g)).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn flower_core_is_recovered(core in balanced(), petal in balanced(), seed in any::<u64>()) {
        let petal = with_prefix(&petal, "p").unwrap();
        let attach_core = core.vertex_ids()[(seed as usize) % core.vertex_count()].clone();
        let attach_petal = petal.vertex_ids()[(seed as usize / 7) % petal.vertex_count()].clone();
        let flower = flower_compose(&core, vec![Petal { graph: petal.clone(), attach_core, attach_petal }]).unwrap();
        prop_assert_eq!(flower.core_graph().unwrap(), core.clone());
        prop_assert_eq!(flower.graph.vertex_count(), core.vertex_count() + petal.vertex_count() - 1);
        prop_assert!(flower.graph.validate(DEFAULT_BALANCE_TOL).is_valid());
    }
}

#[test]
fn random_balanced_is_always_valid() {
    for seed in 0..1000u64 {
        let n = 2 + (seed % 14) as usize;
        let g = random_balanced(n, (seed % 5) as usize, GeneratorSeed(seed)).unwrap();
        let report = g.validate(DEFAULT_BALANCE_TOL);
        assert!(report.is_valid(), "seed {seed}: {report:?}");
        assert!(report.strongly_connected, "seed {seed}");
        assert_eq!(g, random_balanced(n, (seed % 5) as usize, GeneratorSeed(seed)).unwrap());
    }
}
