//! Acceptance suite: one line per criterion, non-zero exit on any failure.
//!
//! Reference values (closed-form spectra, Green sums, inner products) are
//! computed here from first principles rather than through the library.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spectra_core::eigen::{complex_multiset_distance, eig_general, eig_m_symmetric, zero_cluster_size};
use spectra_core::generators::{cycle, random_balanced, symmetric_star, GeneratorSeed};
use spectra_core::operators::{
    adjoint_laplacian_with, laplacian, laplacian_with, special_laplacian, special_laplacian_with, Measure, Mode,
};
use spectra_core::theorems::{
    batch_certify, certify, BatchSummary, CertifyParams, FamilySpec, TheoremId, TheoremInput,
};
use spectra_core::DirectedWeightedGraph;

const C3_TOL: f64 = 1e-9;
const CYCLE_TOL: f64 = 1e-8;
const BOUND_SLACK: f64 = 1e-8;
const GREEN_TOL: f64 = 1e-10;
const POSITIVITY_TOL: f64 = 1e-12;
const INEQ_TOL: f64 = 1e-8;
const STAR_TOL: f64 = 1e-9;
const SOLVER_AGREEMENT_TOL: f64 = 1e-8;
const RESIDUAL_TOL: f64 = 1e-9;
const PERMUTATION_TOL: f64 = 1e-10;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed <= limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

/// Greedy nearest matching; adequate for well-separated reference values.
fn match_distance(computed: &[Complex64], expected: &[Complex64]) -> f64 {
    if computed.len() != expected.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; computed.len()];
    let mut worst: f64 = 0.0;
    for e in expected {
        let (best, d) = computed
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, c)| (i, (c - e).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("lengths agree");
        used[best] = true;
        worst = worst.max(d);
    }
    worst
}

fn sorted_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    if x.len() != y.len() {
        return f64::INFINITY;
    }
    x.iter().zip(&y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
}

/// `1 - e^{2πil/n}` for `l = 0..n`.
fn cycle_reference(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|l| {
            Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * l as f64 / n as f64)
        })
        .collect()
}

fn random_graph(rng: &mut ChaCha8Rng, n_max: usize) -> DirectedWeightedGraph {
    let n = rng.gen_range(2..=n_max);
    let extra = rng.gen_range(0..=n);
    random_balanced(n, extra, GeneratorSeed(rng.gen())).expect("generator succeeds")
}

fn zero_failures(summary: &BatchSummary) -> Result<(), String> {
    ensure(summary.failed == 0, || {
        let f = &summary.failures[0];
        format!(
            "{}: {} of {} trials failed; first at trial {} ({:?})",
            summary.theorem,
            summary.failed,
            summary.trials,
            f.trial,
            f.certificate.failing_checks().first().map(|c| (&c.desc, c.margin))
        )
    })
}

fn batch(family: FamilySpec, theorem: TheoremId, trials: usize, seed: u64) -> Result<BatchSummary, String> {
    let params = CertifyParams { tolerance: Some(INEQ_TOL), ..Default::default() };
    let s = batch_certify(&family, theorem, trials, GeneratorSeed(seed), &params).map_err(|e| e.to_string())?;
    zero_failures(&s)?;
    ensure(s.trials == trials && s.passed == trials, || format!("{theorem}: {} of {trials} passed", s.passed))?;
    Ok(s)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let g = cycle(3).unwrap();
    let delta = eig_general(&laplacian(&g, Mode::Raw).unwrap()).unwrap();
    let s = eig_m_symmetric(&special_laplacian(&g, Mode::Raw).unwrap()).unwrap();
    let expected_delta =
        [Complex64::new(0.0, 0.0), Complex64::new(1.5, 0.8660254038), Complex64::new(1.5, -0.8660254038)];
    let dd = match_distance(&delta.eigenvalues, &expected_delta);
    let ds = sorted_distance(&s.eigenvalues, &[0.0, 3.0, 3.0]);
    ensure(dd <= C3_TOL, || format!("σ(Δ_C3) off by {dd:.3e}"))?;
    ensure(ds <= C3_TOL, || format!("σ(S_C3) off by {ds:.3e}"))?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("Δ mismatch {dd:.1e}, S mismatch {ds:.1e}, {:?}", start.elapsed()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for n in 2..=50 {
        let g = cycle(n).unwrap();
        let computed = eig_general(&laplacian(&g, Mode::Raw).unwrap()).unwrap();
        let d = match_distance(&computed.eigenvalues, &cycle_reference(n));
        ensure(d <= CYCLE_TOL, || format!("n={n}: mismatch {d:.3e}"))?;
        worst = worst.max(d);
        let twos = computed.eigenvalues.iter().filter(|z| (*z - Complex64::new(2.0, 0.0)).norm() <= 1e-6).count();
        ensure(twos == usize::from(n % 2 == 0), || format!("n={n}: eigenvalue 2 appears {twos} times"))?;
        let cert = certify(&TheoremInput::Cycle { n }, TheoremId::CycleSpectrum, &CertifyParams::default())
            .map_err(|e| e.to_string())?;
        ensure(cert.pass, || format!("n={n}: CYCLE_SPECTRUM certificate failed"))?;
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("n=2..50, worst mismatch {worst:.1e}, {:?}", start.elapsed()))
}

fn criterion_3() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 2..=50 {
        let g = cycle(n).unwrap();
        let s = eig_m_symmetric(&special_laplacian(&g, Mode::Raw).unwrap()).unwrap();
        let twice_re: Vec<f64> = cycle_reference(n).iter().map(|z| 2.0 * z.re).collect();
        let d = sorted_distance(&s.eigenvalues, &twice_re);
        ensure(d <= CYCLE_TOL, || format!("n={n}: σ(S) vs 2Re σ(Δ) off by {d:.3e}"))?;
        worst = worst.max(d);
        let cert = certify(
            &TheoremInput::Cycle { n },
            TheoremId::CycleCorollary,
            &CertifyParams { tolerance: Some(CYCLE_TOL), ..Default::default() },
        )
        .map_err(|e| e.to_string())?;
        ensure(cert.pass, || format!("n={n}: CYCLE_COROLLARY certificate failed"))?;
    }
    Ok(format!("n=2..50, worst {worst:.1e}"))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut lo, mut hi, mut re_lo, mut re_hi) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for t in 0..500 {
        let g = random_graph(&mut rng, 12);
        let s = special_laplacian(&g, Mode::Normalized).unwrap();
        let values = eig_m_symmetric(&s).unwrap().eigenvalues;
        let re = eig_general(&laplacian(&g, Mode::Normalized).unwrap()).unwrap().real_parts();
        lo = lo.min(values[0]);
        hi = hi.max(*values.last().unwrap());
        re_lo = re_lo.min(re[0]);
        re_hi = re_hi.max(*re.last().unwrap());
        ensure(values[0] >= -BOUND_SLACK && *values.last().unwrap() <= 4.0 + BOUND_SLACK, || {
            format!("trial {t}: σ(S̃) = {values:?} leaves [0,4]")
        })?;
        ensure(re[0] >= -BOUND_SLACK && *re.last().unwrap() <= 2.0 + BOUND_SLACK, || {
            format!("trial {t}: Re σ(Δ̃) = {re:?} leaves [0,2]")
        })?;
        if g.is_connected() {
            let zeros = zero_cluster_size(&values, s.norm());
            ensure(zeros == 1, || format!("trial {t}: zero cluster of size {zeros}"))?;
        }
        let cert = certify(&TheoremInput::graph(g), TheoremId::SpectrumBasic, &CertifyParams::default())
            .map_err(|e| e.to_string())?;
        ensure(cert.pass, || format!("trial {t}: SPECTRUM_BASIC certificate failed"))?;
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("σ(S̃) ⊆ [{lo:.2e}, {hi:.4}], Re σ(Δ̃) ⊆ [{re_lo:.2e}, {re_hi:.4}], {:?}", start.elapsed()))
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut worst_green, mut worst_pos): (f64, f64) = (0.0, f64::INFINITY);
    for t in 0..1000 {
        let g = random_graph(&mut rng, 10);
        let n = g.vertex_count();
        let m: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
        let g = g.with_measure(m.clone()).unwrap();
        let measure = Measure::given(&g);
        let delta = laplacian_with(&g, &measure).unwrap();
        let star = adjoint_laplacian_with(&g, &measure).unwrap();
        let s = special_laplacian_with(&g, &measure).unwrap();
        let f = random_vector(&mut rng, n);
        let h = random_vector(&mut rng, n);
        let inner = |u: &[Complex64], v: &[Complex64]| -> Complex64 { (0..n).map(|i| m[i] * u[i] * v[i].conj()).sum() };
        let lhs = inner(&delta.apply(&f), &h) + inner(&star.apply(&f), &h);
        let mut green = Complex64::new(0.0, 0.0);
        for ((i, j), b) in g.indexed_edges() {
            green += b * (f[i] - f[j]) * (h[i] - h[j]).conj();
        }
        let nf = inner(&f, &f).re.sqrt();
        let nh = inner(&h, &h).re.sqrt();
        let scale = s.norm().max(1.0) * nf * nh;
        let err = (lhs - green).norm() / scale;
        worst_green = worst_green.max(err);
        ensure(err <= GREEN_TOL, || format!("trial {t}: Green identity off by {err:.3e}·scale"))?;

        let q = inner(&s.apply(&f), &f);
        let rel = q.re / (nf * nf * s.norm().max(1.0));
        worst_pos = worst_pos.min(rel);
        ensure(rel >= -POSITIVITY_TOL, || format!("trial {t}: (Sf,f)_m = {} < 0", q.re))?;
    }
    Ok(format!("worst Green error {worst_green:.1e}·scale, min (Sf,f)/scale {worst_pos:.2e}"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut min_margin = f64::INFINITY;
    let mut recorded_violations = 0;
    for t in 0..500 {
        let g = random_graph(&mut rng, 12);
        let s = special_laplacian(&g, Mode::Raw).unwrap();
        let sv = eig_m_symmetric(&s).unwrap().eigenvalues;
        let dv = eig_general(&laplacian(&g, Mode::Raw).unwrap()).unwrap().real_parts();
        let n = sv.len();
        let margin = sv[n - 1] - 2.0 * dv[n - 1];
        min_margin = min_margin.min(margin / s.scale());
        ensure(margin >= -INEQ_TOL * s.scale(), || format!("trial {t}: margin {margin:.3e}"))?;
        let cert = certify(&TheoremInput::graph(g), TheoremId::RealpartLemma, &CertifyParams::default())
            .map_err(|e| e.to_string())?;
        ensure(cert.pass, || format!("trial {t}: REALPART_LEMMA certificate failed"))?;
        recorded_violations += cert.checks.iter().filter(|c| !c.asserted && c.margin < 0.0).count();
    }
    Ok(format!(
        "min relative margin {min_margin:.3e}; informational k<n checks with negative margin: {recorded_violations}"
    ))
}

fn criterion_7() -> Outcome {
    let s = batch(FamilySpec::random_balanced(10), TheoremId::SubgraphInterlace, 1000, 7)?;
    Ok(format!("{} checks, min relative margin {:.3e}", s.checks, s.min_relative_margin))
}

fn criterion_8() -> Outcome {
    let s = batch(FamilySpec::random_balanced(8), TheoremId::FlowerMonotone, 200, 8)?;
    Ok(format!("{} checks, min relative margin {:.3e}", s.checks, s.min_relative_margin))
}

fn criterion_9() -> Outcome {
    for q in 2..=10 {
        let s = eig_m_symmetric(&special_laplacian(&symmetric_star(q).unwrap(), Mode::Raw).unwrap()).unwrap();
        let mut expected = vec![0.0];
        expected.extend(std::iter::repeat_n(2.0, q - 1));
        expected.push(2.0 * (q + 1) as f64);
        let d = sorted_distance(&s.eigenvalues, &expected);
        ensure(d <= STAR_TOL, || format!("star q={q}: off by {d:.3e}"))?;
    }
    let s = batch(FamilySpec::random_tree(12), TheoremId::TreeStarBound, 200, 9)?;
    Ok(format!("stars q=2..10 exact; trees: {} checks, min relative margin {:.3e}", s.checks, s.min_relative_margin))
}

fn criterion_10() -> Outcome {
    let w = batch(FamilySpec::random_balanced(10), TheoremId::EdgeWeyl, 500, 10)?;
    let s = batch(FamilySpec::random_balanced(10), TheoremId::EdgeSandwich, 500, 11)?;
    let m = batch(FamilySpec::random_balanced(10), TheoremId::EdgeMonotone, 200, 12)?;
    Ok(format!(
        "Weyl {} checks (min {:.2e}), sandwich {} checks (min {:.2e}), monotone {} checks (min {:.2e})",
        w.checks, w.min_relative_margin, s.checks, s.min_relative_margin, m.checks, m.min_relative_margin
    ))
}

fn criterion_11() -> Outcome {
    let r = batch(FamilySpec::random_balanced(10), TheoremId::DirichletRealpart, 500, 13)?;
    let i = batch(FamilySpec::random_balanced(10), TheoremId::DirichletInterlace, 500, 14)?;
    Ok(format!(
        "lemma {} checks (min {:.2e}), interlacing {} checks (min {:.2e})",
        r.checks, r.min_relative_margin, i.checks, i.min_relative_margin
    ))
}

fn criterion_12() -> Outcome {
    let b = batch(FamilySpec::random_balanced(12), TheoremId::PartitionBound, 200, 15)?;
    let r = batch(FamilySpec::random_balanced(12), TheoremId::PartitionRealpart, 200, 16)?;
    let c = batch(FamilySpec::cycles(6, 30), TheoremId::PartitionRealpart, 50, 17)?;
    Ok(format!(
        "bound {} checks (min {:.2e}), λ_2 corollary {} checks (min {:.2e}), cycle version {} checks",
        b.checks, b.min_relative_margin, r.checks, r.min_relative_margin, c.checks
    ))
}

fn criterion_13() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let (mut agree, mut resid, mut perm): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for t in 0..300 {
        let g = random_graph(&mut rng, 12);
        let mode = if t % 2 == 0 { Mode::Raw } else { Mode::Normalized };
        let s = special_laplacian(&g, mode).unwrap();
        let sym = eig_m_symmetric(&s).unwrap();
        let gen = eig_general(&s).unwrap();
        let as_complex: Vec<Complex64> = sym.eigenvalues.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let d = complex_multiset_distance(&gen.eigenvalues, &as_complex);
        agree = agree.max(d);
        ensure(d <= SOLVER_AGREEMENT_TOL, || format!("trial {t}: solvers disagree by {d:.3e}"))?;

        let delta = eig_general(&laplacian(&g, mode).unwrap()).unwrap();
        let r = sym.residual.max(gen.residual).max(delta.residual);
        resid = resid.max(r);
        ensure(r <= RESIDUAL_TOL, || format!("trial {t}: residual {r:.3e}"))?;

        let mut order: Vec<usize> = (0..g.vertex_count()).collect();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let p = g.reordered(&order);
        let sym_p = eig_m_symmetric(&special_laplacian(&p, mode).unwrap()).unwrap();
        let delta_p = eig_general(&laplacian(&p, mode).unwrap()).unwrap();
        let ds = sorted_distance(&sym.eigenvalues, &sym_p.eigenvalues);
        let dd = complex_multiset_distance(&delta.eigenvalues, &delta_p.eigenvalues);
        perm = perm.max(ds).max(dd);
        ensure(ds.max(dd) <= PERMUTATION_TOL, || {
            format!("trial {t}: permutation changes spectra by {:.3e}", ds.max(dd))
        })?;
    }
    Ok(format!("solver agreement {agree:.1e}, max residual {resid:.1e}, permutation drift {perm:.1e}"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 13] = [
        ("C_3 exact spectra", criterion_1),
        ("cycle closed form n=2..50", criterion_2),
        ("cycle corollary σ(S)=2Re σ(Δ)", criterion_3),
        ("basic spectrum bounds, 500 graphs", criterion_4),
        ("Green identity and positivity, 1000 triples", criterion_5),
        ("real-part lemma, 500 graphs", criterion_6),
        ("subgraph interlacing, 1000 pairs", criterion_7),
        ("flower monotonicity, 200 flowers", criterion_8),
        ("tree/star corollary", criterion_9),
        ("edge-partition Weyl, sandwich, monotone", criterion_10),
        ("Dirichlet lemma and interlacing", criterion_11),
        ("partition bound and λ_2 corollary", criterion_12),
        ("solver self-consistency", criterion_13),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{:>2}] {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL [{:>2}] {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
