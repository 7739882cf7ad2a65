//! `spectra`: graph validation, operator spectra and eigenvalue certificates
//! for Kirchhoff-balanced weighted digraphs.
//!
//! Exit codes: 0 success, 1 a certificate failed, 2 bad input or a violated
//! hypothesis.

mod render;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use spectra_core::eigen::{eig_general, eig_m_symmetric};
use spectra_core::generators::{cycle, random_balanced, random_tree, symmetric_star, GeneratorSeed};
use spectra_core::graph::DEFAULT_BALANCE_TOL;
use spectra_core::io::{graph_to_json, graph_to_json_pretty, parse_graph};
use spectra_core::operators::{
    adjoint_by_definition, adjoint_laplacian_with, laplacian_with, special_laplacian_with, Measure, Mode,
    OperatorMatrix,
};
use spectra_core::theorems::{
    batch_certify, certify, validate_partition, CertifyParams, FamilyKind, FamilySpec, IndexRange, Partition,
    TheoremId, TheoremInput,
};
use spectra_core::{DirectedWeightedGraph, Edge, VertexId};

const LONG_ABOUT: &str = "\
Graph files are JSON: {\"vertices\":[{\"id\":\"a\",\"m\":1.0}],\"edges\":[{\"from\":\"a\",\"to\":\"b\",\"b\":1.0}]}.
`m` and `b` default to 1; repeated edges are summed. Without --input (or with --input -) the graph is read from stdin.

Exit codes: 0 success, 1 certificate failure, 2 input or hypothesis error.";

#[derive(Parser)]
#[command(name = "spectra", version, about = "Spectra and eigenvalue certificates for Kirchhoff-balanced digraphs", long_about = LONG_ABOUT)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Graph JSON file; `-` or absent reads stdin.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Output::Text, global = true)]
    output: Output,
}

#[derive(Subcommand)]
enum Command {
    /// Check loops, weights, neighbor hypothesis, connectivity and Kirchhoff balance.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Relative balance tolerance.
        #[arg(long, env = "SPECTRA_TOL", default_value_t = DEFAULT_BALANCE_TOL)]
        tol: f64,
    },
    /// Eigenvalues of Δ, Δ* or S.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = OperatorArg::S, ignore_case = true)]
        operator: OperatorArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Raw)]
        mode: ModeArg,
        /// Build Δ* as M⁻¹ΔᵀM, which does not need Kirchhoff balance.
        #[arg(long)]
        by_definition: bool,
        /// Include m-orthonormal eigenvectors of S in JSON output.
        #[arg(long)]
        vectors: bool,
    },
    /// Certify one statement on one input.
    #[command(after_long_help = CERTIFY_HELP)]
    Certify(Box<CertifyArgs>),
    /// Certify one statement on many generated inputs.
    Batch(BatchArgs),
    /// Print a generated graph as JSON.
    Generate {
        #[command(subcommand)]
        family: GenerateFamily,
        /// Indented JSON.
        #[arg(long, global = true)]
        pretty: bool,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Check the three partition conditions.
    PartitionCheck {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        partition: PartitionArgs,
    },
}

const CERTIFY_HELP: &str = "\
Inputs per theorem:
  GREEN_IDENTITY, POSITIVITY_S, SPECTRUM_BASIC, REALPART_LEMMA   the graph
  CYCLE_SPECTRUM, CYCLE_COROLLARY                                 --n N, or a cycle graph
  SUBGRAPH_INTERLACE, DIRICHLET_INTERLACE, DIRICHLET_MAX_COMBINE  graph + --subset
  DIRICHLET_REALPART                                              graph + --subset (the set U)
  CYCLE_SUBGRAPH_COROLLARY                                        --n N (or a cycle graph) + --subset
  TREE_STAR_BOUND                                                 a simple symmetric tree
  SINGLE_EDGE_ATTACH        graph + --attached FILE --attach-graph X --attach-attached Y [--weight W]
  EDGE_WEYL, EDGE_SANDWICH  graph + --edges for E_1 (E_2 is the rest)
  EDGE_MONOTONE             graph + --augmented FILE
  PARTITION_BOUND, PARTITION_REALPART   graph + --split (V_A) or --partition FILE
  FLOWER_MONOTONE           --instance FILE

--instance FILE supplies the whole input as JSON, e.g.
  {\"kind\":\"subgraph\",\"graph\":{...},\"subset\":[\"a\",\"b\"]}
Vertex lists are comma separated (a,b,c); edge lists are a>b,b>c.";

#[derive(Args)]
struct PartitionArgs {
    /// Partition JSON: a_vertices, b_vertices, u_vertices, a_edges, b_edges, u_edges.
    #[arg(long)]
    partition: Option<PathBuf>,
    /// V_A as a vertex list; V_B is the rest and the other sets follow.
    #[arg(long, value_delimiter = ',')]
    split: Option<Vec<String>>,
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    theorem: TheoremId,
    #[arg(long, value_enum, default_value_t = ModeArg::Raw)]
    mode: ModeArg,
    /// Certificate tolerance; defaults to the statement's own.
    #[arg(long, env = "SPECTRA_TOL")]
    tol: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random test functions for GREEN_IDENTITY and POSITIVITY_S.
    #[arg(long, default_value_t = 16)]
    trials: usize,
    /// Index range `k` or `lo..hi`.
    #[arg(long)]
    k: Option<IndexRange>,
    #[arg(long)]
    j: Option<IndexRange>,
    #[arg(long)]
    l: Option<IndexRange>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    subset: Option<Vec<String>>,
    #[arg(long)]
    edges: Option<String>,
    #[arg(long)]
    augmented: Option<PathBuf>,
    #[arg(long)]
    attached: Option<PathBuf>,
    #[arg(long)]
    attach_graph: Option<String>,
    #[arg(long)]
    attach_attached: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    weight: f64,
    #[command(flatten)]
    partition: PartitionArgs,
    /// Whole input as JSON.
    #[arg(long)]
    instance: Option<PathBuf>,
}

#[derive(Args)]
struct BatchArgs {
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Output::Text)]
    output: Output,
    #[arg(long)]
    theorem: TheoremId,
    #[arg(long, value_enum, default_value_t = FamilyArg::RandomBalanced)]
    family: FamilyArg,
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long, default_value_t = 10)]
    n_max: usize,
    /// Largest number of extra random cycles; defaults to n-max.
    #[arg(long)]
    extra: Option<usize>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, env = "SPECTRA_TOL")]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Raw)]
    mode: ModeArg,
}

#[derive(Subcommand)]
enum GenerateFamily {
    /// Simple directed cycle 0 -> 1 -> ... -> n-1 -> 0.
    Cycle {
        #[arg(long)]
        n: usize,
    },
    /// Symmetric star with center `c` and leaves 1..q.
    Star {
        #[arg(long)]
        q: usize,
    },
    /// Random simple symmetric tree.
    Tree {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random strongly connected Kirchhoff-balanced digraph.
    Balanced {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        extra: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Raw,
    Normalized,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Raw => Mode::Raw,
            ModeArg::Normalized => Mode::Normalized,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OperatorArg {
    #[value(name = "Delta")]
    Delta,
    #[value(name = "DeltaStar")]
    DeltaStar,
    #[value(name = "S")]
    S,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    RandomBalanced,
    RandomTree,
    Cycle,
}

/// Error with the exit code it maps to.
struct Failure(String);

impl From<spectra_core::Error> for Failure {
    fn from(e: spectra_core::Error) -> Self {
        Failure(e.to_string())
    }
}

type Run = Result<u8, Failure>;

fn read_text(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).map_err(|e| Failure(format!("cannot read {}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| Failure(format!("cannot read stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn load_graph(path: Option<&Path>) -> Result<DirectedWeightedGraph, Failure> {
    let g = parse_graph(&read_text(path)?)?;
    if g.merged_parallel_edges() {
        eprintln!("warning: repeated edges were merged by summing weights");
    }
    Ok(g)
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T, Failure> {
    let text = read_text(Some(path))?;
    serde_json::from_str(&text).map_err(|e| {
        Failure(format!("{what} {}: parse error at line {}, column {}: {e}", path.display(), e.line(), e.column()))
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure(format!("cannot write {}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Failure(format!("cannot write stdout: {e}"))),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn ids(list: &[String]) -> Vec<VertexId> {
    list.iter().map(|s| VertexId::from(s.trim())).collect()
}

fn parse_edges(spec: &str) -> Result<Vec<Edge>, Failure> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            item.split_once('>')
                .map(|(a, b)| (VertexId::from(a.trim()), VertexId::from(b.trim())))
                .ok_or_else(|| Failure(format!("bad edge `{item}`; expected from>to")))
        })
        .collect()
}

fn validate(common: &Common, tol: f64) -> Run {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Failure(format!("tolerance must be finite and >= 0, got {tol}")));
    }
    let g = load_graph(common.input.as_deref())?;
    let report = g.validate(tol);
    let text = match common.output {
        Output::Text => render::validation(&report, g.vertex_count(), g.edge_count()),
        Output::Json => to_json(&json!({
            "valid": report.is_valid(),
            "vertices": g.vertex_count(),
            "edges": g.edge_count(),
            "report": report,
        })),
    };
    emit(common.out.as_deref(), &text)?;
    Ok(if report.is_valid() { 0 } else { 2 })
}

fn spectrum(common: &Common, operator: OperatorArg, mode: ModeArg, by_definition: bool, vectors: bool) -> Run {
    let g = load_graph(common.input.as_deref())?;
    let measure = Measure::for_mode(&g, mode.into())?;
    let (name, op): (&str, OperatorMatrix) = match operator {
        OperatorArg::Delta => ("Delta", laplacian_with(&g, &measure)?),
        OperatorArg::DeltaStar if by_definition => ("DeltaStar", adjoint_by_definition(&g, &measure)?),
        OperatorArg::DeltaStar => ("DeltaStar", adjoint_laplacian_with(&g, &measure)?),
        OperatorArg::S => ("S", special_laplacian_with(&g, &measure)?),
    };
    let order: Vec<String> = op.order.iter().map(|v| v.to_string()).collect();
    let (values, residual, eigenvectors, solver) = if operator == OperatorArg::S {
        let spec = eig_m_symmetric(&op)?;
        let values: Vec<Complex64> = spec.eigenvalues.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        (values, spec.residual, spec.eigenvectors.filter(|_| vectors), "symmetric")
    } else {
        let spec = eig_general(&op)?;
        (spec.eigenvalues, spec.residual, None, "general")
    };
    let text = match common.output {
        Output::Text => {
            let label = format!("{name} ({})", if mode == ModeArg::Raw { "raw" } else { "normalized" });
            render::spectrum(&label, &order, &values, 1e-12 * op.scale(), residual)
        }
        Output::Json => {
            let mut report = json!({
                "operator": name,
                "mode": Mode::from(mode),
                "solver": solver,
                "order": order,
                "eigenvalues": values.iter().map(|z| json!({"re": z.re, "im": z.im})).collect::<Vec<_>>(),
                "residual": residual,
            });
            if let Some(v) = eigenvectors {
                report["eigenvectors"] = json!(v);
            }
            to_json(&report)
        }
    };
    emit(common.out.as_deref(), &text)?;
    Ok(0)
}

fn partition_from(args: &PartitionArgs, g: &DirectedWeightedGraph) -> Result<Partition, Failure> {
    match (&args.partition, &args.split) {
        (Some(p), None) => load_json(p, "partition"),
        (None, Some(a)) => Ok(Partition::from_split(g, &ids(a))?),
        (Some(_), Some(_)) => Err(Failure("give either --partition or --split, not both".into())),
        (None, None) => Err(Failure("a partition needs --partition FILE or --split a,b,...".into())),
    }
}

fn certify_input(a: &CertifyArgs) -> Result<TheoremInput, Failure> {
    if let Some(path) = &a.instance {
        return load_json(path, "instance");
    }
    let need = |flag: &str| Failure(format!("{} needs {flag}", a.theorem));
    let subset = || a.subset.as_deref().map(ids).ok_or_else(|| need("--subset"));
    let graph = || load_graph(a.common.input.as_deref());
    Ok(match a.theorem.input_kind() {
        "graph" => TheoremInput::Graph { graph: graph()? },
        "cycle" => match a.n {
            Some(n) => TheoremInput::Cycle { n },
            None => TheoremInput::Graph { graph: graph()? },
        },
        "subgraph" => TheoremInput::Subgraph { subset: subset()?, graph: graph()? },
        "dirichlet_set" => TheoremInput::DirichletSet { subset: subset()?, graph: graph()? },
        "cycle_subgraph" => match a.n {
            Some(n) => TheoremInput::CycleSubgraph { n, subset: subset()? },
            None => TheoremInput::Subgraph { subset: subset()?, graph: graph()? },
        },
        "tree" => TheoremInput::Tree { graph: graph()? },
        "single_edge" => {
            let attached = load_graph(Some(a.attached.as_deref().ok_or_else(|| need("--attached"))?))?;
            TheoremInput::SingleEdge {
                attach_graph: a.attach_graph.as_deref().ok_or_else(|| need("--attach-graph"))?.into(),
                attach_attached: a.attach_attached.as_deref().ok_or_else(|| need("--attach-attached"))?.into(),
                weight: a.weight,
                attached,
                graph: graph()?,
            }
        }
        "edge_split" => TheoremInput::EdgeSplit {
            first: parse_edges(a.edges.as_deref().ok_or_else(|| need("--edges"))?)?,
            graph: graph()?,
        },
        "edge_addition" => {
            let augmented = load_graph(Some(a.augmented.as_deref().ok_or_else(|| need("--augmented"))?))?;
            TheoremInput::EdgeAddition { augmented, graph: graph()? }
        }
        "partition" => {
            let g = graph()?;
            TheoremInput::Partition { partition: partition_from(&a.partition, &g)?, graph: g }
        }
        _ => return Err(need("--instance")),
    })
}

fn certify_cmd(a: &CertifyArgs) -> Run {
    let input = certify_input(a)?;
    let params =
        CertifyParams { mode: a.mode.into(), tolerance: a.tol, k: a.k, j: a.j, l: a.l, trials: a.trials, seed: a.seed };
    let cert = certify(&input, a.theorem, &params)?;
    let text = match a.common.output {
        Output::Text => render::certificate(&cert),
        Output::Json => to_json(&cert),
    };
    emit(a.common.out.as_deref(), &text)?;
    Ok(if cert.pass { 0 } else { 1 })
}

fn batch_cmd(a: &BatchArgs) -> Run {
    let family = FamilySpec {
        kind: match a.family {
            FamilyArg::RandomBalanced => FamilyKind::RandomBalanced,
            FamilyArg::RandomTree => FamilyKind::RandomTree,
            FamilyArg::Cycle => FamilyKind::Cycle,
        },
        n_min: a.n_min,
        n_max: a.n_max,
        max_extra_cycles: a.extra.unwrap_or(a.n_max),
    };
    let params = CertifyParams { mode: a.mode.into(), tolerance: a.tol, ..Default::default() };
    let summary = batch_certify(&family, a.theorem, a.trials, GeneratorSeed(a.seed), &params)?;
    let text = match a.output {
        Output::Text => render::batch(&summary),
        Output::Json => to_json(&summary),
    };
    emit(a.out.as_deref(), &text)?;
    Ok(if summary.failed == 0 { 0 } else { 1 })
}

fn generate(family: &GenerateFamily, pretty: bool, out: Option<&Path>) -> Run {
    let g = match *family {
        GenerateFamily::Cycle { n } => cycle(n)?,
        GenerateFamily::Star { q } => symmetric_star(q)?,
        GenerateFamily::Tree { n, seed } => random_tree(n, GeneratorSeed(seed))?,
        GenerateFamily::Balanced { n, extra, seed } => random_balanced(n, extra, GeneratorSeed(seed))?,
    };
    emit(out, &if pretty { graph_to_json_pretty(&g) } else { graph_to_json(&g) })?;
    Ok(0)
}

fn partition_check(common: &Common, args: &PartitionArgs) -> Run {
    let g = load_graph(common.input.as_deref())?;
    let p = partition_from(args, &g)?;
    let report = validate_partition(&g, &p);
    let text = match common.output {
        Output::Text => render::partition(&report),
        Output::Json => to_json(&json!({ "pass": report.pass(), "report": report })),
    };
    emit(common.out.as_deref(), &text)?;
    Ok(if report.pass() { 0 } else { 2 })
}

fn run(cli: Cli) -> Run {
    match &cli.command {
        Command::Validate { common, tol } => validate(common, *tol),
        Command::Spectrum { common, operator, mode, by_definition, vectors } => {
            spectrum(common, *operator, *mode, *by_definition, *vectors)
        }
        Command::Certify(a) => certify_cmd(a),
        Command::Batch(a) => batch_cmd(a),
        Command::Generate { family, pretty, out } => generate(family, *pretty, out.as_deref()),
        Command::PartitionCheck { common, partition } => partition_check(common, partition),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
