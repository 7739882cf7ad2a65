//! Text rendering.

use std::fmt::Write;

use num_complex::Complex64;
use spectra_core::graph::ValidationReport;
use spectra_core::theorems::{BatchSummary, Certificate, PartitionReport, Relation};

/// `x` with 10 significant digits, trailing zeros dropped.
pub fn sig10(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..10).contains(&mag) {
        let s = format!("{x:.9e}");
        let (mantissa, exp) = s.split_once('e').expect("exponent present");
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        return format!("{mantissa}e{exp}");
    }
    let decimals = (9 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

/// Values below `floor` in magnitude print as 0.
pub fn complex(z: Complex64, floor: f64) -> String {
    let re = if z.re.abs() <= floor { 0.0 } else { z.re };
    let im = if z.im.abs() <= floor { 0.0 } else { z.im };
    if im == 0.0 {
        sig10(re)
    } else if im > 0.0 {
        format!("{} + {}i", sig10(re), sig10(im))
    } else {
        format!("{} - {}i", sig10(re), sig10(-im))
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn validation(r: &ValidationReport, vertices: usize, edges: usize) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "vertices: {vertices}");
    let _ = writeln!(s, "edges: {edges}");
    let _ = writeln!(s, "valid: {}", yes(r.is_valid()));
    let _ = writeln!(s, "self-loops: {}", yes(r.has_loops));
    let _ = writeln!(s, "weights positive: {}", yes(r.weights_positive));
    let _ = write!(s, "every vertex has in- and out-neighbors: {}", yes(r.hypothesis_cnx));
    if !r.hypothesis_cnx {
        let names: Vec<String> = r.hypothesis_cnx_failures.iter().map(|v| v.to_string()).collect();
        let _ = write!(s, " (fails at {})", names.join(", "));
    }
    s.push('\n');
    let _ = writeln!(s, "connected: {}", yes(r.connected));
    let _ = writeln!(s, "strongly connected: {}", yes(r.strongly_connected));
    let _ = write!(
        s,
        "Kirchhoff balanced: {} (max |β⁺-β⁻| = {}, tolerance {})",
        yes(r.beta_balanced),
        sig10(r.max_beta_defect),
        sig10(r.tolerance_used)
    );
    if let (false, Some(w)) = (r.beta_balanced, r.worst_defect()) {
        let _ = write!(s, ", worst vertex {} with defect {}", w.vertex, sig10(w.defect));
    }
    s.push('\n');
    if r.merged_parallel_edges {
        let _ = writeln!(s, "note: repeated edges were merged by summing weights");
    }
    s
}

pub fn spectrum(label: &str, order: &[String], values: &[Complex64], floor: f64, residual: f64) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{label} on {} vertices ({})", order.len(), order.join(", "));
    let _ = writeln!(s, "{:>4}  eigenvalue", "k");
    for (k, z) in values.iter().enumerate() {
        let _ = writeln!(s, "{:>4}  {}", k + 1, complex(*z, floor));
    }
    let _ = writeln!(s, "residual: {residual:.3e}");
    s
}

fn relation(r: Relation) -> &'static str {
    match r {
        Relation::Le => "<=",
        Relation::Ge => ">=",
        Relation::Eq => "==",
    }
}

pub fn certificate(c: &Certificate) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} {} (tolerance {}, {} asserted checks, digest {})",
        c.theorem,
        if c.pass { "PASS" } else { "FAIL" },
        sig10(c.tolerance),
        c.asserted().count(),
        &c.input_digest[..16]
    );
    let modes: Vec<String> = c.modes.iter().map(|m| format!("{m:?}").to_lowercase()).collect();
    let _ = writeln!(s, "modes: {}", modes.join(", "));
    for f in &c.flags {
        let _ = writeln!(s, "flag: {f}");
    }
    for n in &c.notes {
        let _ = writeln!(s, "note: {n}");
    }
    for check in &c.checks {
        let status = match (check.asserted, check.holds(c.tolerance)) {
            (false, _) => "info",
            (true, true) => "ok",
            (true, false) => "FAIL",
        };
        let _ = writeln!(
            s,
            "  [{status:>4}] {}  |  {} {} {}  margin {:.3e}",
            check.desc,
            sig10(check.lhs),
            relation(check.relation),
            sig10(check.rhs),
            check.margin
        );
    }
    s
}

pub fn batch(b: &BatchSummary) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{}: {} trials, {} passed, {} failed, {} asserted checks, min relative margin {:.3e}",
        b.theorem, b.trials, b.passed, b.failed, b.checks, b.min_relative_margin
    );
    for f in &b.failures {
        let _ = writeln!(s, "failure at trial {} (seed {}):", f.trial, f.seed.0);
        s.push_str(&certificate(&f.certificate));
        let _ = writeln!(s, "instance: {}", serde_json::to_string(&f.input).expect("inputs serialize"));
    }
    s
}

pub fn partition(r: &PartitionReport) -> String {
    let mut s = String::new();
    for (k, c) in [(1, &r.condition1), (2, &r.condition2), (3, &r.condition3)] {
        let _ = writeln!(s, "condition ({k}): {}", if c.holds { "holds" } else { "fails" });
        for v in &c.violations {
            let _ = writeln!(s, "    {v}");
        }
    }
    let ids = |v: &[spectra_core::VertexId]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
    let _ = writeln!(s, "interior of A: {{{}}}", ids(&r.interior_a));
    let _ = writeln!(s, "interior of B: {{{}}}", ids(&r.interior_b));
    let _ = writeln!(s, "partition valid: {}", yes(r.pass()));
    s
}
