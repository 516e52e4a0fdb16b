use std::path::Path;

use lpa_core::algebra::{
    find_separating_path, is_zero_syntactic, multiply, normal_form, parse_element, Element, Monomial,
};
use lpa_core::branching::{
    build_interval_system, build_rotation_system, check_faithfulness_hypothesis_with, validate_system,
    BranchingSystem, HypothesisOptions, HypothesisOutcome, HypothesisReport,
};
use lpa_core::equivrep::{
    build_b2b_basis, describe_subspaces, extract_subspaces, induced_system_and_intertwiner, parse_matrix_rep,
    validate_matrix_rep, EquivError,
};
use lpa_core::graph::{parse_graph, EdgeId, Graph, GraphError, PSimpleWitness, VertexId};
use lpa_core::par::Exec;
use lpa_core::qfield::{fmt_rational, QNum};
use lpa_core::rep::{apply_element, relation_suite, FinSupp, SemanticOracle, ZeroVerdict};
use serde_json::{json, Value};

use crate::report::{read, CliError, Report};
use crate::{Oracle, SystemChoice};

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    parse_graph(&read(path)?).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn load_element(g: &Graph, text: &str) -> Result<Element, CliError> {
    parse_element(g, text).map_err(|e| CliError::Parse(format!("element `{text}`: {e}")))
}

fn build(g: &Graph, system: SystemChoice) -> Result<BranchingSystem, CliError> {
    match system {
        SystemChoice::Interval => Ok(build_interval_system(g)),
        SystemChoice::Rotation => build_rotation_system(g).map_err(|e| CliError::Precondition(e.to_string())),
    }
}

fn vnames(g: &Graph, vs: &[VertexId]) -> Vec<String> {
    vs.iter().map(|&v| g.vertex_name(v).to_string()).collect()
}

fn enames(g: &Graph, es: &[EdgeId]) -> Vec<String> {
    es.iter().map(|&e| g.edge_name(e).to_string()).collect()
}

fn set(items: &[String]) -> String {
    format!("{{{}}}", items.join(", "))
}

pub fn validate_graph(path: &Path) -> Result<Report, CliError> {
    let mut r = Report::new();
    match parse_graph(&read(path)?) {
        Ok(g) => {
            let sinks = vnames(&g, &g.sinks());
            r.line(format!("ok: {} vertices, {} edges", g.num_vertices(), g.num_edges()))
                .line(format!("sinks: {}", set(&sinks)))
                .record(json!({"verdict": "ok", "vertices": g.num_vertices(), "edges": g.num_edges(), "sinks": sinks}));
        }
        Err(GraphError::Invalid(issues)) => {
            let msgs: Vec<String> = issues.iter().map(ToString::to_string).collect();
            r.line("invalid").fail();
            for m in &msgs {
                r.line(format!("  {m}"));
            }
            r.record(json!({"verdict": "invalid", "issues": msgs}));
        }
        Err(e) => return Err(CliError::Parse(format!("{}: {e}", path.display()))),
    }
    Ok(r)
}

pub fn levels(path: &Path) -> Result<Report, CliError> {
    let g = load_graph(path)?;
    let mut r = Report::new();
    let ld = g.level_decomposition();
    for (i, level) in ld.levels.iter().enumerate() {
        let (vs, es) = (vnames(&g, &level.vertices), enames(&g, &level.edges));
        r.line(format!("level {}: X = {}, Y = {}", i + 1, set(&vs), set(&es)))
            .record(json!({"kind": "level", "index": i + 1, "vertices": vs, "edges": es}));
    }
    let left = vnames(&g, &ld.leftover);
    r.line(format!("leftover: {}", set(&left))).record(json!({"kind": "leftover", "vertices": left}));
    let comps = g.connected_components();
    for c in &comps.components {
        let vs = vnames(&g, c);
        r.line(format!("component: {}", set(&vs))).record(json!({"kind": "component", "vertices": vs}));
    }
    let iso = vnames(&g, &comps.isolated);
    r.line(format!("isolated: {}", set(&iso))).record(json!({"kind": "isolated", "vertices": iso}));
    let ps = g.is_p_simple();
    let why = match &ps.witness {
        None => None,
        Some(PSimpleWitness::SelfLoop(e)) => Some(format!("loop {}", g.edge_name(*e))),
        Some(PSimpleWitness::TwoPaths(a, b)) => Some(format!("paths {} and {}", a.display(&g), b.display(&g))),
    };
    match &why {
        None => r.line("p-simple: yes"),
        Some(w) => r.line(format!("p-simple: no ({w})")),
    };
    r.record(json!({"kind": "p-simple", "holds": ps.holds, "witness": why}));
    Ok(r)
}

pub fn condition_l(path: &Path) -> Result<Report, CliError> {
    let g = load_graph(path)?;
    let mut r = Report::new();
    let c = g.condition_l();
    let bad: Vec<String> = c.violators.iter().map(|p| p.display(&g).to_string()).collect();
    if c.holds {
        r.line("holds");
    } else {
        r.line("fails").fail();
        for p in &bad {
            r.line(format!("  cycle without exit: {p}"));
        }
    }
    r.record(json!({"holds": c.holds, "cycles_without_exit": bad}));
    Ok(r)
}

pub fn build_system(path: &Path, system: SystemChoice, dump: bool, exec: Exec) -> Result<Report, CliError> {
    let g = load_graph(path)?;
    let sys = build(&g, system)?;
    let mut r = Report::new();
    match validate_system(&sys) {
        Err(vs) => {
            let msgs: Vec<String> = vs.iter().map(ToString::to_string).collect();
            r.line(format!("invalid {} system", sys.kind())).fail();
            for m in &msgs {
                r.line(format!("  {m}"));
            }
            r.record(json!({"verdict": "invalid", "system": sys.kind(), "violations": msgs}));
        }
        Ok(()) => {
            let cells = sys.cell_points().len() / 2;
            match relation_suite(&sys, exec) {
                Ok(n) => {
                    r.line(format!("ok {} system: {cells} cells, {n} relation checks hold", sys.kind()))
                        .record(json!({"verdict": "ok", "system": sys.kind(), "cells": cells, "relation_checks": n}));
                }
                Err(fails) => {
                    r.line(format!("relations fail on the {} system", sys.kind())).fail();
                    for f in &fails {
                        r.line(format!("  {} at z = {}: {} vs {}", f.relation, f.z, f.lhs, f.rhs));
                    }
                    r.record(json!({"verdict": "relations-fail", "system": sys.kind(), "failures": fails}));
                }
            }
        }
    }
    if dump {
        r.lines(&sys.dump()).record(system_json(&sys));
    }
    Ok(r)
}

fn system_json(sys: &BranchingSystem) -> Value {
    let g = sys.graph();
    let domains: serde_json::Map<String, Value> =
        g.vertices().map(|v| (g.vertex_name(v).to_string(), json!(sys.domain_region(v).to_string()))).collect();
    let edges: serde_json::Map<String, Value> = g
        .edges()
        .map(|e| {
            let branches: Vec<String> = sys.map(e).branches().iter().map(ToString::to_string).collect();
            (g.edge_name(e).to_string(), json!({"range": sys.range_region(e).to_string(), "branches": branches}))
        })
        .collect();
    json!({"kind": "dump", "system": sys.kind(), "domains": domains, "edges": edges})
}

pub fn reduce(path: &Path, text: &str) -> Result<Report, CliError> {
    let g = load_graph(path)?;
    let x = load_element(&g, text)?;
    let nf = normal_form(&g, &x);
    let shown = nf.display(&g).to_string();
    let mut r = Report::new();
    r.line(shown.clone()).record(json!({"input": text, "normal_form": shown, "terms": nf.len()}));
    Ok(r)
}

pub fn zero_test(
    path: &Path,
    text: &str,
    oracle: Oracle,
    system: SystemChoice,
    maxlen: usize,
    exec: Exec,
) -> Result<Report, CliError> {
    let g = load_graph(path)?;
    let x = load_element(&g, text)?;
    let syntactic = matches!(oracle, Oracle::Syntactic | Oracle::Both).then(|| normal_form(&g, &x));
    let semantic = if matches!(oracle, Oracle::Semantic | Oracle::Both) {
        let sys = build(&g, system)?;
        let o = SemanticOracle::certify_with(sys, maxlen, exec).map_err(|e| CliError::Precondition(e.to_string()))?;
        Some(o.zero_test(&x))
    } else {
        None
    };
    let verdicts: Vec<bool> =
        syntactic.iter().map(Element::is_empty).chain(semantic.iter().map(ZeroVerdict::is_zero)).collect();
    let agree = verdicts.windows(2).all(|w| w[0] == w[1]);
    let mut r = Report::new();
    let head = match (agree, verdicts[0]) {
        (false, _) => "disagreement",
        (true, true) => "zero",
        (true, false) => "nonzero",
    };
    r.line(head);
    if head != "zero" {
        r.fail();
    }
    let mut rec = json!({"verdict": head, "element": x.display(&g).to_string()});
    if let Some(nf) = &syntactic {
        let shown = nf.display(&g).to_string();
        let word = if nf.is_empty() { "zero" } else { "nonzero" };
        r.line(format!("syntactic: {word} (normal form {shown})"));
        rec["syntactic"] = json!({"zero": nf.is_empty(), "normal_form": shown});
    }
    if let Some(v) = &semantic {
        r.line(format!("semantic: {v}"));
        rec["semantic"] = json!(v);
    }
    r.record(rec);
    Ok(r)
}

pub fn separating_path(path: &Path, text: &str, maxlen: usize) -> Result<Report, CliError> {
    let g = load_graph(path)?;
    let x = load_element(&g, text)?;
    let mut r = Report::new();
    match find_separating_path(&g, &x, maxlen) {
        Some(p) => {
            let xp = normal_form(&g, &multiply(&x, &Element::monomial(Monomial::path(p.clone()))));
            let (ps, xs) = (p.display(&g).to_string(), xp.display(&g).to_string());
            r.line(ps.clone()).line(format!("x·p = {xs}")).record(json!({"path": ps, "product": xs}));
        }
        None => {
            let why = if is_zero_syntactic(&g, &x) { "element is zero" } else { "no path of that length" };
            r.line(format!("none ({why})")).fail().record(json!({"path": null, "reason": why}));
        }
    }
    Ok(r)
}

fn hypothesis_lines(g: &Graph, rep: &HypothesisReport, prefix: &str, r: &mut Report) {
    match &rep.outcome {
        HypothesisOutcome::Ok { witness, irrational_images } => {
            r.line(format!("{prefix}ok z0={witness}"));
            r.line(format!(
                "  closed paths: {} (maxlen {}), candidates tried: {}, images irrational: {}",
                rep.closed_paths,
                rep.maxlen,
                rep.candidates_tried,
                if *irrational_images { "yes" } else { "no" }
            ));
        }
        HypothesisOutcome::Fail { blocking } => {
            let bs: Vec<String> = blocking.iter().map(|p| p.display(g).to_string()).collect();
            r.line(format!("{prefix}fail")).fail();
            r.line(format!("  fixed by: {}", bs.join(", ")));
        }
    }
    let outcome = match &rep.outcome {
        HypothesisOutcome::Ok { witness, irrational_images } => {
            json!({"verdict": "ok", "witness": witness, "irrational_images": irrational_images})
        }
        HypothesisOutcome::Fail { blocking } => {
            let bs: Vec<String> = blocking.iter().map(|p| p.display(g).to_string()).collect();
            json!({"verdict": "fail", "blocking": bs})
        }
    };
    r.record(json!({
        "vertex": g.vertex_name(rep.vertex),
        "maxlen": rep.maxlen,
        "closed_paths": rep.closed_paths,
        "candidates_tried": rep.candidates_tried,
        "outcome": outcome,
    }));
}

pub fn check_hypothesis(
    path: &Path,
    vertex: Option<&str>,
    maxlen: usize,
    system: SystemChoice,
    exec: Exec,
) -> Result<Report, CliError> {
    let g = load_graph(path)?;
    let sys = build(&g, system)?;
    let opts = HypothesisOptions { exec, ..HypothesisOptions::default() };
    let mut r = Report::new();
    match vertex {
        Some(name) => {
            let v = g.vertex(name).map_err(|e| CliError::Parse(e.to_string()))?;
            hypothesis_lines(&g, &check_faithfulness_hypothesis_with(&sys, v, maxlen, opts), "", &mut r);
        }
        None => {
            for v in g.vertices() {
                let rep = check_faithfulness_hypothesis_with(&sys, v, maxlen, opts);
                hypothesis_lines(&g, &rep, &format!("{}: ", g.vertex_name(v)), &mut r);
            }
        }
    }
    Ok(r)
}

pub fn apply(path: &Path, text: &str, point: &str, system: SystemChoice) -> Result<Report, CliError> {
    let g = load_graph(path)?;
    let x = load_element(&g, text)?;
    let z: QNum = point.parse().map_err(|e| CliError::Parse(format!("point `{point}`: {e}")))?;
    let sys = build(&g, system)?;
    let out = apply_element(&sys, &x, &FinSupp::delta(z.clone()));
    let mut r = Report::new();
    r.line(out.to_string()).record(json!({"element": x.display(&g).to_string(), "point": z, "result": out}));
    Ok(r)
}

pub fn analyze_rep(graph: &Path, rep: &Path) -> Result<Report, CliError> {
    let g = load_graph(graph)?;
    let phi = parse_matrix_rep(&g, &read(rep)?).map_err(|e| CliError::Parse(format!("{}: {e}", rep.display())))?;
    let mut r = Report::new();
    if let Err(vs) = validate_matrix_rep(&g, &phi) {
        let msgs: Vec<String> = vs.iter().map(ToString::to_string).collect();
        r.line("invalid representation").fail();
        for m in &msgs {
            r.line(format!("  {m}"));
        }
        r.record(json!({"verdict": "invalid", "violations": msgs}));
        return Ok(r);
    }
    let stop = |r: &mut Report, e: EquivError| {
        r.line(e.to_string()).fail().record(json!({"verdict": "fail", "reason": e.to_string()}));
    };
    let table = match extract_subspaces(&g, &phi) {
        Ok(t) => t,
        Err(e) => {
            stop(&mut r, e);
            return Ok(r);
        }
    };
    r.lines(&describe_subspaces(&g, &table));
    for p in &table.properties {
        r.line(format!("property {}: {}", p.property, p.detail));
    }
    let dims: serde_json::Map<String, Value> = g
        .vertices()
        .map(|v| (g.vertex_name(v).to_string(), json!(table.vertex[v.0].cols())))
        .chain(g.edges().map(|e| (g.edge_name(e).to_string(), json!(table.edge[e.0].cols()))))
        .collect();
    r.record(json!({"kind": "subspaces", "dims": dims, "vbar": table.vbar.cols(), "properties": table.properties}));
    let b = match build_b2b_basis(&g, &phi) {
        Ok(b) => b,
        Err(e) => {
            stop(&mut r, e);
            return Ok(r);
        }
    };
    r.lines(&b.display(&g).to_string());
    let name_map = |names: Vec<String>, sets: &[Vec<usize>]| -> serde_json::Map<String, Value> {
        names.into_iter().zip(sets).map(|(n, s)| (n, json!(s))).collect()
    };
    let vs: Vec<String> = g.vertices().map(|v| g.vertex_name(v).to_string()).collect();
    let es: Vec<String> = g.edges().map(|e| g.edge_name(e).to_string()).collect();
    r.record(json!({
        "kind": "basis",
        "vectors": b.vectors.iter().map(|v| v.iter().map(fmt_rational).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "domains": name_map(vs, &b.domains),
        "ranges": name_map(es.clone(), &b.ranges),
        "maps": es.iter().cloned().zip(&b.maps).map(|(n, m)| (n, json!(m))).collect::<serde_json::Map<_, _>>(),
        "vbar": b.vbar,
    }));
    match induced_system_and_intertwiner(&g, &phi, &b) {
        Ok(ind) => {
            r.line(format!("intertwiner verified ({} squares)", ind.squares_checked))
                .record(json!({"kind": "intertwiner", "verdict": "verified", "squares": ind.squares_checked}));
        }
        Err(e) => stop(&mut r, e),
    }
    Ok(r)
}
