//! Machine-readable reports.
//!
//! Reports are JSON objects with sorted keys. Every computed float is
//! rounded to 12 significant digits before serialization; the echoed
//! scenario is kept verbatim so it re-parses to the same spec. Wall-clock
//! timing is deliberately absent so that reruns are byte-identical.

use serde_json::{json, Map, Value};

use crate::config::Tolerances;
use crate::error::Result;
use crate::powers::{Context, PowerGraph};
use crate::psa::{Psa, ValuationSearch};
use crate::relations::{
    Classification, CorrelationSign, EffectiveFailure, EffectiveOutcome, IntensiveOutcome, NotRelatedReason,
    PairSign, RelationVerdict, TestedPair,
};
use crate::sampler::{ConvergenceReport, ExperimentRun, PRNG_NAME};
use crate::scenario::ScenarioSpec;

/// Version of the report layout, independent of the tool version.
pub const REPORT_SCHEMA: &str = "1.0";

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Shortest decimal rendering of `x` rounded to 12 significant digits.
pub fn fmt_sig(x: f64) -> String {
    format!("{}", round_sig(x))
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                *v = json!(round_sig(x));
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// A finished report. `Display` is the canonical byte form.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub value: Value,
}

impl Report {
    fn assemble(command: &str, seed: Option<u64>, tol: &Tolerances, scenario: Option<&ScenarioSpec>, body: Map<String, Value>) -> Self {
        let mut root = Map::new();
        root.insert("command".into(), json!(command));
        for (k, v) in body {
            root.insert(k, v);
        }
        let mut metadata = json!({
            "tool": "psakit",
            "tool_version": env!("CARGO_PKG_VERSION"),
            "report_schema": REPORT_SCHEMA,
            "seed": seed,
            "prng": seed.map(|_| PRNG_NAME),
            "tolerances": serde_json::to_value(tol).unwrap_or(Value::Null),
        });
        round_value(&mut metadata);
        let mut value = Value::Object(root);
        round_value(&mut value);
        let map = value.as_object_mut().expect("object");
        map.insert("metadata".into(), metadata);
        if let Some(spec) = scenario {
            map.insert("scenario".into(), serde_json::to_value(spec).unwrap_or(Value::Null));
        }
        Report { value }
    }

    pub fn classification(&self) -> Option<&str> {
        self.value.pointer("/verdict/classification").and_then(Value::as_str)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.value).expect("report serializes");
        s.push('\n');
        s
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_json())
    }
}

fn label(g: &PowerGraph, id: usize) -> Value {
    match &g.power(id).label {
        Some(l) => json!(l),
        None => json!(format!("P{id}")),
    }
}

fn context_value(g: &PowerGraph, c: &Context) -> Value {
    json!({
        "nodes": c.node_ids,
        "labels": c.node_ids.iter().map(|&i| label(g, i)).collect::<Vec<_>>(),
        "maximal": c.is_maximal,
        "resolves_identity": c.resolves_identity,
    })
}

fn psa_table(psa: &Psa) -> Value {
    let g = psa.graph();
    Value::Array(
        g.powers()
            .iter()
            .map(|p| {
                json!({
                    "node": p.id,
                    "label": label(g, p.id),
                    "rank": p.rank,
                    "potentia": psa.get(p.id),
                })
            })
            .collect(),
    )
}

fn pair_sign(s: PairSign) -> &'static str {
    match s {
        PairSign::Correlated => "correlated",
        PairSign::AntiCorrelated => "anti_correlated",
        PairSign::Other => "other",
    }
}

fn correlation_sign(s: CorrelationSign) -> &'static str {
    match s {
        CorrelationSign::Correlated => "correlated",
        CorrelationSign::AntiCorrelated => "anti_correlated",
        CorrelationSign::Mixed => "mixed",
    }
}

fn failure(f: EffectiveFailure) -> &'static str {
    match f {
        EffectiveFailure::Leak => "leak",
        EffectiveFailure::Degenerate => "degenerate",
        EffectiveFailure::NoPartner => "no_partner",
    }
}

pub fn intensive_value(o: &IntensiveOutcome) -> Value {
    match o {
        IntensiveOutcome::Related(w) => json!({
            "related": true,
            "mapping": w.mapping,
            "max_potentia_gap": w.max_potentia_gap,
        }),
        IntensiveOutcome::NotRelated(reason) => {
            let detail = match reason {
                NotRelatedReason::SizeMismatch { left, right } | NotRelatedReason::EdgeCountMismatch { left, right } => {
                    json!({"left": left, "right": right})
                }
                NotRelatedReason::PotentiaMultiset { max_gap } => json!({"max_gap": max_gap}),
                NotRelatedReason::DegreeSequence => json!({}),
                NotRelatedReason::NoCandidates { node } => json!({"node": node}),
                NotRelatedReason::NoIsomorphism { branches } => json!({"branches": branches}),
            };
            json!({"related": false, "stage": reason.stage(), "detail": detail})
        }
    }
}

pub fn effective_value(o: &EffectiveOutcome) -> Value {
    match o {
        EffectiveOutcome::Related(w) => json!({
            "related": true,
            "correlation_sign": correlation_sign(w.correlation_sign),
            "max_leak": w.max_leak,
            "pairs": w.pairs.iter().map(|p| json!({
                "pair_index": p.pair_index,
                "a": p.a,
                "b": p.b,
                "tau": p.tau,
                "captured_mass": p.captured_mass,
                "leak": p.leak,
                "sign": pair_sign(p.sign),
            })).collect::<Vec<_>>(),
        }),
        EffectiveOutcome::NotRelated { worst_pair, leak, reason } => json!({
            "related": false,
            "worst_pair": worst_pair,
            "leak": leak,
            "reason": failure(*reason),
        }),
    }
}

fn verdict_value(v: &RelationVerdict) -> Value {
    json!({
        "classification": v.classification.as_str(),
        "intensive": intensive_value(&v.intensive),
        "effective": effective_value(&v.effective),
        "diagnostics": v.diagnostics,
        "baselines": {
            "schmidt_rank": v.baselines.schmidt_rank,
            "ppt": v.baselines.ppt.map(|p| json!({
                "separable": p.separable,
                "conclusive": p.conclusive,
                "min_eigenvalue": p.min_eigenvalue,
            })),
        },
    })
}

fn joint_tables(
    ga: &PowerGraph,
    gb: &PowerGraph,
    pairs: &[TestedPair],
    tables: &[Vec<Vec<f64>>],
) -> Value {
    Value::Array(
        pairs
            .iter()
            .zip(tables)
            .enumerate()
            .map(|(k, (p, t))| {
                json!({
                    "pair_index": k,
                    "a": context_value(ga, &p.a),
                    "b": context_value(gb, &p.b),
                    "matching": p.matching,
                    "probabilities": t,
                })
            })
            .collect(),
    )
}

/// Report of `classify`.
pub fn classify_report(
    spec: &ScenarioSpec,
    tol: &Tolerances,
    verdict: &RelationVerdict,
    pairs: &[TestedPair],
    tables: &[Vec<Vec<f64>>],
) -> Report {
    let mut body = Map::new();
    body.insert("verdict".into(), verdict_value(verdict));
    body.insert(
        "psa_tables".into(),
        json!({"a": psa_table(&verdict.psa_a), "b": psa_table(&verdict.psa_b)}),
    );
    body.insert(
        "joint_tables".into(),
        joint_tables(verdict.psa_a.graph(), verdict.psa_b.graph(), pairs, tables),
    );
    Report::assemble("classify", None, tol, Some(spec), body)
}

/// Report of `sample`: the classify report plus tallies and convergence.
pub fn sample_report(
    spec: &ScenarioSpec,
    tol: &Tolerances,
    verdict: &RelationVerdict,
    run: &ExperimentRun,
    convergence: &ConvergenceReport,
) -> Report {
    let mut body = Map::new();
    body.insert("verdict".into(), verdict_value(verdict));
    body.insert(
        "psa_tables".into(),
        json!({"a": psa_table(&verdict.psa_a), "b": psa_table(&verdict.psa_b)}),
    );
    body.insert(
        "joint_tables".into(),
        joint_tables(verdict.psa_a.graph(), verdict.psa_b.graph(), &run.pairs, &run.exact),
    );
    body.insert(
        "sampling".into(),
        json!({
            "shots": run.shots,
            "seed": run.seed,
            "tallies": run.tallies,
            "per_pair_tv": convergence.per_pair_tv,
            "z_worst": convergence.z_worst,
            "stat_threshold": convergence.stat_threshold,
            "empirical_effective": convergence.empirical_effective,
            "empirical": effective_value(&convergence.empirical),
            "agrees_with_exact": convergence.empirical_effective == verdict.effective.is_related(),
        }),
    );
    Report::assemble("sample", Some(run.seed), tol, Some(spec), body)
}

/// Report of `graph`: nodes, edges and maximal contexts.
pub fn graph_report(spec: &ScenarioSpec, tol: &Tolerances, g: &PowerGraph, contexts: &[Context]) -> Report {
    let mut edges = Vec::new();
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            if g.adjacent(i, j) {
                edges.push([i, j]);
            }
        }
    }
    let mut body = Map::new();
    body.insert(
        "graph".into(),
        json!({
            "dim": g.dim(),
            "nodes": g.powers().iter().map(|p| json!({
                "node": p.id,
                "label": label(g, p.id),
                "rank": p.rank,
                "degree": g.degree(p.id),
            })).collect::<Vec<_>>(),
            "edges": edges,
            "edge_count": g.edge_count(),
            "maximal_contexts": contexts.iter().map(|c| context_value(g, c)).collect::<Vec<_>>(),
            "maximal_context_count": contexts.len(),
            "resolving_context_count": contexts.iter().filter(|c| c.resolves_identity).count(),
        }),
    );
    Report::assemble("graph", None, tol, Some(spec), body)
}

/// One-line human summary of a valuation search.
pub fn ks_summary(search: &ValuationSearch) -> String {
    match search {
        ValuationSearch::Found(v) => format!(
            "binary valuation found; branches explored: {}",
            v.branches_explored
        ),
        ValuationSearch::Nonexistent(c) => format!(
            "no binary valuation exists; branches explored: {}",
            c.branches_explored
        ),
    }
}

/// Report of `ks`.
pub fn ks_report(spec: &ScenarioSpec, tol: &Tolerances, g: &PowerGraph, search: &ValuationSearch) -> Report {
    let result = match search {
        ValuationSearch::Found(v) => json!({
            "exists": true,
            "assignment": v.assignment,
            "true_nodes": v.assignment.iter().enumerate().filter(|(_, &b)| b == 1).map(|(i, _)| label(g, i)).collect::<Vec<_>>(),
            "constrained_contexts": v.scope.len(),
            "branches_explored": v.branches_explored,
        }),
        ValuationSearch::Nonexistent(c) => json!({
            "exists": false,
            "constrained_contexts": c.constrained_contexts,
            "branches_explored": c.branches_explored,
        }),
    };
    let mut body = Map::new();
    body.insert("result".into(), result);
    body.insert("summary".into(), json!(ks_summary(search)));
    body.insert("graph".into(), json!({"dim": g.dim(), "nodes": g.len(), "edge_count": g.edge_count()}));
    Report::assemble("ks", None, tol, Some(spec), body)
}

/// Human-readable rendering of a classify or sample report.
pub fn render_table(r: &Report) -> Result<String> {
    use std::fmt::Write;
    let v = &r.value;
    let mut out = String::new();
    let get = |p: &str| v.pointer(p).cloned().unwrap_or(Value::Null);
    let _ = writeln!(out, "classification   {}", get("/verdict/classification").as_str().unwrap_or("-"));
    let _ = writeln!(out, "intensive        {}", get("/verdict/intensive/related"));
    let _ = writeln!(out, "effective        {}", get("/verdict/effective/related"));
    if let Some(sign) = get("/verdict/effective/correlation_sign").as_str() {
        let _ = writeln!(out, "correlation      {sign}");
    }
    let _ = writeln!(out, "schmidt rank     {}", get("/verdict/baselines/schmidt_rank"));
    let _ = writeln!(out, "ppt separable    {}", get("/verdict/baselines/ppt/separable"));
    for side in ["a", "b"] {
        let _ = writeln!(out, "\npotentia ({})", side.to_uppercase());
        for row in get(&format!("/psa_tables/{side}")).as_array().into_iter().flatten() {
            let _ = writeln!(
                out,
                "  {:<10} {}",
                row["label"].as_str().unwrap_or("?"),
                row["potentia"]
            );
        }
    }
    for t in get("/joint_tables").as_array().into_iter().flatten() {
        let _ = writeln!(
            out,
            "\npair {}  {} x {}",
            t["pair_index"],
            t["a"]["labels"],
            t["b"]["labels"]
        );
        for row in t["probabilities"].as_array().into_iter().flatten() {
            let cells: Vec<String> = row
                .as_array()
                .into_iter()
                .flatten()
                .map(|x| format!("{:>14}", x.to_string()))
                .collect();
            let _ = writeln!(out, "  {}", cells.join(""));
        }
    }
    if let Some(s) = v.get("sampling") {
        let _ = writeln!(
            out,
            "\nsampling         shots={} seed={} empirical_effective={} agrees={}",
            s["shots"], s["seed"], s["empirical_effective"], s["agrees_with_exact"]
        );
    }
    for d in get("/verdict/diagnostics").as_array().into_iter().flatten() {
        let _ = writeln!(out, "\nwarning: {}", d.as_str().unwrap_or(""));
    }
    Ok(out)
}

/// Exit status implied by a verdict.
pub fn exit_code_for(c: Classification) -> i32 {
    if c == Classification::EffectiveOnlyAnomaly {
        2
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round_sig(0.1 + 0.2), 0.3);
        assert_eq!(round_sig(-0.0), 0.0);
        assert_eq!(fmt_sig(0.09999999999999998), "0.1");
        assert_eq!(round_sig(1.0 / 3.0), 0.333333333333);
    }

    #[test]
    fn keys_are_sorted_and_floats_rounded() {
        let mut v = json!({"z": 1.0 / 3.0, "a": [0.1 + 0.2]});
        round_value(&mut v);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"a":[0.3],"z":0.333333333333}"#);
    }
}
