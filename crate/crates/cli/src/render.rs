//! JSON documents and text renderings of command results.

use serde_json::{json, Value};
use xinflate::{
    format_rational, BenchReport, ExplanationKind, ExplanationProblem, FeatureSet, InflatedExplanation, Model,
};

pub fn feature_list(set: &FeatureSet) -> Value {
    json!(set.one_based())
}

fn names(model: &Model, set: &FeatureSet) -> Value {
    json!(set.iter().map(|j| model.space().name(j)).collect::<Vec<_>>())
}

pub fn instance(problem: &ExplanationProblem<'_>) -> Value {
    let model = problem.model();
    json!({
        "values": model.space().format_point(problem.point()),
        "class": model.class_name(problem.class()),
    })
}

/// Per-feature sets, counts and probe logs of an inflated explanation.
pub fn explanation(model: &Model, e: &InflatedExplanation, class: usize) -> Value {
    let space = model.space();
    let sets: Vec<Value> = e
        .sets
        .iter()
        .map(|(&j, s)| {
            let probes: Vec<Value> = e
                .probes
                .get(&j)
                .map(|ps| {
                    ps.iter()
                        .map(|p| json!({"tried": p.tried.render(space.domain(j)), "accepted": p.accepted}))
                        .collect()
                })
                .unwrap_or_default();
            let count_key = match e.kind {
                ExplanationKind::Abductive => "added",
                ExplanationKind::Contrastive => "pieces",
            };
            let mut doc = json!({"feature": j + 1, "name": space.name(j), "set": s.render(space.domain(j))});
            doc[count_key] = json!(e.counts.get(&j).copied().unwrap_or(0));
            doc["probes"] = json!(probes);
            doc
        })
        .collect();
    json!({
        "kind": match e.kind {
            ExplanationKind::Abductive => "abductive",
            ExplanationKind::Contrastive => "contrastive",
        },
        "features": feature_list(&e.features),
        "probe_order": e.probe_order.iter().map(|j| j + 1).collect::<Vec<_>>(),
        "delta": format_rational(&e.delta),
        "sets": sets,
        "rule": e.render_rule(model, class),
    })
}

pub fn explanation_text(model: &Model, e: &InflatedExplanation, class: usize) -> String {
    let space = model.space();
    let mut out = format!("{}\n", e.render_rule(model, class));
    for (&j, s) in &e.sets {
        let n = e.counts.get(&j).copied().unwrap_or(0);
        let what = match e.kind {
            ExplanationKind::Abductive => "added",
            ExplanationKind::Contrastive => "pieces",
        };
        out += &format!("  {}: {} ({what} {n})\n", space.name(j), s.render(space.domain(j)));
        for p in e.probes.get(&j).into_iter().flatten() {
            let mark = match (e.kind, p.accepted) {
                (ExplanationKind::Abductive, true) => "added",
                (ExplanationKind::Abductive, false) => "rejected",
                (ExplanationKind::Contrastive, true) => "dropped",
                (ExplanationKind::Contrastive, false) => "kept",
            };
            out += &format!("    {mark} {}\n", p.tried.render(space.domain(j)));
        }
    }
    out
}

pub fn feature_sets(model: &Model, sets: &[FeatureSet]) -> Value {
    json!(sets
        .iter()
        .map(|s| json!({"features": feature_list(s), "names": names(model, s)}))
        .collect::<Vec<_>>())
}

pub fn bench_text(r: &BenchReport) -> String {
    let a = &r.aggregates;
    let mut out = format!(
        "{} model, {} features, {} instances on {} threads in {:.3}s\n",
        r.family, r.features, r.instances, r.threads, r.total_time
    );
    out += &format!("{:>8} {:>10} {:>6} {:>6} {:>8}\n", "Len", "Time", "m", "M", "avg");
    out += &format!("{:>8.2} {:>10.4} {:>6} {:>6} {:>8.2}\n", a.len, a.time, a.m, a.max, a.avg);
    out
}
