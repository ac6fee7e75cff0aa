//! Acceptance checks 1 to 8. Runs without the libtest harness and prints one
//! PASS/FAIL line per criterion; exits non-zero if any fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value as Json};
use xinflate::testkit::*;
use xinflate::*;

type Outcome = std::result::Result<String, String>;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_xinflate"))
}

fn run_json(args: &[&str]) -> std::result::Result<Json, String> {
    let out = bin().args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited {}: {}", out.status, String::from_utf8_lossy(&out.stderr)));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// The desk models of the soundness suite: decision lists with at most six
/// rules, forests of at most 15 trees of depth 3 over at most 5 features,
/// and monotone models.
fn desk_model(seed: u64) -> (Model, Point) {
    let mut g = rng(seed);
    let model = match seed % 3 {
        0 => {
            let m = g.gen_range(2..=5);
            let space = random_space(&mut g, m, 0.5);
            let k = g.gen_range(2..=3);
            random_decision_list(&mut g, &space, 6, k)
        }
        1 => {
            let m = g.gen_range(2..=5);
            let space = random_space(&mut g, m, 0.3);
            random_forest(&mut g, &space, 15, 3, 2)
        }
        _ => {
            let m = g.gen_range(2..=5);
            let k = g.gen_range(2..=3);
            random_monotone(&mut g, m, k)
        }
    };
    let point = random_point(&mut g, model.space());
    (model, point)
}

fn shuffled(seed: u64, m: usize) -> Vec<usize> {
    let mut o: Vec<usize> = (0..m).collect();
    o.shuffle(&mut rng(seed ^ 0xfeed));
    o
}

fn criterion_1() -> Outcome {
    let model = root().join("fixtures/dl1.json");
    let model = model.to_str().unwrap();
    let start = Instant::now();
    let explain = run_json(&["explain", "--model", model, "--instance", "Junior,Red"])?;
    let inflate = run_json(&["inflate", "--model", model, "--instance", "Junior,Red", "--order", "A,C"])?;
    let elapsed = start.elapsed().as_secs_f64();
    ensure!(explain["axp"] == json!([1, 2]), "explain gave AXp {}", explain["axp"]);
    ensure!(inflate["axp"] == json!([1, 2]), "inflate gave AXp {}", inflate["axp"]);
    let sets = &inflate["inflated"]["sets"];
    ensure!(sets[0]["set"] == "{Junior,Senior}", "E_A = {}", sets[0]["set"]);
    ensure!(sets[1]["set"] == "{Red,Blue,Green,Black}", "E_C = {}", sets[1]["set"]);
    let probes = |k: usize| -> Vec<(String, bool)> {
        sets[k]["probes"]
            .as_array()
            .unwrap()
            .iter()
            .map(|p| (p["tried"].as_str().unwrap().to_string(), p["accepted"].as_bool().unwrap()))
            .collect()
    };
    let want_a = [("{Adult}", false), ("{Senior}", true)];
    let want_c = [("{Blue}", true), ("{Green}", true), ("{Silver}", false), ("{Black}", true), ("{White}", false)];
    let same = |got: Vec<(String, bool)>, want: &[(&str, bool)]| {
        got.len() == want.len() && got.iter().zip(want).all(|(g, w)| g.0 == w.0 && g.1 == w.1)
    };
    ensure!(same(probes(0), &want_a), "A probes {:?}", probes(0));
    ensure!(same(probes(1), &want_c), "C probes {:?}", probes(1));
    ensure!(
        inflate["rule"] == "IF A∈{Junior,Senior} ∧ C∈{Red,Blue,Green,Black} THEN 1",
        "rule {}",
        inflate["rule"]
    );
    ensure!(elapsed < 1.0, "took {elapsed:.3}s");
    Ok(format!("AXp {{1,2}}, exact sets and probe order, {:.0} ms", elapsed * 1e3))
}

fn criterion_2() -> Outcome {
    let n = 540;
    let mut checked = 0;
    for seed in 0..n {
        let (model, point) = desk_model(seed);
        let p = ExplanationProblem::new(&model, point.clone()).map_err(|e| e.to_string())?;
        let c = p.class();
        let order = shuffled(seed, model.space().len());
        let axp = find_axp(&p, &order).map_err(|e| e.to_string())?;
        let cxp = find_cxp(&p, &order).map_err(|e| e.to_string())?;
        ensure!(brute_is_waxp(&model, &point, c, &axp), "seed {seed}: AXp {axp} is not sufficient");
        for j in axp.iter() {
            ensure!(!brute_is_waxp(&model, &point, c, &axp.without(j)), "seed {seed}: AXp {axp} not minimal at {}", j + 1);
        }
        ensure!(brute_is_wcxp(&model, &point, c, &cxp), "seed {seed}: CXp {cxp} admits no counterexample");
        for j in cxp.iter() {
            ensure!(!brute_is_wcxp(&model, &point, c, &cxp.without(j)), "seed {seed}: CXp {cxp} not minimal at {}", j + 1);
        }
        checked += 1;
    }
    Ok(format!("{checked} models, AXp and CXp sound and subset-minimal, 0 violations"))
}

/// Every one-step widening of an inflated AXp admits a counterexample.
fn maximality_violation(model: &Model, p: &ExplanationProblem<'_>, e: &InflatedExplanation, delta: &Rational) -> Option<String> {
    let c = p.class();
    let base = e.assignment();
    for (j, set) in &e.sets {
        let j = *j;
        let domain = model.space().domain(j);
        let mut widenings: Vec<ValueSet> = Vec::new();
        match domain {
            Domain::Categorical { labels } => {
                for u in 0..labels.len() {
                    if !set.contains(&Value::Label(u)).unwrap() {
                        widenings.push(set.union(&ValueSet::labels(domain, [u]).unwrap(), domain).unwrap());
                    }
                }
            }
            Domain::Ordinal { lo, hi, .. } if model.classifier().is_monotonic() => {
                let iv = &set.as_intervals().unwrap()[0];
                if iv.hi < *hi {
                    let up = (iv.hi + delta).min(*hi);
                    widenings.push(ValueSet::intervals(domain, vec![Interval::closed(iv.lo, up)]).unwrap());
                }
                if iv.lo > *lo {
                    let down = (iv.lo - delta).max(*lo);
                    widenings.push(ValueSet::intervals(domain, vec![Interval::closed(down, iv.hi)]).unwrap());
                }
            }
            Domain::Ordinal { .. } => {
                let disc = model.discretization().unwrap();
                for cell in disc.cells(j) {
                    let cell = ValueSet::intervals(domain, vec![cell.clone()]).unwrap();
                    if !cell.is_subset_of(set).unwrap() {
                        widenings.push(set.union(&cell, domain).unwrap());
                    }
                }
            }
        }
        for w in widenings {
            if brute_sufficient(model, c, &base.with(j, w.clone())) {
                return Some(format!("{} can grow to {}", model.space().name(j), w.render(domain)));
            }
        }
    }
    None
}

fn criterion_3() -> Outcome {
    let cfg = InflationConfig::default();
    let mut additions = 0;
    for seed in 0..540 {
        let (model, point) = desk_model(seed);
        let p = ExplanationProblem::new(&model, point).map_err(|e| e.to_string())?;
        let (_, e) = explain_and_inflate(&p, &cfg).map_err(|e| e.to_string())?;
        ensure!(brute_sufficient(&model, p.class(), &e.assignment()), "seed {seed}: iAXp not sufficient");
        if let Some(v) = maximality_violation(&model, &p, &e, &cfg.delta) {
            return Err(format!("seed {seed}: {v}"));
        }
        additions += e.sets.len();
    }
    Ok(format!("540 iAXps ({additions} inflated literals) maximal, 0 violations"))
}

fn component_of(set: &ValueSet, x: &Rational) -> Option<Interval> {
    set.as_intervals()?.iter().find(|iv| iv.contains(x)).cloned()
}

fn criterion_4() -> Outcome {
    let mut compared = 0;
    for seed in 0..100u64 {
        let mut g = rng(10_000 + seed);
        let m = g.gen_range(2..=5);
        let space = random_space(&mut g, m, 0.2);
        let model = random_forest(&mut g, &space, 15, 3, 2);
        let point = random_point(&mut g, model.space());
        let p = ExplanationProblem::new(&model, point.clone()).map_err(|e| e.to_string())?;
        let (_, e) = explain_and_inflate(&p, &InflationConfig::default()).map_err(|e| e.to_string())?;
        let disc = model.discretization().unwrap();
        for (&j, _) in e.sets.iter().filter(|(j, _)| !space.domain(**j).is_categorical()) {
            let domain = space.domain(j);
            let (lo, hi) = domain.bounds().unwrap();
            let mut bounds: Vec<Rational> = disc.split_values(j).to_vec();
            bounds.extend([*lo, *hi]);
            // integer domains snap cell ends to the enclosed integers
            bounds.extend(disc.cells(j).iter().flat_map(|c| [c.lo, c.hi]));
            let context = e.assignment().without(j);
            let tree = inflate_ordinal_tree(&p, j, &p.singleton(j), &context).map_err(|e| e.to_string())?;
            for iv in tree.as_intervals().unwrap() {
                ensure!(
                    bounds.contains(&iv.lo) && bounds.contains(&iv.hi),
                    "seed {seed}: {} has endpoint off the cell grid: {}",
                    space.name(j),
                    tree.render(domain)
                );
            }
            let mut cuts = disc.split_values(j).to_vec();
            cuts.extend([*lo, *hi]);
            cuts.sort();
            cuts.dedup();
            let width = cuts.windows(2).map(|w| w[1] - w[0]).min().unwrap();
            let delta = width / Rational::from_integer(4);
            let v = *point.get(j).as_num().unwrap();
            let cfg = InflationConfig::with_delta(delta);
            let linear = inflate_ordinal(&p, j, &context, &cfg).map_err(|e| e.to_string())?;
            let exact = component_of(&tree, &v).unwrap();
            let found = component_of(&linear, &v).unwrap();
            let close = |a: &Rational, b: &Rational| (if a > b { a - b } else { b - a }) <= delta;
            ensure!(
                close(&exact.lo, &found.lo) && close(&exact.hi, &found.hi),
                "seed {seed}: {} cells {} vs δ-search {} (δ = {})",
                space.name(j),
                tree.render(domain),
                linear.render(domain),
                format_rational(&delta)
            );
            compared += 1;
        }
    }
    ensure!(compared > 0, "no ordinal feature was compared");
    Ok(format!("100 forests, {compared} ordinal literals on cell boundaries and within δ of a fine δ-search"))
}

fn write_artifact(name: &str, doc: &Json) -> String {
    let dir = root().join("target/acceptance");
    let _ = std::fs::create_dir_all(&dir);
    let path = dir.join(name);
    let _ = std::fs::write(&path, serde_json::to_string_pretty(doc).unwrap());
    path.display().to_string()
}

fn criterion_5() -> Outcome {
    let cfg = InflationConfig::default();
    let mut pairs = 0;
    let mut built = (0, 0);
    for seed in 0..50u64 {
        let mut g = rng(20_000 + seed);
        let m = g.gen_range(2..=6);
        let model = match seed % 3 {
            0 => random_monotone(&mut g, m, 2),
            1 => {
                let space = random_space(&mut g, m, 0.6);
                random_decision_list(&mut g, &space, 5, 2)
            }
            _ => {
                let space = random_space(&mut g, m.min(4), 0.3);
                random_forest(&mut g, &space, 4, 3, 2)
            }
        };
        let point = random_point(&mut g, model.space());
        let p = ExplanationProblem::new(&model, point).map_err(|e| e.to_string())?;
        let (axps, cxps) = enumerate_all(&p, None).map_err(|e| e.to_string())?;
        ensure!(
            minimal_hitting_sets(&cxps).unwrap() == axps && minimal_hitting_sets(&axps).unwrap() == cxps,
            "seed {seed}: AXp and CXp families are not mutual minimal hitting sets"
        );
        let sets = enumerate_inflated(&p, &cfg, None).map_err(|e| e.to_string())?;
        ensure!(families_are_dual(&sets.axp_sets(), &sets.cxp_sets()).unwrap(), "seed {seed}: inflated families not dual");
        for x in &sets.iaxps {
            for y in &sets.icxps {
                if check_hits(x, y).unwrap().is_none() {
                    let doc = json!({
                        "seed": seed,
                        "model": serde_json::from_str::<Json>(&model_to_json(&model)).unwrap(),
                        "instance": model.space().format_point(p.point()),
                        "iaxp": x.render_rule(&model, p.class()),
                        "icxp": y.render_rule(&model, p.class()),
                    });
                    let path = write_artifact(&format!("duality_seed_{seed}.json"), &doc);
                    return Err(format!("seed {seed}: iAXp and iCXp do not hit; report at {path}"));
                }
                pairs += 1;
            }
        }
        if icxp_from_iaxps(&p, &sets.iaxps, &Selector::MinimalSearch).is_ok() {
            built.0 += 1;
        }
        if iaxp_from_icxps(&p, &sets.icxps, &Selector::MinimalSearch).is_ok() {
            built.1 += 1;
        }
    }
    Ok(format!(
        "50 models dual, {pairs} iAXp/iCXp pairs hit; constructions validated {}/50 and {}/50",
        built.0, built.1
    ))
}

fn criterion_6() -> Outcome {
    let mut literals = 0;
    for seed in 0..200u64 {
        let mut g = rng(30_000 + seed);
        let m = g.gen_range(1..=5);
        let k = g.gen_range(2..=4);
        let model = random_monotone(&mut g, m.max(2), k);
        let point = random_point(&mut g, model.space());
        let p = ExplanationProblem::new(&model, point).map_err(|e| e.to_string())?;
        let delta = [Rational::new(1, 5), Rational::new(1, 4), Rational::new(1, 2), Rational::new(1, 3)][g.gen_range(0..4)];
        let axp = find_axp(&p, &default_order(model.space().len())).map_err(|e| e.to_string())?;
        let base = InflationConfig::with_delta(delta);
        let beta = InflationConfig { beta: Some(delta * Rational::from_integer(g.gen_range(2..=6))), ..base.clone() };
        let binary = InflationConfig { strategy: Strategy::Binary, ..base.clone() };
        let a = inflate_axp(&p, &axp, &base).map_err(|e| e.to_string())?;
        let b = inflate_axp(&p, &axp, &beta).map_err(|e| e.to_string())?;
        let c = inflate_axp(&p, &axp, &binary).map_err(|e| e.to_string())?;
        ensure!(a.sets == b.sets && a.sets == c.sets, "seed {seed}: strategies disagree");
        literals += a.sets.len();
    }
    Ok(format!("200 monotone problems, {literals} literals identical across linear, β-refined and binary"))
}

fn criterion_7() -> Outcome {
    let path = root().join("fixtures/forest.json");
    let model = load_model(&path).map_err(|e| e.to_string())?;
    let Classifier::TreeEnsemble(forest) = model.classifier() else {
        return Err("bundled forest is not a tree ensemble".into());
    };
    ensure!(forest.trees.len() == 25, "{} trees", forest.trees.len());
    ensure!(forest.trees.iter().all(|t| t.root.depth() <= 4), "a tree exceeds depth 4");
    ensure!(model.space().len() == 8, "{} features", model.space().len());
    let start = Instant::now();
    let report = run_json(&["bench", "--model", path.to_str().unwrap(), "--samples", "100", "--seed", "7"])?;
    let elapsed = start.elapsed().as_secs_f64();
    ensure!(elapsed < 60.0, "bench took {elapsed:.1}s");
    ensure!(report["instances"] == 100, "instances {}", report["instances"]);
    let agg = &report["aggregates"];
    for key in ["Len", "Time", "m", "M", "avg"] {
        ensure!(agg[key].is_number(), "aggregate {key} missing");
    }
    let records = report["records"].as_array().unwrap();
    let added: Vec<u64> = records.iter().map(|r| r["total_added"].as_u64().unwrap()).collect();
    ensure!(agg["m"] == added.iter().min().copied().unwrap(), "m does not match the records");
    ensure!(agg["M"] == added.iter().max().copied().unwrap(), "M does not match the records");
    Ok(format!(
        "25 trees, depth 4, 8 features, 100 instances in {elapsed:.2}s; Len {:.2} Time {:.4} m {} M {} avg {:.2}",
        agg["Len"].as_f64().unwrap(),
        agg["Time"].as_f64().unwrap(),
        agg["m"],
        agg["M"],
        agg["avg"].as_f64().unwrap()
    ))
}

fn criterion_8() -> Outcome {
    let cfg = InflationConfig::default();
    let mut n = 0;
    for seed in 0..300u64 {
        let mut g = rng(40_000 + seed);
        let m = g.gen_range(2..=6);
        let space = random_space(&mut g, m, 1.0);
        let model = if seed % 2 == 0 {
            random_decision_list(&mut g, &space, 6, 2)
        } else {
            random_forest(&mut g, &space, 8, 3, 2)
        };
        let point = random_point(&mut g, model.space());
        let p = ExplanationProblem::new(&model, point).map_err(|e| e.to_string())?;
        let (axp, _) = explain_and_inflate(&p, &cfg).map_err(|e| e.to_string())?;
        let bound: u64 = m as u64
            + axp.iter().map(|j| space.domain(j).cardinality().unwrap() as u64 - 1).sum::<u64>();
        let calls = p.stats().calls();
        ensure!(calls <= bound, "seed {seed}: {calls} calls exceed |F| + Σ|D_j \\ {{v_j}}| = {bound}");
        ensure!(calls == bound, "seed {seed}: {calls} calls, expected exactly {bound}");
        n += 1;
    }
    let dl1 = load_model(root().join("fixtures/dl1.json")).map_err(|e| e.to_string())?;
    let p = ExplanationProblem::new(&dl1, dl1.space().parse_point(&["Junior", "Red"]).unwrap()).unwrap();
    explain_and_inflate(&p, &cfg).map_err(|e| e.to_string())?;
    ensure!(p.stats().calls() == 9, "DL1 used {} calls, expected 2 + 2 + 5", p.stats().calls());
    Ok(format!("{n} categorical problems and DL1 (9 calls) meet |F| + Σ|D_j \\ {{v_j}}| exactly"))
}

fn main() {
    let checks: [(&str, fn() -> Outcome); 8] = [
        ("running example parity", criterion_1),
        ("soundness", criterion_2),
        ("maximality", criterion_3),
        ("tree exactness", criterion_4),
        ("duality", criterion_5),
        ("strategy equivalence", criterion_6),
        ("desk-scale bench", criterion_7),
        ("oracle-call accounting", criterion_8),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let id = format!("criterion {}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| id.contains(f.as_str()) || name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("{id} ({name}): PASS [{secs:.1}s] {detail}"),
            Err(why) => {
                failed += 1;
                println!("{id} ({name}): FAIL [{secs:.1}s] {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

