//! `xinflate`: compute, inflate and cross-check formal explanations of
//! classifier predictions.

mod input;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use xinflate::{
    accuracy, check_hits, enumerate_all, enumerate_inflated, explain_and_inflate, families_are_dual, find_axp,
    find_cxp, iaxp_from_icxps, icxp_from_iaxps, inflate_axp, inflate_from_full, load_model, parse_rational,
    read_csv, run_bench, sample_points, save_model, shrink_cxp, train_forest, Error, ForestParams,
    InflationConfig, Model, Selector, Strategy,
};

use input::{usage, Usage};

#[derive(Parser)]
#[command(name = "xinflate", version, about = "Abductive and contrastive explanations, and their inflation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify an instance.
    Predict {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compute one AXp and one CXp by linear deletion.
    Explain {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compute an AXp (or take `--axp`) and inflate it.
    Inflate {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        search: SearchArgs,
        /// Inflate this feature set instead of a freshly computed AXp.
        #[arg(long)]
        axp: Option<String>,
        /// Inflate every feature, then drop those left at their full domain.
        #[arg(long, conflicts_with = "axp")]
        from_full: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Enumerate all AXps and CXps.
    Enumerate {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Oracle-call budget.
        #[arg(long)]
        budget: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Shrink a CXp (computed, or given by `--cxp`) to a strong inflated CXp.
    ShrinkCxp {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        cxp: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Enumerate inflated explanations and check their duality.
    Dual {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        budget: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Train a bagged tree ensemble on a CSV dataset.
    TrainRf {
        /// CSV with a header row.
        #[arg(long)]
        data: PathBuf,
        /// Label column (default: the last one).
        #[arg(long)]
        label: Option<String>,
        #[arg(long, default_value_t = 25)]
        trees: usize,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Model file to write.
        #[arg(long)]
        out: PathBuf,
    },
    /// Explain and inflate many instances and report aggregates.
    Bench {
        #[arg(long)]
        model: PathBuf,
        /// CSV file (or inline row) of instances; random samples otherwise.
        #[arg(long)]
        instance: Option<String>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        threads: Option<usize>,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct ProblemArgs {
    /// Model file (JSON).
    #[arg(long)]
    model: PathBuf,
    /// Comma-separated values, or a CSV file whose first row is used.
    #[arg(long)]
    instance: String,
    /// Declared class; refused when the model predicts otherwise.
    #[arg(long)]
    class: Option<String>,
    /// Feature order, 1-based indices or names.
    #[arg(long)]
    order: Option<String>,
}

#[derive(Args)]
struct SearchArgs {
    /// Grid step of ordinal searches.
    #[arg(long, default_value = "0.2")]
    delta: String,
    #[arg(long, value_enum, default_value_t = StrategyArg::Linear)]
    strategy: StrategyArg,
    /// Coarse stride for the linear search (a multiple of delta).
    #[arg(long)]
    beta: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Linear,
    Binary,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SearchArgs {
    fn config(&self, model: &Model, order: Option<&str>) -> Result<InflationConfig> {
        let delta = parse_rational(&self.delta).map_err(|e| usage(format!("--delta: {e}")))?;
        let beta = match &self.beta {
            Some(b) => Some(parse_rational(b).map_err(|e| usage(format!("--beta: {e}")))?),
            None => None,
        };
        let strategy = match self.strategy {
            StrategyArg::Linear => Strategy::Linear,
            StrategyArg::Binary => Strategy::Binary,
        };
        let order = match order {
            Some(o) => Some(input::order(model, Some(o))?),
            None => None,
        };
        let cfg = InflationConfig { delta, beta, strategy, order };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn emit(out: &OutArgs, doc: Value, text: impl FnOnce() -> String) -> Result<()> {
    let body = match out.format {
        Format::Json => serde_json::to_string_pretty(&doc)? + "\n",
        Format::Text => text(),
    };
    match &out.out {
        Some(path) => std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn model(path: &PathBuf) -> Result<Model> {
    load_model(path).with_context(|| format!("loading {}", path.display()))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Predict { problem: pa, out } => {
            let m = model(&pa.model)?;
            let point = input::instance(&m, &pa.instance)?;
            let class = m.class_name(m.predict(&point)?).to_string();
            let doc = json!({"instance": m.space().format_point(&point), "class": class});
            emit(&out, doc, || format!("{class}\n"))
        }
        Command::Explain { problem: pa, out } => {
            let m = model(&pa.model)?;
            let p = input::problem(&m, &pa.instance, pa.class.as_deref())?;
            let order = input::order(&m, pa.order.as_deref())?;
            let start = Instant::now();
            let axp = find_axp(&p, &order)?;
            let cxp = find_cxp(&p, &order)?;
            let doc = json!({
                "instance": render::instance(&p),
                "order": order.iter().map(|j| j + 1).collect::<Vec<_>>(),
                "axp": render::feature_list(&axp),
                "cxp": render::feature_list(&cxp),
                "oracle_calls": p.stats().calls(),
                "wall_time": start.elapsed().as_secs_f64(),
            });
            emit(&out, doc, || format!("AXp {axp}\nCXp {cxp}\n"))
        }
        Command::Inflate { problem: pa, search, axp, from_full, out } => {
            let m = model(&pa.model)?;
            let p = input::problem(&m, &pa.instance, pa.class.as_deref())?;
            let cfg = search.config(&m, pa.order.as_deref())?;
            let start = Instant::now();
            let (x, e) = if from_full {
                let e = inflate_from_full(&p, &cfg)?;
                (e.features.clone(), e)
            } else if let Some(spec) = axp {
                let x = input::feature_set(&m, &spec)?;
                let e = inflate_axp(&p, &x, &cfg)?;
                (x, e)
            } else {
                explain_and_inflate(&p, &cfg)?
            };
            let elapsed = start.elapsed().as_secs_f64();
            let mut doc = json!({
                "instance": render::instance(&p),
                "axp": render::feature_list(&x),
                "strategy": match cfg.strategy { Strategy::Linear => "linear", Strategy::Binary => "binary" },
                "oracle_calls": p.stats().calls(),
                "wall_time": elapsed,
            });
            doc["inflated"] = render::explanation(&m, &e, p.class());
            doc["rule"] = json!(e.render_rule(&m, p.class()));
            emit(&out, doc, || render::explanation_text(&m, &e, p.class()))
        }
        Command::Enumerate { problem: pa, budget, out } => {
            let m = model(&pa.model)?;
            let p = input::problem(&m, &pa.instance, pa.class.as_deref())?;
            let start = Instant::now();
            let (axps, cxps) = enumerate_all(&p, budget)?;
            let doc = json!({
                "instance": render::instance(&p),
                "axps": render::feature_sets(&m, &axps),
                "cxps": render::feature_sets(&m, &cxps),
                "oracle_calls": p.stats().calls(),
                "wall_time": start.elapsed().as_secs_f64(),
            });
            emit(&out, doc, || {
                let mut s = String::new();
                axps.iter().for_each(|a| s += &format!("AXp {a}\n"));
                cxps.iter().for_each(|c| s += &format!("CXp {c}\n"));
                s
            })
        }
        Command::ShrinkCxp { problem: pa, cxp, out } => {
            let m = model(&pa.model)?;
            let p = input::problem(&m, &pa.instance, pa.class.as_deref())?;
            let order = input::order(&m, pa.order.as_deref())?;
            let start = Instant::now();
            let y = match cxp {
                Some(spec) => input::feature_set(&m, &spec)?,
                None => find_cxp(&p, &order)?,
            };
            let e = shrink_cxp(&p, &y, &order)?;
            let mut doc = json!({
                "instance": render::instance(&p),
                "cxp": render::feature_list(&y),
                "oracle_calls": p.stats().calls(),
                "wall_time": start.elapsed().as_secs_f64(),
            });
            doc["inflated"] = render::explanation(&m, &e, p.class());
            doc["rule"] = json!(e.render_rule(&m, p.class()));
            emit(&out, doc, || render::explanation_text(&m, &e, p.class()))
        }
        Command::Dual { problem: pa, search, budget, out } => {
            let m = model(&pa.model)?;
            let p = input::problem(&m, &pa.instance, pa.class.as_deref())?;
            let cfg = search.config(&m, pa.order.as_deref())?;
            let start = Instant::now();
            let sets = enumerate_inflated(&p, &cfg, budget)?;
            let dual = families_are_dual(&sets.axp_sets(), &sets.cxp_sets())?;
            let mut misses = Vec::new();
            for (a, x) in sets.iaxps.iter().enumerate() {
                for (c, y) in sets.icxps.iter().enumerate() {
                    if check_hits(x, y)?.is_none() {
                        misses.push(json!({"iaxp": a, "icxp": c}));
                    }
                }
            }
            let construct = |r: xinflate::Result<xinflate::InflatedExplanation>| -> Result<Value> {
                Ok(match r {
                    Ok(e) => json!({"accepted": true, "explanation": render::explanation(&m, &e, p.class())}),
                    Err(Error::ConstructionRejected(rep)) => json!({"accepted": false, "report": *rep}),
                    Err(e) => return Err(e.into()),
                })
            };
            let icxp = construct(icxp_from_iaxps(&p, &sets.iaxps, &Selector::MinimalSearch))?;
            let iaxp = construct(iaxp_from_icxps(&p, &sets.icxps, &Selector::MinimalSearch))?;
            let doc = json!({
                "instance": render::instance(&p),
                "iaxps": sets.iaxps.iter().map(|e| render::explanation(&m, e, p.class())).collect::<Vec<_>>(),
                "icxps": sets.icxps.iter().map(|e| render::explanation(&m, e, p.class())).collect::<Vec<_>>(),
                "families_dual": dual,
                "hit_failures": misses,
                "icxp_from_iaxps": icxp,
                "iaxp_from_icxps": iaxp,
                "oracle_calls": p.stats().calls(),
                "wall_time": start.elapsed().as_secs_f64(),
            });
            let text = {
                let mut s = String::new();
                sets.iaxps.iter().for_each(|e| s += &format!("iAXp {}\n", e.render_rule(&m, p.class())));
                sets.icxps.iter().for_each(|e| s += &format!("iCXp {}\n", e.render_rule(&m, p.class())));
                s += &format!("dual {dual}, hit failures {}\n", misses.len());
                s
            };
            emit(&out, doc, || text)
        }
        Command::TrainRf { data, label, trees, depth, seed, out } => {
            let ds = read_csv(&data, label.as_deref()).with_context(|| format!("reading {}", data.display()))?;
            let params = ForestParams { trees, max_depth: depth, seed, mtry: None };
            let forest = train_forest(&ds, &params)?;
            save_model(&forest, &out)?;
            eprintln!(
                "trained {trees} trees on {} rows; training accuracy {:.3}; wrote {}",
                ds.len(),
                accuracy(&forest, &ds)?,
                out.display()
            );
            Ok(())
        }
        Command::Bench { model: path, instance, samples, seed, threads, search, out } => {
            let m = model(&path)?;
            let cfg = search.config(&m, None)?;
            let points = match instance {
                Some(spec) => input::instances(&m, &spec)?,
                None => sample_points(&m, samples, seed),
            };
            let report = run_bench(&m, &points, &cfg, threads)?;
            emit(&out, serde_json::to_value(&report)?, || render::bench_text(&report))
        }
    }
}

fn is_validation(err: &anyhow::Error) -> bool {
    for cause in err.chain() {
        if cause.downcast_ref::<Usage>().is_some() {
            return true;
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::Io(io) => io.kind() == std::io::ErrorKind::NotFound,
                other => other.is_validation(),
            };
        }
        if let Some(io) = cause.downcast_ref::<std::io::Error>() {
            return io.kind() == std::io::ErrorKind::NotFound;
        }
    }
    false
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(if is_validation(&err) { 2 } else { 1 })
        }
    }
}
