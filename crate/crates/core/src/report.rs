//! Batch runs of the explain-then-inflate pipeline with per-instance
//! records and summary columns: mean AXp length (`len`), mean time
//! (`time`), and min / max / mean number of values or intervals added
//! during inflation (`m`, `M`, `avg`).

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::classifier::Model;
use crate::domain::{Domain, OrdinalKind, Point, Value};
use crate::error::{Error, Result};
use crate::inflate::{explain_and_inflate, InflationConfig};
use crate::problem::ExplanationProblem;
use crate::rational::Rational;

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "XINFLATE_THREADS";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InstanceRecord {
    pub index: usize,
    pub instance: Vec<String>,
    pub class: String,
    /// 1-based feature indices.
    pub axp: Vec<usize>,
    pub axp_len: usize,
    /// Feature name to values, cells or δ-steps added.
    pub inflate_counts: BTreeMap<String, usize>,
    pub total_added: usize,
    pub oracle_calls: u64,
    pub wall_time: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Aggregates {
    #[serde(rename = "Len")]
    pub len: f64,
    #[serde(rename = "Time")]
    pub time: f64,
    pub m: usize,
    #[serde(rename = "M")]
    pub max: usize,
    pub avg: f64,
}

impl Aggregates {
    pub fn from_records(records: &[InstanceRecord]) -> Option<Self> {
        if records.is_empty() {
            return None;
        }
        let n = records.len() as f64;
        Some(Aggregates {
            len: records.iter().map(|r| r.axp_len as f64).sum::<f64>() / n,
            time: records.iter().map(|r| r.wall_time).sum::<f64>() / n,
            m: records.iter().map(|r| r.total_added).min().expect("nonempty"),
            max: records.iter().map(|r| r.total_added).max().expect("nonempty"),
            avg: records.iter().map(|r| r.total_added as f64).sum::<f64>() / n,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub family: String,
    pub features: usize,
    pub instances: usize,
    pub threads: usize,
    pub total_time: f64,
    pub aggregates: Aggregates,
    pub records: Vec<InstanceRecord>,
}

/// Worker count: `requested`, else the available parallelism, capped by
/// [`THREADS_ENV`] when set.
pub fn worker_count(requested: Option<usize>) -> usize {
    let base = requested.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let cap = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()).filter(|&c| c > 0);
    cap.map_or(base, |c| base.min(c)).max(1)
}

/// Uniform random points; ordinal values are drawn on a 1/100 grid (integer
/// domains on integers).
pub fn sample_points(model: &Model, n: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = model.space();
    (0..n)
        .map(|_| {
            let values = (0..space.len())
                .map(|j| match space.domain(j) {
                    Domain::Categorical { labels } => Value::Label(rng.gen_range(0..labels.len())),
                    Domain::Ordinal { lo, hi, kind } => {
                        let scale = if *kind == OrdinalKind::Integer { 1 } else { 100 };
                        let a = (lo * Rational::from_integer(scale)).ceil().to_integer();
                        let b = (hi * Rational::from_integer(scale)).floor().to_integer();
                        Value::Num(Rational::new(rng.gen_range(a..=b), scale))
                    }
                })
                .collect();
            Point::new(space, values).expect("sampled inside the domain")
        })
        .collect()
}

fn run_one(model: &Model, index: usize, point: &Point, cfg: &InflationConfig) -> Result<InstanceRecord> {
    let start = Instant::now();
    let problem = ExplanationProblem::new(model, point.clone())?;
    let (axp, inflated) = explain_and_inflate(&problem, cfg)?;
    let wall_time = start.elapsed().as_secs_f64();
    let space = model.space();
    Ok(InstanceRecord {
        index,
        instance: space.format_point(point),
        class: model.class_name(problem.class()).to_string(),
        axp: axp.one_based(),
        axp_len: axp.len(),
        inflate_counts: inflated.counts.iter().map(|(j, c)| (space.name(*j).to_string(), *c)).collect(),
        total_added: inflated.total_count(),
        oracle_calls: problem.stats().calls(),
        wall_time,
    })
}

/// Explains and inflates every point on a worker pool; records are sorted
/// by input index.
pub fn run_bench(model: &Model, points: &[Point], cfg: &InflationConfig, threads: Option<usize>) -> Result<BenchReport> {
    cfg.validate()?;
    if points.is_empty() {
        return Err(Error::InvalidInput("no instances to run".into()));
    }
    let threads = worker_count(threads);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("worker pool: {e}")))?;
    let start = Instant::now();
    let mut records = pool.install(|| {
        points
            .par_iter()
            .enumerate()
            .map(|(i, p)| run_one(model, i, p, cfg))
            .collect::<Result<Vec<_>>>()
    })?;
    records.sort_by_key(|r| r.index);
    Ok(BenchReport {
        family: model.classifier().family().to_string(),
        features: model.space().len(),
        instances: records.len(),
        threads,
        total_time: start.elapsed().as_secs_f64(),
        aggregates: Aggregates::from_records(&records).expect("nonempty"),
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(len: usize, added: usize, t: f64) -> InstanceRecord {
        InstanceRecord {
            index: 0,
            instance: vec![],
            class: "c".into(),
            axp: vec![],
            axp_len: len,
            inflate_counts: BTreeMap::new(),
            total_added: added,
            oracle_calls: 0,
            wall_time: t,
        }
    }

    #[test]
    fn aggregates() {
        let a = Aggregates::from_records(&[record(2, 3, 1.0), record(4, 7, 3.0)]).unwrap();
        assert_eq!(a, Aggregates { len: 3.0, time: 2.0, m: 3, max: 7, avg: 5.0 });
        assert!(Aggregates::from_records(&[]).is_none());
    }
}
