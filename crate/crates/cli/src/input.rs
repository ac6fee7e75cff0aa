//! Parsing of instance, order, class and feature-set flags.

use std::fmt;
use std::path::Path;

use anyhow::{Context, Result};
use xinflate::{ExplanationProblem, FeatureSet, Model, Point};

/// A malformed flag value; reported with exit code 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn split_fields(line: &str) -> Vec<String> {
    line.split(',').map(|s| s.trim().trim_matches('"').to_string()).collect()
}

/// Every instance given by `spec`: an inline comma-separated row, or a CSV
/// file whose rows are instances (a header row naming the features is skipped).
pub fn instances(model: &Model, spec: &str) -> Result<Vec<Point>> {
    let space = model.space();
    let rows: Vec<Vec<String>> = if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
        let names: Vec<&str> = (0..space.len()).map(|j| space.name(j)).collect();
        text.lines()
            .filter(|l| !l.trim().is_empty())
            .map(split_fields)
            .filter(|r| r.iter().map(String::as_str).ne(names.iter().copied()))
            .collect()
    } else {
        vec![split_fields(spec)]
    };
    if rows.is_empty() {
        return Err(usage(format!("no instance rows in {spec}")));
    }
    rows.iter().map(|r| Ok(space.parse_point(r)?)).collect()
}

pub fn instance(model: &Model, spec: &str) -> Result<Point> {
    let mut all = instances(model, spec)?;
    Ok(all.swap_remove(0))
}

pub fn problem<'m>(model: &'m Model, spec: &str, class: Option<&str>) -> Result<ExplanationProblem<'m>> {
    let point = instance(model, spec)?;
    Ok(match class {
        None => ExplanationProblem::new(model, point)?,
        Some(name) => {
            let c = model
                .class_index(name)
                .ok_or_else(|| usage(format!("unknown class {name:?}; classes are {:?}", model.classes())))?;
            ExplanationProblem::with_class(model, point, c)?
        }
    })
}

/// Feature references: 1-based indices or feature names, comma separated.
pub fn features(model: &Model, spec: &str) -> Result<Vec<usize>> {
    let space = model.space();
    spec.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            if let Some(j) = space.index_of(t) {
                return Ok(j);
            }
            match t.parse::<usize>() {
                Ok(i) if (1..=space.len()).contains(&i) => Ok(i - 1),
                _ => Err(usage(format!("unknown feature {t:?}"))),
            }
        })
        .collect()
}

pub fn order(model: &Model, spec: Option<&str>) -> Result<Vec<usize>> {
    let m = model.space().len();
    let Some(spec) = spec else {
        return Ok((0..m).collect());
    };
    let o = features(model, spec)?;
    let mut seen = o.clone();
    seen.sort_unstable();
    seen.dedup();
    if o.len() != m || seen.len() != m {
        return Err(usage(format!("--order must list each of the {m} features once")));
    }
    Ok(o)
}

pub fn feature_set(model: &Model, spec: &str) -> Result<FeatureSet> {
    Ok(features(model, spec)?.into_iter().collect())
}
