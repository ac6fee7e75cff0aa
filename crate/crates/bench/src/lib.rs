//! Shared inputs for the benchmarks under `benches/`.

use std::path::PathBuf;

use xinflate::testkit::{random_forest, random_point, random_space, rng};
use xinflate::{load_model, sample_points, Model, Point};

/// A model from the repository's `fixtures/` directory.
pub fn fixture(name: &str) -> Model {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    load_model(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// The bundled forest and `n` sampled instances.
pub fn bundled_forest(n: usize) -> (Model, Vec<Point>) {
    let model = fixture("forest.json");
    let points = sample_points(&model, n, 11);
    (model, points)
}

/// A random forest over `m` mixed features with one instance.
pub fn random_forest_problem(seed: u64, m: usize, trees: usize, depth: usize) -> (Model, Point) {
    let mut g = rng(seed);
    let space = random_space(&mut g, m, 0.3);
    let model = random_forest(&mut g, &space, trees, depth, 2);
    let point = random_point(&mut g, model.space());
    (model, point)
}
