//! Worked examples on the two bundled running models: the driver-risk
//! decision list (DL1) and the two-feature monotone model (M1).

use std::path::PathBuf;

use xinflate::*;

fn fixture(name: &str) -> Model {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    load_model(path).unwrap()
}

fn point(model: &Model, fields: &[&str]) -> Point {
    model.space().parse_point(fields).unwrap()
}

fn labels(model: &Model, j: usize, names: &[&str]) -> ValueSet {
    let d = model.space().domain(j);
    ValueSet::labels(d, names.iter().map(|n| d.label_index(n).unwrap())).unwrap()
}

fn interval(model: &Model, j: usize, text: &str) -> ValueSet {
    ValueSet::intervals(model.space().domain(j), vec![Interval::parse(text).unwrap()]).unwrap()
}

fn q(text: &str) -> Rational {
    parse_rational(text).unwrap()
}

fn fs(items: &[usize]) -> FeatureSet {
    items.iter().map(|i| i - 1).collect()
}

#[test]
fn dl1_predictions() {
    let m = fixture("dl1.json");
    assert_eq!(m.class_name(m.predict(&point(&m, &["Junior", "Red"])).unwrap()), "1");
    assert_eq!(m.class_name(m.predict(&point(&m, &["Adult", "Red"])).unwrap()), "0");
    assert!(!m.is_constant());
}

#[test]
fn m1_prediction_and_constancy() {
    let m = fixture("m1.json");
    assert_eq!(m.class_name(m.predict(&point(&m, &["3", "5"])).unwrap()), "B");
    assert_eq!(m.class_name(m.predict(&point(&m, &["10", "10"])).unwrap()), "A");
    assert!(!m.is_constant());
}

#[test]
fn single_leaf_tree_is_constant() {
    let space = FeatureSpace::from_domains(vec![Domain::continuous(0, 1).unwrap()]).unwrap();
    let m = Model::new(space, vec!["a".into(), "b".into()], Classifier::DecisionTree(DecisionTree::new(Node::leaf(0))))
        .unwrap();
    assert!(m.is_constant());
    let p = Point::new(m.space(), vec![Value::Num(q("0.5"))]).unwrap();
    assert!(matches!(ExplanationProblem::new(&m, p), Err(Error::ConstantClassifier)));
}

#[test]
fn dimension_mismatch() {
    let m = fixture("dl1.json");
    assert!(m.space().parse_point(&["Junior"]).is_err());
}

#[test]
fn sufficiency_examples() {
    let m = fixture("dl1.json");
    let p = ExplanationProblem::new(&m, point(&m, &["Junior", "Red"])).unwrap();
    let mut a = Assignment::new();
    a.insert(0, labels(&m, 0, &["Junior", "Senior"]));
    a.insert(1, labels(&m, 1, &["Red", "Blue", "Green", "Black"]));
    assert!(p.holds_sufficiency(&a).unwrap());
    let mut a = Assignment::new();
    a.insert(0, labels(&m, 0, &["Junior", "Adult"]));
    a.insert(1, labels(&m, 1, &["Red"]));
    assert!(!p.holds_sufficiency(&a).unwrap());

    let m1 = fixture("m1.json");
    let p1 = ExplanationProblem::new(&m1, point(&m1, &["3", "5"])).unwrap();
    let mut a = Assignment::new();
    a.insert(0, interval(&m1, 0, "[0,6.5]"));
    a.insert(1, interval(&m1, 1, "[0,5]"));
    assert!(p1.holds_sufficiency(&a).unwrap());
}

#[test]
fn counterexample_examples() {
    let m = fixture("dl1.json");
    let p = ExplanationProblem::new(&m, point(&m, &["Junior", "Red"])).unwrap();
    let fixed: Assignment = [(1, labels(&m, 1, &["Red"]))].into_iter().collect();
    let roam: Assignment = [(0, ValueSet::full(m.space().domain(0)))].into_iter().collect();
    assert!(p.exists_counterexample(&fixed, &roam).unwrap());

    let fixed: Assignment = [(0, labels(&m, 0, &["Junior"]))].into_iter().collect();
    let roam: Assignment = [(1, labels(&m, 1, &["Blue", "Green"]))].into_iter().collect();
    assert!(!p.exists_counterexample(&fixed, &roam).unwrap());

    let fixed = p.pinned(&p.all_features());
    assert!(!p.exists_counterexample(&fixed, &Assignment::new()).unwrap());

    let overlap: Assignment = [(0, ValueSet::full(m.space().domain(0)))].into_iter().collect();
    assert!(p.exists_counterexample(&fixed, &overlap).is_err());
}

#[test]
fn monotone_box_examples() {
    let m = fixture("m1.json");
    let Classifier::Monotonic(mc) = m.classifier() else { unreachable!() };
    let b = |x: &str, y: &str| -> Assignment {
        [(0, interval(&m, 0, x)), (1, interval(&m, 1, y))].into_iter().collect()
    };
    assert!(monotone_box_check(mc, m.space(), &b("[0,6.5]", "[0,5]"), 0).unwrap());
    assert!(!monotone_box_check(mc, m.space(), &b("[0,7]", "[0,5]"), 0).unwrap());
    assert!(monotone_box_check(mc, m.space(), &b("3", "5"), 0).unwrap());
}

#[test]
fn axp_and_cxp_examples() {
    let m = fixture("dl1.json");
    let p = ExplanationProblem::new(&m, point(&m, &["Junior", "Red"])).unwrap();
    assert_eq!(find_axp(&p, &[0, 1]).unwrap(), fs(&[1, 2]));
    assert_eq!(find_cxp(&p, &[0, 1]).unwrap(), fs(&[1]));
    assert_eq!(find_cxp(&p, &[1, 0]).unwrap(), fs(&[2]));

    let m1 = fixture("m1.json");
    let p1 = ExplanationProblem::new(&m1, point(&m1, &["3", "5"])).unwrap();
    assert_eq!(find_axp(&p1, &[0, 1]).unwrap(), fs(&[1, 2]));
    assert_eq!(find_cxp(&p1, &[0, 1]).unwrap(), fs(&[1]));
}

#[test]
fn irrelevant_feature_is_left_out() {
    let space = FeatureSpace::from_domains(vec![
        Domain::continuous(0, 10).unwrap(),
        Domain::continuous(0, 10).unwrap(),
        Domain::continuous(0, 10).unwrap(),
    ])
    .unwrap();
    let tree = Node::threshold(0, q("5"), Node::leaf(0), Node::threshold(1, q("5"), Node::leaf(0), Node::leaf(1)));
    let m = Model::new(space, vec!["a".into(), "b".into()], Classifier::DecisionTree(DecisionTree::new(tree))).unwrap();
    let p = ExplanationProblem::new(&m, point(&m, &["7", "7", "7"])).unwrap();
    let axp = find_axp(&p, &[0, 1, 2]).unwrap();
    assert!(!axp.contains(2));
    let inflated = inflate_from_full(&p, &InflationConfig::default()).unwrap();
    assert!(!inflated.features.contains(2));
}

#[test]
fn enumeration_examples() {
    let m = fixture("dl1.json");
    let p = ExplanationProblem::new(&m, point(&m, &["Junior", "Red"])).unwrap();
    let (axps, cxps) = enumerate_all(&p, None).unwrap();
    assert_eq!(axps, vec![fs(&[1, 2])]);
    assert_eq!(cxps, vec![fs(&[1]), fs(&[2])]);
    assert_eq!(minimal_hitting_sets(&cxps).unwrap(), axps);

    let m1 = fixture("m1.json");
    let p1 = ExplanationProblem::new(&m1, point(&m1, &["3", "5"])).unwrap();
    let (axps, cxps) = enumerate_all(&p1, None).unwrap();
    assert_eq!(axps, vec![fs(&[1, 2])]);
    assert_eq!(cxps, vec![fs(&[1]), fs(&[2])]);
}

#[test]
fn enumeration_budget() {
    let m = fixture("dl1.json");
    let p = ExplanationProblem::new(&m, point(&m, &["Junior", "Red"])).unwrap();
    match enumerate_all(&p, Some(1)) {
        Err(Error::BudgetExceeded { budget: 1, .. }) => {}
        other => panic!("{other:?}"),
    }
}

#[test]
fn dl1_inflation() {
    let m = fixture("dl1.json");
    let p = ExplanationProblem::new(&m, point(&m, &["Junior", "Red"])).unwrap();
    let cfg = InflationConfig { order: Some(vec![0, 1]), ..Default::default() };
    let e = inflate_axp(&p, &fs(&[1, 2]), &cfg).unwrap();
    assert_eq!(e.set(0).unwrap(), &labels(&m, 0, &["Junior", "Senior"]));
    assert_eq!(e.set(1).unwrap(), &labels(&m, 1, &["Red", "Blue", "Green", "Black"]));
    assert_eq!(e.render_rule(&m, p.class()), "IF A∈{Junior,Senior} ∧ C∈{Red,Blue,Green,Black} THEN 1");
    assert_eq!(e.delta, Rational::from_integer(0));
    let tried: Vec<String> =
        e.probes[&1].iter().map(|pr| pr.tried.render(m.space().domain(1))).collect();
    assert_eq!(tried, ["{Blue}", "{Green}", "{Silver}", "{Black}", "{White}"]);
    let accepted: Vec<bool> = e.probes[&0].iter().map(|pr| pr.accepted).collect();
    assert_eq!(accepted, [false, true]);
}

#[test]
fn inflating_a_non_axp_fails() {
    let m = fixture("dl1.json");
    let p = ExplanationProblem::new(&m, point(&m, &["Junior", "Red"])).unwrap();
    assert!(matches!(inflate_axp(&p, &FeatureSet::new(), &InflationConfig::default()), Err(Error::NotSufficient(_))));
    assert!(matches!(inflate_axp(&p, &fs(&[1]), &InflationConfig::default()), Err(Error::NotSufficient(_))));
}

#[test]
fn categorical_inflation_steps() {
    let m = fixture("dl1.json");
    let p = ExplanationProblem::new(&m, point(&m, &["Junior", "Red"])).unwrap();
    let ctx: Assignment = [(0, labels(&m, 0, &["Junior", "Senior"]))].into_iter().collect();
    assert_eq!(
        inflate_categorical(&p, 1, &labels(&m, 1, &["Red"]), &ctx).unwrap(),
        labels(&m, 1, &["Red", "Blue", "Green", "Black"])
    );
    let ctx: Assignment = [(1, labels(&m, 1, &["Red"]))].into_iter().collect();
    assert_eq!(
        inflate_categorical(&p, 0, &labels(&m, 0, &["Junior"]), &ctx).unwrap(),
        labels(&m, 0, &["Junior", "Senior"])
    );
    let full = ValueSet::full(m.space().domain(0));
    assert_eq!(inflate_categorical(&p, 0, &full, &Assignment::new()).unwrap(), full);
}

#[test]
fn m1_inflation() {
    let m = fixture("m1.json");
    let p = ExplanationProblem::new(&m, point(&m, &["3", "5"])).unwrap();
    let cfg = InflationConfig::with_delta(q("0.5"));
    let e = inflate_axp(&p, &fs(&[1, 2]), &cfg).unwrap();
    assert_eq!(e.set(0).unwrap(), &interval(&m, 0, "[0,6.5]"));
    assert_eq!(e.set(1).unwrap(), &interval(&m, 1, "[0,5]"));
    assert_eq!(e.delta, q("0.5"));

    let ctx: Assignment = [(1, interval(&m, 1, "5"))].into_iter().collect();
    assert_eq!(inflate_ordinal(&p, 0, &ctx, &cfg).unwrap(), interval(&m, 0, "[0,6.5]"));
    let ctx: Assignment = [(0, interval(&m, 0, "[0,6.5]"))].into_iter().collect();
    assert_eq!(inflate_ordinal(&p, 1, &ctx, &cfg).unwrap(), interval(&m, 1, "[0,5]"));

    let ctx: Assignment = [(0, interval(&m, 0, "3")), (1, interval(&m, 1, "5"))].into_iter().collect();
    assert_eq!(expand_sup(&p, 0, q("3"), &ctx, &cfg).unwrap(), q("6.5"));
    let ctx: Assignment = [(0, interval(&m, 0, "[0,6.5]")), (1, interval(&m, 1, "5"))].into_iter().collect();
    assert_eq!(expand_inf(&p, 1, q("5"), &ctx, &cfg).unwrap(), q("0"));
}

#[test]
fn inflate_from_full_examples() {
    let m = fixture("dl1.json");
    let p = ExplanationProblem::new(&m, point(&m, &["Junior", "Red"])).unwrap();
    let e = inflate_from_full(&p, &InflationConfig::default()).unwrap();
    assert_eq!(e.features, fs(&[1, 2]));
    assert_eq!(e.set(1).unwrap(), &labels(&m, 1, &["Red", "Blue", "Green", "Black"]));

    let m1 = fixture("m1.json");
    let p1 = ExplanationProblem::new(&m1, point(&m1, &["3", "5"])).unwrap();
    let e = inflate_from_full(&p1, &InflationConfig::with_delta(q("0.5"))).unwrap();
    assert_eq!(e.features, fs(&[1, 2]));
}

#[test]
fn tree_cell_inflation() {
    let space = FeatureSpace::from_domains(vec![Domain::continuous(0, 10).unwrap(), Domain::continuous(0, 10).unwrap()])
        .unwrap();
    let stump = Node::threshold(0, q("5"), Node::leaf(1), Node::leaf(0));
    let m = Model::new(space.clone(), vec!["A".into(), "B".into()], Classifier::DecisionTree(DecisionTree::new(stump)))
        .unwrap();
    let p = ExplanationProblem::new(&m, point(&m, &["2", "3"])).unwrap();
    assert_eq!(m.class_name(p.class()), "B");
    let start = p.singleton(0);
    assert_eq!(inflate_ordinal_tree(&p, 0, &start, &Assignment::new()).unwrap(), interval(&m, 0, "[0,5)"));
    assert_eq!(inflate_ordinal_tree(&p, 1, &p.singleton(1), &p.pinned(&fs(&[1]))).unwrap(), ValueSet::full(space.domain(1)));

    // cells [0,3), [3,6), [6,10]: the middle cell flips the class
    let notch = Node::threshold(0, q("3"), Node::leaf(0), Node::threshold(0, q("6"), Node::leaf(1), Node::leaf(0)));
    let m = Model::new(space, vec!["c".into(), "d".into()], Classifier::DecisionTree(DecisionTree::new(notch))).unwrap();
    let p = ExplanationProblem::new(&m, point(&m, &["1", "0"])).unwrap();
    let e = inflate_ordinal_tree(&p, 0, &p.singleton(0), &Assignment::new()).unwrap();
    let expected = ValueSet::intervals(
        m.space().domain(0),
        vec![Interval::parse("[0,3)").unwrap(), Interval::parse("[6,10]").unwrap()],
    )
    .unwrap();
    assert_eq!(e, expected);
}

#[test]
fn discretization_examples() {
    let space = FeatureSpace::from_domains(vec![Domain::continuous(0, 10).unwrap()]).unwrap();
    let disc = Discretization::from_splits(&space, &[vec![q("2.5"), q("7")]]).unwrap();
    let cells: Vec<String> = disc.cells(0).iter().map(ToString::to_string).collect();
    assert_eq!(cells, ["[0,2.5)", "[2.5,7)", "[7,10]"]);

    let trees = vec![
        DecisionTree::new(Node::threshold(0, q("5"), Node::leaf(0), Node::leaf(1))),
        DecisionTree::new(Node::threshold(0, q("5"), Node::leaf(1), Node::leaf(0))),
    ];
    let disc = discretize(&Classifier::TreeEnsemble(TreeEnsemble::new(trees)), &space).unwrap();
    assert_eq!(disc.split_values(0), [q("5")]);
    assert_eq!(disc.cell_count(0), 2);
}

#[test]
fn shrink_examples() {
    let m = fixture("dl1.json");
    let p = ExplanationProblem::new(&m, point(&m, &["Junior", "Red"])).unwrap();
    let e = shrink_cxp(&p, &fs(&[1]), &[0, 1]).unwrap();
    assert_eq!(e.set(0).unwrap(), &labels(&m, 0, &["Adult"]));
    assert_eq!(e.kind, ExplanationKind::Contrastive);
    let e = shrink_cxp(&p, &fs(&[2]), &[0, 1]).unwrap();
    let g = e.set(1).unwrap();
    assert!(*g == labels(&m, 1, &["Silver"]) || *g == labels(&m, 1, &["White"]));
    assert!(matches!(shrink_cxp(&p, &FeatureSet::new(), &[0, 1]), Err(Error::NotContrastive(_))));
}

#[test]
fn complement_examples() {
    let m = fixture("dl1.json");
    assert_eq!(
        labels(&m, 0, &["Adult"]).complement(m.space().domain(0)).unwrap(),
        labels(&m, 0, &["Junior", "Senior"])
    );
    let m1 = fixture("m1.json");
    let d = m1.space().domain(0);
    let c = interval(&m1, 0, "[0,6.6]").complement(d).unwrap();
    assert_eq!(c, interval(&m1, 0, "(6.6,10]"));
    assert!(!c.contains(&Value::Num(q("6.6"))).unwrap());
    assert!(c.contains(&Value::Num(q("6.7"))).unwrap());
    assert!(c.contains(&Value::Num(q("10"))).unwrap());
    assert!(ValueSet::full(d).complement(d).is_none());
}

#[test]
fn membership_examples() {
    let m1 = fixture("m1.json");
    let d = m1.space().domain(0);
    assert!(interval(&m1, 0, "[0,6.6]").contains(&Value::Num(q("6.6"))).unwrap());
    let split = ValueSet::intervals(d, vec![Interval::parse("[0,2.5)").unwrap(), Interval::parse("[7,10]").unwrap()]).unwrap();
    assert!(!split.contains(&Value::Num(q("2.5"))).unwrap());
    assert!(split.contains(&Value::Label(0)).is_err());
    let m = fixture("dl1.json");
    assert!(!labels(&m, 1, &["Red", "Blue"]).contains(&Value::Label(2)).unwrap());
}
