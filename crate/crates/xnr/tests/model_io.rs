use xnr::model_io::{load_model, model_from_json, model_to_json, save_model, ModelError};
use xnr_core::classifiers::ViolationKind;
use xnr_core::testgen::{cnf_to_mlp, random_bdd, random_dt, random_mlp, random_perceptron, CnfFormula};
use xnr_core::{Classifier, Instance, Model};

fn generated() -> Vec<Model> {
    let mut out: Vec<Model> = Vec::new();
    for seed in 0..10 {
        let n = 1 + seed as usize % 7;
        out.push(random_bdd(n, 3 * n, seed).into());
        out.push(random_dt(n, 4, seed).into());
        out.push(random_perceptron(n, 5, seed).into());
        out.push(random_mlp(n, &[3, 2], 3, seed).into());
    }
    out.push(cnf_to_mlp(&CnfFormula::new(3, vec![vec![1, -2], vec![3]]).unwrap()).unwrap().into());
    out
}

#[test]
fn save_then_load_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for (i, m) in generated().into_iter().enumerate() {
        let path = dir.path().join(format!("m{i}.json"));
        save_model(&m, &path).unwrap();
        let back = load_model(&path).unwrap();
        assert_eq!(back.model(), &m);
        // Text form is stable too.
        assert_eq!(model_to_json(back.model()), model_to_json(&m));
    }
}

#[test]
fn loaded_models_classify_like_the_originals() {
    for m in generated() {
        let original = Classifier::new(m.clone()).unwrap();
        let back = model_from_json(&model_to_json(&m)).unwrap();
        let n = m.arity();
        for mask in 0..1u64 << n {
            let x = Instance::from_mask(mask, n);
            assert_eq!(back.classify(&x).unwrap(), original.classify(&x).unwrap());
        }
    }
}

#[test]
fn schema_examples() {
    let doc = r#"{"type": "bdd", "n": 2,
        "nodes": [{"id": 0, "label": {"feature": 1}}, {"id": 1, "label": {"feature": 2}},
                  {"id": 2, "label": {"class": 0}}, {"id": 3, "label": {"class": 1}}],
        "edges": [{"from": 0, "to": 1, "value": 1}, {"from": 0, "to": 2, "value": 0},
                  {"from": 1, "to": 3, "value": 1}, {"from": 1, "to": 2, "value": 0}],
        "root": 0}"#;
    let m = model_from_json(doc).unwrap();
    assert!(m.classify(&Instance::from_mask(0b11, 2)).unwrap().as_bool());

    let mlp = r#"{"type":"mlp","n":2,"layers":[
        {"weights":[["1/3","-2"],["2/3","1"]],"bias":["0","1/2"]},
        {"weights":[["3"],["-1"]],"bias":["-1"]}]}"#;
    assert_eq!(model_from_json(mlp).unwrap().arity(), 2);
}

#[test]
fn unknown_type_is_a_schema_error() {
    let e = model_from_json(r#"{"type":"svm","n":2}"#).unwrap_err();
    assert!(matches!(e, ModelError::Schema(_)), "{e}");
    let e = model_from_json(r#"{"type":"perceptron","n":1,"weights":["1"],"bias":"0","extra":1}"#).unwrap_err();
    assert!(matches!(e, ModelError::Schema(_)), "{e}");
    let e = model_from_json(r#"{"type":"perceptron","n":1,"weights":["x"],"bias":"0"}"#).unwrap_err();
    assert!(matches!(e, ModelError::Schema(_)), "{e}");
}

#[test]
fn two_roots_is_a_validation_error() {
    let doc = r#"{"type": "bdd", "n": 1,
        "nodes": [{"id": 0, "label": {"feature": 1}}, {"id": 1, "label": {"feature": 1}},
                  {"id": 2, "label": {"class": 0}}, {"id": 3, "label": {"class": 1}}],
        "edges": [{"from": 0, "to": 2, "value": 0}, {"from": 0, "to": 3, "value": 1},
                  {"from": 1, "to": 2, "value": 0}, {"from": 1, "to": 3, "value": 1}],
        "root": 0}"#;
    let e = model_from_json(doc).unwrap_err();
    assert!(e.violations().iter().any(|v| v.kind == ViolationKind::NotRooted), "{e}");
    assert_eq!(ViolationKind::NotRooted.name(), "not rooted");
}

#[test]
fn validation_names() {
    let labels = r#"{"type": "bdd", "n": 1,
        "nodes": [{"id": 0, "label": {"feature": 1}}, {"id": 1, "label": {"class": 1}}],
        "edges": [{"from": 0, "to": 1, "value": 1}, {"from": 0, "to": 1, "value": 1}],
        "root": 0}"#;
    let e = model_from_json(labels).unwrap_err();
    assert!(e.violations().iter().any(|v| v.kind == ViolationKind::EdgeLabels), "{e}");

    let wide = r#"{"type":"mlp","n":1,"layers":[{"weights":[["1","1"]],"bias":["0","0"]}]}"#;
    let e = model_from_json(wide).unwrap_err();
    assert!(e.violations().iter().any(|v| v.kind == ViolationKind::OutputWidth), "{e}");
}

#[test]
fn missing_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let e = load_model(&dir.path().join("absent.json")).unwrap_err();
    assert!(matches!(e, ModelError::Io { .. }));
}
