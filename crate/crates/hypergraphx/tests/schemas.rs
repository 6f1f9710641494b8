//! The JSON shapes emitted by the reporting layer must match the schemas
//! shipped in docs/, across graphs that exercise every optional branch
//! (null invariants, merge witnesses, conjectured separations, kappa
//! tables, budget exhaustion).

use hypergraphx::report::{analysis_json, analyze, RulesConfig};
use hypergraphx::verify::{verification_json, verify_claims};
use hypergraphx::{build_yn, build_xn, size_report_json, Budget, TopoGraph};
use serde_json::{json, Value};

fn load_schema(name: &str) -> Value {
    let path = format!("{}/../../docs/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("cannot read schema {path}: {e}"));
    serde_json::from_str(&text).unwrap()
}

fn assert_valid(schema: &Value, instance: &Value, what: &str) {
    let validator = jsonschema::validator_for(schema).expect("schema itself must compile");
    let errors: Vec<String> = validator
        .iter_errors(instance)
        .map(|e| format!("{} at {}", e, e.instance_path()))
        .collect();
    assert!(errors.is_empty(), "{what} violates schema: {errors:#?}");
}

fn triod() -> TopoGraph {
    TopoGraph::new(
        &["c", "t1", "t2", "t3"],
        &[("l1", "c", "t1"), ("l2", "c", "t2"), ("l3", "c", "t3")],
    )
    .unwrap()
}

#[test]
fn analysis_reports_validate_against_shipped_schema() {
    let schema = load_schema("analysis-report.schema.json");
    let circle = TopoGraph::new(&["a"], &[("c", "a", "a")]).unwrap();
    let arc = TopoGraph::new(&["a", "b"], &[("e", "a", "b")]).unwrap();
    let example = hypergraphx::build_example().unwrap().graph;
    let x6 = build_xn(6).unwrap().graph;
    let y4 = build_yn(4).unwrap().graph;

    let mut kappa_on = RulesConfig::extended();
    kappa_on.kappa = true;
    let mut kappa_starved = kappa_on.clone();
    kappa_starved.budget = Budget::with_subdivided_edge_cap(0);

    let spider = triod();
    let cases: Vec<(&str, &TopoGraph, RulesConfig)> = vec![
        ("circle", &circle, RulesConfig::extended()),
        ("arc", &arc, RulesConfig::extended()),
        ("example extended", &example, RulesConfig::extended()),
        ("x6 paper", &x6, RulesConfig::paper()),
        ("x6 extended", &x6, RulesConfig::extended()),
        ("y4 extended", &y4, RulesConfig::extended()),
        ("triod with kappa", &spider, kappa_on),
        ("x6 kappa over budget", &x6, kappa_starved),
    ];
    for (what, graph, config) in &cases {
        let report = analyze(graph, config).unwrap();
        assert_valid(&schema, &analysis_json(&report), what);
    }

    // The documented sizeReport definition must also accept the size
    // object on its own.
    let size_schema = json!({
        "$ref": "#/$defs/sizeReport",
        "$defs": schema["$defs"].clone(),
    });
    let report = analyze(&example, &RulesConfig::extended()).unwrap();
    assert_valid(&size_schema, &size_report_json(&report.size), "example size report");
}

#[test]
fn verification_report_validates_against_shipped_schema() {
    let schema = load_schema("verification-report.schema.json");
    let report = verify_claims(&RulesConfig::extended());
    assert_valid(&schema, &verification_json(&report), "extended verification run");
}

#[test]
fn schemas_reject_malformed_reports() {
    let analysis_schema = load_schema("analysis-report.schema.json");
    let verification_schema = load_schema("verification-report.schema.json");
    let example = hypergraphx::build_example().unwrap().graph;
    let good = analysis_json(&analyze(&example, &RulesConfig::extended()).unwrap());
    let analysis_validator = jsonschema::validator_for(&analysis_schema).unwrap();

    let mut zero_degree = good.clone();
    zero_degree["degree"] = json!(0);
    assert!(!analysis_validator.is_valid(&zero_degree));

    let mut missing_size = good.clone();
    missing_size.as_object_mut().unwrap().remove("size");
    assert!(!analysis_validator.is_valid(&missing_size));

    let mut bad_label = good.clone();
    bad_label["orbits"][0]["representatives"][0] = json!("midpoint:l");
    assert!(!analysis_validator.is_valid(&bad_label));

    let mut bad_rule = good;
    bad_rule["size"]["merges"][0]["rule"] = json!("osmosis");
    assert!(!analysis_validator.is_valid(&bad_rule));

    let verification_validator = jsonschema::validator_for(&verification_schema).unwrap();
    let bad_status = json!({
        "claims": [{"name": "n", "expected": "1", "computed": "1", "status": "sorta"}],
        "internal_errors": [],
        "passed": true,
    });
    assert!(!verification_validator.is_valid(&bad_status));
}
