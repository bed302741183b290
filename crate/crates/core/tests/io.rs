mod common;

use common::random_suite;
use limid::generators::{gen_sat, gen_urn, Cnf, UrnVariant};
use limid::io::{format_g12, parse_diagram, parse_strategy, serialize_diagram, serialize_strategy, StatsDocument};
use limid::model::Strategy;
use limid::transform::make_decisions_parentless;
use limid::{solve_with, ErrorKind, SolveOptions};

#[test]
fn diagrams_roundtrip_bit_exactly() {
    for (seed, d) in random_suite(40, 4096) {
        let text = serialize_diagram(&d);
        let back = parse_diagram(&text).unwrap();
        assert_eq!(serialize_diagram(&back), text, "seed {seed}");
        for v in d.ids() {
            if let Some(t) = d.cpt(v) {
                let u = back.cpt(back.lookup(d.name(v)).unwrap()).unwrap();
                assert_eq!(t.values(), u.values());
            }
        }
    }
    let sat = gen_sat(&Cnf::new(2, vec![vec![1, 2], vec![-1]]).unwrap(), 2).unwrap();
    let text = serialize_diagram(&sat);
    assert_eq!(serialize_diagram(&parse_diagram(&text).unwrap()), text);
}

#[test]
fn transformed_documents_parse() {
    let d = gen_urn(2, UrnVariant::Observed).unwrap();
    let (t, _) = make_decisions_parentless(&d).unwrap();
    let text = serialize_diagram(&t);
    assert!(text.contains("\"strict_normalization\": false"));
    let back = parse_diagram(&text).unwrap();
    assert!(!back.strict_normalization());
    assert_eq!(serialize_diagram(&back), text);

    // The same tables are rejected when normalization is enforced.
    let strict = text.replace("\"strict_normalization\": false", "\"strict_normalization\": true");
    assert_eq!(parse_diagram(&strict).unwrap_err().kind(), ErrorKind::Input);
}

#[test]
fn strategies_roundtrip() {
    let d = gen_urn(3, UrnVariant::Observed).unwrap();
    let r = solve_with(&d, &SolveOptions::default()).unwrap();
    let text = serialize_strategy(&d, &r.strategy).unwrap();
    let back: Strategy = parse_strategy(&d, &text).unwrap();
    assert_eq!(back, r.strategy);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    // D2 observes D1 and X1; labels join the parent states in declaration order.
    assert!(doc["policies"]["D2"].get("add,0").is_some());
    assert!(doc["policies"]["D1"].get("2").is_some());
}

#[test]
fn malformed_documents_name_the_problem() {
    let cases = [
        (r#"{"variables": [{"id": "X", "kind": "chance", "states": ["a"]}], "cpts": {"X": [0.5]}}"#, "X"),
        (
            r#"{"variables": [{"id": "X", "kind": "chance", "states": ["a", "b"]}], "cpts": {"X": [0.5]}}"#,
            "cpts.X",
        ),
        (r#"{"variables": [], "colour": 1}"#, "colour"),
        (
            r#"{"variables": [{"id": "V", "kind": "value", "states": ["a"]}], "utilities": {"V": [1]}}"#,
            "variables[0]",
        ),
    ];
    for (text, needle) in cases {
        let err = parse_diagram(text).unwrap_err();
        assert_eq!(err.kind(), ErrorKind::Input, "{text}");
        assert!(err.to_string().contains(needle), "{err} lacks {needle}");
    }
}

#[test]
fn stats_document_fields() {
    let d = gen_urn(2, UrnVariant::PreviousDecision).unwrap();
    let options = SolveOptions {
        epsilon: Some(0.1),
        ..SolveOptions::default()
    };
    let r = solve_with(&d, &options).unwrap();
    let json: serde_json::Value = serde_json::from_str(&StatsDocument::new(r.meu, &r.stats).to_json()).unwrap();
    for key in [
        "meu",
        "width",
        "order",
        "max_set_cardinality",
        "per_step_cardinalities",
        "strategy_count",
        "wall_time_ms",
        "epsilon",
    ] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
    assert_eq!(json["strategy_count"], "32");
}

#[test]
fn twelve_significant_digits() {
    assert_eq!(format_g12(2.0 / 3.0), "0.666666666667");
    assert_eq!(format_g12(1.0), "1");
    assert_eq!(format_g12(0.74), "0.74");
    assert_eq!(format_g12(1.5e-7), "1.5e-07");
}
