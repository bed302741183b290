mod common;

use common::{brute_force, close, expected_utility, from_strategy, random_suite};
use limid::fptas::solve_approx;
use limid::generators::{gen_partition, gen_urn, UrnVariant, ADD, REMOVE};
use limid::lve::{enumerate_policies, initialize, solve};
use limid::model::{DiagramParts, Policy, Variable};
use limid::ordering::{min_fill_order, reverse_topological_order, OrderHeuristic};
use limid::oracle::{brute_force_meu, enumerate_strategies};
use limid::{solve_with, ErrorKind, SolveOptions};
use num_bigint::BigUint;

/// A ten-state decision observing four ternary coins.
fn wide_decision() -> limid::Diagram {
    let mut parts = DiagramParts::default();
    let states: Vec<String> = (0..10).map(|i| format!("a{i}")).collect();
    let refs: Vec<&str> = states.iter().map(String::as_str).collect();
    for i in 0..4 {
        let c = format!("C{i}");
        parts
            .add_variable(Variable::chance(&c, &["0", "1", "2"]))
            .set_cpt(&c, vec![1.0 / 3.0; 3])
            .add_arc(&c, "D");
    }
    parts
        .add_variable(Variable::decision("D", &refs))
        .add_variable(Variable::value("V"))
        .add_arc("D", "V")
        .add_arc("C0", "V")
        .set_utility("V", (0..30).map(|k| if k % 11 == 0 { 1.0 } else { 0.0 }).collect());
    parts.build().unwrap()
}

#[test]
fn huge_policy_sets_are_refused_untransformed() {
    let d = wide_decision();
    let dec = d.lookup("D").unwrap();
    assert_eq!(d.policy_count(dec), BigUint::from(10u32).pow(81));
    let err = initialize(&d, u64::MAX).unwrap_err();
    assert_eq!(err.kind(), ErrorKind::Resource);
    let options = SolveOptions {
        transform: false,
        ..SolveOptions::default()
    };
    assert_eq!(solve_with(&d, &options).unwrap_err().kind(), ErrorKind::Resource);

}

#[test]
fn large_policy_sets_are_transformed() {
    // A three-state decision observing a ternary and a binary coin has 3^6
    // policies, above the threshold used here.
    let mut parts = DiagramParts::default();
    parts
        .add_variable(Variable::chance("C0", &["0", "1", "2"]))
        .set_cpt("C0", vec![0.2, 0.3, 0.5])
        .add_arc("C0", "D")
        .add_variable(Variable::chance("C1", &["0", "1"]))
        .set_cpt("C1", vec![0.6, 0.4])
        .add_arc("C1", "D")
        .add_variable(Variable::decision("D", &["a", "b", "c"]))
        .add_variable(Variable::value("V"))
        .add_arc("C0", "V")
        .add_arc("C1", "V")
        .add_arc("D", "V")
        .set_utility("V", (0..18).map(|k| ((k * 5) % 7) as f64 / 6.0).collect());
    let d = parts.build().unwrap();
    let options = SolveOptions {
        transform_threshold: 100,
        ..SolveOptions::default()
    };
    let r = solve_with(&d, &options).unwrap();
    assert_eq!(r.stats.transformed_decisions, 1);
    let direct = solve_with(&d, &SolveOptions::default()).unwrap();
    assert_eq!(direct.stats.transformed_decisions, 0);
    assert!(close(direct.meu, r.meu, 1e-12));
    let (oracle, _) = brute_force(&d);
    assert!(close(r.meu, oracle, 1e-12), "{} vs {oracle}", r.meu);
    assert!(close(expected_utility(&d, &from_strategy(&d, &r.strategy)), oracle, 1e-12));
}

#[test]
fn even_partition_value() {
    let d = gen_partition(&[1, 1], true).unwrap();
    let r = solve(&d, &min_fill_order(&d)).unwrap();
    assert!((r.meu - 2.0 / 3.0).abs() < 1e-12);
    let oracle = brute_force_meu(&d, 100).unwrap();
    assert!((oracle.meu - 2.0 / 3.0).abs() < 1e-12);

    let d = gen_partition(&[1, 1, 1], true).unwrap();
    let closed = 1.0 - ((-4.0f64 / 3.0).exp2() + (-2.0f64 / 3.0).exp2()) / 3.0;
    assert!((brute_force_meu(&d, 100).unwrap().meu - closed).abs() < 1e-12);
}

#[test]
fn second_participant_policies() {
    let d = gen_urn(2, UrnVariant::PreviousDecision).unwrap();
    let policies = enumerate_policies(&d, d.lookup("D2").unwrap());
    let expected: Vec<Policy> = [[ADD, ADD], [ADD, REMOVE], [REMOVE, ADD], [REMOVE, REMOVE]]
        .iter()
        .map(|c| Policy::new("D2", c.to_vec()))
        .collect();
    assert_eq!(policies, expected);
    assert_eq!(enumerate_strategies(&d, 100).unwrap().count(), 32);
    assert!(matches!(enumerate_strategies(&d, 31), Err(e) if e.kind() == ErrorKind::Resource));
}

#[test]
fn solver_matches_oracle_under_every_order() {
    for (seed, d) in random_suite(60, 2048) {
        let (oracle, _) = brute_force(&d);
        for heuristic in [OrderHeuristic::MinFill, OrderHeuristic::ReverseTopological, OrderHeuristic::Given] {
            let options = SolveOptions {
                order: heuristic,
                ..SolveOptions::default()
            };
            let r = solve_with(&d, &options).unwrap();
            assert!(close(r.meu, oracle, 1e-9), "seed {seed} {heuristic:?}: {} vs {oracle}", r.meu);
            let achieved = expected_utility(&d, &from_strategy(&d, &r.strategy));
            assert!(close(achieved, oracle, 1e-9), "seed {seed} {heuristic:?}");
            assert!(BigUint::from(r.stats.max_set_cardinality) <= r.stats.strategy_count);
        }
        let rt = solve(&d, &reverse_topological_order(&d)).unwrap();
        assert!(rt.stats.max_probability_deviation <= 1e-12);
    }
}

#[test]
fn library_oracle_agrees_with_reference() {
    for (seed, d) in random_suite(30, 512) {
        let (reference, _) = brute_force(&d);
        let lib = brute_force_meu(&d, 512).unwrap();
        assert!(close(lib.meu, reference, 1e-12), "seed {seed}");
        assert!(close(expected_utility(&d, &from_strategy(&d, &lib.strategy)), reference, 1e-12));
    }
}

#[test]
fn approximation_bounds() {
    for (seed, d) in random_suite(60, 2048) {
        let exact = solve(&d, &min_fill_order(&d)).unwrap().meu;
        for eps in [0.1, 0.01] {
            let r = solve_approx(&d, &min_fill_order(&d), eps).unwrap();
            assert_eq!(r.stats.epsilon, Some(eps));
            assert!(r.meu <= exact + 1e-9, "seed {seed} ε={eps}");
            assert!((1.0 + eps) * r.meu >= exact - 1e-9, "seed {seed} ε={eps}");
            let achieved = expected_utility(&d, &from_strategy(&d, &r.strategy));
            assert!(close(achieved, r.meu, 1e-9), "seed {seed} ε={eps}");
        }
    }
}

#[test]
fn approximation_rejects_bad_epsilon() {
    let d = gen_urn(1, UrnVariant::Blind).unwrap();
    for eps in [0.0, -1.0, f64::NAN, f64::INFINITY] {
        assert!(solve_approx(&d, &min_fill_order(&d), eps).is_err());
    }
}

#[test]
fn set_size_limit_aborts() {
    let d = gen_urn(4, UrnVariant::Blind).unwrap();
    let options = SolveOptions {
        max_set_size: Some(1),
        ..SolveOptions::default()
    };
    assert_eq!(solve_with(&d, &options).unwrap_err().kind(), ErrorKind::Resource);
}
