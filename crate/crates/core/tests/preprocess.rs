mod common;

use std::collections::BTreeSet;

use common::{brute_force, close, random_suite};
use limid::generators::{gen_urn, UrnVariant};
use limid::lve::solve;
use limid::model::{DiagramParts, Variable, VarId};
use limid::ordering::min_fill_order;
use limid::preprocess::{find_barren, is_d_separated, minimize, nonrequisite_arcs, scale_utilities, unscale_meu};
use limid::Diagram;

fn set(d: &Diagram, names: &[&str]) -> BTreeSet<VarId> {
    names.iter().map(|n| d.lookup(n).unwrap()).collect()
}

#[test]
fn observed_urn_separation() {
    let d = gen_urn(3, UrnVariant::Observed).unwrap();
    assert!(is_d_separated(&d, &set(&d, &["D1"]), &set(&d, &["R"]), &set(&d, &["D2", "X1"])));
    assert!(!is_d_separated(&d, &set(&d, &["X0"]), &set(&d, &["R"]), &set(&d, &["D1"])));
}

#[test]
fn observed_urn_nonrequisite_arcs() {
    for n in 2..=4 {
        let d = gen_urn(n, UrnVariant::Observed).unwrap();
        let found: BTreeSet<(String, String)> = nonrequisite_arcs(&d)
            .into_iter()
            .map(|(a, b)| (d.name(a).to_string(), d.name(b).to_string()))
            .collect();
        let expected: BTreeSet<(String, String)> =
            (2..=n).map(|i| (format!("D{}", i - 1), format!("D{i}"))).collect();
        assert_eq!(found, expected);
        assert!(!found.contains(&("X0".to_string(), "D1".to_string())));
    }
}

#[test]
fn observed_urn_minimizes_to_the_chain() {
    let d = gen_urn(3, UrnVariant::Observed).unwrap();
    let m = minimize(&d).unwrap();
    let arcs: BTreeSet<(String, String)> = m
        .arcs()
        .map(|(a, b)| (m.name(a).to_string(), m.name(b).to_string()))
        .collect();
    let mut expected = BTreeSet::new();
    for i in 1..=3 {
        let (x, prev, dec) = (format!("X{i}"), format!("X{}", i - 1), format!("D{i}"));
        expected.insert((prev.clone(), x.clone()));
        expected.insert((dec.clone(), x));
        expected.insert((prev, dec));
    }
    expected.insert(("X3".to_string(), "R".to_string()));
    assert_eq!(arcs, expected);
}

#[test]
fn barren_node_appears_after_arc_removal() {
    // N feeds only a decision that cannot use it; once the arc goes, N is barren.
    let mut parts = DiagramParts::default();
    parts
        .add_variable(Variable::chance("N", &["a", "b"]))
        .add_variable(Variable::decision("D", &["x", "y"]))
        .add_variable(Variable::chance("C", &["a", "b"]))
        .add_variable(Variable::value("V"))
        .add_arc("N", "D")
        .add_arc("D", "V")
        .add_arc("C", "V")
        .set_cpt("N", vec![0.5, 0.5])
        .set_cpt("C", vec![0.3, 0.7])
        .set_utility("V", vec![0.1, 0.4, 0.9, 0.2]);
    let d = parts.build().unwrap();
    assert!(find_barren(&d).is_empty());
    let arcs = nonrequisite_arcs(&d);
    assert_eq!(arcs, vec![(d.lookup("N").unwrap(), d.lookup("D").unwrap())]);
    let m = minimize(&d).unwrap();
    assert!(m.lookup("N").is_none());
    assert!(m.lookup("C").is_some());
    assert!(close(brute_force(&m).0, brute_force(&d).0, 1e-12));
}

#[test]
fn minimize_preserves_meu() {
    for (seed, d) in random_suite(50, 1024) {
        let m = minimize(&d).unwrap();
        let (before, _) = brute_force(&d);
        let (after, _) = brute_force(&m);
        assert!(close(before, after, 1e-9), "seed {seed}: {before} vs {after}");
        assert!(m.len() <= d.len());
    }
}

fn stretch_utilities(d: &Diagram, factor: f64, shift: f64) -> Diagram {
    let mut parts = d.to_parts();
    for table in parts.utilities.values_mut() {
        for x in table.iter_mut() {
            *x = *x * factor + shift;
        }
    }
    parts.build().unwrap()
}

#[test]
fn scaling_roundtrip() {
    for (seed, d) in random_suite(30, 1024) {
        let wide = stretch_utilities(&d, 40.0, -7.5);
        let (scaled, info) = scale_utilities(&wide).unwrap();
        for v in scaled.value_vars() {
            assert!(scaled.utility(v).unwrap().values().iter().all(|&x| (0.0..=1.0).contains(&x)));
        }
        let (original, _) = brute_force(&wide);
        let (small, _) = brute_force(&scaled);
        assert!(close(unscale_meu(small, &info), original, 1e-9), "seed {seed}");
        let lve = solve(&wide, &min_fill_order(&wide)).unwrap().meu;
        assert!(close(lve, original, 1e-9), "seed {seed}: {lve} vs {original}");
    }
}
