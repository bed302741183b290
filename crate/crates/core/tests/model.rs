mod common;

use common::{close, random_suite};
use limid::generators::{gen_partition, gen_urn, UrnVariant, ADD, REMOVE};
use limid::model::{expected_utility, joint_distribution, Factor, Policy, Scope, Strategy, VarId};
use limid::oracle::naive_expected_utility;
use limid::Diagram;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn scope(pairs: &[(u32, usize)]) -> Scope {
    Scope::new(pairs.iter().map(|&(v, c)| (VarId(v), c))).unwrap()
}

fn random_factor(rng: &mut ChaCha8Rng, s: &Scope) -> Factor {
    Factor::new(s.clone(), (0..s.size()).map(|_| rng.gen::<f64>()).collect()).unwrap()
}

/// Value of `f` at a full assignment indexed by variable id.
fn at(f: &Factor, full: &[usize]) -> f64 {
    let local: Vec<usize> = f.scope().vars().iter().map(|v| full[v.index()]).collect();
    f.value_at(&local)
}

fn all_assignments(cards: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &c in cards {
        out = out
            .into_iter()
            .flat_map(|a| {
                (0..c).map(move |s| {
                    let mut b = a.clone();
                    b.push(s);
                    b
                })
            })
            .collect();
    }
    out
}

#[test]
fn scalar_product() {
    let f = Factor::constant(0.3);
    let g = Factor::constant(0.5);
    assert!((f.product(&g).unwrap().values()[0] - 0.15).abs() < 1e-15);
}

#[test]
fn product_and_sum_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let cards = [2, 3, 2];
    for _ in 0..50 {
        let f = random_factor(&mut rng, &scope(&[(0, 2), (1, 3)]));
        let g = random_factor(&mut rng, &scope(&[(2, 2), (0, 2)]));
        let prod = f.product(&g).unwrap();
        let sum = f.sum(&g).unwrap();
        assert_eq!(prod.scope().vars(), &[VarId(0), VarId(1), VarId(2)]);
        for a in all_assignments(&cards) {
            assert!((at(&prod, &a) - at(&f, &a) * at(&g, &a)).abs() < 1e-15);
            assert!((at(&sum, &a) - (at(&f, &a) + at(&g, &a))).abs() < 1e-15);
        }
    }
}

#[test]
fn shared_binary_variable() {
    let s = scope(&[(0, 2)]);
    let f = Factor::new(s.clone(), vec![0.2, 0.7]).unwrap();
    let g = Factor::new(s, vec![0.5, 0.4]).unwrap();
    assert_eq!(f.product(&g).unwrap().values(), &[0.2 * 0.5, 0.7 * 0.4]);
}

#[test]
fn ternary_marginal_matches_explicit_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let f = random_factor(&mut rng, &scope(&[(0, 3), (1, 3)]));
    let over_x = f.sum_marginal(&[VarId(1)]);
    let over_y = f.sum_marginal(&[VarId(0)]);
    for x in 0..3 {
        let expected: f64 = (0..3).map(|y| f.value_at(&[x, y])).sum();
        assert!((over_x.value_at(&[x]) - expected).abs() < 1e-15);
    }
    for y in 0..3 {
        let expected: f64 = (0..3).map(|x| f.value_at(&[x, y])).sum();
        assert!((over_y.value_at(&[y]) - expected).abs() < 1e-15);
    }
    let total = f.sum_marginal(&[VarId(0), VarId(1)]);
    assert!((total.values()[0] - f.values().iter().sum::<f64>()).abs() < 1e-14);
}

#[test]
fn second_participant_policy_table() {
    let d = gen_urn(2, UrnVariant::PreviousDecision).unwrap();
    // After an add the second participant removes, after a remove it adds.
    let f = Policy::new("D2", vec![REMOVE, ADD]).to_factor(&d).unwrap();
    assert_eq!(f.scope().vars(), &[d.lookup("D1").unwrap(), d.lookup("D2").unwrap()]);
    assert_eq!(f.values(), &[0.0, 1.0, 1.0, 0.0]);
}

#[test]
fn policy_table_places_one_per_configuration() {
    let d = gen_urn(1, UrnVariant::Observed).unwrap();
    let f = Policy::new("D1", vec![ADD, REMOVE, REMOVE]).to_factor(&d).unwrap();
    assert_eq!(f.values().iter().filter(|&&x| x == 1.0).count(), 3);
    assert_eq!(f.values().iter().filter(|&&x| x == 0.0).count(), 3);
    assert!(Policy::new("D1", vec![ADD, 2, ADD]).to_factor(&d).is_err());
    assert!(Policy::new("D1", vec![ADD]).to_factor(&d).is_err());
}

#[test]
fn blind_urn_joint() {
    let d = gen_urn(1, UrnVariant::Blind).unwrap();
    let s = Strategy::from_policies([Policy::new("D1", vec![REMOVE])]);
    let joint = joint_distribution(&d, &s).unwrap();
    let (x0, d1, x1) = (d.lookup("X0").unwrap(), d.lookup("D1").unwrap(), d.lookup("X1").unwrap());
    let mut full = vec![0; d.len()];
    let mut mass = 0.0;
    for b0 in 0..3 {
        for act in 0..2 {
            for b1 in 0..3 {
                full[x0.index()] = b0;
                full[d1.index()] = act;
                full[x1.index()] = b1;
                // Remove from 0 refills with two balls, otherwise one ball goes.
                let next = if b0 == 0 { 2 } else { b0 - 1 };
                let expected = if act == REMOVE && b1 == next { 1.0 / 3.0 } else { 0.0 };
                assert!((at(&joint, &full) - expected).abs() < 1e-15);
                mass += at(&joint, &full);
            }
        }
    }
    assert!((mass - 1.0).abs() < 1e-15);
}

fn partition_strategy(d: &Diagram, chosen: &[bool]) -> Strategy {
    Strategy::from_policies(
        d.decision_vars()
            .into_iter()
            .zip(chosen)
            .map(|(v, &c)| Policy::new(d.name(v), vec![if c { 0 } else { 1 }])),
    )
}

#[test]
fn partition_trajectory_probability() {
    let numbers = [2u64, 1, 1];
    let d = gen_partition(&numbers, true).unwrap();
    let t: Vec<f64> = numbers.iter().map(|&x| (-(x as f64) / 2.0).exp2()).collect();
    let s = partition_strategy(&d, &[true; 3]);
    let joint = joint_distribution(&d, &s).unwrap();
    // Staying at `x` all the way under the all-d1 strategy.
    let mut full = vec![0usize; d.len()];
    for v in d.decision_vars() {
        full[v.index()] = 0;
    }
    let expected = t.iter().product::<f64>() / 3.0;
    assert!((at(&joint, &full) - expected).abs() < 1e-15);
}

#[test]
fn partition_closed_form_per_strategy() {
    let numbers = [3u64, 1, 2];
    let d = gen_partition(&numbers, true).unwrap();
    let t: Vec<f64> = numbers.iter().map(|&x| (-(x as f64) / 3.0).exp2()).collect();
    for mask in 0..8u32 {
        let chosen: Vec<bool> = (0..3).map(|i| mask >> i & 1 == 1).collect();
        let inside: f64 = (0..3).filter(|&i| chosen[i]).map(|i| t[i]).product();
        let outside: f64 = (0..3).filter(|&i| !chosen[i]).map(|i| t[i]).product();
        let closed = 1.0 - (inside + outside) / 3.0;
        let eu = expected_utility(&d, &partition_strategy(&d, &chosen)).unwrap();
        assert!((eu - closed).abs() < 1e-12, "{chosen:?}: {eu} vs {closed}");
    }
}

#[test]
fn expected_utility_matches_independent_evaluation() {
    for (seed, d) in random_suite(40, 256) {
        let mut checked = 0;
        common::for_each_strategy(&d, |choices| {
            if checked < 8 {
                let s = common::to_strategy(&d, choices);
                let lib = expected_utility(&d, &s).unwrap();
                let naive = naive_expected_utility(&d, &s).unwrap();
                let reference = common::expected_utility(&d, choices);
                assert!(close(lib, reference, 1e-12), "seed {seed}");
                assert!(close(naive, reference, 1e-12), "seed {seed}");
                checked += 1;
            }
        });
    }
}
