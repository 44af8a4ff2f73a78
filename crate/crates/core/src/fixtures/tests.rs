use num_traits::Zero;

use super::*;
use crate::propagation::{check_log_weight, PropagationLimits, Rational, VValue};
use crate::setsystem::{is_union_closed, Budget};

fn small() -> Section6Bundle {
    section6_build(
        Section6Config {
            columns: 8,
            r_columns: 8,
        },
        &Budget::default(),
    )
    .unwrap()
}

#[test]
fn counter_representations() {
    let ex = example_2_13(4, 5, &Budget::default()).unwrap();
    assert_eq!(ex.s.len(), 3 * 4 + 7 * 3 + 15 * 2);
    assert_eq!(ex.s.len(), ex.s_prime.len());
    let report = verify_example_2_13(&ex, &Budget::default()).unwrap();
    assert!(report.pass(), "{report:?}");
    assert!(example_2_13(4, 3, &Budget::default()).is_err());
    assert!(example_2_13(1, 3, &Budget::default()).is_err());
}

#[test]
fn counter_union_rule() {
    let ex = example_2_13(3, 4, &Budget::default()).unwrap();
    let g = ex.s.ground();
    let x = g.set_from_labels(["(2,1)", "(3,1)", "(3,2)", "(3,3)", "1", "2", "3"]).unwrap();
    let y = g.set_from_labels(["(3,2)", "1", "2", "3", "4"]).unwrap();
    let i = ex.s.index_of(&x).unwrap();
    let j = ex.s.index_of(&y).unwrap();
    assert_eq!((ex.params[i].1, ex.params[i].2), (2, 3));
    assert_eq!((ex.params[j].1, ex.params[j].2), (3, 4));
    let u = ex.s.index_of(&x.union(&y)).unwrap();
    assert_eq!((ex.params[u].1, ex.params[u].2), (2, 4));
    // the level-1 point never appears
    let first = g.set_from_labels(["(1,1)"]).unwrap();
    assert!(ex.s.members().all(|m| m.is_disjoint(&first)));
}

#[test]
fn tile_generators() {
    let b = small();
    assert_eq!(b.a.len(), 2);
    assert_eq!(b.s.len(), (1 << 10) - 1);
    assert_eq!(b.r.len(), 3usize.pow(8) - 1);
    let u = &b.universe;
    for x in &b.x {
        assert_eq!(lambda_star(u, x), 1);
    }
    for z in b.b.iter().chain(&b.g) {
        assert_eq!(lambda_star(u, z), 0);
    }
    assert_eq!(b.b[1], u.set((4..=8).map(|k| (1, k))));
    assert!(is_union_closed(&b.t).is_closed());
    assert!(check_log_weight(&b.lambda).is_ok());
    assert!(check_log_weight(&b.lambda_t).is_ok());
}

#[test]
fn truncation_is_a_homomorphism() {
    let b = small();
    let star = b.universe.star();
    for i in 0..b.s.len() {
        let x = b.s.member(i);
        assert_eq!(b.t.member(b.q[i]), x.intersection(&star));
        assert_eq!(b.lambda.value(i), b.lambda_t.value(b.q[i]));
        for j in i..b.s.len() {
            let u = b.s.index_of(&x.union(&b.s.member(j))).unwrap();
            assert_eq!(b.t.member(b.q[u]), b.t.member(b.q[i]).union(&b.t.member(b.q[j])));
        }
    }
}

#[test]
fn factorizations() {
    let b = small();
    let gens: Vec<_> = b.a.iter().chain(&b.x).cloned().collect();
    assert_eq!(factorization(&b.s, &gens), Factorization::Unique);
    for i in 0..b.s.len() {
        let (_, columns) = factor_counts(&b, i);
        assert_eq!(b.lambda.value(i), Rational::from_integer(columns as i64));
    }
    let r_gens: Vec<_> = b.x.iter().chain(&b.g).cloned().collect();
    match factorization(&b.r, &r_gens) {
        Factorization::Ambiguous { redundant, .. } => assert!(b.g.contains(&redundant)),
        other => panic!("expected an ambiguous member, got {other:?}"),
    }
    assert!(matches!(
        factorization(&b.t, &gens),
        Factorization::NotGenerated { .. }
    ));
}

#[test]
fn lemma_6_1_small() {
    let b = small();
    for c in 1..=2 {
        let r = verify_lemma_6_1(&b, 2, c).unwrap();
        assert!(r.hypothesis && r.contained, "{r:?}");
    }
    let r = verify_lemma_6_1(&b, 2, 3).unwrap();
    assert!(!r.hypothesis && !r.contained);
    assert!(b.b[1].is_subset(r.offending.as_ref().unwrap()));
    assert!(verify_lemma_6_1(&b, 1, 1).unwrap().contained);
    assert!(verify_lemma_6_1(&b, 3, 1).is_err());
    assert!(verify_lemma_6_1(&b, 2, 0).is_err());
}

#[test]
fn section6_bound_small() {
    let b = small();
    let row = verify_section6_bounds(&b, 2).unwrap();
    assert!(row.family_in_w1 && row.lambda_b.is_zero());
    assert_eq!(row.v_exact, VValue::Finite(Rational::from_integer(3)));
    assert!(row.pass);
    let row = verify_section6_bounds(&b, 1).unwrap();
    assert!(row.pass);
}

#[test]
fn l_propagation_small() {
    let b = small();
    let limits = PropagationLimits {
        max_subset_size: 3,
        max_subsets: 20_000,
    };
    for which in [Which::S, Which::R] {
        for level in [0, 1] {
            let level = Rational::from_integer(level);
            let r = verify_l_propagation(&b, which, level, &limits).unwrap();
            assert!(r.pass, "{which:?} at {level}: {:?}", r.report);
        }
    }
}
