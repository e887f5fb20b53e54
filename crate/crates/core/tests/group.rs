mod common;

use common::{element, word};
use hhg_core::group::{
    cayley_ball, enumerate_generating_sets, generates_at_radius, growth_rate, schreier_generators,
    GeneratingSet, GroupModel, GroupSpec,
};
use proptest::prelude::*;

fn models() -> Vec<GroupModel> {
    vec![
        GroupModel::free(2),
        GroupModel::free_abelian(2),
        GroupModel::direct_product(vec![
            GroupSpec::Free { rank: 2 },
            GroupSpec::FreeAbelian { rank: 1 },
        ])
        .unwrap(),
        GroupModel::free_product(vec![
            GroupSpec::Free { rank: 2 },
            GroupSpec::FreeAbelian { rank: 1 },
        ])
        .unwrap(),
    ]
}

proptest! {
    #[test]
    fn group_laws(i in 0usize..4, s1: u64, s2: u64, s3: u64) {
        let m = &models()[i];
        let (x, y, z) = (element(m, s1, 6), element(m, s2, 6), element(m, s3, 6));
        let xy_z = m.multiply(&m.multiply(&x, &y).unwrap(), &z).unwrap();
        let x_yz = m.multiply(&x, &m.multiply(&y, &z).unwrap()).unwrap();
        prop_assert!(m.equal(&xy_z, &x_yz));
        prop_assert!(m.multiply(&x, &m.inverse(&x)).unwrap().is_empty());
        let nf = m.normal_form(&x).unwrap();
        prop_assert_eq!(m.normal_form(&nf).unwrap(), nf.clone());
        prop_assert_eq!(m.parse_word(&m.format_word(&nf)).unwrap(), nf);
    }

    #[test]
    fn word_metric_is_a_metric(i in 0usize..4, s1: u64, s2: u64, s3: u64) {
        let m = &models()[i];
        let (x, y, z) = (element(m, s1, 5), element(m, s2, 5), element(m, s3, 5));
        prop_assert_eq!(m.distance(&x, &y), m.distance(&y, &x));
        prop_assert!(m.distance(&x, &z) <= m.distance(&x, &y) + m.distance(&y, &z));
        prop_assert_eq!(m.distance(&x, &x), 0);
    }

    #[test]
    fn powers_add(i in 0usize..4, s: u64, p in -4i64..=4, q in -4i64..=4) {
        let m = &models()[i];
        let g = element(m, s, 4);
        let lhs = m.multiply(&m.power(&g, p), &m.power(&g, q)).unwrap();
        prop_assert!(m.equal(&lhs, &m.power(&g, p + q)));
    }
}

#[test]
fn ball_counts_are_monotone_and_submultiplicative() {
    for m in models() {
        let x = GeneratingSet::standard(&m, true);
        let c = cayley_ball(&m, &x, 6).unwrap().counts;
        for a in 0..=6 {
            for b in 0..=6 - a {
                assert!(c[a + b] <= c[a] * c[b]);
            }
        }
        assert!(c.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn free_product_growth() {
    // F₂ * ℤ is free of rank 3.
    let fp = &models()[3];
    let f3 = GroupModel::free(3);
    let a = cayley_ball(fp, &GeneratingSet::standard(fp, true), 6).unwrap();
    let b = cayley_ball(&f3, &GeneratingSet::standard(&f3, true), 6).unwrap();
    assert_eq!(a.counts, b.counts);
}

#[test]
fn growth_rate_sequence_for_free_group_decreases_to_log_three() {
    let m = GroupModel::free(2);
    let est = growth_rate(&m, &GeneratingSet::standard(&m, true), 8).unwrap();
    assert!(est.is_nonincreasing());
    assert!(est.lambda > 3f64.ln());
}

#[test]
fn schreier_generators_have_bounded_length() {
    let m = GroupModel::free(2);
    let x = GeneratingSet::standard(&m, false);
    for d in 1..=4 {
        let member = |w: &hhg_core::group::Word| {
            hhg_core::group::exponent_sum(w, 0).rem_euclid(d as i64) == 0
        };
        let table = schreier_generators(&m, &x, &member, d).unwrap();
        assert_eq!(table.index, d);
        for (w, &l) in table
            .generators
            .elements()
            .iter()
            .zip(&table.generator_lengths)
        {
            assert!(member(w));
            assert!(l < 2 * d);
        }
    }
}

#[test]
fn generating_set_enumeration() {
    let m = GroupModel::free(2);
    let sets: Vec<GeneratingSet> = enumerate_generating_sets(&m, 2, 1, 6).collect();
    let encoded: Vec<String> = sets.iter().map(|x| x.encode(&m)).collect();
    assert!(encoded.iter().any(|e| e == "{1,a,b}"));
    let unique: std::collections::BTreeSet<&String> = encoded.iter().collect();
    assert_eq!(unique.len(), encoded.len());
    for x in &sets {
        assert!(generates_at_radius(&m, x, 6).unwrap());
    }
    let not = GeneratingSet::new(&m, &[word(&m, "a"), word(&m, "bb")], false).unwrap();
    assert!(!generates_at_radius(&m, &not, 6).unwrap());
}
