mod common;

use common::{element, structure, word};
use hhg_core::coordinates::{
    distance_formula_sum, fit_distance_formula, is_consistent, product_decomposition,
    project_tuple, quasi_line_detect, realize, reexpand, restrict_to_big, QUASI_LINE_Q_MAX,
    QUASI_LINE_RADIUS,
};
use hhg_core::space::SpaceModel;
use proptest::prelude::*;

const FAST: [&str; 4] = ["free2", "z2", "f2xZ", "f2xf2"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Raising the threshold only drops terms.
    #[test]
    fn thresholded_sum_is_monotone(i in 0usize..FAST.len(), s1: u64, s2: u64, t in 0.0f64..4.0, dt in 0.0f64..4.0) {
        let s = structure(FAST[i]);
        let m = s.group();
        let (x, y) = (element(m, s1, 6), element(m, s2, 6));
        let lo = distance_formula_sum(&s, &x, &y, t).unwrap();
        let hi = distance_formula_sum(&s, &x, &y, t + dt).unwrap();
        prop_assert!(hi.total <= lo.total + 1e-9);
        prop_assert!(hi.contributions.len() <= lo.contributions.len());
        prop_assert!(lo.contributions.iter().all(|c| c.distance > t));
    }

    /// Projection tuples are consistent and realized by their element.
    #[test]
    fn projection_tuples_round_trip(i in 0usize..FAST.len(), seed: u64) {
        let s = structure(FAST[i]);
        let g = element(s.group(), seed, 5);
        let tuple = project_tuple(&s, &g);
        prop_assert!(is_consistent(&s, &tuple, s.constants().kappa0).unwrap().consistent);
        let r = realize(&s, &tuple, 5).unwrap();
        prop_assert!(r.elements.contains(&g));
    }

    /// The word metric and the unthresholded sum agree on ℓ¹ products.
    #[test]
    fn distance_formula_is_exact_on_products(seed1: u64, seed2: u64) {
        let s = structure("f2xZ");
        let m = s.group();
        let (x, y) = (element(m, seed1, 6), element(m, seed2, 6));
        let sum = distance_formula_sum(&s, &x, &y, 0.0).unwrap();
        prop_assert!((sum.total - m.distance(&x, &y) as f64).abs() < 1e-9);
    }
}

#[test]
fn fit_reports_small_constants_on_products() {
    for name in FAST {
        let s = structure(name);
        let m = s.group();
        let pairs: Vec<_> = (0..40)
            .map(|k| (element(m, 2 * k, 6), element(m, 2 * k + 1, 6)))
            .collect();
        let fit = fit_distance_formula(&s, &pairs, 0.0).unwrap();
        assert!(fit.k <= 1.5 && fit.c <= 2.0, "{name}: {fit:?}");
    }
    assert!(fit_distance_formula(&structure("z"), &[], 0.0).is_err());
}

#[test]
fn decomposition_blocks_are_mutually_orthogonal() {
    for (name, blocks) in [("free2", 1), ("f2xZ", 2), ("f2xf2", 2), ("z2", 2), ("z", 1)] {
        let s = structure(name);
        let d = product_decomposition(&s).unwrap();
        assert_eq!(d.blocks.len(), blocks, "{name}");
        for (i, a) in d.blocks.iter().enumerate() {
            for b in &d.blocks[i + 1..] {
                for u in a {
                    for v in b {
                        assert!(s.orthogonal(u, v), "{name}");
                    }
                }
            }
        }
    }
}

#[test]
fn quasi_lines_are_detected() {
    assert!(
        quasi_line_detect(&SpaceModel::line(), QUASI_LINE_RADIUS, QUASI_LINE_Q_MAX)
            .unwrap()
            .is_some()
    );
    let tree = SpaceModel::cayley_tree(hhg_core::group::GroupModel::free(2)).unwrap();
    assert!(
        quasi_line_detect(&tree, QUASI_LINE_RADIUS, QUASI_LINE_Q_MAX)
            .unwrap()
            .is_none()
    );
}

#[test]
fn restriction_and_reexpansion() {
    let s = structure("f2xZ");
    let m = s.group();
    let g = word(m, "abc");
    let tuple = project_tuple(&s, &g);
    let restricted = restrict_to_big(&s, &tuple, 0.0).unwrap();
    assert!(restricted.entries.len() <= tuple.entries.len());
    let back = reexpand(&s, &restricted, &g);
    assert_eq!(back.entries, tuple.entries);
}
