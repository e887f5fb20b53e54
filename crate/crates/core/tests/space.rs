mod common;

use common::element;
use hhg_core::group::GroupModel;
use hhg_core::space::{four_point_delta, Point, SpaceModel};
use proptest::prelude::*;

fn tree() -> (GroupModel, SpaceModel) {
    let m = GroupModel::free(2);
    (m.clone(), SpaceModel::cayley_tree(m).unwrap())
}

proptest! {
    #[test]
    fn tree_geodesics(s1: u64, s2: u64) {
        let (m, t) = tree();
        let (p, q) = (Point::word(element(&m, s1, 8)), Point::word(element(&m, s2, 8)));
        let path = t.geodesic(&p, &q).unwrap();
        prop_assert_eq!(path.len() as f64, t.distance(&p, &q) + 1.0);
        prop_assert_eq!(path.first(), Some(&p));
        prop_assert_eq!(path.last(), Some(&q));
        for w in path.windows(2) {
            prop_assert_eq!(t.distance(&w[0], &w[1]), 1.0);
        }
    }

    #[test]
    fn gromov_products_are_bounded(s1: u64, s2: u64, s3: u64) {
        let (m, t) = tree();
        let o = Point::word(element(&m, s1, 6));
        let (p, q) = (Point::word(element(&m, s2, 6)), Point::word(element(&m, s3, 6)));
        let g = t.gromov_product(&o, &p, &q);
        prop_assert!(g >= 0.0);
        prop_assert!(g <= t.distance(&o, &p).min(t.distance(&o, &q)));
    }

    #[test]
    fn line_distance(a in -50i64..50, b in -50i64..50) {
        let l = SpaceModel::line();
        prop_assert_eq!(l.distance(&Point::line(a), &Point::line(b)), (a - b).abs() as f64);
    }
}

#[test]
fn hyperbolicity_constants() {
    let (_, t) = tree();
    assert_eq!(four_point_delta(&t, 30, 0), 0.0);
    let c6 = SpaceModel::explicit_graph(6, &[[0, 1], [1, 2], [2, 3], [3, 4], [4, 5], [5, 0]], 0)
        .unwrap();
    assert!(four_point_delta(&c6, 6, 0) > 0.0);
}

#[test]
fn bounded_spaces() {
    let b = SpaceModel::bounded_point();
    assert!(b.is_bounded());
    assert_eq!(b.ball_points(3).unwrap().len(), 1);
    assert!(!SpaceModel::line().is_bounded());
    assert_eq!(SpaceModel::line().ball_points(3).unwrap().len(), 7);
    assert!(SpaceModel::explicit_graph(2, &[[0, 5]], 0).is_err());
}
