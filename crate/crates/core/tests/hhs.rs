mod common;

use common::{element, structure, word};
use hhg_core::hhs::axioms::check_axioms;
use hhg_core::hhs::validators::{rho_distance_transversality, structural_validators};
use hhg_core::hhs::{builders, HHGStructure, Relation};
use hhg_core::LabError;
use proptest::prelude::*;

const STANDARD: [&str; 6] = ["free2", "z", "z2", "f2xZ", "f2xf2", "f2-free-z"];

#[test]
fn standard_structures_pass_validators_and_axioms() {
    for name in STANDARD {
        let s = structure(name);
        assert!(structural_validators(&s).passed(), "{name}");
        let rep = check_axioms(&s, 200, 1);
        assert!(
            rep.passed() && rep.extras_passed(),
            "{name}: {:?}",
            rep.failing_axioms()
        );
    }
}

#[test]
fn swap_structure_fails_only_uniqueness_of_orthogonal_complements() {
    let rep = check_axioms(&structure("z-swap"), 200, 0);
    assert_eq!(rep.failing_axioms(), vec![8]);
}

#[test]
fn axiom_reports_are_deterministic() {
    let s = structure("f2xZ-corrupt-rho");
    let a = serde_json::to_string(&check_axioms(&s, 100, 7)).unwrap();
    let b = serde_json::to_string(&check_axioms(&s, 100, 7)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn relations_are_consistent() {
    for (name, file) in builders::shipped() {
        let s = HHGStructure::load(file).unwrap();
        let ds: Vec<_> = s.domains().to_vec();
        for u in &ds {
            assert_eq!(s.relation(u, u).unwrap(), Relation::Equal, "{name}");
            for v in &ds {
                assert_eq!(
                    s.relation(u, v).unwrap(),
                    s.relation(v, u).unwrap().reversed(),
                    "{name}"
                );
            }
        }
    }
}

#[test]
fn maximal_orthogonal_families_are_pairwise_orthogonal() {
    for name in STANDARD {
        let s = structure(name);
        let fam = s.max_orthogonal_family();
        for (i, u) in fam.iter().enumerate() {
            for v in &fam[i + 1..] {
                assert!(s.orthogonal(u, v), "{name}");
            }
        }
    }
    assert_eq!(structure("f2xf2").max_orthogonal_family().len(), 2);
    assert_eq!(structure("free2").max_orthogonal_family().len(), 1);
}

#[test]
fn bad_files_are_rejected() {
    assert!(matches!(
        HHGStructure::from_json("{bad"),
        Err(LabError::Parse { .. })
    ));
    let mut file = builders::by_name("f2xZ").unwrap();
    file.schema_version = 99;
    assert!(HHGStructure::from_json(&file.to_json()).is_err());
    assert!(HHGStructure::from_path("/nonexistent/structure.json").is_err());
}

#[test]
fn far_apart_rho_points_lie_on_transverse_domains() {
    let s = structure("f2-free-z");
    let m = s.group();
    let top = s.top().unwrap();
    let mut checked = 0;
    for seed in 0..20 {
        let g = element(m, seed, 6);
        let cosets = s.relevant_cosets(&word(m, ""), &g);
        for u in &cosets {
            for w in &cosets {
                if s.relation(u, &top).unwrap() == Relation::NestedIn
                    && s.relation(w, &top).unwrap() == Relation::NestedIn
                {
                    rho_distance_transversality(&s, u, w, &top).unwrap();
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// `(gh)·U = g·(h·U)` and `π_{gU}(gx) = g·π_U(x)` up to the declared slack.
    #[test]
    fn action_is_equivariant(i in 0usize..STANDARD.len(), s1: u64, s2: u64, s3: u64) {
        let s = structure(STANDARD[i]);
        let m = s.group();
        let (g, h, x) = (element(m, s1, 4), element(m, s2, 4), element(m, s3, 4));
        for u in s.domains().to_vec() {
            let hu = s.act_domain(&h, &u).unwrap();
            let lhs = s.act_domain(&m.multiply(&g, &h).unwrap(), &u).unwrap();
            prop_assert_eq!(lhs, s.act_domain(&g, &hu).unwrap());
            let (gu, iso) = s.act(&g, &u).unwrap();
            let moved = iso.apply(s.space(&u), &s.project(&u, &x));
            let direct = s.project(&gu, &m.multiply(&g, &x).unwrap());
            prop_assert!(s.space(&gu).distance(&moved, &direct) <= s.constants().xi.max(1.0));
        }
    }

    /// Projections are coarsely Lipschitz with the declared constant.
    #[test]
    fn projections_are_lipschitz(i in 0usize..STANDARD.len(), s1: u64) {
        let s = structure(STANDARD[i]);
        let m = s.group();
        let x = element(m, s1, 5);
        for gen in m.positive_letters() {
            let y = m.multiply(&x, &hhg_core::group::Word::letter(gen)).unwrap();
            for u in s.domains().to_vec() {
                prop_assert!(s.domain_distance(&u, &x, &y) <= s.constants().k_proj + s.constants().k_proj);
            }
        }
    }
}

#[test]
fn projection_of_identity_is_basepoint_on_listed_domains() {
    let s = structure("f2xZ");
    let e = word(s.group(), "");
    for u in s.listed_domains() {
        assert_eq!(s.project(&u, &e), s.space(&u).basepoint());
    }
}
