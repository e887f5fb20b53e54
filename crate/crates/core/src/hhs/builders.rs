//! Standard structures for the supported group families, plus the
//! deliberately broken fixtures used to exercise the axiom checker.

use crate::group::GroupSpec;
use crate::space::Point;

use super::file::*;

fn base_constants(complexity_n: usize, theta_u_table: Vec<ThetaEntry>) -> Constants {
    Constants {
        delta: 0.0,
        xi: 0.0,
        kappa0: 1.0,
        e: 2.0,
        lambda_llink: 2.0,
        alpha: 1.0,
        k_proj: 1.0,
        complexity_n,
        theta_u_table,
        theta_e: 0.0,
        tau0: 1.0,
        normalization_c: 0.0,
        k3: None,
    }
}

fn theta_table(f: impl Fn(f64) -> f64) -> Vec<ThetaEntry> {
    (1..=4)
        .map(|k| ThetaEntry {
            kappa: k as f64,
            theta_u: f(k as f64),
        })
        .collect()
}

fn nested(a: &str, b: &str) -> RelationDecl {
    RelationDecl {
        pair: [a.into(), b.into()],
        relation: RelationKind::Nested,
    }
}

fn orthogonal(a: &str, b: &str) -> RelationDecl {
    RelationDecl {
        pair: [a.into(), b.into()],
        relation: RelationKind::Orthogonal,
    }
}

fn domain(id: usize, label: &str, space: SpaceSpec, projection: ProjectionRule) -> DomainDecl {
    DomainDecl {
        id,
        label: label.into(),
        space,
        projection,
    }
}

/// Free group of rank `rank` acting on its Cayley tree: one domain.
pub fn free(rank: usize) -> StructureFile {
    StructureFile {
        schema_version: SCHEMA_VERSION,
        name: format!("free{rank}"),
        group: GroupSpec::Free { rank },
        domains: vec![domain(
            0,
            "S",
            SpaceSpec::CayleyTree { factor: None },
            ProjectionRule::Identity,
        )],
        families: vec![],
        relations: vec![],
        rho: vec![],
        action: ActionRule::LeftMultiplication,
        constants: base_constants(1, theta_table(|k| k)),
    }
}

/// `Z` acting on the line: one domain.
pub fn z() -> StructureFile {
    StructureFile {
        schema_version: SCHEMA_VERSION,
        name: "z".into(),
        group: GroupSpec::FreeAbelian { rank: 1 },
        domains: vec![domain(0, "S", SpaceSpec::Line, ProjectionRule::Identity)],
        families: vec![],
        relations: vec![],
        rho: vec![],
        action: ActionRule::LeftMultiplication,
        constants: base_constants(1, theta_table(|k| k)),
    }
}

fn factor_labels(kinds: &[bool]) -> Vec<String> {
    // `true` marks a tree factor, `false` a line factor.
    let trees = kinds.iter().filter(|&&t| t).count();
    let lines = kinds.len() - trees;
    let (mut ti, mut li) = (0, 0);
    kinds
        .iter()
        .map(|&t| {
            if t {
                ti += 1;
                if trees == 1 {
                    "T".to_string()
                } else {
                    format!("T{ti}")
                }
            } else {
                li += 1;
                if lines == 1 {
                    "L".to_string()
                } else {
                    format!("L{li}")
                }
            }
        })
        .collect()
}

/// Product structure on a direct product of free groups and copies of `Z`:
/// a bounded top domain `S` with one orthogonal factor domain per factor.
pub fn product(name: &str, factors: Vec<GroupSpec>) -> StructureFile {
    let kinds: Vec<bool> = factors
        .iter()
        .map(|f| matches!(f, GroupSpec::Free { .. }))
        .collect();
    let labels = factor_labels(&kinds);
    let mut domains = vec![domain(
        0,
        "S",
        SpaceSpec::BoundedPoint,
        ProjectionRule::Constant { point: None },
    )];
    let mut relations = Vec::new();
    for (i, (label, &tree)) in labels.iter().zip(&kinds).enumerate() {
        let space = if tree {
            SpaceSpec::CayleyTree { factor: Some(i) }
        } else {
            SpaceSpec::Line
        };
        domains.push(domain(
            i + 1,
            label,
            space,
            ProjectionRule::ProductFactor { factor: i },
        ));
        relations.push(nested(label, "S"));
    }
    for i in 0..labels.len() {
        for j in i + 1..labels.len() {
            relations.push(orthogonal(&labels[i], &labels[j]));
        }
    }
    let k = factors.len() as f64;
    StructureFile {
        schema_version: SCHEMA_VERSION,
        name: name.into(),
        group: GroupSpec::DirectProduct { factors },
        domains,
        families: vec![],
        relations,
        rho: vec![],
        action: ActionRule::Product,
        constants: base_constants(2, theta_table(|kappa| k * kappa)),
    }
}

pub fn f2_x_z() -> StructureFile {
    product(
        "f2xZ",
        vec![
            GroupSpec::Free { rank: 2 },
            GroupSpec::FreeAbelian { rank: 1 },
        ],
    )
}

pub fn f2_x_f2() -> StructureFile {
    product(
        "f2xf2",
        vec![GroupSpec::Free { rank: 2 }, GroupSpec::Free { rank: 2 }],
    )
}

/// Free abelian group of rank `rank` with one line per coordinate.
pub fn free_abelian(rank: usize) -> StructureFile {
    let mut domains = vec![domain(
        0,
        "S",
        SpaceSpec::BoundedPoint,
        ProjectionRule::Constant { point: None },
    )];
    let labels: Vec<String> = (1..=rank).map(|i| format!("L{i}")).collect();
    let mut relations = Vec::new();
    for (i, l) in labels.iter().enumerate() {
        domains.push(domain(
            i + 1,
            l,
            SpaceSpec::Line,
            ProjectionRule::ProductFactor { factor: i },
        ));
        relations.push(nested(l, "S"));
    }
    for i in 0..rank {
        for j in i + 1..rank {
            relations.push(orthogonal(&labels[i], &labels[j]));
        }
    }
    let k = rank as f64;
    StructureFile {
        schema_version: SCHEMA_VERSION,
        name: format!("z{rank}"),
        group: GroupSpec::FreeAbelian { rank },
        domains,
        families: vec![],
        relations,
        rho: vec![],
        action: ActionRule::Product,
        constants: base_constants(2, theta_table(|kappa| k * kappa)),
    }
}

/// `F2 ∗ Z`: the Bass–Serre tree on top and one domain per coset of each
/// factor, generated up to word length 2.
pub fn f2_free_z() -> StructureFile {
    let mut constants = base_constants(2, theta_table(|k| (k * k / 2.0).ceil() + 1.0));
    constants.normalization_c = 1.0;
    constants.k_proj = 2.0;
    StructureFile {
        schema_version: SCHEMA_VERSION,
        name: "f2-free-z".into(),
        group: GroupSpec::FreeProduct {
            factors: vec![
                GroupSpec::Free { rank: 2 },
                GroupSpec::FreeAbelian { rank: 1 },
            ],
        },
        domains: vec![domain(
            0,
            "S",
            SpaceSpec::BassSerreTree,
            ProjectionRule::Identity,
        )],
        families: vec![
            FamilyDecl {
                label: "F".into(),
                factor: 0,
                nested_in: "S".into(),
                space: SpaceSpec::CayleyTree { factor: Some(0) },
                generation_radius: 2,
            },
            FamilyDecl {
                label: "Z".into(),
                factor: 1,
                nested_in: "S".into(),
                space: SpaceSpec::Line,
                generation_radius: 2,
            },
        ],
        relations: vec![],
        rho: vec![],
        action: ActionRule::FreeProduct,
        constants,
    }
}

/// `Z = <t>` with two orthogonal lines swapped by `t`. Engineered to test
/// stabilization powers; it is not a genuine HHG structure (partial
/// realization fails for the two lines).
pub fn z_swap() -> StructureFile {
    let mut file = free_abelian(1);
    file.name = "z-swap".into();
    file.domains = vec![
        domain(
            0,
            "S",
            SpaceSpec::BoundedPoint,
            ProjectionRule::Constant { point: None },
        ),
        domain(
            1,
            "L1",
            SpaceSpec::Line,
            ProjectionRule::ProductFactor { factor: 0 },
        ),
        domain(
            2,
            "L2",
            SpaceSpec::Line,
            ProjectionRule::ProductFactor { factor: 0 },
        ),
    ];
    file.relations = vec![nested("L1", "S"), nested("L2", "S"), orthogonal("L1", "L2")];
    file.action = ActionRule::CyclicPermutation {
        cycle: vec!["L1".into(), "L2".into()],
        shift: 1,
    };
    file.constants.theta_u_table = theta_table(|k| k);
    file
}

/// `F2 x Z` whose top space is a path of length 10 with `ρ^T_S` at the far
/// end, away from the projection image: consistency fails.
pub fn f2_x_z_corrupt_rho() -> StructureFile {
    let mut file = f2_x_z();
    file.name = "f2xZ-corrupt-rho".into();
    let edges = (0..10).map(|i| [i, i + 1]).collect();
    file.domains[0].space = SpaceSpec::ExplicitGraph {
        nodes: 11,
        edges,
        basepoint: 0,
    };
    file.rho = vec![RhoDecl {
        from: "T".into(),
        to: "S".into(),
        point: Point::node(10),
    }];
    file.constants.alpha = 12.0;
    file.constants.normalization_c = 10.0;
    file.constants.lambda_llink = 10.0;
    file
}

/// `F2 x Z` declaring complexity 1 although `T ⊑ S` is a chain of length 2.
pub fn f2_x_z_corrupt_complexity() -> StructureFile {
    let mut file = f2_x_z();
    file.name = "f2xZ-corrupt-complexity".into();
    file.constants.complexity_n = 1;
    file
}

/// `F2 x Z` whose line domain is collapsed to a point: far-apart elements
/// differing only in the `Z` coordinate are seen by no domain.
pub fn f2_x_z_corrupt_uniqueness() -> StructureFile {
    let mut file = f2_x_z();
    file.name = "f2xZ-corrupt-uniqueness".into();
    file.domains[2].space = SpaceSpec::BoundedPoint;
    file.domains[2].projection = ProjectionRule::Constant { point: None };
    file
}

/// Every shipped structure, keyed by the file stem used under `structures/`.
pub fn shipped() -> Vec<(&'static str, StructureFile)> {
    vec![
        ("free2", free(2)),
        ("z", z()),
        ("z2", free_abelian(2)),
        ("f2xZ", f2_x_z()),
        ("f2xf2", f2_x_f2()),
        ("f2-free-z", f2_free_z()),
        ("z-swap", z_swap()),
        ("f2xZ-corrupt-rho", f2_x_z_corrupt_rho()),
        ("f2xZ-corrupt-complexity", f2_x_z_corrupt_complexity()),
        ("f2xZ-corrupt-uniqueness", f2_x_z_corrupt_uniqueness()),
    ]
}

/// A shipped structure by name.
pub fn by_name(name: &str) -> Option<StructureFile> {
    shipped()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, f)| f)
}
