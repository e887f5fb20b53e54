//! Structural consequences that every genuine HHG structure satisfies.

use serde::{Deserialize, Serialize};

use super::{DomainId, HHGStructure, Relation};
use crate::error::{LabError, Result};
use crate::group::Word;
use crate::space::{translation_length, SpaceKind};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidatorCheck {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidatorReport {
    pub checks: Vec<ValidatorCheck>,
}

impl ValidatorReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// The first failure as a structure-invalid error.
    pub fn into_result(self) -> Result<ValidatorReport> {
        match self.checks.iter().find(|c| !c.passed) {
            Some(c) => Err(LabError::invalid(
                c.name.clone(),
                c.witness.clone().unwrap_or_default(),
            )),
            None => Ok(self),
        }
    }
}

/// Declared domains fixed by every generator.
pub fn invariant_domains(s: &HHGStructure) -> Vec<DomainId> {
    let gens: Vec<Word> = s
        .group()
        .positive_letters()
        .into_iter()
        .map(Word::letter)
        .collect();
    s.listed_domains()
        .filter(|u| {
            gens.iter()
                .all(|g| s.act_domain(g, u).ok().as_ref() == Some(u))
        })
        .collect()
}

/// The three checks on declared data:
/// (i) no unbounded member of an invariant orthogonal family is properly
/// nested in another unbounded domain;
/// (ii) an invariant line-like domain on which some generator translates has
/// only bounded domains properly nested in it;
/// (iii) every domain transverse to an invariant unbounded domain is bounded.
pub fn structural_validators(s: &HHGStructure) -> ValidatorReport {
    let invariant = invariant_domains(s);
    let domains = s.domains().to_vec();
    let unbounded = |u: &DomainId| !s.is_bounded(u);

    let mut i_check = ValidatorCheck {
        name: "invariant orthogonal family nests properly".into(),
        passed: true,
        checked: 0,
        witness: None,
    };
    let fam: Vec<&DomainId> = invariant
        .iter()
        .filter(|u| unbounded(u))
        .filter(|u| s.top().as_ref() != Some(*u))
        .collect();
    for u in &fam {
        if !fam.iter().all(|v| *v == *u || s.orthogonal(u, v)) {
            continue;
        }
        for v in domains.iter().filter(|v| unbounded(v)) {
            i_check.checked += 1;
            if s.relation_unchecked(u, v) == Relation::NestedIn {
                i_check.passed = false;
                i_check.witness = Some(format!("{} ⊑ {}", s.label(u), s.label(v)));
            }
        }
    }

    let mut ii_check = ValidatorCheck {
        name: "invariant quasi-line has only bounded domains below".into(),
        passed: true,
        checked: 0,
        witness: None,
    };
    let gens: Vec<Word> = s
        .group()
        .positive_letters()
        .into_iter()
        .map(Word::letter)
        .collect();
    for u in invariant
        .iter()
        .filter(|u| s.space(u).kind() == SpaceKind::Line)
    {
        let translates = gens.iter().any(|g| {
            s.act(g, u)
                .map(|(_, iso)| translation_length(s.space(u), &iso).tau > 0.0)
                .unwrap_or(false)
        });
        if !translates {
            continue;
        }
        for v in &domains {
            ii_check.checked += 1;
            if s.relation_unchecked(v, u) == Relation::NestedIn && unbounded(v) {
                ii_check.passed = false;
                ii_check.witness = Some(format!("{} ⊑ {}", s.label(v), s.label(u)));
            }
        }
    }

    let mut iii_check = ValidatorCheck {
        name: "domains transverse to invariant unbounded domains are bounded".into(),
        passed: true,
        checked: 0,
        witness: None,
    };
    for u in invariant.iter().filter(|u| unbounded(u)) {
        for v in &domains {
            iii_check.checked += 1;
            if s.relation_unchecked(u, v) == Relation::Transverse && unbounded(v) {
                iii_check.passed = false;
                iii_check.witness = Some(format!("{} ⋔ {}", s.label(u), s.label(v)));
            }
        }
    }
    ValidatorReport {
        checks: vec![i_check, ii_check, iii_check],
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhoTransversality {
    pub distance: f64,
    /// `Some(true)` when the hypothesis `d > 2D` holds and the table agrees.
    pub asserted: Option<bool>,
}

/// For `U, W` properly nested in `V` with `d_V(ρ^U_V, ρ^W_V) > 2D`, the two
/// must be transverse; the table is cross-checked.
pub fn rho_distance_transversality(
    s: &HHGStructure,
    u: &DomainId,
    w: &DomainId,
    v: &DomainId,
) -> Result<RhoTransversality> {
    if u == w {
        return Ok(RhoTransversality {
            distance: 0.0,
            asserted: None,
        });
    }
    for d in [u, w] {
        if s.relation(d, v)? != Relation::NestedIn {
            return Err(LabError::Precondition(format!(
                "{} is not properly nested in {}",
                s.label(d),
                s.label(v)
            )));
        }
    }
    let (a, b) = (s.rho(u, v).expect("nested"), s.rho(w, v).expect("nested"));
    let distance = s.space(v).distance(&a, &b);
    if distance <= 2.0 * s.constants().d() {
        return Ok(RhoTransversality {
            distance,
            asserted: None,
        });
    }
    let rel = s.relation_unchecked(u, w);
    if rel != Relation::Transverse {
        return Err(LabError::invalid(
            "far-apart rho points on non-transverse domains",
            format!(
                "{} {rel} {} with d_V(ρ^U_V, ρ^W_V) = {distance}",
                s.label(u),
                s.label(w)
            ),
        ));
    }
    Ok(RhoTransversality {
        distance,
        asserted: Some(true),
    })
}
