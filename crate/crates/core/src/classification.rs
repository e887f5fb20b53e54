//! Big sets and the elliptic/axial dichotomy.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::group::Word;
use crate::hhs::{DomainId, HHGStructure};
use crate::space::{translation_length, TranslationMethod};

pub const DEFAULT_N_MAX: usize = 16;
pub const DEFAULT_THRESHOLD: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvidenceMethod {
    ExactTree,
    LimitEstimate,
    OrbitDiameter,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainEvidence {
    pub domain: DomainId,
    pub label: String,
    pub method: EvidenceMethod,
    /// Smallest `m` with `g^m U = U`, if one exists within the search bound.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stabilizing_power: Option<usize>,
    /// `τ_U(g) = τ_U(g^m) / m` when `g^m` fixes `U`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    /// `diam{π_U(g^i) : |i| ≤ n}` for `n = 1..=n_max`.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub orbit_diameters: Vec<f64>,
    pub big: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BigSet {
    pub element: Word,
    pub domains: Vec<DomainId>,
    pub evidence: Vec<DomainEvidence>,
    pub n_max: usize,
    pub threshold: f64,
}

impl BigSet {
    pub fn is_empty(&self) -> bool {
        self.domains.is_empty()
    }

    /// `τ_U(g)` for a member `U`.
    pub fn tau(&self, u: &DomainId) -> Option<f64> {
        self.evidence
            .iter()
            .find(|e| &e.domain == u)
            .and_then(|e| e.tau)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ElementClass {
    Elliptic,
    Axial,
}

fn factorial(n: usize) -> usize {
    (1..=n).product::<usize>().max(1)
}

/// Smallest `m ≤ bound` with `g^m U = U`.
fn fixing_power(s: &HHGStructure, g: &Word, u: &DomainId, bound: usize) -> Result<Option<usize>> {
    let mut cur = u.clone();
    for m in 1..=bound {
        cur = s.act_domain(g, &cur)?;
        if &cur == u {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

fn candidates(s: &HHGStructure, g: &Word) -> Vec<DomainId> {
    let mut out: Vec<DomainId> = s.listed_domains().collect();
    out.extend(s.relevant_cosets(&Word::identity(), g));
    out.sort();
    out.dedup();
    out.retain(|u| !s.is_bounded(u));
    out
}

/// `Big(g)`: exact translation length on trees fixed by a power of `g`,
/// linear growth of projected orbits otherwise.
pub fn big_set(s: &HHGStructure, g: &Word, n_max: usize, threshold: f64) -> Result<BigSet> {
    if n_max < 4 {
        return Err(LabError::Precondition(format!(
            "n_max must be at least 4, got {n_max}"
        )));
    }
    let m = s.group();
    let g = m.normal_form(g)?;
    let bound = factorial(s.orthogonality_number()).max(2);
    let mut evidence = Vec::new();
    for u in candidates(s, &g) {
        let power = fixing_power(s, &g, &u, bound)?;
        let space = s.space(&u);
        let tau_data = match power {
            Some(p) => {
                let (_, iso) = s.act(&m.power(&g, p as i64), &u)?;
                Some((translation_length(space, &iso), p))
            }
            None => None,
        };
        let ev = match tau_data {
            Some((data, p)) if data.method == TranslationMethod::ExactTree => DomainEvidence {
                domain: u.clone(),
                label: s.label(&u),
                method: EvidenceMethod::ExactTree,
                stabilizing_power: Some(p),
                tau: Some(data.tau / p as f64),
                orbit_diameters: Vec::new(),
                big: data.tau > 0.0,
            },
            other => {
                let orbit: Vec<_> = (-(n_max as i64)..=n_max as i64)
                    .map(|i| (i, s.project(&u, &m.power(&g, i))))
                    .collect();
                let orbit_diameters: Vec<f64> = (1..=n_max as i64)
                    .map(|n| {
                        let pts: Vec<_> = orbit
                            .iter()
                            .filter(|(i, _)| i.abs() <= n)
                            .map(|(_, p)| p)
                            .collect();
                        pts.iter()
                            .flat_map(|a| pts.iter().map(move |b| space.distance(a, b)))
                            .fold(0.0, f64::max)
                    })
                    .collect();
                let big = orbit_diameters[n_max - 1] > threshold * n_max as f64;
                DomainEvidence {
                    domain: u.clone(),
                    label: s.label(&u),
                    method: if other.is_some() {
                        EvidenceMethod::LimitEstimate
                    } else {
                        EvidenceMethod::OrbitDiameter
                    },
                    stabilizing_power: other.as_ref().map(|(_, p)| *p),
                    tau: other.map(|(d, p)| d.tau / p as f64),
                    orbit_diameters,
                    big,
                }
            }
        };
        evidence.push(ev);
    }
    let domains: Vec<DomainId> = evidence
        .iter()
        .filter(|e| e.big)
        .map(|e| e.domain.clone())
        .collect();
    for (i, a) in domains.iter().enumerate() {
        for b in &domains[i + 1..] {
            if !s.orthogonal(a, b) {
                return Err(LabError::Anomaly(format!(
                    "big set of {} contains non-orthogonal {} and {}",
                    m.format_word(&g),
                    s.label(a),
                    s.label(b)
                )));
            }
        }
    }
    if domains.len() > s.orthogonality_number() {
        return Err(LabError::Anomaly(format!(
            "big set of {} exceeds the orthogonality number",
            m.format_word(&g)
        )));
    }
    Ok(BigSet {
        element: g,
        domains,
        evidence,
        n_max,
        threshold,
    })
}

/// Elliptic iff the big set is empty.
pub fn classify(s: &HHGStructure, g: &Word, n_max: usize, threshold: f64) -> Result<ElementClass> {
    let big = big_set(s, g, n_max, threshold)?;
    if !big.is_empty() {
        return Ok(ElementClass::Axial);
    }
    if !big.element.is_empty() && s.group().is_torsion_free() {
        return Err(LabError::Anomaly(format!(
            "non-identity element {} of a torsion-free group has an empty big set",
            s.group().format_word(&big.element)
        )));
    }
    Ok(ElementClass::Elliptic)
}

/// Smallest `M ≤ N!` with `g^M` fixing every domain of the big set.
pub fn stabilization_power(s: &HHGStructure, big: &BigSet) -> Result<usize> {
    let m = s.group();
    let bound = factorial(s.orthogonality_number());
    'outer: for power in 1..=bound {
        let gm = m.power(&big.element, power as i64);
        for u in &big.domains {
            if &s.act_domain(&gm, u)? != u {
                continue 'outer;
            }
        }
        return Ok(power);
    }
    Err(LabError::invalid(
        format!("no power up to {bound} fixes the big set"),
        m.format_word(&big.element),
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tau0Report {
    pub declared: f64,
    /// `None` when every sample is elliptic.
    pub measured: Option<f64>,
    pub pairs_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimizer: Option<String>,
}

/// `min τ_U(g)` over the samples and their big sets, against the declared floor.
pub fn tau0_floor_check(s: &HHGStructure, samples: &[Word]) -> Result<Tau0Report> {
    if samples.is_empty() {
        return Err(LabError::Precondition(
            "tau0 check needs at least one sample".into(),
        ));
    }
    let declared = s.constants().tau0;
    let mut measured: Option<f64> = None;
    let mut minimizer = None;
    let mut pairs_checked = 0;
    for g in samples {
        let big = big_set(s, g, DEFAULT_N_MAX, DEFAULT_THRESHOLD)?;
        for u in &big.domains {
            let tau = big.tau(u).ok_or_else(|| {
                LabError::Anomaly(format!(
                    "no stabilizing power for {} on {}",
                    s.group().format_word(g),
                    s.label(u)
                ))
            })?;
            pairs_checked += 1;
            if measured.is_none_or(|m| tau < m) {
                measured = Some(tau);
                minimizer = Some(format!("g={}, U={}", s.group().format_word(g), s.label(u)));
            }
        }
    }
    if let Some(m) = measured {
        if m < declared - 1e-9 {
            return Err(LabError::invalid(
                format!("translation length {m} below the declared floor {declared}"),
                minimizer.unwrap_or_default(),
            ));
        }
    }
    Ok(Tau0Report {
        declared,
        measured,
        pairs_checked,
        minimizer,
    })
}
