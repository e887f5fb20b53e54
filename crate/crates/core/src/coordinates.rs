//! Coordinates: consistent tuples, realization, the distance formula and
//! product decompositions.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::group::{cayley_ball_with_budget, GeneratingSet, Word, DEFAULT_BALL_BUDGET};
use crate::hhs::{DomainId, HHGStructure, Relation};
use crate::space::{Point, SpaceKind, SpaceModel};

mod pairs {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::hhs::DomainId;
    use crate::space::Point;

    #[derive(Serialize, Deserialize)]
    struct Entry {
        domain: DomainId,
        point: Point,
    }

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<DomainId, Point>,
        ser: S,
    ) -> Result<S::Ok, S::Error> {
        let v: Vec<Entry> = map
            .iter()
            .map(|(d, p)| Entry {
                domain: d.clone(),
                point: p.clone(),
            })
            .collect();
        v.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> Result<BTreeMap<DomainId, Point>, D::Error> {
        let v: Vec<Entry> = Vec::deserialize(de)?;
        Ok(v.into_iter().map(|e| (e.domain, e.point)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsistentTuple {
    #[serde(with = "pairs")]
    pub entries: BTreeMap<DomainId, Point>,
    pub kappa: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub consistent: bool,
    pub kappa: f64,
    /// Largest violation value among the three conditions.
    pub worst: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// No transverse pair occurs among the checked domains.
    pub transverse_vacuous: bool,
}

/// `(π_U(g))_U` over the generated domains, tagged with `κ₁`.
pub fn project_tuple(s: &HHGStructure, g: &Word) -> ConsistentTuple {
    let entries = s
        .domains()
        .iter()
        .map(|u| (u.clone(), s.project(u, g)))
        .collect();
    ConsistentTuple {
        entries,
        kappa: s.constants().kappa1(),
    }
}

/// Checks the three consistency conditions over the generated domains.
pub fn is_consistent(
    s: &HHGStructure,
    tuple: &ConsistentTuple,
    kappa: f64,
) -> Result<ConsistencyReport> {
    is_consistent_on(s, tuple, kappa, s.domains())
}

/// As [`is_consistent`], over an explicit index set.
pub fn is_consistent_on(
    s: &HHGStructure,
    tuple: &ConsistentTuple,
    kappa: f64,
    index: &[DomainId],
) -> Result<ConsistencyReport> {
    let mut entries = Vec::with_capacity(index.len());
    for u in index {
        s.check_domain(u)?;
        let p = tuple
            .entries
            .get(u)
            .ok_or_else(|| LabError::Input(format!("tuple has no entry for {}", s.label(u))))?;
        if !s.space(u).contains(p) {
            return Err(LabError::Input(format!(
                "entry {p:?} is not a point of the space of {}",
                s.label(u)
            )));
        }
        entries.push((u, p));
    }
    let mut worst: f64 = 0.0;
    let mut witness = None;
    let mut note = |value: f64, w: &dyn Fn() -> String| {
        if value > worst {
            worst = value;
            if value > kappa {
                witness = Some(w());
            }
        }
    };
    let mut transverse_vacuous = true;
    for (u, p) in &entries {
        let gap = s.projection_gap(u, p);
        note(gap, &|| {
            format!("{} entry is {gap} from the projection image", s.label(u))
        });
    }
    for (v, bv) in &entries {
        for (w, bw) in &entries {
            match s.relation_unchecked(v, w) {
                Relation::Transverse => {
                    transverse_vacuous = false;
                    let a = s.space(w).distance(bw, &s.rho(v, w).expect("transverse"));
                    let b = s.space(v).distance(bv, &s.rho(w, v).expect("transverse"));
                    note(a.min(b), &|| {
                        format!(
                            "transverse pair {}, {}: {a} and {b}",
                            s.label(v),
                            s.label(w)
                        )
                    });
                }
                Relation::NestedIn => {
                    let a = s.space(w).distance(bw, &s.rho(v, w).expect("nested"));
                    let b = s.space(v).distance(bv, &s.rho_down(w, v, bw));
                    note(a.min(b), &|| {
                        format!("nested pair {} ⊑ {}: {a} and {b}", s.label(v), s.label(w))
                    });
                }
                _ => {}
            }
        }
    }
    Ok(ConsistencyReport {
        consistent: worst <= kappa,
        kappa,
        worst,
        witness,
        transverse_vacuous,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Realization {
    pub search_radius: usize,
    pub declared_theta_e: f64,
    /// Elements within the declared realization slack of every entry.
    pub elements: Vec<Word>,
    /// Smallest slack for which some ball element realizes the tuple.
    pub theta_e_needed: f64,
    /// Word-metric diameter of `elements`.
    pub diameter: usize,
}

/// Searches the ball of `search_radius` for elements realizing the tuple.
pub fn realize(
    s: &HHGStructure,
    tuple: &ConsistentTuple,
    search_radius: usize,
) -> Result<Realization> {
    let index: Vec<DomainId> = tuple.entries.keys().cloned().collect();
    let report = is_consistent_on(s, tuple, tuple.kappa, &index)?;
    if !report.consistent {
        return Err(LabError::Precondition(format!(
            "tuple is not {}-consistent: {}",
            tuple.kappa,
            report.witness.unwrap_or_default()
        )));
    }
    let m = s.group();
    let x = GeneratingSet::standard(m, true);
    let ball = cayley_ball_with_budget(m, &x, search_radius, DEFAULT_BALL_BUDGET, true)?;
    let elements = ball.elements.unwrap_or_default();
    let slack: Vec<f64> = elements
        .par_iter()
        .map(|g| {
            tuple
                .entries
                .iter()
                .map(|(u, b)| s.space(u).distance(b, &s.project(u, g)))
                .fold(0.0, f64::max)
        })
        .collect();
    let theta_e = s.constants().theta_e;
    let found: Vec<Word> = elements
        .iter()
        .zip(&slack)
        .filter(|(_, &d)| d <= theta_e + 1e-9)
        .map(|(g, _)| g.clone())
        .collect();
    if found.is_empty() {
        return Err(LabError::RadiusExhausted(format!(
            "no element of the radius-{search_radius} ball realizes the tuple within {theta_e}"
        )));
    }
    let diameter = found
        .iter()
        .flat_map(|a| found.iter().map(move |b| (a, b)))
        .map(|(a, b)| m.distance(a, b))
        .max()
        .unwrap_or(0);
    Ok(Realization {
        search_radius,
        declared_theta_e: theta_e,
        elements: found,
        theta_e_needed: slack.iter().cloned().fold(f64::INFINITY, f64::min),
        diameter,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Contribution {
    pub domain: String,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdedSum {
    pub threshold: f64,
    /// Domains whose distance exceeds the threshold.
    pub contributions: Vec<Contribution>,
    pub total: f64,
}

/// `Σ_U {{d_U(x, y)}}_s`, keeping only terms strictly above `s`.
pub fn distance_formula_sum(
    s: &HHGStructure,
    x: &Word,
    y: &Word,
    threshold: f64,
) -> Result<ThresholdedSum> {
    if threshold.is_nan() || threshold < 0.0 {
        return Err(LabError::Precondition(format!(
            "threshold must be nonnegative, got {threshold}"
        )));
    }
    let contributions: Vec<Contribution> = s
        .domains_for_pair(x, y)
        .iter()
        .map(|u| Contribution {
            domain: s.label(u),
            distance: s.domain_distance(u, x, y),
        })
        .filter(|c| c.distance > threshold)
        .collect();
    let total = contributions.iter().map(|c| c.distance).sum();
    Ok(ThresholdedSum {
        threshold,
        contributions,
        total,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceFit {
    pub threshold: f64,
    pub k: f64,
    pub c: f64,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub binding: Option<String>,
}

/// Step and upper end of the `K` grid.
pub const FIT_K_STEP: f64 = 0.05;
pub const FIT_K_MAX: f64 = 20.0;

/// Least `(K, C)` on the grid, minimizing `K + C`, such that
/// `d/K − C ≤ Σ ≤ K·d + C` on every sample.
pub fn fit_distance_formula(
    s: &HHGStructure,
    pairs: &[(Word, Word)],
    threshold: f64,
) -> Result<DistanceFit> {
    if pairs.is_empty() {
        return Err(LabError::Precondition(
            "at least one sample pair is required".into(),
        ));
    }
    let m = s.group();
    let data: Vec<(f64, f64)> = pairs
        .iter()
        .map(|(x, y)| {
            Ok((
                m.distance(x, y) as f64,
                distance_formula_sum(s, x, y, threshold)?.total,
            ))
        })
        .collect::<Result<_>>()?;
    let needed_c = |k: f64| {
        data.iter()
            .enumerate()
            .map(|(i, &(d, sum))| ((sum - k * d).max(d / k - sum).max(0.0), i))
            .fold(
                (0.0, None),
                |acc: (f64, Option<usize>), (c, i)| if c > acc.0 { (c, Some(i)) } else { acc },
            )
    };
    let steps = ((FIT_K_MAX - 1.0) / FIT_K_STEP).round() as usize;
    let mut best: Option<(f64, f64, Option<usize>)> = None;
    for step in 0..=steps {
        let k = 1.0 + step as f64 * FIT_K_STEP;
        let (c, bind) = needed_c(k);
        if best.is_none_or(|(bk, bc, _)| k + c < bk + bc - 1e-12) {
            best = Some((k, c, bind));
        }
    }
    let (k, c, bind) = best.expect("grid is nonempty");
    if !c.is_finite() {
        return Err(LabError::Anomaly("no finite fit on the K grid".into()));
    }
    let binding = bind.map(|i| {
        let (x, y) = &pairs[i];
        let (d, sum) = data[i];
        format!(
            "x={}, y={}: d={d}, sum={sum}",
            m.format_word(x),
            m.format_word(y)
        )
    });
    Ok(DistanceFit {
        threshold,
        k: (k * 100.0).round() / 100.0,
        c,
        samples: pairs.len(),
        binding,
    })
}

/// Drops the domains whose space has diameter at most `c`.
pub fn restrict_to_big(
    s: &HHGStructure,
    tuple: &ConsistentTuple,
    c: f64,
) -> Result<ConsistentTuple> {
    if c >= tuple.kappa {
        return Err(LabError::Precondition(format!(
            "threshold {c} must be below kappa {}",
            tuple.kappa
        )));
    }
    let entries = tuple
        .entries
        .iter()
        .filter(|(u, _)| s.space(u).diameter_bound().is_none_or(|d| d > c))
        .map(|(u, p)| (u.clone(), p.clone()))
        .collect();
    Ok(ConsistentTuple {
        entries,
        kappa: tuple.kappa,
    })
}

/// Refills the dropped domains with `π_U(x)`.
pub fn reexpand(s: &HHGStructure, tuple: &ConsistentTuple, x: &Word) -> ConsistentTuple {
    let mut entries = tuple.entries.clone();
    for u in s.domains() {
        entries.entry(u.clone()).or_insert_with(|| s.project(u, x));
    }
    ConsistentTuple {
        entries,
        kappa: tuple.kappa,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorDescriptor {
    pub domains: Vec<String>,
    pub space_kinds: Vec<String>,
    pub diameter_class: String,
    /// Quasi-line constant of the block's space when it has a single domain.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quasi_line: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub blocks: Vec<Vec<DomainId>>,
    pub factors: Vec<FactorDescriptor>,
    /// No domain has an infinite-diameter space.
    pub degenerate: bool,
}

/// Radius and scale bound used to describe factor blocks.
pub const QUASI_LINE_RADIUS: usize = 6;
pub const QUASI_LINE_Q_MAX: usize = 3;

/// Splits the unbounded domains into components of the non-orthogonality graph.
pub fn product_decomposition(s: &HHGStructure) -> Result<Decomposition> {
    let unbounded: Vec<DomainId> = s
        .domains()
        .iter()
        .filter(|u| !s.is_bounded(u))
        .cloned()
        .collect();
    let n = unbounded.len();
    let mut block_of: Vec<Option<usize>> = vec![None; n];
    let mut blocks: Vec<Vec<DomainId>> = Vec::new();
    for start in 0..n {
        if block_of[start].is_some() {
            continue;
        }
        let b = blocks.len();
        let mut stack = vec![start];
        block_of[start] = Some(b);
        let mut members = Vec::new();
        while let Some(i) = stack.pop() {
            members.push(i);
            for j in 0..n {
                if block_of[j].is_none() && !s.orthogonal(&unbounded[i], &unbounded[j]) {
                    block_of[j] = Some(b);
                    stack.push(j);
                }
            }
        }
        members.sort_unstable();
        blocks.push(members.into_iter().map(|i| unbounded[i].clone()).collect());
    }
    let factors = blocks
        .iter()
        .map(|block| {
            let quasi_line = match block.as_slice() {
                [u] => quasi_line_detect(s.space(u), QUASI_LINE_RADIUS, QUASI_LINE_Q_MAX)
                    .ok()
                    .flatten(),
                _ => None,
            };
            let mut space_kinds: Vec<String> = block
                .iter()
                .map(|u| s.space(u).kind().to_string())
                .collect();
            space_kinds.dedup();
            FactorDescriptor {
                domains: block.iter().map(|u| s.label(u)).collect(),
                space_kinds,
                diameter_class: "infinite".into(),
                quasi_line,
            }
        })
        .collect();
    Ok(Decomposition {
        degenerate: blocks.is_empty(),
        blocks,
        factors,
    })
}

/// Smallest `Q ≤ q_max` such that the ball of `radius` lies within `Q` of a
/// geodesic through the basepoint and has exactly two coarse ends at scale `Q`.
pub fn quasi_line_detect(space: &SpaceModel, radius: usize, q_max: usize) -> Result<Option<usize>> {
    if radius < 2 {
        return Err(LabError::Precondition(format!(
            "radius must be at least 2, got {radius}"
        )));
    }
    if space.kind() == SpaceKind::BoundedPoint {
        return Ok(None);
    }
    let points = space.ball_points(radius)?;
    let base = space.basepoint();
    let r = radius as f64;
    let from_base: Vec<f64> = points.iter().map(|p| space.distance(&base, p)).collect();
    let reach = from_base.iter().cloned().fold(0.0, f64::max);
    let Some(pi) = from_base.iter().position(|&d| d == reach) else {
        return Ok(None);
    };
    let p = &points[pi];
    let qi = (0..points.len())
        .max_by(|&a, &b| {
            let (da, db) = (space.distance(p, &points[a]), space.distance(p, &points[b]));
            da.partial_cmp(&db).expect("finite").then(b.cmp(&a))
        })
        .expect("nonempty");
    let gamma = space.geodesic(p, &points[qi]).unwrap_or_default();
    if gamma.is_empty() {
        return Ok(None);
    }
    let offset = points
        .iter()
        .map(|x| {
            gamma
                .iter()
                .map(|g| space.distance(x, g))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    for q in 0..=q_max.min(radius.saturating_sub(1)) {
        if (q as f64) < offset {
            continue;
        }
        let outside: Vec<usize> = (0..points.len())
            .filter(|&i| from_base[i] > q as f64)
            .collect();
        let mut comp: BTreeMap<usize, usize> = BTreeMap::new();
        let mut ends = 0;
        for &start in &outside {
            if comp.contains_key(&start) {
                continue;
            }
            let mut stack = vec![start];
            comp.insert(start, start);
            let mut reaches = false;
            while let Some(i) = stack.pop() {
                reaches |= from_base[i] >= r;
                for &j in &outside {
                    if !comp.contains_key(&j) && space.distance(&points[i], &points[j]) == 1.0 {
                        comp.insert(j, start);
                        stack.push(j);
                    }
                }
            }
            if reaches {
                ends += 1;
            }
        }
        if ends == 2 {
            return Ok(Some(q));
        }
    }
    Ok(None)
}
