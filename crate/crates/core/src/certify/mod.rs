//! The growth certifier: the combinatorial dichotomy, the ping-pong
//! constructions and the quasi-line branch.

pub mod freeness;
pub mod ledger;
pub mod scan;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use freeness::{
    semigroup_word_count, subgroup_word_count, verify_free_semigroup, verify_free_subgroup,
};
pub use ledger::{factorial, ConstantLedger, K3Source};

use crate::classification::{
    big_set, stabilization_power, BigSet, DEFAULT_N_MAX, DEFAULT_THRESHOLD,
};
use crate::coordinates::{
    product_decomposition, quasi_line_detect, Decomposition, QUASI_LINE_Q_MAX, QUASI_LINE_RADIUS,
};
use crate::error::{LabError, Result};
use crate::group::{
    cayley_ball, random_element, schreier_generators, GeneratingSet, GroupModel, Word,
};
use crate::hhs::{DomainId, HHGStructure, Relation};
use crate::space::{preserves_endpoint_pair, preserves_endpoint_pair_word};

pub const DEFAULT_DEPTH: usize = 6;
/// Certificates below this verification depth are refused.
pub const MIN_DEPTH: usize = 4;
pub const ENDPOINT_DEPTH: usize = 5;
/// Ledger powers above this are replaced by the practical power.
pub const POWER_CAP: u64 = 4096;
/// Smallest upper end of the `k3` search.
pub const K3_SEARCH_FLOOR: u64 = 8;
/// Ball radius used to sample ping-pong sets.
pub const PINGPONG_SAMPLE_RADIUS: usize = 6;
pub const PINGPONG_SAMPLES: usize = 300;
/// Radii compared by the polynomial growth evidence.
pub const GROWTH_EVIDENCE_RADII: (usize, usize) = (6, 12);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifyOptions {
    pub depth: usize,
    pub n_max: usize,
    pub threshold: f64,
    pub endpoint_depth: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            depth: DEFAULT_DEPTH,
            n_max: DEFAULT_N_MAX,
            threshold: DEFAULT_THRESHOLD,
            endpoint_depth: ENDPOINT_DEPTH,
        }
    }
}

/// Where a domain of `B̄` came from: `domain = translate · U` for some
/// `U ∈ Big(generator)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub domain: DomainId,
    pub label: String,
    pub generator: Word,
    pub translate: Word,
    pub translate_length: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BigDomains {
    pub big: Vec<Provenance>,
    pub bbar: Vec<Provenance>,
}

impl BigDomains {
    pub fn bbar_domains(&self) -> Vec<DomainId> {
        self.bbar.iter().map(|p| p.domain.clone()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Case1Relation {
    Transverse,
    Nested,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum CaseOutcome {
    Case1 {
        s: Word,
        t: Word,
        s_length: usize,
        t_length: usize,
        u: DomainId,
        v: DomainId,
        relation: Case1Relation,
    },
    Case2 {
        bbar: Vec<DomainId>,
        hat_index: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PowerSource {
    /// The ledger constant itself.
    Ledger,
    /// `⌈2κ₀/τ₀⌉ · lcm` of the actual stabilizing powers.
    Practical,
    /// Smallest verifying power found by search.
    Searched,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WordPair {
    pub u: Word,
    pub w: Word,
    pub u_text: String,
    pub w_text: String,
    /// Lengths over the certificate's generating set.
    pub lengths: [usize; 2],
    /// Lengths over the original generating set X.
    pub x_lengths: [usize; 2],
    pub power: u64,
    pub power_source: PowerSource,
}

impl WordPair {
    pub fn max_length(&self) -> usize {
        self.lengths[0].max(self.lengths[1])
    }

    pub fn max_x_length(&self) -> usize {
        self.x_lengths[0].max(self.x_lengths[1])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum CertificateKind {
    FreeSemigroup {
        pair: WordPair,
        verified_depth: usize,
    },
    FreeSubgroup {
        pair: WordPair,
        verified_depth: usize,
        /// Hierarchical acylindricity is assumed, never computed.
        acylindricity_assumed: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        semigroup_fallback: Option<WordPair>,
    },
    VirtuallyAbelian {
        decomposition: Decomposition,
        quasi_lines: Vec<QuasiLineEvidence>,
        growth_degree_estimate: f64,
    },
    ProductZxE {
        quasi_lines: Vec<QuasiLineEvidence>,
        e_blocks: Vec<Vec<String>>,
        decomposition: Decomposition,
    },
    VirtuallyCyclic {
        loxodromic: Word,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiLineEvidence {
    pub domain: String,
    pub loxodromic: Word,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detected_q: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthCertificate {
    pub structure: String,
    pub generating_set: String,
    #[serde(flatten)]
    pub kind: CertificateKind,
    pub route: String,
    pub case: CaseOutcome,
    pub subgroup_index: usize,
    /// Generating set of the subgroup carrying the pair, when proper.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subgroup_generators: Option<String>,
    #[serde(with = "big_str")]
    pub length_bound: BigUint,
    pub ledger: ConstantLedger,
    pub caveats: Vec<String>,
    pub deviations: Vec<String>,
}

mod big_str {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigUint, D::Error> {
        String::deserialize(de)?.parse().map_err(D::Error::custom)
    }
}

impl GrowthCertificate {
    pub fn pair(&self) -> Option<&WordPair> {
        match &self.kind {
            CertificateKind::FreeSemigroup { pair, .. }
            | CertificateKind::FreeSubgroup { pair, .. } => Some(pair),
            _ => None,
        }
    }

    pub fn verified_depth(&self) -> Option<usize> {
        match &self.kind {
            CertificateKind::FreeSemigroup { verified_depth, .. }
            | CertificateKind::FreeSubgroup { verified_depth, .. } => Some(*verified_depth),
            _ => None,
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match &self.kind {
            CertificateKind::FreeSemigroup { .. } => "FreeSemigroup",
            CertificateKind::FreeSubgroup { .. } => "FreeSubgroup",
            CertificateKind::VirtuallyAbelian { .. } => "VirtuallyAbelian",
            CertificateKind::ProductZxE { .. } => "ProductZxE",
            CertificateKind::VirtuallyCyclic { .. } => "VirtuallyCyclic",
        }
    }

    /// Re-runs the freeness oracle at the given depth.
    pub fn reverify(&self, model: &GroupModel, depth: usize) -> Result<bool> {
        match &self.kind {
            CertificateKind::FreeSemigroup { pair, .. } => {
                verify_free_semigroup(model, &pair.u, &pair.w, depth)
            }
            CertificateKind::FreeSubgroup { pair, .. } => {
                verify_free_subgroup(model, &pair.u, &pair.w, depth)
            }
            _ => Err(LabError::NotApplicable(format!(
                "{} certificates carry no pair",
                self.variant_name()
            ))),
        }
    }
}

/// `λ₀ ≥ log 2 / L`, divided by `2d − 1` for a pair in an index-`d` subgroup.
pub fn ueg_lower_bound(cert: &GrowthCertificate) -> Result<f64> {
    let pair = cert.pair().ok_or_else(|| {
        LabError::NotApplicable(format!(
            "{} certificates give no λ₀ bound",
            cert.variant_name()
        ))
    })?;
    let d = cert.subgroup_index.max(1) as f64;
    Ok(std::f64::consts::LN_2 / (pair.max_length().max(1) as f64 * (2.0 * d - 1.0)))
}

fn factorial_u(n: usize) -> usize {
    (1..=n).product::<usize>().max(1)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn nontrivial(x: &GeneratingSet) -> Vec<Word> {
    x.nontrivial().cloned().collect()
}

/// `𝓑 = ∪ Big(s)` over `s ∈ X`, and `B̄ = X^N · 𝓑` with provenance.
pub fn collect_big_domains(
    s: &HHGStructure,
    x: &GeneratingSet,
    opts: &CertifyOptions,
) -> Result<BigDomains> {
    collect_to_level(s, x, opts, s.orthogonality_number())
}

fn collect_to_level(
    s: &HHGStructure,
    x: &GeneratingSet,
    opts: &CertifyOptions,
    levels: usize,
) -> Result<BigDomains> {
    let m = s.group();
    let gens = nontrivial(x);
    if gens.is_empty() {
        return Err(LabError::Precondition(
            "the generating set {1} does not generate".into(),
        ));
    }
    let mut big: Vec<Provenance> = Vec::new();
    let mut seen: BTreeSet<DomainId> = BTreeSet::new();
    for g in &gens {
        let b = big_set(s, g, opts.n_max, opts.threshold)?;
        if b.is_empty() && m.is_torsion_free() {
            return Err(LabError::Anomaly(format!(
                "generator {} of a torsion-free group has an empty big set",
                m.format_word(g)
            )));
        }
        for u in b.domains {
            if seen.insert(u.clone()) {
                big.push(Provenance {
                    label: s.label(&u),
                    domain: u,
                    generator: g.clone(),
                    translate: Word::identity(),
                    translate_length: 0,
                });
            }
        }
    }
    let mut bbar = big.clone();
    let mut frontier = big.clone();
    for _ in 0..levels {
        let mut next = Vec::new();
        for p in &frontier {
            for g in &gens {
                let v = s.act_domain(g, &p.domain)?;
                if seen.insert(v.clone()) {
                    next.push(Provenance {
                        label: s.label(&v),
                        domain: v,
                        generator: p.generator.clone(),
                        translate: m.mul(g, &p.translate),
                        translate_length: p.translate_length + 1,
                    });
                }
            }
        }
        bbar.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(BigDomains { big, bbar })
}

fn non_orthogonal_pair(s: &HHGStructure, bd: &BigDomains) -> Option<CaseOutcome> {
    let m = s.group();
    let mut best: Option<((usize, usize, DomainId, DomainId), CaseOutcome)> = None;
    for (i, a) in bd.bbar.iter().enumerate() {
        for b in &bd.bbar[i + 1..] {
            let rel = s.relation_unchecked(&a.domain, &b.domain);
            let (p, q, relation) = match rel {
                Relation::Orthogonal | Relation::Equal => continue,
                Relation::Transverse => (a, b, Case1Relation::Transverse),
                Relation::NestedIn => (a, b, Case1Relation::Nested),
                Relation::Contains => (b, a, Case1Relation::Nested),
            };
            let conj = |p: &Provenance| {
                m.mul(&m.mul(&p.translate, &p.generator), &m.inverse(&p.translate))
            };
            let (sl, tl) = (2 * p.translate_length + 1, 2 * q.translate_length + 1);
            let key = (sl, tl, p.domain.clone(), q.domain.clone());
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                let outcome = CaseOutcome::Case1 {
                    s: conj(p),
                    t: conj(q),
                    s_length: sl,
                    t_length: tl,
                    u: p.domain.clone(),
                    v: q.domain.clone(),
                    relation,
                };
                best = Some((key, outcome));
            }
        }
    }
    best.map(|(_, o)| o)
}

/// Orders the permutation group generated by the action of `X` on `B̄`.
fn permutation_group_order(s: &HHGStructure, gens: &[Word], bbar: &[DomainId]) -> Result<usize> {
    let index: BTreeMap<&DomainId, usize> = bbar.iter().enumerate().map(|(i, d)| (d, i)).collect();
    let mut perms = Vec::new();
    for g in gens {
        let mut p = Vec::with_capacity(bbar.len());
        for u in bbar {
            let v = s.act_domain(g, u)?;
            p.push(
                *index
                    .get(&v)
                    .ok_or_else(|| LabError::Anomaly("B̄ is not invariant".into()))?,
            );
        }
        perms.push(p);
    }
    let id: Vec<usize> = (0..bbar.len()).collect();
    let mut group: BTreeSet<Vec<usize>> = BTreeSet::from([id.clone()]);
    let mut stack = vec![id];
    while let Some(p) = stack.pop() {
        for g in &perms {
            let q: Vec<usize> = p.iter().map(|&i| g[i]).collect();
            if group.insert(q.clone()) {
                stack.push(q);
            }
        }
    }
    Ok(group.len())
}

/// Case 1 when `B̄` has a non-orthogonal pair (or fails to be invariant),
/// Case 2 otherwise.
pub fn dichotomy(
    s: &HHGStructure,
    x: &GeneratingSet,
    bd: &BigDomains,
    opts: &CertifyOptions,
) -> Result<CaseOutcome> {
    if let Some(out) = non_orthogonal_pair(s, bd) {
        return Ok(out);
    }
    let gens = nontrivial(x);
    let bbar = bd.bbar_domains();
    let set: BTreeSet<&DomainId> = bbar.iter().collect();
    let mut invariant = true;
    for u in &bbar {
        for g in &gens {
            if !set.contains(&s.act_domain(g, u)?) {
                invariant = false;
            }
        }
    }
    if !invariant {
        let wider = collect_to_level(s, x, opts, s.orthogonality_number() + 1)?;
        return non_orthogonal_pair(s, &wider).ok_or_else(|| {
            LabError::Anomaly("B̄ is neither invariant nor contains a non-orthogonal pair".into())
        });
    }
    let mut sorted = bbar.clone();
    sorted.sort();
    let hat_index = permutation_group_order(s, &gens, &sorted)?;
    Ok(CaseOutcome::Case2 {
        bbar: sorted,
        hat_index,
    })
}

fn require_big(s: &HHGStructure, g: &Word, u: &DomainId, opts: &CertifyOptions) -> Result<BigSet> {
    let b = big_set(s, g, opts.n_max, opts.threshold)?;
    if !b.domains.contains(u) {
        return Err(LabError::Precondition(format!(
            "{} is not in the big set of {}",
            s.label(u),
            s.group().format_word(g)
        )));
    }
    Ok(b)
}

/// Outcome of a ping-pong construction before it is wrapped in a certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PingPong {
    pub pair: WordPair,
    pub verified_depth: usize,
    pub y_s_samples: usize,
    pub y_t_samples: usize,
    pub deviations: Vec<String>,
}

/// Ping-pong on transverse domains `U ∈ Big(s)`, `V ∈ Big(t)`. `ledger_power`
/// is `k₁` (or `k₂` when called from the nested case); `lengths` are the
/// X-lengths of `s` and `t`.
#[allow(clippy::too_many_arguments)]
pub fn pingpong_transverse(
    st: &HHGStructure,
    s: &Word,
    t: &Word,
    u: &DomainId,
    v: &DomainId,
    ledger_power: &BigUint,
    ratio: u64,
    lengths: [usize; 2],
    depth: usize,
    opts: &CertifyOptions,
) -> Result<PingPong> {
    if depth < MIN_DEPTH {
        return Err(LabError::Precondition(format!(
            "verification depth must be at least {MIN_DEPTH}, got {depth}"
        )));
    }
    if st.relation(u, v)? != Relation::Transverse {
        return Err(LabError::Precondition(format!(
            "{} and {} are not transverse",
            st.label(u),
            st.label(v)
        )));
    }
    let m = st.group();
    let bs = require_big(st, s, u, opts)?;
    let bt = require_big(st, t, v, opts)?;
    let mut deviations = Vec::new();
    let (power, power_source) = match num_traits::ToPrimitive::to_u64(ledger_power) {
        Some(p) if p <= POWER_CAP => (p, PowerSource::Ledger),
        _ => {
            let ms = stabilization_power(st, &bs)? as u64;
            let mt = stabilization_power(st, &bt)? as u64;
            let p = ratio * lcm(ms, mt);
            deviations.push(format!(
                "ledger power {ledger_power} replaced by the practical power {p}"
            ));
            (p, PowerSource::Practical)
        }
    };
    let sp = m.power(s, power as i64);
    let tp = m.power(t, power as i64);

    let k0 = st.constants().kappa0;
    let rho_vu = st.rho(v, u).expect("transverse");
    let rho_uv = st.rho(u, v).expect("transverse");
    let in_ys = |x: &Word| st.space(u).distance(&st.project(u, x), &rho_vu) > k0;
    let in_yt = |x: &Word| st.space(v).distance(&st.project(v, x), &rho_uv) > k0;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let (mut ys, mut yt) = (0, 0);
    let inverse = [m.inverse(&sp), m.inverse(&tp)];
    for _ in 0..PINGPONG_SAMPLES {
        let x = random_element(m, PINGPONG_SAMPLE_RADIUS, &mut rng);
        let (a, b) = (in_ys(&x), in_yt(&x));
        if a && b {
            return Err(LabError::refuted(
                "ping-pong sets intersect",
                m.format_word(&x),
            ));
        }
        if a {
            ys += 1;
            for g in [&tp, &inverse[1]] {
                let y = m.mul(g, &x);
                if !in_yt(&y) {
                    return Err(LabError::refuted(
                        "t-power does not map Y_s into Y_t",
                        format!("x={}, image={}", m.format_word(&x), m.format_word(&y)),
                    ));
                }
            }
        }
        if b {
            yt += 1;
            for g in [&sp, &inverse[0]] {
                let y = m.mul(g, &x);
                if !in_ys(&y) {
                    return Err(LabError::refuted(
                        "s-power does not map Y_t into Y_s",
                        format!("x={}, image={}", m.format_word(&x), m.format_word(&y)),
                    ));
                }
            }
        }
    }
    if !verify_free_subgroup(m, &sp, &tp, depth)? {
        return Err(LabError::refuted(
            format!("powers {power} do not generate a free group to depth {depth}"),
            format!("s={}, t={}", m.format_word(s), m.format_word(t)),
        ));
    }
    let pl = power as usize;
    let pair = WordPair {
        u_text: m.format_word(&sp),
        w_text: m.format_word(&tp),
        u: sp,
        w: tp,
        lengths: [pl * lengths[0], pl * lengths[1]],
        x_lengths: [pl * lengths[0], pl * lengths[1]],
        power,
        power_source,
    };
    Ok(PingPong {
        pair,
        verified_depth: depth,
        y_s_samples: ys,
        y_t_samples: yt,
        deviations,
    })
}

/// Reduces `U ⊊ V` to transverse domains `U, t^n U` and runs ping-pong on
/// `s, t^n s t^{-n}`.
#[allow(clippy::too_many_arguments)]
pub fn nested_to_transverse(
    st: &HHGStructure,
    s: &Word,
    t: &Word,
    u: &DomainId,
    v: &DomainId,
    ledger: &ConstantLedger,
    lengths: [usize; 2],
    depth: usize,
    opts: &CertifyOptions,
) -> Result<PingPong> {
    if st.relation(u, v)? != Relation::NestedIn {
        return Err(LabError::Precondition(format!(
            "{} is not properly nested in {}",
            st.label(u),
            st.label(v)
        )));
    }
    require_big(st, s, u, opts)?;
    require_big(st, t, v, opts)?;
    let m = st.group();
    let n0 = ledger.n0_u64();
    let target = 10.0 * ledger.d;
    let rho_u = st.rho(u, v).expect("nested");
    let mut deviations = Vec::new();
    let mut chosen = None;
    for n in n0..=4 * n0 {
        let tn = m.power(t, n as i64);
        let moved = st.act_domain(&tn, u)?;
        let sep = match st.rho(&moved, v) {
            Some(r) => st.space(v).distance(&r, &rho_u),
            None => 0.0,
        };
        if sep >= target {
            if n != n0 {
                deviations.push(format!(
                    "rho separation reached at power {n} instead of n0 = {n0}"
                ));
            }
            chosen = Some((n, tn, moved, sep));
            break;
        }
    }
    let (n, tn, moved, sep) = chosen.ok_or_else(|| {
        LabError::refuted(
            format!(
                "rho points never separate by {target} for powers up to {}",
                4 * n0
            ),
            format!(
                "t={}, U={}, V={}",
                m.format_word(t),
                st.label(u),
                st.label(v)
            ),
        )
    })?;
    if st.relation(&moved, u)? != Relation::Transverse {
        return Err(LabError::refuted(
            format!("separated rho points ({sep}) on non-transverse domains"),
            format!("{} and {}", st.label(&moved), st.label(u)),
        ));
    }
    let t2 = m.mul(&m.mul(&tn, s), &m.inverse(&tn));
    let t2_len = 2 * n as usize * lengths[1] + lengths[0];
    let mut out = pingpong_transverse(
        st,
        s,
        &t2,
        u,
        &moved,
        &ledger.k2,
        ledger.pingpong_ratio(),
        [lengths[0], t2_len],
        depth,
        opts,
    )?;
    deviations.append(&mut out.deviations);
    out.deviations = deviations;
    Ok(out)
}

fn endpoint_preserved_word(m: &GroupModel, t: &Word, s: &Word, depth: usize) -> bool {
    (1..=depth.max(1)).any(|n| preserves_endpoint_pair_word(m, t, s, n))
}

/// Top-level branch when `S ∈ B̄`: either a free pair `s^k, t s^k t⁻¹` or
/// virtual cyclicity.
pub fn top_level_certify(
    st: &HHGStructure,
    x: &GeneratingSet,
    ledger_n: usize,
    opts: &CertifyOptions,
) -> Result<(CertificateKind, Option<u64>, Vec<String>)> {
    let m = st.group();
    let top = st
        .top()
        .ok_or_else(|| LabError::Precondition("structure has no unique maximal domain".into()))?;
    let gens = nontrivial(x);
    let mut s = None;
    for g in &gens {
        if big_set(st, g, opts.n_max, opts.threshold)?
            .domains
            .contains(&top)
        {
            s = Some(g.clone());
            break;
        }
    }
    let s = s.ok_or_else(|| {
        LabError::Precondition("no generator is loxodromic on the top-level space".into())
    })?;
    let t = gens
        .iter()
        .find(|t| **t != s && !endpoint_preserved_word(m, t, &s, opts.endpoint_depth));
    let Some(t) = t else {
        return Ok((
            CertificateKind::VirtuallyCyclic { loxodromic: s },
            None,
            Vec::new(),
        ));
    };
    let c = st.constants();
    let k4 = ConstantLedger::new(c, ledger_n, None)
        .k4_u64()
        .unwrap_or(u64::MAX);
    let bound =
        c.k3.unwrap_or(0)
            .max(k4.min(POWER_CAP))
            .max(K3_SEARCH_FLOOR);
    let tinv = m.inverse(t);
    let mut found = None;
    for k in 1..=bound {
        let u = m.power(&s, k as i64);
        let w = m.mul(&m.mul(t, &u), &tinv);
        if verify_free_subgroup(m, &u, &w, opts.depth)? {
            found = Some((k, u, w));
            break;
        }
    }
    let (k, u, w) = found.ok_or_else(|| {
        LabError::refuted(
            format!("no power up to {bound} gives a free pair"),
            format!("s={}, t={}", m.format_word(&s), m.format_word(t)),
        )
    })?;
    let kl = k as usize;
    let pair = WordPair {
        u_text: m.format_word(&u),
        w_text: m.format_word(&w),
        u,
        w,
        lengths: [kl, kl + 2],
        x_lengths: [kl, kl + 2],
        power: k,
        power_source: PowerSource::Searched,
    };
    let fallback = semigroup_pair(m, &s, t, k4.min(POWER_CAP), [1, 1], opts.depth)?;
    let kind = CertificateKind::FreeSubgroup {
        pair,
        verified_depth: opts.depth,
        acylindricity_assumed: true,
        semigroup_fallback: fallback,
    };
    Ok((kind, Some(k), Vec::new()))
}

/// First pair among `s^{±k}, t s^{±k} t⁻¹` whose positive words are free.
/// `lengths` are the lengths of `s` and `t` over the relevant generating set.
fn semigroup_pair(
    m: &GroupModel,
    s: &Word,
    t: &Word,
    k: u64,
    lengths: [usize; 2],
    depth: usize,
) -> Result<Option<WordPair>> {
    let tinv = m.inverse(t);
    let kl = k as usize;
    for (a, b) in [(1i64, 1i64), (1, -1), (-1, 1), (-1, -1)] {
        let u = m.power(s, a * k as i64);
        let w = m.mul(&m.mul(t, &m.power(s, b * k as i64)), &tinv);
        if verify_free_semigroup(m, &u, &w, depth)? {
            let l = [kl * lengths[0], 2 * lengths[1] + kl * lengths[0]];
            return Ok(Some(WordPair {
                u_text: m.format_word(&u),
                w_text: m.format_word(&w),
                u,
                w,
                lengths: l,
                x_lengths: l,
                power: k,
                power_source: PowerSource::Ledger,
            }));
        }
    }
    Ok(None)
}

/// Elements of `X^{≤ r}` with their X-lengths, by increasing length.
fn short_products(m: &GroupModel, gens: &[Word], r: usize) -> Vec<(Word, usize)> {
    let mut seen: BTreeSet<Word> = BTreeSet::from([Word::identity()]);
    let mut out = Vec::new();
    let mut level = vec![Word::identity()];
    for len in 1..=r {
        let mut next = Vec::new();
        for g in &level {
            for x in gens {
                let h = m.mul(g, x);
                if seen.insert(h.clone()) {
                    next.push(h);
                }
            }
        }
        next.sort_by(|a, b| a.shortlex_key().cmp(&b.shortlex_key()));
        out.extend(next.iter().map(|g| (g.clone(), len)));
        level = next;
    }
    out
}

/// Estimated polynomial degree `log(β(2n)/β(n)) / log 2` of the X-ball.
pub fn growth_degree_estimate(m: &GroupModel, x: &GeneratingSet) -> Result<f64> {
    let (a, b) = GROWTH_EVIDENCE_RADII;
    let ball = cayley_ball(m, x, b)?;
    let (ca, cb) = (ball.counts[a] as f64, ball.counts[b] as f64);
    Ok((cb / ca).ln() / (b as f64 / a as f64).ln())
}

/// Case 2 with `S ∉ B̄`: pass to the subgroup fixing `B̄` pointwise and test
/// endpoint preservation on each `𝒞U`.
pub fn case2_branch(
    st: &HHGStructure,
    x: &GeneratingSet,
    bbar: &[DomainId],
    hat_index: usize,
    ledger: &ConstantLedger,
    opts: &CertifyOptions,
) -> Result<(CertificateKind, Option<String>, Vec<String>)> {
    let m = st.group();
    let n = st.orthogonality_number();
    let gens = nontrivial(x);
    let fixes = |g: &Word| {
        bbar.iter()
            .all(|u| st.act_domain(g, u).ok().as_ref() == Some(u))
    };
    let (y_prime, y_lengths, y_text) = if hat_index > 1 {
        let table = schreier_generators(m, x, &fixes, hat_index)?;
        let pairs: Vec<(Word, usize)> = table
            .generators
            .elements()
            .iter()
            .cloned()
            .zip(table.generator_lengths.iter().cloned())
            .filter(|(w, _)| !w.is_empty())
            .collect();
        let text = table.generators.encode(m);
        (
            pairs.iter().map(|p| p.0.clone()).collect::<Vec<_>>(),
            pairs.iter().map(|p| p.1).collect::<Vec<_>>(),
            Some(text),
        )
    } else {
        (gens.clone(), vec![1; gens.len()], None)
    };
    let candidates = short_products(m, &gens, 2 * n + 1);
    let k_bound = factorial_u(n).max(hat_index);
    let mut loxodromics = Vec::new();
    for u in bbar {
        let mut found = None;
        for (g, len) in &candidates {
            if big_set(st, g, opts.n_max, opts.threshold)?
                .domains
                .contains(u)
            {
                let k = (1..=k_bound)
                    .find(|&k| fixes(&m.power(g, k as i64)))
                    .ok_or_else(|| {
                        LabError::invalid("no power of a loxodromic fixes B̄", m.format_word(g))
                    })?;
                found = Some((m.power(g, k as i64), k * len));
                break;
            }
        }
        let (su, su_len) = found.ok_or_else(|| {
            LabError::invalid(
                format!(
                    "no element of X^{} is loxodromic on {}",
                    2 * n + 1,
                    st.label(u)
                ),
                st.label(u),
            )
        })?;
        loxodromics.push((u.clone(), su, su_len));
    }
    let k4 = ledger.k4_u64().map_or(POWER_CAP, |k| k.min(POWER_CAP));
    for (u, su, su_len) in &loxodromics {
        let space = st.space(u);
        let (_, iso_s) = st.act(su, u)?;
        for (t, t_len) in y_prime.iter().zip(&y_lengths) {
            let (tu, iso_t) = st.act(t, u)?;
            if &tu != u {
                return Err(LabError::Anomaly(format!(
                    "{} moves {}",
                    m.format_word(t),
                    st.label(u)
                )));
            }
            if preserves_endpoint_pair(space, &iso_t, &iso_s, opts.endpoint_depth)? {
                continue;
            }
            let y_lens = if hat_index > 1 {
                [1, 1]
            } else {
                [*su_len, *t_len]
            };
            let pair = semigroup_pair(m, su, t, k4, y_lens, opts.depth)?.ok_or_else(|| {
                LabError::refuted(
                    format!("no pair among the powers ±{k4} generates a free semigroup"),
                    format!("s={}, t={}", m.format_word(su), m.format_word(t)),
                )
            })?;
            let k = k4 as usize;
            let pair = WordPair {
                x_lengths: [k * su_len, 2 * t_len + k * su_len],
                ..pair
            };
            return Ok((
                CertificateKind::FreeSemigroup {
                    pair,
                    verified_depth: opts.depth,
                },
                y_text,
                Vec::new(),
            ));
        }
    }
    let quasi_lines: Vec<QuasiLineEvidence> = loxodromics
        .iter()
        .map(|(u, su, _)| QuasiLineEvidence {
            domain: st.label(u),
            loxodromic: su.clone(),
            detected_q: quasi_line_detect(st.space(u), QUASI_LINE_RADIUS, QUASI_LINE_Q_MAX)
                .ok()
                .flatten(),
        })
        .collect();
    let mut deviations = Vec::new();
    for q in &quasi_lines {
        if q.detected_q.is_none() {
            deviations.push(format!("quasi-line detection did not confirm {}", q.domain));
        }
    }
    let decomposition = product_decomposition(st)?;
    let in_bbar: BTreeSet<&DomainId> = bbar.iter().collect();
    let e_blocks: Vec<Vec<String>> = decomposition
        .blocks
        .iter()
        .filter(|b| !b.iter().any(|d| in_bbar.contains(d)))
        .map(|b| b.iter().map(|d| st.label(d)).collect())
        .collect();
    let all_lines = decomposition.factors.iter().all(|f| f.quasi_line.is_some());
    let degree = growth_degree_estimate(m, x)?;
    let polynomial = degree <= decomposition.blocks.len() as f64 + 0.5;
    let kind = if all_lines && polynomial {
        CertificateKind::VirtuallyAbelian {
            decomposition,
            quasi_lines,
            growth_degree_estimate: degree,
        }
    } else {
        CertificateKind::ProductZxE {
            quasi_lines,
            e_blocks,
            decomposition,
        }
    };
    Ok((kind, y_text, deviations))
}

fn standard_caveats(opts: &CertifyOptions) -> Vec<String> {
    vec![
        format!(
            "big sets detected by exact tree translation length, else orbit diameter above {} * {}",
            opts.threshold, opts.n_max
        ),
        format!(
            "endpoint preservation tested to depth {}",
            opts.endpoint_depth
        ),
        format!(
            "freeness verified by normal-form distinctness to depth {}",
            opts.depth
        ),
    ]
}

/// Runs the full pipeline for one generating set.
pub fn certify(
    st: &HHGStructure,
    x: &GeneratingSet,
    opts: &CertifyOptions,
) -> Result<GrowthCertificate> {
    if opts.depth < MIN_DEPTH {
        return Err(LabError::Precondition(format!(
            "verification depth must be at least {MIN_DEPTH}, got {}",
            opts.depth
        )));
    }
    let m = st.group();
    let n = st.orthogonality_number();
    let bd = collect_big_domains(st, x, opts)?;
    let case = dichotomy(st, x, &bd, opts)?;
    let base_ledger = ConstantLedger::new(st.constants(), n, None);
    let two_n1 = BigUint::from(2 * n as u64 + 1);
    let (kind, ledger, route, index, sub_gens, bound, deviations) = match &case {
        CaseOutcome::Case1 {
            s,
            t,
            s_length,
            t_length,
            u,
            v,
            relation,
        } => {
            let pp = match relation {
                Case1Relation::Transverse => pingpong_transverse(
                    st,
                    s,
                    t,
                    u,
                    v,
                    &base_ledger.k1,
                    base_ledger.pingpong_ratio(),
                    [*s_length, *t_length],
                    opts.depth,
                    opts,
                )?,
                Case1Relation::Nested => nested_to_transverse(
                    st,
                    s,
                    t,
                    u,
                    v,
                    &base_ledger,
                    [*s_length, *t_length],
                    opts.depth,
                    opts,
                )?,
            };
            let (route, bound) = match relation {
                Case1Relation::Transverse => ("transverse ping-pong", &base_ledger.k1 * &two_n1),
                Case1Relation::Nested => {
                    let two_n = BigUint::from(2u32) * BigUint::from(4 * base_ledger.n0_u64());
                    ("nested ping-pong", (&base_ledger.k2 + two_n) * &two_n1)
                }
            };
            let kind = CertificateKind::FreeSubgroup {
                pair: pp.pair,
                verified_depth: pp.verified_depth,
                acylindricity_assumed: false,
                semigroup_fallback: None,
            };
            (
                kind,
                base_ledger.clone(),
                route,
                1,
                None,
                bound,
                pp.deviations,
            )
        }
        CaseOutcome::Case2 { bbar, hat_index } => {
            let top = st.top();
            if top.as_ref().is_some_and(|t| bbar.contains(t)) {
                let (kind, k3, dev) = top_level_certify(st, x, n, opts)?;
                let ledger = ConstantLedger::new(st.constants(), n, k3);
                let bound = ledger.m.clone();
                (kind, ledger, "top level", 1, None, bound, dev)
            } else {
                let (kind, sub, dev) = case2_branch(st, x, bbar, *hat_index, &base_ledger, opts)?;
                let bound = base_ledger.m.clone();
                let route = match kind {
                    CertificateKind::FreeSemigroup { .. } => "case 2 endpoint failure",
                    _ => "case 2",
                };
                (
                    kind,
                    base_ledger.clone(),
                    route,
                    *hat_index,
                    sub,
                    bound,
                    dev,
                )
            }
        }
    };
    let cert = GrowthCertificate {
        structure: st.name().to_string(),
        generating_set: x.encode(m),
        kind,
        route: route.to_string(),
        case,
        subgroup_index: index,
        subgroup_generators: sub_gens,
        length_bound: bound,
        ledger,
        caveats: standard_caveats(opts),
        deviations,
    };
    if let Some(p) = cert.pair() {
        if BigUint::from(p.max_x_length()) > cert.length_bound {
            return Err(LabError::Anomaly(format!(
                "certified length {} exceeds the bound {}",
                p.max_x_length(),
                cert.length_bound
            )));
        }
    }
    Ok(cert)
}

/// `β_X(n) ≥ 2^{⌊n/L⌋}` for `n ≤ 3L`, as `(n, β_X(n), 2^{⌊n/L⌋})` rows.
pub fn growth_consistency(
    m: &GroupModel,
    x: &GeneratingSet,
    l: usize,
) -> Result<Vec<(usize, u64, u64)>> {
    let l = l.max(1);
    let ball = cayley_ball(m, x, 3 * l)?;
    Ok((0..=3 * l)
        .map(|n| (n, ball.counts[n], 1u64 << (n / l)))
        .collect())
}
