//! Sampled checks of the nine HHS axioms.
//!
//! Every axiom is measured as "worst observed value against the declared
//! constant". Failures are data: each failing measurement carries the
//! witness that produced its worst value.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{DomainId, HHGStructure, Relation};
use crate::group::{random_element, Word};
use crate::space::{four_point_delta, Point};

const EPS: f64 = 1e-9;
/// Word length of sampled group elements.
pub const SAMPLE_RADIUS: usize = 6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub name: String,
    pub declared: f64,
    pub observed: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomResult {
    pub axiom: u8,
    pub name: String,
    pub passed: bool,
    pub samples: usize,
    pub measurements: Vec<Measurement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub structure: String,
    pub sample_budget: usize,
    pub seed: u64,
    pub sample_radius: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generation_radius: Option<usize>,
    pub delta_estimator: String,
    pub axioms: Vec<AxiomResult>,
    /// Checks outside the nine axioms: normalization, equivariance, orbits.
    pub extra: Vec<Measurement>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.axioms.iter().all(|a| a.passed)
    }

    pub fn failing_axioms(&self) -> Vec<u8> {
        self.axioms
            .iter()
            .filter(|a| !a.passed)
            .map(|a| a.axiom)
            .collect()
    }

    pub fn extras_passed(&self) -> bool {
        self.extra.iter().all(|m| m.passed)
    }
}

struct Tracker {
    name: String,
    declared: f64,
    observed: f64,
    witness: Option<String>,
}

impl Tracker {
    fn new(name: &str, declared: f64) -> Self {
        Tracker {
            name: name.into(),
            declared,
            observed: 0.0,
            witness: None,
        }
    }

    fn record(&mut self, value: f64, witness: impl FnOnce() -> String) {
        if value > self.observed + EPS || (self.witness.is_none() && value > self.declared + EPS) {
            if value > self.observed {
                self.observed = value;
            }
            if value > self.declared + EPS {
                self.witness = Some(witness());
            }
        }
    }

    fn finish(self) -> Measurement {
        Measurement {
            passed: self.observed <= self.declared + EPS,
            name: self.name,
            declared: self.declared,
            observed: self.observed,
            witness: self.witness,
        }
    }
}

fn result(axiom: u8, name: &str, samples: usize, trackers: Vec<Tracker>) -> AxiomResult {
    let measurements: Vec<Measurement> = trackers.into_iter().map(Tracker::finish).collect();
    let witness = measurements
        .iter()
        .find(|m| !m.passed)
        .and_then(|m| m.witness.clone());
    AxiomResult {
        axiom,
        name: name.into(),
        passed: measurements.iter().all(|m| m.passed),
        samples,
        measurements,
        witness,
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(stream.wrapping_mul(1_000_003)))
}

struct Ctx<'a> {
    s: &'a HHGStructure,
    budget: usize,
    seed: u64,
}

impl Ctx<'_> {
    fn element(&self, rng: &mut ChaCha8Rng) -> Word {
        random_element(self.s.group(), SAMPLE_RADIUS, rng)
    }

    fn w(&self, g: &Word) -> String {
        self.s.group().format_word(g)
    }

    fn l(&self, u: &DomainId) -> String {
        self.s.label(u)
    }

    fn listed(&self) -> Vec<DomainId> {
        self.s.listed_domains().collect()
    }

    fn cosets(&self) -> Vec<DomainId> {
        self.s
            .domains()
            .iter()
            .filter(|d| matches!(d, DomainId::Coset { .. }))
            .cloned()
            .collect()
    }

    fn random_cosets(&self, rng: &mut ChaCha8Rng, k: usize) -> Vec<DomainId> {
        let all = self.cosets();
        (0..k).filter_map(|_| all.choose(rng).cloned()).collect()
    }

    fn pt(&self, p: &Point) -> String {
        match p {
            Point::Word { w } => format!("{w:?}"),
            Point::Center { g } => format!("center({})", self.w(g)),
            Point::Coset { factor, rep } => format!("coset({},{factor})", self.w(rep)),
            other => format!("{other:?}"),
        }
    }
}

/// Runs all nine axiom checks plus the extra checks.
pub fn check_axioms(s: &HHGStructure, sample_budget: usize, seed: u64) -> AxiomReport {
    let budget = sample_budget.max(1);
    let ctx = Ctx { s, budget, seed };
    type Check = fn(&Ctx) -> AxiomResult;
    let checks: [Check; 9] = [
        axiom1, axiom2, axiom3, axiom4, axiom5, axiom6, axiom7, axiom8, axiom9,
    ];
    let axioms: Vec<AxiomResult> = checks.par_iter().map(|c| c(&ctx)).collect();
    let extra = vec![normalization(&ctx), equivariance(&ctx), finite_orbits(&ctx)];
    AxiomReport {
        structure: s.name().to_string(),
        sample_budget: budget,
        seed,
        sample_radius: SAMPLE_RADIUS,
        generation_radius: s.generation_radius(),
        delta_estimator: "four-point".into(),
        axioms,
        extra,
    }
}

fn distinct_spaces(ctx: &Ctx) -> Vec<DomainId> {
    let mut out = ctx.listed();
    let mut seen_family = BTreeSet::new();
    for c in ctx.cosets() {
        if let DomainId::Coset { family, .. } = &c {
            if seen_family.insert(*family) {
                out.push(c.clone());
            }
        }
    }
    out
}

fn axiom1(ctx: &Ctx) -> AxiomResult {
    let s = ctx.s;
    let c = s.constants();
    let mut rng = rng_for(ctx.seed, 1);
    let mut xi = Tracker::new("projection diameter (xi)", c.xi);
    let mut delta = Tracker::new("hyperbolicity (delta, four-point)", c.delta);
    let mut lip = Tracker::new("coarse Lipschitz constant (K)", c.k_proj);
    let mut qc = Tracker::new("quasiconvexity of projection image (K)", c.k_proj);
    for (k, u) in distinct_spaces(ctx).iter().enumerate() {
        let d = four_point_delta(
            s.space(u),
            ctx.budget.clamp(4, 200),
            ctx.seed.wrapping_add(k as u64),
        );
        delta.record(d, || format!("space of {}", ctx.l(u)));
    }
    let gens: Vec<Word> = s
        .group()
        .positive_letters()
        .into_iter()
        .map(Word::letter)
        .collect();
    for i in 0..ctx.budget {
        let x = ctx.element(&mut rng);
        let y = if i % 2 == 0 && !gens.is_empty() {
            s.group().mul(&x, gens.choose(&mut rng).expect("nonempty"))
        } else {
            ctx.element(&mut rng)
        };
        let dist = s.group().distance(&x, &y) as f64;
        for u in s.domains_for_pair(&x, &y) {
            xi.record(0.0, String::new);
            let (px, py) = (s.project(&u, &x), s.project(&u, &y));
            let du = s.space(&u).distance(&px, &py);
            lip.record(du / (dist + 1.0), || {
                format!(
                    "{}: x={}, y={}, d={dist}, d_U={du}",
                    ctx.l(&u),
                    ctx.w(&x),
                    ctx.w(&y)
                )
            });
            if let Some(path) = s.space(&u).geodesic(&px, &py) {
                for p in path {
                    let gap = s.projection_gap(&u, &p);
                    qc.record(gap, || {
                        format!("{}: point {} off the image by {gap}", ctx.l(&u), ctx.pt(&p))
                    });
                }
            }
        }
    }
    result(1, "projections", ctx.budget, vec![xi, delta, lip, qc])
}

fn axiom2(ctx: &Ctx) -> AxiomResult {
    let s = ctx.s;
    let listed = ctx.listed();
    let mut unique = Tracker::new("missing unique maximal domain", 0.0);
    if s.top().is_none() {
        unique.record(1.0, || "no unique ⊑-maximal domain".into());
    }
    let mut trans = Tracker::new("transitivity violations", 0.0);
    let mut count = 0.0;
    for u in &listed {
        for v in &listed {
            for w in &listed {
                if s.relation_unchecked(u, v) == Relation::NestedIn
                    && s.relation_unchecked(v, w) == Relation::NestedIn
                    && s.relation_unchecked(u, w) != Relation::NestedIn
                {
                    count += 1.0;
                    trans.record(count, || {
                        format!(
                            "{} ⊑ {} ⊑ {} but not {} ⊑ {}",
                            ctx.l(u),
                            ctx.l(v),
                            ctx.l(w),
                            ctx.l(u),
                            ctx.l(w)
                        )
                    });
                }
            }
        }
    }
    let mut rho = Tracker::new("diameter of rho sets (xi)", s.constants().xi);
    for u in s.domains() {
        for w in &listed {
            if s.relation_unchecked(u, w) == Relation::NestedIn && s.rho(u, w).is_some() {
                rho.record(0.0, String::new);
            }
        }
    }
    result(2, "nesting", listed.len(), vec![unique, trans, rho])
}

fn axiom3(ctx: &Ctx) -> AxiomResult {
    let s = ctx.s;
    let listed = ctx.listed();
    let mut closure = Tracker::new("V ⊑ W ⊥ U without V ⊥ U", 0.0);
    let mut count = 0.0;
    let mut sample: Vec<DomainId> = listed.clone();
    let mut rng = rng_for(ctx.seed, 3);
    sample.extend(ctx.random_cosets(&mut rng, 4));
    for v in &sample {
        for w in &listed {
            for u in &listed {
                if s.nested(v, w) && s.orthogonal(w, u) && !s.orthogonal(v, u) {
                    count += 1.0;
                    closure.record(count, || {
                        format!("{} ⊑ {} ⊥ {}", ctx.l(v), ctx.l(w), ctx.l(u))
                    });
                }
            }
        }
    }
    let mut container = Tracker::new("orthogonal complements without container", 0.0);
    let mut count = 0.0;
    for t in &listed {
        let below: Vec<&DomainId> = listed.iter().filter(|v| s.nested(v, t)).collect();
        for u in &below {
            let orth: Vec<&&DomainId> = below.iter().filter(|v| s.orthogonal(v, u)).collect();
            if orth.is_empty() {
                continue;
            }
            let found = below
                .iter()
                .any(|w| *w != t && orth.iter().all(|v| s.nested(v, w)));
            if !found {
                count += 1.0;
                container.record(count, || format!("T={}, U={}", ctx.l(t), ctx.l(u)));
            }
        }
    }
    let mut sym = Tracker::new("asymmetric or reflexive orthogonality", 0.0);
    for u in &listed {
        if s.orthogonal(u, u) {
            sym.record(1.0, || format!("{} ⊥ {}", ctx.l(u), ctx.l(u)));
        }
        for v in &listed {
            if s.orthogonal(u, v) != s.orthogonal(v, u) {
                sym.record(1.0, || format!("{} / {}", ctx.l(u), ctx.l(v)));
            }
        }
    }
    result(
        3,
        "orthogonality",
        sample.len(),
        vec![sym, closure, container],
    )
}

fn axiom4(ctx: &Ctx) -> AxiomResult {
    let s = ctx.s;
    let k0 = s.constants().kappa0;
    let mut rng = rng_for(ctx.seed, 4);
    let mut transverse = Tracker::new("transverse consistency (kappa0)", k0);
    let mut nested = Tracker::new("nested consistency (kappa0)", k0);
    let mut compat = Tracker::new("rho compatibility (kappa0)", k0);
    let listed = ctx.listed();
    let mut pairs: Vec<(DomainId, DomainId)> = Vec::new();
    for u in &listed {
        for v in &listed {
            if u != v
                && matches!(
                    s.relation_unchecked(u, v),
                    Relation::Transverse | Relation::NestedIn
                )
            {
                pairs.push((u.clone(), v.clone()));
            }
        }
    }
    for i in 0..ctx.budget {
        let x = ctx.element(&mut rng);
        let mut round = pairs.clone();
        let cs = ctx.random_cosets(&mut rng, 2);
        if cs.len() == 2 && cs[0] != cs[1] {
            round.push((cs[0].clone(), cs[1].clone()));
        }
        for c in &cs {
            for w in &listed {
                if s.relation_unchecked(c, w) == Relation::NestedIn {
                    round.push((c.clone(), w.clone()));
                }
            }
        }
        for (v, w) in &round {
            let (sv, sw) = (s.space(v), s.space(w));
            let (pv, pw) = (s.project(v, &x), s.project(w, &x));
            match s.relation_unchecked(v, w) {
                Relation::Transverse => {
                    let a = sw.distance(&pw, &s.rho(v, w).expect("transverse"));
                    let b = sv.distance(&pv, &s.rho(w, v).expect("transverse"));
                    transverse.record(a.min(b), || {
                        format!(
                            "V={}, W={}, x={}: d_W(x,ρ^V_W)={a}, d_V(x,ρ^W_V)={b}",
                            ctx.l(v),
                            ctx.l(w),
                            ctx.w(&x)
                        )
                    });
                }
                Relation::NestedIn => {
                    let rho = s.rho(v, w).expect("nested");
                    let a = sw.distance(&pw, &rho);
                    let down = s.rho_down(w, v, &pw);
                    let b = sv.distance(&pv, &down);
                    nested.record(a.min(b), || {
                        format!(
                            "V={} ⊑ W={}, x={}: d_W(π_W(x), ρ^V_W={})={a}, diam(π_V(x) ∪ ρ^W_V(π_W(x)))={b}",
                            ctx.l(v),
                            ctx.l(w),
                            ctx.w(&x),
                            ctx.pt(&rho)
                        )
                    });
                }
                _ => {}
            }
        }
        if i > 0 {
            continue;
        }
        // ρ compatibility only involves the structure, not x.
        for u in &listed {
            for v in &listed {
                if !s.nested(u, v) || u == v {
                    continue;
                }
                for w in &listed {
                    let rel_vw = s.relation_unchecked(v, w);
                    let applies = rel_vw == Relation::NestedIn
                        || (rel_vw == Relation::Transverse && !s.orthogonal(w, u));
                    if !applies {
                        continue;
                    }
                    if let (Some(a), Some(b)) = (s.rho(u, w), s.rho(v, w)) {
                        let d = s.space(w).distance(&a, &b);
                        compat.record(d, || {
                            format!(
                                "U={}, V={}, W={}: d_W(ρ^U_W, ρ^V_W)={d}",
                                ctx.l(u),
                                ctx.l(v),
                                ctx.l(w)
                            )
                        });
                    }
                }
            }
        }
    }
    result(
        4,
        "transversality and consistency",
        ctx.budget,
        vec![transverse, nested, compat],
    )
}

fn axiom5(ctx: &Ctx) -> AxiomResult {
    let s = ctx.s;
    let mut chain = Tracker::new(
        "longest nested chain (n)",
        s.constants().complexity_n as f64,
    );
    let longest = s.longest_chain() as f64;
    chain.record(longest, || {
        format!("a chain of {longest} pairwise nested domains exists")
    });
    result(5, "finite complexity", 1, vec![chain])
}

fn maximal(s: &HHGStructure, set: &[DomainId]) -> Vec<DomainId> {
    set.iter()
        .filter(|t| {
            !set.iter()
                .any(|o| o != *t && s.relation_unchecked(t, o) == Relation::NestedIn)
        })
        .cloned()
        .collect()
}

fn axiom6(ctx: &Ctx) -> AxiomResult {
    let s = ctx.s;
    let c = s.constants();
    let mut rng = rng_for(ctx.seed, 6);
    let mut e_bound = Tracker::new("max(xi, kappa0) (E)", c.e);
    e_bound.record(c.xi.max(c.kappa0), || "E < max(xi, kappa0)".into());
    let mut lambda = Tracker::new("large-link multiplier (lambda)", c.lambda_llink.max(1.0));
    let listed = ctx.listed();
    for _ in 0..ctx.budget {
        let x = ctx.element(&mut rng);
        let y = ctx.element(&mut rng);
        let doms = s.domains_for_pair(&x, &y);
        for w in &listed {
            let below: Vec<DomainId> = doms
                .iter()
                .filter(|t| s.relation_unchecked(t, w) == Relation::NestedIn)
                .filter(|t| s.domain_distance(t, &x, &y) >= c.e)
                .cloned()
                .collect();
            if below.is_empty() {
                continue;
            }
            let tops = maximal(s, &below);
            let dw = s.domain_distance(w, &x, &y);
            let px = s.project(w, &x);
            let far = tops
                .iter()
                .map(|t| s.space(w).distance(&px, &s.rho(t, w).expect("nested")))
                .fold(0.0, f64::max);
            let needed = (tops.len() as f64).max(far) / (dw + 1.0);
            lambda.record(needed, || {
                format!(
                    "W={}, x={}, x'={}: d_W={dw}, {} maximal domains with d_T ≥ E, farthest ρ at {far}",
                    ctx.l(w),
                    ctx.w(&x),
                    ctx.w(&y),
                    tops.len()
                )
            });
        }
    }
    result(6, "large links", ctx.budget, vec![e_bound, lambda])
}

fn axiom7(ctx: &Ctx) -> AxiomResult {
    let s = ctx.s;
    let c = s.constants();
    let mut rng = rng_for(ctx.seed, 7);
    let mut bgi = Tracker::new("bounded geodesic image (E)", c.e);
    let listed = ctx.listed();
    let parents: Vec<&DomainId> = listed
        .iter()
        .filter(|w| {
            s.domains()
                .iter()
                .any(|v| s.relation_unchecked(v, w) == Relation::NestedIn)
        })
        .collect();
    for i in 0..ctx.budget {
        for w in &parents {
            let space = s.space(w);
            let (p, q, mut inner) = if i % 2 == 0 {
                let (x, y) = (ctx.element(&mut rng), ctx.element(&mut rng));
                (
                    s.project(w, &x),
                    s.project(w, &y),
                    s.relevant_cosets(&x, &y),
                )
            } else {
                let pts = space.sample_points(2, SAMPLE_RADIUS, &mut rng);
                (pts[0].clone(), pts[1].clone(), Vec::new())
            };
            let Some(gamma) = space.geodesic(&p, &q) else {
                continue;
            };
            inner.extend(listed.iter().cloned());
            inner.extend(ctx.random_cosets(&mut rng, 3));
            inner.sort();
            inner.dedup();
            for v in inner
                .iter()
                .filter(|v| s.relation_unchecked(v, w) == Relation::NestedIn)
            {
                let rho = s.rho(v, w).expect("nested");
                let near = gamma
                    .iter()
                    .map(|g| space.distance(g, &rho))
                    .fold(f64::INFINITY, f64::min);
                let images: Vec<Point> = gamma.iter().map(|g| s.rho_down(w, v, g)).collect();
                let sv = s.space(v);
                let mut diam: f64 = 0.0;
                for a in &images {
                    for b in &images {
                        diam = diam.max(sv.distance(a, b));
                    }
                }
                bgi.record(near.min(diam), || {
                    format!(
                        "W={}, V={}, geodesic {}→{}: diam ρ^W_V(γ)={diam}, d(γ, ρ^V_W)={near}",
                        ctx.l(w),
                        ctx.l(v),
                        ctx.pt(&p),
                        ctx.pt(&q)
                    )
                });
            }
        }
    }
    result(7, "bounded geodesic image", ctx.budget, vec![bgi])
}

fn orthogonal_families(s: &HHGStructure, listed: &[DomainId]) -> Vec<Vec<DomainId>> {
    let mut out = Vec::new();
    let n = listed.len();
    for mask in 1u32..(1u32 << n.min(16)) {
        let fam: Vec<DomainId> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| listed[i].clone())
            .collect();
        let ok = fam
            .iter()
            .enumerate()
            .all(|(i, a)| fam[i + 1..].iter().all(|b| s.orthogonal(a, b)));
        if ok {
            out.push(fam);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

fn axiom8(ctx: &Ctx) -> AxiomResult {
    let s = ctx.s;
    let m = s.group();
    let mut rng = rng_for(ctx.seed, 8);
    let mut pr = Tracker::new("partial realization (alpha)", s.constants().alpha);
    let listed = ctx.listed();
    let mut families = orthogonal_families(s, &listed);
    let coset_rounds = if s.has_families() {
        families.len().max(1)
    } else {
        0
    };
    for _ in 0..coset_rounds {
        families.push(Vec::new());
    }
    for i in 0..ctx.budget {
        let mut fam = families[i % families.len()].clone();
        if fam.is_empty() {
            fam = ctx.random_cosets(&mut rng, 1);
        }
        let targets: Vec<Point> = fam
            .iter()
            .map(|v| s.project(v, &ctx.element(&mut rng)))
            .collect();
        let sections: Vec<Word> = fam
            .iter()
            .zip(&targets)
            .map(|(v, p)| s.section(v, p).unwrap_or_default())
            .collect();
        let mut best = f64::INFINITY;
        let mut best_x = Word::identity();
        for perm in permutations(fam.len().min(4)) {
            let x = perm
                .iter()
                .fold(Word::identity(), |acc, &k| m.mul(&acc, &sections[k]));
            let mut worst: f64 = 0.0;
            for (v, p) in fam.iter().zip(&targets) {
                worst = worst.max(s.space(v).distance(&s.project(v, &x), p));
                let mut others: Vec<DomainId> = listed.clone();
                others.extend(s.relevant_cosets(&Word::identity(), &x));
                others.extend(ctx.cosets().into_iter().take(8));
                for w in &others {
                    if w == v {
                        continue;
                    }
                    let rel = s.relation_unchecked(v, w);
                    if matches!(rel, Relation::NestedIn | Relation::Transverse) {
                        let rho = s.rho(v, w).expect("defined");
                        worst = worst.max(s.space(w).distance(&s.project(w, &x), &rho));
                    }
                }
            }
            if worst < best {
                best = worst;
                best_x = x;
            }
        }
        pr.record(best, || {
            let names: Vec<String> = fam.iter().map(|v| ctx.l(v)).collect();
            let pts: Vec<String> = targets.iter().map(|p| ctx.pt(p)).collect();
            format!(
                "family {{{}}} with targets [{}]: best candidate {} misses by {best}",
                names.join(","),
                pts.join(", "),
                ctx.w(&best_x)
            )
        });
    }
    result(8, "partial realization", ctx.budget, vec![pr])
}

fn axiom9(ctx: &Ctx) -> AxiomResult {
    let s = ctx.s;
    let m = s.group();
    let c = s.constants();
    let mut rng = rng_for(ctx.seed, 9);
    let mut uniq = Tracker::new("pairs far apart but close in every domain", 0.0);
    let gens: Vec<Word> = m.positive_letters().into_iter().map(Word::letter).collect();
    let mut violations = 0.0;
    for i in 0..ctx.budget {
        let x = ctx.element(&mut rng);
        let y = if i % 2 == 1 && !gens.is_empty() {
            let g = gens.choose(&mut rng).expect("nonempty");
            m.mul(&x, &m.power(g, rng.gen_range(1..=8)))
        } else {
            ctx.element(&mut rng)
        };
        let dist = m.distance(&x, &y) as f64;
        let best = s
            .domains_for_pair(&x, &y)
            .iter()
            .map(|u| s.domain_distance(u, &x, &y))
            .fold(0.0, f64::max);
        for entry in &c.theta_u_table {
            if dist >= entry.theta_u && best < entry.kappa {
                violations += 1.0;
                uniq.record(violations, || {
                    format!(
                        "x={}, y={}: d(x,y)={dist} ≥ θ_u({})={}, but max_V d_V(x,y)={best}",
                        ctx.w(&x),
                        ctx.w(&y),
                        entry.kappa,
                        entry.theta_u
                    )
                });
                break;
            }
        }
    }
    result(9, "uniqueness", ctx.budget, vec![uniq])
}

fn normalization(ctx: &Ctx) -> Measurement {
    let s = ctx.s;
    let mut rng = rng_for(ctx.seed, 10);
    let mut t = Tracker::new("normalization (C)", s.constants().normalization_c);
    for u in distinct_spaces(ctx) {
        for p in s
            .space(&u)
            .sample_points(ctx.budget.min(200), SAMPLE_RADIUS, &mut rng)
        {
            let gap = s.projection_gap(&u, &p);
            t.record(gap, || {
                format!(
                    "{}: point {} at distance {gap} from the projection image",
                    ctx.l(&u),
                    ctx.pt(&p)
                )
            });
        }
    }
    t.finish()
}

fn equivariance(ctx: &Ctx) -> Measurement {
    let s = ctx.s;
    let m = s.group();
    let mut rng = rng_for(ctx.seed, 11);
    let mut t = Tracker::new("equivariance of projections (xi)", s.constants().xi);
    let domains = s.domains().to_vec();
    for _ in 0..ctx.budget {
        let g = ctx.element(&mut rng);
        let x = ctx.element(&mut rng);
        let u = domains.choose(&mut rng).expect("at least one domain");
        match s.act(&g, u) {
            Ok((gu, iso)) => {
                let lhs = s.project(&gu, &m.mul(&g, &x));
                let rhs = iso.apply(s.space(&gu), &s.project(u, &x));
                let d = s.space(&gu).distance(&lhs, &rhs);
                t.record(d, || {
                    format!(
                        "g={}, x={}, U={}: off by {d}",
                        ctx.w(&g),
                        ctx.w(&x),
                        ctx.l(u)
                    )
                });
            }
            Err(e) => t.record(f64::INFINITY, || {
                format!("g={}, U={}: {e}", ctx.w(&g), ctx.l(u))
            }),
        }
    }
    t.finish()
}

fn finite_orbits(ctx: &Ctx) -> Measurement {
    let s = ctx.s;
    let listed = ctx.listed();
    let bound = (listed.len()
        + ctx
            .cosets()
            .iter()
            .filter_map(|c| match c {
                DomainId::Coset { family, .. } => Some(*family),
                _ => None,
            })
            .collect::<BTreeSet<_>>()
            .len()) as f64;
    let mut t = Tracker::new("orbits of the action on domains", bound);
    let gens: Vec<Word> = s
        .group()
        .positive_letters()
        .into_iter()
        .map(Word::letter)
        .collect();
    let mut parent: Vec<usize> = (0..listed.len()).collect();
    fn find(p: &mut Vec<usize>, i: usize) -> usize {
        if p[i] != i {
            let r = find(p, p[i]);
            p[i] = r;
        }
        p[i]
    }
    let mut escaped = false;
    for (i, u) in listed.iter().enumerate() {
        for g in &gens {
            match s.act_domain(g, u) {
                Ok(DomainId::Listed { id }) => {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, id));
                    parent[a] = b;
                }
                _ => escaped = true,
            }
        }
    }
    let orbits: BTreeSet<usize> = (0..listed.len()).map(|i| find(&mut parent, i)).collect();
    let observed = if escaped {
        f64::INFINITY
    } else {
        orbits.len() as f64 + (bound - listed.len() as f64)
    };
    t.record(observed, || {
        "a declared domain leaves the declared index set".into()
    });
    if !escaped {
        t.observed = observed;
    }
    t.finish()
}
