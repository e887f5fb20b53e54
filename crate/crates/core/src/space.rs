//! Metric oracles for the hyperbolic spaces attached to domains.

use std::collections::VecDeque;
use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::group::{
    ball_layers, coset_gate, coset_min_rep, free_product_syllables, random_element, CompositeKind,
    GeneratingSet, GroupModel, Word,
};

/// A point of some [`SpaceModel`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Point {
    /// The single point of a bounded-point space.
    Base,
    Line {
        n: i64,
    },
    /// A vertex of a Cayley tree (normal form in the tree's own letters).
    Word {
        w: Word,
    },
    Node {
        i: usize,
    },
    /// Element vertex of a free-product Bass–Serre tree.
    Center {
        g: Word,
    },
    /// Coset vertex `rep·A_factor`; `rep` is the minimal coset representative.
    Coset {
        factor: usize,
        rep: Word,
    },
}

impl Point {
    pub fn line(n: i64) -> Self {
        Point::Line { n }
    }

    pub fn word(w: Word) -> Self {
        Point::Word { w }
    }

    pub fn node(i: usize) -> Self {
        Point::Node { i }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceKind {
    CayleyTree,
    Line,
    BoundedPoint,
    ExplicitGraph,
    BassSerreTree,
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SpaceKind::CayleyTree => "cayley-tree",
            SpaceKind::Line => "line",
            SpaceKind::BoundedPoint => "bounded-point",
            SpaceKind::ExplicitGraph => "explicit-graph",
            SpaceKind::BassSerreTree => "bass-serre-tree",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
struct Graph {
    adjacency: Vec<Vec<usize>>,
    basepoint: usize,
    dist: Vec<Vec<u32>>,
    is_tree: bool,
}

#[derive(Clone, Debug, PartialEq)]
enum SpaceData {
    CayleyTree(GroupModel),
    Line,
    BoundedPoint,
    ExplicitGraph(Graph),
    BassSerre(GroupModel),
}

/// Metric oracle for a geodesic hyperbolic space.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceModel {
    data: SpaceData,
}

impl SpaceModel {
    pub fn cayley_tree(model: GroupModel) -> Result<Self> {
        if !model.is_free() {
            return Err(LabError::Input(format!(
                "cayley-tree space needs a free model, got {model}"
            )));
        }
        Ok(SpaceModel {
            data: SpaceData::CayleyTree(model),
        })
    }

    pub fn line() -> Self {
        SpaceModel {
            data: SpaceData::Line,
        }
    }

    pub fn bounded_point() -> Self {
        SpaceModel {
            data: SpaceData::BoundedPoint,
        }
    }

    /// A connected graph on nodes `0..nodes` with unit-length edges.
    pub fn explicit_graph(nodes: usize, edges: &[[usize; 2]], basepoint: usize) -> Result<Self> {
        if nodes == 0 || basepoint >= nodes {
            return Err(LabError::Input(
                "explicit graph needs at least one node and a valid basepoint".into(),
            ));
        }
        let mut adjacency = vec![Vec::new(); nodes];
        for &[u, v] in edges {
            if u >= nodes || v >= nodes {
                return Err(LabError::Input(format!("edge ({u},{v}) out of range")));
            }
            if u != v && !adjacency[u].contains(&v) {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
        let mut dist = Vec::with_capacity(nodes);
        for s in 0..nodes {
            let mut d = vec![u32::MAX; nodes];
            d[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &v in &adjacency[u] {
                    if d[v] == u32::MAX {
                        d[v] = d[u] + 1;
                        q.push_back(v);
                    }
                }
            }
            if d.contains(&u32::MAX) {
                return Err(LabError::Input("explicit graph is not connected".into()));
            }
            dist.push(d);
        }
        let edge_count: usize = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        let is_tree = edge_count + 1 == nodes;
        Ok(SpaceModel {
            data: SpaceData::ExplicitGraph(Graph {
                adjacency,
                basepoint,
                dist,
                is_tree,
            }),
        })
    }

    /// The Bass–Serre tree of a free product, with element vertices joined
    /// to the vertices of the factor cosets containing them.
    pub fn bass_serre(model: GroupModel) -> Result<Self> {
        if model.composite_kind() != Some(CompositeKind::Free) {
            return Err(LabError::Input(format!(
                "bass-serre space needs a free product, got {model}"
            )));
        }
        Ok(SpaceModel {
            data: SpaceData::BassSerre(model),
        })
    }

    pub fn kind(&self) -> SpaceKind {
        match self.data {
            SpaceData::CayleyTree(_) => SpaceKind::CayleyTree,
            SpaceData::Line => SpaceKind::Line,
            SpaceData::BoundedPoint => SpaceKind::BoundedPoint,
            SpaceData::ExplicitGraph(_) => SpaceKind::ExplicitGraph,
            SpaceData::BassSerre(_) => SpaceKind::BassSerreTree,
        }
    }

    /// Group model whose elements label the points, for word-labelled spaces.
    pub fn model(&self) -> Option<&GroupModel> {
        match &self.data {
            SpaceData::CayleyTree(m) | SpaceData::BassSerre(m) => Some(m),
            _ => None,
        }
    }

    pub fn basepoint(&self) -> Point {
        match &self.data {
            SpaceData::CayleyTree(_) => Point::word(Word::identity()),
            SpaceData::Line => Point::line(0),
            SpaceData::BoundedPoint => Point::Base,
            SpaceData::ExplicitGraph(g) => Point::node(g.basepoint),
            SpaceData::BassSerre(_) => Point::Center {
                g: Word::identity(),
            },
        }
    }

    /// `Some(diameter)` for bounded spaces, `None` for unbounded ones.
    pub fn diameter_bound(&self) -> Option<f64> {
        match &self.data {
            SpaceData::BoundedPoint => Some(0.0),
            SpaceData::ExplicitGraph(g) => Some(
                g.dist
                    .iter()
                    .flat_map(|row| row.iter())
                    .copied()
                    .max()
                    .unwrap_or(0) as f64,
            ),
            SpaceData::CayleyTree(m) if m.rank() == Some(0) => Some(0.0),
            _ => None,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.diameter_bound().is_some()
    }

    /// Simplicial trees: Cayley trees, lines, points, Bass–Serre trees and
    /// explicit graphs without cycles.
    pub fn is_tree(&self) -> bool {
        match &self.data {
            SpaceData::ExplicitGraph(g) => g.is_tree,
            _ => true,
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        match (&self.data, p) {
            (SpaceData::CayleyTree(m), Point::Word { w }) => m.validate(w).is_ok() && m.nf(w) == *w,
            (SpaceData::Line, Point::Line { .. }) => true,
            (SpaceData::BoundedPoint, Point::Base) => true,
            (SpaceData::ExplicitGraph(g), Point::Node { i }) => *i < g.adjacency.len(),
            (SpaceData::BassSerre(m), Point::Center { g }) => {
                m.validate(g).is_ok() && m.nf(g) == *g
            }
            (SpaceData::BassSerre(m), Point::Coset { factor, rep }) => {
                *factor < m.factor_count().unwrap_or(0)
                    && m.validate(rep).is_ok()
                    && coset_min_rep(m, rep, *factor).0 == *rep
            }
            _ => false,
        }
    }

    /// Distance between two points of this space. Panics on points of the
    /// wrong shape; structures validate their points at load time.
    pub fn distance(&self, p: &Point, q: &Point) -> f64 {
        match (&self.data, p, q) {
            (SpaceData::CayleyTree(m), Point::Word { w: u }, Point::Word { w: v }) => {
                m.distance(u, v) as f64
            }
            (SpaceData::Line, Point::Line { n: a }, Point::Line { n: b }) => (a - b).abs() as f64,
            (SpaceData::BoundedPoint, Point::Base, Point::Base) => 0.0,
            (SpaceData::ExplicitGraph(g), Point::Node { i }, Point::Node { i: j }) => {
                g.dist[*i][*j] as f64
            }
            (SpaceData::BassSerre(m), p, q) => bass_serre_distance(m, p, q),
            _ => panic!(
                "points {p:?} and {q:?} do not belong to a {} space",
                self.kind()
            ),
        }
    }

    /// Gromov product `(p|q)_o`.
    pub fn gromov_product(&self, o: &Point, p: &Point, q: &Point) -> f64 {
        (self.distance(o, p) + self.distance(o, q) - self.distance(p, q)) / 2.0
    }

    /// Deterministic random sample of points near the basepoint.
    pub fn sample_points(&self, count: usize, radius: usize, rng: &mut ChaCha8Rng) -> Vec<Point> {
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            let p = match &self.data {
                SpaceData::CayleyTree(m) => Point::word(random_element(m, radius, rng)),
                SpaceData::Line => Point::line(rng.gen_range(-(radius as i64)..=radius as i64)),
                SpaceData::BoundedPoint => Point::Base,
                SpaceData::ExplicitGraph(g) => Point::node(rng.gen_range(0..g.adjacency.len())),
                SpaceData::BassSerre(m) => {
                    let g = random_element(m, radius, rng);
                    if k % 2 == 0 {
                        Point::Center { g }
                    } else {
                        let factor = rng.gen_range(0..m.factor_count().unwrap_or(1));
                        Point::Coset {
                            factor,
                            rep: coset_min_rep(m, &g, factor).0,
                        }
                    }
                }
            };
            out.push(p);
        }
        out
    }

    /// Vertices of a geodesic from `p` to `q`, when one can be produced
    /// (between element vertices only, in a Bass–Serre tree).
    pub fn geodesic(&self, p: &Point, q: &Point) -> Option<Vec<Point>> {
        match (&self.data, p, q) {
            (SpaceData::CayleyTree(_), Point::Word { w: u }, Point::Word { w: v }) => {
                let common = u.0.iter().zip(&v.0).take_while(|(a, b)| a == b).count();
                let mut path: Vec<Point> = (common..=u.len())
                    .rev()
                    .map(|k| Point::word(Word(u.0[..k].to_vec())))
                    .collect();
                path.extend((common + 1..=v.len()).map(|k| Point::word(Word(v.0[..k].to_vec()))));
                Some(path)
            }
            (SpaceData::Line, Point::Line { n: a }, Point::Line { n: b }) => {
                let step = if b >= a { 1 } else { -1 };
                Some(
                    (0..=(b - a).abs())
                        .map(|k| Point::line(a + step * k))
                        .collect(),
                )
            }
            (SpaceData::BoundedPoint, Point::Base, Point::Base) => Some(vec![Point::Base]),
            (SpaceData::ExplicitGraph(g), Point::Node { i }, Point::Node { i: j }) => {
                let mut path = vec![Point::node(*i)];
                let mut cur = *i;
                while cur != *j {
                    cur = *g.adjacency[cur]
                        .iter()
                        .filter(|&&v| g.dist[v][*j] + 1 == g.dist[cur][*j])
                        .min()?;
                    path.push(Point::node(cur));
                }
                Some(path)
            }
            (SpaceData::BassSerre(m), Point::Center { g }, Point::Center { g: h }) => {
                let mut cur = m.nf(g);
                let mut path = vec![Point::Center { g: cur.clone() }];
                for (factor, syl) in free_product_syllables(m, &m.mul(&m.inverse(g), h)) {
                    path.push(Point::Coset {
                        factor,
                        rep: coset_min_rep(m, &cur, factor).0,
                    });
                    cur = m.mul(&cur, &syl);
                    path.push(Point::Center { g: cur.clone() });
                }
                Some(path)
            }
            _ => None,
        }
    }

    /// All points at distance at most `radius` from the basepoint.
    pub fn ball_points(&self, radius: usize) -> Result<Vec<Point>> {
        match &self.data {
            SpaceData::CayleyTree(m) => {
                let x = GeneratingSet::standard(m, true);
                let layers = ball_layers(m, &x, radius, crate::group::DEFAULT_BALL_BUDGET)?;
                Ok(layers.into_iter().flatten().map(Point::word).collect())
            }
            SpaceData::Line => Ok((-(radius as i64)..=radius as i64)
                .map(Point::line)
                .collect()),
            SpaceData::BoundedPoint => Ok(vec![Point::Base]),
            SpaceData::ExplicitGraph(g) => Ok((0..g.adjacency.len())
                .filter(|&i| g.dist[g.basepoint][i] as usize <= radius)
                .map(Point::node)
                .collect()),
            SpaceData::BassSerre(_) => Err(LabError::NotApplicable(
                "balls in a Bass–Serre tree with infinite factors are infinite".into(),
            )),
        }
    }
}

fn syllable_count(m: &GroupModel, w: &Word) -> usize {
    free_product_syllables(m, &m.nf(w)).len()
}

fn bass_serre_distance(m: &GroupModel, p: &Point, q: &Point) -> f64 {
    let centres = |g: &Word, h: &Word| 2 * syllable_count(m, &m.mul(&m.inverse(g), h));
    let to_coset = |g: &Word, factor: usize, rep: &Word| {
        let near = m.mul(rep, &coset_gate(m, rep, factor, g));
        1 + centres(&near, g)
    };
    let d = match (p, q) {
        (Point::Center { g }, Point::Center { g: h }) => centres(g, h),
        (Point::Center { g }, Point::Coset { factor, rep })
        | (Point::Coset { factor, rep }, Point::Center { g }) => to_coset(g, *factor, rep),
        (Point::Coset { factor: i, rep: r }, Point::Coset { factor: j, rep: s }) => {
            if i == j && r == s {
                0
            } else {
                let u = m.mul(r, &coset_gate(m, r, *i, s));
                let v = m.mul(s, &coset_gate(m, s, *j, r));
                2 + centres(&u, &v)
            }
        }
        _ => panic!("points {p:?} and {q:?} do not belong to a bass-serre-tree space"),
    };
    d as f64
}

/// How an element moves the points of a space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum IsoAction {
    Identity,
    /// Left multiplication on word-labelled spaces.
    LeftMul {
        by: Word,
    },
    Shift {
        by: i64,
    },
    /// Node permutation of an explicit graph.
    Permute {
        images: Vec<usize>,
    },
}

/// An isometry of a space induced by a group element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Isometry {
    pub element: Word,
    pub action: IsoAction,
}

impl Isometry {
    pub fn identity() -> Self {
        Isometry {
            element: Word::identity(),
            action: IsoAction::Identity,
        }
    }

    pub fn new(element: Word, action: IsoAction) -> Self {
        Isometry { element, action }
    }

    pub fn apply(&self, space: &SpaceModel, p: &Point) -> Point {
        match (&self.action, &space.data, p) {
            (IsoAction::Identity, _, p) => p.clone(),
            (IsoAction::LeftMul { by }, SpaceData::CayleyTree(m), Point::Word { w }) => {
                Point::word(m.mul(by, w))
            }
            (IsoAction::LeftMul { by }, SpaceData::BassSerre(m), Point::Center { g }) => {
                Point::Center { g: m.mul(by, g) }
            }
            (IsoAction::LeftMul { by }, SpaceData::BassSerre(m), Point::Coset { factor, rep }) => {
                Point::Coset {
                    factor: *factor,
                    rep: coset_min_rep(m, &m.mul(by, rep), *factor).0,
                }
            }
            (IsoAction::Shift { by }, SpaceData::Line, Point::Line { n }) => Point::line(n + by),
            (IsoAction::Permute { images }, SpaceData::ExplicitGraph(_), Point::Node { i }) => {
                Point::node(images[*i])
            }
            (a, _, p) => panic!(
                "isometry {a:?} cannot act on {p:?} in a {} space",
                space.kind()
            ),
        }
    }

    /// `g^n · p` for `n ≥ 0`.
    pub fn apply_power(&self, space: &SpaceModel, p: &Point, n: usize) -> Point {
        let mut q = p.clone();
        for _ in 0..n {
            q = self.apply(space, &q);
        }
        q
    }

    pub fn inverse(&self, space: &SpaceModel) -> Isometry {
        let action = match &self.action {
            IsoAction::Identity => IsoAction::Identity,
            IsoAction::LeftMul { by } => {
                let m = space
                    .model()
                    .expect("left multiplication acts on word-labelled spaces");
                IsoAction::LeftMul { by: m.inverse(by) }
            }
            IsoAction::Shift { by } => IsoAction::Shift { by: -by },
            IsoAction::Permute { images } => {
                let mut inv = vec![0; images.len()];
                for (i, &j) in images.iter().enumerate() {
                    inv[j] = i;
                }
                IsoAction::Permute { images: inv }
            }
        };
        Isometry {
            element: self.element.clone(),
            action,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TranslationMethod {
    ExactTree,
    LimitEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranslationData {
    pub tau: f64,
    pub method: TranslationMethod,
    /// `d(x, gⁿx)/n` for the powers used.
    pub samples: Vec<f64>,
    pub converged: bool,
}

/// Maximum four-point defect over sampled quadruples. Quadruples are
/// exhaustive when the sample is small enough, random otherwise.
pub fn four_point_delta(space: &SpaceModel, sample_size: usize, seed: u64) -> f64 {
    const MAX_QUADRUPLES: usize = 20_000;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = match space.ball_points(3) {
        Ok(b) if b.len() <= sample_size => b,
        _ => space.sample_points(sample_size, 6, &mut rng),
    };
    pts.sort();
    pts.dedup();
    let n = pts.len();
    if n < 4 {
        return 0.0;
    }
    let mut worst = 0.0f64;
    let mut defect = |a: usize, b: usize, c: usize, d: usize| {
        let dd = |i: usize, j: usize| space.distance(&pts[i], &pts[j]);
        let mut s = [
            dd(a, b) + dd(c, d),
            dd(a, c) + dd(b, d),
            dd(a, d) + dd(b, c),
        ];
        s.sort_by(|x, y| y.total_cmp(x));
        worst = worst.max((s[0] - s[1]) / 2.0);
    };
    let total = n * (n - 1) * (n - 2) * (n - 3) / 24;
    if total <= MAX_QUADRUPLES {
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        defect(a, b, c, d);
                    }
                }
            }
        }
    } else {
        for _ in 0..MAX_QUADRUPLES {
            let q: [usize; 4] = std::array::from_fn(|_| rng.gen_range(0..n));
            defect(q[0], q[1], q[2], q[3]);
        }
    }
    worst
}

/// Exact translation length on a simplicial tree: `max(0, d(x,g²x) − d(x,gx))`.
pub fn translation_length_tree(space: &SpaceModel, g: &Isometry) -> Result<TranslationData> {
    if !space.is_tree() {
        return Err(LabError::WrongKind {
            expected: "simplicial tree".into(),
            found: space.kind().to_string(),
        });
    }
    let x = space.basepoint();
    let d1 = space.distance(&x, &g.apply(space, &x));
    let d2 = space.distance(&x, &g.apply_power(space, &x, 2));
    Ok(TranslationData {
        tau: (d2 - d1).max(0.0),
        method: TranslationMethod::ExactTree,
        samples: vec![d1, d2 / 2.0],
        converged: true,
    })
}

/// `inf_{n ≤ n_max} d(x, gⁿx)/n`, flagged as not converged when the last two
/// ratios differ by more than `tol`.
pub fn translation_length_limit(
    space: &SpaceModel,
    g: &Isometry,
    n_max: usize,
    tol: f64,
) -> Result<TranslationData> {
    if n_max < 4 {
        return Err(LabError::Precondition(
            "translation_length_limit needs n_max >= 4".into(),
        ));
    }
    let x = space.basepoint();
    let mut samples = Vec::with_capacity(n_max);
    let mut y = x.clone();
    for n in 1..=n_max {
        y = g.apply(space, &y);
        samples.push(space.distance(&x, &y) / n as f64);
    }
    let tau = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let converged = (samples[n_max - 1] - samples[n_max - 2]).abs() <= tol;
    Ok(TranslationData {
        tau,
        method: TranslationMethod::LimitEstimate,
        samples,
        converged,
    })
}

/// Exact on trees, limit estimate elsewhere.
pub fn translation_length(space: &SpaceModel, g: &Isometry) -> TranslationData {
    translation_length_tree(space, g)
        .or_else(|_| translation_length_limit(space, g, 16, 0.25))
        .expect("n_max is at least 4")
}

/// `g^{±n}x` for the ray endpoints, using the inverse for negative powers.
fn orbit_point(space: &SpaceModel, g: &Isometry, x: &Point, n: i64) -> Point {
    if n >= 0 {
        g.apply_power(space, x, n as usize)
    } else {
        g.inverse(space).apply_power(space, x, (-n) as usize)
    }
}

/// Depth-bounded independence: endpoints are approximated by `g^{±depth}x`
/// and declared equal when their Gromov product at `x` exceeds
/// `depth · τ_min / 2`.
pub fn independent_loxodromics(
    space: &SpaceModel,
    g: &Isometry,
    h: &Isometry,
    depth: usize,
) -> Result<bool> {
    let tg = translation_length(space, g).tau;
    let th = translation_length(space, h).tau;
    if tg <= 0.0 || th <= 0.0 {
        return Err(LabError::Precondition(
            "independent_loxodromics needs two loxodromic isometries".into(),
        ));
    }
    let x = space.basepoint();
    let threshold = depth as f64 * tg.min(th) / 2.0;
    let d = depth as i64;
    let ends_g = [orbit_point(space, g, &x, d), orbit_point(space, g, &x, -d)];
    let ends_h = [orbit_point(space, h, &x, d), orbit_point(space, h, &x, -d)];
    for p in &ends_g {
        for q in &ends_h {
            if space.gromov_product(&x, p, q) > threshold {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `t` maps the endpoint pair of the loxodromic `g` to itself,
/// tested by ray divergence at the given depth.
pub fn preserves_endpoint_pair(
    space: &SpaceModel,
    t: &Isometry,
    g: &Isometry,
    depth: usize,
) -> Result<bool> {
    let tau = translation_length(space, g).tau;
    if tau <= 0.0 {
        return Err(LabError::Precondition(
            "preserves_endpoint_pair needs a loxodromic g".into(),
        ));
    }
    let x = space.basepoint();
    let shift = (space.distance(&x, &t.apply(space, &x)) / tau).ceil() as i64;
    let n = depth as i64 + shift;
    let threshold = depth as f64 * tau / 2.0;
    let plus = orbit_point(space, g, &x, n);
    let minus = orbit_point(space, g, &x, -n);
    let t_plus = t.apply(space, &plus);
    let t_minus = t.apply(space, &minus);
    let close = |p: &Point, q: &Point| space.gromov_product(&x, p, q) > threshold;
    Ok((close(&t_plus, &plus) && close(&t_minus, &minus))
        || (close(&t_plus, &minus) && close(&t_minus, &plus)))
}

/// Word criterion: `t gⁿ t⁻¹ = g^{±n}` in the group.
pub fn preserves_endpoint_pair_word(model: &GroupModel, t: &Word, g: &Word, n: usize) -> bool {
    let gn = model.power(g, n as i64);
    let conj = model.conjugate(t, &gn);
    conj == gn || conj == model.inverse(&gn)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2_tree() -> (GroupModel, SpaceModel) {
        let f = GroupModel::free(2);
        (f.clone(), SpaceModel::cayley_tree(f).unwrap())
    }

    fn lm(m: &GroupModel, s: &str) -> Isometry {
        let w = m.parse_word(s).unwrap();
        Isometry::new(w.clone(), IsoAction::LeftMul { by: w })
    }

    #[test]
    fn four_cycle_delta_is_one() {
        let c4 = SpaceModel::explicit_graph(4, &[[0, 1], [1, 2], [2, 3], [3, 0]], 0).unwrap();
        assert_eq!(four_point_delta(&c4, 10, 0), 1.0);
    }

    #[test]
    fn trees_and_lines_are_zero_hyperbolic() {
        let (_, t) = f2_tree();
        assert_eq!(four_point_delta(&t, 40, 3), 0.0);
        assert_eq!(four_point_delta(&SpaceModel::line(), 40, 3), 0.0);
        assert_eq!(four_point_delta(&SpaceModel::bounded_point(), 40, 3), 0.0);
    }

    #[test]
    fn tree_translation_lengths() {
        let (f, t) = f2_tree();
        assert_eq!(translation_length_tree(&t, &lm(&f, "a")).unwrap().tau, 1.0);
        assert_eq!(translation_length_tree(&t, &lm(&f, "ab")).unwrap().tau, 2.0);
        assert_eq!(
            translation_length_tree(&t, &lm(&f, "abA")).unwrap().tau,
            1.0
        );
        let lim = translation_length_limit(&t, &lm(&f, "a"), 8, 1e-9).unwrap();
        assert_eq!(lim.tau, 1.0);
        let edge = SpaceModel::explicit_graph(2, &[[0, 1]], 0).unwrap();
        let flip = Isometry::new(Word::identity(), IsoAction::Permute { images: vec![1, 0] });
        assert_eq!(translation_length_tree(&edge, &flip).unwrap().tau, 0.0);
        let c4 = SpaceModel::explicit_graph(4, &[[0, 1], [1, 2], [2, 3], [3, 0]], 0).unwrap();
        assert!(matches!(
            translation_length_tree(&c4, &flip),
            Err(LabError::WrongKind { .. })
        ));
    }

    #[test]
    fn line_translation_limit() {
        let l = SpaceModel::line();
        let shift = Isometry::new(Word::identity(), IsoAction::Shift { by: 3 });
        assert_eq!(
            translation_length_limit(&l, &shift, 6, 1e-9).unwrap().tau,
            3.0
        );
        assert_eq!(
            translation_length_limit(&l, &Isometry::identity(), 6, 1e-9)
                .unwrap()
                .tau,
            0.0
        );
    }

    #[test]
    fn independence_on_tree() {
        let (f, t) = f2_tree();
        assert!(independent_loxodromics(&t, &lm(&f, "a"), &lm(&f, "b"), 16).unwrap());
        assert!(!independent_loxodromics(&t, &lm(&f, "a"), &lm(&f, "aa"), 16).unwrap());
        assert!(independent_loxodromics(&t, &lm(&f, "a"), &lm(&f, "baB"), 16).unwrap());
        assert!(matches!(
            independent_loxodromics(&t, &lm(&f, "a"), &Isometry::identity(), 16),
            Err(LabError::Precondition(_))
        ));
    }

    #[test]
    fn endpoint_preservation() {
        let (f, t) = f2_tree();
        let a = f.parse_word("a").unwrap();
        let b = f.parse_word("b").unwrap();
        assert!(preserves_endpoint_pair_word(&f, &a, &a, 5));
        assert!(!preserves_endpoint_pair_word(&f, &b, &a, 5));
        let z2 = GroupModel::free_abelian(2);
        let (za, zb) = (z2.parse_word("a").unwrap(), z2.parse_word("b").unwrap());
        assert!(preserves_endpoint_pair_word(&z2, &zb, &za, 5));
        assert!(preserves_endpoint_pair(&t, &lm(&f, "a"), &lm(&f, "a"), 5).unwrap());
        assert!(preserves_endpoint_pair(&t, &lm(&f, "a^20"), &lm(&f, "a"), 5).unwrap());
        assert!(!preserves_endpoint_pair(&t, &lm(&f, "b"), &lm(&f, "a"), 5).unwrap());
    }

    #[test]
    fn geodesics_have_the_right_length() {
        let (f, t) = f2_tree();
        let p = Point::word(f.parse_word("abA").unwrap());
        let q = Point::word(f.parse_word("aBB").unwrap());
        let path = t.geodesic(&p, &q).unwrap();
        assert_eq!(path.len() as f64, t.distance(&p, &q) + 1.0);
        for w in path.windows(2) {
            assert_eq!(t.distance(&w[0], &w[1]), 1.0);
        }
        let path = SpaceModel::line()
            .geodesic(&Point::line(2), &Point::line(-3))
            .unwrap();
        assert_eq!(path.len(), 6);
        let c6 =
            SpaceModel::explicit_graph(6, &[[0, 1], [1, 2], [2, 3], [3, 4], [4, 5], [5, 0]], 0)
                .unwrap();
        assert_eq!(
            c6.geodesic(&Point::node(0), &Point::node(3)).unwrap().len(),
            4
        );
    }

    #[test]
    fn bass_serre_metric() {
        let m = GroupModel::free_product(vec![
            crate::group::GroupSpec::Free { rank: 2 },
            crate::group::GroupSpec::FreeAbelian { rank: 1 },
        ])
        .unwrap();
        let s = SpaceModel::bass_serre(m.clone()).unwrap();
        let c = |t: &str| Point::Center {
            g: m.parse_word(t).unwrap(),
        };
        let v = |f: usize, t: &str| Point::Coset {
            factor: f,
            rep: m.parse_word(t).unwrap(),
        };
        assert_eq!(s.distance(&c("e"), &c("ab")), 2.0);
        assert_eq!(s.distance(&c("e"), &c("ac")), 4.0);
        assert_eq!(s.distance(&c("e"), &v(0, "e")), 1.0);
        assert_eq!(s.distance(&v(0, "e"), &v(1, "e")), 2.0);
        assert_eq!(s.distance(&v(0, "e"), &v(0, "c")), 4.0);
        assert_eq!(s.distance(&c("ab"), &v(0, "c")), 5.0);
        assert_eq!(s.distance(&c("cab"), &v(0, "c")), 1.0);
        assert_eq!(four_point_delta(&s, 60, 1), 0.0);
        let ac = lm(&m, "ac");
        let ac = Isometry::new(ac.element.clone(), ac.action);
        assert_eq!(translation_length_tree(&s, &ac).unwrap().tau, 4.0);
        let path = s.geodesic(&c("ab"), &c("cCa")).unwrap();
        assert_eq!(path.len() as f64, s.distance(&c("ab"), &c("a")) + 1.0);
        let path = s.geodesic(&c("e"), &c("acb")).unwrap();
        assert_eq!(path.len(), 7);
        for w in path.windows(2) {
            assert_eq!(s.distance(&w[0], &w[1]), 1.0);
        }
    }
}
