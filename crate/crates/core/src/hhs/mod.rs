//! Hierarchical structures on groups: domains, relations, projections,
//! relative projections and the group action on the index set.

pub mod axioms;
pub mod builders;
pub mod file;
pub mod validators;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::group::{
    ball_layers, coset_gate, coset_min_rep, exponent_sum, free_product_syllables,
    product_component, to_global, to_local, CompositeKind, GeneratingSet, GroupModel, GroupSpec,
    Word,
};
use crate::space::{IsoAction, Isometry, Point, SpaceKind, SpaceModel};

pub use file::{
    ActionRule, Constants, DomainDecl, FamilyDecl, ProjectionRule, RelationDecl, RelationKind,
    RhoDecl, SpaceSpec, StructureFile, ThetaEntry, SCHEMA_VERSION,
};

/// A domain of the index set: either declared in the structure file, or a
/// coset `rep·A` of a lazily generated conjugate family.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum DomainId {
    Listed { id: usize },
    Coset { family: usize, rep: Word },
}

impl DomainId {
    pub fn listed(id: usize) -> Self {
        DomainId::Listed { id }
    }
}

/// Relation of `U` to `V`, read from `U`'s side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Equal,
    /// `U ⊑ V`, `U ≠ V`.
    NestedIn,
    /// `V ⊑ U`, `U ≠ V`.
    Contains,
    Orthogonal,
    Transverse,
}

impl Relation {
    pub fn reversed(self) -> Relation {
        match self {
            Relation::NestedIn => Relation::Contains,
            Relation::Contains => Relation::NestedIn,
            r => r,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Relation::Equal => "equal",
            Relation::NestedIn => "nested-in",
            Relation::Contains => "contains",
            Relation::Orthogonal => "orthogonal",
            Relation::Transverse => "transverse",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
struct Listed {
    label: String,
    space: SpaceModel,
    projection: ProjectionRule,
}

#[derive(Clone, Debug)]
struct Family {
    label: String,
    factor: usize,
    parent: usize,
    space: SpaceModel,
    factor_model: GroupModel,
    generation_radius: usize,
}

/// A hierarchically hyperbolic group structure, immutable after loading.
#[derive(Clone, Debug)]
pub struct HHGStructure {
    file: StructureFile,
    group: GroupModel,
    listed: Vec<Listed>,
    families: Vec<Family>,
    relations: Vec<Vec<Relation>>,
    rho: BTreeMap<(usize, usize), Point>,
    generated: Vec<DomainId>,
    orthogonality_number: usize,
}

fn factor_point(factor_model: &GroupModel, local: &Word) -> Point {
    if factor_model.is_free() {
        Point::word(factor_model.nf(local))
    } else {
        Point::line(exponent_sum(local, 0))
    }
}

fn point_element(factor_model: &GroupModel, p: &Point) -> Option<Word> {
    match p {
        Point::Word { w } => Some(w.clone()),
        Point::Line { n } => Some(factor_model.power(&Word::letter(0), *n)),
        _ => None,
    }
}

fn is_z(model: &GroupModel) -> bool {
    model.is_free_abelian() && model.rank() == Some(1)
}

impl HHGStructure {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| {
            LabError::Input(format!("cannot read {}: {e}", path.as_ref().display()))
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::load(StructureFile::from_json(text)?)
    }

    pub fn load(file: StructureFile) -> Result<Self> {
        file.constants.validate()?;
        let group = GroupModel::from_spec(&file.group)?;
        let mut labels: BTreeMap<String, usize> = BTreeMap::new();
        let mut listed = Vec::with_capacity(file.domains.len());
        for (pos, d) in file.domains.iter().enumerate() {
            if d.id != pos {
                return Err(LabError::Input(format!(
                    "domain ids must be 0..n in order; found id {} at {pos}",
                    d.id
                )));
            }
            if labels.insert(d.label.clone(), pos).is_some() {
                return Err(LabError::Input(format!(
                    "duplicate domain label {}",
                    d.label
                )));
            }
            let space = build_space(&group, &d.space)?;
            check_projection(&group, &space, &d.projection, &d.label)?;
            listed.push(Listed {
                label: d.label.clone(),
                space,
                projection: d.projection.clone(),
            });
        }
        if listed.is_empty() {
            return Err(LabError::Input(
                "a structure needs at least one domain".into(),
            ));
        }

        let n = listed.len();
        let mut relations = vec![vec![None; n]; n];
        for (i, row) in relations.iter_mut().enumerate() {
            row[i] = Some(Relation::Equal);
        }
        let index = |l: &str| {
            labels
                .get(l)
                .copied()
                .ok_or_else(|| LabError::Input(format!("unknown domain {l}")))
        };
        for r in &file.relations {
            let (u, v) = (index(&r.pair[0])?, index(&r.pair[1])?);
            if u == v {
                return Err(LabError::Input(format!(
                    "relation of {} with itself",
                    r.pair[0]
                )));
            }
            if relations[u][v].is_some() {
                return Err(LabError::Input(format!(
                    "pair ({}, {}) declared twice",
                    r.pair[0], r.pair[1]
                )));
            }
            let rel = match r.relation {
                RelationKind::Nested => Relation::NestedIn,
                RelationKind::Orthogonal => Relation::Orthogonal,
                RelationKind::Transverse => Relation::Transverse,
            };
            relations[u][v] = Some(rel);
            relations[v][u] = Some(rel.reversed());
        }
        let mut table = vec![vec![Relation::Equal; n]; n];
        for u in 0..n {
            for v in 0..n {
                table[u][v] = relations[u][v].ok_or_else(|| {
                    LabError::Input(format!(
                        "relation table is not total: ({}, {}) missing",
                        listed[u].label, listed[v].label
                    ))
                })?;
            }
        }

        let mut families = Vec::new();
        for fam in &file.families {
            if labels.contains_key(&fam.label) {
                return Err(LabError::Input(format!(
                    "family label {} clashes with a domain",
                    fam.label
                )));
            }
            if group.composite_kind() != Some(CompositeKind::Free) {
                return Err(LabError::Input(
                    "conjugate families need a free-product group".into(),
                ));
            }
            let factor_model = group.factor(fam.factor).cloned().ok_or_else(|| {
                LabError::Input(format!("family {}: no factor {}", fam.label, fam.factor))
            })?;
            if !(factor_model.is_free() || is_z(&factor_model)) {
                return Err(LabError::Input(format!(
                    "family {}: factor must be free or Z",
                    fam.label
                )));
            }
            let space = build_space(&group, &fam.space)?;
            let expected = if factor_model.is_free() {
                SpaceKind::CayleyTree
            } else {
                SpaceKind::Line
            };
            if space.kind() != expected {
                return Err(LabError::Input(format!(
                    "family {}: space must be {expected}",
                    fam.label
                )));
            }
            let parent = index(&fam.nested_in)?;
            families.push(Family {
                label: fam.label.clone(),
                factor: fam.factor,
                parent,
                space,
                factor_model,
                generation_radius: fam.generation_radius,
            });
        }

        let mut rho = BTreeMap::new();
        for r in &file.rho {
            let (u, w) = (index(&r.from)?, index(&r.to)?);
            if !matches!(table[u][w], Relation::NestedIn | Relation::Transverse) {
                return Err(LabError::Input(format!(
                    "rho {}→{} given for a pair that is neither nested nor transverse",
                    r.from, r.to
                )));
            }
            if !listed[w].space.contains(&r.point) {
                return Err(LabError::Input(format!(
                    "rho {}→{}: point {:?} is not in the space of {}",
                    r.from, r.to, r.point, r.to
                )));
            }
            rho.insert((u, w), r.point.clone());
        }

        match &file.action {
            ActionRule::CyclicPermutation { cycle, .. } => {
                if !is_z(&group) {
                    return Err(LabError::Input(
                        "cyclic-permutation action needs the group Z".into(),
                    ));
                }
                for l in cycle {
                    let i = index(l)?;
                    if listed[i].space.kind() != SpaceKind::Line {
                        return Err(LabError::Input(format!(
                            "cyclic-permutation domain {l} must carry a line"
                        )));
                    }
                }
            }
            ActionRule::FreeProduct if group.composite_kind() != Some(CompositeKind::Free) => {
                return Err(LabError::Input(
                    "free-product action needs a free-product group".into(),
                ));
            }
            _ => {}
        }

        let mut s = HHGStructure {
            file,
            group,
            listed,
            families,
            relations: table,
            rho,
            generated: Vec::new(),
            orthogonality_number: 1,
        };
        s.generated = s.generate_domains()?;
        s.orthogonality_number = s.max_orthogonal_family().len().max(1);
        Ok(s)
    }

    fn generate_domains(&self) -> Result<Vec<DomainId>> {
        let mut out: Vec<DomainId> = (0..self.listed.len()).map(DomainId::listed).collect();
        for (fi, fam) in self.families.iter().enumerate() {
            let x = GeneratingSet::standard(&self.group, true);
            let layers = ball_layers(
                &self.group,
                &x,
                fam.generation_radius,
                crate::group::DEFAULT_BALL_BUDGET,
            )?;
            let reps: BTreeSet<Word> = layers
                .iter()
                .flatten()
                .map(|g| coset_min_rep(&self.group, g, fam.factor).0)
                .collect();
            let mut reps: Vec<Word> = reps.into_iter().collect();
            reps.sort_by(|a, b| a.shortlex_key().cmp(&b.shortlex_key()));
            out.extend(
                reps.into_iter()
                    .map(|rep| DomainId::Coset { family: fi, rep }),
            );
        }
        Ok(out)
    }

    pub fn file(&self) -> &StructureFile {
        &self.file
    }

    pub fn name(&self) -> &str {
        &self.file.name
    }

    pub fn group(&self) -> &GroupModel {
        &self.group
    }

    pub fn constants(&self) -> &Constants {
        &self.file.constants
    }

    /// Declared domains followed by the generated members of every
    /// conjugate family (up to each family's generation radius).
    pub fn domains(&self) -> &[DomainId] {
        &self.generated
    }

    pub fn listed_domains(&self) -> impl Iterator<Item = DomainId> + '_ {
        (0..self.listed.len()).map(DomainId::listed)
    }

    pub fn has_families(&self) -> bool {
        !self.families.is_empty()
    }

    pub fn generation_radius(&self) -> Option<usize> {
        self.families.iter().map(|f| f.generation_radius).max()
    }

    /// `N`: size of a largest pairwise-orthogonal family of domains.
    pub fn orthogonality_number(&self) -> usize {
        self.orthogonality_number
    }

    pub fn label(&self, u: &DomainId) -> String {
        match u {
            DomainId::Listed { id } => self
                .listed
                .get(*id)
                .map_or_else(|| format!("#{id}"), |d| d.label.clone()),
            DomainId::Coset { family, rep } => {
                let fam = self.families.get(*family).map_or("?", |f| f.label.as_str());
                format!("{fam}[{}]", self.group.format_word(rep))
            }
        }
    }

    /// Parses `S`, `T`, ... or a family member such as `F[c]`.
    pub fn parse_domain(&self, text: &str) -> Result<DomainId> {
        let text = text.trim();
        if let Some(i) = self.listed.iter().position(|d| d.label == text) {
            return Ok(DomainId::listed(i));
        }
        if let Some((fam, rest)) = text.split_once('[') {
            let rep = rest
                .strip_suffix(']')
                .ok_or_else(|| LabError::Input(format!("bad domain {text}")))?;
            let family = self
                .families
                .iter()
                .position(|f| f.label == fam)
                .ok_or_else(|| LabError::Input(format!("unknown family {fam}")))?;
            let rep = self.group.parse_word(rep)?;
            let id = DomainId::Coset {
                family,
                rep: coset_min_rep(&self.group, &rep, self.families[family].factor).0,
            };
            return Ok(id);
        }
        Err(LabError::Input(format!("unknown domain {text}")))
    }

    pub fn check_domain(&self, u: &DomainId) -> Result<()> {
        let ok = match u {
            DomainId::Listed { id } => *id < self.listed.len(),
            DomainId::Coset { family, rep } => self.families.get(*family).is_some_and(|f| {
                self.group.validate(rep).is_ok()
                    && coset_min_rep(&self.group, rep, f.factor).0 == *rep
            }),
        };
        if ok {
            Ok(())
        } else {
            Err(LabError::Input(format!("unknown domain {u:?}")))
        }
    }

    pub fn space(&self, u: &DomainId) -> &SpaceModel {
        match u {
            DomainId::Listed { id } => &self.listed[*id].space,
            DomainId::Coset { family, .. } => &self.families[*family].space,
        }
    }

    /// True when the space of `u` has finite diameter.
    pub fn is_bounded(&self, u: &DomainId) -> bool {
        self.space(u).is_bounded()
    }

    /// The unique ⊑-maximal domain, if the table has one.
    pub fn top(&self) -> Option<DomainId> {
        let n = self.listed.len();
        let maxima: Vec<usize> = (0..n)
            .filter(|&u| {
                (0..n).all(|v| matches!(self.relations[u][v], Relation::Equal | Relation::Contains))
            })
            .collect();
        (maxima.len() == 1).then(|| DomainId::listed(maxima[0]))
    }

    pub fn relation(&self, u: &DomainId, v: &DomainId) -> Result<Relation> {
        self.check_domain(u)?;
        self.check_domain(v)?;
        Ok(self.relation_unchecked(u, v))
    }

    pub(crate) fn relation_unchecked(&self, u: &DomainId, v: &DomainId) -> Relation {
        match (u, v) {
            (DomainId::Listed { id: a }, DomainId::Listed { id: b }) => self.relations[*a][*b],
            (DomainId::Coset { family, .. }, DomainId::Listed { id }) => {
                let parent = self.families[*family].parent;
                if parent == *id || self.relations[parent][*id] == Relation::NestedIn {
                    Relation::NestedIn
                } else {
                    Relation::Transverse
                }
            }
            (DomainId::Listed { .. }, DomainId::Coset { .. }) => {
                self.relation_unchecked(v, u).reversed()
            }
            (a, b) if a == b => Relation::Equal,
            _ => Relation::Transverse,
        }
    }

    /// `U ⊑ V` (including equality).
    pub fn nested(&self, u: &DomainId, v: &DomainId) -> bool {
        matches!(
            self.relation_unchecked(u, v),
            Relation::Equal | Relation::NestedIn
        )
    }

    pub fn orthogonal(&self, u: &DomainId, v: &DomainId) -> bool {
        self.relation_unchecked(u, v) == Relation::Orthogonal
    }

    /// `π_U(g)`.
    pub fn project(&self, u: &DomainId, g: &Word) -> Point {
        let m = &self.group;
        match u {
            DomainId::Listed { id } => {
                let d = &self.listed[*id];
                match &d.projection {
                    ProjectionRule::Constant { point } => {
                        point.clone().unwrap_or_else(|| d.space.basepoint())
                    }
                    ProjectionRule::Identity => match d.space.kind() {
                        SpaceKind::CayleyTree => Point::word(m.nf(g)),
                        SpaceKind::Line => Point::line(exponent_sum(&m.nf(g), 0)),
                        SpaceKind::BassSerreTree => Point::Center { g: m.nf(g) },
                        _ => d.space.basepoint(),
                    },
                    ProjectionRule::ProductFactor { factor } => match m.factor(*factor) {
                        Some(fm) => factor_point(fm, &product_component(m, g, *factor)),
                        None => Point::line(exponent_sum(&m.nf(g), 2 * *factor as u16)),
                    },
                }
            }
            DomainId::Coset { family, rep } => {
                let fam = &self.families[*family];
                let gate = coset_gate(m, rep, fam.factor, g);
                factor_point(&fam.factor_model, &to_local(m, &gate, fam.factor))
            }
        }
    }

    /// `d_U(x, y)`.
    pub fn domain_distance(&self, u: &DomainId, x: &Word, y: &Word) -> f64 {
        self.space(u)
            .distance(&self.project(u, x), &self.project(u, y))
    }

    /// `ρ^U_W` for `U` properly nested in `W` or transverse to it.
    pub fn rho(&self, u: &DomainId, w: &DomainId) -> Option<Point> {
        let rel = self.relation_unchecked(u, w);
        if !matches!(rel, Relation::NestedIn | Relation::Transverse) {
            return None;
        }
        Some(match (u, w) {
            (DomainId::Listed { id: a }, DomainId::Listed { id: b }) => self
                .rho
                .get(&(*a, *b))
                .cloned()
                .unwrap_or_else(|| self.space(w).basepoint()),
            (DomainId::Coset { family, rep }, DomainId::Listed { .. }) => {
                if self.space(w).kind() == SpaceKind::BassSerreTree {
                    Point::Coset {
                        factor: self.families[*family].factor,
                        rep: rep.clone(),
                    }
                } else {
                    self.space(w).basepoint()
                }
            }
            (DomainId::Coset { rep, .. }, DomainId::Coset { .. }) => self.project(w, rep),
            (DomainId::Listed { .. }, DomainId::Coset { .. }) => self.space(w).basepoint(),
        })
    }

    /// Downward relative projection `ρ^W_V(p)` for `V` properly nested in `W`:
    /// the gate onto the coset in a Bass–Serre tree, the basepoint of `𝒞V` otherwise.
    pub fn rho_down(&self, w: &DomainId, v: &DomainId, p: &Point) -> Point {
        if let (DomainId::Coset { .. }, SpaceKind::BassSerreTree) = (v, self.space(w).kind()) {
            match p {
                Point::Center { g } => return self.project(v, g),
                Point::Coset { rep, .. } => return self.project(v, rep),
                _ => {}
            }
        }
        self.space(v).basepoint()
    }

    /// An element whose projection to `U` is `p` (used to build partial realizations).
    pub fn section(&self, u: &DomainId, p: &Point) -> Option<Word> {
        let m = &self.group;
        match u {
            DomainId::Listed { id } => match &self.listed[*id].projection {
                ProjectionRule::Constant { .. } => Some(Word::identity()),
                ProjectionRule::Identity => match p {
                    Point::Word { w } => Some(w.clone()),
                    Point::Center { g } => Some(g.clone()),
                    Point::Line { n } => Some(m.power(&Word::letter(0), *n)),
                    _ => None,
                },
                ProjectionRule::ProductFactor { factor } => match m.factor(*factor) {
                    Some(fm) => point_element(fm, p).map(|l| m.nf(&to_global(m, &l, *factor))),
                    None => match p {
                        Point::Line { n } => Some(m.power(&Word::letter(2 * *factor as u16), *n)),
                        _ => None,
                    },
                },
            },
            DomainId::Coset { family, rep } => {
                let fam = &self.families[*family];
                let local = point_element(&fam.factor_model, p)?;
                Some(m.mul(rep, &to_global(m, &local, fam.factor)))
            }
        }
    }

    /// Distance from `p` to the projection image `π_U(G)`.
    pub fn projection_gap(&self, u: &DomainId, p: &Point) -> f64 {
        let space = self.space(u);
        match u {
            DomainId::Listed { id } => match &self.listed[*id].projection {
                ProjectionRule::Constant { .. } => {
                    space.distance(p, &self.project(u, &Word::identity()))
                }
                _ => match p {
                    Point::Coset { .. } => 1.0,
                    _ => 0.0,
                },
            },
            DomainId::Coset { .. } => 0.0,
        }
    }

    /// The domain `g·U` and the isometry `𝒞U → 𝒞(gU)` induced by `g`.
    pub fn act(&self, g: &Word, u: &DomainId) -> Result<(DomainId, Isometry)> {
        self.check_domain(u)?;
        self.group.validate(g)?;
        let m = &self.group;
        let g = m.nf(g);
        let fixed = |action: IsoAction| Ok((u.clone(), Isometry::new(g.clone(), action)));
        match u {
            DomainId::Coset { family, rep } => {
                if self.file.action != ActionRule::FreeProduct {
                    return Err(LabError::invalid(
                        "action table incomplete",
                        "conjugate family without free-product action",
                    ));
                }
                let fam = &self.families[*family];
                let (new_rep, c) = coset_min_rep(m, &m.mul(&g, rep), fam.factor);
                let local = to_local(m, &c, fam.factor);
                let action = if fam.factor_model.is_free() {
                    IsoAction::LeftMul { by: local }
                } else {
                    IsoAction::Shift {
                        by: exponent_sum(&local, 0),
                    }
                };
                Ok((
                    DomainId::Coset {
                        family: *family,
                        rep: new_rep,
                    },
                    Isometry::new(g.clone(), action),
                ))
            }
            DomainId::Listed { id } => {
                let d = &self.listed[*id];
                match &self.file.action {
                    ActionRule::CyclicPermutation { cycle, shift } => {
                        let n = exponent_sum(&g, 0);
                        match cycle.iter().position(|l| *l == d.label) {
                            Some(k) => {
                                let target =
                                    &cycle[(k as i64 + n).rem_euclid(cycle.len() as i64) as usize];
                                let j = self
                                    .listed
                                    .iter()
                                    .position(|x| x.label == *target)
                                    .expect("validated at load");
                                Ok((
                                    DomainId::listed(j),
                                    Isometry::new(g.clone(), IsoAction::Shift { by: n * shift }),
                                ))
                            }
                            None => fixed(IsoAction::Identity),
                        }
                    }
                    _ => fixed(self.induced_action(d, &g)),
                }
            }
        }
    }

    fn induced_action(&self, d: &Listed, g: &Word) -> IsoAction {
        let m = &self.group;
        match &d.projection {
            ProjectionRule::Constant { .. } => IsoAction::Identity,
            ProjectionRule::Identity => match d.space.kind() {
                SpaceKind::CayleyTree | SpaceKind::BassSerreTree => {
                    IsoAction::LeftMul { by: g.clone() }
                }
                SpaceKind::Line => IsoAction::Shift {
                    by: exponent_sum(g, 0),
                },
                _ => IsoAction::Identity,
            },
            ProjectionRule::ProductFactor { factor } => match m.factor(*factor) {
                Some(fm) => {
                    let c = product_component(m, g, *factor);
                    if fm.is_free() {
                        IsoAction::LeftMul { by: c }
                    } else {
                        IsoAction::Shift {
                            by: exponent_sum(&c, 0),
                        }
                    }
                }
                None => IsoAction::Shift {
                    by: exponent_sum(g, 2 * *factor as u16),
                },
            },
        }
    }

    /// `g·U` only.
    pub fn act_domain(&self, g: &Word, u: &DomainId) -> Result<DomainId> {
        self.act(g, u).map(|(v, _)| v)
    }

    /// Family members whose projections of `x` and `y` differ: the cosets
    /// crossed by the Bass–Serre geodesic from `x` to `y`.
    pub fn relevant_cosets(&self, x: &Word, y: &Word) -> Vec<DomainId> {
        if self.families.is_empty() {
            return Vec::new();
        }
        let m = &self.group;
        let h = m.mul(&m.inverse(x), y);
        let mut prefix = m.nf(x);
        let mut out = Vec::new();
        for (factor, syl) in free_product_syllables(m, &h) {
            for (fi, fam) in self.families.iter().enumerate() {
                if fam.factor == factor {
                    out.push(DomainId::Coset {
                        family: fi,
                        rep: coset_min_rep(m, &prefix, factor).0,
                    });
                }
            }
            prefix = m.mul(&prefix, &syl);
        }
        out
    }

    /// Every domain on which `x` and `y` can have different projections:
    /// the generated domains plus the relevant cosets.
    pub fn domains_for_pair(&self, x: &Word, y: &Word) -> Vec<DomainId> {
        let mut all: BTreeSet<DomainId> = self.listed_domains().collect();
        all.extend(self.relevant_cosets(x, y));
        all.into_iter().collect()
    }

    /// Largest pairwise-orthogonal family among the declared domains (exact
    /// max clique; family members are never orthogonal to anything).
    pub fn max_orthogonal_family(&self) -> Vec<DomainId> {
        let n = self.listed.len();
        let mut best: Vec<usize> = Vec::new();
        let mut current = Vec::new();
        fn grow(
            s: &HHGStructure,
            start: usize,
            n: usize,
            current: &mut Vec<usize>,
            best: &mut Vec<usize>,
        ) {
            if current.len() > best.len() {
                *best = current.clone();
            }
            for v in start..n {
                if current
                    .iter()
                    .all(|&u| s.relations[u][v] == Relation::Orthogonal)
                {
                    current.push(v);
                    grow(s, v + 1, n, current, best);
                    current.pop();
                }
            }
        }
        grow(self, 0, n, &mut current, &mut best);
        if best.is_empty() {
            best.push(0);
        }
        best.into_iter().map(DomainId::listed).collect()
    }

    /// Longest chain of properly nested domains.
    pub fn longest_chain(&self) -> usize {
        let n = self.listed.len();
        let mut memo = vec![0usize; n];
        let mut order: Vec<usize> = (0..n).collect();
        // Shorter downsets first: a domain containing k others comes after them.
        order.sort_by_key(|&u| {
            (0..n)
                .filter(|&v| self.relations[u][v] == Relation::Contains)
                .count()
        });
        for &u in &order {
            let below = (0..n)
                .filter(|&v| self.relations[u][v] == Relation::Contains)
                .map(|v| memo[v])
                .max()
                .unwrap_or(0);
            memo[u] = below + 1;
        }
        let mut longest = memo.iter().copied().max().unwrap_or(0);
        for fam in &self.families {
            longest = longest.max(memo[fam.parent] + 1);
        }
        longest
    }

    /// Pretty-printed structure file; reports hash this text.
    pub fn canonical_json(&self) -> String {
        self.file.to_json()
    }

    pub fn group_spec(&self) -> &GroupSpec {
        &self.file.group
    }
}

fn build_space(group: &GroupModel, spec: &SpaceSpec) -> Result<SpaceModel> {
    match spec {
        SpaceSpec::CayleyTree { factor: None } => SpaceModel::cayley_tree(group.clone()),
        SpaceSpec::CayleyTree { factor: Some(i) } => {
            let f = group
                .factor(*i)
                .ok_or_else(|| LabError::Input(format!("no factor {i}")))?;
            SpaceModel::cayley_tree(f.clone())
        }
        SpaceSpec::Line => Ok(SpaceModel::line()),
        SpaceSpec::BoundedPoint => Ok(SpaceModel::bounded_point()),
        SpaceSpec::ExplicitGraph {
            nodes,
            edges,
            basepoint,
        } => SpaceModel::explicit_graph(*nodes, edges, *basepoint),
        SpaceSpec::BassSerreTree => SpaceModel::bass_serre(group.clone()),
    }
}

fn check_projection(
    group: &GroupModel,
    space: &SpaceModel,
    rule: &ProjectionRule,
    label: &str,
) -> Result<()> {
    let bad = |why: &str| Err(LabError::Input(format!("domain {label}: {why}")));
    match rule {
        ProjectionRule::Constant { point: Some(p) } if !space.contains(p) => bad("constant point is not in the space"),
        ProjectionRule::Constant { .. } => Ok(()),
        ProjectionRule::Identity => match space.kind() {
            SpaceKind::CayleyTree if space.model() == Some(group) => Ok(()),
            SpaceKind::Line if is_z(group) => Ok(()),
            SpaceKind::BassSerreTree => Ok(()),
            _ => bad("identity projection needs the Cayley tree of the group, a line for Z, or a Bass–Serre tree"),
        },
        ProjectionRule::ProductFactor { factor } => match (group.composite_kind(), group.factor(*factor)) {
            (Some(CompositeKind::Direct), Some(f)) => {
                let ok = (f.is_free() && space.kind() == SpaceKind::CayleyTree && space.model() == Some(f))
                    || (is_z(f) && space.kind() == SpaceKind::Line);
                if ok {
                    Ok(())
                } else {
                    bad("product-factor space must be the factor's Cayley tree (free) or a line (Z)")
                }
            }
            _ if group.is_free_abelian() && *factor < group.rank().unwrap_or(0) => {
                if space.kind() == SpaceKind::Line {
                    Ok(())
                } else {
                    bad("free abelian coordinates live on lines")
                }
            }
            _ => bad("product-factor needs a direct product or free abelian group with that factor"),
        },
    }
}
