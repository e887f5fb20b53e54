//! Finitely generated groups with solvable word problem.
//!
//! Every model is built from two leaf families (free groups and free abelian
//! groups) combined by direct products, free products and graph products.
//! Composite models share one normal-form routine: reduced syllable words in
//! the graph product, put in lexicographic (Foata-style) order over the
//! vertex order. Direct products use the complete graph and free products
//! the empty graph.

mod ball;
mod gensets;
mod schreier;

pub use ball::{
    ball_layers, cayley_ball, cayley_ball_with_budget, growth_rate, BallRecord, GrowthEstimate,
    DEFAULT_BALL_BUDGET,
};
pub use gensets::{enumerate_generating_sets, generates_at_radius, GeneratingSet};
pub use schreier::{schreier_generators, CosetTable};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Generator (or inverse generator) id inside a [`GroupModel`].
pub type Letter = u16;

/// A word over the generators of a model. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Shortlex key: shorter words first, then lexicographic by letter id.
    pub fn shortlex_key(&self) -> (usize, &[Letter]) {
        (self.len(), &self.0)
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub id: Letter,
    pub label: String,
    pub inverse_id: Letter,
}

/// Declarative description of a group model, as it appears in structure files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GroupSpec {
    Free {
        rank: usize,
    },
    FreeAbelian {
        rank: usize,
    },
    DirectProduct {
        factors: Vec<GroupSpec>,
    },
    FreeProduct {
        factors: Vec<GroupSpec>,
    },
    GraphProduct {
        vertices: Vec<GroupSpec>,
        edges: Vec<[usize; 2]>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompositeKind {
    Direct,
    Free,
    Graph,
}

#[derive(Clone, Debug, PartialEq)]
struct Composite {
    kind: CompositeKind,
    vertices: Vec<GroupModel>,
    offsets: Vec<Letter>,
    owner: Vec<usize>,
    adjacent: Vec<Vec<bool>>,
}

#[derive(Clone, Debug, PartialEq)]
enum ModelKind {
    Free { rank: usize },
    FreeAbelian { rank: usize },
    Composite(Composite),
}

/// A group model: generators plus a deterministic normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupModel {
    spec: GroupSpec,
    generators: Vec<Generator>,
    kind: ModelKind,
}

fn label_for(index: usize, inverse: bool) -> String {
    const ALPHA: &[u8] = b"abcdefghijklmnopqrstuvwxyz";
    if index < ALPHA.len() {
        let c = ALPHA[index] as char;
        if inverse {
            c.to_ascii_uppercase().to_string()
        } else {
            c.to_string()
        }
    } else if inverse {
        format!("X{index}")
    } else {
        format!("x{index}")
    }
}

fn leaf_generators(rank: usize, next_label: &mut usize) -> Vec<Generator> {
    let mut gens = Vec::with_capacity(2 * rank);
    for i in 0..rank {
        let g = (2 * i) as Letter;
        gens.push(Generator {
            id: g,
            label: label_for(*next_label, false),
            inverse_id: g + 1,
        });
        gens.push(Generator {
            id: g + 1,
            label: label_for(*next_label, true),
            inverse_id: g,
        });
        *next_label += 1;
    }
    gens
}

impl GroupModel {
    pub fn from_spec(spec: &GroupSpec) -> Result<Self> {
        let mut next = 0;
        Self::build(spec, &mut next)
    }

    pub fn free(rank: usize) -> Self {
        Self::from_spec(&GroupSpec::Free { rank }).expect("free group spec is valid")
    }

    pub fn free_abelian(rank: usize) -> Self {
        Self::from_spec(&GroupSpec::FreeAbelian { rank }).expect("free abelian spec is valid")
    }

    pub fn direct_product(factors: Vec<GroupSpec>) -> Result<Self> {
        Self::from_spec(&GroupSpec::DirectProduct { factors })
    }

    pub fn free_product(factors: Vec<GroupSpec>) -> Result<Self> {
        Self::from_spec(&GroupSpec::FreeProduct { factors })
    }

    /// The trivial group (free group of rank 0).
    pub fn trivial() -> Self {
        Self::free(0)
    }

    fn build(spec: &GroupSpec, next_label: &mut usize) -> Result<Self> {
        match spec {
            GroupSpec::Free { rank } => Ok(GroupModel {
                spec: spec.clone(),
                generators: leaf_generators(*rank, next_label),
                kind: ModelKind::Free { rank: *rank },
            }),
            GroupSpec::FreeAbelian { rank } => Ok(GroupModel {
                spec: spec.clone(),
                generators: leaf_generators(*rank, next_label),
                kind: ModelKind::FreeAbelian { rank: *rank },
            }),
            GroupSpec::DirectProduct { factors } => {
                let n = factors.len();
                let adj = (0..n).map(|i| (0..n).map(|j| i != j).collect()).collect();
                Self::build_composite(spec, CompositeKind::Direct, factors, adj, next_label)
            }
            GroupSpec::FreeProduct { factors } => {
                let n = factors.len();
                let adj = vec![vec![false; n]; n];
                Self::build_composite(spec, CompositeKind::Free, factors, adj, next_label)
            }
            GroupSpec::GraphProduct { vertices, edges } => {
                let n = vertices.len();
                let mut adj = vec![vec![false; n]; n];
                for &[i, j] in edges {
                    if i >= n || j >= n || i == j {
                        return Err(LabError::Input(format!(
                            "bad graph-product edge [{i}, {j}]"
                        )));
                    }
                    adj[i][j] = true;
                    adj[j][i] = true;
                }
                Self::build_composite(spec, CompositeKind::Graph, vertices, adj, next_label)
            }
        }
    }

    fn build_composite(
        spec: &GroupSpec,
        kind: CompositeKind,
        parts: &[GroupSpec],
        adjacent: Vec<Vec<bool>>,
        next_label: &mut usize,
    ) -> Result<Self> {
        let mut vertices = Vec::with_capacity(parts.len());
        let mut offsets = Vec::with_capacity(parts.len());
        let mut generators = Vec::new();
        let mut owner = Vec::new();
        for (v, part) in parts.iter().enumerate() {
            let sub = Self::build(part, next_label)?;
            let offset = generators.len() as Letter;
            offsets.push(offset);
            for g in &sub.generators {
                generators.push(Generator {
                    id: g.id + offset,
                    label: g.label.clone(),
                    inverse_id: g.inverse_id + offset,
                });
                owner.push(v);
            }
            vertices.push(sub);
        }
        Ok(GroupModel {
            spec: spec.clone(),
            generators,
            kind: ModelKind::Composite(Composite {
                kind,
                vertices,
                offsets,
                owner,
                adjacent,
            }),
        })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn num_letters(&self) -> usize {
        self.generators.len()
    }

    /// Letters that are generators proper (not formal inverses).
    pub fn positive_letters(&self) -> Vec<Letter> {
        self.generators
            .iter()
            .filter(|g| g.id % 2 == 0)
            .map(|g| g.id)
            .collect()
    }

    pub fn inverse_letter(&self, l: Letter) -> Letter {
        self.generators[l as usize].inverse_id
    }

    /// Number of factors for direct and free products; `None` for leaves.
    pub fn factor_count(&self) -> Option<usize> {
        match &self.kind {
            ModelKind::Composite(c) => Some(c.vertices.len()),
            _ => None,
        }
    }

    pub fn composite_kind(&self) -> Option<CompositeKind> {
        match &self.kind {
            ModelKind::Composite(c) => Some(c.kind),
            _ => None,
        }
    }

    pub fn factor(&self, i: usize) -> Option<&GroupModel> {
        match &self.kind {
            ModelKind::Composite(c) => c.vertices.get(i),
            _ => None,
        }
    }

    /// Letter offset of factor `i` inside this model.
    pub fn factor_offset(&self, i: usize) -> Option<Letter> {
        match &self.kind {
            ModelKind::Composite(c) => c.offsets.get(i).copied(),
            _ => None,
        }
    }

    /// Factor that owns a letter, for composite models.
    pub fn letter_owner(&self, l: Letter) -> Option<usize> {
        match &self.kind {
            ModelKind::Composite(c) => c.owner.get(l as usize).copied(),
            _ => None,
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self.kind, ModelKind::Free { .. })
    }

    pub fn rank(&self) -> Option<usize> {
        match self.kind {
            ModelKind::Free { rank } | ModelKind::FreeAbelian { rank } => Some(rank),
            _ => None,
        }
    }

    pub fn is_free_abelian(&self) -> bool {
        matches!(self.kind, ModelKind::FreeAbelian { .. })
    }

    /// All supported families are torsion-free.
    pub fn is_torsion_free(&self) -> bool {
        true
    }

    pub fn validate(&self, w: &Word) -> Result<()> {
        let n = self.generators.len();
        match w.0.iter().find(|&&l| l as usize >= n) {
            Some(l) => Err(LabError::Input(format!("unknown generator id {l}"))),
            None => Ok(()),
        }
    }

    /// Canonical representative of the element a word represents.
    pub fn normal_form(&self, w: &Word) -> Result<Word> {
        self.validate(w)?;
        Ok(self.nf(w))
    }

    /// Normal form without validation; callers must only pass valid letters.
    pub(crate) fn nf(&self, w: &Word) -> Word {
        Word(self.nf_letters(&w.0))
    }

    fn nf_letters(&self, letters: &[Letter]) -> Vec<Letter> {
        match &self.kind {
            ModelKind::Free { .. } => free_reduce(letters),
            ModelKind::FreeAbelian { rank } => abelian_nf(*rank, letters),
            ModelKind::Composite(c) => c.normal_form(letters),
        }
    }

    pub fn multiply(&self, u: &Word, v: &Word) -> Result<Word> {
        self.validate(u)?;
        self.validate(v)?;
        Ok(self.mul(u, v))
    }

    pub(crate) fn mul(&self, u: &Word, v: &Word) -> Word {
        self.nf(&u.concat(v))
    }

    pub fn inverse(&self, w: &Word) -> Word {
        let inv: Vec<Letter> = w.0.iter().rev().map(|&l| self.inverse_letter(l)).collect();
        self.nf(&Word(inv))
    }

    /// `w^n` for any integer `n`, in normal form.
    pub fn power(&self, w: &Word, n: i64) -> Word {
        let base = if n < 0 { self.inverse(w) } else { self.nf(w) };
        let k = n.unsigned_abs() as usize;
        let mut letters = Vec::with_capacity(base.len() * k);
        for _ in 0..k {
            letters.extend_from_slice(&base.0);
        }
        self.nf(&Word(letters))
    }

    /// `h w h^-1`.
    pub fn conjugate(&self, h: &Word, w: &Word) -> Word {
        let hi = self.inverse(h);
        self.nf(&Word(
            [h.0.as_slice(), w.0.as_slice(), hi.0.as_slice()].concat(),
        ))
    }

    pub fn equal(&self, u: &Word, v: &Word) -> bool {
        self.nf(u) == self.nf(v)
    }

    /// Word length with respect to the standard symmetric generating set.
    /// Every normal form here is geodesic, so this is the normal-form length.
    pub fn word_length(&self, w: &Word) -> usize {
        self.nf(w).len()
    }

    pub fn distance(&self, u: &Word, v: &Word) -> usize {
        let ui = self.inverse(u);
        self.mul(&ui, v).len()
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "e".to_string();
        }
        w.0.iter()
            .map(|&l| self.generators[l as usize].label.as_str())
            .collect::<Vec<_>>()
            .concat()
    }

    /// Parse a word from labels, e.g. `"abA"`, `"a^3 B"`, `"e"`.
    /// A label may be followed by `^n` with `n` a (possibly negative) integer.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let s: Vec<char> = text
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '*' && *c != '.')
            .collect();
        let e_is_label = self.generators.iter().any(|g| g.label == "e");
        if s.is_empty() || s == ['1'] || (s == ['e'] && !e_is_label) {
            return Ok(Word::identity());
        }
        let mut labels: Vec<(&str, Letter)> = self
            .generators
            .iter()
            .map(|g| (g.label.as_str(), g.id))
            .collect();
        labels.sort_by_key(|l| std::cmp::Reverse(l.0.len()));
        let mut out = Vec::new();
        let mut i = 0;
        while i < s.len() {
            let rest: String = s[i..].iter().collect();
            let Some(&(label, id)) = labels.iter().find(|(label, _)| rest.starts_with(label))
            else {
                return Err(LabError::Input(format!(
                    "cannot parse word '{text}' at '{rest}'"
                )));
            };
            i += label.chars().count();
            let mut exp: i64 = 1;
            if i < s.len() && s[i] == '^' {
                i += 1;
                let start = i;
                if i < s.len() && s[i] == '-' {
                    i += 1;
                }
                while i < s.len() && s[i].is_ascii_digit() {
                    i += 1;
                }
                let num: String = s[start..i].iter().collect();
                exp = num
                    .parse()
                    .map_err(|_| LabError::Input(format!("bad exponent '{num}' in '{text}'")))?;
            }
            let letter = if exp < 0 { self.inverse_letter(id) } else { id };
            for _ in 0..exp.unsigned_abs() {
                out.push(letter);
            }
        }
        Ok(self.nf(&Word(out)))
    }
}

impl fmt::Display for GroupModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn spec_name(s: &GroupSpec) -> String {
            match s {
                GroupSpec::Free { rank } => format!("F{rank}"),
                GroupSpec::FreeAbelian { rank } => format!("Z^{rank}"),
                GroupSpec::DirectProduct { factors } => factors
                    .iter()
                    .map(spec_name)
                    .collect::<Vec<_>>()
                    .join(" x "),
                GroupSpec::FreeProduct { factors } => factors
                    .iter()
                    .map(spec_name)
                    .collect::<Vec<_>>()
                    .join(" * "),
                GroupSpec::GraphProduct { vertices, .. } => {
                    format!("GP({} vertices)", vertices.len())
                }
            }
        }
        write!(f, "{}", spec_name(&self.spec))
    }
}

/// Free reduction for leaf letters where `l ^ 1` is the inverse of `l`.
fn free_reduce(letters: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        if out.last() == Some(&(l ^ 1)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn abelian_nf(rank: usize, letters: &[Letter]) -> Vec<Letter> {
    let mut exps = vec![0i64; rank];
    for &l in letters {
        let i = (l / 2) as usize;
        exps[i] += if l % 2 == 0 { 1 } else { -1 };
    }
    let mut out = Vec::new();
    for (i, &e) in exps.iter().enumerate() {
        let l = (2 * i) as Letter + u16::from(e < 0);
        out.extend(std::iter::repeat_n(l, e.unsigned_abs() as usize));
    }
    out
}

#[derive(Clone, Debug)]
struct Syllable {
    vertex: usize,
    /// Local letters of the vertex group, in vertex normal form, never empty.
    elem: Vec<Letter>,
}

impl Composite {
    fn normal_form(&self, letters: &[Letter]) -> Vec<Letter> {
        let reduced = self.reduce(letters);
        self.lex_order(reduced)
    }

    /// Reduced syllable form: each incoming letter merges with the last
    /// syllable of its vertex that it can be shuffled next to.
    fn reduce(&self, letters: &[Letter]) -> Vec<Syllable> {
        let mut syl: Vec<Syllable> = Vec::new();
        for &l in letters {
            let v = self.owner[l as usize];
            let local = l - self.offsets[v];
            let mut target = None;
            for j in (0..syl.len()).rev() {
                let w = syl[j].vertex;
                if w == v {
                    target = Some(j);
                    break;
                }
                if !self.adjacent[v][w] {
                    break;
                }
            }
            match target {
                Some(j) => {
                    let mut e = std::mem::take(&mut syl[j].elem);
                    e.push(local);
                    let e = self.vertices[v].nf_letters(&e);
                    if e.is_empty() {
                        syl.remove(j);
                    } else {
                        syl[j].elem = e;
                    }
                }
                None => syl.push(Syllable {
                    vertex: v,
                    elem: vec![local],
                }),
            }
        }
        syl
    }

    fn lex_order(&self, mut syl: Vec<Syllable>) -> Vec<Letter> {
        let mut out = Vec::new();
        while !syl.is_empty() {
            let mut best: Option<usize> = None;
            for j in 0..syl.len() {
                let v = syl[j].vertex;
                let free = syl[..j]
                    .iter()
                    .all(|p| p.vertex != v && self.adjacent[v][p.vertex]);
                if free && best.is_none_or(|b| v < syl[b].vertex) {
                    best = Some(j);
                }
            }
            let b = best.expect("first syllable is always available");
            let s = syl.remove(b);
            let off = self.offsets[s.vertex];
            out.extend(s.elem.iter().map(|&l| l + off));
        }
        out
    }
}

/// Syllable decomposition of a normal form in a free product: `(factor, letters)`.
pub fn free_product_syllables(model: &GroupModel, w: &Word) -> Vec<(usize, Word)> {
    let mut out: Vec<(usize, Word)> = Vec::new();
    for &l in &w.0 {
        let f = model.letter_owner(l).unwrap_or(0);
        match out.last_mut() {
            Some((g, word)) if *g == f => word.0.push(l),
            _ => out.push((f, Word(vec![l]))),
        }
    }
    out
}

/// Component of an element in factor `i` of a direct product, in that
/// factor's local letters.
pub fn product_component(model: &GroupModel, w: &Word, i: usize) -> Word {
    let off = model.factor_offset(i).unwrap_or(0);
    let letters: Vec<Letter> =
        w.0.iter()
            .filter(|&&l| model.letter_owner(l) == Some(i))
            .map(|&l| l - off)
            .collect();
    match model.factor(i) {
        Some(f) => f.nf(&Word(letters)),
        None => Word(letters),
    }
}

/// Splits `g = rep · tail` with `tail` in factor `i` of a free product and
/// the last syllable of `rep` outside factor `i`. `rep` is the minimal
/// representative of the coset `g·A_i`.
pub fn coset_min_rep(model: &GroupModel, g: &Word, i: usize) -> (Word, Word) {
    let g = model.nf(g);
    let syl = free_product_syllables(model, &g);
    match syl.last() {
        Some((f, tail)) if *f == i => {
            let cut = g.len() - tail.len();
            (Word(g.0[..cut].to_vec()), tail.clone())
        }
        _ => (g, Word::identity()),
    }
}

/// Nearest element of the coset `rep·A_i` to `g`, written as `rep·a`; returns
/// `a` (global letters). It is the first syllable of `rep⁻¹g` when that
/// syllable lies in `A_i`, and the identity otherwise.
pub fn coset_gate(model: &GroupModel, rep: &Word, i: usize, g: &Word) -> Word {
    let h = model.mul(&model.inverse(rep), g);
    match free_product_syllables(model, &h).into_iter().next() {
        Some((f, a)) if f == i => a,
        _ => Word::identity(),
    }
}

/// Rewrites a word in factor `i`'s global letters into the factor's own letters.
pub fn to_local(model: &GroupModel, w: &Word, i: usize) -> Word {
    let off = model.factor_offset(i).unwrap_or(0);
    Word(w.0.iter().map(|&l| l - off).collect())
}

/// Inverse of [`to_local`].
pub fn to_global(model: &GroupModel, w: &Word, i: usize) -> Word {
    let off = model.factor_offset(i).unwrap_or(0);
    Word(w.0.iter().map(|&l| l + off).collect())
}

/// Normal form of a uniformly random word of uniformly random length in `0..=max_len`.
pub fn random_element<R: rand::Rng>(model: &GroupModel, max_len: usize, rng: &mut R) -> Word {
    let len = rng.gen_range(0..=max_len);
    let n = model.num_letters();
    if n == 0 {
        return Word::identity();
    }
    let letters = (0..len).map(|_| rng.gen_range(0..n) as Letter).collect();
    model.nf(&Word(letters))
}

/// Exponent sum of generator `gen` (an even letter) in a word of a leaf model.
pub fn exponent_sum(w: &Word, gen: Letter) -> i64 {
    w.0.iter()
        .map(|&l| {
            if l == gen {
                1
            } else if l == gen + 1 {
                -1
            } else {
                0
            }
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(m: &GroupModel, s: &str) -> Word {
        m.parse_word(s).unwrap()
    }

    #[test]
    fn free_reduction() {
        let f = GroupModel::free(2);
        assert_eq!(f.format_word(&p(&f, "abB")), "a");
        assert_eq!(
            f.multiply(&p(&f, "a"), &p(&f, "A")).unwrap(),
            Word::identity()
        );
        assert_eq!(
            f.format_word(&f.multiply(&p(&f, "ab"), &p(&f, "Ba")).unwrap()),
            "aa"
        );
    }

    #[test]
    fn abelian_shortlex() {
        let z2 = GroupModel::free_abelian(2);
        let ba = z2.normal_form(&Word(vec![2, 0])).unwrap();
        assert_eq!(z2.format_word(&ba), "ab");
        assert_eq!(
            z2.format_word(&z2.multiply(&p(&z2, "a"), &p(&z2, "b")).unwrap()),
            "ab"
        );
    }

    #[test]
    fn unknown_generator_is_input_error() {
        let f = GroupModel::free(2);
        assert!(matches!(
            f.normal_form(&Word(vec![9])),
            Err(LabError::Input(_))
        ));
    }

    #[test]
    fn graph_product_shuffle() {
        // a - b adjacent, c isolated; every vertex group is Z.
        let z = GroupSpec::FreeAbelian { rank: 1 };
        let m = GroupModel::from_spec(&GroupSpec::GraphProduct {
            vertices: vec![z.clone(), z.clone(), z],
            edges: vec![[0, 1]],
        })
        .unwrap();
        let cabc = p(&m, "cabc");
        let cbac = p(&m, "cbac");
        assert_eq!(cabc, cbac);
        assert_eq!(m.format_word(&cabc), "cabc");
        assert_eq!(m.format_word(&p(&m, "ba")), "ab");
        assert_eq!(m.format_word(&p(&m, "bcaACB")), "e");
        assert_eq!(m.format_word(&p(&m, "acA")), "acA");
    }

    #[test]
    fn direct_and_free_products() {
        let f2z = GroupModel::direct_product(vec![
            GroupSpec::Free { rank: 2 },
            GroupSpec::FreeAbelian { rank: 1 },
        ])
        .unwrap();
        assert_eq!(f2z.format_word(&p(&f2z, "cacb")), "abcc");
        assert_eq!(f2z.word_length(&p(&f2z, "aCbc")), 2);
        let fp = GroupModel::free_product(vec![
            GroupSpec::Free { rank: 2 },
            GroupSpec::FreeAbelian { rank: 1 },
        ])
        .unwrap();
        assert_eq!(fp.format_word(&p(&fp, "acCb")), "ab");
        assert_eq!(fp.format_word(&p(&fp, "ca")), "ca");
        let syl = free_product_syllables(&fp, &p(&fp, "abcca"));
        assert_eq!(syl.len(), 3);
    }

    #[test]
    fn powers_and_conjugates() {
        let f = GroupModel::free(2);
        let a = p(&f, "a");
        let b = p(&f, "b");
        assert_eq!(f.format_word(&f.power(&a, -3)), "AAA");
        assert_eq!(f.format_word(&f.conjugate(&b, &a)), "baB");
        assert_eq!(f.format_word(&p(&f, "a^3b^-1")), "aaaB");
    }
}
