use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::ball::reaches_all;
use super::{GroupModel, Word};
use crate::error::Result;

/// A finite generating set. The identity is always an element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratingSet {
    elements: Vec<Word>,
    pub symmetrized: bool,
}

impl GeneratingSet {
    /// Normalizes every word, adds the identity (and inverses when
    /// `symmetrize` is set), removes duplicates and sorts shortlex.
    pub fn new(model: &GroupModel, words: &[Word], symmetrize: bool) -> Result<Self> {
        let mut set: Vec<Word> = Vec::with_capacity(words.len() * 2 + 1);
        set.push(Word::identity());
        for w in words {
            let n = model.normal_form(w)?;
            if symmetrize {
                set.push(model.inverse(&n));
            }
            set.push(n);
        }
        set.sort_by(|a, b| a.shortlex_key().cmp(&b.shortlex_key()));
        set.dedup();
        Ok(GeneratingSet {
            elements: set,
            symmetrized: symmetrize,
        })
    }

    pub fn from_labels(model: &GroupModel, labels: &[&str], symmetrize: bool) -> Result<Self> {
        let words = labels
            .iter()
            .map(|l| model.parse_word(l))
            .collect::<Result<Vec<_>>>()?;
        Self::new(model, &words, symmetrize)
    }

    /// `{1} ∪ {generators}`, optionally with inverses.
    pub fn standard(model: &GroupModel, symmetrize: bool) -> Self {
        let words: Vec<Word> = model
            .positive_letters()
            .into_iter()
            .map(Word::letter)
            .collect();
        Self::new(model, &words, symmetrize).expect("standard generators are valid")
    }

    pub fn elements(&self) -> &[Word] {
        &self.elements
    }

    /// Elements other than the identity.
    pub fn nontrivial(&self) -> impl Iterator<Item = &Word> {
        self.elements.iter().filter(|w| !w.is_empty())
    }

    pub fn contains_identity(&self) -> bool {
        self.elements.iter().any(|w| w.is_empty())
    }

    pub fn is_closed_under_inversion(&self, model: &GroupModel) -> bool {
        let set: HashSet<&Word> = self.elements.iter().collect();
        self.elements
            .iter()
            .all(|w| set.contains(&model.inverse(w)))
    }

    pub fn symmetrize(&self, model: &GroupModel) -> Self {
        Self::new(model, &self.elements, true).expect("elements are already valid")
    }

    pub fn encode(&self, model: &GroupModel) -> String {
        let words: Vec<String> = self.nontrivial().map(|w| model.format_word(w)).collect();
        format!("{{1,{}}}", words.join(","))
    }
}

/// True when every standard generator lies in the ball of radius `radius`
/// of `X ∪ X⁻¹`. A positive answer proves that `X` generates.
pub fn generates_at_radius(model: &GroupModel, x: &GeneratingSet, radius: usize) -> Result<bool> {
    let sym = x.symmetrize(model);
    let targets: Vec<Word> = model
        .positive_letters()
        .into_iter()
        .map(Word::letter)
        .collect();
    reaches_all(model, &sym, radius, &targets, super::DEFAULT_BALL_BUDGET)
}

/// Candidate generating sets with at most `size_bound` non-identity words of
/// length at most `length_bound`, kept when generation is certified at
/// `ambient_radius`. Candidates are distinct non-identity elements taken in
/// shortlex order; subsets are produced in lexicographic index order.
pub fn enumerate_generating_sets(
    model: &GroupModel,
    size_bound: usize,
    length_bound: usize,
    ambient_radius: usize,
) -> impl Iterator<Item = GeneratingSet> + '_ {
    let std = GeneratingSet::standard(model, true);
    let candidates: Vec<Word> = if size_bound == 0 || length_bound == 0 {
        Vec::new()
    } else {
        let layers =
            super::ball::ball_layers(model, &std, length_bound, super::DEFAULT_BALL_BUDGET)
                .unwrap_or_default();
        let mut c: Vec<Word> = layers.into_iter().skip(1).flatten().collect();
        c.sort_by(|a, b| a.shortlex_key().cmp(&b.shortlex_key()));
        c
    };
    Combinations::new(candidates.len(), size_bound).filter_map(move |idx| {
        let words: Vec<Word> = idx.iter().map(|&i| candidates[i].clone()).collect();
        let set = GeneratingSet::new(model, &words, false).ok()?;
        generates_at_radius(model, &set, ambient_radius)
            .ok()?
            .then_some(set)
    })
}

/// Index subsets of `0..n` of sizes `1..=k`, by size then lexicographically.
struct Combinations {
    n: usize,
    k_max: usize,
    current: Vec<usize>,
}

impl Combinations {
    fn new(n: usize, k_max: usize) -> Self {
        Combinations {
            n,
            k_max: k_max.min(n),
            current: Vec::new(),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.k_max == 0 {
            return None;
        }
        if self.current.is_empty() {
            self.current = vec![0];
            return Some(self.current.clone());
        }
        let k = self.current.len();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.current[i] < self.n - (k - i) {
                self.current[i] += 1;
                for j in i + 1..k {
                    self.current[j] = self.current[j - 1] + 1;
                }
                return Some(self.current.clone());
            }
        }
        if k < self.k_max {
            self.current = (0..k + 1).collect();
            return Some(self.current.clone());
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_count() {
        assert_eq!(Combinations::new(5, 2).count(), 5 + 10);
        assert_eq!(Combinations::new(3, 0).count(), 0);
        assert_eq!(Combinations::new(3, 5).count(), 7);
    }

    #[test]
    fn z_generation_at_radius() {
        let z = GroupModel::free_abelian(1);
        let good = GeneratingSet::from_labels(&z, &["a"], false).unwrap();
        let bad = GeneratingSet::from_labels(&z, &["a^2"], true).unwrap();
        assert!(generates_at_radius(&z, &good, 3).unwrap());
        assert!(!generates_at_radius(&z, &bad, 3).unwrap());
        let sets: Vec<_> = enumerate_generating_sets(&z, 1, 2, 3).collect();
        assert!(sets.iter().any(|s| s.encode(&z) == "{1,a}"));
        assert!(sets.iter().all(|s| s.encode(&z) != "{1,aa}"));
    }

    #[test]
    fn size_zero_is_empty() {
        let f = GroupModel::free(2);
        assert_eq!(enumerate_generating_sets(&f, 0, 3, 6).count(), 0);
    }

    #[test]
    fn free_group_single_letters() {
        let f = GroupModel::free(2);
        let sets: Vec<String> = enumerate_generating_sets(&f, 2, 1, 6)
            .map(|s| s.encode(&f))
            .collect();
        // Exhaustive: of the 4 singletons and 6 pairs over {a,A,b,B}, only
        // pairs with one a-letter and one b-letter generate.
        let mut expected = vec!["{1,a,b}", "{1,a,B}", "{1,A,b}", "{1,A,B}"];
        expected.sort();
        let mut got = sets.clone();
        got.sort();
        let mut e: Vec<String> = expected.into_iter().map(String::from).collect();
        e.sort();
        assert_eq!(got, e);
    }
}
