use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{GeneratingSet, GroupModel, Word};
use crate::error::{LabError, Result};

/// Right-coset table of a finite-index subgroup `H`, built by saturating
/// `H·1` under `X ∪ X⁻¹`, together with the Schreier generators it yields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CosetTable {
    pub index: usize,
    /// Breadth-first coset representatives; `representatives[0]` is the identity.
    pub representatives: Vec<Word>,
    /// X-length of each representative (at most `index - 1`).
    pub representative_lengths: Vec<usize>,
    /// `transitions[i][j]`: coset of `representatives[i] · letters[j]`.
    pub transitions: Vec<Vec<usize>>,
    pub letters: Vec<Word>,
    pub generators: GeneratingSet,
    /// X-length bound of each element of `generators`, in the same order.
    pub generator_lengths: Vec<usize>,
}

/// Schreier generators of the index-`d` subgroup described by `membership`.
/// Every returned element has X-length at most `2d - 1`.
pub fn schreier_generators(
    model: &GroupModel,
    x: &GeneratingSet,
    membership: &dyn Fn(&Word) -> bool,
    d: usize,
) -> Result<CosetTable> {
    if d == 0 {
        return Err(LabError::Precondition(
            "subgroup index must be at least 1".into(),
        ));
    }
    let letters: Vec<Word> = x.symmetrize(model).nontrivial().cloned().collect();
    let mut reps = vec![Word::identity()];
    let mut lengths = vec![0usize];
    let mut transitions: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    let find = |reps: &[Word], g: &Word| {
        reps.iter()
            .position(|r| membership(&model.mul(g, &model.inverse(r))))
    };
    while let Some(i) = queue.pop_front() {
        let mut row = Vec::with_capacity(letters.len());
        for l in &letters {
            let g = model.mul(&reps[i], l);
            let j = match find(&reps, &g) {
                Some(j) => j,
                None => {
                    reps.push(g);
                    lengths.push(lengths[i] + 1);
                    if reps.len() > d {
                        return Err(LabError::IndexMismatch {
                            expected: d,
                            found: reps.len(),
                        });
                    }
                    queue.push_back(reps.len() - 1);
                    reps.len() - 1
                }
            };
            row.push(j);
        }
        if transitions.len() <= i {
            transitions.resize(i + 1, Vec::new());
        }
        transitions[i] = row;
    }
    if reps.len() != d {
        return Err(LabError::IndexMismatch {
            expected: d,
            found: reps.len(),
        });
    }

    if d == 1 {
        let generator_lengths = x
            .elements()
            .iter()
            .map(|w| usize::from(!w.is_empty()))
            .collect();
        return Ok(CosetTable {
            index: 1,
            representatives: reps,
            representative_lengths: lengths,
            transitions,
            letters,
            generators: x.clone(),
            generator_lengths,
        });
    }

    let mut best: BTreeMap<Word, usize> = BTreeMap::new();
    for (i, row) in transitions.iter().enumerate() {
        for (l, &j) in letters.iter().zip(row) {
            let g = model.mul(&model.mul(&reps[i], l), &model.inverse(&reps[j]));
            if g.is_empty() {
                continue;
            }
            let len = lengths[i] + 1 + lengths[j];
            best.entry(g)
                .and_modify(|b| *b = (*b).min(len))
                .or_insert(len);
        }
    }
    let words: Vec<Word> = best.keys().cloned().collect();
    let generators = GeneratingSet::new(model, &words, false)?;
    let generator_lengths = generators
        .elements()
        .iter()
        .map(|w| if w.is_empty() { 0 } else { best[w] })
        .collect();
    Ok(CosetTable {
        index: d,
        representatives: reps,
        representative_lengths: lengths,
        transitions,
        letters,
        generators,
        generator_lengths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cayley_ball_with_budget, exponent_sum};

    fn even_total(w: &Word) -> bool {
        w.len().is_multiple_of(2)
    }

    #[test]
    fn even_integers() {
        let z = GroupModel::free_abelian(1);
        let x = GeneratingSet::standard(&z, true);
        let table = schreier_generators(&z, &x, &|w| exponent_sum(w, 0) % 2 == 0, 2).unwrap();
        assert_eq!(table.generators.encode(&z), "{1,aa,AA}");
        assert!(table.generator_lengths.iter().all(|&l| l <= 3));
    }

    #[test]
    fn index_one_returns_x() {
        let f = GroupModel::free(2);
        let x = GeneratingSet::from_labels(&f, &["a", "b"], false).unwrap();
        let table = schreier_generators(&f, &x, &|_| true, 1).unwrap();
        assert_eq!(table.generators, x);
    }

    #[test]
    fn index_mismatch() {
        let z = GroupModel::free_abelian(1);
        let x = GeneratingSet::standard(&z, true);
        let member = |w: &Word| exponent_sum(w, 0) % 3 == 0;
        assert!(matches!(
            schreier_generators(&z, &x, &member, 2),
            Err(LabError::IndexMismatch { expected: 2, .. })
        ));
        assert!(matches!(
            schreier_generators(&z, &x, &member, 4),
            Err(LabError::IndexMismatch {
                expected: 4,
                found: 3
            })
        ));
    }

    #[test]
    fn free_kernel_to_z2() {
        // Free reduction preserves length parity, so membership is parity of the normal form.
        let f = GroupModel::free(2);
        let x = GeneratingSet::standard(&f, true);
        let table = schreier_generators(&f, &x, &|w| even_total(w), 2).unwrap();
        assert!(table.generator_lengths.iter().all(|&l| l <= 3));
        for (w, &l) in table
            .generators
            .elements()
            .iter()
            .zip(&table.generator_lengths)
        {
            assert!(even_total(w));
            assert!(f.word_length(w) <= l);
        }
        let sub = cayley_ball_with_budget(&f, &table.generators, 3, 1_000_000, true).unwrap();
        let sub: std::collections::HashSet<Word> = sub.elements.unwrap().into_iter().collect();
        assert!(sub.iter().all(even_total));
        let ambient = cayley_ball_with_budget(&f, &x, 2, 1_000_000, true).unwrap();
        for w in ambient.elements.unwrap() {
            assert_eq!(sub.contains(&w), even_total(&w), "{}", f.format_word(&w));
        }
    }
}
