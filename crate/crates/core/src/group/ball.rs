use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{GeneratingSet, GroupModel, Word};
use crate::error::{LabError, Result};

/// Default cap on the number of distinct elements a ball may hold.
pub const DEFAULT_BALL_BUDGET: usize = 10_000_000;

/// `|X^n|` together with the counts for every radius up to `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallRecord {
    pub radius: usize,
    pub count: u64,
    /// `counts[k] = |X^k|` for `k = 0..=radius`.
    pub counts: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<Word>>,
}

/// Breadth-first layers of `X^n`: `layers[k]` holds the elements first
/// reached at radius `k`, sorted.
pub fn ball_layers(
    model: &GroupModel,
    x: &GeneratingSet,
    n: usize,
    budget: usize,
) -> Result<Vec<Vec<Word>>> {
    for w in x.elements() {
        model.validate(w)?;
    }
    let gens: Vec<&Word> = x.elements().iter().filter(|w| !w.is_empty()).collect();
    let mut seen: HashSet<Word> = HashSet::new();
    seen.insert(Word::identity());
    let mut layers = vec![vec![Word::identity()]];
    for radius in 1..=n {
        let mut next = Vec::new();
        for g in layers.last().expect("at least the identity layer") {
            for s in &gens {
                let h = model.mul(g, s);
                if !seen.contains(&h) {
                    seen.insert(h.clone());
                    next.push(h);
                }
            }
            if seen.len() > budget {
                return Err(LabError::Resource {
                    completed_radius: radius - 1,
                    elements: seen.len(),
                });
            }
        }
        next.sort_unstable();
        layers.push(next);
    }
    Ok(layers)
}

/// True when every target lies in `X^radius`. Stops as soon as all targets are seen.
pub(crate) fn reaches_all(
    model: &GroupModel,
    x: &GeneratingSet,
    radius: usize,
    targets: &[Word],
    budget: usize,
) -> Result<bool> {
    let mut missing: HashSet<Word> = targets
        .iter()
        .map(|t| model.nf(t))
        .filter(|t| !t.is_empty())
        .collect();
    if missing.is_empty() {
        return Ok(true);
    }
    let gens: Vec<&Word> = x.nontrivial().collect();
    let mut seen: HashSet<Word> = HashSet::new();
    seen.insert(Word::identity());
    let mut frontier = vec![Word::identity()];
    for r in 1..=radius {
        let mut next = Vec::new();
        for g in &frontier {
            for s in &gens {
                let h = model.mul(g, s);
                if seen.insert(h.clone()) {
                    missing.remove(&h);
                    next.push(h);
                }
            }
        }
        if missing.is_empty() {
            return Ok(true);
        }
        if seen.len() > budget {
            return Err(LabError::Resource {
                completed_radius: r - 1,
                elements: seen.len(),
            });
        }
        frontier = next;
    }
    Ok(false)
}

pub fn cayley_ball(model: &GroupModel, x: &GeneratingSet, n: usize) -> Result<BallRecord> {
    cayley_ball_with_budget(model, x, n, DEFAULT_BALL_BUDGET, false)
}

pub fn cayley_ball_with_budget(
    model: &GroupModel,
    x: &GeneratingSet,
    n: usize,
    budget: usize,
    keep_elements: bool,
) -> Result<BallRecord> {
    let layers = ball_layers(model, x, n, budget)?;
    let mut counts = Vec::with_capacity(layers.len());
    let mut total = 0u64;
    for layer in &layers {
        total += layer.len() as u64;
        counts.push(total);
    }
    let elements = keep_elements.then(|| {
        let mut all: Vec<Word> = layers.into_iter().flatten().collect();
        all.sort_unstable();
        all
    });
    Ok(BallRecord {
        radius: n,
        count: total,
        counts,
        elements,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthEstimate {
    pub n: usize,
    /// `log(β(n)) / n`.
    pub lambda: f64,
    /// `log(β(k)) / k` for `k = 1..=n`.
    pub sequence: Vec<f64>,
    pub counts: Vec<u64>,
}

impl GrowthEstimate {
    /// True when the sequence `log β(k) / k` never increases.
    pub fn is_nonincreasing(&self) -> bool {
        self.sequence.windows(2).all(|w| w[1] <= w[0] + 1e-12)
    }
}

pub fn growth_rate(model: &GroupModel, x: &GeneratingSet, n: usize) -> Result<GrowthEstimate> {
    if n == 0 {
        return Err(LabError::Precondition("growth_rate needs n >= 1".into()));
    }
    let ball = cayley_ball(model, x, n)?;
    let sequence: Vec<f64> = (1..=n)
        .map(|k| (ball.counts[k] as f64).ln() / k as f64)
        .collect();
    Ok(GrowthEstimate {
        n,
        lambda: sequence[n - 1],
        sequence,
        counts: ball.counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    fn brute_force_positive_words(model: &GroupModel, x: &GeneratingSet, n: usize) -> usize {
        // Every product x_1 ... x_n over X (identity included) enumerated directly.
        let elems = x.elements();
        let mut set = HashSet::new();
        let mut stack = vec![(Word::identity(), 0usize)];
        while let Some((w, k)) = stack.pop() {
            if k == n {
                set.insert(model.nf(&w));
                continue;
            }
            for e in elems {
                stack.push((w.concat(e), k + 1));
            }
        }
        set.len()
    }

    #[test]
    fn free_positive_ball_matches_brute_force() {
        let f = GroupModel::free(2);
        let x = GeneratingSet::from_labels(&f, &["a", "b"], false).unwrap();
        let ball = cayley_ball(&f, &x, 3).unwrap();
        assert_eq!(ball.count, 15);
        assert_eq!(brute_force_positive_words(&f, &x, 3), 15);
    }

    #[test]
    fn abelian_lattice_count() {
        let z2 = GroupModel::free_abelian(2);
        let x = GeneratingSet::standard(&z2, true);
        assert_eq!(cayley_ball(&z2, &x, 2).unwrap().count, 13);
        for n in 0..=8usize {
            let lattice = (-(n as i64)..=n as i64)
                .flat_map(|i| (-(n as i64)..=n as i64).map(move |j| (i, j)))
                .filter(|(i, j)| i.abs() + j.abs() <= n as i64)
                .count() as u64;
            assert_eq!(cayley_ball(&z2, &x, n).unwrap().count, lattice);
        }
    }

    #[test]
    fn radius_zero_is_one() {
        let m = GroupModel::direct_product(vec![
            GroupSpec::Free { rank: 2 },
            GroupSpec::Free { rank: 2 },
        ])
        .unwrap();
        let x = GeneratingSet::standard(&m, true);
        assert_eq!(cayley_ball(&m, &x, 0).unwrap().count, 1);
    }

    #[test]
    fn budget_overflow_is_an_error() {
        let f = GroupModel::free(2);
        let x = GeneratingSet::standard(&f, true);
        match cayley_ball_with_budget(&f, &x, 10, 1000, false) {
            Err(LabError::Resource {
                completed_radius, ..
            }) => assert!(completed_radius < 10),
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn growth_of_trivial_group_is_zero() {
        let t = GroupModel::trivial();
        let x = GeneratingSet::standard(&t, true);
        assert_eq!(growth_rate(&t, &x, 5).unwrap().lambda, 0.0);
    }

    #[test]
    fn abelian_growth_decreases() {
        let z2 = GroupModel::free_abelian(2);
        let x = GeneratingSet::standard(&z2, true);
        let g = growth_rate(&z2, &x, 12).unwrap();
        assert!((g.lambda - (313f64).ln() / 12.0).abs() < 1e-12);
        assert!(g.is_nonincreasing());
    }
}
