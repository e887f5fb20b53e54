//! Depth-bounded freeness oracles by normal-form distinctness.

use std::collections::HashSet;

use crate::error::{LabError, Result};
use crate::group::{GroupModel, Word};

fn check_depth(depth: usize) -> Result<()> {
    if depth == 0 {
        return Err(LabError::Precondition(
            "freeness depth must be at least 1".into(),
        ));
    }
    Ok(())
}

/// True iff the `2^{depth+1} − 2` nonempty positive words in `u, w` of
/// length at most `depth` are pairwise distinct in the group.
pub fn verify_free_semigroup(model: &GroupModel, u: &Word, w: &Word, depth: usize) -> Result<bool> {
    check_depth(depth)?;
    let (u, w) = (model.normal_form(u)?, model.normal_form(w)?);
    let mut seen: HashSet<Word> = HashSet::new();
    let mut level = vec![Word::identity()];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(level.len() * 2);
        for g in &level {
            for x in [&u, &w] {
                let h = model.mul(g, x);
                if !seen.insert(h.clone()) {
                    return Ok(false);
                }
                next.push(h);
            }
        }
        level = next;
    }
    Ok(true)
}

/// True iff all freely reduced words in `u^±, w^±` of length at most `depth`
/// are pairwise distinct in the group.
pub fn verify_free_subgroup(model: &GroupModel, u: &Word, w: &Word, depth: usize) -> Result<bool> {
    check_depth(depth)?;
    let u = model.normal_form(u)?;
    let w = model.normal_form(w)?;
    let letters = [u.clone(), model.inverse(&u), w.clone(), model.inverse(&w)];
    let mut seen: HashSet<Word> = HashSet::from([Word::identity()]);
    let mut level: Vec<(Word, usize)> = vec![(Word::identity(), usize::MAX)];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(level.len() * 3);
        for (g, last) in &level {
            for (i, x) in letters.iter().enumerate() {
                if *last != usize::MAX && i == (*last ^ 1) {
                    continue;
                }
                let h = model.mul(g, x);
                if !seen.insert(h.clone()) {
                    return Ok(false);
                }
                next.push((h, i));
            }
        }
        level = next;
    }
    Ok(true)
}

/// Number of nonempty positive words checked by [`verify_free_semigroup`].
pub fn semigroup_word_count(depth: usize) -> u64 {
    (1u64 << (depth + 1)) - 2
}

/// Number of reduced words (including the empty word) checked by
/// [`verify_free_subgroup`].
pub fn subgroup_word_count(depth: usize) -> u64 {
    1 + 2 * (3u64.pow(depth as u32) - 1)
}
