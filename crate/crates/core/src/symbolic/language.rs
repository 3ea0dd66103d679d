//! Depth-first enumeration of `L_n(X)`.
//!
//! All four shift variants have factor-closed, right-extendable languages, so
//! extending admissible prefixes one letter at a time and pruning on each
//! extension visits exactly the admissible words. Traversal is lexicographic.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::symbolic::shift::{
    below_with_guard, beta_kind, inverse_powers, BetaKind, ShiftSpec,
};
use crate::symbolic::word::{Letter, Word};

/// Node budget for counting when no closed form exists.
const COUNT_NODE_CAP: u64 = 1 << 34;

/// Visits every admissible word of length `1..=n` in lexicographic DFS order.
/// The visitor sees each word as a slice; its length is the depth.
pub fn walk_language<F>(spec: &ShiftSpec, n: usize, visitor: &mut F) -> Result<()>
where
    F: FnMut(&[Letter]) -> Result<()>,
{
    if n == 0 {
        return Ok(());
    }
    let mut prefix = Vec::with_capacity(n);
    match spec.normalized() {
        ShiftSpec::Full { alphabet_size } => {
            walk_full(alphabet_size as Letter, n, &mut prefix, visitor)
        }
        ShiftSpec::Markov { adjacency } => {
            walk_markov(&|i, j| adjacency.allows(i, j), adjacency.size() as Letter, n, &mut prefix, visitor)
        }
        ShiftSpec::Beta { beta } => {
            let BetaKind::Proper(beta) = beta_kind(beta) else {
                unreachable!("normalized beta shifts are proper")
            };
            let mut walker = BetaWalker::new(beta, n);
            walker.walk(&mut prefix, visitor)
        }
        coded @ ShiftSpec::Coded { .. } => {
            let words = coded_factors(&coded, n, u64::MAX)?;
            walk_sorted(&words, visitor)
        }
    }
}

fn walk_full<F>(k: Letter, n: usize, prefix: &mut Vec<Letter>, visitor: &mut F) -> Result<()>
where
    F: FnMut(&[Letter]) -> Result<()>,
{
    for a in 0..k {
        prefix.push(a);
        visitor(prefix)?;
        if prefix.len() < n {
            walk_full(k, n, prefix, visitor)?;
        }
        prefix.pop();
    }
    Ok(())
}

fn walk_markov<F, A>(
    allows: &A,
    k: Letter,
    n: usize,
    prefix: &mut Vec<Letter>,
    visitor: &mut F,
) -> Result<()>
where
    F: FnMut(&[Letter]) -> Result<()>,
    A: Fn(Letter, Letter) -> bool,
{
    let last = prefix.last().copied();
    for a in 0..k {
        if let Some(l) = last {
            if !allows(l, a) {
                continue;
            }
        }
        prefix.push(a);
        visitor(prefix)?;
        if prefix.len() < n {
            walk_markov(allows, k, n, prefix, visitor)?;
        }
        prefix.pop();
    }
    Ok(())
}

/// Keeps, for each depth, the window sums of every suffix of the prefix.
struct BetaWalker {
    k: Letter,
    n: usize,
    pow: Vec<f64>,
    // sums[d][i]: sum of the window starting at i of the length-d prefix
    sums: Vec<Vec<f64>>,
}

impl BetaWalker {
    fn new(beta: f64, n: usize) -> Self {
        let sums = (0..=n).map(|d| vec![0.0; d]).collect();
        BetaWalker {
            k: beta.ceil() as Letter,
            n,
            pow: inverse_powers(beta, n + 1),
            sums,
        }
    }

    fn walk<F>(&mut self, prefix: &mut Vec<Letter>, visitor: &mut F) -> Result<()>
    where
        F: FnMut(&[Letter]) -> Result<()>,
    {
        let d = prefix.len();
        for a in 0..self.k {
            if a > 0 && !self.extend(d, a) {
                // larger letters only make every sum larger
                break;
            }
            if a == 0 {
                let (lo, hi) = self.sums.split_at_mut(d + 1);
                hi[0][..d].copy_from_slice(&lo[d]);
                hi[0][d] = 0.0;
            }
            prefix.push(a);
            visitor(prefix)?;
            if prefix.len() < self.n {
                self.walk(prefix, visitor)?;
            }
            prefix.pop();
        }
        Ok(())
    }

    /// Writes level `d+1` sums for letter `a > 0`; false if some window
    /// reaches 1.
    fn extend(&mut self, d: usize, a: Letter) -> bool {
        let (lo, hi) = self.sums.split_at_mut(d + 1);
        let parent = &lo[d];
        let child = &mut hi[0];
        let a = a as f64;
        for i in 0..d {
            let s = parent[i] + a * self.pow[d - i + 1];
            if !below_with_guard(s, 1.0) {
                return false;
            }
            child[i] = s;
        }
        let s = a * self.pow[1];
        if !below_with_guard(s, 1.0) {
            return false;
        }
        child[d] = s;
        true
    }
}

fn walk_sorted<F>(words: &BTreeSet<Word>, visitor: &mut F) -> Result<()>
where
    F: FnMut(&[Letter]) -> Result<()>,
{
    let mut prev: &[Letter] = &[];
    for w in words {
        let cur = w.letters();
        let common = prev.iter().zip(cur).take_while(|(a, b)| a == b).count();
        for d in common + 1..=cur.len() {
            visitor(&cur[..d])?;
        }
        prev = cur;
    }
    Ok(())
}

/// `L_n(spec)` as a lexicographically sorted list.
pub fn language(spec: &ShiftSpec, n: usize, max_words: u64) -> Result<Vec<Word>> {
    if n == 0 {
        return Err(Error::Input("language length must be positive".into()));
    }
    if let ShiftSpec::Coded { .. } = spec {
        let words = coded_factors(spec, n, max_words)?;
        return Ok(words.into_iter().collect());
    }
    let mut out = Vec::new();
    walk_language(spec, n, &mut |w| {
        if w.len() == n {
            if out.len() as u64 >= max_words {
                return Err(Error::Resource {
                    what: format!("language of length {n}"),
                    estimate: max_words as u128 + 1,
                    budget: max_words as u128,
                });
            }
            out.push(Word::from(w));
        }
        Ok(())
    })?;
    Ok(out)
}

/// `|L_n(spec)|`.
pub fn count_language(spec: &ShiftSpec, n: usize) -> Result<u128> {
    if n == 0 {
        return Ok(1);
    }
    match spec.normalized() {
        ShiftSpec::Full { alphabet_size } => (alphabet_size as u128)
            .checked_pow(n as u32)
            .ok_or_else(|| Error::Resource {
                what: format!("count of full-shift words of length {n}"),
                estimate: u128::MAX,
                budget: u128::MAX,
            }),
        ShiftSpec::Markov { adjacency } => {
            let k = adjacency.size();
            let mut ending = vec![1u128; k];
            for _ in 1..n {
                let mut next = vec![0u128; k];
                for (i, &c) in ending.iter().enumerate() {
                    for (j, slot) in next.iter_mut().enumerate() {
                        if adjacency.allows(i as Letter, j as Letter) {
                            *slot = slot.saturating_add(c);
                        }
                    }
                }
                ending = next;
            }
            Ok(ending.iter().fold(0u128, |a, &b| a.saturating_add(b)))
        }
        spec @ ShiftSpec::Beta { .. } => {
            let mut nodes = 0u64;
            let mut count = 0u128;
            walk_language(&spec, n, &mut |w| {
                nodes += 1;
                if nodes > COUNT_NODE_CAP {
                    return Err(Error::Resource {
                        what: format!("counting beta words of length {n}"),
                        estimate: nodes as u128,
                        budget: COUNT_NODE_CAP as u128,
                    });
                }
                if w.len() == n {
                    count += 1;
                }
                Ok(())
            })?;
            Ok(count)
        }
        coded @ ShiftSpec::Coded { .. } => {
            Ok(coded_factors(&coded, n, COUNT_NODE_CAP)?.len() as u128)
        }
    }
}

/// Length-`n` factors of a coded shift, by sliding a window over
/// concatenations indexed by words of the index β-shift.
pub(crate) fn coded_factors(spec: &ShiftSpec, n: usize, max_words: u64) -> Result<BTreeSet<Word>> {
    let ShiftSpec::Coded {
        blocks, index_beta, ..
    } = spec
    else {
        return Err(Error::Internal("coded_factors called on a non-coded shift".into()));
    };
    let min_len = blocks.iter().map(Word::len).min().unwrap_or(1).max(1);
    let span = n.div_ceil(min_len) + 2;
    let index = ShiftSpec::beta(*index_beta)?;
    let mut out = BTreeSet::new();
    let mut index_words = 0u64;
    walk_language(&index, span, &mut |iw| {
        if iw.len() != span {
            return Ok(());
        }
        index_words += 1;
        if index_words > max_words {
            return Err(Error::Resource {
                what: format!("coded-shift index words of length {span}"),
                estimate: index_words as u128,
                budget: max_words as u128,
            });
        }
        let concat: Vec<Letter> = iw
            .iter()
            .flat_map(|&i| blocks[i as usize].letters().iter().copied())
            .collect();
        for window in concat.windows(n) {
            out.insert(Word::from(window));
        }
        Ok(())
    })?;
    if out.len() as u64 > max_words {
        return Err(Error::Resource {
            what: format!("coded-shift factors of length {n}"),
            estimate: out.len() as u128,
            budget: max_words as u128,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PHI: f64 = 1.618_033_988_749_895;

    fn strings(words: &[Word]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn full_shift_counts() {
        let spec = ShiftSpec::full(2).unwrap();
        assert_eq!(language(&spec, 3, 100).unwrap().len(), 8);
        assert_eq!(count_language(&spec, 3).unwrap(), 8);
        assert_eq!(count_language(&ShiftSpec::full(3).unwrap(), 7).unwrap(), 2187);
    }

    #[test]
    fn golden_beta_small_lengths() {
        let spec = ShiftSpec::beta(PHI).unwrap();
        let counts: Vec<usize> = (1..=3)
            .map(|n| language(&spec, n, 100).unwrap().len())
            .collect();
        assert_eq!(counts, vec![2, 3, 5]);
        assert_eq!(
            strings(&language(&spec, 3, 100).unwrap()),
            vec!["000", "001", "010", "100", "101"]
        );
    }

    #[test]
    fn alternating_markov_words() {
        let spec = ShiftSpec::markov(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(strings(&language(&spec, 3, 100).unwrap()), vec!["010", "101"]);
        assert_eq!(count_language(&spec, 3).unwrap(), 2);
    }

    #[test]
    fn budget_exceeded_is_resource_error() {
        let spec = ShiftSpec::full(2).unwrap();
        let err = language(&spec, 10, 1000).unwrap_err();
        assert!(matches!(err, Error::Resource { budget: 1000, .. }));
    }

    #[test]
    fn coded_factors_of_two_blocks() {
        let base = ShiftSpec::markov(2, &[(0, 0), (0, 1), (1, 0)]).unwrap();
        let blocks = vec!["00".parse().unwrap(), "01".parse().unwrap()];
        let coded = ShiftSpec::coded(base.clone(), blocks, 2.0).unwrap();
        // index full shift on {00, 01}: all factors of (00|01)^∞
        let words = language(&coded, 3, 100).unwrap();
        assert_eq!(strings(&words), vec!["000", "001", "010", "100", "101"]);
        for w in &words {
            assert!(base.is_word_admissible(w).unwrap());
        }
        assert!(coded.is_word_admissible(&"0100".parse().unwrap()).unwrap());
        // ones sit at even distances from each other
        assert!(base.is_word_admissible(&"1001".parse().unwrap()).unwrap());
        assert!(!coded.is_word_admissible(&"1001".parse().unwrap()).unwrap());
    }

    #[test]
    fn walk_visits_prefixes_in_order() {
        let spec = ShiftSpec::beta(PHI).unwrap();
        let mut seen = Vec::new();
        walk_language(&spec, 2, &mut |w| {
            seen.push(Word::from(w).to_string());
            Ok(())
        })
        .unwrap();
        assert_eq!(seen, vec!["0", "00", "01", "1", "10"]);
    }
}
