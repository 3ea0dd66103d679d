use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::symbolic::word::{Letter, Word};

/// Absolute guard band applied to β window sums. A sum within this distance
/// of 1 is treated as reaching 1, so rounding can only remove words.
pub const GUARD_BAND: f64 = 1e-12;

static GUARD_HITS: AtomicU64 = AtomicU64::new(0);

/// Number of window sums rejected only because they fell inside the guard
/// band, process-wide.
pub fn guard_band_hits() -> u64 {
    GUARD_HITS.load(Ordering::Relaxed)
}

pub(crate) fn record_guard_hit(sum: f64) {
    GUARD_HITS.fetch_add(1, Ordering::Relaxed);
    log::debug!("window sum {sum:.17} rejected inside the guard band");
}

/// Returns true when a window sum is certified to stay below `limit`.
pub(crate) fn below_with_guard(sum: f64, limit: f64) -> bool {
    if sum < limit - GUARD_BAND {
        true
    } else {
        if sum < limit {
            record_guard_hit(sum);
        }
        false
    }
}

/// Dense adjacency relation `S ⊂ A × A` of a topological Markov chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    size: usize,
    allowed: Vec<bool>,
}

impl Adjacency {
    pub fn new(size: usize, pairs: &[(Letter, Letter)]) -> Result<Self> {
        let mut allowed = vec![false; size * size];
        for &(i, j) in pairs {
            if i as usize >= size || j as usize >= size {
                return Err(Error::Input(format!(
                    "adjacency pair ({i},{j}) references a letter outside the alphabet of size {size}"
                )));
            }
            allowed[i as usize * size + j as usize] = true;
        }
        Ok(Adjacency { size, allowed })
    }

    pub fn full(size: usize) -> Self {
        Adjacency {
            size,
            allowed: vec![true; size * size],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn allows(&self, i: Letter, j: Letter) -> bool {
        self.allowed[i as usize * self.size + j as usize]
    }

    pub fn pairs(&self) -> Vec<(Letter, Letter)> {
        let mut out = Vec::new();
        for i in 0..self.size {
            for j in 0..self.size {
                if self.allowed[i * self.size + j] {
                    out.push((i as Letter, j as Letter));
                }
            }
        }
        out
    }

    pub fn successors(&self) -> Vec<Vec<usize>> {
        (0..self.size)
            .map(|i| {
                (0..self.size)
                    .filter(|&j| self.allowed[i * self.size + j])
                    .collect()
            })
            .collect()
    }

    /// Keeps only pairs with both ends inside `letters`.
    pub fn restrict(&self, letters: &[Letter]) -> Adjacency {
        let keep: BTreeSet<Letter> = letters.iter().copied().collect();
        let mut allowed = vec![false; self.size * self.size];
        for i in 0..self.size {
            for j in 0..self.size {
                allowed[i * self.size + j] = self.allowed[i * self.size + j]
                    && keep.contains(&(i as Letter))
                    && keep.contains(&(j as Letter));
            }
        }
        Adjacency {
            size: self.size,
            allowed,
        }
    }
}

/// How a β value resolves into a concrete shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaKind {
    /// β ≤ 1: the singleton shift `{0^∞}`.
    Singleton,
    /// Integer β ≥ 2: the full shift on β letters.
    Full(usize),
    /// Non-integer β > 1.
    Proper(f64),
}

pub fn beta_kind(beta: f64) -> BetaKind {
    if beta <= 1.0 {
        BetaKind::Singleton
    } else if beta.fract() == 0.0 {
        BetaKind::Full(beta as usize)
    } else {
        BetaKind::Proper(beta)
    }
}

/// Alphabet size `max(⌈β⌉, 1)`.
pub fn beta_alphabet_size(beta: f64) -> usize {
    (beta.ceil() as usize).max(1)
}

/// Declarative description of a one-sided subshift.
#[derive(Debug, Clone, PartialEq)]
pub enum ShiftSpec {
    Full {
        alphabet_size: usize,
    },
    Markov {
        adjacency: Adjacency,
    },
    Beta {
        beta: f64,
    },
    /// Shifts of concatenations `t_{n1} t_{n2} ...` with `n1 n2 ... ∈ X_{index_beta}`.
    Coded {
        base: Box<ShiftSpec>,
        blocks: Vec<Word>,
        index_beta: f64,
    },
}

impl ShiftSpec {
    pub fn full(alphabet_size: usize) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::Input("full shift needs at least one letter".into()));
        }
        Ok(ShiftSpec::Full { alphabet_size })
    }

    pub fn markov(alphabet_size: usize, pairs: &[(Letter, Letter)]) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::Input("markov shift needs at least one letter".into()));
        }
        Ok(ShiftSpec::Markov {
            adjacency: Adjacency::new(alphabet_size, pairs)?,
        })
    }

    pub fn beta(beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::Input(format!("beta must be a positive real, got {beta}")));
        }
        Ok(ShiftSpec::Beta { beta })
    }

    pub fn coded(base: ShiftSpec, blocks: Vec<Word>, index_beta: f64) -> Result<Self> {
        if matches!(base, ShiftSpec::Coded { .. } | ShiftSpec::Beta { .. }) {
            return Err(Error::Input(
                "coded shifts are built over a full or markov base".into(),
            ));
        }
        if blocks.is_empty() {
            return Err(Error::Input("coded shift needs at least one block".into()));
        }
        let distinct: BTreeSet<&Word> = blocks.iter().collect();
        if distinct.len() != blocks.len() {
            return Err(Error::Input("coded blocks must be pairwise distinct".into()));
        }
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::Input("coded blocks must be nonempty".into()));
            }
            if !base.is_word_admissible(b)? {
                return Err(Error::Precondition(format!(
                    "block {b} is not admissible in the base shift"
                )));
            }
        }
        if !(index_beta.is_finite() && index_beta > 0.0) {
            return Err(Error::Input(format!(
                "index beta must be a positive real, got {index_beta}"
            )));
        }
        if beta_alphabet_size(index_beta) > blocks.len() {
            return Err(Error::Input(format!(
                "index beta {index_beta} needs {} blocks, only {} given",
                beta_alphabet_size(index_beta),
                blocks.len()
            )));
        }
        Ok(ShiftSpec::Coded {
            base: Box::new(base),
            blocks,
            index_beta,
        })
    }

    pub fn alphabet_size(&self) -> usize {
        match self {
            ShiftSpec::Full { alphabet_size } => *alphabet_size,
            ShiftSpec::Markov { adjacency } => adjacency.size(),
            ShiftSpec::Beta { beta } => beta_alphabet_size(*beta),
            ShiftSpec::Coded { base, .. } => base.alphabet_size(),
        }
    }

    /// Rewrites β shifts that are really full or singleton shifts.
    pub fn normalized(&self) -> ShiftSpec {
        match self {
            ShiftSpec::Beta { beta } => match beta_kind(*beta) {
                BetaKind::Singleton => ShiftSpec::Full { alphabet_size: 1 },
                BetaKind::Full(k) => ShiftSpec::Full { alphabet_size: k },
                BetaKind::Proper(_) => self.clone(),
            },
            _ => self.clone(),
        }
    }

    /// Membership of `w` in the language of this shift.
    pub fn is_word_admissible(&self, w: &Word) -> Result<bool> {
        w.check_alphabet(self.alphabet_size())?;
        let letters = w.letters();
        Ok(match self {
            ShiftSpec::Full { .. } => true,
            ShiftSpec::Markov { adjacency } => {
                letters.windows(2).all(|p| adjacency.allows(p[0], p[1]))
            }
            ShiftSpec::Beta { beta } => match beta_kind(*beta) {
                BetaKind::Full(_) => true,
                BetaKind::Singleton => letters.iter().all(|&l| l == 0),
                BetaKind::Proper(b) => beta_word_ok(letters, b),
            },
            ShiftSpec::Coded { .. } => {
                let words = crate::symbolic::language::coded_factors(self, w.len(), u64::MAX)?;
                words.contains(w)
            }
        })
    }
}

/// Powers `β^{-s}` for `s = 0..=n`.
pub(crate) fn inverse_powers(beta: f64, n: usize) -> Vec<f64> {
    let inv = 1.0 / beta;
    let mut out = Vec::with_capacity(n + 1);
    let mut p = 1.0;
    for _ in 0..=n {
        out.push(p);
        p *= inv;
    }
    out
}

/// Every window sum `Σ_{s=1}^{j-i} x_{s+i} β^{-s}` of `letters` stays below 1
/// (with guard band). Zero extension cannot increase any sum, so finite
/// windows suffice.
pub fn beta_word_ok(letters: &[Letter], beta: f64) -> bool {
    let pow = inverse_powers(beta, letters.len());
    for i in 0..letters.len() {
        if letters[i] == 0 {
            continue;
        }
        let mut sum = 0.0;
        for (s, &x) in letters[i..].iter().enumerate() {
            sum += x as f64 * pow[s + 1];
            if x > 0 && !below_with_guard(sum, 1.0) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    const PHI: f64 = 1.618_033_988_749_895;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn golden_beta_rejects_11() {
        let spec = ShiftSpec::beta(PHI).unwrap();
        assert!(!spec.is_word_admissible(&w("11")).unwrap());
        assert!(spec.is_word_admissible(&w("000")).unwrap());
        assert!(spec.is_word_admissible(&w("10100101")).unwrap());
        assert!(!spec.is_word_admissible(&w("1011")).unwrap());
    }

    #[test]
    fn markov_adjacency_check() {
        let spec = ShiftSpec::markov(2, &[(0, 1), (1, 0)]).unwrap();
        assert!(spec.is_word_admissible(&w("0101")).unwrap());
        assert!(!spec.is_word_admissible(&w("00")).unwrap());
    }

    #[test]
    fn out_of_range_letter_is_input_error() {
        let spec = ShiftSpec::full(2).unwrap();
        assert!(matches!(
            spec.is_word_admissible(&w("012")),
            Err(Error::Input(_))
        ));
        assert!(ShiftSpec::markov(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn beta_endpoints() {
        assert_eq!(beta_kind(0.5), BetaKind::Singleton);
        assert_eq!(beta_kind(1.0), BetaKind::Singleton);
        assert_eq!(beta_kind(2.0), BetaKind::Full(2));
        assert_eq!(beta_alphabet_size(0.0), 1);
        assert_eq!(beta_alphabet_size(PHI), 2);
        let singleton = ShiftSpec::beta(1.0).unwrap();
        assert_eq!(singleton.alphabet_size(), 1);
        assert!(singleton.is_word_admissible(&w("0000")).unwrap());
        let two = ShiftSpec::beta(2.0).unwrap();
        assert!(two.is_word_admissible(&Word::new(vec![1; 64])).unwrap());
    }

    #[test]
    fn coded_validation() {
        let base = ShiftSpec::markov(2, &[(0, 0), (0, 1), (1, 0)]).unwrap();
        assert!(ShiftSpec::coded(base.clone(), vec![w("00"), w("00")], 1.5).is_err());
        assert!(ShiftSpec::coded(base.clone(), vec![w("011")], 1.0).is_err());
        assert!(ShiftSpec::coded(base.clone(), vec![w("00")], 1.5).is_err());
        assert!(ShiftSpec::coded(base, vec![w("00"), w("01")], 1.5).is_ok());
    }
}
