//! β-expansions, the sparse zero replacement that maps words of `X_{β'}`
//! into `X_β`, and finite-type approximations of β-shifts from inside and
//! outside.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbolic::shift::{below_with_guard, inverse_powers};
use crate::symbolic::sft::SftGraph;
use crate::symbolic::{beta_alphabet_size, beta_word_ok, Letter, ShiftSpec, Word};

/// Digits closer than this to an integer are snapped onto it.
const SNAP: f64 = 1e-9;

/// Largest window the default selection will pick.
pub const MAX_WINDOW: usize = 256;

/// First `n` digits of the greedy expansion of `t`, where each digit is the
/// largest integer whose contribution stays strictly below the remainder.
pub fn greedy_expansion(t: f64, beta: f64, n: usize) -> Result<Word> {
    if !(0.0..1.0).contains(&t) {
        return Err(Error::Input(format!("expansion needs t in [0,1), got {t}")));
    }
    if !(beta.is_finite() && beta > 1.0) {
        return Err(Error::Input(format!("expansion needs beta > 1, got {beta}")));
    }
    let mut digits = Vec::with_capacity(n);
    // y is the remainder scaled by β^{k+1}
    let mut y = t * beta;
    for _ in 0..n {
        let near = y.round();
        if (y - near).abs() < SNAP {
            y = near;
        }
        let a = if y <= 0.0 { 0.0 } else { y.ceil() - 1.0 };
        digits.push(a as Letter);
        y = (y - a) * beta;
    }
    Ok(Word::new(digits))
}

/// `(1 + β^{2k})^{1/2k} − β`, evaluated without cancellation.
pub fn delta_bound(beta: f64, k: usize) -> f64 {
    let two_k = 2.0 * k as f64;
    beta * ((-two_k * beta.ln()).exp().ln_1p() / two_k).exp_m1()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplacementPlan {
    /// 1-indexed positions that get zeroed.
    pub positions: BTreeSet<usize>,
    pub source: Word,
    pub result: Word,
    pub gap: usize,
}

fn check_beta(beta: f64, name: &str) -> Result<()> {
    if !(beta.is_finite() && beta > 1.0) {
        return Err(Error::Input(format!("{name} must be a real > 1, got {beta}")));
    }
    Ok(())
}

/// Zeroes a sparse set of letters of `y` (read as `y·0^∞`) so that the
/// result lies in `X_β`. `y` must be admissible for `beta_prime`, which in
/// turn must be closer to `beta` than [`delta_bound`].
pub fn sparse_zero_replacement(y: &Word, beta: f64, k: usize, beta_prime: f64) -> Result<ReplacementPlan> {
    check_beta(beta, "beta")?;
    check_beta(beta_prime, "beta'")?;
    if k == 0 {
        return Err(Error::Input("gap k must be positive".into()));
    }
    let bound = delta_bound(beta, k);
    if !(beta_prime < beta + bound) {
        return Err(Error::Precondition(format!(
            "beta' = {beta_prime} is not below beta + delta_bound = {}",
            beta + bound
        )));
    }
    let spec = ShiftSpec::beta(beta_prime)?;
    if y.letter_bound() > spec.alphabet_size() || !spec.is_word_admissible(y)? {
        return Err(Error::Precondition(format!(
            "{y} is not admissible for beta' = {beta_prime}"
        )));
    }

    let x = y.letters();
    let mut positions = BTreeSet::new();
    for (a, b) in segments(x, k) {
        let mut s = b;
        positions.insert(s + 1);
        while s >= a + k {
            match (a..s - k).rev().find(|&j| x[j] > 0) {
                Some(j) => {
                    positions.insert(j + 1);
                    s = j;
                }
                None => break,
            }
        }
    }
    let mut result = x.to_vec();
    for &p in &positions {
        result[p - 1] = 0;
    }
    Ok(ReplacementPlan {
        positions,
        source: y.clone(),
        result: Word::new(result),
        gap: k,
    })
}

/// Maximal stretches `[a, b]` (0-indexed, `b` the last nonzero letter)
/// separated by zero runs of length at least `k`; the zero tail counts as an
/// infinite run.
fn segments(x: &[Letter], k: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let n = x.len();
    let mut i = 0;
    let mut start: Option<usize> = None;
    let mut last_nonzero = 0;
    while i < n {
        if x[i] > 0 {
            start.get_or_insert(i);
            last_nonzero = i;
            i += 1;
            continue;
        }
        let run_start = i;
        while i < n && x[i] == 0 {
            i += 1;
        }
        let long = i - run_start >= k || i == n;
        if long {
            if let Some(a) = start.take() {
                out.push((a, last_nonzero));
            }
        } else if start.is_none() {
            start = Some(run_start);
        }
    }
    if let Some(a) = start {
        out.push((a, last_nonzero));
    }
    out
}

/// The word map `L_n(X_{β'}) → L_n(X_β)`: zero-extend, replace, truncate.
pub fn replace_word(v: &Word, beta: f64, beta_prime: f64, k: usize) -> Result<Word> {
    Ok(sparse_zero_replacement(v, beta, k, beta_prime)?.result)
}

/// `L_n(X_β)` built level by level; `Err` once a level exceeds `max_words`.
pub fn beta_blocks(beta: f64, n: usize, max_words: usize) -> Result<Vec<Word>> {
    check_beta(beta, "beta")?;
    let mut level = vec![Word::empty()];
    for _ in 0..n {
        level = extend_level(beta, &level);
        if level.len() > max_words {
            return Err(Error::Resource {
                what: format!("beta-shift blocks for beta = {beta}"),
                estimate: level.len() as u128,
                budget: max_words as u128,
            });
        }
    }
    Ok(level)
}

fn extend_level(beta: f64, level: &[Word]) -> Vec<Word> {
    let alphabet = beta_alphabet_size(beta) as Letter;
    let inv = 1.0 / beta;
    let mut out = Vec::with_capacity(level.len() * 2);
    let mut buf = Vec::new();
    for w in level {
        for a in 0..alphabet {
            buf.clear();
            buf.extend_from_slice(w.letters());
            buf.push(a);
            if a == 0 || suffix_windows_ok(&buf, inv) {
                out.push(Word::new(buf.clone()));
            }
        }
    }
    out
}

/// Windows of `letters` that end at its last letter, by Horner from the right.
fn suffix_windows_ok(letters: &[Letter], inv: f64) -> bool {
    let mut sum = 0.0;
    for &x in letters.iter().rev() {
        sum = (x as f64 + sum) * inv;
        if x > 0 && !below_with_guard(sum, 1.0) {
            return false;
        }
    }
    true
}

/// Largest window `m ≤ cap` with `|L_{m−1}(X_β)| ≤ max_states`, at least 2.
pub fn default_window(beta: f64, max_states: usize, cap: usize) -> usize {
    let mut level = vec![Word::empty()];
    let mut m = 1;
    while m < cap.max(2) {
        let next = extend_level(beta, &level);
        if next.len() > max_states {
            break;
        }
        level = next;
        m += 1;
    }
    m.max(2)
}

/// Finite-type inner approximation `W_m ⊆ X_β`: every `m`-window sum stays
/// below `1 − margin`, with `margin` bounding any tail beyond `m` letters.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerSftSpec {
    pub beta: f64,
    pub window: usize,
    pub margin: f64,
    graph: SftGraph,
}

impl InnerSftSpec {
    pub fn graph(&self) -> &SftGraph {
        &self.graph
    }

    pub fn language(&self, n: usize, max_words: u64) -> Result<Vec<Word>> {
        self.graph.language(n, max_words)
    }

    pub fn count_language(&self, n: usize) -> u128 {
        self.graph.count_language(n)
    }

    /// True when no live component has more than one cycle through a
    /// vertex, so word counts grow at most polynomially.
    pub fn has_zero_entropy(&self) -> bool {
        let live = self.graph.live_states();
        let succ = self.graph.successors();
        self.graph.components().iter().filter(|c| live[c[0]]).all(|c| {
            c.iter().all(|&u| succ[u].iter().filter(|v| c.binary_search(v).is_ok()).count() == 1)
        })
    }
}

pub fn inner_sft(beta: f64, m: usize) -> Result<InnerSftSpec> {
    inner_sft_bounded(beta, m, 1 << 20)
}

pub fn inner_sft_bounded(beta: f64, m: usize, max_states: usize) -> Result<InnerSftSpec> {
    check_beta(beta, "beta")?;
    if m < 2 {
        return Err(Error::Input(format!("inner SFT window must be at least 2, got {m}")));
    }
    let margin = (beta.ceil() - 1.0) * beta.powi(-(m as i32)) / (beta - 1.0);
    let limit = 1.0 - margin;
    let states = beta_blocks(beta, m - 1, max_states)?;
    let pow = inverse_powers(beta, m);
    let graph = SftGraph::from_blocks(m - 1, states, beta_alphabet_size(beta), |block| {
        let sum: f64 = block.iter().zip(&pow[1..]).map(|(&x, p)| x as f64 * p).sum();
        // outward: the float sum may sit a few ulps below the true one
        below_with_guard(crate::rounding::up_rel(sum, block.len()), limit)
    });
    Ok(InnerSftSpec {
        beta,
        window: m,
        margin,
        graph,
    })
}

/// Finite-type outer approximation: states `L_{m−1}(X_β)`, an edge whenever
/// the extended block lies in `L_m(X_β)`. Its language contains `L(X_β)`.
pub fn outer_sft(beta: f64, m: usize, max_states: usize) -> Result<SftGraph> {
    check_beta(beta, "beta")?;
    if m < 2 {
        return Err(Error::Input(format!("outer SFT window must be at least 2, got {m}")));
    }
    let states = beta_blocks(beta, m - 1, max_states)?;
    Ok(SftGraph::from_blocks(m - 1, states, beta_alphabet_size(beta), |block| {
        beta_word_ok(block, beta)
    }))
}
