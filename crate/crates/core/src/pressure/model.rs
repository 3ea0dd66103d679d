//! Precomputed data for evaluating pressure bounds at many exponents.

use crate::betashift::{default_window, inner_sft_bounded, outer_sft, MAX_WINDOW};
use crate::conformal::{Composite, SystemSpec};
use crate::error::{Error, Result};
use crate::pressure::matrix::{PathMatrix, Side};
use crate::pressure::{Method, PressureEnclosure};
use crate::rounding::{down, up, LogSum};
use crate::symbolic::graph::is_irreducible;
use crate::symbolic::sft::SftGraph;
use crate::symbolic::{beta_alphabet_size, beta_kind, count_language, walk_language, BetaKind, Letter, ShiftSpec};

type Edges = Vec<Vec<(Letter, usize)>>;

/// Tuning knobs for [`PressureModel::build`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureOptions {
    /// Cap on words per enumerated depth and on paths per block matrix.
    pub max_words: u64,
    /// Window of the finite-type approximations of β-shifts; `None` picks
    /// the largest window whose state count fits `max_states`.
    pub window: Option<usize>,
    pub max_states: usize,
}

impl Default for PressureOptions {
    fn default() -> Self {
        PressureOptions {
            max_words: 1 << 22,
            window: None,
            max_states: 4096,
        }
    }
}

/// Pressure bounds of one (shift, system) pair at a fixed depth.
///
/// Upper bounds take the smaller of `(1/m) log Z_sup(m,t)` over enumerated
/// depths and `(1/ℓ) ln ρ` of sup-norm block matrices on a finite-type
/// cover. Lower bounds come from base-point block matrices on a finite-type
/// subshift, `(ln ρ − t ln K)/ℓ`.
#[derive(Debug, Clone)]
pub struct PressureModel {
    method: Method,
    depth: usize,
    single_map: bool,
    log_k: f64,
    /// `ln ‖φ_w'‖` rounded up, for each enumerated depth.
    sup_levels: Vec<Vec<f64>>,
    upper_blocks: Vec<(usize, PathMatrix)>,
    lower_blocks: Vec<(usize, PathMatrix)>,
}

impl PressureModel {
    pub fn build(shift: &ShiftSpec, sys: &SystemSpec, n: usize, options: &PressureOptions) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("pressure depth must be positive".into()));
        }
        sys.constants()?;
        let spec = shift.normalized();
        if spec.alphabet_size() > sys.letter_count() {
            return Err(Error::Input(format!(
                "shift uses {} letters but the system has {} maps",
                spec.alphabet_size(),
                sys.letter_count()
            )));
        }
        if let ShiftSpec::Markov { .. } = spec {
            if !is_irreducible(&spec)? {
                return Err(Error::Precondition(
                    "markov shift is reducible; pass one component of its SCC decomposition".into(),
                ));
            }
        }

        let depth = feasible_depth(&spec, n, options.max_words)?;
        let sup_levels = sup_levels(&spec, sys, depth)?;

        let (method, upper_graphs, lower_graphs) = match &spec {
            ShiftSpec::Full { alphabet_size } => {
                let g = SftGraph::full(*alphabet_size);
                (Method::FullSuperadditive, vec![g.edges().to_vec()], vec![g.edges().to_vec()])
            }
            ShiftSpec::Markov { adjacency } => {
                let g = SftGraph::from_adjacency(adjacency);
                (Method::MarkovSpectral, vec![g.edges().to_vec()], vec![g.edges().to_vec()])
            }
            ShiftSpec::Beta { beta } => {
                let m = options
                    .window
                    .unwrap_or_else(|| default_window(*beta, options.max_states, MAX_WINDOW));
                let inner = inner_sft_bounded(*beta, m, options.max_states)?;
                let outer = outer_sft(*beta, m, options.max_states)?;
                (
                    Method::BetaInnerSft,
                    vec![outer.edges().to_vec()],
                    vec![inner.graph().edges().to_vec(), singleton_graph()],
                )
            }
            ShiftSpec::Coded { .. } => (Method::CodedBlockGraph, vec![], vec![coded_graph(&spec, options)?]),
        };

        let affine = sys.k() == 1.0;
        let mut upper_blocks = Vec::new();
        for g in &upper_graphs {
            let len = if affine { 1 } else { block_length(g, n, options.max_words) };
            for l in 1..=len {
                upper_blocks.push((l, PathMatrix::build(g, sys, l, Side::Upper)));
            }
        }
        let mut lower_blocks = Vec::new();
        for g in &lower_graphs {
            let len = if affine { 1 } else { block_length(g, n, options.max_words) };
            for l in 1..=len {
                let m = PathMatrix::build(g, sys, l, Side::Lower);
                if m.has_cycle() {
                    lower_blocks.push((l, m));
                }
            }
        }
        Ok(PressureModel {
            method,
            depth,
            single_map: matches!(spec, ShiftSpec::Full { alphabet_size: 1 }),
            log_k: up(sys.k().ln()),
            sup_levels,
            upper_blocks,
            lower_blocks,
        })
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// True when the shift is `{0^∞}`, whose limit set is one point.
    pub fn is_single_point(&self) -> bool {
        self.single_map
    }

    /// Largest enumerated depth.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn upper(&self, t: f64) -> f64 {
        let mut best = f64::INFINITY;
        for (i, level) in self.sup_levels.iter().enumerate() {
            let m = (i + 1) as f64;
            let mut sum = LogSum::new();
            for &v in level {
                sum.push(up(t * v));
            }
            best = best.min(up(sum.bounds().1 / m));
        }
        for (l, mat) in &self.upper_blocks {
            best = best.min(up(mat.log_radius(t) / *l as f64));
        }
        best
    }

    pub fn lower(&self, t: f64) -> f64 {
        let penalty = up(t * self.log_k);
        let mut best = f64::NEG_INFINITY;
        for (l, mat) in &self.lower_blocks {
            let r = mat.log_radius(t);
            best = best.max(down(down(r - penalty) / *l as f64));
        }
        best
    }

    pub fn enclosure(&self, t: f64) -> Result<PressureEnclosure> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::Input(format!("pressure needs t >= 0, got {t}")));
        }
        let lower = self.lower(t);
        let upper = self.upper(t);
        if lower > upper {
            return Err(Error::Internal(format!(
                "pressure bounds crossed at t = {t}: {lower} > {upper}"
            )));
        }
        Ok(PressureEnclosure {
            t,
            depth: self.depth,
            lower,
            upper,
            method: self.method,
        })
    }
}

/// Largest depth `≤ n` whose language fits the word budget.
fn feasible_depth(spec: &ShiftSpec, n: usize, max_words: u64) -> Result<usize> {
    let mut depth = 0;
    for m in 1..=n {
        if count_language(spec, m)? > max_words as u128 {
            break;
        }
        depth = m;
    }
    if depth == 0 {
        return Err(Error::Resource {
            what: "words of length 1".into(),
            estimate: count_language(spec, 1)?,
            budget: max_words as u128,
        });
    }
    Ok(depth)
}

fn sup_levels(spec: &ShiftSpec, sys: &SystemSpec, depth: usize) -> Result<Vec<Vec<f64>>> {
    let (lo, hi) = sys.domain();
    let mut levels = vec![Vec::new(); depth];
    // composites of the current DFS prefix, one per depth
    let mut stack: Vec<Composite> = vec![sys.identity()];
    walk_language(spec, depth, &mut |w: &[Letter]| {
        stack.truncate(w.len());
        let c = stack[w.len() - 1].then(sys.letter(w[w.len() - 1]));
        levels[w.len() - 1].push(c.log_sup_derivative(lo, hi));
        stack.push(c);
        Ok(())
    })?;
    Ok(levels)
}

/// Largest `ℓ ≤ n` whose path count stays within budget, at least 1.
fn block_length(edges: &[Vec<(Letter, usize)>], n: usize, max_words: u64) -> usize {
    let mut paths: Vec<u128> = vec![1; edges.len()];
    let mut best = 1;
    for l in 1..=n {
        paths = edges
            .iter()
            .map(|e| e.iter().fold(0u128, |acc, &(_, v)| acc.saturating_add(paths[v])))
            .collect();
        let total: u128 = paths.iter().fold(0u128, |a, &b| a.saturating_add(b));
        if total > max_words as u128 {
            break;
        }
        best = l;
    }
    best
}

/// The fixed point `0^∞`, contained in every β-shift.
fn singleton_graph() -> Edges {
    vec![vec![(0, 0)]]
}

/// Letter-level graph of block concatenations `t_{n1} t_{n2} …` whose
/// index sequence runs through a finite-type subshift of the index β-shift.
/// Prefix-free blocks keep the multiplicity of each label word bounded.
fn coded_graph(spec: &ShiftSpec, options: &PressureOptions) -> Result<Edges> {
    let ShiftSpec::Coded { blocks, index_beta, .. } = spec else {
        unreachable!("coded graph of a non-coded shift")
    };
    for (i, a) in blocks.iter().enumerate() {
        for (j, b) in blocks.iter().enumerate() {
            if i != j && b.letters().starts_with(a.letters()) {
                return Err(Error::Precondition(format!(
                    "coded lower bound needs prefix-free blocks; {a} is a prefix of {b}"
                )));
            }
        }
    }
    let index = match beta_kind(*index_beta) {
        BetaKind::Singleton => SftGraph::full(1),
        BetaKind::Full(k) => SftGraph::full(k),
        BetaKind::Proper(b) => {
            let m = options
                .window
                .unwrap_or_else(|| default_window(b, options.max_states, MAX_WINDOW));
            inner_sft_bounded(b, m, options.max_states)?.graph().clone()
        }
    };
    debug_assert!(beta_alphabet_size(*index_beta) <= blocks.len());
    let boundary = index.state_count();
    let mut edges: Edges = vec![Vec::new(); boundary];
    for u in 0..boundary {
        for &(i, v) in &index.edges()[u] {
            let letters = blocks[i as usize].letters();
            let mut from = u;
            for (pos, &a) in letters.iter().enumerate() {
                let to = if pos + 1 == letters.len() {
                    v
                } else {
                    edges.push(Vec::new());
                    edges.len() - 1
                };
                edges[from].push((a, to));
                from = to;
            }
        }
    }
    Ok(edges)
}
