//! Dimension evaluation with adaptive depth, β sweeps, inversion of the
//! dimension spectrum and the Markov block constructions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conformal::{induced_block_system, word_derivative_norm, SystemSpec};
use crate::error::{Error, Result};
use crate::pressure::{bowen_root_of, DimensionEnclosure, PressureModel, PressureOptions};
use crate::rounding::{down, up};
use crate::symbolic::graph::{connecting_words, is_irreducible, scc_decomposition};
use crate::symbolic::{language, Adjacency, Letter, ShiftSpec, Word};

/// Smallest depth tried by [`dimension`].
const FIRST_DEPTH: usize = 2;
/// β brackets narrower than this stop the inversion.
const MIN_BETA_BRACKET: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionOptions {
    pub target_width: f64,
    pub max_depth: usize,
    pub pressure: PressureOptions,
}

impl Default for DimensionOptions {
    fn default() -> Self {
        DimensionOptions {
            target_width: 0.05,
            max_depth: 20,
            pressure: PressureOptions::default(),
        }
    }
}

impl DimensionOptions {
    pub fn new(target_width: f64, max_depth: usize) -> Self {
        DimensionOptions {
            target_width,
            max_depth,
            ..Self::default()
        }
    }
}

/// Adaptive-depth dimension enclosure with the default pressure options.
pub fn dimension(shift: &ShiftSpec, sys: &SystemSpec, target_width: f64, depth_budget: usize) -> Result<DimensionEnclosure> {
    dimension_with(shift, sys, &DimensionOptions::new(target_width, depth_budget))
}

/// Raises the depth until the enclosure is narrower than the target or the
/// budget runs out. Enclosures from all depths are intersected.
pub fn dimension_with(shift: &ShiftSpec, sys: &SystemSpec, opts: &DimensionOptions) -> Result<DimensionEnclosure> {
    if !(opts.target_width > 0.0) {
        return Err(Error::Input(format!(
            "target width must be positive, got {}",
            opts.target_width
        )));
    }
    if opts.max_depth == 0 {
        return Err(Error::Input("depth budget must be positive".into()));
    }
    if let ShiftSpec::Coded { base, blocks, index_beta } = shift {
        let induced = induced_block_system(sys, blocks, base)?;
        return dimension_with(&ShiftSpec::beta(*index_beta)?, &induced, opts);
    }
    let tol = opts.target_width / 2.0;
    let mut best: Option<DimensionEnclosure> = None;
    let mut depth = FIRST_DEPTH.min(opts.max_depth);
    loop {
        let model = PressureModel::build(shift, sys, depth, &opts.pressure)?;
        let e = bowen_root_of(&model, tol)?;
        let merged = match best {
            Some(b) => b.intersect(&e),
            None => e,
        };
        log::debug!("depth {depth}: [{}, {}]", merged.h_lo, merged.h_hi);
        best = Some(merged);
        // the model may have hit the word budget below the requested depth
        let exhausted = model.depth() < depth || depth >= opts.max_depth;
        if merged.width <= opts.target_width || exhausted {
            let mut out = merged;
            out.converged = merged.width <= opts.target_width;
            return Ok(out);
        }
        depth = (depth + 2).min(opts.max_depth);
    }
}

/// Dimension of `J(X_β)` on the grid `beta_lo, beta_lo + step, …, beta_hi`,
/// in grid order.
pub fn beta_curve(
    sys: &SystemSpec,
    beta_lo: f64,
    beta_hi: f64,
    step: f64,
    opts: &DimensionOptions,
) -> Result<Vec<(f64, DimensionEnclosure)>> {
    let grid = beta_grid(sys, beta_lo, beta_hi, step)?;
    grid.par_iter()
        .map(|&beta| Ok((beta, beta_dimension(sys, beta, opts)?)))
        .collect()
}

pub fn beta_grid(sys: &SystemSpec, beta_lo: f64, beta_hi: f64, step: f64) -> Result<Vec<f64>> {
    let alphabet = sys.letter_count() as f64;
    if !(0.0 <= beta_lo && beta_lo <= beta_hi && beta_hi <= alphabet) {
        return Err(Error::Input(format!(
            "beta range [{beta_lo}, {beta_hi}] must lie inside [0, {alphabet}]"
        )));
    }
    if !(step > 0.0) {
        return Err(Error::Input(format!("beta step must be positive, got {step}")));
    }
    let count = ((beta_hi - beta_lo) / step + 1e-9).floor() as usize;
    Ok((0..=count)
        .map(|i| {
            let b = beta_lo + i as f64 * step;
            // snap values meant to be integers or the endpoint
            let r = (b * 1e9).round() / 1e9;
            r.min(beta_hi)
        })
        .collect())
}

/// Dimension of `J(X_β)`; `β ≤ 1` gives the single point `0^∞`.
pub fn beta_dimension(sys: &SystemSpec, beta: f64, opts: &DimensionOptions) -> Result<DimensionEnclosure> {
    if beta <= 1.0 {
        return Ok(DimensionEnclosure::point(0.0, 0));
    }
    dimension_with(&ShiftSpec::beta(beta)?, sys, opts)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Inversion {
    pub beta: f64,
    pub enclosure: DimensionEnclosure,
    /// Final β bracket of the bisection.
    pub bracket: (f64, f64),
    /// False when the enclosure never fit inside `[d − ε, d + ε]`.
    pub converged: bool,
}

/// β with `dim J(X_β)` enclosed in `[d − ε, d + ε]`, by bisection over
/// `[0, alphabet size]`.
pub fn invert_dimension(sys: &SystemSpec, d_target: f64, epsilon: f64, opts: &DimensionOptions) -> Result<Inversion> {
    invert_in(sys, sys.letter_count(), d_target, epsilon, opts)
}

fn invert_in(sys: &SystemSpec, alphabet: usize, d: f64, eps: f64, opts: &DimensionOptions) -> Result<Inversion> {
    if !(eps > 0.0) {
        return Err(Error::Input(format!("epsilon must be positive, got {eps}")));
    }
    if !(d >= 0.0) {
        return Err(Error::Input(format!("target dimension must be nonnegative, got {d}")));
    }
    let inner = DimensionOptions {
        target_width: opts.target_width.min(eps),
        ..*opts
    };
    let fits = |e: &DimensionEnclosure| e.h_lo >= d - eps && e.h_hi <= d + eps;
    let top = alphabet as f64;
    let full = beta_dimension(sys, top, &inner)?;
    if d > full.h_hi + eps {
        return Err(Error::Range(format!(
            "target {d} exceeds the full-shift dimension enclosure [{}, {}]",
            full.h_lo, full.h_hi
        )));
    }
    if d <= eps {
        return Ok(Inversion {
            beta: 0.0,
            enclosure: DimensionEnclosure::point(0.0, 0),
            bracket: (0.0, 1.0),
            converged: true,
        });
    }
    if fits(&full) {
        return Ok(Inversion {
            beta: top,
            enclosure: full,
            bracket: (top, top),
            converged: true,
        });
    }
    let (mut lo, mut hi) = (1.0f64, top);
    let mut last = (top, full);
    while hi - lo > MIN_BETA_BRACKET {
        let mid = 0.5 * (lo + hi);
        let e = beta_dimension(sys, mid, &inner)?;
        if fits(&e) {
            return Ok(Inversion {
                beta: mid,
                enclosure: e,
                bracket: (lo, hi),
                converged: true,
            });
        }
        let centre = 0.5 * (e.h_lo + e.h_hi);
        if e.h_lo > d || (e.h_hi >= d && centre >= d) {
            hi = mid;
        } else {
            lo = mid;
        }
        last = (mid, e);
        if e.width > 2.0 * eps {
            log::warn!("dimension enclosure of width {} stalls above 2 epsilon", e.width);
            break;
        }
    }
    Ok(Inversion {
        beta: last.0,
        enclosure: last.1,
        bracket: (lo, hi),
        converged: false,
    })
}

/// The induced block system `Z_{m,β}` of a Markov shift.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockConstruction {
    pub anchor: Letter,
    pub m: usize,
    /// `v ∈ L_m(Z)` in lexicographic order; block `i` belongs to `index_words[i]`.
    pub index_words: Vec<Word>,
    pub blocks: Vec<Word>,
    pub system: SystemSpec,
    /// `M = |L_m(Z)|`, the alphabet of the index β-shift.
    pub alphabet_size: usize,
    pub beta: f64,
    /// Longest connector `N`.
    pub max_connector: usize,
    /// Smallest connector derivative norm `L`, with the empty connector at 1.
    pub l_norm: f64,
    /// `W = ‖φ_a'‖`.
    pub w_norm: f64,
    /// `C = −ln(K^{−3} L² W)`, rounded up.
    pub c_const: f64,
}

impl BlockConstruction {
    /// The coded shift `Z_{m,β}` over the original alphabet.
    pub fn coded_shift(&self, base: &ShiftSpec) -> Result<ShiftSpec> {
        ShiftSpec::coded(base.clone(), self.blocks.clone(), self.beta)
    }

    pub fn dimension(&self, opts: &DimensionOptions) -> Result<DimensionEnclosure> {
        beta_dimension(&self.system, self.beta, opts)
    }
}

pub fn markov_block_construction(
    z: &ShiftSpec,
    sys: &SystemSpec,
    anchor: Letter,
    m: usize,
    beta: f64,
) -> Result<BlockConstruction> {
    let mut bc = build_blocks(z, sys, anchor, m)?;
    if !(beta > 1.0 && beta <= bc.alphabet_size as f64) {
        return Err(Error::Input(format!(
            "beta must lie in (1, {}], got {beta}",
            bc.alphabet_size
        )));
    }
    bc.beta = beta;
    Ok(bc)
}

/// Blocks and constants of the construction, with β at the top of its range.
fn build_blocks(z: &ShiftSpec, sys: &SystemSpec, anchor: Letter, m: usize) -> Result<BlockConstruction> {
    let ShiftSpec::Markov { adjacency } = z else {
        return Err(Error::Precondition("block construction needs a markov shift".into()));
    };
    if !is_irreducible(z)? {
        return Err(Error::Precondition(
            "markov shift is reducible; pick a component of its SCC decomposition".into(),
        ));
    }
    if m == 0 {
        return Err(Error::Input("block length m must be positive".into()));
    }
    let component = active_letters(adjacency);
    if !component.contains(&anchor) {
        return Err(Error::Input(format!("anchor {anchor} is not in the irreducible part")));
    }
    let connectors = connecting_words(z, &component)?;
    let index_words = language(z, m, 1 << 20)?;
    let alphabet_size = index_words.len();
    let mut blocks = Vec::with_capacity(alphabet_size);
    for v in &index_words {
        let first = v.first().expect("nonempty index word");
        let last = v.last().expect("nonempty index word");
        let u = connectors.get(anchor, first).expect("connector inside component");
        let u2 = connectors.get(last, anchor).expect("connector inside component");
        blocks.push(Word::new(vec![anchor]).concat(u).concat(v).concat(u2));
    }
    for (i, a) in blocks.iter().enumerate() {
        for (j, b) in blocks.iter().enumerate() {
            if i != j && b.letters().starts_with(a.letters()) {
                return Err(Error::Precondition(format!(
                    "blocks {a} and {b} are not prefix-free; choose another anchor"
                )));
            }
        }
    }
    let system = induced_block_system(sys, &blocks, z)?;

    let mut l_norm: f64 = 1.0;
    for w in connectors.words.values().filter(|w| !w.is_empty()) {
        l_norm = l_norm.min(word_derivative_norm(sys, w)?);
    }
    let w_norm = word_derivative_norm(sys, &Word::new(vec![anchor]))?;
    // −ln(K^{-3} L² W) = 3 ln K − 2 ln L − ln W
    let c_const = up(3.0 * up(sys.k().ln()) - 2.0 * down(l_norm.ln()) - down(w_norm.ln()));
    Ok(BlockConstruction {
        anchor,
        m,
        index_words,
        blocks,
        system,
        alphabet_size,
        beta: alphabet_size as f64,
        max_connector: connectors.max_len,
        l_norm,
        w_norm,
        c_const,
    })
}

/// Letters that carry at least one transition.
fn active_letters(adjacency: &Adjacency) -> Vec<Letter> {
    let succ = adjacency.successors();
    let mut used = vec![false; succ.len()];
    for (i, s) in succ.iter().enumerate() {
        for &j in s {
            used[i] = true;
            used[j] = true;
        }
    }
    (0..succ.len()).filter(|&i| used[i]).map(|i| i as Letter).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkovInversion {
    /// Block length of the construction; `None` for the trivial and terminal
    /// cases.
    pub m: Option<usize>,
    pub beta: Option<f64>,
    pub enclosure: DimensionEnclosure,
    /// Letters of the irreducible component that was used.
    pub component: Vec<Letter>,
    /// True when the target is the dimension of `Z` itself and `X = Z`.
    pub terminal: bool,
    pub converged: bool,
}

/// Largest block length tried before giving up.
pub const MAX_BLOCK_LENGTH: usize = 12;

/// A subshift of `Z` with dimension within `ε` of `d`: increases `m` until
/// `Z_m` has room, then bisects β inside `Z_{m,·}`. Reducible shifts are
/// replaced by their component of largest dimension.
pub fn invert_dimension_markov(
    z: &ShiftSpec,
    sys: &SystemSpec,
    d_target: f64,
    epsilon: f64,
    opts: &DimensionOptions,
) -> Result<MarkovInversion> {
    let ShiftSpec::Markov { adjacency } = z else {
        return Err(Error::Precondition("markov inversion needs a markov shift".into()));
    };
    if !(epsilon > 0.0) {
        return Err(Error::Input(format!("epsilon must be positive, got {epsilon}")));
    }
    let inner = DimensionOptions {
        target_width: opts.target_width.min(epsilon),
        ..*opts
    };
    let (component, z_best, h_z) = best_component(adjacency, sys, &inner)?;
    if d_target > h_z.h_hi + epsilon {
        return Err(Error::Range(format!(
            "target {d_target} exceeds the dimension enclosure [{}, {}] of the shift",
            h_z.h_lo, h_z.h_hi
        )));
    }
    if d_target <= epsilon {
        return Ok(MarkovInversion {
            m: None,
            beta: Some(0.0),
            enclosure: DimensionEnclosure::point(0.0, 0),
            component,
            terminal: false,
            converged: true,
        });
    }
    if h_z.h_lo >= d_target - epsilon && h_z.h_hi <= d_target + epsilon {
        return Ok(MarkovInversion {
            m: None,
            beta: None,
            enclosure: h_z,
            component,
            terminal: true,
            converged: true,
        });
    }
    let anchor = component[0];
    for m in 1..=MAX_BLOCK_LENGTH {
        let bc = build_blocks(&z_best, sys, anchor, m)?;
        let top = bc.alphabet_size;
        if top < 2 {
            continue;
        }
        let h_m = beta_dimension(&bc.system, top as f64, &inner)?;
        log::debug!("m = {m}: Z_m dimension [{}, {}]", h_m.h_lo, h_m.h_hi);
        if h_m.h_lo < d_target + epsilon {
            continue;
        }
        let inv = invert_in(&bc.system, top, d_target, epsilon, &inner)?;
        return Ok(MarkovInversion {
            m: Some(m),
            beta: Some(inv.beta),
            enclosure: inv.enclosure,
            component,
            terminal: false,
            converged: inv.converged,
        });
    }
    Err(Error::Resource {
        what: "block length for the markov inversion".into(),
        estimate: MAX_BLOCK_LENGTH as u128 + 1,
        budget: MAX_BLOCK_LENGTH as u128,
    })
}

/// Component of largest dimension (by upper end, then lower end), the
/// restricted shift and its enclosure.
fn best_component(
    adjacency: &Adjacency,
    sys: &SystemSpec,
    opts: &DimensionOptions,
) -> Result<(Vec<Letter>, ShiftSpec, DimensionEnclosure)> {
    let z = ShiftSpec::Markov { adjacency: adjacency.clone() };
    let comps = scc_decomposition(&z)?.components;
    if comps.is_empty() {
        return Err(Error::Precondition("markov shift has no cycles".into()));
    }
    let mut best: Option<(Vec<Letter>, ShiftSpec, DimensionEnclosure)> = None;
    for comp in comps {
        let restricted = ShiftSpec::Markov { adjacency: adjacency.restrict(&comp) };
        let e = dimension_with(&restricted, sys, opts)?;
        let better = match &best {
            None => true,
            Some((_, _, b)) => (e.h_hi, e.h_lo) > (b.h_hi, b.h_lo),
        };
        if better {
            best = Some((comp, restricted, e));
        }
    }
    Ok(best.expect("at least one component"))
}

/// One rung of an exhaustion ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct Rung {
    pub size: usize,
    pub result: std::result::Result<DimensionEnclosure, Error>,
}

/// Dimensions of the full shifts over growing finite subsystems. Rungs that
/// fail to build keep their error; the others are unaffected.
pub fn exhaustion_dimension<F>(sizes: &[usize], factory: F, opts: &DimensionOptions) -> Result<Vec<Rung>>
where
    F: Fn(usize) -> Result<SystemSpec> + Sync,
{
    if sizes.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::Input("truncation sizes must be strictly increasing".into()));
    }
    Ok(sizes
        .par_iter()
        .map(|&size| {
            let result = factory(size).and_then(|sys| {
                let shift = ShiftSpec::full(sys.letter_count())?;
                dimension_with(&shift, &sys, opts)
            });
            Rung { size, result }
        })
        .collect())
}

/// Continued-fraction truncation `{1, …, m}`.
pub fn continued_fraction_truncation(m: usize) -> Result<SystemSpec> {
    if m == 0 {
        return Err(Error::Input("truncation needs at least one digit".into()));
    }
    SystemSpec::continued_fraction((1..=m as u32).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dyadic() -> SystemSpec {
        SystemSpec::affine(vec![0.5, 0.5], vec![0.0, 0.5]).unwrap()
    }

    fn golden() -> ShiftSpec {
        ShiftSpec::markov(2, &[(0, 0), (0, 1), (1, 0)]).unwrap()
    }

    #[test]
    fn cantor_dimension() {
        let sys = SystemSpec::affine(vec![1.0 / 3.0; 2], vec![0.0, 2.0 / 3.0]).unwrap();
        let e = dimension(&ShiftSpec::full(2).unwrap(), &sys, 1e-6, 20).unwrap();
        assert!(e.contains(2f64.ln() / 3f64.ln()));
        assert!(e.converged);
    }

    #[test]
    fn full_beta_is_whole_interval() {
        let e = dimension(&ShiftSpec::beta(2.0).unwrap(), &dyadic(), 0.01, 10).unwrap();
        assert!(e.contains(1.0), "{e:?}");
    }

    #[test]
    fn golden_blocks_at_length_one() {
        let bc = markov_block_construction(&golden(), &dyadic(), 0, 1, 2.0).unwrap();
        let blocks: Vec<String> = bc.blocks.iter().map(|w| w.to_string()).collect();
        assert_eq!(blocks, ["00", "01"]);
        assert_eq!(bc.alphabet_size, 2);
        assert!((bc.c_const - 8f64.ln()).abs() < 1e-9, "{}", bc.c_const);
        assert!(markov_block_construction(&golden(), &dyadic(), 0, 1, 2.5).is_err());
    }

    #[test]
    fn curve_is_monotone_and_ordered() {
        let opts = DimensionOptions::new(0.05, 8);
        let curve = beta_curve(&dyadic(), 0.5, 2.0, 0.25, &opts).unwrap();
        let betas: Vec<f64> = curve.iter().map(|(b, _)| *b).collect();
        assert_eq!(betas, [0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0]);
        assert_eq!(curve[0].1.h_hi, 0.0);
        for p in curve.windows(2) {
            // the shifts are nested, so their enclosures cannot be ordered the wrong way
            assert!(p[0].1.h_lo <= p[1].1.h_hi + 1e-12);
        }
    }

    #[test]
    fn grid_rejects_bad_ranges() {
        assert!(beta_grid(&dyadic(), 1.5, 2.5, 0.1).is_err());
        assert!(beta_grid(&dyadic(), 1.5, 1.0, 0.1).is_err());
        assert!(beta_grid(&dyadic(), 1.0, 2.0, 0.0).is_err());
    }

    #[test]
    fn inversion_edges() {
        let opts = DimensionOptions::new(0.01, 12);
        let zero = invert_dimension(&dyadic(), 0.0, 0.01, &opts).unwrap();
        assert_eq!((zero.enclosure.h_lo, zero.enclosure.h_hi), (0.0, 0.0));
        assert_eq!(invert_dimension(&dyadic(), 1.0, 0.01, &opts).unwrap().beta, 2.0);
        assert!(matches!(
            invert_dimension(&dyadic(), 1.5, 0.01, &opts),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn markov_inversion_hits_target() {
        let opts = DimensionOptions::new(0.02, 12);
        let inv = invert_dimension_markov(&golden(), &dyadic(), 0.6, 0.02, &opts).unwrap();
        assert!(!inv.terminal);
        assert!(inv.enclosure.h_lo >= 0.58 - 1e-9 && inv.enclosure.h_hi <= 0.62 + 1e-9, "{inv:?}");
        let top = invert_dimension_markov(&golden(), &dyadic(), 0.7, 0.05, &opts).unwrap();
        assert!(top.terminal);
    }

    #[test]
    fn singleton_truncation_has_dimension_zero() {
        let opts = DimensionOptions::new(0.01, 8);
        let rungs = exhaustion_dimension(&[1, 2], continued_fraction_truncation, &opts).unwrap();
        let first = rungs[0].result.as_ref().unwrap();
        assert_eq!((first.h_lo, first.h_hi), (0.0, 0.0));
        assert!(rungs[1].result.as_ref().unwrap().h_lo > 0.5);
        assert!(exhaustion_dimension(&[3, 2], continued_fraction_truncation, &opts).is_err());
    }
}
