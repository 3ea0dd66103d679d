//! One-dimensional conformal map families.
//!
//! Two concrete families ship: affine similarities `x ↦ r x + b` and the
//! continued-fraction maps `x ↦ 1/(d + x)`. A third variant packages
//! compositions along a list of blocks as the letters of a new system.
//! Compositions of maps in a family stay in closed form (an affine pair or a
//! 2×2 Möbius matrix), so appending a letter is O(1).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rounding::{down_rel, up_rel};
use crate::symbolic::{language, Letter, ShiftSpec, Word};

/// Default number of hull refinement steps applied by
/// [`SystemSpec::continued_fraction`].
pub const DEFAULT_REFINE_ITERATIONS: usize = 200;

/// Maximum number of words inspected when auditing a K override.
const K_EVIDENCE_WORDS: u64 = 1 << 14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MapFamily {
    Affine { ratios: Vec<f64>, offsets: Vec<f64> },
    ContinuedFraction { digits: Vec<u32> },
    /// Letter `e` is the composition `φ_{blocks[e]}` of the base family.
    Induced { base: Box<MapFamily>, blocks: Vec<Word> },
}

impl MapFamily {
    pub fn letter_count(&self) -> usize {
        match self {
            MapFamily::Affine { ratios, .. } => ratios.len(),
            MapFamily::ContinuedFraction { digits } => digits.len(),
            MapFamily::Induced { blocks, .. } => blocks.len(),
        }
    }

    fn identity(&self) -> Composite {
        match self {
            MapFamily::Affine { .. } => Composite::Affine {
                ratio: 1.0,
                offset: 0.0,
                ops: 0,
            },
            MapFamily::ContinuedFraction { .. } => Composite::Mobius {
                m: [1.0, 0.0, 0.0, 1.0],
                det: 1.0,
                ops: 0,
            },
            MapFamily::Induced { base, .. } => base.identity(),
        }
    }

    fn letter_map(&self, e: Letter) -> Composite {
        match self {
            MapFamily::Affine { ratios, offsets } => Composite::Affine {
                ratio: ratios[e as usize],
                offset: offsets[e as usize],
                ops: 1,
            },
            MapFamily::ContinuedFraction { digits } => Composite::Mobius {
                m: [0.0, 1.0, 1.0, digits[e as usize] as f64],
                det: -1.0,
                ops: 1,
            },
            MapFamily::Induced { base, blocks } => blocks[e as usize]
                .letters()
                .iter()
                .fold(base.identity(), |acc, &l| acc.then(&base.letter_map(l))),
        }
    }
}

/// A composition of family maps in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Composite {
    Affine { ratio: f64, offset: f64, ops: u32 },
    /// `x ↦ (m0 x + m1) / (m2 x + m3)` with determinant tracked exactly.
    Mobius { m: [f64; 4], det: f64, ops: u32 },
}

impl Composite {
    /// `self ∘ inner`.
    pub fn then(&self, inner: &Composite) -> Composite {
        match (self, inner) {
            (
                Composite::Affine { ratio, offset, ops },
                Composite::Affine {
                    ratio: r2,
                    offset: b2,
                    ops: o2,
                },
            ) => Composite::Affine {
                ratio: ratio * r2,
                offset: ratio * b2 + offset,
                ops: ops + o2,
            },
            (
                Composite::Mobius { m, det, ops },
                Composite::Mobius {
                    m: n,
                    det: d2,
                    ops: o2,
                },
            ) => Composite::Mobius {
                m: [
                    m[0] * n[0] + m[1] * n[2],
                    m[0] * n[1] + m[1] * n[3],
                    m[2] * n[0] + m[3] * n[2],
                    m[2] * n[1] + m[3] * n[3],
                ],
                det: det * d2,
                ops: ops + o2,
            },
            _ => panic!("cannot compose maps from different families"),
        }
    }

    fn ops(&self) -> usize {
        match self {
            Composite::Affine { ops, .. } | Composite::Mobius { ops, .. } => *ops as usize,
        }
    }

    pub fn apply(&self, x: f64) -> f64 {
        match self {
            Composite::Affine { ratio, offset, .. } => ratio * x + offset,
            Composite::Mobius { m, .. } => (m[0] * x + m[1]) / (m[2] * x + m[3]),
        }
    }

    /// `|φ'(x)|`, rounded to nearest.
    pub fn derivative_at(&self, x: f64) -> f64 {
        match self {
            Composite::Affine { ratio, .. } => ratio.abs(),
            Composite::Mobius { m, det, .. } => {
                let q = m[2] * x + m[3];
                det.abs() / (q * q)
            }
        }
    }

    pub fn log_derivative_at(&self, x: f64) -> f64 {
        match self {
            Composite::Affine { ratio, .. } => ratio.abs().ln(),
            Composite::Mobius { m, det, .. } => det.abs().ln() - 2.0 * (m[2] * x + m[3]).ln(),
        }
    }

    /// Upper bound of `sup_{[lo,hi]} |φ'|`. The derivative of a Möbius map
    /// whose pole lies outside the interval is monotone, so the endpoints
    /// decide.
    pub fn sup_derivative(&self, lo: f64, hi: f64) -> f64 {
        let v = self.derivative_at(lo).max(self.derivative_at(hi));
        up_rel(v, 4 * self.ops() + 8)
    }

    /// Lower bound of `inf_{[lo,hi]} |φ'|`.
    pub fn inf_derivative(&self, lo: f64, hi: f64) -> f64 {
        let v = self.derivative_at(lo).min(self.derivative_at(hi));
        down_rel(v, 4 * self.ops() + 8)
    }

    /// Upper bound of `ln sup |φ'|` on `[lo, hi]`.
    pub fn log_sup_derivative(&self, lo: f64, hi: f64) -> f64 {
        let v = self.log_derivative_at(lo).max(self.log_derivative_at(hi));
        v + self.log_slack(v)
    }

    /// Lower bound of `ln |φ'(x)|`.
    pub fn log_derivative_lower(&self, x: f64) -> f64 {
        let v = self.log_derivative_at(x);
        v - self.log_slack(v)
    }

    fn log_slack(&self, v: f64) -> f64 {
        (4 * self.ops() + 8) as f64 * 2.0 * f64::EPSILON * (1.0 + v.abs())
    }

    /// Outward-rounded image of `[lo, hi]`.
    pub fn image(&self, lo: f64, hi: f64) -> (f64, f64) {
        let (a, b) = (self.apply(lo), self.apply(hi));
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let ops = 4 * self.ops() + 8;
        let scale = a.abs().max(b.abs()).max(1.0);
        let slack = ops as f64 * 2.0 * f64::EPSILON * scale;
        ((a - slack).next_down(), (b + slack).next_up())
    }
}

/// A conformal construction on a closed interval `Y`, together with its
/// distortion constant `K`, contraction bound `s` and derivative floor.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    family: MapFamily,
    domain: (f64, f64),
    letters: Vec<Composite>,
    // distortion constant fixed by an override or inherited from a base system
    k_fixed: Option<f64>,
    k: f64,
    s: f64,
    gamma_min: f64,
}

/// `(K, s, gamma_min)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConstants {
    pub k: f64,
    pub s: f64,
    pub gamma_min: f64,
}

/// Interval image `φ_ω(Y)` of a word, outward-rounded.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderInterval {
    pub word: Word,
    pub lo: f64,
    pub hi: f64,
}

impl CylinderInterval {
    pub fn diameter(&self) -> f64 {
        self.hi - self.lo
    }
}

impl SystemSpec {
    /// Affine similarities `x ↦ r_e x + b_e` on `[0, 1]`.
    pub fn affine(ratios: Vec<f64>, offsets: Vec<f64>) -> Result<Self> {
        if ratios.is_empty() || ratios.len() != offsets.len() {
            return Err(Error::Input(format!(
                "affine system needs matching nonempty ratio and offset lists ({} vs {})",
                ratios.len(),
                offsets.len()
            )));
        }
        for (e, (&r, &b)) in ratios.iter().zip(&offsets).enumerate() {
            if !(r > 0.0 && r < 1.0) {
                return Err(Error::Input(format!("ratio of letter {e} must lie in (0,1), got {r}")));
            }
            if !(b >= 0.0 && b + r <= 1.0) {
                return Err(Error::Input(format!(
                    "letter {e} does not map [0,1] into itself (offset {b}, ratio {r})"
                )));
            }
        }
        let mut images: Vec<(f64, f64)> = ratios.iter().zip(&offsets).map(|(&r, &b)| (b, b + r)).collect();
        images.sort_by(|x, y| x.0.total_cmp(&y.0));
        if let Some(p) = images.windows(2).find(|p| p[0].1 > p[1].0) {
            return Err(Error::Input(format!(
                "open set condition fails: images [{}, {}] and [{}, {}] overlap",
                p[0].0, p[0].1, p[1].0, p[1].1
            )));
        }
        Ok(Self::build(MapFamily::Affine { ratios, offsets }, (0.0, 1.0), None))
    }

    /// Continued-fraction maps `x ↦ 1/(d + x)` over a digit set, with the
    /// domain already refined to the attractor hull.
    pub fn continued_fraction(digits: Vec<u32>) -> Result<Self> {
        Self::continued_fraction_unrefined(digits)?.refine_domain(DEFAULT_REFINE_ITERATIONS)
    }

    /// Continued-fraction maps on `[0, 1]`. With digit 1 present the
    /// contraction bound is 1 until [`refine_domain`](Self::refine_domain)
    /// runs.
    pub fn continued_fraction_unrefined(mut digits: Vec<u32>) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::Input("digit set is empty".into()));
        }
        if digits.contains(&0) {
            return Err(Error::Input("continued-fraction digits must be positive".into()));
        }
        digits.sort_unstable();
        if digits.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::Input("continued-fraction digits must be distinct".into()));
        }
        Ok(Self::build(MapFamily::ContinuedFraction { digits }, (0.0, 1.0), None))
    }

    fn build(family: MapFamily, domain: (f64, f64), k: Option<f64>) -> Self {
        let letters: Vec<Composite> = (0..family.letter_count() as Letter)
            .map(|e| family.letter_map(e))
            .collect();
        let (lo, hi) = domain;
        let s = letters
            .iter()
            .map(|c| c.sup_derivative(lo, hi))
            .fold(0.0, f64::max);
        let gamma_min = letters
            .iter()
            .map(|c| c.inf_derivative(lo, hi))
            .fold(f64::INFINITY, f64::min);
        SystemSpec {
            k: k.unwrap_or_else(|| distortion_bound(&family, domain)),
            k_fixed: k,
            family,
            domain,
            letters,
            s,
            gamma_min,
        }
    }

    pub fn family(&self) -> &MapFamily {
        &self.family
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn letter_count(&self) -> usize {
        self.letters.len()
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn gamma_min(&self) -> f64 {
        self.gamma_min
    }

    /// The map of a single letter.
    pub fn letter(&self, e: Letter) -> &Composite {
        &self.letters[e as usize]
    }

    pub fn identity(&self) -> Composite {
        self.family.identity()
    }

    /// Fixed anchor point used by base-point partition functions.
    pub fn anchor(&self) -> f64 {
        0.5 * (self.domain.0 + self.domain.1)
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        w.check_alphabet(self.letter_count())
    }

    /// Closed form of `φ_w = φ_{w_1} ∘ … ∘ φ_{w_n}`.
    pub fn compose(&self, w: &Word) -> Result<Composite> {
        self.check_word(w)?;
        Ok(w
            .letters()
            .iter()
            .fold(self.identity(), |acc, &e| acc.then(&self.letters[e as usize])))
    }

    /// `K`, `s` and `gamma_min`, after checking they describe a uniformly
    /// contracting system.
    pub fn constants(&self) -> Result<SystemConstants> {
        if !(self.k >= 1.0) {
            return Err(Error::Internal(format!("distortion constant {} below 1", self.k)));
        }
        if !(self.s < 1.0) {
            return Err(Error::Internal(format!(
                "contraction bound {} is not below 1; refine the domain first",
                self.s
            )));
        }
        Ok(SystemConstants {
            k: self.k,
            s: self.s,
            gamma_min: self.gamma_min,
        })
    }

    /// Replaces `Y` by the outward-rounded hull of `∪_e φ_e(Y)`, repeatedly.
    pub fn refine_domain(&self, iterations: usize) -> Result<SystemSpec> {
        let mut domain = self.domain;
        for _ in 0..iterations {
            let (lo, hi) = self
                .letters
                .iter()
                .map(|c| c.image(domain.0, domain.1))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), (x, y)| {
                    (a.min(x), b.max(y))
                });
            // the hull map contracts towards the attractor hull; never grow
            let next = (lo.max(domain.0), hi.min(domain.1));
            if next == domain {
                break;
            }
            domain = next;
        }
        let refined = Self::build(self.family.clone(), domain, self.k_fixed);
        if !(refined.s < 1.0) {
            return Err(Error::Config(format!(
                "contraction bound {} still not below 1 after {iterations} hull refinements; \
                 choose a digit set without parabolic behaviour or allow more iterations",
                refined.s
            )));
        }
        Ok(refined)
    }

    /// Largest observed `sup|φ_w'| / inf|φ_w'|` over short words, a lower
    /// estimate for any valid distortion constant.
    pub fn distortion_evidence(&self, max_len: usize) -> Result<f64> {
        let spec = ShiftSpec::full(self.letter_count())?;
        let (lo, hi) = self.domain;
        let mut worst: f64 = 1.0;
        let mut seen = 0u64;
        for n in 1..=max_len {
            let words = match language(&spec, n, K_EVIDENCE_WORDS) {
                Ok(w) => w,
                Err(Error::Resource { .. }) => break,
                Err(e) => return Err(e),
            };
            for w in &words {
                let c = self.compose(w)?;
                let ratio = c.derivative_at(lo).max(c.derivative_at(hi))
                    / c.derivative_at(lo).min(c.derivative_at(hi));
                worst = worst.max(ratio);
                seen += 1;
            }
            if seen > K_EVIDENCE_WORDS {
                break;
            }
        }
        Ok(worst)
    }

    /// Uses a caller-supplied distortion constant. Values below the observed
    /// distortion of short words are rejected.
    pub fn with_k_override(&self, k: f64) -> Result<SystemSpec> {
        let evidence = self.distortion_evidence(8)?;
        if !(k >= 1.0) || k < evidence {
            return Err(Error::Config(format!(
                "K override {k} is below the observed distortion {evidence}"
            )));
        }
        Ok(Self::build(self.family.clone(), self.domain, Some(k)))
    }
}

/// Bounded-distortion constant for a family on `domain`.
///
/// Continued-fraction compositions have `|φ_w'(x)| = 1/(q + q̃ x)²` with
/// `q̃/q ≤ 1/d_min`, so `K = ((1 + u/d_min)/(1 + l/d_min))²`.
fn distortion_bound(family: &MapFamily, domain: (f64, f64)) -> f64 {
    match family {
        MapFamily::Affine { .. } => 1.0,
        MapFamily::ContinuedFraction { digits } => {
            let dmin = *digits.iter().min().expect("nonempty digit set") as f64;
            let (l, u) = domain;
            let ratio = (1.0 + u / dmin) / (1.0 + l / dmin);
            up_rel(ratio * ratio, 8)
        }
        MapFamily::Induced { base, .. } => distortion_bound(base, domain),
    }
}

/// Supremum over `Y` of `|φ_w'|`, rounded up.
pub fn word_derivative_norm(sys: &SystemSpec, w: &Word) -> Result<f64> {
    if w.is_empty() {
        return Err(Error::Input("derivative norm of the empty word is not defined".into()));
    }
    let c = sys.compose(w)?;
    Ok(c.sup_derivative(sys.domain.0, sys.domain.1))
}

/// Infimum over `Y` of `|φ_w'|`, rounded down.
pub fn word_derivative_inf(sys: &SystemSpec, w: &Word) -> Result<f64> {
    if w.is_empty() {
        return Err(Error::Input("derivative of the empty word is not defined".into()));
    }
    let c = sys.compose(w)?;
    Ok(c.inf_derivative(sys.domain.0, sys.domain.1))
}

/// `|φ_w'(x)|` by the chain rule along the orbit
/// `x, φ_{w_n}(x), φ_{w_{n-1} w_n}(x), …`.
pub fn word_derivative_at(sys: &SystemSpec, w: &Word, x: f64) -> Result<f64> {
    if w.is_empty() {
        return Err(Error::Input("derivative of the empty word is not defined".into()));
    }
    sys.check_word(w)?;
    let (lo, hi) = sys.domain;
    if !(lo <= x && x <= hi) {
        return Err(Error::Input(format!("point {x} outside the domain [{lo}, {hi}]")));
    }
    let mut y = x;
    let mut product = 1.0;
    for &e in w.letters().iter().rev() {
        let map = sys.letter(e);
        product *= map.derivative_at(y);
        y = map.apply(y);
    }
    Ok(product)
}

/// `φ_w(Y)`, outward-rounded; the empty word gives `Y`.
pub fn cylinder_interval(sys: &SystemSpec, w: &Word) -> Result<CylinderInterval> {
    let (lo, hi) = if w.is_empty() {
        sys.domain
    } else {
        sys.compose(w)?.image(sys.domain.0, sys.domain.1)
    };
    Ok(CylinderInterval {
        word: w.clone(),
        lo,
        hi,
    })
}

pub fn refine_domain(sys: &SystemSpec, iterations: usize) -> Result<SystemSpec> {
    sys.refine_domain(iterations)
}

pub fn system_constants(sys: &SystemSpec) -> Result<SystemConstants> {
    sys.constants()
}

/// Packages the compositions `φ_b`, `b ∈ blocks`, as the letters of a new
/// system. Every block and every pairwise concatenation must be admissible in
/// `governing`.
pub fn induced_block_system(sys: &SystemSpec, blocks: &[Word], governing: &ShiftSpec) -> Result<SystemSpec> {
    if blocks.is_empty() {
        return Err(Error::Input("induced system needs at least one block".into()));
    }
    for b in blocks {
        if b.is_empty() {
            return Err(Error::Input("induced blocks must be nonempty".into()));
        }
        sys.check_word(b)?;
        if !governing.is_word_admissible(b)? {
            return Err(Error::Precondition(format!("block {b} is not admissible")));
        }
    }
    for a in blocks {
        for b in blocks {
            if !governing.is_word_admissible(&a.concat(b))? {
                return Err(Error::Precondition(format!("blocks {a} and {b} do not compose")));
            }
        }
    }
    let family = MapFamily::Induced {
        base: Box::new(sys.family.clone()),
        blocks: blocks.to_vec(),
    };
    Ok(SystemSpec::build(family, sys.domain, Some(sys.k)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn cantor() -> SystemSpec {
        SystemSpec::affine(vec![1.0 / 3.0; 2], vec![0.0, 2.0 / 3.0]).unwrap()
    }

    fn dyadic() -> SystemSpec {
        SystemSpec::affine(vec![0.5; 2], vec![0.0, 0.5]).unwrap()
    }

    #[test]
    fn affine_norm_is_ratio_power() {
        let sys = cantor();
        for s in ["0", "01", "1101", "00000000"] {
            let word = w(s);
            let norm = word_derivative_norm(&sys, &word).unwrap();
            let exact = 3f64.powi(-(word.len() as i32));
            assert!((norm - exact).abs() <= 1e-13 * exact && norm >= exact);
        }
    }

    #[test]
    fn continued_fraction_norms_on_unit_interval() {
        let sys = SystemSpec::continued_fraction_unrefined(vec![1, 2]).unwrap();
        // letter 0 is digit 1
        let one = word_derivative_norm(&sys, &w("0")).unwrap();
        assert!((one - 1.0).abs() < 1e-14);
        let two = word_derivative_norm(&sys, &w("00")).unwrap();
        assert!((two - 0.25).abs() < 1e-14);
        assert!(sys.constants().is_err());
    }

    #[test]
    fn empty_word_norm_is_an_error() {
        assert!(matches!(
            word_derivative_norm(&cantor(), &Word::empty()),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn dyadic_cylinder() {
        let c = cylinder_interval(&dyadic(), &w("01")).unwrap();
        assert!(c.lo <= 0.25 && c.lo > 0.25 - 1e-13);
        assert!(c.hi >= 0.5 && c.hi < 0.5 + 1e-13);
        let root = cylinder_interval(&dyadic(), &Word::empty()).unwrap();
        assert_eq!((root.lo, root.hi), (0.0, 1.0));
    }

    #[test]
    fn continued_fraction_first_cylinder() {
        let sys = SystemSpec::continued_fraction(vec![1, 2]).unwrap();
        let (l, u) = sys.domain();
        let c = cylinder_interval(&sys, &w("0")).unwrap();
        assert!(c.lo <= 1.0 / (1.0 + u) && c.hi >= 1.0 / (1.0 + l));
        assert!(c.hi - c.lo < 1.0 / (1.0 + l) - 1.0 / (1.0 + u) + 1e-12);
    }

    #[test]
    fn refine_keeps_tiling_affine_domain() {
        let sys = dyadic().refine_domain(10).unwrap();
        assert_eq!(sys.domain(), (0.0, 1.0));
        let c = cantor().refine_domain(10).unwrap();
        assert_eq!(c.domain(), (0.0, 1.0));
    }

    #[test]
    fn refine_continued_fraction_one_two() {
        let raw = SystemSpec::continued_fraction_unrefined(vec![1, 2]).unwrap();
        let sys = raw.refine_domain(20).unwrap();
        let (l, u) = sys.domain();
        assert!(0.2 < l && u < 0.9, "{l} {u}");
        assert!(sys.s() < 1.0);
        let exact_s = 1.0 / ((1.0 + l) * (1.0 + l));
        assert!(sys.s() >= exact_s && sys.s() < exact_s + 1e-12);
        // the attractor hull is [√3 - 1 - ..., ...]: l = 1/(2+u), u = 1/(1+l)
        let full = raw.refine_domain(200).unwrap();
        let u_star = 3f64.sqrt() - 1.0;
        let l_star = 1.0 / (2.0 + u_star);
        assert!((full.domain().0 - l_star).abs() < 1e-9);
        assert!((full.domain().1 - u_star).abs() < 1e-9);
        assert!(full.domain().0 <= l_star && full.domain().1 >= u_star);
    }

    #[test]
    fn refinement_budget_exhaustion_is_config_error() {
        let raw = SystemSpec::continued_fraction_unrefined(vec![1, 2]).unwrap();
        assert!(matches!(raw.refine_domain(0), Err(Error::Config(_))));
    }

    #[test]
    fn digits_two_three_already_contracting() {
        let sys = SystemSpec::continued_fraction_unrefined(vec![2, 3]).unwrap();
        assert!(sys.s() <= 0.25 + 1e-13);
        assert!(sys.constants().is_ok());
    }

    #[test]
    fn constants() {
        assert_eq!(cantor().constants().unwrap().k, 1.0);
        let unit = SystemSpec::continued_fraction_unrefined(vec![2, 3]).unwrap();
        assert!(unit.k() <= 4.0 + 1e-12);
        let sys = SystemSpec::continued_fraction(vec![1, 2]).unwrap();
        let c = sys.constants().unwrap();
        assert!(c.k >= 1.0 && c.k <= 4.0);
        assert!(c.gamma_min > 0.0 && c.gamma_min <= c.s);
    }

    #[test]
    fn bdp_audit_exhaustive() {
        let sys = SystemSpec::continued_fraction(vec![1, 2]).unwrap();
        let (l, u) = sys.domain();
        let full = ShiftSpec::full(2).unwrap();
        for n in 1..=8 {
            for word in language(&full, n, 1 << 10).unwrap() {
                let sup = word_derivative_norm(&sys, &word).unwrap();
                let inf = word_derivative_inf(&sys, &word).unwrap();
                // equality holds for single letters; allow the outward rounding
                assert!(sup <= sys.k() * inf * (1.0 + 1e-12), "{word}: {sup} > {} * {inf}", sys.k());
                // independent orbit evaluation at the endpoints
                let a = word_derivative_at(&sys, &word, l).unwrap();
                let b = word_derivative_at(&sys, &word, u).unwrap();
                assert!(a.max(b) <= sys.k() * a.min(b));
            }
        }
    }

    #[test]
    fn k_override_below_evidence_rejected() {
        let sys = SystemSpec::continued_fraction(vec![1, 2]).unwrap();
        assert!(matches!(sys.with_k_override(1.0), Err(Error::Config(_))));
        let ok = sys.with_k_override(3.5).unwrap();
        assert_eq!(ok.k(), 3.5);
    }

    #[test]
    fn induced_identity_and_dyadic_pairs() {
        let sys = dyadic();
        let full = ShiftSpec::full(2).unwrap();
        let same = induced_block_system(&sys, &[w("0"), w("1")], &full).unwrap();
        for s in ["0", "1", "0110"] {
            assert_eq!(
                word_derivative_norm(&same, &w(s)).unwrap(),
                word_derivative_norm(&sys, &w(s)).unwrap()
            );
        }
        let pairs = induced_block_system(&sys, &[w("00"), w("01")], &full).unwrap();
        for s in ["0", "1"] {
            let r = word_derivative_norm(&pairs, &w(s)).unwrap();
            assert!((r - 0.25).abs() < 1e-13);
        }
        assert_eq!(pairs.k(), 1.0);
        assert!((pairs.s() - 0.25).abs() < 1e-13);
    }

    #[test]
    fn induced_rejects_non_composable_blocks() {
        let golden = ShiftSpec::markov(2, &[(0, 0), (0, 1), (1, 0)]).unwrap();
        let sys = dyadic();
        assert!(induced_block_system(&sys, &[w("01"), w("10")], &golden).is_err());
        assert!(induced_block_system(&sys, &[w("11")], &golden).is_err());
        assert!(induced_block_system(&sys, &[w("00"), w("01")], &golden).is_ok());
    }
}
