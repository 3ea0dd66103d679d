//! Partition functions, two-sided pressure enclosures and the Bowen root.
//!
//! For `t ≥ 0` the pressure `P(t) = lim (1/n) log Σ_{w ∈ L_n} ‖φ_w'‖^t` is
//! strictly decreasing and its zero is the Hausdorff dimension of the limit
//! set. Every number produced here is an outward-rounded bound on `P`.

mod matrix;
mod model;

use serde::{Deserialize, Serialize};

use crate::conformal::{Composite, SystemSpec};
use crate::error::{Error, Result};
use crate::rounding::LogSum;
use crate::symbolic::{walk_language, Letter, ShiftSpec};

pub use model::{PressureModel, PressureOptions};

/// Bisection steps are capped well above what `f64` can resolve on `[0, 1]`.
const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    FullSuperadditive,
    MarkovSpectral,
    BetaInnerSft,
    CodedBlockGraph,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::FullSuperadditive => "full-superadditive",
            Method::MarkovSpectral => "markov-spectral",
            Method::BetaInnerSft => "beta-inner-sft",
            Method::CodedBlockGraph => "coded-block-graph",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PressureEnclosure {
    pub t: f64,
    pub depth: usize,
    pub lower: f64,
    pub upper: f64,
    pub method: Method,
}

impl PressureEnclosure {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, p: f64) -> bool {
        self.lower <= p && p <= self.upper
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionEnclosure {
    pub h_lo: f64,
    pub h_hi: f64,
    pub depth: usize,
    pub width: f64,
    /// False when an adaptive caller ran out of budget before reaching its
    /// target width.
    pub converged: bool,
}

impl DimensionEnclosure {
    pub fn new(h_lo: f64, h_hi: f64, depth: usize) -> Self {
        DimensionEnclosure {
            h_lo,
            h_hi,
            depth,
            width: h_hi - h_lo,
            converged: true,
        }
    }

    pub fn point(h: f64, depth: usize) -> Self {
        Self::new(h, h, depth)
    }

    pub fn contains(&self, h: f64) -> bool {
        self.h_lo <= h && h <= self.h_hi
    }

    /// Intersection with another enclosure of the same quantity.
    pub fn intersect(&self, other: &DimensionEnclosure) -> DimensionEnclosure {
        let lo = self.h_lo.max(other.h_lo);
        let hi = self.h_hi.min(other.h_hi);
        let mut e = DimensionEnclosure::new(lo, hi.max(lo), self.depth.max(other.depth));
        e.converged = self.converged && other.converged;
        e
    }
}

/// Which derivative size a partition function sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionMode {
    /// `‖φ_w'‖` over the domain.
    SupNorm,
    /// `|φ_w'(x₀)|` at the system anchor.
    BasePoint,
}

/// `log Z(n, t)`, the log-sum over `L_n` of derivative sizes to the power
/// `t`, accumulated in a fixed pairwise order.
pub fn partition_log(shift: &ShiftSpec, sys: &SystemSpec, n: usize, t: f64, mode: PartitionMode) -> Result<f64> {
    partition_log_bounded(shift, sys, n, t, mode, PressureOptions::default().max_words)
}

pub fn partition_log_bounded(
    shift: &ShiftSpec,
    sys: &SystemSpec,
    n: usize,
    t: f64,
    mode: PartitionMode,
    max_words: u64,
) -> Result<f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Input(format!("partition function needs t >= 0, got {t}")));
    }
    if n == 0 {
        return Ok(0.0);
    }
    let count = crate::symbolic::count_language(shift, n)?;
    if count > max_words as u128 {
        return Err(Error::Resource {
            what: format!("words of length {n}"),
            estimate: count,
            budget: max_words as u128,
        });
    }
    let (lo, hi) = sys.domain();
    let x0 = sys.anchor();
    let mut sum = LogSum::new();
    let mut stack: Vec<Composite> = vec![sys.identity()];
    walk_language(shift, n, &mut |w: &[Letter]| {
        stack.truncate(w.len());
        let c = stack[w.len() - 1].then(sys.letter(w[w.len() - 1]));
        if w.len() == n {
            let v = match mode {
                PartitionMode::SupNorm => c.log_derivative_at(lo).max(c.log_derivative_at(hi)),
                PartitionMode::BasePoint => c.log_derivative_at(x0),
            };
            sum.push(t * v);
        }
        stack.push(c);
        Ok(())
    })?;
    Ok(sum.value())
}

/// Certified enclosure of `P(t)` at depth `n`.
pub fn pressure_enclosure(shift: &ShiftSpec, sys: &SystemSpec, n: usize, t: f64) -> Result<PressureEnclosure> {
    PressureModel::build(shift, sys, n, &PressureOptions::default())?.enclosure(t)
}

/// Dimension enclosure from the zeros of the lower and upper pressure
/// bounds, each bracketed to `tol / 4` and clamped to `[0, 1]`.
pub fn bowen_root(shift: &ShiftSpec, sys: &SystemSpec, n: usize, tol: f64) -> Result<DimensionEnclosure> {
    let model = PressureModel::build(shift, sys, n, &PressureOptions::default())?;
    bowen_root_of(&model, tol)
}

pub fn bowen_root_of(model: &PressureModel, tol: f64) -> Result<DimensionEnclosure> {
    if !(tol > 0.0) {
        return Err(Error::Input(format!("root tolerance must be positive, got {tol}")));
    }
    if model.is_single_point() {
        return Ok(DimensionEnclosure::point(0.0, model.depth()));
    }
    let step = tol / 4.0;
    // upper(t) <= 0 certifies the dimension is at most t
    let h_hi = if model.upper(0.0) <= 0.0 {
        0.0
    } else if model.upper(1.0) > 0.0 {
        1.0
    } else {
        bisect(|t| model.upper(t) <= 0.0, step)?.1
    };
    // lower(t) >= 0 certifies the dimension is at least t
    let h_lo = if model.lower(1.0) >= 0.0 {
        1.0
    } else if model.lower(0.0) < 0.0 {
        0.0
    } else {
        bisect(|t| model.lower(t) < 0.0, step)?.0
    };
    Ok(DimensionEnclosure::new(h_lo.min(h_hi), h_hi, model.depth()))
}

/// Bracket `[a, b]` with `!pred(a)` and `pred(b)`, starting from `[0, 1]`.
fn bisect<F: Fn(f64) -> bool>(pred: F, step: f64) -> Result<(f64, f64)> {
    let (mut a, mut b) = (0.0f64, 1.0f64);
    for _ in 0..MAX_BISECTIONS {
        if b - a <= step {
            return Ok((a, b));
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if pred(mid) {
            b = mid;
        } else {
            a = mid;
        }
    }
    if b - a <= step {
        Ok((a, b))
    } else {
        Err(Error::Internal(format!(
            "bisection stalled at [{a}, {b}] above step {step}"
        )))
    }
}
