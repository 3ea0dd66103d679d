//! Directed rounding helpers.
//!
//! `f64` arithmetic rounds to nearest, so every quantity that ends up in a
//! certified bound is pushed outward by an explicit relative slack. The slack
//! constants are deliberately generous: a few ulps per primitive operation,
//! scaled by the number of operations that fed the value.

/// Unit roundoff of `f64`.
pub const EPS: f64 = f64::EPSILON;

/// Steps `x` down by `ulps` units in the last place.
pub fn down_ulps(x: f64, ulps: u32) -> f64 {
    let mut y = x;
    for _ in 0..ulps {
        y = y.next_down();
    }
    y
}

/// Steps `x` up by `ulps` units in the last place.
pub fn up_ulps(x: f64, ulps: u32) -> f64 {
    let mut y = x;
    for _ in 0..ulps {
        y = y.next_up();
    }
    y
}

/// Rounds `x` down by two ulps; used after a single libm call.
pub fn down(x: f64) -> f64 {
    down_ulps(x, 2)
}

/// Rounds `x` up by two ulps; used after a single libm call.
pub fn up(x: f64) -> f64 {
    up_ulps(x, 2)
}

/// Widens `x` downward by a relative error of `ops` roundings plus two ulps.
pub fn down_rel(x: f64, ops: usize) -> f64 {
    let slack = (ops as f64 + 2.0) * 2.0 * EPS * x.abs();
    down(x - slack)
}

/// Widens `x` upward by a relative error of `ops` roundings plus two ulps.
pub fn up_rel(x: f64, ops: usize) -> f64 {
    let slack = (ops as f64 + 2.0) * 2.0 * EPS * x.abs();
    up(x + slack)
}

/// `ln(exp(a) + exp(b))` without overflow.
pub fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Streaming log-sum-exp with a fixed-shape pairwise reduction tree.
///
/// Terms are combined like a binary counter: the partial sum at slot `i`
/// always covers exactly `2^i` consecutive terms, so the reduction order only
/// depends on the sequence of pushed values.
#[derive(Debug, Clone, Default)]
pub struct LogSum {
    slots: Vec<Option<f64>>,
    count: u64,
}

impl LogSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, value: f64) {
        let mut carry = value;
        let mut level = 0;
        loop {
            if level == self.slots.len() {
                self.slots.push(Some(carry));
                break;
            }
            match self.slots[level].take() {
                Some(prev) => {
                    carry = log_add(prev, carry);
                    level += 1;
                }
                None => {
                    self.slots[level] = Some(carry);
                    break;
                }
            }
        }
        self.count += 1;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Reduction depth, used to size the rounding slack of the result.
    pub fn depth(&self) -> usize {
        self.slots.len() + 1
    }

    /// Log of the accumulated sum; `-inf` when empty.
    pub fn value(&self) -> f64 {
        self.slots
            .iter()
            .flatten()
            .fold(f64::NEG_INFINITY, |acc, &v| log_add(v, acc))
    }

    /// Enclosure of the exact log-sum of the pushed values.
    pub fn bounds(&self) -> (f64, f64) {
        let v = self.value();
        if !v.is_finite() {
            return (v, v);
        }
        // each log_add contributes a few ulps of the magnitude of its operands
        let slack = (self.depth() as f64 + 2.0) * 4.0 * EPS * (1.0 + v.abs());
        (down(v - slack), up(v + slack))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_sum_matches_direct_sum() {
        let mut acc = LogSum::new();
        let values: Vec<f64> = (1..=1000).map(|i| -(i as f64) * 0.01).collect();
        for &v in &values {
            acc.push(v);
        }
        let direct: f64 = values.iter().map(|v| v.exp()).sum::<f64>().ln();
        let (lo, hi) = acc.bounds();
        assert!(lo <= direct && direct <= hi, "{lo} {direct} {hi}");
        assert_eq!(acc.count(), 1000);
    }

    #[test]
    fn empty_sum_is_neg_infinity() {
        assert_eq!(LogSum::new().value(), f64::NEG_INFINITY);
    }

    #[test]
    fn directed_steps_bracket() {
        let x = 0.1_f64;
        assert!(down(x) < x && x < up(x));
        assert!(down_rel(x, 10) < down(x));
        assert!(up_rel(-3.0, 4) > -3.0);
    }
}
