//! Path-weighted transfer matrices and Collatz–Wielandt bounds on their
//! spectral radius.

use crate::conformal::{Composite, SystemSpec};
use crate::rounding::{down, down_rel, up, up_rel, LogSum};
use crate::symbolic::graph::cyclic_components;
use crate::symbolic::Letter;

const MAX_ITERATIONS: usize = 20_000;
const CHECK_EVERY: usize = 8;
const REL_TOL: f64 = 1e-13;

/// Which derivative bound a path contributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    /// `ln |φ_w'(x₀)|` rounded down.
    Lower,
    /// `ln ‖φ_w'‖` rounded up.
    Upper,
}

/// Entry `(u, v)` collects the log-derivatives of every `ℓ`-step path from
/// `u` to `v`; at a given `t` it evaluates to `Σ exp(t·value)`.
#[derive(Debug, Clone)]
pub(crate) struct PathMatrix {
    side: Side,
    rows: Vec<Vec<(usize, Vec<f64>)>>,
    components: Vec<Vec<usize>>,
}

impl PathMatrix {
    /// Enumerates `ℓ`-step paths of a labelled graph.
    pub(crate) fn build(
        edges: &[Vec<(Letter, usize)>],
        sys: &SystemSpec,
        len: usize,
        side: Side,
    ) -> PathMatrix {
        let (lo, hi) = sys.domain();
        let x0 = sys.anchor();
        let n = edges.len();
        let mut rows = Vec::with_capacity(n);
        for u in 0..n {
            let mut acc: Vec<Vec<f64>> = vec![Vec::new(); n];
            let mut stack: Vec<(usize, usize, Composite)> = vec![(u, 0, sys.identity())];
            while let Some((v, depth, c)) = stack.pop() {
                if depth == len {
                    let value = match side {
                        Side::Lower => c.log_derivative_lower(x0),
                        Side::Upper => c.log_sup_derivative(lo, hi),
                    };
                    acc[v].push(value);
                    continue;
                }
                for &(a, w) in edges[v].iter().rev() {
                    stack.push((w, depth + 1, c.then(sys.letter(a))));
                }
            }
            rows.push(
                acc.into_iter()
                    .enumerate()
                    .filter(|(_, vals)| !vals.is_empty())
                    .collect(),
            );
        }
        let succ: Vec<Vec<usize>> = rows
            .iter()
            .map(|r: &Vec<(usize, Vec<f64>)>| r.iter().map(|(v, _)| *v).collect())
            .collect();
        let components = cyclic_components(&succ);
        PathMatrix {
            side,
            rows,
            components,
        }
    }

    pub(crate) fn has_cycle(&self) -> bool {
        !self.components.is_empty()
    }

    /// Certified bound on `ln ρ` at exponent `t`: from below for
    /// [`Side::Lower`], from above for [`Side::Upper`]. `-inf` without cycles.
    pub(crate) fn log_radius(&self, t: f64) -> f64 {
        let mut best = f64::NEG_INFINITY;
        for comp in &self.components {
            let b = self.component_log_radius(comp, t);
            best = best.max(b);
        }
        best
    }

    fn component_log_radius(&self, comp: &[usize], t: f64) -> f64 {
        let upper = self.side == Side::Upper;
        let local = |v: usize| comp.binary_search(&v).ok();
        // log-domain entries restricted to the component
        let mut logs: Vec<Vec<(usize, f64)>> = Vec::with_capacity(comp.len());
        let mut scale = f64::NEG_INFINITY;
        for &u in comp {
            let mut row = Vec::new();
            for (v, values) in &self.rows[u] {
                let Some(j) = local(*v) else { continue };
                let mut sum = LogSum::new();
                for &x in values {
                    let tx = t * x;
                    sum.push(if upper { up(tx) } else { down(tx) });
                }
                let (l, h) = sum.bounds();
                let e = if upper { h } else { l };
                scale = scale.max(e);
                row.push((j, e));
            }
            logs.push(row);
        }
        if !scale.is_finite() {
            return f64::NEG_INFINITY;
        }
        let a: Vec<Vec<(usize, f64)>> = logs
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|(j, e)| {
                        let v = if upper {
                            up(up(e - scale).exp()).max(f64::MIN_POSITIVE)
                        } else {
                            down(down(e - scale).exp()).max(0.0)
                        };
                        (j, v)
                    })
                    .collect()
            })
            .collect();
        let ratio = collatz_wielandt(&a, upper);
        if ratio <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let log_ratio = if upper { up(ratio.ln()) } else { down(ratio.ln()) };
        let total = scale + log_ratio;
        if upper {
            up(total)
        } else {
            down(total)
        }
    }
}

/// Power iteration on `A + αI` from the all-ones vector, returning the
/// certified max (`upper`) or min ratio `(Av)_i / v_i` at the final vector.
fn collatz_wielandt(a: &[Vec<(usize, f64)>], upper: bool) -> f64 {
    let n = a.len();
    let alpha = a
        .iter()
        .map(|row| row.iter().map(|&(_, x)| x).sum::<f64>())
        .fold(0.0, f64::max);
    let mut v = vec![1.0; n];
    let mut av = vec![0.0; n];
    let mut best = if upper { f64::INFINITY } else { 0.0 };
    for iter in 0..MAX_ITERATIONS {
        multiply(a, &v, &mut av);
        if iter % CHECK_EVERY == 0 {
            let (lb, ub) = ratios(a, &v, &av);
            best = if upper { best.min(ub) } else { best.max(lb) };
            if ub - lb <= REL_TOL * ub {
                break;
            }
        }
        let mut norm = 0.0f64;
        for i in 0..n {
            v[i] = av[i] + alpha * v[i];
            norm = norm.max(v[i]);
        }
        if norm == 0.0 {
            break;
        }
        for x in &mut v {
            *x /= norm;
            // keep the vector strictly positive
            if *x < f64::MIN_POSITIVE {
                *x = f64::MIN_POSITIVE;
            }
        }
    }
    best
}

fn multiply(a: &[Vec<(usize, f64)>], v: &[f64], out: &mut [f64]) {
    for (i, row) in a.iter().enumerate() {
        out[i] = row.iter().map(|&(j, x)| x * v[j]).sum();
    }
}

/// Certified `(min, max)` of `(Av)_i / v_i`.
fn ratios(a: &[Vec<(usize, f64)>], v: &[f64], av: &[f64]) -> (f64, f64) {
    let mut lb = f64::INFINITY;
    let mut ub = 0.0f64;
    for i in 0..a.len() {
        let ops = a[i].len() + 2;
        lb = lb.min(down(down_rel(av[i], ops) / v[i]));
        ub = ub.max(up(up_rel(av[i], ops) / v[i]));
    }
    (lb.max(0.0), ub)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_matrix_radius() {
        let a = vec![vec![(0, 1.0), (1, 1.0)], vec![(0, 1.0)]];
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let lb = collatz_wielandt(&a, false);
        let ub = collatz_wielandt(&a, true);
        assert!(lb <= phi && phi <= ub);
        assert!(ub - lb < 1e-12);
    }

    #[test]
    fn periodic_matrix_converges() {
        // period 2, radius 1
        let a = vec![vec![(1, 2.0)], vec![(0, 0.5)]];
        let lb = collatz_wielandt(&a, false);
        let ub = collatz_wielandt(&a, true);
        assert!(lb <= 1.0 && 1.0 <= ub);
        assert!(ub - lb < 1e-12);
    }
}
