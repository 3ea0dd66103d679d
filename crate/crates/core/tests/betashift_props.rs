use dimspec_core::betashift::{delta_bound, greedy_expansion, replace_word, sparse_zero_replacement};
use dimspec_core::symbolic::{Letter, Word};
use proptest::prelude::*;

/// Independent admissibility check with a small safety margin.
fn oracle_ok(x: &[Letter], beta: f64) -> bool {
    for i in 0..x.len() {
        let mut sum = 0.0;
        let mut p = 1.0;
        for &d in &x[i..] {
            p /= beta;
            sum += d as f64 * p;
            if sum >= 1.0 - 1e-12 {
                return false;
            }
        }
    }
    true
}

fn random_word(beta: f64, picks: &[u32]) -> Word {
    let alphabet = beta.ceil() as u32;
    let mut x: Vec<Letter> = Vec::new();
    for &r in picks {
        let options: Vec<Letter> = (0..alphabet)
            .filter(|&a| {
                let mut y = x.clone();
                y.push(a);
                oracle_ok(&y, beta)
            })
            .collect();
        x.push(options[r as usize % options.len()]);
    }
    Word::new(x)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn plan_invariants(
        beta in 1.01f64..=2.0,
        k in 1usize..=3,
        frac in 0.0f64..0.999,
        picks in prop::collection::vec(0u32..8, 1..=24),
    ) {
        let beta_prime = beta + frac * delta_bound(beta, k);
        let y = random_word(beta_prime, &picks);
        let plan = sparse_zero_replacement(&y, beta, k, beta_prime).unwrap();
        let s: Vec<usize> = plan.positions.iter().copied().collect();
        prop_assert!(s.windows(2).all(|p| p[1] - p[0] > k));
        for &p in &s {
            prop_assert!(y.letters()[p - 1] > 0);
        }
        for (i, (&r, &v)) in plan.result.letters().iter().zip(y.letters()).enumerate() {
            prop_assert!(r <= v);
            prop_assert_eq!(r == 0 && v > 0, plan.positions.contains(&(i + 1)));
        }
        prop_assert!(oracle_ok(plan.result.letters(), beta), "{} -> {}", y, plan.result);
    }

    #[test]
    fn replace_word_lands_in_target(
        beta in 1.01f64..=2.0,
        k in 1usize..=3,
        frac in 0.0f64..0.999,
        picks in prop::collection::vec(0u32..8, 1..=16),
    ) {
        let beta_prime = beta + frac * delta_bound(beta, k);
        let v = random_word(beta_prime, &picks);
        let x = replace_word(&v, beta, beta_prime, k).unwrap();
        prop_assert_eq!(x.len(), v.len());
        prop_assert!(oracle_ok(x.letters(), beta));
    }

    #[test]
    fn greedy_digits_reconstruct_t(t in 0.0f64..0.999, beta in 1.05f64..4.0) {
        let n = 30;
        let digits = greedy_expansion(t, beta, n).unwrap();
        let mut value = 0.0;
        let mut p = 1.0;
        for &d in digits.letters() {
            p /= beta;
            value += d as f64 * p;
            prop_assert!((d as f64) < beta);
        }
        prop_assert!(value <= t + 1e-9);
        prop_assert!(t - value <= beta.powi(-(n as i32)) + 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn replaced_windows_stay_below_bound(
        beta in 1.01f64..=2.0,
        k in 1usize..=3,
        frac in 0.0f64..0.999,
        picks in prop::collection::vec(0u32..8, 1..=24),
    ) {
        let beta_prime = beta + frac * delta_bound(beta, k);
        let y = random_word(beta_prime, &picks);
        let plan = sparse_zero_replacement(&y, beta, k, beta_prime).unwrap();
        let x = plan.result.letters();
        let bound = (beta_prime / beta).powi(2 * k as i32) - beta.powi(-2 * k as i32);
        for i in 0..x.len() {
            if x[i] == 0 {
                continue;
            }
            // 2k letters starting at position i + 1, zero-extended
            let sum: f64 = (1..=2 * k)
                .map(|s| x.get(i + s - 1).copied().unwrap_or(0) as f64 * beta.powi(-(s as i32)))
                .sum();
            prop_assert!(sum < bound + 1e-12, "{y} -> {}: window at {i} sums to {sum}, bound {bound}", plan.result);
        }
    }
}
