use dimspec_core::conformal::SystemSpec;
use dimspec_core::pressure::{bowen_root, partition_log, PartitionMode, PressureModel, PressureOptions};
use dimspec_core::symbolic::ShiftSpec;
use proptest::prelude::*;

fn affine_system() -> impl Strategy<Value = SystemSpec> {
    prop::collection::vec(0.05f64..0.95, 2..=3).prop_map(|fractions| {
        // each map fills part of its own slot of [0, 1]
        let gap = 1.0 / fractions.len() as f64;
        let ratios: Vec<f64> = fractions.iter().map(|f| f * gap).collect();
        let offsets = (0..fractions.len()).map(|i| i as f64 * gap).collect();
        SystemSpec::affine(ratios, offsets).unwrap()
    })
}

fn cf_system() -> impl Strategy<Value = SystemSpec> {
    prop::sample::subsequence(vec![1u32, 2, 3, 4, 5], 2..=3)
        .prop_map(|digits| SystemSpec::continued_fraction(digits).unwrap())
}

fn system() -> impl Strategy<Value = SystemSpec> {
    prop_oneof![affine_system(), cf_system()]
}

fn shift() -> impl Strategy<Value = ShiftSpec> {
    prop_oneof![
        Just(ShiftSpec::full(2).unwrap()),
        Just(ShiftSpec::markov(2, &[(0, 0), (0, 1), (1, 0)]).unwrap()),
        (1.05f64..2.0).prop_map(|b| ShiftSpec::beta(b).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bounds_are_ordered_and_decrease(sys in system(), z in shift(), n in 1usize..=5, t1 in 0.0f64..1.0, dt in 0.0f64..0.5) {
        let model = PressureModel::build(&z, &sys, n, &PressureOptions::default()).unwrap();
        let t2 = t1 + dt;
        let a = model.enclosure(t1).unwrap();
        let b = model.enclosure(t2).unwrap();
        prop_assert!(a.lower <= a.upper && b.lower <= b.upper);
        prop_assert!(b.upper <= a.upper + dt * sys.s().ln() + 1e-12);
    }

    #[test]
    fn deeper_models_nest(sys in system(), z in shift(), n in 1usize..=4, t in 0.0f64..1.5) {
        let opts = PressureOptions::default();
        let a = PressureModel::build(&z, &sys, n, &opts).unwrap().enclosure(t).unwrap();
        let b = PressureModel::build(&z, &sys, n + 2, &opts).unwrap().enclosure(t).unwrap();
        prop_assert!(b.lower >= a.lower - 1e-12 && b.upper <= a.upper + 1e-12);
    }

    #[test]
    fn partition_function_is_convex(sys in system(), z in shift(), n in 1usize..=6, t in 0.0f64..1.5, h in 0.01f64..0.5) {
        let f = |s: f64| partition_log(&z, &sys, n, s, PartitionMode::SupNorm).unwrap();
        prop_assert!(f(t) - 2.0 * f(t + h) + f(t + 2.0 * h) >= -1e-9);
    }

    #[test]
    fn root_encloses_sign_change(sys in affine_system()) {
        let z = ShiftSpec::full(sys.letter_count()).unwrap();
        let e = bowen_root(&z, &sys, 3, 1e-6).unwrap();
        // full-shift affine: Σ r_i^d = 1
        let moran = |d: f64| sys_ratios(&sys).iter().map(|r| r.powf(d)).sum::<f64>() - 1.0;
        prop_assert!(moran(e.h_lo) >= -1e-9 && moran(e.h_hi) <= 1e-9, "{e:?}");
    }
}

fn sys_ratios(sys: &SystemSpec) -> Vec<f64> {
    (0..sys.letter_count()).map(|i| sys.letter(i as u32).derivative_at(0.0)).collect()
}

#[test]
fn nearby_beta_shifts_have_close_pressure() {
    use dimspec_core::betashift::delta_bound;
    let systems = [
        SystemSpec::affine(vec![0.5, 0.5], vec![0.0, 0.5]).unwrap(),
        SystemSpec::continued_fraction(vec![1, 2]).unwrap(),
    ];
    let n = 8;
    // small finite-type windows keep this quick; the bounds stay certified
    let opts = PressureOptions {
        max_states: 64,
        ..PressureOptions::default()
    };
    for sys in &systems {
        let log_k = sys.k().ln();
        for &beta in &[1.3, 1.5, 1.618_033_988_749_895, 1.8] {
            for k in 1..=3usize {
                let beta_prime = (beta + 0.5 * delta_bound(beta, k)).min(2.0);
                let base = PressureModel::build(&ShiftSpec::beta(beta).unwrap(), sys, n, &opts).unwrap();
                let near = PressureModel::build(&ShiftSpec::beta(beta_prime).unwrap(), sys, n, &opts).unwrap();
                for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
                    // binary alphabet: j = 1
                    let allowance = (t * log_k + 2.0 * (k as f64).ln()) / k as f64;
                    let slack = (2.0 * n as f64 / k as f64).ln() / n as f64;
                    assert!(
                        near.upper(t) <= base.upper(t) + allowance + slack,
                        "beta {beta} -> {beta_prime}, k {k}, t {t}: {} vs {}",
                        near.upper(t),
                        base.upper(t)
                    );
                }
            }
        }
    }
}
