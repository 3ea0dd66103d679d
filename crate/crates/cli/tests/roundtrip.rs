use dimspec_cli::config::{ShiftConfig, SystemConfig, TaskConfig};
use dimspec_cli::{emit, Flags, Format, InputEcho, Outputs, ResultRecord};
use dimspec_core::pressure::Method;
use dimspec_core::symbolic::Word;
use proptest::prelude::*;

fn real() -> impl Strategy<Value = f64> {
    prop_oneof![any::<f64>().prop_filter("finite", |x| x.is_finite()), 0.0f64..1.0]
}

fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec(0u32..10, 0..12).prop_map(Word::new)
}

fn system() -> impl Strategy<Value = Option<SystemConfig>> {
    prop_oneof![
        Just(None),
        (prop::collection::vec(real(), 1..4), prop::collection::vec(real(), 1..4), prop::option::of(real()))
            .prop_map(|(ratios, offsets, k_override)| Some(SystemConfig::Affine { ratios, offsets, k_override })),
        prop::collection::vec(1u32..50, 1..5)
            .prop_map(|digits| Some(SystemConfig::ContinuedFraction { digits, k_override: None })),
    ]
}

fn shift() -> impl Strategy<Value = Option<ShiftConfig>> {
    let leaf = prop_oneof![
        (1usize..9).prop_map(|alphabet_size| ShiftConfig::Full { alphabet_size }),
        real().prop_map(|beta| ShiftConfig::Beta { beta }),
        (1usize..5, prop::collection::vec((0u32..5, 0u32..5), 0..6))
            .prop_map(|(alphabet_size, edges)| ShiftConfig::Markov { alphabet_size, edges }),
    ];
    prop_oneof![
        Just(None),
        leaf.clone().prop_map(Some),
        (leaf, prop::collection::vec(word(), 1..4), real()).prop_map(|(base, blocks, index_beta)| {
            Some(ShiftConfig::Coded { base: Box::new(base), blocks, index_beta })
        }),
    ]
}

fn task() -> impl Strategy<Value = TaskConfig> {
    prop_oneof![
        Just(TaskConfig::Dimension),
        real().prop_map(|target| TaskConfig::Invert { target }),
        (real(), real(), real()).prop_map(|(beta_lo, beta_hi, step)| TaskConfig::Curve { beta_lo, beta_hi, step }),
        (prop::collection::vec(real(), 0..4), prop::option::of(1usize..30))
            .prop_map(|(t, depth)| TaskConfig::Pressure { t, depth }),
        (0usize..20).prop_map(|n| TaskConfig::Language { n }),
        (real(), real(), 1usize..4, word())
            .prop_map(|(beta, beta_prime, k, word)| TaskConfig::Replace { beta, beta_prime, k, word }),
        prop::collection::vec(1usize..10, 0..5).prop_map(|sizes| TaskConfig::Exhaust { sizes }),
        real().prop_map(|target| TaskConfig::MarkovInvert { target }),
    ]
}

fn outputs() -> impl Strategy<Value = Outputs> {
    prop_oneof![
        (real(), real(), 0usize..40).prop_map(|(h_lo, h_hi, depth)| Outputs::Dimension { h_lo, h_hi, depth }),
        (real(), real(), real(), 0usize..40)
            .prop_map(|(beta, h_lo, h_hi, depth)| Outputs::CurvePoint { beta, h_lo, h_hi, depth }),
        (real(), real(), real(), real(), 0usize..40, real(), real()).prop_map(
            |(target, beta, h_lo, h_hi, depth, bracket_lo, bracket_hi)| Outputs::Inversion {
                target, beta, h_lo, h_hi, depth, bracket_lo, bracket_hi,
            }
        ),
        (real(), prop::option::of(1usize..13), prop::option::of(real()), real(), real(), 0usize..40,
            prop::collection::vec(0u32..8, 0..4), any::<bool>())
            .prop_map(|(target, m, beta, h_lo, h_hi, depth, component, terminal)| Outputs::MarkovInversion {
                target, m, beta, h_lo, h_hi, depth, component, terminal,
            }),
        (real(), 0usize..40, real(), real(), prop::sample::select(vec![
            Method::FullSuperadditive, Method::MarkovSpectral, Method::BetaInnerSft, Method::CodedBlockGraph,
        ]))
            .prop_map(|(t, depth, lower, upper, method)| Outputs::Pressure { t, depth, lower, upper, method }),
        (0usize..20, prop::collection::vec(word(), 0..5)).prop_map(|(n, words)| Outputs::Language { n, words }),
        (word(), word(), prop::collection::vec(1usize..30, 0..4), 1usize..4)
            .prop_map(|(word, result, positions, gap)| Outputs::Replacement { word, result, positions, gap }),
        (1usize..10, real(), real(), 0usize..40)
            .prop_map(|(size, h_lo, h_hi, depth)| Outputs::Rung { size, h_lo, h_hi, depth }),
    ]
}

fn record() -> impl Strategy<Value = ResultRecord> {
    (system(), shift(), task(), outputs(), any::<bool>(), any::<u64>()).prop_map(
        |(system, shift, task, outputs, converged, guard_band_hits)| ResultRecord {
            task: task.name().to_string(),
            input: InputEcho { system, shift, task },
            outputs,
            flags: Flags { converged, guard_band_hits },
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn json_round_trip(records in prop::collection::vec(record(), 0..4)) {
        let mut buf = Vec::new();
        emit(&records, "dimension", Format::Json, &mut buf).unwrap();
        let back: Vec<ResultRecord> = serde_json::from_slice(&buf).unwrap();
        prop_assert_eq!(&back, &records);
        let mut again = Vec::new();
        emit(&back, "dimension", Format::Json, &mut again).unwrap();
        prop_assert_eq!(buf, again);
    }
}
