//! The first construction step moves nothing over `S0` before the midpoint
//! and nothing over `S1` after it.

use proptest::prelude::*;

use legendrian_core::flow::Isotopy;
use legendrian_core::schedule::{make_s_family, StepLambda, StepOneIsotopy};

fn step(m: u32) -> StepOneIsotopy {
    let (s0, s1) = make_s_family(m).unwrap();
    StepOneIsotopy {
        m,
        zigzags: vec![-0.5, 0.1, 0.6],
        radius: 0.05,
        amplitude: 0.02,
        h_amplitude: 0.05,
        h_window: 0.3,
        lambda: StepLambda::new(s0, s1).unwrap(),
    }
}

#[test]
fn families_cover_both_halves() {
    for m in [8u32, 22, 27, 39] {
        let iso = step(m);
        assert!(!iso.lambda.s0.is_empty() && !iso.lambda.s1.is_empty());
        assert!(iso.lambda.s0.is_disjoint_from(&iso.lambda.s1));
    }
}

proptest! {
    #[test]
    fn first_half_is_frozen_over_s0(
        m in prop::sample::select(vec![8u32, 22]),
        t in -1.0f64..1.0,
        pick in 0.0f64..1.0,
        tau in 0.0f64..0.499,
    ) {
        let iso = step(m);
        let (a, b) = iso.lambda.s0.intervals()[((pick * 1e6) as usize) % iso.lambda.s0.len()];
        let s = a + (b - a) * (0.01 + 0.98 * pick);
        prop_assert_eq!(iso.at([t, s], tau), iso.at([t, s], 0.0));
        prop_assert_eq!(iso.velocity([t, s], tau).to_array(), [0.0; 5]);
    }

    #[test]
    fn second_half_is_frozen_over_s1(
        m in prop::sample::select(vec![8u32, 22]),
        t in -1.0f64..1.0,
        pick in 0.0f64..1.0,
        tau in 0.501f64..=1.0,
    ) {
        let iso = step(m);
        let (a, b) = iso.lambda.s1.intervals()[((pick * 1e6) as usize) % iso.lambda.s1.len()];
        let s = a + (b - a) * (0.01 + 0.98 * pick);
        prop_assert_eq!(iso.at([t, s], tau), iso.at([t, s], 1.0));
        prop_assert_eq!(iso.velocity([t, s], tau).to_array(), [0.0; 5]);
    }
}
