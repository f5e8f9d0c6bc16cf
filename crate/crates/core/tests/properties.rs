use proptest::prelude::*;

use legendrian_core::contact::{ContactPoint, Point5};
use legendrian_core::flow::{
    extension_c0_bound, random_points, verify_contact_field_identities, BallBump, BoxBump,
    IsotopySupportReport,
};
use legendrian_core::schedule::{build_lambda_schedule, LambdaField};
use legendrian_core::singular::{
    admissible_indices, loose_chart_rescale, loose_chart_unscale, LooseChartSpec,
};
use legendrian_core::zoo::{
    cusp_counts, cusp_set, equidistribution_filter, fractional_part, gamma_m, CuspSide,
};

fn quarters(sizes: [f64; 4]) -> IsotopySupportReport {
    IsotopySupportReport {
        subintervals: vec![(0.0, 0.25), (0.25, 0.5), (0.5, 0.75), (0.75, 1.0)],
        components: vec![vec![]; 4],
        sizes: sizes.to_vec(),
    }
}

proptest! {
    #[test]
    fn gamma_stays_on_its_cylinder(m in 1u32..200, t in -1.0f64..1.0) {
        let p = gamma_m(m, t);
        let r2 = 2.0 / f64::from(m * m);
        prop_assert!((p.x * p.x + p.y * p.y - r2).abs() <= 1e-12);
    }

    #[test]
    fn cusp_counts_agree_with_the_cusp_set(m in 1u32..60) {
        let set = cusp_set(m);
        let right = set.iter().filter(|c| c.side == CuspSide::Right).count();
        prop_assert_eq!(cusp_counts(m), (right, set.len() - right));
    }

    #[test]
    fn filtered_frequencies_have_even_balanced_counts(lo in 2u32..200, span in 1u32..200) {
        for m in equidistribution_filter(lo..lo + span) {
            let base = (f64::from(m * m) / (2.0 * std::f64::consts::PI)).floor() as usize;
            prop_assert!(fractional_part(m) < 0.125);
            prop_assert_eq!(cusp_counts(m), (2 * base, 2 * base));
        }
    }

    #[test]
    fn extension_bound_is_monotone_and_affine_in_eps(
        sizes in prop::array::uniform4(0.0f64..1.0),
        bump in 0.0f64..0.5,
        k in 0usize..4,
        eps in 0.0f64..0.5,
        extra in 0.0f64..0.5,
    ) {
        let base = extension_c0_bound(&quarters(sizes), eps).unwrap();
        let mut larger = sizes;
        larger[k] += bump;
        prop_assert!(extension_c0_bound(&quarters(larger), eps).unwrap() >= base);
        let shifted = extension_c0_bound(&quarters(sizes), eps + extra).unwrap();
        prop_assert!((shifted - base - 2.0 * extra).abs() <= 1e-12);
    }

    #[test]
    fn lambda_schedule_is_a_monotone_unit_ramp(
        eps in 0.1f64..0.9,
        t in -1.0f64..1.0,
        s in -1.0f64..1.0,
        a in 0.0f64..1.0,
        b in 0.0f64..1.0,
    ) {
        let sched = build_lambda_schedule(eps).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (l0, l1) = (sched.lambda(t, s, lo), sched.lambda(t, s, hi));
        prop_assert!((0.0..=1.0).contains(&l0) && (0.0..=1.0).contains(&l1));
        prop_assert!(l1 >= l0 - 1e-15);
    }

    #[test]
    fn chart_rescale_round_trips(
        m in prop::sample::select(vec![2u32, 5, 22, 39]),
        pick in 0usize..1000,
        u in prop::array::uniform5(-0.49f64..0.49),
        q0 in -0.5f64..0.5,
    ) {
        let idx = admissible_indices(m);
        prop_assume!(!idx.is_empty());
        let spec = LooseChartSpec::new(m, idx[pick % idx.len()], 2.0, q0).unwrap();
        let h = spec.half_widths();
        let c = spec.center();
        let pt = Point5::from_array(std::array::from_fn(|k| c[k] + 2.0 * u[k] * h[k]));
        let back = loose_chart_unscale(&spec, loose_chart_rescale(&spec, pt).unwrap());
        prop_assert!(back.dist(&pt) <= 1e-12);
    }

    #[test]
    fn bump_fields_satisfy_the_defining_identities(
        center in prop::array::uniform5(-1.0f64..1.0),
        radius in 0.3f64..1.5,
        seed in any::<u64>(),
    ) {
        let lo = center.map(|c| c - 2.0);
        let hi = center.map(|c| c + 2.0);
        let pts = random_points(200, lo, hi, seed);
        let ball = BallBump { center, radius, amp: 1.0 };
        let r = verify_contact_field_identities(&ball, &pts, 0.0);
        prop_assert!(r.beta_residual <= 1e-12 && r.cartan_residual <= 1e-12);
        prop_assert_eq!(r.outside_support, 0.0);
        let boxed = BoxBump { center, half: [radius; 5], amp: 0.5 };
        let r = verify_contact_field_identities(&boxed, &pts, 0.0);
        prop_assert!(r.beta_residual <= 1e-12 && r.cartan_residual <= 1e-12);
        prop_assert_eq!(r.outside_support, 0.0);
    }
}
