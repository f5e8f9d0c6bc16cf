use super::{Check, SuiteConfig, Threshold};
use crate::contact::{
    c0_distance, legendrian_defect, transverse_check, Domain, FnMap, GridSpec, Point3, Point5,
};
use crate::flow::{
    build_normal_coordinate_hamiltonian, builtin, contact_field_from_hamiltonian,
    extension_c0_bound, integrate_flow, isotopy_support_size, random_points, step_halving_ratios,
    verify_conformal_pullback, verify_contact_field_identities, verify_hamiltonian_conditions,
    verify_obstruction_identity, verify_velocity_annihilated_by_beta, BoxBump, ScalarField5,
    StretchIsotopy, SupportSampling, BUILTIN_NAMES,
};
use crate::schedule::{
    build_lambda_schedule, ibp_check, make_s_family, make_split_family, StepLambda, StepOneIsotopy,
};
use crate::singular::{
    admissible_indices, birth_model_defect, chart_arc, find_psi_singular_points,
    loose_chart_rescale, loose_chart_unscale, psi_delta, psi_singular_points, pullback_ratio,
    trace_singular_locus, zigzag_birth_model, LooseChartSpec, PsiCurve, WrinkleMap, WrinkleVariant,
};
use crate::zigzag::{approximate_curve, lift_family_to_r5, FamilyApproximation};
use crate::zoo::{
    build_sequence_plan, cusp_counts, cusp_set, detect_front_cusps, equidistribution_filter,
    fiber_diameter, fractional_part, gamma_c0_to_inf, gamma_inf, gamma_m, sigma, CuspSide, Gamma,
    GammaInf,
};
use crate::ContactPoint;

const LEGENDRIAN: &str = "Legendrian condition dz - y dx = 0";
const CONVERGENCE: &str = "C0 convergence of the oscillating curves to the transverse axis";
const CUSPS: &str = "cusp count of the oscillating front";
const FILTER: &str = "equidistribution filter on m^2/(2 pi) mod 1";
const SURFACE: &str = "interpolating surface between the oscillating curve and the axis";
const IDENTITIES: &str = "contact vector field of a Hamiltonian";
const FLOW: &str = "flow of a contact vector field";
const STRETCH: &str = "stretching isotopy along the interpolating surface";
const NORMAL: &str = "Hamiltonian generating the stretching isotopy";
const ZIGZAG: &str = "zig-zag approximation of a front";
const SCHEDULE: &str = "four-quarter stretching schedule";
const EXTENSION: &str = "C0 bound of the extending contact isotopy";
const IBP: &str = "isotopy by parts";
const WRINKLE: &str = "wrinkle and embryo singular loci";
const BIRTH: &str = "zig-zag birth model";
const CHART: &str = "loose chart around a zig-zag";

/// Frequencies swept by the curve suite.
fn sweep(config: &SuiteConfig) -> std::ops::RangeInclusive<u32> {
    2..=config.m_max
}

pub(super) fn curves(config: &SuiteConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let g1 = GridSpec::uniform(config.curve_grid);
    for m in sweep(config) {
        out.push(Check::measured(
            format!("curves.defect.m{m}"),
            LEGENDRIAN,
            legendrian_defect(&Gamma::new(m), &g1),
            Threshold::AtMost(1e-9),
        ));
    }

    let fine = GridSpec::uniform(10 * config.curve_grid + 1);
    for m in [2u32, 5, 10, 22] {
        let exact = gamma_c0_to_inf(m);
        out.push(Check::measured(
            format!("curves.c0.m{m}"),
            CONVERGENCE,
            c0_distance(&Gamma::new(m), &GammaInf, &fine).map(|d| (d - exact).abs()),
            Threshold::AtMost(1e-4),
        ));
    }
    out.push(Check::new(
        "curves.c0.m2.value",
        CONVERGENCE,
        (gamma_c0_to_inf(2) - 0.718070).abs(),
        Threshold::AtMost(1e-4),
    ));

    let samples = (2 * config.curve_grid).max(20_000);
    for m in sweep(config) {
        let set = cusp_set(m);
        let right = set.iter().filter(|c| c.side == CuspSide::Right).count();
        let formula = cusp_counts(m);
        let found = detect_front_cusps(&Gamma::new(m), samples);
        let found_right = found.iter().filter(|c| c.side == CuspSide::Right).count();
        let mismatch = right.abs_diff(formula.0)
            + (set.len() - right).abs_diff(formula.1)
            + found_right.abs_diff(formula.0)
            + (found.len() - found_right).abs_diff(formula.1);
        out.push(Check::new(
            format!("curves.cusps.m{m}"),
            CUSPS,
            mismatch as f64,
            Threshold::Equal(0.0),
        ));
    }
    out.push(Check::flag(
        "curves.cusps.m2.right_left",
        CUSPS,
        cusp_counts(2) == (2, 1),
    ));
    out.push(Check::new(
        "curves.cusps.m22.right",
        CUSPS,
        cusp_counts(22).0 as f64,
        Threshold::Equal(154.0),
    ));
    out.push(Check::flag(
        "curves.filter.m22",
        FILTER,
        equidistribution_filter([22]) == vec![22],
    ));
    out.push(Check::new(
        "curves.filter.m22.fraction",
        FILTER,
        fractional_part(22),
        Threshold::Within(f64::MIN_POSITIVE, 0.125),
    ));
    out.push(Check::flag(
        "curves.filter.below22",
        FILTER,
        equidistribution_filter(2..=21).is_empty(),
    ));

    let gs = GridSpec::uniform(config.surface_grid);
    let dom = Domain::<1>::symmetric_unit();
    for m in [2u32, 8, 22] {
        let dev = crate::scan::max_over_grid(&dom, &gs, |u| {
            let t = u[0];
            (sigma(m, t, 0.0) - gamma_m(m, t))
                .max_abs()
                .max((sigma(m, t, 1.0) - gamma_inf(t)).max_abs())
        });
        out.push(Check::measured(
            format!("curves.surface_ends.m{m}"),
            SURFACE,
            dev.map(|g| g.value),
            Threshold::AtMost(1e-15),
        ));
    }
    let fiber = |m: u32| {
        crate::scan::max_over_grid(&dom, &gs, |u| fiber_diameter(m, u[0], 65)).map(|g| g.value)
    };
    out.push(Check::measured(
        "curves.fiber.m8",
        SURFACE,
        fiber(8),
        Threshold::AtMost(2f64.sqrt() / 8.0 + 1.0 / 256.0 + 1e-12),
    ));
    // c_k = 2^k * max fiber diameter over the plan entries
    let plan = build_sequence_plan(3);
    let mut c = 0.0f64;
    for (k, &m) in plan.frequencies.iter().enumerate() {
        let d = fiber(m);
        if let Ok(d) = d {
            c = c.max(d * 2f64.powi(k as i32 + 1));
        }
        out.push(Check::measured(
            format!("curves.fiber.plan{}", k + 1),
            SURFACE,
            d.map(|d| d - gamma_c0_to_inf(m)),
            Threshold::AtMost(1e-12),
        ));
    }
    out.push(Check::info("curves.fiber.c", SURFACE, c));
    out.push(Check::flag(
        "curves.axis_transverse",
        "transversality of the limit axis",
        transverse_check(&GammaInf, &g1),
    ));
    out
}

pub(super) fn flows(config: &SuiteConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let n_pts = if config.quick { 250 } else { 1000 };
    let pts = random_points(n_pts, [-1.5; 5], [1.5; 5], config.seed);
    for name in BUILTIN_NAMES {
        let h = builtin(name).expect("builtin");
        let r = verify_contact_field_identities(&h, &pts, 0.0);
        out.push(Check::new(
            format!("flows.beta.{name}"),
            IDENTITIES,
            r.beta_residual,
            Threshold::AtMost(1e-8),
        ));
        out.push(Check::new(
            format!("flows.cartan.{name}"),
            IDENTITIES,
            r.cartan_residual,
            Threshold::AtMost(1e-8),
        ));
        out.push(Check::new(
            format!("flows.outside_support.{name}"),
            IDENTITIES,
            r.outside_support,
            Threshold::Equal(0.0),
        ));
    }

    let endpoint = |name: &str, target: Point5| {
        let f = contact_field_from_hamiltonian(builtin(name).expect("builtin"));
        integrate_flow(&f, Point5::default(), (0.0, 1.0), 0.01, None)
            .map(|tr| tr.end().dist(&target))
    };
    out.push(Check::measured(
        "flows.reeb_endpoint",
        FLOW,
        endpoint("reeb", Point5::new(0.0, 0.0, 1.0, 0.0, 0.0)),
        Threshold::AtMost(1e-12),
    ));
    out.push(Check::measured(
        "flows.y_endpoint",
        FLOW,
        endpoint("y", Point5::new(-1.0, 0.0, 0.0, 0.0, 0.0)),
        Threshold::AtMost(1e-12),
    ));

    let ball = contact_field_from_hamiltonian(builtin("ball").expect("builtin"));
    let start = Point5::new(0.2, 0.1, -0.1, 0.15, 0.05);
    match step_halving_ratios(&ball, start, (0.0, 1.0), &[0.1, 0.05, 0.025, 0.0125]) {
        Ok(ratios) => {
            for (i, r) in ratios.into_iter().enumerate() {
                out.push(Check::new(
                    format!("flows.rk4_ratio.{i}"),
                    FLOW,
                    r,
                    Threshold::Within(12.0, 20.0),
                ));
            }
        }
        Err(e) => out.push(Check::measured(
            "flows.rk4_ratio",
            FLOW,
            Err(e),
            Threshold::Within(12.0, 20.0),
        )),
    }

    let n_transport = if config.quick { 5 } else { 20 };
    let tpts = random_points(n_transport, [-0.6; 5], [0.6; 5], config.seed ^ 0x5eed);
    for name in ["ball", "box", "yp"] {
        let f = contact_field_from_hamiltonian(builtin(name).expect("builtin"));
        out.push(Check::measured(
            format!("flows.transport.{name}"),
            FLOW,
            verify_conformal_pullback(&f, &tpts, (0.0, 0.5), 1e-3).map(|r| r.max_defect),
            Threshold::AtMost(1e-5),
        ));
    }

    let bump = BoxBump {
        center: [0.0; 5],
        half: [0.5, 0.5, 0.5, 0.3, 0.3],
        amp: 1.0,
    };
    let (lo, hi) = bump.support_box().expect("box support");
    let outside: Vec<Point5> =
        random_points(4 * n_transport, [-1.0; 5], [1.0; 5], config.seed ^ 0xb0c5)
            .into_iter()
            .filter(|p| {
                let a = p.to_array();
                (0..5).any(|k| a[k] < lo[k] || a[k] > hi[k])
            })
            .collect();
    let bump_field = contact_field_from_hamiltonian(bump);
    let moved = outside
        .iter()
        .map(|&p| {
            integrate_flow(&bump_field, p, (0.0, 1.0), 0.01, None).map(|tr| tr.end().dist(&p))
        })
        .try_fold(0.0f64, |acc, d| d.map(|d| acc.max(d)));
    out.push(Check::measured(
        "flows.identity_outside_support",
        FLOW,
        moved,
        Threshold::Equal(0.0),
    ));

    let sched = build_lambda_schedule(0.5).expect("eps in range");
    let iso = StretchIsotopy::new(8, 0.5, sched);
    let g3 = if config.quick {
        GridSpec::new([9, 7, 5])
    } else {
        GridSpec::new([config.surface_grid / 10 + 1, 11, 7])
    };
    let b = verify_velocity_annihilated_by_beta(&iso, &g3, 8);
    out.push(Check::new(
        "flows.stretch.velocity",
        STRETCH,
        b.velocity_mismatch,
        Threshold::AtMost(1e-6),
    ));
    out.push(Check::new(
        "flows.stretch.beta_closed",
        STRETCH,
        b.closed_form,
        Threshold::AtMost(1e-12),
    ));
    out.push(Check::info(
        "flows.stretch.beta_fd",
        STRETCH,
        b.finite_difference,
    ));
    out.push(Check::new(
        "flows.stretch.w0_slice",
        STRETCH,
        b.w_zero_slice,
        Threshold::Equal(0.0),
    ));
    match verify_obstruction_identity(&iso, &g3, 6) {
        Ok(r) => {
            out.push(Check::new(
                "flows.obstruction.closed",
                STRETCH,
                r.identity_closed_form,
                Threshold::AtMost(1e-12),
            ));
            out.push(Check::new(
                "flows.obstruction.fd",
                STRETCH,
                r.identity_finite_difference,
                Threshold::AtMost(1e-6),
            ));
            out.push(Check::new(
                "flows.obstruction.compatibility",
                STRETCH,
                r.compatibility,
                Threshold::AtMost(1e-10),
            ));
            out.push(
                Check::info(
                    "flows.obstruction.printed_sign",
                    STRETCH,
                    r.compatibility_as_printed,
                )
                .with_note("the combination with the opposite sign on dx does not vanish"),
            );
        }
        Err(e) => out.push(Check::measured(
            "flows.obstruction",
            STRETCH,
            Err(e),
            Threshold::AtMost(1e-10),
        )),
    }

    let gh = if config.quick {
        GridSpec::new([21, 5, 3])
    } else {
        GridSpec::new([41, 9, 3])
    };
    for tau in [0.1, 0.4, 0.6, 0.85] {
        let r = build_normal_coordinate_hamiltonian(iso.clone(), tau, (0.05, 0.45))
            .and_then(|nh| verify_hamiltonian_conditions(&nh, &gh, 1e-4));
        match r {
            Ok(c) => {
                for (name, v) in [
                    ("vanishes", c.vanishes),
                    ("dx", c.x_component),
                    ("dy", c.y_component),
                    ("dz", c.z_component),
                    ("qp_flat", c.qp_flat),
                    ("field", c.field_match),
                ] {
                    out.push(Check::new(
                        format!("flows.hamiltonian.t{tau}.{name}"),
                        NORMAL,
                        v,
                        Threshold::AtMost(1e-4),
                    ));
                }
            }
            Err(e) => out.push(Check::measured(
                format!("flows.hamiltonian.t{tau}"),
                NORMAL,
                Err(e),
                Threshold::AtMost(1e-4),
            )),
        }
    }
    out
}

/// `t -> sigma(t, (1 + s) / 4)`, a family of Legendrian curves with zero
/// contact angle in `s`.
fn sigma_family(m: u32) -> impl crate::ParamMap<2, Point = Point3> {
    FnMap::new(Domain::symmetric_unit(), move |u: [f64; 2]| {
        sigma(m, u[0], 0.25 * (1.0 + u[1]))
    })
}

pub(super) fn zigzag(config: &SuiteConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let g1 = GridSpec::uniform(config.curve_grid);
    match approximate_curve(&GammaInf, 50, 0.01) {
        Ok(a) => {
            out.push(Check::measured(
                "zigzag.defect",
                LEGENDRIAN,
                legendrian_defect(&a.lift, &g1),
                Threshold::AtMost(1e-9),
            ));
            match a.error_to(&GammaInf, &g1) {
                Ok(e) => {
                    out.push(
                        Check::new("zigzag.c0", ZIGZAG, e.c0, Threshold::Below(0.05)).with_note(
                            "climbing the vertical front with 150 legs forces |y| of order one",
                        ),
                    );
                    out.push(Check::new(
                        "zigzag.front_c0",
                        ZIGZAG,
                        e.front_c0,
                        Threshold::Below(0.05),
                    ));
                    out.push(Check::info("zigzag.slope_c0", ZIGZAG, e.slope_c0));
                }
                Err(e) => out.push(Check::measured(
                    "zigzag.c0",
                    ZIGZAG,
                    Err(e),
                    Threshold::Below(0.05),
                )),
            }
            out.push(Check::new(
                "zigzag.cusps",
                ZIGZAG,
                a.cusp_count() as f64,
                Threshold::Equal(98.0),
            ));
        }
        Err(e) => out.push(Check::measured(
            "zigzag.build",
            ZIGZAG,
            Err(e),
            Threshold::Info,
        )),
    }

    let g2 = GridSpec::uniform(2 * config.curve_grid);
    let mut prev = f64::INFINITY;
    let mut increases = 0usize;
    for m in [25usize, 50, 100, 200] {
        let e = approximate_curve(&GammaInf, m, 0.01).and_then(|a| a.error_to(&GammaInf, &g2));
        let v = e.as_ref().map(|e| e.c0).unwrap_or(f64::NAN);
        if !(v < prev) {
            increases += 1;
        }
        prev = v;
        out.push(Check::measured(
            format!("zigzag.c0.M{m}"),
            ZIGZAG,
            e.map(|e| e.c0),
            Threshold::Info,
        ));
    }
    out.push(Check::new(
        "zigzag.monotone",
        ZIGZAG,
        increases as f64,
        Threshold::Equal(0.0),
    ));

    let gf = if config.quick {
        GridSpec::new([41, 5])
    } else {
        GridSpec::new([101, 9])
    };
    for m_pts in [50usize, 100] {
        let d = 1.0 / (m_pts as f64).sqrt();
        let fam = FamilyApproximation::new(sigma_family(2), m_pts, d);
        let dev = fam.contact_angle_deviation(&gf);
        out.push(Check::measured(
            format!("zigzag.family.angle_constant.M{m_pts}"),
            ZIGZAG,
            dev.map(|v| v / d),
            Threshold::Info,
        ));
        let lift = lift_family_to_r5(fam, &gf, 1e-9);
        out.push(Check::measured(
            format!("zigzag.family.beta.M{m_pts}"),
            ZIGZAG,
            lift.and_then(|l| legendrian_defect(&l, &gf)),
            Threshold::AtMost(1e-8),
        ));
    }
    out
}

pub(super) fn schedules(config: &SuiteConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for eps in [0.5, 0.2, 0.1] {
        out.push(Check::flag(
            format!("schedules.split.e{eps}"),
            SCHEDULE,
            make_split_family(eps).is_ok(),
        ));
        let sch = match build_lambda_schedule(eps) {
            Ok(s) => s,
            Err(e) => {
                out.push(Check::measured(
                    format!("schedules.build.e{eps}"),
                    SCHEDULE,
                    Err(e),
                    Threshold::Info,
                ));
                continue;
            }
        };
        // the grid must resolve the blocks it is auditing
        let n = config
            .schedule_grid
            .max((8.0 / sch.block_width()).ceil() as usize + 1);
        let r = sch.verify(n, config.schedule_tau);
        let id = |s: &str| format!("schedules.e{eps}.{s}");
        out.push(Check::new(
            id("start"),
            SCHEDULE,
            r.start_deviation,
            Threshold::AtMost(1e-15),
        ));
        out.push(Check::new(
            id("end"),
            SCHEDULE,
            r.end_deviation,
            Threshold::AtMost(1e-15),
        ));
        out.push(Check::new(
            id("monotone"),
            SCHEDULE,
            r.min_rate,
            Threshold::AtLeast(-1e-12),
        ));
        out.push(Check::new(
            id("support"),
            SCHEDULE,
            r.support_violations as f64,
            Threshold::Equal(0.0),
        ));
        out.push(Check::new(
            id("half_on_b"),
            SCHEDULE,
            r.half_on_b_deviation,
            Threshold::Equal(0.0),
        ));
        for (q, a) in r.quarters.iter().enumerate() {
            out.push(Check::new(
                id(&format!("q{q}.diameter")),
                SCHEDULE,
                a.max_diameter,
                Threshold::Below(eps),
            ));
            out.push(Check::new(
                id(&format!("q{q}.grid_diameter")),
                SCHEDULE,
                a.grid_max_diameter,
                Threshold::Below(eps),
            ));
            out.push(Check::new(
                id(&format!("q{q}.components")),
                SCHEDULE,
                a.grid_components.abs_diff(a.predicted_components) as f64,
                Threshold::Equal(0.0),
            ));
        }
    }

    out.extend(extension_checks(
        8,
        0.5,
        GridSpec::new([81, 81, 3]),
        "schedules.extension",
    ));
    let bigger = extension_bound(8, 0.5, GridSpec::new([41, 41, 3])).and_then(|(r, _)| {
        let lo = extension_c0_bound(&r, 0.25)?;
        let hi = extension_c0_bound(&r, 0.5)?;
        let mut bumped = r.clone();
        let mut each = true;
        for k in 0..bumped.sizes.len() {
            let before = extension_c0_bound(&bumped, 0.5)?;
            bumped.sizes[k] += 0.01;
            each &= extension_c0_bound(&bumped, 0.5)? > before;
        }
        Ok(lo < hi && each)
    });
    out.push(Check::measured(
        "schedules.extension.monotone",
        EXTENSION,
        bigger.map(|ok| if ok { 1.0 } else { 0.0 }),
        Threshold::Equal(1.0),
    ));

    for m in [8u32, 22, 27, 39] {
        out.push(Check::flag(
            format!("schedules.s_family.m{m}"),
            IBP,
            make_s_family(m).is_ok(),
        ));
    }
    let step = make_s_family(8)
        .and_then(|(s0, s1)| StepLambda::new(s0, s1))
        .map(|lambda| StepOneIsotopy {
            m: 8,
            zigzags: vec![-0.5, 0.1, 0.6],
            radius: 0.05,
            amplitude: 0.02,
            h_amplitude: 0.05,
            h_window: 0.3,
            lambda,
        });
    let g = if config.quick {
        GridSpec::new([81, 21])
    } else {
        GridSpec::new([161, 41])
    };
    let cert = step.and_then(|iso| {
        let probe = ibp_check(&iso, &g, 1.0, SupportSampling::default())?;
        let c = probe.smallest_passing_c;
        let above = ibp_check(&iso, &g, 1.01 * c, SupportSampling::default())?;
        let below = ibp_check(&iso, &g, 0.99 * c, SupportSampling::default())?;
        Ok((c, above.pass, below.pass))
    });
    match cert {
        Ok((c, above, below)) => {
            out.push(Check::info("schedules.ibp.smallest_c", IBP, c));
            out.push(Check::flag("schedules.ibp.pass_above", IBP, above));
            out.push(Check::flag("schedules.ibp.fail_below", IBP, !below));
        }
        Err(e) => out.push(Check::measured(
            "schedules.ibp",
            IBP,
            Err(e),
            Threshold::Info,
        )),
    }
    out
}

type ExtensionRun = (crate::flow::IsotopySupportReport, f64);

/// Quarter-interval support report of the stretch at frequency `m`, and
/// `k` with `2^k = m` (fractional when `m` is not a power of two).
pub(super) fn extension_bound(m: u32, eps: f64, grid: GridSpec<3>) -> crate::Result<ExtensionRun> {
    let iso = StretchIsotopy::new(m, 0.5, build_lambda_schedule(eps)?);
    let quarters = [(0.0, 0.25), (0.25, 0.5), (0.5, 0.75), (0.75, 1.0)];
    let r = isotopy_support_size(&iso, &grid, &quarters, SupportSampling::default());
    Ok((r, f64::from(m).log2()))
}

pub(super) fn extension_checks(m: u32, eps: f64, grid: GridSpec<3>, prefix: &str) -> Vec<Check> {
    let mut out = Vec::new();
    let (r, k) = match extension_bound(m, eps, grid) {
        Ok(x) => x,
        Err(e) => return vec![Check::measured(prefix, EXTENSION, Err(e), Threshold::Info)],
    };
    for (q, s) in r.sizes.iter().enumerate() {
        out.push(Check::info(format!("{prefix}.size.q{q}"), EXTENSION, *s));
    }
    out.push(Check::new(
        format!("{prefix}.quarters"),
        EXTENSION,
        r.sizes.len() as f64,
        Threshold::Equal(4.0),
    ));
    let bound = extension_c0_bound(&r, eps);
    let structure = bound
        .as_ref()
        .map(|b| (b - (r.sizes.iter().sum::<f64>() + 2.0 * eps)).abs());
    out.push(Check::measured(
        format!("{prefix}.pairing"),
        EXTENSION,
        structure.map_err(|e| crate::Error::InvalidArgument(e.to_string())),
        Threshold::AtMost(1e-15),
    ));
    // each quarter piece is at most c / 2^k
    let c = r.sizes.iter().map(|s| s + eps / 2.0).fold(0.0, f64::max) * 2f64.powf(k);
    out.push(Check::info(format!("{prefix}.c"), EXTENSION, c));
    out.push(Check::measured(
        format!("{prefix}.bound"),
        EXTENSION,
        bound.map(|b| b / (4.0 * c / 2f64.powf(k))),
        Threshold::AtMost(1.0),
    ));
    out
}

pub(super) fn charts(config: &SuiteConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for delta in [0.01, 0.3, 1.0, 2.5] {
        let num = find_psi_singular_points(delta, -2.0, 2.0, 1001);
        let exact = psi_singular_points(delta);
        let err = if num.len() == 2 {
            num.iter()
                .zip(&exact)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        out.push(Check::new(
            format!("charts.psi_singular.d{delta}"),
            BIRTH,
            err,
            Threshold::AtMost(1e-10),
        ));
    }
    out.push(Check::flag(
        "charts.psi_regular.negative",
        BIRTH,
        find_psi_singular_points(-0.5, -2.0, 2.0, 1001).is_empty(),
    ));

    let std = trace_singular_locus(&WrinkleMap::new(2, WrinkleVariant::Standard), 64, 2.0, 400);
    out.push(Check::new(
        "charts.wrinkle.sphere",
        WRINKLE,
        std.max_radial_error,
        Threshold::AtMost(1e-6),
    ));
    let io = trace_singular_locus(&WrinkleMap::new(2, WrinkleVariant::InsideOut), 64, 3.0, 600);
    let hyper = io
        .points
        .iter()
        .map(|p| (p[0] * p[0] - 3.0 * p[2] * p[2] - 1.0).abs())
        .fold(
            if io.points.is_empty() {
                f64::INFINITY
            } else {
                0.0
            },
            f64::max,
        );
    out.push(Check::new(
        "charts.wrinkle.hyperbola",
        WRINKLE,
        hyper.max(io.max_radial_error),
        Threshold::AtMost(1e-6),
    ));
    for t in [0.1, 0.01] {
        let e = trace_singular_locus(&WrinkleMap::new(2, WrinkleVariant::Embryo(t)), 64, 0.5, 200);
        out.push(Check::new(
            format!("charts.embryo.t{t}"),
            WRINKLE,
            (e.diameter() - 2.0 * f64::sqrt(t))
                .abs()
                .max(e.max_radial_error),
            Threshold::AtMost(1e-6),
        ));
    }
    out.push(Check::flag(
        "charts.embryo.negative",
        WRINKLE,
        trace_singular_locus(
            &WrinkleMap::new(2, WrinkleVariant::Embryo(-0.1)),
            64,
            0.5,
            200,
        )
        .points
        .is_empty(),
    ));

    let g1 = GridSpec::uniform(config.curve_grid);
    for tau in [-0.5, -0.01, 0.01, 0.5] {
        let same = (0..=200).all(|k| {
            let t = -1.0 + k as f64 / 100.0;
            let p = zigzag_birth_model(t, tau);
            (p.x, p.z) == psi_delta(tau, t)
        });
        out.push(Check::flag(
            format!("charts.birth.front.t{tau}"),
            BIRTH,
            same,
        ));
        out.push(Check::measured(
            format!("charts.birth.defect.t{tau}"),
            BIRTH,
            legendrian_defect(&PsiCurve::new(tau), &g1),
            Threshold::AtMost(1e-10),
        ));
        let symbolic = (0..=200)
            .map(|k| birth_model_defect(-1.0 + k as f64 / 100.0, tau).abs())
            .fold(0.0, f64::max);
        out.push(Check::new(
            format!("charts.birth.termwise.t{tau}"),
            BIRTH,
            symbolic,
            Threshold::AtMost(1e-10),
        ));
    }

    for m in [2u32, 22] {
        let idx = admissible_indices(m);
        out.push(Check::info(
            format!("charts.m{m}.admissible"),
            CHART,
            idx.len() as f64,
        ));
        let bad = idx
            .iter()
            .filter(|&&i| !chart_arc(m, i, 4001).is_single_zigzag())
            .count();
        out.push(Check::new(
            format!("charts.m{m}.single_zigzag"),
            CHART,
            if idx.is_empty() {
                f64::INFINITY
            } else {
                bad as f64
            },
            Threshold::Equal(0.0),
        ));
        let spec = match LooseChartSpec::new(m, idx.first().copied().unwrap_or(0), 2.0, 0.1) {
            Ok(s) => s,
            Err(e) => {
                out.push(Check::measured(
                    format!("charts.m{m}.spec"),
                    CHART,
                    Err(e),
                    Threshold::Info,
                ));
                continue;
            }
        };
        let (c, h) = (spec.center(), spec.half_widths());
        let half = 0.5 * spec.rho;
        let target = [0.5, 0.5, 0.5, half, half];
        let mut corner_err = 0.0f64;
        let mut inverse_err = 0.0f64;
        for corner in 0..32u32 {
            let sign = |k: u32| if corner >> k & 1 == 1 { 1.0 } else { -1.0 };
            let pt: [f64; 5] =
                std::array::from_fn(|k| c[k] + sign(k as u32) * h[k] * (1.0 - 1e-12));
            match loose_chart_rescale(&spec, Point5::from_array(pt)) {
                Ok(img) => {
                    let a = img.to_array();
                    for k in 0..5 {
                        corner_err = corner_err.max((a[k] - sign(k as u32) * target[k]).abs());
                    }
                    inverse_err = inverse_err
                        .max(loose_chart_unscale(&spec, img).dist(&Point5::from_array(pt)));
                }
                Err(_) => corner_err = f64::INFINITY,
            }
        }
        out.push(Check::new(
            format!("charts.m{m}.target_box"),
            CHART,
            corner_err,
            Threshold::AtMost(1e-11),
        ));
        out.push(Check::new(
            format!("charts.m{m}.inverse"),
            CHART,
            inverse_err,
            Threshold::AtMost(1e-12),
        ));
        let pt = Point5::new(
            0.01 / f64::from(m),
            -0.02 / f64::from(m),
            spec.z_i() + 1e-3 / f64::from(m * m),
            0.1,
            0.0,
        );
        let v = Point5::new(0.3, -1.0, 0.7, 0.2, 0.4);
        out.push(Check::measured(
            format!("charts.m{m}.pullback"),
            CHART,
            pullback_ratio(&spec, pt, v).map(|r| (r - f64::from(m * m) / 9.0).abs()),
            Threshold::AtMost(1e-12),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_family_is_legendrian_in_both_directions() {
        let f = sigma_family(3);
        let g = GridSpec::new([201, 5]);
        let dom = Domain::<2>::symmetric_unit();
        let worst = crate::scan::max_over_grid(&dom, &g, |u| {
            use crate::ParamMap;
            crate::alpha3(f.eval(u), f.partial(u, 1)).abs()
        })
        .unwrap();
        assert!(worst.value < 1e-8, "{worst:?}");
    }

    #[test]
    fn extension_structure_at_eight() {
        let checks = extension_checks(8, 0.5, GridSpec::new([41, 41, 3]), "x");
        for c in &checks {
            assert!(c.pass, "{c:?}");
        }
    }
}
