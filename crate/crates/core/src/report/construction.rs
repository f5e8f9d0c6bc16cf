use super::suites::extension_checks;
use super::{Check, SuiteConfig, Threshold, VerificationReport};
use crate::contact::{GridSpec, ParamMap, Point5};
use crate::zoo::{build_sequence_plan, Lambda, LambdaInf, SequencePlan};
use crate::{scan, Error, Result};

const PLAN: &str = "growth condition m_{i+1} > max(2^i, m_i) with the equidistribution filter";
const DISTANCES: &str = "C0 distances between consecutive Legendrians and the limit";
const TAIL: &str = "Cauchy tail of the C0 distances";
const NEIGHBOURHOOD: &str =
    "neighbourhood {|x|,|y|,|p| < 10/m, |z|,|q| < 1 + 10/m} of the i-th Legendrian";
const STEP: &str = "C0 bound of the i-th contactomorphism";

/// Extra plan entries summed for the tail estimate.
const TAIL_TERMS: usize = 16;

/// Largest of `|x| m/10`, `|y| m/10`, `|p| m/10`, `|z|/(1 + 10/m)`,
/// `|q|/(1 + 10/m)`; the point lies in the neighbourhood iff this is `< 1`.
fn neighbourhood_ratio(m: u32, pt: Point5) -> f64 {
    let r = 10.0 / f64::from(m);
    [
        pt.x.abs() / r,
        pt.y.abs() / r,
        pt.p.abs() / r,
        pt.z.abs() / (1.0 + r),
        pt.q.abs() / (1.0 + r),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

/// Interval bounds of the images over `[-1, 1]^2`: `|x|, |y| <= sqrt(2)/m`,
/// `|z| <= 1 + 1/(2 m^2)`, `|q| <= 1`, `p = 0`.
fn interval_ratio(m: u32) -> f64 {
    let m = f64::from(m);
    let hull = Point5::new(
        2f64.sqrt() / m,
        2f64.sqrt() / m,
        1.0 + 0.5 / (m * m),
        1.0,
        0.0,
    );
    neighbourhood_ratio(m as u32, hull)
}

/// Plan, distances, partial sums, tail estimate, neighbourhood containment
/// and a per-step C0 bound for the first `n` steps of the construction.
pub fn build_construction_report(n: usize, config: &SuiteConfig) -> Result<VerificationReport> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "the construction needs at least one step".into(),
        ));
    }
    config.validate()?;
    let mut out = Vec::new();
    let plan = build_sequence_plan(n);
    out.push(Check::flag(
        "construction.plan.admissible",
        PLAN,
        plan.is_admissible(),
    ));
    for (i, &m) in plan.frequencies.iter().enumerate() {
        out.push(Check::info(
            format!("construction.m{}", i + 1),
            PLAN,
            f64::from(m),
        ));
    }

    let analytic = plan.analytic_distances();
    let grid = GridSpec::new([10 * config.curve_grid + 1, 3]);
    match plan.measured_distances(&grid) {
        Ok(measured) => {
            for (i, (a, b)) in analytic.iter().zip(&measured).enumerate() {
                out.push(Check::info(
                    format!("construction.d{}", i + 1),
                    DISTANCES,
                    *a,
                ));
                out.push(Check::new(
                    format!("construction.d{}.measured", i + 1),
                    DISTANCES,
                    (a - b).abs(),
                    Threshold::AtMost(1e-4),
                ));
            }
        }
        Err(e) => out.push(Check::measured(
            "construction.measured",
            DISTANCES,
            Err(e),
            Threshold::AtMost(1e-4),
        )),
    }
    let sums = SequencePlan::partial_sums(&analytic);
    for (i, s) in sums.iter().enumerate() {
        out.push(Check::info(
            format!("construction.sum{}", i + 1),
            DISTANCES,
            *s,
        ));
    }
    out.push(Check::flag(
        "construction.sums.increasing",
        DISTANCES,
        sums.windows(2).all(|w| w[1] > w[0]),
    ));
    out.push(Check::flag(
        "construction.sums.finite",
        DISTANCES,
        sums.iter().all(|s| s.is_finite()),
    ));

    if n >= 2 {
        // the greedy plan extends its own prefixes
        let long = build_sequence_plan(n + TAIL_TERMS);
        let head = long.analytic_distances();
        let beyond: f64 = head[n..].iter().sum();
        // m_i > 2^{i-1} and d_i < 2/m_i bound what is left after the long plan
        let rest = 4.0 / 2f64.powi((n + TAIL_TERMS) as i32);
        out.push(Check::new(
            "construction.tail",
            TAIL,
            beyond + rest,
            Threshold::Below(plan.tail_bound()),
        ));
    } else {
        out.push(
            Check::info("construction.tail", TAIL, plan.tail_bound())
                .with_note("single step, no tail claim"),
        );
    }

    let side = config.surface_grid;
    let g2 = GridSpec::new([10 * side + 1, side]);
    for (i, &m) in plan.frequencies.iter().enumerate() {
        let id = i + 1;
        out.push(Check::new(
            format!("construction.contain{id}.interval"),
            NEIGHBOURHOOD,
            interval_ratio(m),
            Threshold::Below(1.0),
        ));
        let li = Lambda::new(m);
        let dom = li.domain();
        let scanned = scan::max_over_grid(&dom, &g2, |u| {
            neighbourhood_ratio(m, li.eval(u)).max(neighbourhood_ratio(m, LambdaInf.eval(u)))
        });
        out.push(Check::measured(
            format!("construction.contain{id}.grid"),
            NEIGHBOURHOOD,
            scanned.map(|g| g.value),
            Threshold::Below(1.0),
        ));
        let coarse = if config.quick { 21 } else { 41 };
        out.extend(
            extension_checks(
                m,
                0.5,
                GridSpec::new([coarse, coarse, 3]),
                &format!("construction.step{id}"),
            )
            .into_iter()
            .map(|mut c| {
                c.anchor = STEP.to_string();
                c
            }),
        );
    }

    Ok(VerificationReport {
        suite: format!("construction-{n}"),
        config: config.clone(),
        checks: out,
    })
}
