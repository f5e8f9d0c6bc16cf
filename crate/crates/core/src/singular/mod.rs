//! Model singularities.
//!
//! `psi_delta(u) = (u^3 - delta u, 9/4 u^5 - 5 delta/2 u^3 + 5 delta^2/4 u)` is
//! a plane front: embedded for `delta <= 0`, a zig-zag with two cusps at
//! `u = +-sqrt(delta/3)` for `delta > 0`. Its slope is
//! `dz/dx = 5/4 (3u^2 - delta)`, and the Legendrian lift with that slope is the
//! zig-zag birth model. Wrinkles and embryos are families of `psi_delta` over a
//! parameter ball; loose charts are the boxes around the cusp pairs of
//! `gamma_m`.

mod chart;
mod wrinkle;

pub use chart::{
    admissible_indices, chart_arc, cusp_pairs_in_charts, loose_chart_boxes, loose_chart_rescale,
    loose_chart_unscale, pullback_ratio, z_index_value, ChartArc, LooseChartReport, LooseChartSpec,
};
pub use wrinkle::{
    embryo_family, inside_out_wrinkle, numerical_rank, trace_singular_locus, wrinkle, LocusTrace,
    WrinkleMap, WrinkleVariant,
};

use crate::contact::{Domain, ParamMap, Point3};
use crate::schedule::profile;

pub fn psi_delta(delta: f64, u: f64) -> (f64, f64) {
    let u2 = u * u;
    (
        u * (u2 - delta),
        u * (2.25 * u2 * u2 - 2.5 * delta * u2 + 1.25 * delta * delta),
    )
}

/// `d psi_delta / du`. The second component is `5/4 (3u^2 - delta)^2`.
pub fn psi_delta_du(delta: f64, u: f64) -> (f64, f64) {
    let u2 = u * u;
    (
        3.0 * u2 - delta,
        11.25 * u2 * u2 - 7.5 * delta * u2 + 1.25 * delta * delta,
    )
}

/// `d psi_delta / d delta`.
pub fn psi_delta_ddelta(delta: f64, u: f64) -> (f64, f64) {
    (-u, u * (-2.5 * u * u + 2.5 * delta))
}

/// Closed-form singular parameters: `+-sqrt(delta/3)` for `delta > 0`,
/// `0` for `delta = 0` and none otherwise.
pub fn psi_singular_points(delta: f64) -> Vec<f64> {
    if delta > 0.0 {
        let r = (delta / 3.0).sqrt();
        vec![-r, r]
    } else if delta == 0.0 {
        vec![0.0]
    } else {
        Vec::new()
    }
}

/// Singular parameters in `[lo, hi]` located by sign changes of `dx/du` on
/// `samples` cells, refined by bisection.
pub fn find_psi_singular_points(delta: f64, lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    let f = |u: f64| psi_delta_du(delta, u).0;
    let mut out = Vec::new();
    let step = (hi - lo) / samples as f64;
    for i in 0..samples {
        let (mut a, mut b) = (lo + i as f64 * step, lo + (i + 1) as f64 * step);
        let (mut fa, fb) = (f(a), f(b));
        if fa == 0.0 {
            out.push(a);
            continue;
        }
        if fa * fb >= 0.0 {
            continue;
        }
        for _ in 0..200 {
            let c = 0.5 * (a + b);
            let fc = f(c);
            if fc == 0.0 || (b - a) < 1e-16 {
                a = c;
                b = c;
                break;
            }
            if fa * fc < 0.0 {
                b = c;
            } else {
                a = c;
                fa = fc;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

/// `psi_delta` multiplied by a cutoff that is 1 on `|u| <= 1` and 0 on
/// `|u| >= 2`.
pub fn psi_delta_compact(delta: f64, u: f64) -> (f64, f64) {
    let c = 1.0 - profile(u.abs() - 1.0);
    let (a, b) = psi_delta(delta, u);
    (c * a, c * b)
}

/// Legendrian lift `(x, y, z)` of the front `psi_delta` on `[-r, r]`, with
/// `y = 15/4 u^2 - 5 delta / 4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiCurve {
    pub delta: f64,
    pub half_width: f64,
}

impl PsiCurve {
    pub fn new(delta: f64) -> Self {
        Self {
            delta,
            half_width: 1.0,
        }
    }
}

impl ParamMap<1> for PsiCurve {
    type Point = Point3;

    fn domain(&self) -> Domain<1> {
        Domain::new([-self.half_width], [self.half_width])
    }

    fn eval(&self, u: [f64; 1]) -> Point3 {
        zigzag_birth_model(u[0], self.delta)
    }

    fn partial(&self, u: [f64; 1], _axis: usize) -> Point3 {
        let t = u[0];
        let (dx, dz) = psi_delta_du(self.delta, t);
        Point3::new(dx, 7.5 * t, dz)
    }

    fn derivative_mode(&self) -> crate::contact::DerivativeMode {
        crate::contact::DerivativeMode::ClosedForm
    }
}

/// `(t^3 - tau t, 15/4 (t^2 - tau/3), 9/4 t^5 - 5 tau/2 t^3 + 5 tau^2/4 t)`.
pub fn zigzag_birth_model(t: f64, tau: f64) -> Point3 {
    let (x, z) = psi_delta(tau, t);
    Point3::new(x, 3.75 * (t * t - tau / 3.0), z)
}

/// `z' - y x'` of the birth model computed term by term (no cancellation
/// applied), for measuring round-off.
pub fn birth_model_defect(t: f64, tau: f64) -> f64 {
    let (dx, dz) = psi_delta_du(tau, t);
    dz - 3.75 * (t * t - tau / 3.0) * dx
}
