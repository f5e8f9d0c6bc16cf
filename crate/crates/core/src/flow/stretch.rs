use serde::{Deserialize, Serialize};

use crate::contact::{beta5, ContactPoint, Domain, GridSpec, Point5, Tangent5};
use crate::schedule::LambdaField;
use crate::zoo::{pi_embedding, sigma_partials};
use crate::{scan, Result};

/// A time-dependent family of maps `[0,1] x Domain<K> -> R^5`.
pub trait Isotopy<const K: usize>: Send + Sync {
    fn domain(&self) -> Domain<K>;

    fn at(&self, u: [f64; K], tau: f64) -> Point5;

    /// `d/dtau` of [`Isotopy::at`]; a central difference with step `1e-6`,
    /// one-sided at `tau = 0, 1`.
    fn velocity(&self, u: [f64; K], tau: f64) -> Tangent5 {
        let h = 1e-6;
        if tau - h < 0.0 {
            (self.at(u, tau + h) - self.at(u, tau)) * (1.0 / h)
        } else if tau + h > 1.0 {
            (self.at(u, tau) - self.at(u, tau - h)) * (1.0 / h)
        } else {
            (self.at(u, tau + h) - self.at(u, tau - h)) * (1.0 / (2.0 * h))
        }
    }
}

/// Closure-backed isotopy.
pub struct FnIsotopy<const K: usize, F> {
    pub domain: Domain<K>,
    pub f: F,
}

impl<const K: usize, F> Isotopy<K> for FnIsotopy<K, F>
where
    F: Fn([f64; K], f64) -> Point5 + Send + Sync,
{
    fn domain(&self) -> Domain<K> {
        self.domain
    }

    fn at(&self, u: [f64; K], tau: f64) -> Point5 {
        (self.f)(u, tau)
    }
}

/// `Gamma_tau(t, s, w) = Pi(t, s, w + lambda_tau(t, s) (w / w0 - w))` on
/// `[-1,1]^2 x [0, w0]`: the fibres of `Pi` are stretched from `[0, w0]` to
/// `[0, 1]` as `lambda` goes from 0 to 1.
#[derive(Debug, Clone)]
pub struct StretchIsotopy<L> {
    pub m: u32,
    pub w0: f64,
    pub schedule: L,
}

impl<L: LambdaField> StretchIsotopy<L> {
    pub fn new(m: u32, w0: f64, schedule: L) -> Self {
        assert!(w0 > 0.0 && w0 < 1.0, "w0 must lie in (0, 1)");
        Self { m, w0, schedule }
    }

    /// The stretched fibre coordinate.
    pub fn big_w(&self, t: f64, s: f64, w: f64, tau: f64) -> f64 {
        w + self.schedule.lambda(t, s, tau) * (w / self.w0 - w)
    }

    /// `1 + (1/w0 - 1) lambda`, the factor relating `dGamma/dw` to `dSigma/dW`.
    pub fn stretch_factor(&self, t: f64, s: f64, tau: f64) -> f64 {
        1.0 + (1.0 / self.w0 - 1.0) * self.schedule.lambda(t, s, tau)
    }

    /// `dGamma/dw` from the closed-form partials of the surface.
    pub fn partial_w(&self, t: f64, s: f64, w: f64, tau: f64) -> Tangent5 {
        let (_, sw) = sigma_partials(self.m, t, self.big_w(t, s, w, tau));
        sw.extend(0.0, 0.0) * self.stretch_factor(t, s, tau)
    }

    /// `dGamma/dt` with the fibre coordinate held fixed.
    pub fn partial_t_fixed_w(&self, t: f64, s: f64, w: f64, tau: f64) -> Tangent5 {
        let (st, _) = sigma_partials(self.m, t, self.big_w(t, s, w, tau));
        st.extend(0.0, 0.0)
    }
}

impl<L: LambdaField> Isotopy<3> for StretchIsotopy<L> {
    fn domain(&self) -> Domain<3> {
        Domain::new([-1.0, -1.0, 0.0], [1.0, 1.0, self.w0])
    }

    fn at(&self, u: [f64; 3], tau: f64) -> Point5 {
        let [t, s, w] = u;
        pi_embedding(self.m, t, s, self.big_w(t, s, w, tau))
    }
}

/// Closed-form `dGamma/dtau`:
/// `dlambda/dtau (w/w0 - w) ((c - s)/m, -(c + s)/m, (1 - W) cos(2 m^2 t)/m^2, 0, 0)`
/// with `c, s = cos, sin(m^2 t)`.
pub fn stretch_velocity<L: LambdaField>(
    iso: &StretchIsotopy<L>,
    t: f64,
    s: f64,
    w: f64,
    tau: f64,
) -> Tangent5 {
    let m = f64::from(iso.m);
    let th = m * m * t;
    let (sn, cs) = th.sin_cos();
    let k = iso.schedule.dlambda_dtau(t, s, tau) * (w / iso.w0 - w);
    let big_w = iso.big_w(t, s, w, tau);
    Point5::new(
        k * (cs - sn) / m,
        -k * (cs + sn) / m,
        k * (1.0 - big_w) * (2.0 * th).cos() / (m * m),
        0.0,
        0.0,
    )
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct BetaReport {
    /// `max |beta(v)|` with the closed-form velocity.
    pub closed_form: f64,
    /// `max |beta(v)|` with the finite-difference velocity.
    pub finite_difference: f64,
    /// `max |beta(v)|` on the `w = 0` slice.
    pub w_zero_slice: f64,
    /// `max |v_closed - v_fd|`.
    pub velocity_mismatch: f64,
}

fn taus_of(n: usize) -> Vec<f64> {
    (0..n).map(|j| (j as f64 + 0.5) / n as f64).collect()
}

pub fn verify_velocity_annihilated_by_beta<L: LambdaField>(
    iso: &StretchIsotopy<L>,
    grid: &GridSpec<3>,
    n_tau: usize,
) -> BetaReport {
    let dom = iso.domain();
    let taus = taus_of(n_tau);
    let rows = scan::map_collect(grid.len(), |i| {
        let u = grid.point(&dom, i);
        let [t, s, w] = u;
        let mut r = BetaReport::default();
        for &tau in &taus {
            let p = iso.at(u, tau);
            let vc = stretch_velocity(iso, t, s, w, tau);
            let vf = iso.velocity(u, tau);
            r.closed_form = r.closed_form.max(beta5(p, vc).abs());
            r.finite_difference = r.finite_difference.max(beta5(p, vf).abs());
            r.velocity_mismatch = r.velocity_mismatch.max((vc - vf).max_abs());
            let p0 = iso.at([t, s, 0.0], tau);
            r.w_zero_slice = r
                .w_zero_slice
                .max(beta5(p0, stretch_velocity(iso, t, s, 0.0, tau)).abs());
        }
        r
    });
    rows.into_iter()
        .fold(BetaReport::default(), |a, b| BetaReport {
            closed_form: a.closed_form.max(b.closed_form),
            finite_difference: a.finite_difference.max(b.finite_difference),
            w_zero_slice: a.w_zero_slice.max(b.w_zero_slice),
            velocity_mismatch: a.velocity_mismatch.max(b.velocity_mismatch),
        })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ObstructionReport {
    /// `max |(c - s)(d_x + y d_z) - (s + c) d_y - m / (1 + (1/w0 - 1) lambda) dGamma/dw|`
    /// using the closed-form `w`-partial.
    pub identity_closed_form: f64,
    /// The same with a central difference in `w`.
    pub identity_finite_difference: f64,
    /// `max |(c - s) dy(v) + (s + c) dx(v)|`, the combination that
    /// `dH(dGamma/dw) = 0` forces once `-H_y = dx(v)` and
    /// `H_x + y H_z = dy(v)`.
    pub compatibility: f64,
    /// `max |(c - s) dy(v) - (s + c) dx(v)|`, which equals
    /// `-2 k (c^2 - s^2) / m` for `v = k dSigma/dW` and so does not vanish.
    pub compatibility_as_printed: f64,
}

pub fn verify_obstruction_identity<L: LambdaField>(
    iso: &StretchIsotopy<L>,
    grid: &GridSpec<3>,
    n_tau: usize,
) -> Result<ObstructionReport> {
    let dom = iso.domain();
    let taus = taus_of(n_tau);
    let m = f64::from(iso.m);
    let rows = scan::map_collect(grid.len(), |i| {
        let u = grid.point(&dom, i);
        let [t, s, w] = u;
        let (sn, cs) = (m * m * t).sin_cos();
        let mut r = ObstructionReport::default();
        for &tau in &taus {
            let p = iso.at(u, tau);
            let lhs = Point5::new(cs - sn, -(sn + cs), (cs - sn) * p.y, 0.0, 0.0);
            let scale = m / iso.stretch_factor(t, s, tau);
            let gw = iso.partial_w(t, s, w, tau);
            let h = 1e-6;
            let (lo, hi) = ((w - h).max(0.0), (w + h).min(iso.w0));
            let gw_fd = (iso.at([t, s, hi], tau) - iso.at([t, s, lo], tau)) * (1.0 / (hi - lo));
            r.identity_closed_form = r.identity_closed_form.max((lhs - gw * scale).max_abs());
            r.identity_finite_difference = r
                .identity_finite_difference
                .max((lhs - gw_fd * scale).max_abs());
            let v = stretch_velocity(iso, t, s, w, tau);
            r.compatibility = r
                .compatibility
                .max(((cs - sn) * v.y + (sn + cs) * v.x).abs());
            r.compatibility_as_printed = r
                .compatibility_as_printed
                .max(((cs - sn) * v.y - (sn + cs) * v.x).abs());
        }
        r
    });
    let out = rows
        .into_iter()
        .fold(ObstructionReport::default(), |a, b| ObstructionReport {
            identity_closed_form: a.identity_closed_form.max(b.identity_closed_form),
            identity_finite_difference: a
                .identity_finite_difference
                .max(b.identity_finite_difference),
            compatibility: a.compatibility.max(b.compatibility),
            compatibility_as_printed: a.compatibility_as_printed.max(b.compatibility_as_printed),
        });
    if ![
        out.identity_closed_form,
        out.identity_finite_difference,
        out.compatibility,
    ]
    .iter()
    .all(|v| v.is_finite())
    {
        return Err(crate::Error::NonFinite { params: vec![] });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::{build_lambda_schedule, Frozen, UniformRamp};

    fn iso() -> StretchIsotopy<crate::schedule::LambdaSchedule> {
        StretchIsotopy::new(8, 0.5, build_lambda_schedule(0.5).unwrap())
    }

    #[test]
    fn endpoints_of_the_stretch() {
        let it = StretchIsotopy::new(8, 0.4, UniformRamp);
        let u = [0.3, -0.2, 0.4];
        assert_eq!(it.at(u, 0.0), pi_embedding(8, 0.3, -0.2, 0.4));
        let end = it.at(u, 1.0);
        assert!(end.dist(&pi_embedding(8, 0.3, -0.2, 1.0)) < 1e-15);
    }

    #[test]
    fn closed_form_velocity_matches_differences() {
        let it = iso();
        let g = GridSpec::new([9, 7, 5]);
        let r = verify_velocity_annihilated_by_beta(&it, &g, 8);
        assert!(r.velocity_mismatch < 1e-6, "{r:?}");
        assert_eq!(r.w_zero_slice, 0.0);
        assert!(r.closed_form < 1e-12, "{r:?}");
        assert!(r.finite_difference < 1e-6, "{r:?}");
    }

    #[test]
    fn frozen_schedule_has_zero_velocity() {
        let it = StretchIsotopy::new(8, 0.5, Frozen(0.3));
        assert_eq!(stretch_velocity(&it, 0.2, 0.1, 0.3, 0.5), Point5::default());
    }

    #[test]
    fn obstruction_identity() {
        let it = iso();
        let r = verify_obstruction_identity(&it, &GridSpec::new([11, 5, 5]), 6).unwrap();
        assert!(r.identity_closed_form < 1e-12, "{r:?}");
        assert!(r.identity_finite_difference < 1e-6, "{r:?}");
        assert!(r.compatibility < 1e-12, "{r:?}");
        assert!(r.compatibility_as_printed > 1e-3, "{r:?}");
    }
}
