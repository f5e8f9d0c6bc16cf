use serde::{Deserialize, Serialize};

use super::interp::Interpolant;
use super::ZigZagPlan;
use crate::contact::{DerivativeMode, Domain, ParamMap, Point3};
use crate::scan;
use crate::zoo::CuspSide;
use crate::{Error, Result};

/// A planar front `t -> (x(t), z(t))` with velocity access.
pub trait PlanarFront: Send + Sync {
    fn interval(&self) -> (f64, f64);

    fn point(&self, t: f64) -> [f64; 2];

    fn velocity(&self, t: f64) -> [f64; 2];

    /// `dz/dx` where defined; `None` at stationary points.
    fn slope(&self, t: f64) -> Option<f64> {
        let v = self.velocity(t);
        (v[0] != 0.0 && v[0].abs() > 1e-13 * v[1].abs()).then(|| v[1] / v[0])
    }
}

/// Closure-backed front.
pub struct FnFront {
    interval: (f64, f64),
    point: Box<dyn Fn(f64) -> [f64; 2] + Send + Sync>,
    velocity: Box<dyn Fn(f64) -> [f64; 2] + Send + Sync>,
}

impl FnFront {
    pub fn new(
        interval: (f64, f64),
        point: impl Fn(f64) -> [f64; 2] + Send + Sync + 'static,
        velocity: impl Fn(f64) -> [f64; 2] + Send + Sync + 'static,
    ) -> Self {
        Self {
            interval,
            point: Box::new(point),
            velocity: Box::new(velocity),
        }
    }

    /// The `(x, z)` projection of a curve in `R^3`.
    pub fn project<M>(curve: M) -> Self
    where
        M: ParamMap<1, Point = Point3> + 'static,
    {
        let dom = curve.domain();
        let curve = std::sync::Arc::new(curve);
        let c2 = curve.clone();
        Self::new(
            (dom.lo[0], dom.hi[0]),
            move |t| {
                let p = curve.eval([t]);
                [p.x, p.z]
            },
            move |t| {
                let v = c2.partial([t], 0);
                [v.x, v.z]
            },
        )
    }
}

impl PlanarFront for FnFront {
    fn interval(&self) -> (f64, f64) {
        self.interval
    }

    fn point(&self, t: f64) -> [f64; 2] {
        (self.point)(t)
    }

    fn velocity(&self, t: f64) -> [f64; 2] {
        (self.velocity)(t)
    }
}

/// One smoothed leg occupying `[t0, t1]` of the global parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontLeg {
    pub t0: f64,
    pub t1: f64,
    pub itp: Interpolant,
    /// Zero velocity at the start (a cusp there).
    pub flat_start: bool,
    pub flat_end: bool,
}

impl FrontLeg {
    /// Leg-local parameter and its derivative at `t`.
    fn reparam(&self, t: f64) -> (f64, f64) {
        let len = self.t1 - self.t0;
        let u = ((t - self.t0) / len).clamp(0.0, 1.0);
        let (v, dv) = match (self.flat_start, self.flat_end) {
            (true, true) => (u * u * (3.0 - 2.0 * u), 6.0 * u * (1.0 - u)),
            (true, false) => (u * u, 2.0 * u),
            (false, true) => (u * (2.0 - u), 2.0 - 2.0 * u),
            (false, false) => (u, 1.0),
        };
        (v, dv / len)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontCusp {
    pub t: f64,
    pub x: f64,
    pub z: f64,
    pub side: CuspSide,
}

/// A piecewise-smooth cusped front built from a [`ZigZagPlan`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontPath {
    pub vertices: Vec<[f64; 2]>,
    pub legs: Vec<FrontLeg>,
    pub cusps: Vec<FrontCusp>,
}

impl FrontPath {
    fn leg_at(&self, t: f64) -> &FrontLeg {
        let i = self.legs.partition_point(|l| l.t1 < t);
        &self.legs[i.min(self.legs.len() - 1)]
    }

    pub fn cusp_count(&self) -> usize {
        self.cusps.len()
    }

    /// Max distance from a leg sample to its chord, over all legs.
    pub fn polygon_deviation(&self, samples_per_leg: usize) -> f64 {
        let mut worst = 0.0f64;
        for leg in &self.legs {
            let (p, q) = (leg.itp.p, leg.itp.q);
            for j in 0..=samples_per_leg {
                let a = leg.itp.point(j as f64 / samples_per_leg as f64);
                worst = worst.max(point_segment_distance(a, p, q));
            }
        }
        worst
    }

    /// Range of `dz/dx` over leg samples.
    pub fn slope_range(&self, samples_per_leg: usize) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for leg in &self.legs {
            for j in 0..=samples_per_leg {
                if let Ok(k) = leg.itp.slope(j as f64 / samples_per_leg as f64) {
                    lo = lo.min(k);
                    hi = hi.max(k);
                }
            }
        }
        (lo, hi)
    }
}

fn point_segment_distance(a: [f64; 2], p: [f64; 2], q: [f64; 2]) -> f64 {
    let (dx, dz) = (q[0] - p[0], q[1] - p[1]);
    let l2 = dx * dx + dz * dz;
    let s = if l2 == 0.0 {
        0.0
    } else {
        (((a[0] - p[0]) * dx + (a[1] - p[1]) * dz) / l2).clamp(0.0, 1.0)
    };
    (a[0] - p[0] - s * dx).hypot(a[1] - p[1] - s * dz)
}

impl PlanarFront for FrontPath {
    fn interval(&self) -> (f64, f64) {
        (self.legs[0].t0, self.legs[self.legs.len() - 1].t1)
    }

    fn point(&self, t: f64) -> [f64; 2] {
        let leg = self.leg_at(t);
        leg.itp.point(leg.reparam(t).0)
    }

    fn velocity(&self, t: f64) -> [f64; 2] {
        let leg = self.leg_at(t);
        let (s, ds) = leg.reparam(t);
        let v = leg.itp.velocity(s);
        [v[0] * ds, v[1] * ds]
    }

    fn slope(&self, t: f64) -> Option<f64> {
        let leg = self.leg_at(t);
        leg.itp.slope(leg.reparam(t).0).ok()
    }
}

/// Which interpolant each leg uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StyleChoice {
    Rotated,
    Sheared,
    /// Per leg, whichever x-monotone style keeps `dz/dx` closest to the
    /// endpoint slope range; rotated on ties.
    Auto,
}

const MONOTONE_SAMPLES: usize = 256;

fn build_leg(
    p: [f64; 2],
    q: [f64; 2],
    kp: f64,
    kq: f64,
    choice: StyleChoice,
) -> Result<Interpolant> {
    match choice {
        StyleChoice::Sheared => Interpolant::sheared(p, q, kp, kq),
        StyleChoice::Rotated => {
            let itp = Interpolant::rotated(p, q, kp, kq)?;
            if itp.is_x_monotone(MONOTONE_SAMPLES) {
                Ok(itp)
            } else {
                let t = (0..=MONOTONE_SAMPLES)
                    .map(|j| j as f64 / MONOTONE_SAMPLES as f64)
                    .find(|&t| itp.velocity(t)[0] * itp.velocity(0.5)[0] <= 0.0)
                    .unwrap_or(0.5);
                Err(Error::VerticalTangency { t })
            }
        }
        StyleChoice::Auto => {
            let (lo, hi) = (kp.min(kq), kp.max(kq));
            let excess = |itp: &Interpolant| {
                (0..=MONOTONE_SAMPLES)
                    .map(|j| match itp.slope(j as f64 / MONOTONE_SAMPLES as f64) {
                        Ok(k) => (lo - k).max(k - hi).max(0.0),
                        Err(_) => f64::INFINITY,
                    })
                    .fold(0.0, f64::max)
            };
            let rot = Interpolant::rotated(p, q, kp, kq)
                .ok()
                .filter(|itp| itp.is_x_monotone(MONOTONE_SAMPLES));
            let shr = Interpolant::sheared(p, q, kp, kq);
            match (rot, shr) {
                (Some(r), Ok(s)) => Ok(if excess(&s) < excess(&r) { s } else { r }),
                (Some(r), Err(_)) => Ok(r),
                (None, s) => s,
            }
        }
    }
}

/// Smooths a zig-zag plan into a cusped front.
///
/// Each gap `[t_i, t_{i+1}]` is split `1/4, 1/2, 1/4` between the three legs.
/// Junctions where `dx/dt` changes sign become cusps: the adjoining legs are
/// reparametrized to stop there.
pub fn smooth_front(plan: &ZigZagPlan, choice: StyleChoice) -> Result<FrontPath> {
    let per_gap: Vec<Result<[FrontLeg; 3]>> = scan::map_collect(plan.gaps(), |i| {
        let (a, b) = (&plan.base[i], &plan.base[i + 1]);
        let [m1, _, m3] = plan.slopes[i];
        let (qp, qm) = (plan.q_plus[i], plan.q_minus[i + 1]);
        let dt = b.t - a.t;
        let times = [a.t, a.t + 0.25 * dt, a.t + 0.75 * dt, b.t];
        let itps = [
            build_leg(a.xz(), qp, m1, m1, choice)?,
            build_leg(qp, qm, m1, m3, choice)?,
            build_leg(qm, b.xz(), m3, m3, choice)?,
        ];
        Ok(std::array::from_fn(|k| FrontLeg {
            t0: times[k],
            t1: times[k + 1],
            itp: itps[k],
            flat_start: false,
            flat_end: false,
        }))
    });
    let mut legs = Vec::with_capacity(3 * plan.gaps());
    for g in per_gap {
        legs.extend(g?);
    }
    let mut cusps = Vec::new();
    for k in 0..legs.len().saturating_sub(1) {
        let out = legs[k].itp.velocity(1.0)[0];
        let inn = legs[k + 1].itp.velocity(0.0)[0];
        if out * inn < 0.0 {
            legs[k].flat_end = true;
            legs[k + 1].flat_start = true;
            let v = legs[k].itp.q;
            cusps.push(FrontCusp {
                t: legs[k].t1,
                x: v[0],
                z: v[1],
                side: if out > 0.0 {
                    CuspSide::Right
                } else {
                    CuspSide::Left
                },
            });
        }
    }
    Ok(FrontPath {
        vertices: plan.vertices(),
        legs,
        cusps,
    })
}

/// Legendrian curve `(x, dz/dx, z)` over a front.
#[derive(Debug, Clone)]
pub struct LegendrianLift<F> {
    pub front: F,
}

impl<F: PlanarFront> LegendrianLift<F> {
    /// Slope at `t`, continued across stationary points by the mean of the
    /// nearest defined one-sided values.
    pub fn y(&self, t: f64) -> f64 {
        if let Some(k) = self.front.slope(t) {
            return k;
        }
        let (lo, hi) = self.front.interval();
        let mut h = 1e-9 * (hi - lo);
        for _ in 0..20 {
            let l = (t - h >= lo).then(|| self.front.slope(t - h)).flatten();
            let r = (t + h <= hi).then(|| self.front.slope(t + h)).flatten();
            match (l, r) {
                (Some(a), Some(b)) => return 0.5 * (a + b),
                (Some(a), None) | (None, Some(a)) => return a,
                _ => h *= 4.0,
            }
        }
        f64::NAN
    }
}

impl<F: PlanarFront> ParamMap<1> for LegendrianLift<F> {
    type Point = Point3;

    fn domain(&self) -> Domain<1> {
        let (lo, hi) = self.front.interval();
        Domain::new([lo], [hi])
    }

    fn eval(&self, u: [f64; 1]) -> Point3 {
        let p = self.front.point(u[0]);
        Point3::new(p[0], self.y(u[0]), p[1])
    }

    /// `x'` and `z'` are exact; `y'` is a difference quotient.
    fn partial(&self, u: [f64; 1], _axis: usize) -> Point3 {
        let t = u[0];
        let v = self.front.velocity(t);
        let (lo, hi) = self.front.interval();
        let h = 1e-7 * (hi - lo);
        let (a, b) = ((t - h).max(lo), (t + h).min(hi));
        let dy = (self.y(b) - self.y(a)) / (b - a);
        Point3::new(v[0], dy, v[1])
    }

    fn derivative_mode(&self) -> DerivativeMode {
        DerivativeMode::ClosedForm
    }
}

/// Lifts `front` by `y = dz/dx`, scanning `samples` parameters for vertical
/// tangencies (`x' = 0` with `z' != 0`).
pub fn lift_to_legendrian<F: PlanarFront>(front: F, samples: usize) -> Result<LegendrianLift<F>> {
    let (lo, hi) = front.interval();
    let n = samples.max(2);
    let vel: Vec<[f64; 2]> = scan::map_collect(n, |j| {
        front.velocity(lo + (hi - lo) * j as f64 / (n - 1) as f64)
    });
    let vmax = vel.iter().map(|v| v[0].hypot(v[1])).fold(0.0, f64::max);
    for (j, v) in vel.iter().enumerate() {
        if v[1].abs() > 1e-9 * vmax && v[0].abs() <= 1e-10 * v[1].abs() {
            return Err(Error::VerticalTangency {
                t: lo + (hi - lo) * j as f64 / (n - 1) as f64,
            });
        }
    }
    Ok(LegendrianLift { front })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::{legendrian_defect, GridSpec};
    use crate::zigzag::{plan_zigzag, FrontSample};
    use crate::zoo::{gamma_m, Gamma};

    #[test]
    fn flat_plan_is_straight() {
        let s = [
            FrontSample {
                t: 0.0,
                x: 0.0,
                z: 0.0,
                y: 0.0,
            },
            FrontSample {
                t: 1.0,
                x: 1.0,
                z: 0.0,
                y: 0.0,
            },
        ];
        let plan = plan_zigzag(&s, 0.1).unwrap();
        let f = smooth_front(&plan, StyleChoice::Rotated).unwrap();
        assert_eq!(f.cusp_count(), 0);
        for j in 0..=100 {
            let p = f.point(j as f64 / 100.0);
            assert_eq!(p[1], 0.0);
        }
        assert_eq!(f.point(1.0), [1.0, 0.0]);
    }

    #[test]
    fn lift_of_simple_fronts() {
        let flat = FnFront::new((-1.0, 1.0), |t| [t, 0.0], |_| [1.0, 0.0]);
        let l = lift_to_legendrian(flat, 100).unwrap();
        assert_eq!(l.eval([0.3]).y, 0.0);
        let para = FnFront::new((-1.0, 1.0), |t| [t, 0.5 * t * t], |t| [1.0, t]);
        let l = lift_to_legendrian(para, 100).unwrap();
        for k in 0..=20 {
            let t = -1.0 + k as f64 / 10.0;
            assert!((l.eval([t]).y - t).abs() < 1e-15);
        }
        let vert = FnFront::new((-1.0, 1.0), |t| [t * t, t], |t| [2.0 * t, 1.0]);
        assert!(matches!(
            lift_to_legendrian(vert, 101),
            Err(Error::VerticalTangency { .. })
        ));
    }

    #[test]
    fn lift_of_gamma_front_recovers_y() {
        let l = lift_to_legendrian(FnFront::project(Gamma::new(2)), 1000).unwrap();
        for k in 0..=2000 {
            let t = -1.0 + k as f64 / 1000.0;
            let p = l.eval([t]);
            let g = gamma_m(2, t);
            assert!((p.y - g.y).abs() < 1e-8, "t = {t}");
            assert_eq!((p.x, p.z), (g.x, g.z));
        }
        assert!(legendrian_defect(&l, &GridSpec::uniform(10_000)).unwrap() < 1e-9);
    }

    #[test]
    fn vertical_zigzag_has_matching_cusp_slopes() {
        let samples: Vec<FrontSample> = (0..11)
            .map(|i| {
                let t = -1.0 + i as f64 / 5.0;
                FrontSample {
                    t,
                    x: 0.0,
                    z: t,
                    y: 0.0,
                }
            })
            .collect();
        let plan = plan_zigzag(&samples, 0.05).unwrap();
        let f = smooth_front(&plan, StyleChoice::Auto).unwrap();
        assert_eq!(f.cusp_count(), 2 * 10);
        let h = 1e-5;
        for c in &f.cusps {
            let (a, b, p) = (f.point(c.t - h), f.point(c.t + h), [c.x, c.z]);
            let left = (p[1] - a[1]) / (p[0] - a[0]);
            let right = (b[1] - p[1]) / (b[0] - p[0]);
            assert!((left - right).abs() < 1e-6, "{left} vs {right}");
            assert_eq!(f.velocity(c.t), [0.0, 0.0]);
        }
        assert!(f.polygon_deviation(64) <= plan.d);
        let lift = lift_to_legendrian(f.clone(), 10_000).unwrap();
        assert!(legendrian_defect(&lift, &GridSpec::uniform(10_000)).unwrap() <= 1e-9);
        for k in 0..=500 {
            let t = -1.0 + k as f64 / 250.0;
            let p = lift.eval([t]);
            assert_eq!([p.x, p.z], f.point(t));
        }
    }

    #[test]
    fn forced_rotated_style_reports_vertical_leg() {
        let samples = [
            FrontSample {
                t: 0.0,
                x: 0.0,
                z: 0.0,
                y: 0.0,
            },
            FrontSample {
                t: 1.0,
                x: 0.0,
                z: 0.04,
                y: 0.0,
            },
        ];
        let plan = plan_zigzag(&samples, 0.01).unwrap();
        assert!(matches!(
            smooth_front(&plan, StyleChoice::Rotated),
            Err(Error::VerticalTangency { .. })
        ));
        assert!(smooth_front(&plan, StyleChoice::Sheared).is_ok());
    }
}
