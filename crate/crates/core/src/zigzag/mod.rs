//! Legendrian approximation by front zig-zags.
//!
//! A front `(x(t), z(t))` with slope field `y(t)` is sampled at base points
//! `P_i`; each gap is replaced by the path `P_i -> Q_i^+ -> Q_{i+1}^- -> P_{i+1}`
//! with `Q^± = P ± d (1, y)`. The polygon is smoothed leg by leg with an
//! [`Interpolant`], reparametrized so the velocity vanishes at every turning
//! vertex (which makes those vertices semicubical cusps), and lifted to a
//! Legendrian curve by `y = dz/dx`.

mod approx;
mod family;
mod front;
mod interp;

pub use approx::{approximate_curve, Approximation, FamilyApproximation};
pub use family::{lift_family_to_r5, FamilyLift};
pub use front::{
    lift_to_legendrian, smooth_front, FnFront, FrontCusp, FrontLeg, FrontPath, LegendrianLift,
    PlanarFront, StyleChoice,
};
pub use interp::{interpolate_leg, model_f, model_f_dt, Interpolant, LegStyle};

use serde::{Deserialize, Serialize};

use crate::contact::{ParamMap, Point3};
use crate::{Error, Result};

/// A sampled front point with its target slope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontSample {
    pub t: f64,
    pub x: f64,
    pub z: f64,
    pub y: f64,
}

impl FrontSample {
    pub fn from_point(t: f64, p: Point3) -> Self {
        Self {
            t,
            x: p.x,
            z: p.z,
            y: p.y,
        }
    }

    pub fn xz(&self) -> [f64; 2] {
        [self.x, self.z]
    }
}

/// Samples `curve` at `n` equispaced parameters including both ends.
pub fn sample_front<M>(curve: &M, n: usize) -> Vec<FrontSample>
where
    M: ParamMap<1, Point = Point3>,
{
    let dom = curve.domain();
    let (lo, hi) = (dom.lo[0], dom.hi[0]);
    (0..n)
        .map(|i| {
            let t = if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            };
            FrontSample::from_point(t, curve.eval([t]))
        })
        .collect()
}

/// Base points, offsets and per-gap slopes `(m1, m2, m3)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZigZagPlan {
    pub base: Vec<FrontSample>,
    pub d: f64,
    pub q_plus: Vec<[f64; 2]>,
    pub q_minus: Vec<[f64; 2]>,
    pub slopes: Vec<[f64; 3]>,
}

/// Norms of the offset legs under the two conventions `d` and `d sqrt(1 + y^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LegNormReport {
    /// `max | |P Q^±| / d - 1 |`.
    pub rel_dev_plain: f64,
    /// `max | |P Q^±| / (d sqrt(1 + y^2)) - 1 |`.
    pub rel_dev_slope: f64,
    /// `max | |Q_i^+ Q_{i+1}^-| / (2d) - 1 |` over gaps.
    pub rel_dev_middle: f64,
}

/// Builds the zig-zag plan for `samples` (sorted by `t`) with offset `d`.
pub fn plan_zigzag(samples: &[FrontSample], d: f64) -> Result<ZigZagPlan> {
    if samples.len() < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "offset d = {d} must be positive"
        )));
    }
    if samples.windows(2).any(|w| w[1].t <= w[0].t) {
        return Err(Error::InvalidArgument(
            "samples must be strictly increasing in t".into(),
        ));
    }
    let q_plus: Vec<[f64; 2]> = samples.iter().map(|s| [s.x + d, s.z + d * s.y]).collect();
    let q_minus: Vec<[f64; 2]> = samples.iter().map(|s| [s.x - d, s.z - d * s.y]).collect();
    let mut slopes = Vec::with_capacity(samples.len() - 1);
    for (i, w) in samples.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let gap = (b.x - a.x) - 2.0 * d;
        if gap.abs() < 1e-12 * d.max(1e-300) {
            return Err(Error::DegenerateLeg { index: i, gap });
        }
        let m2 = ((b.z - a.z) - d * (a.y + b.y)) / gap;
        slopes.push([a.y, m2, b.y]);
    }
    Ok(ZigZagPlan {
        base: samples.to_vec(),
        d,
        q_plus,
        q_minus,
        slopes,
    })
}

impl ZigZagPlan {
    pub fn gaps(&self) -> usize {
        self.base.len() - 1
    }

    /// Vertices `P_0, Q_0^+, Q_1^-, P_1, Q_1^+, ...` in path order.
    pub fn vertices(&self) -> Vec<[f64; 2]> {
        let mut out = vec![self.base[0].xz()];
        for i in 0..self.gaps() {
            out.push(self.q_plus[i]);
            out.push(self.q_minus[i + 1]);
            out.push(self.base[i + 1].xz());
        }
        out
    }

    pub fn leg_norms(&self) -> LegNormReport {
        let mut plain = 0.0f64;
        let mut slope = 0.0f64;
        for (i, s) in self.base.iter().enumerate() {
            for q in [self.q_plus[i], self.q_minus[i]] {
                let n = (q[0] - s.x).hypot(q[1] - s.z);
                plain = plain.max((n / self.d - 1.0).abs());
                slope = slope.max((n / (self.d * (1.0 + s.y * s.y).sqrt()) - 1.0).abs());
            }
        }
        let mut middle = 0.0f64;
        for i in 0..self.gaps() {
            let (a, b) = (self.q_plus[i], self.q_minus[i + 1]);
            let n = (b[0] - a[0]).hypot(b[1] - a[1]);
            middle = middle.max((n / (2.0 * self.d) - 1.0).abs());
        }
        LegNormReport {
            rel_dev_plain: plain,
            rel_dev_slope: slope,
            rel_dev_middle: middle,
        }
    }
}
