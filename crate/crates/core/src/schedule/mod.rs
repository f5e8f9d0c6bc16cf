//! Support-splitting schedules.
//!
//! [`build_lambda_schedule`] produces a field `lambda_tau(t, s)` rising from 0
//! to 1 in four quarters, each moving only a disjoint union of small squares.
//! [`region_family`] builds the product regions used to confine isotopies on
//! the two half-intervals, and [`ibp_check`] certifies an isotopy as an
//! isotopy by parts.

mod ibp;
mod lambda;
mod region;

pub use ibp::{ibp_check, IbpCertificate, StepLambda, StepOneIsotopy};
pub use lambda::{build_lambda_schedule, LambdaSchedule, QuarterSupport, ScheduleReport};
pub use region::{make_s_family, region_family, RegionComponent, RegionFamily5};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// `3x^2 - 2x^3` on `[0, 1]`, clamped outside.
pub fn smoothstep(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x * x * (3.0 - 2.0 * x)
}

fn smoothstep_d(x: f64) -> f64 {
    if (0.0..=1.0).contains(&x) {
        6.0 * x * (1.0 - x)
    } else {
        0.0
    }
}

/// `smoothstep(smoothstep(x))`: monotone, value 0/1 and vanishing first and
/// second derivatives at both ends.
pub fn profile(x: f64) -> f64 {
    smoothstep(smoothstep(x))
}

pub fn profile_d(x: f64) -> f64 {
    smoothstep_d(smoothstep(x)) * smoothstep_d(x)
}

/// A time-dependent field `lambda_tau(t, s)`.
pub trait LambdaField: Send + Sync {
    fn lambda(&self, t: f64, s: f64, tau: f64) -> f64;

    fn dlambda_dtau(&self, t: f64, s: f64, tau: f64) -> f64;

    /// `(d/dt, d/ds)` of `lambda`; central differences unless overridden.
    fn grad_ts(&self, t: f64, s: f64, tau: f64) -> (f64, f64) {
        let h = 1e-6;
        (
            (self.lambda(t + h, s, tau) - self.lambda(t - h, s, tau)) / (2.0 * h),
            (self.lambda(t, s + h, tau) - self.lambda(t, s - h, tau)) / (2.0 * h),
        )
    }
}

/// `lambda_tau = profile(tau)` everywhere.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformRamp;

impl LambdaField for UniformRamp {
    fn lambda(&self, _t: f64, _s: f64, tau: f64) -> f64 {
        profile(tau)
    }

    fn dlambda_dtau(&self, _t: f64, _s: f64, tau: f64) -> f64 {
        profile_d(tau)
    }

    fn grad_ts(&self, _t: f64, _s: f64, _tau: f64) -> (f64, f64) {
        (0.0, 0.0)
    }
}

/// `lambda_tau = value` for all `tau`.
#[derive(Debug, Clone, Copy)]
pub struct Frozen(pub f64);

impl LambdaField for Frozen {
    fn lambda(&self, _t: f64, _s: f64, _tau: f64) -> f64 {
        self.0
    }

    fn dlambda_dtau(&self, _t: f64, _s: f64, _tau: f64) -> f64 {
        0.0
    }

    fn grad_ts(&self, _t: f64, _s: f64, _tau: f64) -> (f64, f64) {
        (0.0, 0.0)
    }
}

/// A finite union of disjoint intervals in `[-1, 1]`, sorted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalFamily {
    intervals: Vec<(f64, f64)>,
}

impl IntervalFamily {
    pub fn new(mut intervals: Vec<(f64, f64)>) -> Result<Self> {
        intervals.retain(|(a, b)| b > a);
        intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
        for w in intervals.windows(2) {
            if w[1].0 < w[0].1 {
                return Err(Error::IntervalConstraint(format!(
                    "overlapping intervals {:?} and {:?}",
                    w[0], w[1]
                )));
            }
        }
        if intervals.iter().any(|(a, b)| *a < -1.0 || *b > 1.0) {
            return Err(Error::IntervalConstraint("interval outside [-1, 1]".into()));
        }
        Ok(Self { intervals })
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| t > a && t < b)
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn max_len(&self) -> f64 {
        self.intervals
            .iter()
            .map(|(a, b)| b - a)
            .fold(0.0, f64::max)
    }

    pub fn min_len(&self) -> f64 {
        self.intervals
            .iter()
            .map(|(a, b)| b - a)
            .fold(f64::INFINITY, f64::min)
    }

    /// Components of `[-1, 1]` minus the union.
    pub fn complement(&self) -> IntervalFamily {
        let mut out = Vec::new();
        let mut cur = -1.0;
        for &(a, b) in &self.intervals {
            if a > cur {
                out.push((cur, a));
            }
            cur = cur.max(b);
        }
        if cur < 1.0 {
            out.push((cur, 1.0));
        }
        IntervalFamily { intervals: out }
    }

    /// Union with a disjoint family.
    pub fn union(&self, other: &IntervalFamily) -> Result<IntervalFamily> {
        let mut v = self.intervals.clone();
        v.extend_from_slice(&other.intervals);
        IntervalFamily::new(v)
    }

    pub fn is_disjoint_from(&self, other: &IntervalFamily) -> bool {
        self.intervals
            .iter()
            .all(|&(a, b)| other.intervals.iter().all(|&(c, d)| b <= c || d <= a))
    }
}

/// Alternating `A, gap, B, gap, ...` blocks of width `eps / (4 sqrt 2)`
/// starting at `-1`.
///
/// `A`, `B` have components of that width and their complements have
/// components of three widths, all below `eps / sqrt 2`.
pub fn make_split_family(eps: f64) -> Result<(IntervalFamily, IntervalFamily)> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "eps = {eps} outside (0, 1)"
        )));
    }
    let w = split_width(eps);
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut k = 0usize;
    loop {
        let lo = -1.0 + k as f64 * w;
        if lo >= 1.0 {
            break;
        }
        let hi = (lo + w).min(1.0);
        match k % 4 {
            0 => a.push((lo, hi)),
            2 => b.push((lo, hi)),
            _ => {}
        }
        k += 1;
    }
    Ok((IntervalFamily::new(a)?, IntervalFamily::new(b)?))
}

pub(crate) fn split_width(eps: f64) -> f64 {
    eps / (4.0 * std::f64::consts::SQRT_2)
}
