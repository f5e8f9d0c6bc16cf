use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// `F(a, b, t) = t (1 - t) (a (1 - t)^2 - b t^2)`.
///
/// `F(., ., 0) = F(., ., 1) = 0`, `dF/dt(0) = a`, `dF/dt(1) = b`, `F(0, 0, .) = 0`.
pub fn model_f(a: f64, b: f64, t: f64) -> f64 {
    let s = 1.0 - t;
    t * s * (a * s * s - b * t * t)
}

/// `dF/dt`.
pub fn model_f_dt(a: f64, b: f64, t: f64) -> f64 {
    // expand: a (t - 3t^2 + 3t^3 - t^4) - b (t^3 - t^4)
    a * (1.0 - 6.0 * t + 9.0 * t * t - 4.0 * t.powi(3)) - b * (3.0 * t * t - 4.0 * t.powi(3))
}

/// How a leg is laid over its chord.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LegStyle {
    /// `P + |PQ| R_theta(t, F(a, b, t))` with `theta` the chord angle.
    Rotated,
    /// Graph over `x`: `P + (dx t, dz t + dx F(k_P - m, k_Q - m, t))`, `m` the chord slope.
    Sheared,
}

/// A smooth planar arc from `p` to `q` with prescribed endpoint slopes `dz/dx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interpolant {
    pub p: [f64; 2],
    pub q: [f64; 2],
    pub k_p: f64,
    pub k_q: f64,
    pub theta: f64,
    pub style: LegStyle,
    a: f64,
    b: f64,
}

impl Interpolant {
    /// Rotated model. Fails when `1 + k tan(theta)` vanishes for either slope.
    pub fn rotated(p: [f64; 2], q: [f64; 2], k_p: f64, k_q: f64) -> Result<Self> {
        let theta = (q[1] - p[1]).atan2(q[0] - p[0]);
        let tan = theta.tan();
        let arg = |k: f64| -> Result<f64> {
            let den = 1.0 + k * tan;
            if den.abs() < 1e-12 || !tan.is_finite() || tan.abs() > 1e12 {
                return Err(Error::SlopePole {
                    slope: k,
                    value: den,
                });
            }
            Ok((k - tan) / den)
        };
        Ok(Self {
            p,
            q,
            k_p,
            k_q,
            theta,
            style: LegStyle::Rotated,
            a: arg(k_p)?,
            b: arg(k_q)?,
        })
    }

    /// Sheared model. Requires `q.x != p.x`.
    pub fn sheared(p: [f64; 2], q: [f64; 2], k_p: f64, k_q: f64) -> Result<Self> {
        let dx = q[0] - p[0];
        if dx.abs() < 1e-15 {
            return Err(Error::InvalidArgument(format!(
                "sheared leg needs distinct x endpoints, got dx = {dx:e}"
            )));
        }
        let m = (q[1] - p[1]) / dx;
        Ok(Self {
            p,
            q,
            k_p,
            k_q,
            theta: (q[1] - p[1]).atan2(dx),
            style: LegStyle::Sheared,
            a: k_p - m,
            b: k_q - m,
        })
    }

    pub fn chord_length(&self) -> f64 {
        (self.q[0] - self.p[0]).hypot(self.q[1] - self.p[1])
    }

    /// Arguments `(a, b)` passed to the model function.
    pub fn model_args(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn point(&self, t: f64) -> [f64; 2] {
        let f = model_f(self.a, self.b, t);
        match self.style {
            LegStyle::Rotated => {
                let l = self.chord_length();
                let (s, c) = self.theta.sin_cos();
                [
                    self.p[0] + l * (t * c - f * s),
                    self.p[1] + l * (t * s + f * c),
                ]
            }
            LegStyle::Sheared => {
                let dx = self.q[0] - self.p[0];
                let dz = self.q[1] - self.p[1];
                [self.p[0] + dx * t, self.p[1] + dz * t + dx * f]
            }
        }
    }

    /// `d/dt` of [`Interpolant::point`].
    pub fn velocity(&self, t: f64) -> [f64; 2] {
        let fp = model_f_dt(self.a, self.b, t);
        match self.style {
            LegStyle::Rotated => {
                let l = self.chord_length();
                let (s, c) = self.theta.sin_cos();
                [l * (c - fp * s), l * (s + fp * c)]
            }
            LegStyle::Sheared => {
                let dx = self.q[0] - self.p[0];
                let dz = self.q[1] - self.p[1];
                [dx, dz + dx * fp]
            }
        }
    }

    /// Front slope `dz/dx` at `t`.
    pub fn slope(&self, t: f64) -> Result<f64> {
        let fp = model_f_dt(self.a, self.b, t);
        match self.style {
            LegStyle::Rotated => {
                let (s, c) = self.theta.sin_cos();
                let den = c - fp * s;
                if den.abs() < 1e-12 * (1.0 + fp.abs()) {
                    return Err(Error::VerticalTangency { t });
                }
                Ok((s + fp * c) / den)
            }
            LegStyle::Sheared => {
                let dx = self.q[0] - self.p[0];
                Ok((self.q[1] - self.p[1]) / dx + fp)
            }
        }
    }

    /// Whether `dx/dt` keeps one sign on `[0, 1]` (checked on `n` samples).
    pub fn is_x_monotone(&self, n: usize) -> bool {
        let sign = self.velocity(0.5)[0].signum();
        (0..=n).all(|j| {
            let v = self.velocity(j as f64 / n as f64)[0];
            v * sign > 0.0
        })
    }
}

/// Point of `itp` at `t`; rejects `t` outside `[0, 1]`.
pub fn interpolate_leg(itp: &Interpolant, t: f64) -> Result<[f64; 2]> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!(
            "leg parameter {t} outside [0, 1]"
        )));
    }
    Ok(itp.point(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn model_boundary_data() {
        for (a, b) in [(0.0, 0.0), (1.5, -2.0), (-3.0, 0.25)] {
            assert_eq!(model_f(a, b, 0.0), 0.0);
            assert_eq!(model_f(a, b, 1.0), 0.0);
            assert_eq!(model_f_dt(a, b, 0.0), a);
            assert!((model_f_dt(a, b, 1.0) - b).abs() < 1e-15);
        }
        for k in 0..=10 {
            assert_eq!(model_f(0.0, 0.0, k as f64 / 10.0), 0.0);
        }
    }

    #[test]
    fn straight_when_slopes_match_chord() {
        let itp = Interpolant::rotated([0.0, 0.0], [2.0, 1.0], 0.5, 0.5).unwrap();
        for k in 0..=20 {
            let t = k as f64 / 20.0;
            let p = itp.point(t);
            assert!((p[1] - 0.5 * p[0]).abs() < 1e-14);
        }
    }

    #[test]
    fn endpoints_and_slopes() {
        for style in [LegStyle::Rotated, LegStyle::Sheared] {
            let (p, q) = ([0.1, -0.3], [0.9, 0.4]);
            let itp = match style {
                LegStyle::Rotated => Interpolant::rotated(p, q, 0.2, -0.7).unwrap(),
                LegStyle::Sheared => Interpolant::sheared(p, q, 0.2, -0.7).unwrap(),
            };
            let a = interpolate_leg(&itp, 0.0).unwrap();
            let b = interpolate_leg(&itp, 1.0).unwrap();
            assert!((a[0] - p[0]).abs() < 1e-15 && (a[1] - p[1]).abs() < 1e-15);
            assert!((b[0] - q[0]).abs() < 1e-15 && (b[1] - q[1]).abs() < 1e-15);
            let h = 1e-6;
            let slope_at = |t0: f64, t1: f64| {
                let (u, v) = (itp.point(t0), itp.point(t1));
                (v[1] - u[1]) / (v[0] - u[0])
            };
            // one-sided second order: use symmetric quotient around a point
            // just inside and extrapolate
            assert!((slope_at(0.0, h) - 0.2).abs() < 1e-5);
            assert!((slope_at(1.0 - h, 1.0) + 0.7).abs() < 1e-5);
            assert!((itp.slope(0.0).unwrap() - 0.2).abs() < 1e-12);
            assert!((itp.slope(1.0).unwrap() + 0.7).abs() < 1e-12);
        }
    }

    #[test]
    fn slope_pole_rejected() {
        // chord at 45 degrees, k = -1 is perpendicular
        let err = Interpolant::rotated([0.0, 0.0], [1.0, 1.0], -1.0, 0.0).unwrap_err();
        assert!(matches!(err, Error::SlopePole { .. }));
        assert!(interpolate_leg(
            &Interpolant::rotated([0.0, 0.0], [1.0, 0.0], 0.0, 0.0).unwrap(),
            1.5
        )
        .is_err());
    }

    proptest! {
        #[test]
        fn velocity_matches_difference_quotient(
            a in -3.0f64..3.0, b in -3.0f64..3.0, t in 0.01f64..0.99,
            qx in 0.2f64..2.0, qz in -2.0f64..2.0,
        ) {
            for itp in [
                Interpolant::rotated([0.0, 0.0], [qx, qz], a, b),
                Interpolant::sheared([0.0, 0.0], [qx, qz], a, b),
            ].into_iter().flatten() {
                let h = 1e-6;
                let (u, v) = (itp.point(t - h), itp.point(t + h));
                let fd = [(v[0] - u[0]) / (2.0 * h), (v[1] - u[1]) / (2.0 * h)];
                let cf = itp.velocity(t);
                prop_assert!((fd[0] - cf[0]).abs() < 1e-6 * (1.0 + cf[0].abs()));
                prop_assert!((fd[1] - cf[1]).abs() < 1e-6 * (1.0 + cf[1].abs()));
            }
        }
    }
}
