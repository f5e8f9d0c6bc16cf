use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::gamma_m;
use crate::contact::{ParamMap, Point3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CuspSide {
    Left,
    Right,
}

/// A cusp of a front `(x(t), z(t))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuspRecord {
    pub t: f64,
    pub x: f64,
    pub z: f64,
    pub side: CuspSide,
}

/// Integers `i` with `lo < (a i + b) pi / (4 m^2) < hi`.
fn lattice_times(m: u32, a: f64, b: f64, lo: f64, hi: f64) -> Vec<f64> {
    let scale = PI / (4.0 * (m as f64).powi(2));
    let i_lo = ((lo / scale - b) / a).floor() as i64 - 1;
    let i_hi = ((hi / scale - b) / a).ceil() as i64 + 1;
    (i_lo..=i_hi)
        .map(|i| (a * i as f64 + b) * scale)
        .filter(|&t| t > lo && t < hi)
        .collect()
}

/// Cusps of the `gamma_m` front in `(-1, 1)`, ascending in `t`.
///
/// They sit at `t = (4i - 1) pi / (4 m^2)`, where `x = -sqrt(2) cos(i pi) / m`;
/// the side is read from the sign of `x`.
pub fn cusp_set(m: u32) -> Vec<CuspRecord> {
    lattice_times(m, 4.0, -1.0, -1.0, 1.0)
        .into_iter()
        .map(|t| {
            let g = gamma_m(m, t);
            let side = if g.x > 0.0 {
                CuspSide::Right
            } else {
                CuspSide::Left
            };
            CuspRecord {
                t,
                x: g.x,
                z: g.z,
                side,
            }
        })
        .collect()
}

/// `(right, left)` from the floor formulas.
pub fn cusp_counts(m: u32) -> (usize, usize) {
    let r = (m as f64).powi(2) / (2.0 * PI);
    let right = 1.0 + (r - 3.0 / 8.0).floor() + (r + 3.0 / 8.0).floor();
    let left = 1.0 + (r - 1.0 / 8.0).floor() + (r + 1.0 / 8.0).floor();
    (right.max(0.0) as usize, left.max(0.0) as usize)
}

/// Cusps of any front found from sign changes of `x'(t)`, refined by bisection.
///
/// Independent of [`cusp_set`]: it only uses the curve's derivative. A sign
/// change from `+` to `-` is a local maximum of `x`, hence a right cusp.
pub fn detect_front_cusps<M>(curve: &M, samples: usize) -> Vec<CuspRecord>
where
    M: ParamMap<1, Point = Point3>,
{
    let dom = curve.domain();
    let (lo, hi) = (dom.lo[0], dom.hi[0]);
    let xp = |t: f64| curve.partial([t], 0).x;
    let step = (hi - lo) / (samples - 1) as f64;
    let mut out = Vec::new();
    let mut t0 = lo;
    let mut v0 = xp(t0);
    for j in 1..samples {
        let t1 = if j + 1 == samples {
            hi
        } else {
            lo + step * j as f64
        };
        let v1 = xp(t1);
        if v0 != 0.0 && v1 != 0.0 && v0.signum() != v1.signum() {
            let (mut a, mut b, va) = (t0, t1, v0);
            for _ in 0..200 {
                let c = 0.5 * (a + b);
                if c <= a || c >= b {
                    break;
                }
                let vc = xp(c);
                if vc == 0.0 {
                    a = c;
                    b = c;
                    break;
                }
                if vc.signum() == va.signum() {
                    a = c;
                } else {
                    b = c;
                }
            }
            let t = 0.5 * (a + b);
            let p = curve.eval([t]);
            let side = if v0 > 0.0 {
                CuspSide::Right
            } else {
                CuspSide::Left
            };
            out.push(CuspRecord {
                t,
                x: p.x,
                z: p.z,
                side,
            });
        }
        t0 = t1;
        v0 = v1;
    }
    out
}

pub fn fractional_part(m: u32) -> f64 {
    let r = (m as f64).powi(2) / (2.0 * PI);
    r - r.floor()
}

/// The `m` in `range` with `m^2 / (2 pi) mod 1` in `(0, 1/8)`.
pub fn equidistribution_filter(range: impl IntoIterator<Item = u32>) -> Vec<u32> {
    range
        .into_iter()
        .filter(|&m| {
            let f = fractional_part(m);
            f > 0.0 && f < 0.125
        })
        .collect()
}

/// Times where the `gamma_m` front meets the z-axis: `(4i + 1) pi / (4 m^2)`.
pub fn z_axis_crossings(m: u32) -> Vec<f64> {
    lattice_times(m, 4.0, 1.0, -1.0, 1.0)
}

/// `T_M = {(8k + 1) pi / (4 M^2)} in (-1, 1)`.
pub fn t_set(big_m: u32) -> Vec<f64> {
    lattice_times(big_m, 8.0, 1.0, -1.0, 1.0)
}

/// Number of cusps of `gamma_m` with `a < t < b`.
pub fn cusps_between(m: u32, a: f64, b: f64) -> usize {
    cusp_set(m).iter().filter(|c| c.t > a && c.t < b).count()
}

/// `x'(t)` and `z'(t)` of `gamma_m`.
#[cfg(test)]
pub(crate) fn front_velocity(m: u32, t: f64) -> (f64, f64) {
    let d = super::sigma_partials(m, t, 0.0).0;
    (d.x, d.z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::Gamma;

    #[test]
    fn m2_cusps() {
        let c = cusp_set(2);
        let ts: Vec<f64> = c.iter().map(|c| c.t).collect();
        let expect = [-5.0 * PI / 16.0, -PI / 16.0, 3.0 * PI / 16.0];
        assert_eq!(ts.len(), 3);
        for (a, b) in ts.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(cusp_counts(2), (2, 1));
        let right = c.iter().filter(|c| c.side == CuspSide::Right).count();
        assert_eq!(right, 2);
    }

    #[test]
    fn cusps_are_stationary_points_of_the_front() {
        for m in 1..=30 {
            for c in cusp_set(m) {
                let (xp, zp) = front_velocity(m, c.t);
                let scale = m as f64;
                assert!(xp.abs() < 1e-10 * scale, "m={m} t={} x'={xp}", c.t);
                assert!(zp.abs() < 1e-10, "m={m} t={} z'={zp}", c.t);
                assert!((c.x.abs() - 2f64.sqrt() / m as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn formula_tally_and_detector_agree() {
        for m in 2..=30 {
            let set = cusp_set(m);
            let right = set.iter().filter(|c| c.side == CuspSide::Right).count();
            let left = set.len() - right;
            assert_eq!((right, left), cusp_counts(m), "m = {m}");
            let found = detect_front_cusps(&Gamma::new(m), 20_000);
            assert_eq!(found.len(), set.len(), "m = {m}");
            for (a, b) in found.iter().zip(&set) {
                assert!((a.t - b.t).abs() < 1e-9);
                assert_eq!(a.side, b.side);
            }
        }
    }

    #[test]
    fn m22_is_balanced() {
        assert!((fractional_part(22) - 0.0309).abs() < 1e-3);
        assert_eq!(cusp_counts(22), (154, 154));
    }

    #[test]
    fn filter_brute_force() {
        assert!(equidistribution_filter(2..=21).is_empty());
        let f = equidistribution_filter(2..=60);
        assert_eq!(&f[..3], &[22, 27, 39]);
        for m in f {
            let (r, l) = cusp_counts(m);
            let k = ((m as f64).powi(2) / (2.0 * PI)).floor() as usize;
            assert_eq!((r, l), (2 * k, 2 * k));
        }
    }

    #[test]
    fn crossing_sets() {
        let t2 = t_set(2);
        assert_eq!(t2.len(), 1);
        assert!((t2[0] - PI / 16.0).abs() < 1e-15);
        let z = z_axis_crossings(2);
        let expect = [-3.0 * PI / 16.0, PI / 16.0, 5.0 * PI / 16.0];
        assert_eq!(z.len(), 3);
        for (a, b) in z.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        for m in [2u32, 7, 22] {
            for t in z_axis_crossings(m) {
                assert!(gamma_m(m, t).x.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn one_zigzag_between_consecutive_t_points() {
        for m in [2u32, 5, 9, 22, 27] {
            let ts = t_set(m);
            for w in ts.windows(2) {
                assert_eq!(cusps_between(m, w[0], w[1]), 2);
            }
        }
    }
}
