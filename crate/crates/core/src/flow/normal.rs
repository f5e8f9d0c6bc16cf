use nalgebra::{Matrix5, Vector5};
use serde::{Deserialize, Serialize};

use super::stretch::{stretch_velocity, Isotopy, StretchIsotopy};
use super::{fd_gradient, hamiltonian_vector, ScalarField5};
use crate::contact::{ContactPoint, Domain, GridSpec, Point5};
use crate::schedule::LambdaField;
use crate::zoo::{pi_embedding, sigma, sigma_partials};
use crate::{scan, Error, Result};

/// A Hamiltonian on a tube around `Im Gamma_tau` whose contact field restricts
/// to `dGamma/dtau` on the image.
///
/// A point `P` near the image is written `P = Gamma(foot) + offset` with
/// `foot` the nearest point. `H(P) = l(offset)` where the covector `l` at the
/// foot takes the values `dy(v), -dx(v), 0, 0, 0` on the frame
/// `d_x + y d_z, d_y, dGamma/dt, d_q, d_p` and `v = dGamma/dtau`. It also
/// kills `dGamma/dw`, so `dH = l` along the image.
#[derive(Debug, Clone)]
pub struct NormalHamiltonian<L> {
    pub iso: StretchIsotopy<L>,
    pub tau: f64,
    /// Fibre range `[w_lo, w_hi]` on which the frame was certified.
    pub w_range: (f64, f64),
    pub condition_limit: f64,
}

impl<L: LambdaField> NormalHamiltonian<L> {
    /// Nearest point on the image as `(t, s, W)` with `W` the stretched fibre
    /// coordinate, by Gauss-Newton from the polar guess.
    pub fn foot(&self, pt: Point5) -> Result<[f64; 3]> {
        let m = f64::from(self.iso.m);
        let m2 = m * m;
        let r = pt.x.hypot(pt.y);
        let mut big_w = (1.0 - m * r / std::f64::consts::SQRT_2).clamp(0.0, 1.0);
        let theta0 = pt.x.atan2(pt.y) + std::f64::consts::FRAC_PI_4;
        let turns = ((pt.z * m2 - theta0) / std::f64::consts::TAU).round();
        let mut t = (theta0 + turns * std::f64::consts::TAU) / m2;
        let target = pt.xyz();
        for _ in 0..50 {
            let res = sigma(self.iso.m, t, big_w) - target;
            let (st, sw) = sigma_partials(self.iso.m, t, big_w);
            let a = [st.x, st.y, st.z];
            let b = [sw.x, sw.y, sw.z];
            let rr = [res.x, res.y, res.z];
            let dot = |u: &[f64; 3], v: &[f64; 3]| u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
            let (aa, ab, bb) = (dot(&a, &a), dot(&a, &b), dot(&b, &b));
            let (ar, br) = (dot(&a, &rr), dot(&b, &rr));
            let det = aa * bb - ab * ab;
            if det.abs() < 1e-300 {
                break;
            }
            let dt = -(bb * ar - ab * br) / det;
            let dw = -(aa * br - ab * ar) / det;
            t += dt;
            big_w += dw;
            if dt.abs() < 1e-15 && dw.abs() < 1e-15 {
                break;
            }
        }
        if !(t.is_finite() && big_w.is_finite()) {
            return Err(Error::NonFinite {
                params: pt.to_array().to_vec(),
            });
        }
        Ok([t, pt.q, big_w])
    }

    /// The covector `l` at `(t, s, W)`, rejecting ill-conditioned frames.
    pub fn covector(&self, t: f64, s: f64, big_w: f64) -> Result<[f64; 5]> {
        let (st, _) = sigma_partials(self.iso.m, t, big_w);
        let foot = pi_embedding(self.iso.m, t, s, big_w);
        let frame = Matrix5::from_columns(&[
            Vector5::new(1.0, 0.0, foot.y, 0.0, 0.0),
            Vector5::new(0.0, 1.0, 0.0, 0.0, 0.0),
            Vector5::new(st.x, st.y, st.z, 0.0, 0.0),
            Vector5::new(0.0, 0.0, 0.0, 1.0, 0.0),
            Vector5::new(0.0, 0.0, 0.0, 0.0, 1.0),
        ]);
        let sv = frame.singular_values();
        let cond = sv.max() / sv.min();
        if !(cond < self.condition_limit) {
            return Err(Error::FrameDegenerate {
                at: [t, s, big_w],
                condition: cond,
            });
        }
        let w = big_w / self.iso.stretch_factor(t, s, self.tau);
        let v = stretch_velocity(&self.iso, t, s, w, self.tau);
        let rhs = Vector5::new(v.y, -v.x, 0.0, 0.0, 0.0);
        let l = frame
            .transpose()
            .lu()
            .solve(&rhs)
            .ok_or(Error::FrameDegenerate {
                at: [t, s, big_w],
                condition: f64::INFINITY,
            })?;
        Ok([l[0], l[1], l[2], l[3], l[4]])
    }

    pub fn try_value(&self, pt: Point5) -> Result<f64> {
        let [t, s, big_w] = self.foot(pt)?;
        let l = self.covector(t, s, big_w)?;
        let off = (pt - pi_embedding(self.iso.m, t, s, big_w)).to_array();
        Ok((0..5).map(|k| l[k] * off[k]).sum())
    }
}

impl<L: LambdaField> ScalarField5 for NormalHamiltonian<L> {
    /// `NaN` where the foot or frame cannot be resolved.
    fn value(&self, pt: Point5, _tau: f64) -> f64 {
        self.try_value(pt).unwrap_or(f64::NAN)
    }
}

/// Builds the Hamiltonian at time `tau`, certifying the frame on
/// `[-1,1]^2 x [w_lo, w_hi]`.
///
/// The frame degenerates where `W = 0` (the Legendrian end of the fibre), so
/// `w_lo` must be positive.
pub fn build_normal_coordinate_hamiltonian<L: LambdaField>(
    iso: StretchIsotopy<L>,
    tau: f64,
    w_range: (f64, f64),
) -> Result<NormalHamiltonian<L>> {
    let nh = NormalHamiltonian {
        iso,
        tau,
        w_range,
        condition_limit: 1e8,
    };
    let dom = Domain::new([-1.0, -1.0, w_range.0], [1.0, 1.0, w_range.1]);
    let grid = GridSpec::new([101, 3, 5]);
    let checks = scan::map_collect(grid.len(), |i| {
        let [t, s, w] = grid.point(&dom, i);
        nh.covector(t, s, nh.iso.big_w(t, s, w, tau)).map(|_| ())
    });
    checks.into_iter().collect::<Result<Vec<()>>>()?;
    Ok(nh)
}

/// Residuals of the five conditions along `Gamma_tau`, with derivatives of
/// `H` taken by central differences of step `h`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianConditions {
    /// `max |H o Gamma|`.
    pub vanishes: f64,
    /// `max |-H_y - dx(v)|`.
    pub x_component: f64,
    /// `max |H_x + y H_z - dy(v)|`.
    pub y_component: f64,
    /// `max |-y H_y - dz(v)|`.
    pub z_component: f64,
    /// `max(|H_q|, |H_p|)`.
    pub qp_flat: f64,
    /// `max |X_H - v|`.
    pub field_match: f64,
}

impl HamiltonianConditions {
    pub fn max(&self) -> f64 {
        [
            self.vanishes,
            self.x_component,
            self.y_component,
            self.z_component,
            self.qp_flat,
            self.field_match,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn verify_hamiltonian_conditions<L: LambdaField>(
    nh: &NormalHamiltonian<L>,
    grid: &GridSpec<3>,
    h: f64,
) -> Result<HamiltonianConditions> {
    let dom = Domain::new([-1.0, -1.0, nh.w_range.0], [1.0, 1.0, nh.w_range.1]);
    let rows = scan::map_collect(grid.len(), |i| -> Result<HamiltonianConditions> {
        let u = grid.point(&dom, i);
        let [t, s, w] = u;
        let p = nh.iso.at(u, nh.tau);
        let v = stretch_velocity(&nh.iso, t, s, w, nh.tau);
        let hv = nh.try_value(p)?;
        let g = fd_gradient(nh, p, nh.tau, h);
        if g.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { params: u.to_vec() });
        }
        let [hx, hy, hz, hq, hp] = g;
        let xh = hamiltonian_vector(p, hv, g);
        Ok(HamiltonianConditions {
            vanishes: hv.abs(),
            x_component: (-hy - v.x).abs(),
            y_component: (hx + p.y * hz - v.y).abs(),
            z_component: (-p.y * hy - v.z).abs(),
            qp_flat: hq.abs().max(hp.abs()),
            field_match: (xh - v).max_abs(),
        })
    });
    let mut out = HamiltonianConditions::default();
    for r in rows {
        let r = r?;
        out.vanishes = out.vanishes.max(r.vanishes);
        out.x_component = out.x_component.max(r.x_component);
        out.y_component = out.y_component.max(r.y_component);
        out.z_component = out.z_component.max(r.z_component);
        out.qp_flat = out.qp_flat.max(r.qp_flat);
        out.field_match = out.field_match.max(r.field_match);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::{build_lambda_schedule, Frozen, UniformRamp};

    #[test]
    fn foot_recovers_parameters() {
        let iso = StretchIsotopy::new(8, 0.5, UniformRamp);
        let nh = build_normal_coordinate_hamiltonian(iso, 0.3, (0.05, 0.45)).unwrap();
        for &(t, s, w) in &[(0.1, 0.2, 0.1), (-0.77, 0.9, 0.4), (0.95, -0.3, 0.25)] {
            let p = nh.iso.at([t, s, w], 0.3);
            let [ft, fs, fw] = nh.foot(p).unwrap();
            assert!((ft - t).abs() < 1e-12 && fs == s);
            assert!((fw - nh.iso.big_w(t, s, w, 0.3)).abs() < 1e-12);
        }
    }

    #[test]
    fn conditions_hold_for_uniform_ramp() {
        let iso = StretchIsotopy::new(8, 0.5, UniformRamp);
        let nh = build_normal_coordinate_hamiltonian(iso, 0.4, (0.05, 0.45)).unwrap();
        let r = verify_hamiltonian_conditions(&nh, &GridSpec::new([41, 3, 4]), 1e-4).unwrap();
        assert!(r.vanishes <= 1e-12, "{r:?}");
        assert!(r.max() <= 1e-4, "{r:?}");
    }

    #[test]
    fn conditions_hold_for_quarter_schedule() {
        let iso = StretchIsotopy::new(8, 0.5, build_lambda_schedule(0.5).unwrap());
        for tau in [0.1, 0.4, 0.6, 0.85] {
            let nh = build_normal_coordinate_hamiltonian(iso.clone(), tau, (0.05, 0.45)).unwrap();
            let r = verify_hamiltonian_conditions(&nh, &GridSpec::new([41, 9, 3]), 1e-4).unwrap();
            assert!(r.max() <= 1e-4, "tau {tau}: {r:?}");
        }
    }

    #[test]
    fn frozen_schedule_gives_zero() {
        let iso = StretchIsotopy::new(8, 0.5, Frozen(0.2));
        let nh = build_normal_coordinate_hamiltonian(iso, 0.5, (0.05, 0.45)).unwrap();
        let p = nh.iso.at([0.3, 0.1, 0.2], 0.5) + Point5::new(1e-3, -2e-3, 1e-3, 0.0, 1e-3);
        assert_eq!(nh.value(p, 0.5), 0.0);
    }

    #[test]
    fn degenerate_frame_is_rejected() {
        let iso = StretchIsotopy::new(8, 0.5, Frozen(0.0));
        let err = build_normal_coordinate_hamiltonian(iso, 0.5, (0.0, 0.45)).unwrap_err();
        assert!(matches!(err, Error::FrameDegenerate { .. }));
    }
}
