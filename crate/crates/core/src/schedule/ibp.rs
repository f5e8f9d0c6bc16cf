use serde::{Deserialize, Serialize};

use super::{profile, IntervalFamily};
use crate::contact::{ContactPoint, Domain, GridSpec, Point5};
use crate::flow::{isotopy_support_size, Isotopy, SupportSampling};
use crate::singular::zigzag_birth_model;
use crate::zoo::gamma_m;
use crate::{scan, Error, Result};

/// `lambda(s, tau) in [-1, 1]` for the first step of the construction.
///
/// With `c(s)` equal to 0 on `S0`, 1 on `S1` and moving by `profile` across
/// the gaps, `lambda = -1 + 2 mu` where `mu = c profile(2 tau)` on the first
/// half and `mu = c + (1 - c) profile(2 tau - 1)` on the second. So `lambda`
/// is frozen at `-1` over `S0` for `tau <= 1/2`, frozen at `1` over `S1` for
/// `tau >= 1/2`, and non-decreasing in `tau`. Its zero level `zeta(s)` is
/// `3/4` on `S0` and `1/4` on `S1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepLambda {
    pub s0: IntervalFamily,
    pub s1: IntervalFamily,
}

impl StepLambda {
    pub fn new(s0: IntervalFamily, s1: IntervalFamily) -> Result<Self> {
        if !s0.is_disjoint_from(&s1) {
            return Err(Error::IntervalConstraint("S0 and S1 overlap".into()));
        }
        Ok(Self { s0, s1 })
    }

    /// The blend weight `c(s)`.
    pub fn weight(&self, s: f64) -> f64 {
        if self.s0.contains(s) {
            return 0.0;
        }
        if self.s1.contains(s) {
            return 1.0;
        }
        let mut left: Option<(f64, f64)> = None;
        let mut right: Option<(f64, f64)> = None;
        for (fam, val) in [(&self.s0, 0.0), (&self.s1, 1.0)] {
            for &(a, b) in fam.intervals() {
                if b <= s && left.is_none_or(|l| b > l.0) {
                    left = Some((b, val));
                }
                if a >= s && right.is_none_or(|r| a < r.0) {
                    right = Some((a, val));
                }
            }
        }
        match (left, right) {
            (Some((a, ca)), Some((b, cb))) => ca + (cb - ca) * profile((s - a) / (b - a)),
            (Some((_, c)), None) | (None, Some((_, c))) => c,
            (None, None) => 0.5,
        }
    }

    pub fn lambda(&self, s: f64, tau: f64) -> f64 {
        let c = self.weight(s);
        let mu = if tau <= 0.5 {
            c * profile(2.0 * tau)
        } else {
            c + (1.0 - c) * profile(2.0 * tau - 1.0)
        };
        -1.0 + 2.0 * mu
    }

    /// The `tau` with `lambda(s, tau) = 0`, by bisection.
    pub fn zeta(&self, s: f64) -> f64 {
        let (mut a, mut b) = (0.0, 1.0);
        for _ in 0..100 {
            let c = 0.5 * (a + b);
            if self.lambda(s, c) < 0.0 {
                a = c;
            } else {
                b = c;
            }
        }
        0.5 * (a + b)
    }
}

/// `Gamma_tau(t, s) = (g_{lambda(s, tau)}(t), s, h(t, lambda(s, tau)))` where
/// `g_lambda` grafts a scaled birth model onto `gamma_m` around each point of
/// `zigzags`:
///
/// ```text
/// g_l(t) = gamma_m(t) + sum chi((t - t0)/r) D(a, B((t - t0)/r, l) - B((t - t0)/r, -1))
/// ```
///
/// with `D(a) = diag(a, a, a^2)` and `B` the birth model. `h` is
/// `amp_h (t - t0) chi((t - t0)/r) chi(l / eps_h)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepOneIsotopy {
    pub m: u32,
    pub zigzags: Vec<f64>,
    pub radius: f64,
    pub amplitude: f64,
    pub h_amplitude: f64,
    pub h_window: f64,
    pub lambda: StepLambda,
}

/// Smooth cutoff: 1 on `|u| <= 1/2`, 0 on `|u| >= 1`.
fn chi(u: f64) -> f64 {
    1.0 - profile(2.0 * u.abs() - 1.0)
}

impl StepOneIsotopy {
    pub fn curve(&self, t: f64, lam: f64) -> crate::contact::Point3 {
        let mut p = gamma_m(self.m, t);
        let a = self.amplitude;
        for &t0 in &self.zigzags {
            let u = (t - t0) / self.radius;
            let w = chi(u);
            if w == 0.0 {
                continue;
            }
            let d = zigzag_birth_model(u, lam) - zigzag_birth_model(u, -1.0);
            p = p + crate::contact::Point3::new(a * d.x, a * d.y, a * a * d.z) * w;
        }
        p
    }

    pub fn h(&self, t: f64, lam: f64) -> f64 {
        let g = chi(lam / self.h_window);
        if g == 0.0 {
            return 0.0;
        }
        self.zigzags
            .iter()
            .map(|&t0| {
                let u = (t - t0) / self.radius;
                self.h_amplitude * (t - t0) * chi(u) * g
            })
            .sum()
    }
}

impl Isotopy<2> for StepOneIsotopy {
    fn domain(&self) -> Domain<2> {
        Domain::symmetric_unit()
    }

    fn at(&self, u: [f64; 2], tau: f64) -> Point5 {
        let [t, s] = u;
        let lam = self.lambda.lambda(s, tau);
        self.curve(t, lam).extend(s, self.h(t, lam))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IbpCertificate {
    /// Component diameters of the support over `[0, 1/2]`.
    pub first_half: Vec<f64>,
    /// Component diameters of the support over `[1/2, 1]`.
    pub second_half: Vec<f64>,
    pub d_c0: f64,
    pub c: f64,
    /// `c / 2 * d_c0`.
    pub threshold: f64,
    pub pass: bool,
    /// Infimum of passing constants: `2 max_diameter / d_c0` (0 when
    /// nothing moves, infinite when the endpoints coincide but something
    /// moves).
    pub smallest_passing_c: f64,
}

/// Certifies the isotopy-by-parts condition: every support component on each
/// half-interval is shorter than `c / 2 * d_C0(Gamma_0, Gamma_1)`.
pub fn ibp_check<I: Isotopy<2>>(
    iso: &I,
    grid: &GridSpec<2>,
    c: f64,
    sampling: SupportSampling,
) -> Result<IbpCertificate> {
    let report = isotopy_support_size(iso, grid, &[(0.0, 0.5), (0.5, 1.0)], sampling);
    let dom = iso.domain();
    let d_c0 = match scan::max_by_index(grid.len(), |i| {
        let u = grid.point(&dom, i);
        iso.at(u, 0.0).dist(&iso.at(u, 1.0))
    }) {
        Ok(Some((_, v))) => v,
        Ok(None) => 0.0,
        Err(i) => {
            return Err(Error::NonFinite {
                params: grid.point(&dom, i).to_vec(),
            })
        }
    };
    let diam = |k: usize| -> Vec<f64> { report.components[k].iter().map(|c| c.diameter).collect() };
    let (first_half, second_half) = (diam(0), diam(1));
    let threshold = c / 2.0 * d_c0;
    let max_d = report.max_size();
    let any = !first_half.is_empty() || !second_half.is_empty();
    let pass = first_half
        .iter()
        .chain(&second_half)
        .all(|&d| d < threshold);
    let smallest_passing_c = if !any {
        0.0
    } else if d_c0 > 0.0 {
        2.0 * max_d / d_c0
    } else {
        f64::INFINITY
    };
    Ok(IbpCertificate {
        first_half,
        second_half,
        d_c0,
        c,
        threshold,
        pass,
        smallest_passing_c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::FnIsotopy;
    use crate::schedule::make_s_family;
    use crate::zoo::lambda_i;

    fn step(m: u32) -> StepOneIsotopy {
        let (s0, s1) = make_s_family(m).unwrap();
        StepOneIsotopy {
            m,
            zigzags: vec![-0.5, 0.1, 0.6],
            radius: 0.05,
            amplitude: 0.02,
            h_amplitude: 0.05,
            h_window: 0.3,
            lambda: StepLambda::new(s0, s1).unwrap(),
        }
    }

    #[test]
    fn lambda_profile_properties() {
        let lam = step(8).lambda;
        for k in 0..=200 {
            let s = -1.0 + k as f64 / 100.0;
            assert_eq!(lam.lambda(s, 0.0), -1.0);
            assert_eq!(lam.lambda(s, 1.0), 1.0);
            let z = lam.zeta(s);
            assert!((0.25 - 1e-12..=0.75 + 1e-12).contains(&z));
            for j in 0..100 {
                let (a, b) = (j as f64 / 100.0, (j + 1) as f64 / 100.0);
                assert!(lam.lambda(s, b) >= lam.lambda(s, a));
            }
            if lam.s0.contains(s) {
                assert!((z - 0.75).abs() < 1e-12);
                assert_eq!(lam.lambda(s, 0.3), -1.0);
            }
            if lam.s1.contains(s) {
                assert!((z - 0.25).abs() < 1e-12);
                assert_eq!(lam.lambda(s, 0.7), 1.0);
            }
        }
    }

    #[test]
    fn endpoints_of_step_one() {
        let iso = step(8);
        for &(t, s) in &[(-0.5, 0.2), (0.1, -0.9), (0.33, 0.5)] {
            assert_eq!(iso.at([t, s], 0.0), lambda_i(8, t, s));
        }
    }

    #[test]
    fn stationary_passes_and_translation_fails() {
        let g = GridSpec::uniform(24);
        let still = FnIsotopy {
            domain: Domain::<2>::symmetric_unit(),
            f: |u: [f64; 2], _tau: f64| lambda_i(8, u[0], u[1]),
        };
        let c = ibp_check(&still, &g, 1.0, Default::default()).unwrap();
        assert!(c.pass && c.first_half.is_empty() && c.smallest_passing_c == 0.0);
        let shift = FnIsotopy {
            domain: Domain::<2>::symmetric_unit(),
            f: |u: [f64; 2], tau: f64| {
                lambda_i(8, u[0], u[1]) + Point5::new(0.0, 0.0, tau, 0.0, 0.0)
            },
        };
        let c = ibp_check(&shift, &g, 1.0, Default::default()).unwrap();
        assert!(!c.pass);
        assert!((c.d_c0 - 1.0).abs() < 1e-12);
        assert_eq!(c.first_half.len(), 1);
    }

    #[test]
    fn step_one_passes_above_reported_constant() {
        let iso = step(8);
        let g = GridSpec::new([161, 41]);
        let probe = ibp_check(&iso, &g, 1.0, Default::default()).unwrap();
        assert!(probe.smallest_passing_c.is_finite() && probe.smallest_passing_c > 0.0);
        let c = probe.smallest_passing_c * 1.01;
        let cert = ibp_check(&iso, &g, c, Default::default()).unwrap();
        assert!(cert.pass);
        let below = ibp_check(
            &iso,
            &g,
            probe.smallest_passing_c * 0.99,
            Default::default(),
        )
        .unwrap();
        assert!(!below.pass);
        // first-half motion stays off S0, second-half motion off S1
        assert!(cert.first_half.len() >= iso.zigzags.len());
    }
}
