//! Contact Hamiltonian dynamics on `(R^5, ker beta)`, `beta = dz - y dx - p dq`.
//!
//! A scalar `H` determines `X_H` by `beta(X_H) = H` and
//! `i_{X_H} d beta = dH(R) beta - dH` with Reeb field `R = d/dz`. In coordinates
//!
//! ```text
//! X_H = (-H_y, y H_z + H_x, H - y H_y - p H_p, -H_p, p H_z + H_q)
//! ```
//!
//! in `(x, y, z, q, p)` order.

mod integrate;
mod normal;
mod stretch;
mod support;

pub use integrate::{
    integrate_flow, step_halving_ratios, verify_conformal_pullback, ConformalReport, FlowBox,
    Trajectory,
};
pub use normal::{
    build_normal_coordinate_hamiltonian, verify_hamiltonian_conditions, HamiltonianConditions,
    NormalHamiltonian,
};
pub use stretch::{
    stretch_velocity, verify_obstruction_identity, verify_velocity_annihilated_by_beta, BetaReport,
    FnIsotopy, Isotopy, ObstructionReport, StretchIsotopy,
};
pub use support::{
    extension_c0_bound, isotopy_support_size, IsotopySupportReport, SupportComponent,
    SupportSampling,
};

use serde::{Deserialize, Serialize};

use crate::contact::{beta5, Point5, Tangent5};

/// Scalar function `H(pt, tau)` on `R^5` with gradient access.
pub trait ScalarField5: Send + Sync {
    fn value(&self, pt: Point5, tau: f64) -> f64;

    /// `(H_x, H_y, H_z, H_q, H_p)`. Central differences with step `1e-6`
    /// unless overridden.
    fn gradient(&self, pt: Point5, tau: f64) -> [f64; 5] {
        fd_gradient(self, pt, tau, 1e-6)
    }

    /// Closed box outside of which `H` vanishes identically, if any.
    fn support_box(&self) -> Option<([f64; 5], [f64; 5])> {
        None
    }

    fn closed_form_gradient(&self) -> bool {
        false
    }
}

pub fn fd_gradient<H: ScalarField5 + ?Sized>(h: &H, pt: Point5, tau: f64, step: f64) -> [f64; 5] {
    let base = pt.to_array();
    let mut g = [0.0; 5];
    for (k, gk) in g.iter_mut().enumerate() {
        let mut a = base;
        let mut b = base;
        a[k] += step;
        b[k] -= step;
        *gk = (h.value(Point5::from_array(a), tau) - h.value(Point5::from_array(b), tau))
            / (2.0 * step);
    }
    g
}

impl<T: ScalarField5 + ?Sized> ScalarField5 for Box<T> {
    fn value(&self, pt: Point5, tau: f64) -> f64 {
        (**self).value(pt, tau)
    }

    fn gradient(&self, pt: Point5, tau: f64) -> [f64; 5] {
        (**self).gradient(pt, tau)
    }

    fn support_box(&self) -> Option<([f64; 5], [f64; 5])> {
        (**self).support_box()
    }

    fn closed_form_gradient(&self) -> bool {
        (**self).closed_form_gradient()
    }
}

impl<T: ScalarField5 + ?Sized> ScalarField5 for &T {
    fn value(&self, pt: Point5, tau: f64) -> f64 {
        (**self).value(pt, tau)
    }

    fn gradient(&self, pt: Point5, tau: f64) -> [f64; 5] {
        (**self).gradient(pt, tau)
    }

    fn support_box(&self) -> Option<([f64; 5], [f64; 5])> {
        (**self).support_box()
    }

    fn closed_form_gradient(&self) -> bool {
        (**self).closed_form_gradient()
    }
}

/// `H = c`.
#[derive(Debug, Clone, Copy)]
pub struct Constant(pub f64);

impl ScalarField5 for Constant {
    fn value(&self, _pt: Point5, _tau: f64) -> f64 {
        self.0
    }

    fn gradient(&self, _pt: Point5, _tau: f64) -> [f64; 5] {
        [0.0; 5]
    }

    fn closed_form_gradient(&self) -> bool {
        true
    }
}

/// `H = pt[k]`, a coordinate function.
#[derive(Debug, Clone, Copy)]
pub struct Coordinate(pub usize);

impl ScalarField5 for Coordinate {
    fn value(&self, pt: Point5, _tau: f64) -> f64 {
        pt.to_array()[self.0]
    }

    fn gradient(&self, _pt: Point5, _tau: f64) -> [f64; 5] {
        let mut g = [0.0; 5];
        g[self.0] = 1.0;
        g
    }

    fn closed_form_gradient(&self) -> bool {
        true
    }
}

/// `H = y p`.
#[derive(Debug, Clone, Copy)]
pub struct YTimesP;

impl ScalarField5 for YTimesP {
    fn value(&self, pt: Point5, _tau: f64) -> f64 {
        pt.y * pt.p
    }

    fn gradient(&self, pt: Point5, _tau: f64) -> [f64; 5] {
        [0.0, pt.p, 0.0, 0.0, pt.y]
    }

    fn closed_form_gradient(&self) -> bool {
        true
    }
}

/// `exp(1 - 1/(1 - u))` for `u in [0, 1)`, zero for `u >= 1`, and its
/// derivative in `u`.
fn bump(u: f64) -> (f64, f64) {
    if u >= 1.0 {
        return (0.0, 0.0);
    }
    let v = 1.0 - u;
    let f = (1.0 - 1.0 / v).exp();
    (f, -f / (v * v))
}

/// `amp * bump(|pt - center|^2 / r^2)`, supported in the closed ball.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BallBump {
    pub center: [f64; 5],
    pub radius: f64,
    pub amp: f64,
}

impl ScalarField5 for BallBump {
    fn value(&self, pt: Point5, _tau: f64) -> f64 {
        let a = pt.to_array();
        let u: f64 = (0..5).map(|k| (a[k] - self.center[k]).powi(2)).sum::<f64>()
            / (self.radius * self.radius);
        self.amp * bump(u).0
    }

    fn gradient(&self, pt: Point5, _tau: f64) -> [f64; 5] {
        let a = pt.to_array();
        let r2 = self.radius * self.radius;
        let u: f64 = (0..5).map(|k| (a[k] - self.center[k]).powi(2)).sum::<f64>() / r2;
        let d = bump(u).1;
        let mut g = [0.0; 5];
        if d != 0.0 {
            for k in 0..5 {
                g[k] = self.amp * d * 2.0 * (a[k] - self.center[k]) / r2;
            }
        }
        g
    }

    fn support_box(&self) -> Option<([f64; 5], [f64; 5])> {
        let lo = self.center.map(|c| c - self.radius);
        let hi = self.center.map(|c| c + self.radius);
        Some((lo, hi))
    }

    fn closed_form_gradient(&self) -> bool {
        true
    }
}

/// `amp * prod_k bump(((pt_k - c_k) / h_k)^2)`, supported in the box
/// `c +- h`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BoxBump {
    pub center: [f64; 5],
    pub half: [f64; 5],
    pub amp: f64,
}

impl BoxBump {
    fn factors(&self, pt: Point5) -> [(f64, f64); 5] {
        let a = pt.to_array();
        let mut out = [(0.0, 0.0); 5];
        for k in 0..5 {
            let r = (a[k] - self.center[k]) / self.half[k];
            let (f, d) = bump(r * r);
            out[k] = (f, d * 2.0 * r / self.half[k]);
        }
        out
    }
}

impl ScalarField5 for BoxBump {
    fn value(&self, pt: Point5, _tau: f64) -> f64 {
        self.amp * self.factors(pt).iter().map(|f| f.0).product::<f64>()
    }

    fn gradient(&self, pt: Point5, _tau: f64) -> [f64; 5] {
        let fs = self.factors(pt);
        let mut g = [0.0; 5];
        for (k, gk) in g.iter_mut().enumerate() {
            *gk = self.amp
                * (0..5)
                    .map(|j| if j == k { fs[j].1 } else { fs[j].0 })
                    .product::<f64>();
        }
        g
    }

    fn support_box(&self) -> Option<([f64; 5], [f64; 5])> {
        let mut lo = [0.0; 5];
        let mut hi = [0.0; 5];
        for k in 0..5 {
            lo[k] = self.center[k] - self.half[k];
            hi[k] = self.center[k] + self.half[k];
        }
        Some((lo, hi))
    }

    fn closed_form_gradient(&self) -> bool {
        true
    }
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: &[&str] = &["zero", "reeb", "y", "p", "yp", "ball", "box"];

/// Named Hamiltonians: `zero`, `reeb` (`H = 1`), `y`, `p`, `yp`, `ball`
/// (radius 1 at the origin) and `box` (half-widths `(1, 1, 1, 0.5, 0.5)`).
pub fn builtin(name: &str) -> Option<Box<dyn ScalarField5>> {
    Some(match name {
        "zero" => Box::new(Constant(0.0)),
        "reeb" | "one" => Box::new(Constant(1.0)),
        "y" => Box::new(Coordinate(1)),
        "p" => Box::new(Coordinate(4)),
        "yp" => Box::new(YTimesP),
        "ball" => Box::new(BallBump {
            center: [0.0; 5],
            radius: 1.0,
            amp: 1.0,
        }),
        "box" => Box::new(BoxBump {
            center: [0.0; 5],
            half: [1.0, 1.0, 1.0, 0.5, 0.5],
            amp: 0.5,
        }),
        _ => return None,
    })
}

/// `X_H` from a value and gradient at `pt`.
pub fn hamiltonian_vector(pt: Point5, h: f64, g: [f64; 5]) -> Tangent5 {
    let [hx, hy, hz, hq, hp] = g;
    Point5::new(
        -hy,
        pt.y * hz + hx,
        h - pt.y * hy - pt.p * hp,
        -hp,
        pt.p * hz + hq,
    )
}

/// The contact vector field of a Hamiltonian.
#[derive(Debug, Clone)]
pub struct ContactField<H> {
    pub hamiltonian: H,
}

pub fn contact_field_from_hamiltonian<H: ScalarField5>(h: H) -> ContactField<H> {
    ContactField { hamiltonian: h }
}

impl<H: ScalarField5> ContactField<H> {
    pub fn eval(&self, pt: Point5, tau: f64) -> Tangent5 {
        let h = &self.hamiltonian;
        hamiltonian_vector(pt, h.value(pt, tau), h.gradient(pt, tau))
    }
}

/// Residuals of the two defining identities of `X_H`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    /// `max |beta(X_H) - H|`.
    pub beta_residual: f64,
    /// `max |i_{X_H} d beta - (dH(R) beta - dH)|` over the five `dx_k`
    /// coefficients.
    pub cartan_residual: f64,
    /// Largest `|H|` among points outside the declared support box.
    pub outside_support: f64,
    pub points: usize,
}

/// `i_X d beta` as `dx, dy, dz, dq, dp` coefficients; `d beta = dx^dy + dq^dp`.
pub fn interior_dbeta(x: Tangent5) -> [f64; 5] {
    [-x.y, x.x, 0.0, -x.p, x.q]
}

fn cartan_rhs(pt: Point5, g: [f64; 5]) -> [f64; 5] {
    let [hx, hy, hz, hq, hp] = g;
    // dH(R) beta - dH with beta = (-y, 0, 1, -p, 0)
    [-pt.y * hz - hx, -hy, 0.0, -pt.p * hz - hq, -hp]
}

pub fn verify_contact_field_identities<H: ScalarField5>(
    h: &H,
    points: &[Point5],
    tau: f64,
) -> IdentityReport {
    let field = ContactField { hamiltonian: h };
    let rows: Vec<(f64, f64, f64)> = crate::scan::map_collect(points.len(), |i| {
        let pt = points[i];
        let hv = h.value(pt, tau);
        let g = h.gradient(pt, tau);
        let x = hamiltonian_vector(pt, hv, g);
        let beta_res = (beta5(pt, x) - hv).abs();
        let lhs = interior_dbeta(x);
        let rhs = cartan_rhs(pt, g);
        let cartan = (0..5).map(|k| (lhs[k] - rhs[k]).abs()).fold(0.0, f64::max);
        let outside = match h.support_box() {
            Some((lo, hi))
                if (0..5).any(|k| {
                    let a = pt.to_array()[k];
                    a < lo[k] || a > hi[k]
                }) =>
            {
                hv.abs().max(
                    field
                        .eval(pt, tau)
                        .to_array()
                        .iter()
                        .fold(0.0, |m, v| m.max(v.abs())),
                )
            }
            _ => 0.0,
        };
        (beta_res, cartan, outside)
    });
    rows.iter().fold(
        IdentityReport {
            points: points.len(),
            ..Default::default()
        },
        |acc, r| IdentityReport {
            beta_residual: acc.beta_residual.max(r.0),
            cartan_residual: acc.cartan_residual.max(r.1),
            outside_support: acc.outside_support.max(r.2),
            points: acc.points,
        },
    )
}

/// Seeded uniform sample of `n` points in the box `[lo, hi]`.
pub fn random_points(n: usize, lo: [f64; 5], hi: [f64; 5], seed: u64) -> Vec<Point5> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mut a = [0.0; 5];
            for k in 0..5 {
                a[k] = rng.gen_range(lo[k]..=hi[k]);
            }
            Point5::from_array(a)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(name: &str, pt: Point5) -> Tangent5 {
        contact_field_from_hamiltonian(builtin(name).unwrap()).eval(pt, 0.0)
    }

    #[test]
    fn named_fields() {
        let pt = Point5::new(0.3, -0.2, 0.7, 0.1, 0.4);
        assert_eq!(at("reeb", pt), Point5::new(0.0, 0.0, 1.0, 0.0, 0.0));
        assert_eq!(at("y", pt), Point5::new(-1.0, 0.0, 0.0, 0.0, 0.0));
        assert_eq!(at("p", pt), Point5::new(0.0, 0.0, 0.0, -1.0, 0.0));
        assert!(builtin("nope").is_none());
        for name in BUILTIN_NAMES {
            assert!(builtin(name).is_some());
        }
    }

    #[test]
    fn bump_gradients_match_differences() {
        let pts = random_points(200, [-1.2; 5], [1.2; 5], 7);
        for name in ["ball", "box"] {
            let h = builtin(name).unwrap();
            for &pt in &pts {
                let g = h.gradient(pt, 0.0);
                let f = fd_gradient(&h, pt, 0.0, 1e-6);
                for k in 0..5 {
                    assert!((g[k] - f[k]).abs() < 1e-7, "{name} {k}");
                }
            }
        }
    }

    #[test]
    fn identities_hold_for_all_builtins() {
        let pts = random_points(1000, [-1.5; 5], [1.5; 5], 11);
        for name in BUILTIN_NAMES {
            let r = verify_contact_field_identities(&builtin(name).unwrap(), &pts, 0.0);
            assert!(r.beta_residual <= 1e-12, "{name}: {r:?}");
            assert!(r.cartan_residual <= 1e-12, "{name}: {r:?}");
            assert_eq!(r.outside_support, 0.0);
        }
    }
}
