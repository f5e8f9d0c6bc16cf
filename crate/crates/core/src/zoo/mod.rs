//! Closed-form curve and surface families.
//!
//! `gamma_m` is a Legendrian helix-like curve whose front zig-zags around the
//! z-axis with `~m^2/pi` cusps; it converges in C^0 to the transverse line
//! `gamma_inf(t) = (0, 0, t)` at rate `~sqrt(2)/m`. `sigma` is the ruled
//! surface shrinking the `(x, y)` circle linearly to zero, and the `R^5`
//! versions carry an extra `(q, p) = (s, 0)` factor.

mod cusps;
mod plan;

pub use cusps::{
    cusp_counts, cusp_set, cusps_between, detect_front_cusps, equidistribution_filter,
    fractional_part, t_set, z_axis_crossings, CuspRecord, CuspSide,
};
pub use plan::{build_sequence_plan, SequencePlan};

use serde::{Deserialize, Serialize};

use crate::contact::{DerivativeMode, Domain, ParamMap, Point3, Point5};

/// `gamma_m(t)`.
pub fn gamma_m(m: u32, t: f64) -> Point3 {
    sigma(m, t, 0.0)
}

/// `gamma_inf(t) = (0, 0, t)`.
pub fn gamma_inf(t: f64) -> Point3 {
    Point3::new(0.0, 0.0, t)
}

/// `Lambda_i(t, s) = (gamma_m(t), s, 0)`.
pub fn lambda_i(m: u32, t: f64, s: f64) -> Point5 {
    gamma_m(m, t).extend(s, 0.0)
}

/// `Lambda_inf(t, s) = (0, 0, t, s, 0)`.
pub fn lambda_inf(t: f64, s: f64) -> Point5 {
    Point5::new(0.0, 0.0, t, s, 0.0)
}

/// The stretching surface; `w = 0` is `gamma_m`, `w = 1` is `gamma_inf`.
pub fn sigma(m: u32, t: f64, w: f64) -> Point3 {
    let mf = m as f64;
    let th = mf * mf * t;
    let (s, c) = th.sin_cos();
    let u = 1.0 - w;
    Point3::new(
        u * (s - c) / mf,
        u * (s + c) / mf,
        t - u * u * (2.0 * th).cos() / (2.0 * mf * mf),
    )
}

/// `(d/dt, d/dw)` of [`sigma`].
pub fn sigma_partials(m: u32, t: f64, w: f64) -> (Point3, Point3) {
    let mf = m as f64;
    let th = mf * mf * t;
    let (s, c) = th.sin_cos();
    let u = 1.0 - w;
    let dt = Point3::new(
        u * mf * (c + s),
        u * mf * (c - s),
        1.0 + u * u * (2.0 * th).sin(),
    );
    let dw = Point3::new(
        (c - s) / mf,
        -(s + c) / mf,
        u * (2.0 * th).cos() / (mf * mf),
    );
    (dt, dw)
}

/// `Pi(t, s, w) = (sigma(t, w), s, 0)`.
pub fn pi_embedding(m: u32, t: f64, s: f64, w: f64) -> Point5 {
    sigma(m, t, w).extend(s, 0.0)
}

/// `sqrt(2/m^2 + 1/(4 m^4))`, the exact sup distance from `gamma_m` to `gamma_inf`.
pub fn gamma_c0_to_inf(m: u32) -> f64 {
    let m2 = (m as f64).powi(2);
    (2.0 / m2 + 1.0 / (4.0 * m2 * m2)).sqrt()
}

/// Diameter of the fiber `w -> sigma(t, w)` by brute-force pairwise scan.
pub fn fiber_diameter(m: u32, t: f64, samples: usize) -> f64 {
    let pts: Vec<Point3> = (0..samples)
        .map(|j| sigma(m, t, j as f64 / (samples - 1) as f64))
        .collect();
    let mut best = 0.0f64;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            best = best.max(crate::contact::ContactPoint::dist(a, b));
        }
    }
    best
}

/// `gamma_m` as a map on `[-1, 1]`.
#[derive(Debug, Clone, Copy)]
pub struct Gamma {
    pub m: u32,
}

impl Gamma {
    pub fn new(m: u32) -> Self {
        assert!(m >= 1, "frequency must be positive");
        Self { m }
    }
}

impl ParamMap<1> for Gamma {
    type Point = Point3;

    fn domain(&self) -> Domain<1> {
        Domain::symmetric_unit()
    }

    fn eval(&self, u: [f64; 1]) -> Point3 {
        gamma_m(self.m, u[0])
    }

    fn partial(&self, u: [f64; 1], _axis: usize) -> Point3 {
        sigma_partials(self.m, u[0], 0.0).0
    }

    fn derivative_mode(&self) -> DerivativeMode {
        DerivativeMode::ClosedForm
    }
}

/// `gamma_inf` on `[-1, 1]`.
#[derive(Debug, Clone, Copy, Default)]
pub struct GammaInf;

impl ParamMap<1> for GammaInf {
    type Point = Point3;

    fn domain(&self) -> Domain<1> {
        Domain::symmetric_unit()
    }

    fn eval(&self, u: [f64; 1]) -> Point3 {
        gamma_inf(u[0])
    }

    fn partial(&self, _u: [f64; 1], _axis: usize) -> Point3 {
        Point3::new(0.0, 0.0, 1.0)
    }

    fn derivative_mode(&self) -> DerivativeMode {
        DerivativeMode::ClosedForm
    }
}

/// `Lambda_i` for frequency `m` on `[-1, 1]^2`.
#[derive(Debug, Clone, Copy)]
pub struct Lambda {
    pub m: u32,
}

impl Lambda {
    pub fn new(m: u32) -> Self {
        assert!(m >= 1, "frequency must be positive");
        Self { m }
    }
}

impl ParamMap<2> for Lambda {
    type Point = Point5;

    fn domain(&self) -> Domain<2> {
        Domain::symmetric_unit()
    }

    fn eval(&self, u: [f64; 2]) -> Point5 {
        lambda_i(self.m, u[0], u[1])
    }

    fn partial(&self, u: [f64; 2], axis: usize) -> Point5 {
        if axis == 0 {
            sigma_partials(self.m, u[0], 0.0).0.extend(0.0, 0.0)
        } else {
            Point5::new(0.0, 0.0, 0.0, 1.0, 0.0)
        }
    }

    fn derivative_mode(&self) -> DerivativeMode {
        DerivativeMode::ClosedForm
    }
}

/// `Lambda_inf` on `[-1, 1]^2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct LambdaInf;

impl ParamMap<2> for LambdaInf {
    type Point = Point5;

    fn domain(&self) -> Domain<2> {
        Domain::symmetric_unit()
    }

    fn eval(&self, u: [f64; 2]) -> Point5 {
        lambda_inf(u[0], u[1])
    }

    fn partial(&self, _u: [f64; 2], axis: usize) -> Point5 {
        if axis == 0 {
            Point5::new(0.0, 0.0, 1.0, 0.0, 0.0)
        } else {
            Point5::new(0.0, 0.0, 0.0, 1.0, 0.0)
        }
    }

    fn derivative_mode(&self) -> DerivativeMode {
        DerivativeMode::ClosedForm
    }
}

/// The surface `sigma` on `[-1, 1] x [0, 1]`, parameters `(t, w)`.
#[derive(Debug, Clone, Copy)]
pub struct Sigma {
    pub m: u32,
}

impl Sigma {
    pub fn new(m: u32) -> Self {
        assert!(m >= 1, "frequency must be positive");
        Self { m }
    }
}

impl ParamMap<2> for Sigma {
    type Point = Point3;

    fn domain(&self) -> Domain<2> {
        Domain::new([-1.0, 0.0], [1.0, 1.0])
    }

    fn eval(&self, u: [f64; 2]) -> Point3 {
        sigma(self.m, u[0], u[1])
    }

    fn partial(&self, u: [f64; 2], axis: usize) -> Point3 {
        let (dt, dw) = sigma_partials(self.m, u[0], u[1]);
        if axis == 0 {
            dt
        } else {
            dw
        }
    }

    fn derivative_mode(&self) -> DerivativeMode {
        DerivativeMode::ClosedForm
    }
}

/// `Pi` on `[-1, 1]^2 x [0, 1]`, parameters `(t, s, w)`.
#[derive(Debug, Clone, Copy)]
pub struct PiEmbedding {
    pub m: u32,
}

impl PiEmbedding {
    pub fn new(m: u32) -> Self {
        assert!(m >= 1, "frequency must be positive");
        Self { m }
    }

    /// `diam Pi({(t, s)} x [0, 1])`; independent of `s`.
    pub fn fiber_diameter(&self, t: f64, samples: usize) -> f64 {
        fiber_diameter(self.m, t, samples)
    }
}

impl ParamMap<3> for PiEmbedding {
    type Point = Point5;

    fn domain(&self) -> Domain<3> {
        Domain::new([-1.0, -1.0, 0.0], [1.0, 1.0, 1.0])
    }

    fn eval(&self, u: [f64; 3]) -> Point5 {
        pi_embedding(self.m, u[0], u[1], u[2])
    }

    fn partial(&self, u: [f64; 3], axis: usize) -> Point5 {
        let (dt, dw) = sigma_partials(self.m, u[0], u[2]);
        match axis {
            0 => dt.extend(0.0, 0.0),
            1 => Point5::new(0.0, 0.0, 0.0, 1.0, 0.0),
            _ => dw.extend(0.0, 0.0),
        }
    }

    fn derivative_mode(&self) -> DerivativeMode {
        DerivativeMode::ClosedForm
    }
}

/// Sampled curve in the export format `{kind, params, samples: [[t, x, y, z]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveExport {
    pub kind: String,
    pub params: serde_json::Value,
    pub samples: Vec<[f64; 4]>,
}

impl CurveExport {
    /// Samples `curve` at `n` equispaced parameters of its domain.
    pub fn sample<M>(kind: &str, params: serde_json::Value, curve: &M, n: usize) -> Self
    where
        M: ParamMap<1, Point = Point3>,
    {
        let grid = crate::contact::GridSpec::<1>::uniform(n.max(2));
        let dom = curve.domain();
        let samples = (0..grid.len())
            .map(|i| {
                let u = grid.point(&dom, i);
                let p = curve.eval(u);
                [u[0], p.x, p.y, p.z]
            })
            .collect();
        Self {
            kind: kind.to_string(),
            params,
            samples,
        }
    }

    pub fn gamma(m: u32, n: usize) -> Self {
        Self::sample("gamma_m", serde_json::json!({ "m": m }), &Gamma::new(m), n)
    }

    /// The `w`-slice `t -> sigma(t, w)`.
    pub fn sigma_slice(m: u32, w: f64, n: usize) -> Self {
        let slice = crate::contact::Slice2::new(Sigma::new(m), 1, w);
        Self::sample("sigma", serde_json::json!({ "m": m, "w": w }), &slice, n)
    }

    pub fn to_json(&self) -> crate::Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> crate::Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
