use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{psi_delta, psi_delta_ddelta, psi_delta_du};

/// Which `delta(x)` drives the family `(x, u) -> (x, psi_{delta(x)}(u))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum WrinkleVariant {
    /// `delta = 1 - |x|^2`, singular on `|x|^2 + 3u^2 = 1`.
    Standard,
    /// `delta = |x|^2 - 1`, singular on `|x|^2 - 3u^2 = 1`.
    InsideOut,
    /// `delta = t - |x|^2`, singular on `|x|^2 + 3u^2 = t`.
    Embryo(f64),
}

/// `R^n x R -> R^n x R^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WrinkleMap {
    pub n: usize,
    pub variant: WrinkleVariant,
}

impl WrinkleMap {
    pub fn new(n: usize, variant: WrinkleVariant) -> Self {
        Self { n, variant }
    }

    fn delta(&self, r2: f64) -> (f64, f64) {
        // (delta, d delta / d r2)
        match self.variant {
            WrinkleVariant::Standard => (1.0 - r2, -1.0),
            WrinkleVariant::InsideOut => (r2 - 1.0, 1.0),
            WrinkleVariant::Embryo(t) => (t - r2, -1.0),
        }
    }

    pub fn eval(&self, x: &[f64], u: f64) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let (a, b) = psi_delta(self.delta(r2).0, u);
        let mut out = x.to_vec();
        out.push(a);
        out.push(b);
        out
    }

    /// `(n + 2) x (n + 1)` Jacobian, columns `x_1 .. x_n, u`.
    pub fn jacobian(&self, x: &[f64], u: f64) -> DMatrix<f64> {
        let n = self.n;
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let (delta, dd) = self.delta(r2);
        let (pa, pb) = psi_delta_ddelta(delta, u);
        let (ua, ub) = psi_delta_du(delta, u);
        let mut j = DMatrix::zeros(n + 2, n + 1);
        for k in 0..n {
            j[(k, k)] = 1.0;
            j[(n, k)] = pa * dd * 2.0 * x[k];
            j[(n + 1, k)] = pb * dd * 2.0 * x[k];
        }
        j[(n, n)] = ua;
        j[(n + 1, n)] = ub;
        j
    }

    /// The analytic singular-locus function: zero exactly where the rank drops.
    pub fn locus_function(&self, x: &[f64], u: f64) -> f64 {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        3.0 * u * u - self.delta(r2).0
    }
}

pub fn wrinkle(n: usize, x: &[f64], u: f64) -> Vec<f64> {
    WrinkleMap::new(n, WrinkleVariant::Standard).eval(x, u)
}

pub fn inside_out_wrinkle(x: &[f64], u: f64) -> Vec<f64> {
    WrinkleMap::new(x.len(), WrinkleVariant::InsideOut).eval(x, u)
}

pub fn embryo_family(t: f64, x: &[f64], u: f64) -> Vec<f64> {
    WrinkleMap::new(x.len(), WrinkleVariant::Embryo(t)).eval(x, u)
}

/// Rank with singular values below `rel_tol * sigma_max` treated as zero.
pub fn numerical_rank(j: &DMatrix<f64>, rel_tol: f64) -> usize {
    let sv = j.singular_values();
    let top = sv.max();
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

fn min_singular_ratio(j: &DMatrix<f64>) -> f64 {
    let sv = j.singular_values();
    sv.min() / sv.max()
}

/// Singular points found along rays through the origin of `(x, u)` space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocusTrace {
    /// `(x_1 .. x_n, u)` of every located rank drop.
    pub points: Vec<Vec<f64>>,
    /// Largest `|r_found - r_exact|` against the analytic radius on the same ray.
    pub max_radial_error: f64,
    /// Largest `sigma_min / sigma_max` at the located points.
    pub max_singular_ratio: f64,
    pub rays: usize,
}

impl LocusTrace {
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.points.iter().enumerate() {
            for b in &self.points[i + 1..] {
                let s: f64 = a.iter().zip(b).map(|(p, q)| (p - q).powi(2)).sum();
                d = d.max(s.sqrt());
            }
        }
        d
    }
}

/// Walks `rays` directions in the plane spanned by `x_1` and `u` out to
/// radius `r_max`, bracketing sign changes of the Jacobian's `d x/d u` entry
/// and refining by bisection.
///
/// Each hit is compared with the analytic locus along the same ray.
pub fn trace_singular_locus(
    map: &WrinkleMap,
    rays: usize,
    r_max: f64,
    samples: usize,
) -> LocusTrace {
    let n = map.n;
    let at = |phi: f64, r: f64| -> (Vec<f64>, f64) {
        let mut x = vec![0.0; n];
        x[0] = r * phi.cos();
        (x, r * phi.sin())
    };
    let entry = |phi: f64, r: f64| {
        let (x, u) = at(phi, r);
        map.jacobian(&x, u)[(n, n)]
    };
    let mut points = Vec::new();
    let mut max_radial_error: f64 = 0.0;
    let mut max_singular_ratio: f64 = 0.0;
    for k in 0..rays {
        let phi = std::f64::consts::TAU * k as f64 / rays as f64;
        let step = r_max / samples as f64;
        for i in 0..samples {
            let (mut a, mut b) = (i as f64 * step, (i + 1) as f64 * step);
            let (mut fa, fb) = (entry(phi, a), entry(phi, b));
            if fa * fb > 0.0 || (fb == 0.0 && fa != 0.0 && i + 1 < samples) {
                continue;
            }
            if fa == 0.0 {
                b = a;
            }
            for _ in 0..200 {
                if b - a < 1e-15 {
                    break;
                }
                let c = 0.5 * (a + b);
                let fc = entry(phi, c);
                if fa * fc <= 0.0 {
                    b = c;
                } else {
                    a = c;
                    fa = fc;
                }
            }
            let r = 0.5 * (a + b);
            let (x, u) = at(phi, r);
            max_singular_ratio = max_singular_ratio.max(min_singular_ratio(&map.jacobian(&x, u)));
            // the locus function is a quadratic form in r plus a constant
            let (c2, c0) = {
                let (x1, u1) = at(phi, 1.0);
                let q = map.locus_function(&x1, u1) - map.locus_function(&vec![0.0; n], 0.0);
                (q, map.locus_function(&vec![0.0; n], 0.0))
            };
            let exact = if c2 != 0.0 && -c0 / c2 >= 0.0 {
                (-c0 / c2).sqrt()
            } else {
                0.0
            };
            max_radial_error = max_radial_error.max((r - exact).abs());
            let mut p = x;
            p.push(u);
            points.push(p);
        }
    }
    LocusTrace {
        points,
        max_radial_error,
        max_singular_ratio,
        rays,
    }
}
