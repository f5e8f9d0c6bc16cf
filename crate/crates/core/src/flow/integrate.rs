use serde::{Deserialize, Serialize};

use super::{ContactField, ScalarField5};
use crate::contact::{beta5, ContactPoint, Point5};
use crate::{Error, Result};

/// Axis-aligned bounding box that stops an integration when left.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowBox {
    pub lo: [f64; 5],
    pub hi: [f64; 5],
}

impl FlowBox {
    pub fn contains(&self, p: Point5) -> bool {
        let a = p.to_array();
        (0..5).all(|k| a[k] >= self.lo[k] && a[k] <= self.hi[k])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub taus: Vec<f64>,
    pub points: Vec<Point5>,
    /// Set when the path left the bounding box; the last point is the first
    /// one outside.
    pub truncated: bool,
}

impl Trajectory {
    pub fn end(&self) -> Point5 {
        *self
            .points
            .last()
            .expect("trajectory holds the start point")
    }

    /// One `{"tau": .., "pt": [x, y, z, q, p]}` object per line.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for (tau, p) in self.taus.iter().zip(&self.points) {
            out.push_str(&serde_json::json!({ "tau": tau, "pt": p.to_array() }).to_string());
            out.push('\n');
        }
        out
    }
}

fn rk4_step<H: ScalarField5>(f: &ContactField<H>, p: Point5, tau: f64, h: f64) -> Point5 {
    let k1 = f.eval(p, tau);
    let k2 = f.eval(p + k1 * (h / 2.0), tau + h / 2.0);
    let k3 = f.eval(p + k2 * (h / 2.0), tau + h / 2.0);
    let k4 = f.eval(p + k3 * h, tau + h);
    p + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Classical fourth-order Runge-Kutta from `span.0` to `span.1`.
///
/// The step is shrunk so a whole number of steps covers the span.
pub fn integrate_flow<H: ScalarField5>(
    field: &ContactField<H>,
    start: Point5,
    span: (f64, f64),
    step: f64,
    bounds: Option<FlowBox>,
) -> Result<Trajectory> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "step = {step} must be positive"
        )));
    }
    let len = span.1 - span.0;
    let n = ((len.abs() / step).ceil() as usize).max(1);
    let h = len / n as f64;
    let mut taus = Vec::with_capacity(n + 1);
    let mut points = Vec::with_capacity(n + 1);
    taus.push(span.0);
    points.push(start);
    let mut p = start;
    for i in 0..n {
        let tau = span.0 + i as f64 * h;
        p = rk4_step(field, p, tau, h);
        if !p.is_finite() {
            return Err(Error::NonFinite {
                params: vec![tau + h],
            });
        }
        taus.push(if i + 1 == n { span.1 } else { tau + h });
        points.push(p);
        if bounds.is_some_and(|b| !b.contains(p)) {
            return Ok(Trajectory {
                taus,
                points,
                truncated: true,
            });
        }
    }
    Ok(Trajectory {
        taus,
        points,
        truncated: false,
    })
}

fn endpoint<H: ScalarField5>(
    f: &ContactField<H>,
    p: Point5,
    span: (f64, f64),
    step: f64,
) -> Result<Point5> {
    Ok(integrate_flow(f, p, span, step, None)?.end())
}

/// Richardson ratios `e_k / e_{k+1}` where `e_k = |x(h_k) - x(h_{k+1})|` for
/// the successive steps in `steps`. Near 16 for a fourth-order method.
pub fn step_halving_ratios<H: ScalarField5>(
    field: &ContactField<H>,
    start: Point5,
    span: (f64, f64),
    steps: &[f64],
) -> Result<Vec<f64>> {
    let ends = steps
        .iter()
        .map(|&h| endpoint(field, start, span, h))
        .collect::<Result<Vec<_>>>()?;
    let errs: Vec<f64> = ends.windows(2).map(|w| w[0].dist(&w[1])).collect();
    Ok(errs.windows(2).map(|e| e[0] / e[1]).collect())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ConformalReport {
    /// Largest `|beta(J w)| / (|J w| |beta|)` over sample points and the four
    /// basis vectors `w` of `ker beta`.
    pub max_defect: f64,
    pub points: usize,
}

/// Pushes a basis of `ker beta` through the finite-difference Jacobian of the
/// time-`span` flow map and measures how far the images leave `ker beta`.
pub fn verify_conformal_pullback<H: ScalarField5>(
    field: &ContactField<H>,
    points: &[Point5],
    span: (f64, f64),
    step: f64,
) -> Result<ConformalReport> {
    let eps = 1e-6;
    let rows = crate::scan::map_collect(points.len(), |i| -> Result<f64> {
        let p = points[i];
        let end = endpoint(field, p, span, step)?;
        let mut jac = [[0.0; 5]; 5];
        for (k, col) in jac.iter_mut().enumerate() {
            let mut a = p.to_array();
            let mut b = a;
            a[k] += eps;
            b[k] -= eps;
            let fa = endpoint(field, Point5::from_array(a), span, step)?;
            let fb = endpoint(field, Point5::from_array(b), span, step)?;
            *col = ((fa - fb) * (1.0 / (2.0 * eps))).to_array();
        }
        let basis = [
            Point5::new(1.0, 0.0, p.y, 0.0, 0.0),
            Point5::new(0.0, 1.0, 0.0, 0.0, 0.0),
            Point5::new(0.0, 0.0, p.p, 1.0, 0.0),
            Point5::new(0.0, 0.0, 0.0, 0.0, 1.0),
        ];
        let beta_norm = (1.0 + end.y * end.y + end.p * end.p).sqrt();
        let mut worst: f64 = 0.0;
        for w in basis {
            let wa = w.to_array();
            let mut img = [0.0; 5];
            for (k, col) in jac.iter().enumerate() {
                for r in 0..5 {
                    img[r] += col[r] * wa[k];
                }
            }
            let img = Point5::from_array(img);
            let n = img.norm();
            if n > 0.0 {
                worst = worst.max(beta5(end, img).abs() / (n * beta_norm));
            }
        }
        Ok(worst)
    });
    let mut max_defect: f64 = 0.0;
    for r in rows {
        max_defect = max_defect.max(r?);
    }
    Ok(ConformalReport {
        max_defect,
        points: points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{builtin, contact_field_from_hamiltonian, random_points, BallBump};

    #[test]
    fn reeb_and_translation_flows() {
        let reeb = contact_field_from_hamiltonian(builtin("reeb").unwrap());
        let tr = integrate_flow(&reeb, Point5::default(), (0.0, 1.0), 0.01, None).unwrap();
        assert!(tr.end().dist(&Point5::new(0.0, 0.0, 1.0, 0.0, 0.0)) < 1e-12);
        let y = contact_field_from_hamiltonian(builtin("y").unwrap());
        let tr = integrate_flow(&y, Point5::default(), (0.0, 1.0), 0.01, None).unwrap();
        assert!(tr.end().dist(&Point5::new(-1.0, 0.0, 0.0, 0.0, 0.0)) < 1e-12);
        assert_eq!(tr.taus.len(), 101);
        assert_eq!(tr.to_json_lines().lines().count(), 101);
    }

    #[test]
    fn rejects_bad_step_and_truncates() {
        let f = contact_field_from_hamiltonian(builtin("y").unwrap());
        assert!(integrate_flow(&f, Point5::default(), (0.0, 1.0), 0.0, None).is_err());
        let b = FlowBox {
            lo: [-0.5; 5],
            hi: [0.5; 5],
        };
        let tr = integrate_flow(&f, Point5::default(), (0.0, 1.0), 0.1, Some(b)).unwrap();
        assert!(tr.truncated);
        assert!(!b.contains(tr.end()));
    }

    #[test]
    fn fourth_order_convergence() {
        let f = contact_field_from_hamiltonian(builtin("ball").unwrap());
        let start = Point5::new(0.2, 0.1, -0.1, 0.15, 0.05);
        let r = step_halving_ratios(&f, start, (0.0, 1.0), &[0.1, 0.05, 0.025, 0.0125]).unwrap();
        for x in r {
            assert!((12.0..=20.0).contains(&x), "ratio {x}");
        }
    }

    #[test]
    fn outside_support_is_fixed() {
        let h = BallBump {
            center: [0.0; 5],
            radius: 0.5,
            amp: 1.0,
        };
        let f = contact_field_from_hamiltonian(h);
        let p = Point5::new(0.6, 0.0, 0.0, 0.0, 0.1);
        let tr = integrate_flow(&f, p, (0.0, 1.0), 0.01, None).unwrap();
        assert_eq!(tr.end(), p);
    }

    #[test]
    fn transport_stays_in_contact_planes() {
        let pts = random_points(20, [-0.6; 5], [0.6; 5], 3);
        let f = contact_field_from_hamiltonian(builtin("ball").unwrap());
        let r = verify_conformal_pullback(&f, &pts, (0.0, 0.5), 1e-3).unwrap();
        assert!(r.max_defect <= 1e-5, "{r:?}");
        let reeb = contact_field_from_hamiltonian(builtin("reeb").unwrap());
        let r = verify_conformal_pullback(&reeb, &pts, (0.0, 0.5), 1e-3).unwrap();
        assert!(r.max_defect <= 1e-10, "{r:?}");
    }
}
