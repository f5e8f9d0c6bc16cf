use serde::{Deserialize, Serialize};

use crate::contact::Point5;
use crate::zoo::{cusp_set, gamma_m, t_set};
use crate::{scan, Error, Result};

/// The chart `C(z_i) x V_rho(q0)` around the `i`-th z-axis crossing of
/// `gamma_m`, `z_i = (4i + 1) pi / (4 m^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LooseChartSpec {
    pub m: u32,
    pub i: i64,
    pub rho: f64,
    pub q0: f64,
}

pub fn z_index_value(m: u32, i: i64) -> f64 {
    let m = f64::from(m);
    (4 * i + 1) as f64 * std::f64::consts::PI / (4.0 * m * m)
}

impl LooseChartSpec {
    pub fn new(m: u32, i: i64, rho: f64, q0: f64) -> Result<Self> {
        if m == 0 || !(rho > 1.0) || !(q0.abs() < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "chart needs m >= 1, rho > 1, |q0| < 1 (got m = {m}, rho = {rho}, q0 = {q0})"
            )));
        }
        Ok(Self { m, i, rho, q0 })
    }

    pub fn z_i(&self) -> f64 {
        z_index_value(self.m, self.i)
    }

    /// Half-widths of `C x V` in `(x, y, z, q, p)` order.
    pub fn half_widths(&self) -> [f64; 5] {
        let m = f64::from(self.m);
        let v = 1.5 * self.rho / m;
        [1.5 / m, 1.5 / m, 4.5 / (m * m), v, v]
    }

    pub fn center(&self) -> [f64; 5] {
        [0.0, 0.0, self.z_i(), self.q0, 0.0]
    }

    /// Membership in the open box `C(z_i)`.
    pub fn c_contains(&self, x: f64, y: f64, z: f64) -> bool {
        let h = self.half_widths();
        x.abs() < h[0] && y.abs() < h[1] && (z - self.z_i()).abs() < h[2]
    }

    pub fn contains(&self, pt: Point5) -> bool {
        let (h, c, a) = (self.half_widths(), self.center(), pt.to_array());
        (0..5).all(|k| (a[k] - c[k]).abs() < h[k])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LooseChartReport {
    pub spec: LooseChartSpec,
    pub lo: [f64; 5],
    pub hi: [f64; 5],
    /// `Z_rho(q0)`: the `q`-interval at `p = 0`.
    pub z_rho: (f64, f64),
    /// Whether the closed chart sits inside
    /// `{|x|, |y|, |p| < 10/m, |z|, |q| < 1 + 10/m}`.
    pub inside_neighbourhood: bool,
    pub arc: ChartArc,
}

pub fn loose_chart_boxes(spec: &LooseChartSpec, samples: usize) -> LooseChartReport {
    let (h, c) = (spec.half_widths(), spec.center());
    let lo: [f64; 5] = std::array::from_fn(|k| c[k] - h[k]);
    let hi: [f64; 5] = std::array::from_fn(|k| c[k] + h[k]);
    let m = f64::from(spec.m);
    let bound = [10.0 / m, 10.0 / m, 1.0 + 10.0 / m, 1.0 + 10.0 / m, 10.0 / m];
    let inside = (0..5).all(|k| lo[k].abs().max(hi[k].abs()) <= bound[k]);
    LooseChartReport {
        spec: *spec,
        lo,
        hi,
        z_rho: (lo[3], hi[3]),
        inside_neighbourhood: inside,
        arc: chart_arc(spec.m, spec.i, samples),
    }
}

/// `(m/3 x, m/3 y, m^2/9 (z - z_i), m/3 (q - q0), m/3 p)` onto
/// `[-1/2, 1/2]^3 x [-rho/2, rho/2]^2`.
pub fn loose_chart_rescale(spec: &LooseChartSpec, pt: Point5) -> Result<Point5> {
    if !spec.contains(pt) {
        return Err(Error::OutsideDomain(pt.to_array().to_vec()));
    }
    let k = f64::from(spec.m) / 3.0;
    Ok(Point5::new(
        k * pt.x,
        k * pt.y,
        k * k * (pt.z - spec.z_i()),
        k * (pt.q - spec.q0),
        k * pt.p,
    ))
}

pub fn loose_chart_unscale(spec: &LooseChartSpec, pt: Point5) -> Point5 {
    let k = f64::from(spec.m) / 3.0;
    Point5::new(
        pt.x / k,
        pt.y / k,
        pt.z / (k * k) + spec.z_i(),
        pt.q / k + spec.q0,
        pt.p / k,
    )
}

/// How `gamma_m` on `[-1, 1]` meets `C(z_i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartArc {
    /// Maximal parameter runs inside the chart.
    pub runs: Vec<(f64, f64)>,
    /// Local extrema of `x` along sampled runs.
    pub sampled_cusps: usize,
    /// Closed-form cusp parameters inside the runs.
    pub cusps: Vec<f64>,
}

impl ChartArc {
    /// One arc carrying exactly two cusps.
    pub fn is_single_zigzag(&self) -> bool {
        self.runs.len() == 1 && self.cusps.len() == 2 && self.sampled_cusps == 2
    }
}

/// Scans the parameter window where `|z - z_i| < 9/(2m^2)` can hold.
pub fn chart_arc(m: u32, i: i64, samples: usize) -> ChartArc {
    let spec = LooseChartSpec {
        m,
        i,
        rho: 2.0,
        q0: 0.0,
    };
    let mf = f64::from(m);
    // |t - z(t)| <= 1/(2 m^2)
    let reach = 5.0 / (mf * mf);
    let lo = (spec.z_i() - reach).max(-1.0);
    let hi = (spec.z_i() + reach).min(1.0);
    if lo >= hi {
        return ChartArc {
            runs: vec![],
            sampled_cusps: 0,
            cusps: vec![],
        };
    }
    let ts: Vec<f64> = (0..samples)
        .map(|k| lo + (hi - lo) * k as f64 / (samples - 1) as f64)
        .collect();
    let inside = scan::map_collect(ts.len(), |k| {
        let g = gamma_m(m, ts[k]);
        spec.c_contains(g.x, g.y, g.z)
    });
    let mut runs = Vec::new();
    let mut sampled_cusps = 0;
    let mut k = 0;
    while k < ts.len() {
        if !inside[k] {
            k += 1;
            continue;
        }
        let start = k;
        while k < ts.len() && inside[k] {
            k += 1;
        }
        let xs: Vec<f64> = ts[start..k].iter().map(|&t| gamma_m(m, t).x).collect();
        sampled_cusps += xs
            .windows(3)
            .filter(|w| (w[1] - w[0]) * (w[2] - w[1]) < 0.0)
            .count();
        runs.push((ts[start], ts[k - 1]));
    }
    let cusps = cusp_set(m)
        .into_iter()
        .map(|c| c.t)
        .filter(|&t| runs.iter().any(|&(a, b)| t >= a && t <= b))
        .collect();
    ChartArc {
        runs,
        sampled_cusps,
        cusps,
    }
}

/// Indices `i` whose crossing and both flanking cusps
/// `(4i - 1) pi/(4m^2)`, `(4i + 3) pi/(4m^2)` lie in `(-1, 1)`.
pub fn admissible_indices(m: u32) -> Vec<i64> {
    let mf = f64::from(m);
    let unit = std::f64::consts::PI / (4.0 * mf * mf);
    let top = (1.0 / unit).ceil() as i64 / 4 + 2;
    (-top..=top)
        .filter(|&i| {
            let a = (4 * i - 1) as f64 * unit;
            let b = (4 * i + 3) as f64 * unit;
            a > -1.0 && b < 1.0
        })
        .collect()
}

/// For consecutive points of `T_m`, checks that the cusps between them fit
/// in one chart `C(z_i)`. Returns `(pairs, contained)`.
pub fn cusp_pairs_in_charts(m: u32) -> (usize, usize) {
    let ts = t_set(m);
    let cusps: Vec<f64> = cusp_set(m).into_iter().map(|c| c.t).collect();
    let unit = std::f64::consts::PI / (4.0 * f64::from(m).powi(2));
    let mut pairs = 0;
    let mut ok = 0;
    for w in ts.windows(2) {
        let inner: Vec<f64> = cusps
            .iter()
            .copied()
            .filter(|&t| t > w[0] && t < w[1])
            .collect();
        if inner.len() != 2 {
            continue;
        }
        pairs += 1;
        let mid = 0.5 * (inner[0] + inner[1]);
        let i = ((mid / unit - 1.0) / 4.0).round() as i64;
        let spec = LooseChartSpec {
            m,
            i,
            rho: 2.0,
            q0: 0.0,
        };
        if inner.iter().all(|&t| {
            let g = gamma_m(m, t);
            spec.c_contains(g.x, g.y, g.z)
        }) {
            ok += 1;
        }
    }
    (pairs, ok)
}

/// `beta(D Phi v) / beta(v)` at `pt` for the tangent `v`.
pub fn pullback_ratio(spec: &LooseChartSpec, pt: Point5, v: Point5) -> Result<f64> {
    let k = f64::from(spec.m) / 3.0;
    let img = loose_chart_rescale(spec, pt)?;
    let dv = Point5::new(k * v.x, k * v.y, k * k * v.z, k * v.q, k * v.p);
    Ok(crate::contact::beta5(img, dv) / crate::contact::beta5(pt, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::ContactPoint;

    #[test]
    fn box_for_m2() {
        let spec = LooseChartSpec::new(2, 0, 2.0, 0.0).unwrap();
        let r = loose_chart_boxes(&spec, 20_001);
        let pi16 = std::f64::consts::PI / 16.0;
        assert!((spec.z_i() - pi16).abs() < 1e-15);
        assert_eq!(r.lo[0], -0.75);
        assert_eq!(r.hi[1], 0.75);
        assert!((r.lo[2] - (pi16 - 1.125)).abs() < 1e-15);
        assert!((r.hi[2] - (pi16 + 1.125)).abs() < 1e-15);
        assert!(r.inside_neighbourhood);
        assert!(r.arc.is_single_zigzag(), "{:?}", r.arc);
    }

    #[test]
    fn rescale_corners_and_inverse() {
        let spec = LooseChartSpec::new(22, 3, 1.5, 0.2).unwrap();
        let c = spec.center();
        assert_eq!(
            loose_chart_rescale(&spec, Point5::from_array(c))
                .unwrap()
                .max_abs(),
            0.0
        );
        let h = spec.half_widths();
        let near: [f64; 5] = std::array::from_fn(|k| c[k] + h[k] * (1.0 - 1e-12));
        let img = loose_chart_rescale(&spec, Point5::from_array(near)).unwrap();
        let target = [0.5, 0.5, 0.5, 0.75, 0.75];
        for (a, b) in img.to_array().iter().zip(target) {
            assert!((a - b).abs() < 1e-11);
        }
        let back = loose_chart_unscale(&spec, img);
        assert!(back.dist(&Point5::from_array(near)) < 1e-14);
        let outside = Point5::new(1.0, 0.0, spec.z_i(), 0.2, 0.0);
        assert!(matches!(
            loose_chart_rescale(&spec, outside),
            Err(Error::OutsideDomain(_))
        ));
    }

    #[test]
    fn pullback_factor() {
        let spec = LooseChartSpec::new(22, 0, 2.0, 0.0).unwrap();
        let pt = Point5::new(0.01, -0.02, spec.z_i() + 1e-3, 0.05, 0.03);
        let v = Point5::new(0.3, -1.0, 0.7, 0.2, 0.4);
        let r = pullback_ratio(&spec, pt, v).unwrap();
        assert!((r - 22.0 * 22.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn every_admissible_chart_is_a_zigzag() {
        for m in [2u32, 22] {
            let idx = admissible_indices(m);
            assert!(!idx.is_empty());
            for i in idx {
                let arc = chart_arc(m, i, 4001);
                assert!(arc.is_single_zigzag(), "m {m} i {i}: {arc:?}");
            }
        }
        assert_eq!(admissible_indices(2), vec![-1, 0]);
    }

    #[test]
    fn cusp_pairs_sit_in_charts() {
        for m in [4u32, 22, 27] {
            let (pairs, ok) = cusp_pairs_in_charts(m);
            assert!(pairs > 0);
            assert_eq!(pairs, ok);
        }
    }
}
