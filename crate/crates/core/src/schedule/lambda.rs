use serde::{Deserialize, Serialize};

use super::{make_split_family, profile, profile_d, split_width, IntervalFamily, LambdaField};
use crate::contact::{Domain, GridSpec};
use crate::scan;
use crate::Result;

/// Four-quarter schedule `lambda_tau(t, s)` built on the split family `A, B`.
///
/// `a(t)` is 1 on `A`, 0 on `B` and moves through the gaps by `profile`.
/// The cumulative levels at `tau = 0, 1/4, 1/2, 3/4, 1` are
/// `0, b(t) b(s), b(t), 1 - a(t) a(s), 1` with `b = 1 - a`; inside each quarter
/// `lambda` interpolates between consecutive levels with `profile(4 tau - q)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaSchedule {
    pub epsilon: f64,
    pub a: IntervalFamily,
    pub b: IntervalFamily,
    width: f64,
}

/// One connected piece of a quarter support: a product of two intervals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuarterSupport {
    pub t: (f64, f64),
    pub s: (f64, f64),
    pub diameter: f64,
}

pub fn build_lambda_schedule(eps: f64) -> Result<LambdaSchedule> {
    let (a, b) = make_split_family(eps)?;
    Ok(LambdaSchedule {
        epsilon: eps,
        a,
        b,
        width: split_width(eps),
    })
}

impl LambdaSchedule {
    /// Width of one block of the splitting.
    pub fn block_width(&self) -> f64 {
        self.width
    }

    /// The indicator-like profile: 1 on `A`, 0 on `B`.
    pub fn a_weight(&self, t: f64) -> f64 {
        let u = ((t + 1.0) / self.width).max(0.0);
        let k = u.floor();
        let r = u - k;
        match (k as usize) % 4 {
            0 => 1.0,
            1 => 1.0 - profile(r),
            2 => 0.0,
            _ => profile(r),
        }
    }

    pub fn b_weight(&self, t: f64) -> f64 {
        1.0 - self.a_weight(t)
    }

    fn levels(&self, t: f64, s: f64) -> [f64; 5] {
        let (at, as_) = (self.a_weight(t), self.a_weight(s));
        let bt = 1.0 - at;
        [0.0, bt * (1.0 - as_), bt, 1.0 - at * as_, 1.0]
    }

    fn quarter(tau: f64) -> (usize, f64) {
        let x = 4.0 * tau;
        let q = (x.floor().max(0.0) as usize).min(3);
        (q, x - q as f64)
    }

    /// The parameter-space support of quarter `q`: products of the
    /// complement components of `A` or `B`.
    pub fn quarter_support(&self, q: usize) -> Vec<QuarterSupport> {
        let ac = self.a.complement();
        let bc = self.b.complement();
        let (ft, fs) = match q {
            0 => (&ac, &ac),
            1 => (&ac, &bc),
            2 => (&bc, &ac),
            _ => (&bc, &bc),
        };
        let mut out = Vec::new();
        for &t in ft.intervals() {
            for &s in fs.intervals() {
                out.push(QuarterSupport {
                    t,
                    s,
                    diameter: (t.1 - t.0).hypot(s.1 - s.0),
                });
            }
        }
        out
    }

    /// Whether `(t, s)` lies in the closure of the quarter-`q` support.
    pub fn in_quarter_support(&self, q: usize, t: f64, s: f64) -> bool {
        let (ft, fs) = match q {
            0 => (&self.a, &self.a),
            1 => (&self.a, &self.b),
            2 => (&self.b, &self.a),
            _ => (&self.b, &self.b),
        };
        !ft.contains(t) && !fs.contains(s)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let quarters: Vec<_> = (0..4)
            .map(|q| {
                let comps: Vec<_> = self
                    .quarter_support(q)
                    .iter()
                    .map(|c| {
                        serde_json::json!({
                            "t": [c.t.0, c.t.1],
                            "s": [c.s.0, c.s.1],
                            "diameter": c.diameter,
                        })
                    })
                    .collect();
                serde_json::json!({ "components": comps })
            })
            .collect();
        serde_json::json!({ "epsilon": self.epsilon, "quarters": quarters })
    }

    /// Grid audit of the schedule invariants.
    pub fn verify(&self, n_space: usize, n_tau: usize) -> ScheduleReport {
        let dom = Domain::<2>::symmetric_unit();
        let grid = GridSpec::<2>::uniform(n_space);
        let taus: Vec<f64> = (0..n_tau).map(|j| j as f64 / (n_tau - 1) as f64).collect();
        let npts = grid.len();

        struct PointStats {
            start: f64,
            end: f64,
            half_on_b: f64,
            min_rate: f64,
            violation: bool,
            marked: [bool; 4],
        }

        let stats: Vec<PointStats> = scan::map_collect(npts, |i| {
            let [t, s] = grid.point(&dom, i);
            let mut min_rate = f64::INFINITY;
            let mut violation = false;
            let mut marked = [false; 4];
            let mut prev = self.lambda(t, s, 0.0);
            for w in taus.windows(2) {
                let cur = self.lambda(t, s, w[1]);
                min_rate = min_rate.min((cur - prev) / (w[1] - w[0]));
                prev = cur;
            }
            for &tau in &taus {
                let (q, r) = Self::quarter(tau);
                if r <= 0.0 || tau >= 1.0 {
                    continue;
                }
                let rate = self.dlambda_dtau(t, s, tau);
                if rate < 0.0 {
                    min_rate = min_rate.min(rate);
                }
                if rate > 1e-10 {
                    marked[q] = true;
                }
                if rate != 0.0 && !self.in_quarter_support(q, t, s) {
                    violation = true;
                }
            }
            let half_on_b = if self.b.contains(t) {
                (self.lambda(t, s, 0.5) - 1.0).abs()
            } else {
                0.0
            };
            PointStats {
                start: self.lambda(t, s, 0.0).abs(),
                end: (self.lambda(t, s, 1.0) - 1.0).abs(),
                half_on_b,
                min_rate,
                violation,
                marked,
            }
        });

        let fold = |f: &dyn Fn(&PointStats) -> f64| stats.iter().map(f).fold(0.0, f64::max);
        let mut quarters = Vec::with_capacity(4);
        for q in 0..4 {
            let marked: Vec<bool> = stats.iter().map(|p| p.marked[q]).collect();
            let comps = scan::grid_components(&grid, &marked);
            let grid_diam = comps
                .iter()
                .map(|c| bbox_diagonal(c.iter().map(|&i| grid.point(&dom, i))))
                .fold(0.0, f64::max);
            let predicted = self.quarter_support(q);
            quarters.push(QuarterAudit {
                predicted_components: predicted.len(),
                grid_components: comps.len(),
                max_diameter: predicted.iter().map(|c| c.diameter).fold(0.0, f64::max),
                grid_max_diameter: grid_diam,
            });
        }
        ScheduleReport {
            epsilon: self.epsilon,
            start_deviation: fold(&|p| p.start),
            end_deviation: fold(&|p| p.end),
            min_rate: stats
                .iter()
                .map(|p| p.min_rate)
                .fold(f64::INFINITY, f64::min),
            support_violations: stats.iter().filter(|p| p.violation).count(),
            half_on_b_deviation: fold(&|p| p.half_on_b),
            quarters,
        }
    }
}

fn bbox_diagonal(points: impl Iterator<Item = [f64; 2]>) -> f64 {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in points {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    if lo[0] > hi[0] {
        0.0
    } else {
        (hi[0] - lo[0]).hypot(hi[1] - lo[1])
    }
}

impl LambdaField for LambdaSchedule {
    fn lambda(&self, t: f64, s: f64, tau: f64) -> f64 {
        if tau <= 0.0 {
            return 0.0;
        }
        if tau >= 1.0 {
            return 1.0;
        }
        let lv = self.levels(t, s);
        let (q, r) = Self::quarter(tau);
        if r == 0.0 {
            return lv[q];
        }
        lv[q] + profile(r) * (lv[q + 1] - lv[q])
    }

    fn dlambda_dtau(&self, t: f64, s: f64, tau: f64) -> f64 {
        if !(0.0..1.0).contains(&tau) {
            return 0.0;
        }
        let lv = self.levels(t, s);
        let (q, r) = Self::quarter(tau);
        4.0 * profile_d(r) * (lv[q + 1] - lv[q])
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuarterAudit {
    pub predicted_components: usize,
    pub grid_components: usize,
    pub max_diameter: f64,
    pub grid_max_diameter: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScheduleReport {
    pub epsilon: f64,
    pub start_deviation: f64,
    pub end_deviation: f64,
    pub min_rate: f64,
    pub support_violations: usize,
    pub half_on_b_deviation: f64,
    pub quarters: Vec<QuarterAudit>,
}

impl ScheduleReport {
    pub fn passes(&self) -> bool {
        self.start_deviation <= 1e-15
            && self.end_deviation <= 1e-15
            && self.min_rate >= -1e-12
            && self.support_violations == 0
            && self.half_on_b_deviation == 0.0
            && self.quarters.iter().all(|q| {
                q.max_diameter < self.epsilon
                    && q.grid_max_diameter < self.epsilon
                    && q.grid_components == q.predicted_components
            })
    }
}
