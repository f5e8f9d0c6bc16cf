use crate::contact::{alpha3, DerivativeMode, Domain, GridSpec, ParamMap, Point3, Point5};
use crate::{scan, Error, Result};

/// `(t, s) -> (gamma_s(t), s, alpha(d/ds gamma_s(t)))`.
#[derive(Debug, Clone)]
pub struct FamilyLift<M> {
    pub family: M,
}

impl<M: ParamMap<2, Point = Point3>> FamilyLift<M> {
    /// `p = dZ/ds - Y dX/ds`.
    pub fn p(&self, u: [f64; 2]) -> f64 {
        alpha3(self.family.eval(u), self.family.partial(u, 1))
    }

    /// `max |p|` over `grid`.
    pub fn contact_angle(&self, grid: &GridSpec<2>) -> Result<f64> {
        let dom = self.family.domain();
        Ok(scan::max_over_grid(&dom, grid, |u| self.p(u).abs())?.value)
    }
}

impl<M: ParamMap<2, Point = Point3>> ParamMap<2> for FamilyLift<M> {
    type Point = Point5;

    fn domain(&self) -> Domain<2> {
        self.family.domain()
    }

    fn eval(&self, u: [f64; 2]) -> Point5 {
        self.family.eval(u).extend(u[1], self.p(u))
    }

    /// Exact in `(x, z, q)` up to the family's own partials; `y` and `p` by
    /// central differences.
    fn partial(&self, u: [f64; 2], axis: usize) -> Point5 {
        let g = self.family.partial(u, axis);
        let dom = self.domain();
        let h = 1e-6 * dom.length(axis);
        let mut a = u;
        let mut b = u;
        a[axis] = (u[axis] - h).max(dom.lo[axis]);
        b[axis] = (u[axis] + h).min(dom.hi[axis]);
        let span = b[axis] - a[axis];
        let dy = (self.family.eval(b).y - self.family.eval(a).y) / span;
        let dp = (self.p(b) - self.p(a)) / span;
        let dq = if axis == 1 { 1.0 } else { 0.0 };
        Point5::new(g.x, dy, g.z, dq, dp)
    }

    fn derivative_mode(&self) -> DerivativeMode {
        self.family.derivative_mode()
    }
}

/// Lifts a family of Legendrian curves (parameters `(t, s)`) to a Legendrian
/// surface in `R^5`.
///
/// Every `s`-row of `grid` is checked: `max_t |alpha(d/dt gamma_s)|` must not
/// exceed `tol`.
pub fn lift_family_to_r5<M>(family: M, grid: &GridSpec<2>, tol: f64) -> Result<FamilyLift<M>>
where
    M: ParamMap<2, Point = Point3>,
{
    let dom = family.domain();
    let [nt, ns] = grid.counts;
    let rows: Vec<(f64, f64)> = scan::map_collect(ns, |j| {
        let s = grid.coord(&dom, 1, j);
        let worst = (0..nt)
            .map(|i| {
                let u = [grid.coord(&dom, 0, i), s];
                alpha3(family.eval(u), family.partial(u, 0)).abs()
            })
            .fold(0.0, |a: f64, b| if b.is_nan() || b > a { b } else { a });
        (s, worst)
    });
    if let Some(&(s, defect)) = rows.iter().find(|(_, d)| !(*d <= tol)) {
        return Err(Error::SliceDefect { s, defect });
    }
    Ok(FamilyLift { family })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::{legendrian_defect, FnMap};
    use crate::zoo::{lambda_i, sigma_partials, Lambda};

    #[test]
    fn constant_family_gives_lambda() {
        let fam = FnMap::new(Domain::symmetric_unit(), |u: [f64; 2]| {
            crate::zoo::gamma_m(2, u[0])
        })
        .with_partial(|u, axis| {
            if axis == 0 {
                sigma_partials(2, u[0], 0.0).0
            } else {
                Point3::default()
            }
        });
        let lift = lift_family_to_r5(fam, &GridSpec::uniform(50), 1e-9).unwrap();
        for (t, s) in [(0.1, 0.2), (-0.7, 0.9)] {
            let p = lift.eval([t, s]);
            assert_eq!(p, lambda_i(2, t, s));
        }
        let d = legendrian_defect(&lift, &GridSpec::uniform(100)).unwrap();
        assert!(d <= 1e-8);
        let direct = legendrian_defect(&Lambda::new(2), &GridSpec::uniform(100)).unwrap();
        assert!(direct <= 1e-9);
    }

    #[test]
    fn vertical_shift_family() {
        let c = 0.7;
        let fam = FnMap::new(Domain::symmetric_unit(), move |u: [f64; 2]| {
            Point3::new(u[0], 0.0, c * u[1])
        });
        let lift = lift_family_to_r5(fam, &GridSpec::uniform(20), 1e-9).unwrap();
        for k in 0..10 {
            let u = [-0.9 + 0.2 * k as f64, 0.3];
            assert!((lift.eval(u).p - c).abs() < 1e-8);
        }
        assert!(legendrian_defect(&lift, &GridSpec::uniform(40)).unwrap() <= 1e-8);
    }

    #[test]
    fn non_legendrian_slice_rejected() {
        let fam = FnMap::new(Domain::symmetric_unit(), |u: [f64; 2]| {
            Point3::new(0.0, 0.0, u[0] * (1.0 + u[1]))
        });
        match lift_family_to_r5(fam, &GridSpec::uniform(11), 1e-9) {
            Err(Error::SliceDefect { s, defect }) => {
                assert!(s > -1.0);
                assert!(defect > 0.0);
            }
            Err(other) => panic!("{other}"),
            Ok(_) => panic!("accepted a non-Legendrian family"),
        }
    }
}
