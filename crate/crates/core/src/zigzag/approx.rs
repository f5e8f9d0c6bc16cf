use serde::{Deserialize, Serialize};

use super::front::{lift_to_legendrian, smooth_front, FrontPath, LegendrianLift, StyleChoice};
use super::{plan_zigzag, sample_front, ZigZagPlan};
use crate::contact::{c0_distance, DerivativeMode, Domain, FnMap, GridSpec, ParamMap, Point3};
use crate::{scan, Result};

/// Output of [`approximate_curve`].
#[derive(Debug, Clone)]
pub struct Approximation {
    pub plan: ZigZagPlan,
    pub lift: LegendrianLift<FrontPath>,
}

/// Distances of an approximation to its target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproximationError {
    /// Sup distance in `R^3`.
    pub c0: f64,
    /// Sup distance of the `(x, z)` fronts.
    pub front_c0: f64,
    /// Sup of `|y_approx - y_target|`.
    pub slope_c0: f64,
}

impl Approximation {
    pub fn front(&self) -> &FrontPath {
        &self.lift.front
    }

    pub fn cusp_count(&self) -> usize {
        self.lift.front.cusp_count()
    }

    pub fn error_to<M>(&self, target: &M, grid: &GridSpec<1>) -> Result<ApproximationError>
    where
        M: ParamMap<1, Point = Point3>,
    {
        let c0 = c0_distance(&self.lift, target, grid)?;
        let dom = target.domain();
        let front_c0 = scan::max_over_grid(&dom, grid, |u| {
            let (a, b) = (self.lift.eval(u), target.eval(u));
            (a.x - b.x).hypot(a.z - b.z)
        })?
        .value;
        let slope_c0 = scan::max_over_grid(&dom, grid, |u| {
            (self.lift.eval(u).y - target.eval(u).y).abs()
        })?
        .value;
        Ok(ApproximationError {
            c0,
            front_c0,
            slope_c0,
        })
    }
}

/// Zig-zag Legendrian approximation of `target` from `m` base points and
/// offset `d`. The target's `y` coordinate is the slope field.
pub fn approximate_curve<M>(target: &M, m: usize, d: f64) -> Result<Approximation>
where
    M: ParamMap<1, Point = Point3>,
{
    let samples = sample_front(target, m.max(2));
    let plan = plan_zigzag(&samples, d)?;
    let front = smooth_front(&plan, StyleChoice::Auto)?;
    let lift = lift_to_legendrian(front, 16 * 3 * plan.gaps())?;
    Ok(Approximation { plan, lift })
}

/// `(t, s) -> approximate_curve(target(., s), m, d)(t)`.
///
/// `t`-derivatives are those of the lift; `s`-derivatives are central
/// differences across rebuilt approximations.
pub struct FamilyApproximation<T> {
    pub target: T,
    pub m: usize,
    pub d: f64,
}

impl<T: ParamMap<2, Point = Point3>> FamilyApproximation<T> {
    pub fn new(target: T, m: usize, d: f64) -> Self {
        Self { target, m, d }
    }

    pub fn slice(&self, s: f64) -> Result<Approximation> {
        let dom = self.target.domain();
        let slice = FnMap::new(Domain::new([dom.lo[0]], [dom.hi[0]]), |u: [f64; 1]| {
            self.target.eval([u[0], s])
        });
        approximate_curve(&slice, self.m, self.d)
    }

    /// `max |alpha(d/ds approx) - alpha(d/ds target)|` over `grid`, the
    /// quantity expected to be `O(d)`.
    pub fn contact_angle_deviation(&self, grid: &GridSpec<2>) -> Result<f64> {
        let dom = self.target.domain();
        Ok(scan::max_over_grid(&dom, grid, |u| {
            let a = crate::contact::alpha3(self.eval(u), self.partial(u, 1));
            let b = crate::contact::alpha3(self.target.eval(u), self.target.partial(u, 1));
            (a - b).abs()
        })?
        .value)
    }
}

impl<T: ParamMap<2, Point = Point3>> ParamMap<2> for FamilyApproximation<T> {
    type Point = Point3;

    fn domain(&self) -> Domain<2> {
        self.target.domain()
    }

    fn eval(&self, u: [f64; 2]) -> Point3 {
        match self.slice(u[1]) {
            Ok(a) => a.lift.eval([u[0]]),
            Err(_) => Point3::new(f64::NAN, f64::NAN, f64::NAN),
        }
    }

    fn partial(&self, u: [f64; 2], axis: usize) -> Point3 {
        if axis == 0 {
            match self.slice(u[1]) {
                Ok(a) => a.lift.partial([u[0]], 0),
                Err(_) => Point3::new(f64::NAN, f64::NAN, f64::NAN),
            }
        } else {
            crate::contact::central_partial(self, u, 1, 1e-5 * self.domain().length(1))
        }
    }

    fn derivative_mode(&self) -> DerivativeMode {
        DerivativeMode::CentralDifference
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::legendrian_defect;
    use crate::zoo::{Gamma, GammaInf};

    #[test]
    fn transverse_line_zigzags() {
        let a = approximate_curve(&GammaInf, 50, 0.01).unwrap();
        assert_eq!(a.cusp_count(), 2 * 49);
        let defect = legendrian_defect(&a.lift, &GridSpec::uniform(10_000)).unwrap();
        assert!(defect <= 1e-9, "{defect}");
        let e = a.error_to(&GammaInf, &GridSpec::uniform(10_000)).unwrap();
        assert!(e.front_c0 < 0.05);
        assert!(e.c0 >= e.front_c0);
    }

    #[test]
    fn errors_shrink_with_m() {
        let grid = GridSpec::uniform(20_000);
        let mut prev = f64::INFINITY;
        for m in [25, 50, 100, 200] {
            let e = approximate_curve(&GammaInf, m, 0.01)
                .unwrap()
                .error_to(&GammaInf, &grid)
                .unwrap();
            assert!(e.c0 < prev, "M = {m}: {} !< {prev}", e.c0);
            prev = e.c0;
        }
    }

    #[test]
    fn offset_legs_scale_with_d() {
        let a = approximate_curve(&GammaInf, 20, 0.02).unwrap();
        let b = approximate_curve(&GammaInf, 20, 0.01).unwrap();
        let offset = |x: &Approximation| {
            x.front()
                .legs
                .iter()
                .enumerate()
                .filter(|(k, _)| k % 3 != 1)
                .map(|(_, l)| (l.itp.q[0] - l.itp.p[0]).hypot(l.itp.q[1] - l.itp.p[1]))
                .fold(0.0, f64::max)
        };
        let r = offset(&b) / offset(&a);
        assert!((0.4..=0.6).contains(&r));
    }

    #[test]
    fn legendrian_target_converges() {
        let grid = GridSpec::uniform(20_000);
        let g = Gamma::new(2);
        let mut prev = f64::INFINITY;
        for m in [25usize, 50, 100, 200] {
            // d >> sample spacing keeps every middle leg clear of dx = 2d
            let d = 1.0 / (m as f64).sqrt();
            let a = approximate_curve(&g, m, d).unwrap();
            let e = a.error_to(&g, &grid).unwrap();
            assert!(e.c0 < prev, "M = {m}: {e:?}");
            prev = e.c0;
            assert!(legendrian_defect(&a.lift, &GridSpec::uniform(10_000)).unwrap() <= 1e-9);
        }
    }
}
