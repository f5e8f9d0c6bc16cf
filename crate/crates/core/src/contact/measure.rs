use super::{ContactPoint, GridSpec, ParamMap, Point3};
use crate::error::{Error, Result};
use crate::scan::{self, GridMax};

/// Grid maximum of `|contact form(tangent)|` over every parameter direction.
///
/// For a curve this is `max |alpha(gamma'(t))|`; for a surface both partials
/// are tested. Zero means Legendrian at the grid resolution.
pub fn legendrian_defect<const K: usize, M>(map: &M, grid: &GridSpec<K>) -> Result<f64>
where
    M: ParamMap<K> + ?Sized,
{
    legendrian_defect_scan(map, grid).map(|g| g.value)
}

/// [`legendrian_defect`] with the location of the worst sample.
pub fn legendrian_defect_scan<const K: usize, M>(map: &M, grid: &GridSpec<K>) -> Result<GridMax<K>>
where
    M: ParamMap<K> + ?Sized,
{
    let domain = map.domain();
    scan::max_over_grid(&domain, grid, |u| {
        let pt = map.eval(u);
        (0..K).fold(0.0f64, |acc, axis| {
            let v = map.partial(u, axis);
            let a = pt.contact_form(&v).abs();
            // NaN must survive the fold so the scan reports it
            if a.is_nan() || acc.is_nan() {
                f64::NAN
            } else {
                acc.max(a)
            }
        })
    })
}

/// `(min, max)` of `alpha(curve'(t))` over the grid.
pub fn form_range<M>(curve: &M, grid: &GridSpec<1>) -> Result<(f64, f64)>
where
    M: ParamMap<1, Point = Point3> + ?Sized,
{
    let domain = curve.domain();
    let value = |u: [f64; 1]| curve.eval(u).contact_form(&curve.partial(u, 0));
    let hi = scan::max_over_grid(&domain, grid, value)?;
    let lo = scan::min_over_grid(&domain, grid, value)?;
    Ok((lo.value, hi.value))
}

/// True iff `alpha(curve'(t)) > 0` at every grid point.
pub fn transverse_check<M>(curve: &M, grid: &GridSpec<1>) -> bool
where
    M: ParamMap<1, Point = Point3> + ?Sized,
{
    matches!(form_range(curve, grid), Ok((lo, _)) if lo > 0.0)
}

/// Grid maximum of the Euclidean distance `|f(u) - g(u)|`.
pub fn c0_distance<const K: usize, F, G>(f: &F, g: &G, grid: &GridSpec<K>) -> Result<f64>
where
    F: ParamMap<K> + ?Sized,
    G: ParamMap<K, Point = F::Point> + ?Sized,
{
    c0_distance_scan(f, g, grid).map(|m| m.value)
}

pub fn c0_distance_scan<const K: usize, F, G>(
    f: &F,
    g: &G,
    grid: &GridSpec<K>,
) -> Result<GridMax<K>>
where
    F: ParamMap<K> + ?Sized,
    G: ParamMap<K, Point = F::Point> + ?Sized,
{
    let (df, dg) = (f.domain(), g.domain());
    if !df.approx_eq(&dg, 1e-12) {
        return Err(Error::DomainMismatch(format!("{df:?} vs {dg:?}")));
    }
    scan::max_over_grid(&df, grid, |u| f.eval(u).dist(&g.eval(u)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::{Domain, FnMap, Point5};

    fn line(sign: f64) -> impl ParamMap<1, Point = Point3> {
        FnMap::new(Domain::symmetric_unit(), move |u: [f64; 1]| {
            Point3::new(0.0, 0.0, sign * u[0])
        })
    }

    #[test]
    fn reeb_line_has_unit_defect() {
        let d = legendrian_defect(&line(1.0), &GridSpec::uniform(1000)).unwrap();
        assert!((d - 1.0).abs() < 1e-9);
    }

    #[test]
    fn transverse_sign() {
        assert!(transverse_check(&line(1.0), &GridSpec::uniform(100)));
        assert!(!transverse_check(&line(-1.0), &GridSpec::uniform(100)));
    }

    #[test]
    fn nan_is_reported_with_parameter() {
        let bad = FnMap::new(Domain::new([0.0], [1.0]), |u: [f64; 1]| {
            Point3::new((u[0] - 0.5).ln(), 0.0, 0.0)
        });
        match legendrian_defect(&bad, &GridSpec::uniform(11)) {
            Err(Error::NonFinite { params }) => assert!(params[0] <= 0.5),
            other => panic!("expected NonFinite, got {other:?}"),
        }
    }

    #[test]
    fn domain_mismatch_rejected() {
        let a = FnMap::new(Domain::new([0.0], [1.0]), |_u: [f64; 1]| Point5::default());
        let b = FnMap::new(Domain::new([0.0], [2.0]), |_u: [f64; 1]| Point5::default());
        assert!(matches!(
            c0_distance(&a, &b, &GridSpec::uniform(4)),
            Err(Error::DomainMismatch(_))
        ));
    }
}
