use serde::{Deserialize, Serialize};

use super::stretch::Isotopy;
use crate::contact::{ContactPoint, GridSpec};
use crate::{scan, Error, Result};

/// How time is sampled inside each subinterval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportSampling {
    /// Velocities are read at `n_tau` midpoints of an even split.
    pub n_tau: usize,
    /// Velocity norms above this count as motion.
    pub threshold: f64,
}

impl Default for SupportSampling {
    fn default() -> Self {
        Self {
            n_tau: 8,
            threshold: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportComponent {
    /// Number of parameter grid points in the component.
    pub points: usize,
    /// Diameter of the images of those points over the sampled times.
    pub diameter: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsotopySupportReport {
    pub subintervals: Vec<(f64, f64)>,
    pub components: Vec<Vec<SupportComponent>>,
    /// Largest component diameter per subinterval; 0 when nothing moves.
    pub sizes: Vec<f64>,
}

impl IsotopySupportReport {
    pub fn max_size(&self) -> f64 {
        self.sizes.iter().copied().fold(0.0, f64::max)
    }
}

/// Per subinterval, the grid points that move at some sampled time are
/// grouped by grid adjacency; each group's size is the diameter of its
/// images at the sampled times and both endpoints.
pub fn isotopy_support_size<const K: usize, I: Isotopy<K>>(
    iso: &I,
    grid: &GridSpec<K>,
    subintervals: &[(f64, f64)],
    sampling: SupportSampling,
) -> IsotopySupportReport {
    let dom = iso.domain();
    let mut components = Vec::with_capacity(subintervals.len());
    let mut sizes = Vec::with_capacity(subintervals.len());
    for &(a, b) in subintervals {
        let n = sampling.n_tau.max(1);
        let mids: Vec<f64> = (0..n)
            .map(|j| a + (b - a) * (j as f64 + 0.5) / n as f64)
            .collect();
        let mut snaps = vec![a];
        snaps.extend_from_slice(&mids);
        snaps.push(b);
        let marked = scan::map_collect(grid.len(), |i| {
            let u = grid.point(&dom, i);
            mids.iter()
                .any(|&tau| iso.velocity(u, tau).norm() > sampling.threshold)
        });
        let comps = scan::grid_components(grid, &marked);
        let list: Vec<SupportComponent> = comps
            .iter()
            .map(|c| {
                let images: Vec<_> = c
                    .iter()
                    .flat_map(|&i| {
                        let u = grid.point(&dom, i);
                        snaps.iter().map(move |&tau| iso.at(u, tau))
                    })
                    .collect();
                SupportComponent {
                    points: c.len(),
                    diameter: scan::pairwise_diameter(&images),
                }
            })
            .collect();
        sizes.push(list.iter().map(|c| c.diameter).fold(0.0, f64::max));
        components.push(list);
    }
    IsotopySupportReport {
        subintervals: subintervals.to_vec(),
        components,
        sizes,
    }
}

/// C0 bound for an ambient extension built from consecutive pairs of
/// subintervals: each pair contributes `size_a + size_b + eps`.
///
/// With two halves this is `size[0,1/2] + size[1/2,1] + eps`; with four
/// quarters it is the sum of all sizes plus `2 eps`.
pub fn extension_c0_bound(report: &IsotopySupportReport, eps: f64) -> Result<f64> {
    if report.sizes.is_empty() || report.sizes.len() % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "need an even number of subintervals, got {}",
            report.sizes.len()
        )));
    }
    if eps < 0.0 {
        return Err(Error::InvalidArgument(format!("eps = {eps} is negative")));
    }
    Ok(report.sizes.chunks(2).map(|p| p[0] + p[1] + eps).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::{Domain, Point5};
    use crate::flow::FnIsotopy;
    use crate::zoo::lambda_i;

    fn report(sizes: Vec<f64>) -> IsotopySupportReport {
        IsotopySupportReport {
            subintervals: vec![(0.0, 1.0); sizes.len()],
            components: vec![vec![]; sizes.len()],
            sizes,
        }
    }

    #[test]
    fn bound_arithmetic() {
        assert_eq!(
            extension_c0_bound(&report(vec![0.0, 0.0]), 0.01).unwrap(),
            0.01
        );
        assert!((extension_c0_bound(&report(vec![0.1, 0.2]), 0.01).unwrap() - 0.31).abs() < 1e-15);
        assert!(extension_c0_bound(&report(vec![0.1, 0.2, 0.3]), 0.01).is_err());
    }

    #[test]
    fn stationary_isotopy_has_empty_support() {
        let iso = FnIsotopy {
            domain: Domain::<2>::symmetric_unit(),
            f: |u: [f64; 2], _tau: f64| lambda_i(4, u[0], u[1]),
        };
        let r = isotopy_support_size(
            &iso,
            &GridSpec::uniform(20),
            &[(0.0, 0.5), (0.5, 1.0)],
            Default::default(),
        );
        assert_eq!(r.sizes, vec![0.0, 0.0]);
        assert!(r.components.iter().all(|c| c.is_empty()));
    }

    #[test]
    fn local_motion_gives_one_component() {
        // moves only t in (0.1, 0.2), pushing in p
        let iso = FnIsotopy {
            domain: Domain::<1>::new([-1.0], [1.0]),
            f: |u: [f64; 1], tau: f64| {
                let t = u[0];
                let bump = if t > 0.1 && t < 0.2 {
                    ((t - 0.1) * (0.2 - t)).powi(2) * 1e4
                } else {
                    0.0
                };
                lambda_i(3, t, 0.0) + Point5::new(0.0, 0.0, 0.0, 0.0, tau * bump)
            },
        };
        let r = isotopy_support_size(
            &iso,
            &GridSpec::new([401]),
            &[(0.0, 1.0)],
            Default::default(),
        );
        assert_eq!(r.components[0].len(), 1);
        let direct = crate::zoo::gamma_m(3, 0.1).dist(&crate::zoo::gamma_m(3, 0.2));
        assert!(r.sizes[0] >= direct * 0.9);
    }
}
