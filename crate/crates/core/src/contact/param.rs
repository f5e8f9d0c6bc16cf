use super::ContactPoint;
use serde::{Deserialize, Serialize};

/// Axis-aligned parameter box `[lo_i, hi_i]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain<const K: usize> {
    #[serde(with = "serde_arrays")]
    pub lo: [f64; K],
    #[serde(with = "serde_arrays")]
    pub hi: [f64; K],
}

impl<const K: usize> Domain<K> {
    pub fn new(lo: [f64; K], hi: [f64; K]) -> Self {
        Self { lo, hi }
    }

    /// `[-1, 1]^K`.
    pub fn symmetric_unit() -> Self {
        Self::new([-1.0; K], [1.0; K])
    }

    pub fn length(&self, axis: usize) -> f64 {
        self.hi[axis] - self.lo[axis]
    }

    pub fn contains(&self, u: &[f64; K]) -> bool {
        (0..K).all(|i| u[i] >= self.lo[i] && u[i] <= self.hi[i])
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (0..K).all(|i| {
            (self.lo[i] - other.lo[i]).abs() <= tol && (self.hi[i] - other.hi[i]).abs() <= tol
        })
    }
}

/// Uniform sampling of a [`Domain`].
///
/// With `inclusive` the endpoints are sampled; otherwise `n` interior points
/// at `lo + (i + 1) (hi - lo) / (n + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec<const K: usize> {
    #[serde(with = "serde_arrays")]
    pub counts: [usize; K],
    pub inclusive: bool,
}

impl<const K: usize> GridSpec<K> {
    /// Panics if any count is below 2.
    pub fn new(counts: [usize; K]) -> Self {
        assert!(counts.iter().all(|&n| n >= 2), "grid counts must be >= 2");
        Self {
            counts,
            inclusive: true,
        }
    }

    pub fn uniform(n: usize) -> Self {
        Self::new([n; K])
    }

    pub fn interior(mut self) -> Self {
        self.inclusive = false;
        self
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coordinate `j` along `axis`.
    pub fn coord(&self, domain: &Domain<K>, axis: usize, j: usize) -> f64 {
        let n = self.counts[axis];
        let (lo, hi) = (domain.lo[axis], domain.hi[axis]);
        if self.inclusive {
            if j + 1 == n {
                hi
            } else {
                lo + (hi - lo) * j as f64 / (n - 1) as f64
            }
        } else {
            lo + (hi - lo) * (j + 1) as f64 / (n + 1) as f64
        }
    }

    /// Multi-index of flat index `i`, first axis slowest.
    pub fn multi_index(&self, mut i: usize) -> [usize; K] {
        let mut out = [0; K];
        for axis in (0..K).rev() {
            out[axis] = i % self.counts[axis];
            i /= self.counts[axis];
        }
        out
    }

    pub fn flat_index(&self, idx: &[usize; K]) -> usize {
        idx.iter()
            .zip(self.counts.iter())
            .fold(0, |acc, (&j, &n)| acc * n + j)
    }

    pub fn point(&self, domain: &Domain<K>, i: usize) -> [f64; K] {
        let idx = self.multi_index(i);
        let mut u = [0.0; K];
        for axis in 0..K {
            u[axis] = self.coord(domain, axis, idx[axis]);
        }
        u
    }

    /// Each count divided by `factor`, floored at 2.
    pub fn coarsened(&self, factor: usize) -> Self {
        let mut counts = self.counts;
        for c in counts.iter_mut() {
            *c = (*c / factor.max(1)).max(2);
        }
        Self {
            counts,
            inclusive: self.inclusive,
        }
    }
}

/// How a [`ParamMap`] produces its partial derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DerivativeMode {
    ClosedForm,
    CentralDifference,
}

/// A map from a parameter box into `R^3` or `R^5` with derivative access.
pub trait ParamMap<const K: usize>: Send + Sync {
    type Point: ContactPoint;

    fn domain(&self) -> Domain<K>;

    fn eval(&self, u: [f64; K]) -> Self::Point;

    /// Partial derivative along `axis`. Defaults to a central difference.
    fn partial(&self, u: [f64; K], axis: usize) -> Self::Point {
        central_partial(self, u, axis, self.fd_step(axis))
    }

    fn derivative_mode(&self) -> DerivativeMode {
        DerivativeMode::CentralDifference
    }

    /// Finite-difference step: `1e-6` times the axis length.
    fn fd_step(&self, axis: usize) -> f64 {
        1e-6 * self.domain().length(axis)
    }
}

impl<const K: usize, T: ParamMap<K> + ?Sized> ParamMap<K> for &T {
    type Point = T::Point;

    fn domain(&self) -> Domain<K> {
        (**self).domain()
    }

    fn eval(&self, u: [f64; K]) -> Self::Point {
        (**self).eval(u)
    }

    fn partial(&self, u: [f64; K], axis: usize) -> Self::Point {
        (**self).partial(u, axis)
    }

    fn derivative_mode(&self) -> DerivativeMode {
        (**self).derivative_mode()
    }

    fn fd_step(&self, axis: usize) -> f64 {
        (**self).fd_step(axis)
    }
}

/// Second-order difference quotient of `map` along `axis` with step `h`.
///
/// Central where the stencil fits inside the domain, otherwise the one-sided
/// three-point formula.
pub fn central_partial<const K: usize, M: ParamMap<K> + ?Sized>(
    map: &M,
    u: [f64; K],
    axis: usize,
    h: f64,
) -> M::Point {
    let d = map.domain();
    let shifted = |k: f64| {
        let mut v = u;
        v[axis] += k * h;
        map.eval(v)
    };
    if u[axis] + h > d.hi[axis] {
        (map.eval(u) * 3.0 - shifted(-1.0) * 4.0 + shifted(-2.0)) * (1.0 / (2.0 * h))
    } else if u[axis] - h < d.lo[axis] {
        (shifted(1.0) * 4.0 - map.eval(u) * 3.0 - shifted(2.0)) * (1.0 / (2.0 * h))
    } else {
        (shifted(1.0) - shifted(-1.0)) * (1.0 / (2.0 * h))
    }
}

/// Closure-backed map; derivatives by central differences unless a
/// closed-form partial is attached.
pub struct FnMap<const K: usize, P, F> {
    domain: Domain<K>,
    f: F,
    partial: Option<Box<dyn Fn([f64; K], usize) -> P + Send + Sync>>,
}

impl<const K: usize, P, F> FnMap<K, P, F>
where
    P: ContactPoint,
    F: Fn([f64; K]) -> P + Send + Sync,
{
    pub fn new(domain: Domain<K>, f: F) -> Self {
        Self {
            domain,
            f,
            partial: None,
        }
    }

    pub fn with_partial(
        mut self,
        g: impl Fn([f64; K], usize) -> P + Send + Sync + 'static,
    ) -> Self {
        self.partial = Some(Box::new(g));
        self
    }
}

impl<const K: usize, P, F> ParamMap<K> for FnMap<K, P, F>
where
    P: ContactPoint,
    F: Fn([f64; K]) -> P + Send + Sync,
{
    type Point = P;

    fn domain(&self) -> Domain<K> {
        self.domain
    }

    fn eval(&self, u: [f64; K]) -> P {
        (self.f)(u)
    }

    fn partial(&self, u: [f64; K], axis: usize) -> P {
        match &self.partial {
            Some(g) => g(u, axis),
            None => central_partial(self, u, axis, self.fd_step(axis)),
        }
    }

    fn derivative_mode(&self) -> DerivativeMode {
        if self.partial.is_some() {
            DerivativeMode::ClosedForm
        } else {
            DerivativeMode::CentralDifference
        }
    }
}

/// A two-parameter map with one parameter frozen.
pub struct Slice2<M> {
    pub map: M,
    pub fixed_axis: usize,
    pub value: f64,
}

impl<M: ParamMap<2>> Slice2<M> {
    pub fn new(map: M, fixed_axis: usize, value: f64) -> Self {
        assert!(fixed_axis < 2);
        Self {
            map,
            fixed_axis,
            value,
        }
    }

    fn lift(&self, t: f64) -> [f64; 2] {
        if self.fixed_axis == 0 {
            [self.value, t]
        } else {
            [t, self.value]
        }
    }

    fn free_axis(&self) -> usize {
        1 - self.fixed_axis
    }
}

impl<M: ParamMap<2>> ParamMap<1> for Slice2<M> {
    type Point = M::Point;

    fn domain(&self) -> Domain<1> {
        let d = self.map.domain();
        let a = self.free_axis();
        Domain::new([d.lo[a]], [d.hi[a]])
    }

    fn eval(&self, u: [f64; 1]) -> M::Point {
        self.map.eval(self.lift(u[0]))
    }

    fn partial(&self, u: [f64; 1], _axis: usize) -> M::Point {
        self.map.partial(self.lift(u[0]), self.free_axis())
    }

    fn derivative_mode(&self) -> DerivativeMode {
        self.map.derivative_mode()
    }
}

mod serde_arrays {
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer, T: Serialize, const K: usize>(
        a: &[T; K],
        s: S,
    ) -> Result<S::Ok, S::Error> {
        a.as_slice().serialize(s)
    }

    pub fn deserialize<'de, D, T, const K: usize>(d: D) -> Result<[T; K], D::Error>
    where
        D: Deserializer<'de>,
        T: Deserialize<'de>,
    {
        let v = Vec::<T>::deserialize(d)?;
        let n = v.len();
        v.try_into()
            .map_err(|_| D::Error::custom(format!("expected {K} entries, got {n}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::Point3;

    #[test]
    fn inclusive_grid_hits_endpoints() {
        let d = Domain::new([-1.0], [1.0]);
        let g = GridSpec::new([5]);
        let pts: Vec<f64> = (0..5).map(|i| g.point(&d, i)[0]).collect();
        assert_eq!(pts, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn interior_grid_avoids_endpoints() {
        let d = Domain::new([0.0], [1.0]);
        let g = GridSpec::new([3]).interior();
        assert_eq!(g.point(&d, 0)[0], 0.25);
        assert_eq!(g.point(&d, 2)[0], 0.75);
    }

    #[test]
    fn multi_index_roundtrip() {
        let g = GridSpec::new([3, 4, 5]);
        for i in 0..g.len() {
            assert_eq!(g.flat_index(&g.multi_index(i)), i);
        }
    }

    #[test]
    #[should_panic]
    fn grid_rejects_single_sample() {
        let _ = GridSpec::new([1]);
    }

    #[test]
    fn one_sided_difference_at_boundary() {
        let m = FnMap::new(Domain::new([0.0], [1.0]), |u: [f64; 1]| {
            Point3::new(u[0] * u[0], 0.0, 0.0)
        });
        let d_hi = m.partial([1.0], 0);
        let d_lo = m.partial([0.0], 0);
        assert!((d_hi.x - 2.0).abs() < 1e-8);
        assert!(d_lo.x.abs() < 1e-8);
    }
}
