//! Deterministic reductions over index ranges and parameter grids.
//!
//! Every reduction picks its winner by a total order on `(value, index)`, so
//! the parallel and sequential paths return bit-identical results.

use crate::contact::{Domain, GridSpec};
use crate::error::{Error, Result};

/// Winner of a max-reduction over a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMax<const K: usize> {
    pub value: f64,
    pub at: [f64; K],
    pub index: usize,
}

#[derive(Debug, Clone, Copy)]
struct Best {
    index: usize,
    value: f64,
}

impl Best {
    fn is_nan(&self) -> bool {
        !self.value.is_finite()
    }
}

// Non-finite values dominate (lowest index first), then larger values, then
// lower index.
fn combine(a: Option<Best>, b: Option<Best>) -> Option<Best> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => Some(match (a.is_nan(), b.is_nan()) {
            (true, true) => {
                if a.index <= b.index {
                    a
                } else {
                    b
                }
            }
            (true, false) => a,
            (false, true) => b,
            (false, false) => {
                if a.value > b.value || (a.value == b.value && a.index < b.index) {
                    a
                } else {
                    b
                }
            }
        }),
    }
}

fn finish(best: Option<Best>) -> std::result::Result<Option<(usize, f64)>, usize> {
    match best {
        None => Ok(None),
        Some(b) if b.is_nan() => Err(b.index),
        Some(b) => Ok(Some((b.index, b.value))),
    }
}

/// Sequential reductions.
pub mod seq {
    use super::*;

    /// Max of `f(i)` for `i < n`. `Err(i)` names the first non-finite index.
    pub fn max_by_index<F>(n: usize, f: F) -> std::result::Result<Option<(usize, f64)>, usize>
    where
        F: Fn(usize) -> f64,
    {
        let best = (0..n)
            .map(|index| {
                Some(Best {
                    index,
                    value: f(index),
                })
            })
            .fold(None, combine);
        finish(best)
    }

    pub fn map_collect<T, F>(n: usize, f: F) -> Vec<T>
    where
        F: Fn(usize) -> T,
    {
        (0..n).map(f).collect()
    }
}

/// Rayon-backed reductions.
#[cfg(feature = "parallel")]
pub mod par {
    use super::*;
    use rayon::prelude::*;

    pub fn max_by_index<F>(n: usize, f: F) -> std::result::Result<Option<(usize, f64)>, usize>
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        let best = (0..n)
            .into_par_iter()
            .map(|index| {
                Some(Best {
                    index,
                    value: f(index),
                })
            })
            .reduce(|| None, combine);
        finish(best)
    }

    pub fn map_collect<T, F>(n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).into_par_iter().map(f).collect()
    }
}

/// Max of `f(i)` over `0..n` using the configured backend.
pub fn max_by_index<F>(n: usize, f: F) -> std::result::Result<Option<(usize, f64)>, usize>
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        par::max_by_index(n, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        seq::max_by_index(n, f)
    }
}

/// Ordered `(0..n).map(f).collect()` using the configured backend.
pub fn map_collect<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        par::map_collect(n, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        seq::map_collect(n, f)
    }
}

/// Max of `f` over every point of `grid` laid on `domain`.
///
/// A non-finite value aborts with [`Error::NonFinite`] carrying the first
/// offending parameter.
pub fn max_over_grid<const K: usize, F>(
    domain: &Domain<K>,
    grid: &GridSpec<K>,
    f: F,
) -> Result<GridMax<K>>
where
    F: Fn([f64; K]) -> f64 + Sync + Send,
{
    let n = grid.len();
    match max_by_index(n, |i| f(grid.point(domain, i))) {
        Ok(Some((index, value))) => Ok(GridMax {
            value,
            at: grid.point(domain, index),
            index,
        }),
        Ok(None) => Err(Error::InvalidArgument("empty grid".into())),
        Err(index) => Err(Error::NonFinite {
            params: grid.point(domain, index).to_vec(),
        }),
    }
}

/// Min of `f` over the grid, reported as a [`GridMax`] of the true (unnegated) value.
pub fn min_over_grid<const K: usize, F>(
    domain: &Domain<K>,
    grid: &GridSpec<K>,
    f: F,
) -> Result<GridMax<K>>
where
    F: Fn([f64; K]) -> f64 + Sync + Send,
{
    let m = max_over_grid(domain, grid, |u| -f(u))?;
    Ok(GridMax {
        value: -m.value,
        ..m
    })
}

/// Connected components of the marked grid points under the full
/// `3^K - 1` neighbourhood, each listed by ascending flat index.
///
/// Components are ordered by their smallest member; the walk is sequential so
/// the output is deterministic.
pub fn grid_components<const K: usize>(grid: &GridSpec<K>, marked: &[bool]) -> Vec<Vec<usize>> {
    assert_eq!(marked.len(), grid.len());
    let mut label = vec![usize::MAX; marked.len()];
    let mut out: Vec<Vec<usize>> = Vec::new();
    let offsets: Vec<[i64; K]> = (0..3usize.pow(K as u32))
        .map(|mut c| {
            let mut o = [0i64; K];
            for slot in o.iter_mut() {
                *slot = (c % 3) as i64 - 1;
                c /= 3;
            }
            o
        })
        .filter(|o| o.iter().any(|&v| v != 0))
        .collect();
    for start in 0..marked.len() {
        if !marked[start] || label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![start];
        label[start] = id;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let idx = grid.multi_index(i);
            'next: for o in &offsets {
                let mut nb = [0usize; K];
                for a in 0..K {
                    let v = idx[a] as i64 + o[a];
                    if v < 0 || v >= grid.counts[a] as i64 {
                        continue 'next;
                    }
                    nb[a] = v as usize;
                }
                let j = grid.flat_index(&nb);
                if marked[j] && label[j] == usize::MAX {
                    label[j] = id;
                    members.push(j);
                    stack.push(j);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Largest pairwise distance among `points` (exact, quadratic).
pub fn pairwise_diameter<P: crate::contact::ContactPoint>(points: &[P]) -> f64 {
    let n = points.len();
    match max_by_index(n, |i| {
        points[i + 1..]
            .iter()
            .map(|q| points[i].dist(q))
            .fold(0.0, f64::max)
    }) {
        Ok(Some((_, v))) => v,
        Ok(None) => 0.0,
        Err(_) => f64::NAN,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn components_of_two_blobs() {
        let g = GridSpec::new([6, 5]);
        let mut marked = vec![false; g.len()];
        for idx in [[0, 0], [1, 1], [4, 3], [5, 4], [5, 3]] {
            marked[g.flat_index(&idx)] = true;
        }
        let comps = grid_components(&g, &marked);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].len(), 2);
        assert_eq!(comps[1].len(), 3);
        assert!(grid_components(&g, &vec![false; g.len()]).is_empty());
    }

    #[test]
    fn diameter_of_square() {
        use crate::contact::Point3;
        let pts = [
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
        ];
        assert!((pairwise_diameter(&pts) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(pairwise_diameter::<Point3>(&[]), 0.0);
    }

    #[test]
    fn ties_resolve_to_lowest_index() {
        let r = seq::max_by_index(10, |i| if i % 3 == 0 { 1.0 } else { 0.0 }).unwrap();
        assert_eq!(r, Some((0, 1.0)));
    }

    #[test]
    fn nan_reports_first_offender() {
        let r = max_by_index(100, |i| {
            if i == 41 || i == 77 {
                f64::NAN
            } else {
                i as f64
            }
        });
        assert_eq!(r, Err(41));
    }

    #[test]
    fn empty_range_is_none() {
        assert_eq!(max_by_index(0, |_| 1.0), Ok(None));
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn backends_agree() {
        let f = |i: usize| ((i as f64) * 0.37).sin() + ((i % 17) as f64) * 1e-3;
        assert_eq!(seq::max_by_index(50_000, f), par::max_by_index(50_000, f));
        assert_eq!(
            seq::map_collect(1000, |i| i * i),
            par::map_collect(1000, |i| i * i)
        );
    }
}
