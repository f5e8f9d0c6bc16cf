use serde::{Deserialize, Serialize};

use super::IntervalFamily;
use crate::contact::Point5;
use crate::{Error, Result};

/// Axis-aligned box in `R^3`, the `(x, y, z)` factor of a region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Box3 {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

impl Box3 {
    pub fn new(lo: [f64; 3], hi: [f64; 3]) -> Self {
        Self { lo, hi }
    }

    pub fn diagonal(&self) -> f64 {
        (0..3)
            .map(|k| (self.hi[k] - self.lo[k]).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn contains(&self, p: [f64; 3]) -> bool {
        (0..3).all(|k| p[k] > self.lo[k] && p[k] < self.hi[k])
    }

    fn overlaps(&self, other: &Box3) -> bool {
        (0..3).all(|k| self.lo[k] < other.hi[k] && other.lo[k] < self.hi[k])
    }
}

/// One product piece `box x gap x (-eps, eps)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionComponent {
    pub box_index: usize,
    pub q: (f64, f64),
    pub diameter: f64,
}

/// `A = U x ([-1,1] \ S0) x (-eps, eps)` and `B = U x ([-1,1] \ S1) x (-eps, eps)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionFamily5 {
    pub m: u32,
    pub epsilon: f64,
    pub boxes: Vec<Box3>,
    pub s0: IntervalFamily,
    pub s1: IntervalFamily,
    pub a_components: Vec<RegionComponent>,
    pub b_components: Vec<RegionComponent>,
}

impl RegionFamily5 {
    fn member(&self, s: &IntervalFamily, pt: Point5) -> bool {
        pt.p.abs() < self.epsilon
            && pt.q > -1.0
            && pt.q < 1.0
            && !s.contains(pt.q)
            && !s.intervals().iter().any(|&(a, b)| pt.q == a || pt.q == b)
            && self.boxes.iter().any(|b| b.contains([pt.x, pt.y, pt.z]))
    }

    pub fn in_a(&self, pt: Point5) -> bool {
        self.member(&self.s0, pt)
    }

    pub fn in_b(&self, pt: Point5) -> bool {
        self.member(&self.s1, pt)
    }

    pub fn max_diameter(&self) -> f64 {
        self.a_components
            .iter()
            .chain(&self.b_components)
            .map(|c| c.diameter)
            .fold(0.0, f64::max)
    }
}

/// Checks the two spacing constraints on an `S0, S1` pair for frequency `m`:
/// complements of each have components shorter than `10/m`, and the
/// components of the complement of their union are longer than `4/m`.
pub fn validate_s_family(m: u32, s0: &IntervalFamily, s1: &IntervalFamily) -> Result<()> {
    let m = f64::from(m);
    if !s0.is_disjoint_from(s1) {
        return Err(Error::IntervalConstraint("S0 and S1 overlap".into()));
    }
    for (name, s) in [("S0", s0), ("S1", s1)] {
        let worst = s.complement().max_len();
        if worst >= 10.0 / m {
            return Err(Error::IntervalConstraint(format!(
                "complement of {name} has a component of length {worst} >= 10/m"
            )));
        }
    }
    let gaps = s0.union(s1)?.complement();
    let shortest = gaps.min_len();
    if gaps.is_empty() || shortest <= 4.0 / m {
        return Err(Error::IntervalConstraint(format!(
            "gap of length {shortest} <= 4/m"
        )));
    }
    Ok(())
}

/// Alternating `S0, S1` blocks separated by gaps of `4.375/m`, with the
/// fewest blocks that satisfy [`validate_s_family`].
pub fn make_s_family(m: u32) -> Result<(IntervalFamily, IntervalFamily)> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let g = 4.375 / f64::from(m);
    for k in 2usize.. {
        let w = (2.0 - (k - 1) as f64 * g) / k as f64;
        if w <= 0.0 {
            break;
        }
        let (mut s0, mut s1) = (Vec::new(), Vec::new());
        for j in 0..k {
            let lo = -1.0 + j as f64 * (w + g);
            let hi = if j + 1 == k { 1.0 } else { lo + w };
            if j % 2 == 0 {
                s0.push((lo, hi));
            } else {
                s1.push((lo, hi));
            }
        }
        let (s0, s1) = (IntervalFamily::new(s0)?, IntervalFamily::new(s1)?);
        if validate_s_family(m, &s0, &s1).is_ok() {
            return Ok((s0, s1));
        }
    }
    Err(Error::IntervalConstraint(format!(
        "no alternating block family fits m = {m}"
    )))
}

/// Product regions over the boxes `u`, after validating `S0, S1`.
pub fn region_family(
    m: u32,
    s0: IntervalFamily,
    s1: IntervalFamily,
    eps: f64,
    u: Vec<Box3>,
) -> Result<RegionFamily5> {
    validate_s_family(m, &s0, &s1)?;
    if eps <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "eps = {eps} must be positive"
        )));
    }
    for (i, a) in u.iter().enumerate() {
        if u[i + 1..].iter().any(|b| a.overlaps(b)) {
            return Err(Error::InvalidArgument(format!(
                "box {i} overlaps another box"
            )));
        }
    }
    let comps = |s: &IntervalFamily| -> Vec<RegionComponent> {
        let mut out = Vec::new();
        for (bi, b) in u.iter().enumerate() {
            for &q in s.complement().intervals() {
                let diag = b.diagonal();
                out.push(RegionComponent {
                    box_index: bi,
                    q,
                    diameter: (diag * diag + (q.1 - q.0).powi(2) + 4.0 * eps * eps).sqrt(),
                });
            }
        }
        out
    };
    Ok(RegionFamily5 {
        m,
        epsilon: eps,
        a_components: comps(&s0),
        b_components: comps(&s1),
        boxes: u,
        s0,
        s1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_family_for_several_frequencies() {
        for m in [4, 8, 22, 27, 39, 100] {
            let (s0, s1) = make_s_family(m).unwrap();
            validate_s_family(m, &s0, &s1).unwrap();
        }
    }

    #[test]
    fn rejects_wide_complement() {
        let s0 = IntervalFamily::new(vec![(-1.0, -0.9)]).unwrap();
        let s1 = IntervalFamily::new(vec![(0.9, 1.0)]).unwrap();
        assert!(matches!(
            validate_s_family(22, &s0, &s1),
            Err(Error::IntervalConstraint(_))
        ));
    }

    #[test]
    fn component_count_and_diameter_bound() {
        let m = 22;
        let (s0, s1) = make_s_family(m).unwrap();
        let boxes = vec![
            Box3::new([-0.1, -0.1, -0.5], [0.1, 0.1, -0.2]),
            Box3::new([-0.1, -0.1, 0.2], [0.1, 0.1, 0.5]),
        ];
        let eps = 1.0 / (2.0 * f64::from(m));
        let r = region_family(m, s0.clone(), s1.clone(), eps, boxes.clone()).unwrap();
        assert_eq!(r.a_components.len(), 2 * s0.complement().len());
        assert_eq!(r.b_components.len(), 2 * s1.complement().len());
        let bound = boxes[0].diagonal() + 10.0 / f64::from(m) + 2.0 * eps;
        assert!(r.max_diameter() <= bound);
        let (a, b) = s0.intervals()[0];
        let q = 0.5 * (a + b);
        assert!(!r.in_a(Point5::new(0.0, 0.0, 0.3, q, 0.0)));
        assert!(r.in_b(Point5::new(0.0, 0.0, 0.3, q, 0.0)));
    }
}
