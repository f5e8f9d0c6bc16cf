use serde::{Deserialize, Serialize};

use super::{equidistribution_filter, gamma_c0_to_inf, Lambda, LambdaInf};
use crate::contact::{c0_distance, GridSpec};
use crate::Result;

/// Increasing frequencies with `m_{i+1} > max(2^i, m_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequencePlan {
    pub frequencies: Vec<u32>,
}

/// Greedy least admissible plan of length `n`.
pub fn build_sequence_plan(n: usize) -> SequencePlan {
    assert!(n >= 1, "plan length must be positive");
    let mut out: Vec<u32> = Vec::with_capacity(n);
    for i in 0..n {
        // entry i (0-based) must exceed 2^i and the previous entry; the first
        // one only needs m > 2
        let floor = if i == 0 {
            2
        } else {
            (1u64 << i).max(out[i - 1] as u64) as u32
        };
        let mut lo = floor + 1;
        let m = loop {
            let hi = lo.saturating_mul(2);
            if let Some(&m) = equidistribution_filter(lo..=hi).first() {
                break m;
            }
            lo = hi + 1;
        };
        out.push(m);
    }
    SequencePlan { frequencies: out }
}

impl SequencePlan {
    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    /// Whether the growth condition and the filter hold for every entry.
    pub fn is_admissible(&self) -> bool {
        let f = &self.frequencies;
        let growth = f.windows(2).enumerate().all(|(i, w)| {
            let pow = 1u64 << (i + 1);
            (w[1] as u64) > pow.max(w[0] as u64)
        });
        growth && equidistribution_filter(f.iter().copied()).len() == f.len()
    }

    /// Analytic `d_C0(Lambda_i, Lambda_inf)` for each entry.
    pub fn analytic_distances(&self) -> Vec<f64> {
        self.frequencies
            .iter()
            .map(|&m| gamma_c0_to_inf(m))
            .collect()
    }

    /// Grid-measured `d_C0(Lambda_i, Lambda_inf)` for each entry.
    pub fn measured_distances(&self, grid: &GridSpec<2>) -> Result<Vec<f64>> {
        self.frequencies
            .iter()
            .map(|&m| c0_distance(&Lambda::new(m), &LambdaInf, grid))
            .collect()
    }

    /// Running sums of `distances`.
    pub fn partial_sums(distances: &[f64]) -> Vec<f64> {
        distances
            .iter()
            .scan(0.0, |acc, d| {
                *acc += d;
                Some(*acc)
            })
            .collect()
    }

    /// `sum_{i > N} 2 / m_i` with `m_i > 2^{i-1}`, i.e. the geometric tail
    /// bound `4 / 2^{N-1}` on the remaining distances.
    pub fn tail_bound(&self) -> f64 {
        4.0 / 2f64.powi(self.len() as i32 - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_plans() {
        assert_eq!(build_sequence_plan(1).frequencies, vec![22]);
        let p = build_sequence_plan(3);
        assert_eq!(p.frequencies, vec![22, 27, 39]);
        assert!(p.is_admissible());
        let long = build_sequence_plan(8);
        assert!(long.is_admissible());
        for (i, &m) in long.frequencies.iter().enumerate() {
            assert!(m as u64 > 1u64 << i);
        }
    }

    #[test]
    fn partial_sums_are_bounded() {
        let p = build_sequence_plan(6);
        let sums = SequencePlan::partial_sums(&p.analytic_distances());
        let last = *sums.last().unwrap();
        assert!(last.is_finite() && last <= 4.0);
        for (d, &m) in p.analytic_distances().iter().zip(&p.frequencies) {
            assert!(*d < 2.0 / m as f64);
        }
    }

    #[test]
    fn measured_matches_analytic() {
        let p = build_sequence_plan(2);
        let g = GridSpec::new([20_001, 3]);
        let meas = p.measured_distances(&g).unwrap();
        for (a, b) in meas.iter().zip(p.analytic_distances()) {
            assert!((a - b).abs() < 1e-4, "{a} vs {b}");
        }
    }
}
