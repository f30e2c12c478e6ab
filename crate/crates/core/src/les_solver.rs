//! Cyclic and periodic cyclic dimensions from Hochschild dimensions via the
//! Connes sequence `⋯ → HH_k → HC_k → HC_{k-2} → HH_{k-1} → ⋯`.
//!
//! When every odd Hochschild group vanishes, exactness forces
//! `HC_{2k} = HH_{2k} + HC_{2k-2}` and `HC_odd = 0`.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LesError {
    #[error("odd Hochschild dimensions are nonzero in degrees {0:?}")]
    HypothesisViolated(Vec<usize>),
    #[error("cyclic dimensions not yet constant: {0}")]
    NotStabilized(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicReport {
    pub hc_dims: BTreeMap<usize, usize>,
    pub hp_even: Option<usize>,
    pub hp_odd: Option<usize>,
    pub hypothesis_ok: bool,
    /// Largest degree where Hochschild homology is nonzero.
    pub hh_support: usize,
}

/// Cyclic dimensions in degrees `0..=max_degree`.
pub fn cyclic_from_hochschild(hh: &BTreeMap<usize, usize>, max_degree: usize) -> Result<CyclicReport, LesError> {
    let odd: Vec<usize> = hh.iter().filter(|(s, d)| *s % 2 == 1 && **d != 0).map(|(s, _)| *s).collect();
    if !odd.is_empty() {
        return Err(LesError::HypothesisViolated(odd));
    }
    let hh_at = |s: usize| hh.get(&s).copied().unwrap_or(0);
    let mut hc_dims = BTreeMap::new();
    for k in 0..=max_degree {
        let v = if k % 2 == 1 {
            0
        } else if k == 0 {
            hh_at(0)
        } else {
            hh_at(k) + hc_dims[&(k - 2)]
        };
        hc_dims.insert(k, v);
    }
    let hh_support = hh.iter().filter(|(_, d)| **d != 0).map(|(s, _)| *s).max().unwrap_or(0);
    let mut report = CyclicReport { hc_dims, hp_even: None, hp_odd: None, hypothesis_ok: true, hh_support };
    if let Ok((even, odd)) = periodic_from_cyclic(&report) {
        report.hp_even = Some(even);
        report.hp_odd = Some(odd);
    }
    Ok(report)
}

/// Stable even and odd values of `HC`, read off two consecutive degrees of
/// each parity at or beyond the Hochschild support.
pub fn periodic_from_cyclic(report: &CyclicReport) -> Result<(usize, usize), LesError> {
    let tail = |parity: usize| -> Result<usize, LesError> {
        let mut first = report.hh_support.max(parity);
        if first % 2 != parity {
            first += 1;
        }
        match (report.hc_dims.get(&first), report.hc_dims.get(&(first + 2))) {
            (Some(a), Some(b)) if a == b => Ok(*a),
            (Some(a), Some(b)) => Err(LesError::NotStabilized(format!("HC_{first} = {a}, HC_{} = {b}", first + 2))),
            _ => Err(LesError::NotStabilized(format!("need degrees {first} and {} to compare", first + 2))),
        }
    };
    Ok((tail(0)?, tail(1)?))
}

/// `HC` of the crossed product: `Σ_{2k ≤ d} C(n, 2k) + 2^n` in even degrees `d`.
pub fn expected_hc(n: usize, degree: usize) -> usize {
    if degree % 2 == 1 {
        return 0;
    }
    (0..=degree).step_by(2).map(|k| num_integer::binomial(n, k)).sum::<usize>() + (1 << n)
}

/// `HP_even` of the crossed product: `3 · 2^(n-1)`.
pub fn expected_hp_even(n: usize) -> usize {
    3 << (n - 1)
}
