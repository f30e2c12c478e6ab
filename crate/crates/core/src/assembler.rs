//! Hochschild homology of the crossed product `A ⋊ Z_2` as the direct sum of
//! the flip invariants of the untwisted and twisted parts.

use std::collections::BTreeMap;

use num_integer::binomial;
use serde::Serialize;
use thiserror::Error;

use crate::homology::HochschildResult;
use crate::koszul::Mode;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AssemblyError {
    #[error("inputs do not cover the same torus and degrees: {0}")]
    DegreeMismatch(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeSource {
    pub untwisted_invariant: usize,
    pub twisted_invariant: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCheck {
    pub degree: usize,
    pub computed: usize,
    pub expected: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossedProductReport {
    pub n: usize,
    pub hh_dims: BTreeMap<usize, usize>,
    pub sources: BTreeMap<usize, DegreeSource>,
    pub theorem_check: Vec<DegreeCheck>,
    pub pass: bool,
}

/// Closed form: `2^n + 1` in degree 0, `C(n, s)` in positive even degrees,
/// 0 in odd degrees and above `n`.
pub fn expected_hh(n: usize, s: usize) -> usize {
    match s {
        0 => (1 << n) + 1,
        s if s > n || s % 2 == 1 => 0,
        s => binomial(n, s),
    }
}

pub fn assemble(n: usize, untwisted: &HochschildResult, twisted: &HochschildResult) -> Result<CrossedProductReport, AssemblyError> {
    if untwisted.mode != Mode::Untwisted || twisted.mode != Mode::Twisted {
        return Err(AssemblyError::DegreeMismatch("expected one untwisted and one twisted result".into()));
    }
    if untwisted.n != n || twisted.n != n {
        return Err(AssemblyError::DegreeMismatch(format!("n = {n}, inputs have {} and {}", untwisted.n, twisted.n)));
    }
    let mut hh_dims = BTreeMap::new();
    let mut sources = BTreeMap::new();
    let mut theorem_check = Vec::new();
    for s in 0..=n {
        let (Some(u), Some(t)) = (untwisted.invariant_dims.get(&s), twisted.invariant_dims.get(&s)) else {
            return Err(AssemblyError::DegreeMismatch(format!("degree {s} missing")));
        };
        let total = u + t;
        hh_dims.insert(s, total);
        sources.insert(s, DegreeSource { untwisted_invariant: *u, twisted_invariant: *t });
        let expected = expected_hh(n, s);
        theorem_check.push(DegreeCheck { degree: s, computed: total, expected, pass: total == expected });
    }
    let pass = theorem_check.iter().all(|c| c.pass);
    Ok(CrossedProductReport { n, hh_dims, sources, theorem_check, pass })
}
