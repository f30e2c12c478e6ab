//! Hochschild homology of the quantum torus with coefficients in itself
//! (untwisted) and in the flip-twisted bimodule, together with the flip
//! invariants and a constructive reduction of twisted cycles.

use std::collections::BTreeMap;

use num_integer::binomial;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{flip_monomial, twisted_conj_scalar, ExpVec};
use crate::koszul::{block_matrix, BlockKey, KoszulChain, Mode, WedgeIndex};
use crate::linalg::{rank, LinalgError, RankCertificate, RankOptions};
use crate::scalars::{LambdaMonomial, Scalar};
use crate::transport::{invariance_sign, TransportError};

#[derive(Debug, Error, Clone)]
pub enum HomologyError {
    #[error("block {block} has homology {dim} in degree {degree}")]
    UnexpectedHomology { block: String, degree: usize, dim: usize },
    #[error("degree {degree}, class {class}: estimates still changing {trajectory:?}")]
    NotStabilized { degree: usize, class: String, trajectory: Vec<usize> },
    #[error("twisted H_0 of class {class}: window estimate {matrix_dim} disagrees with rewriting")]
    H0Mismatch { class: String, matrix_dim: usize },
    #[error("input chain is not a twisted cycle")]
    NotACycle,
    #[error("sweep left a nonzero residual: {residual}")]
    ResidualNonzero { residual: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Transport(#[from] TransportError),
}

/// Homology estimate of one twisted class at one window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowEstimate {
    pub window: i32,
    pub margin: i32,
    /// `dim ker d_s` on the window.
    pub cycles: usize,
    /// Boundaries from the enlarged window that land inside the window.
    pub boundaries: usize,
    pub dim: usize,
    pub columns: usize,
    pub certificates: Vec<RankCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassTrajectory {
    pub class: String,
    pub estimates: Vec<WindowEstimate>,
    pub stabilized: bool,
    pub value: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedDegree {
    pub degree: usize,
    pub dim: usize,
    pub stabilized: bool,
    pub classes: Vec<ClassTrajectory>,
}

/// Summary of the untwisted blocks examined in one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockCheck {
    pub degree: usize,
    pub window: i32,
    pub blocks: usize,
    pub nonzero_blocks_exact: usize,
    pub zero_block_dim: usize,
}

/// Flip eigenvalue on one homology generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvarianceRecord {
    pub degree: usize,
    pub generator: String,
    pub scalar: String,
    pub invariant: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HochschildResult {
    pub mode: Mode,
    pub n: usize,
    pub window: i32,
    pub dims: BTreeMap<usize, usize>,
    pub invariant_dims: BTreeMap<usize, usize>,
    pub blocks_checked: Vec<BlockCheck>,
    pub stabilized: BTreeMap<usize, bool>,
    pub twisted: Vec<TwistedDegree>,
    pub invariance: Vec<InvarianceRecord>,
    pub notes: Vec<String>,
}

fn all_points(n: usize, window: i32) -> Vec<ExpVec> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|p: Vec<i32>| (-window..=window).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out.into_iter().map(|p| ExpVec::from_slice(&p)).collect()
}

/// Homology of every untwisted block `β ∈ [-L, L]^n`, in degrees `0..=s_max`.
///
/// Fails with `UnexpectedHomology` if some block with `β ≠ 0` is not exact.
pub fn untwisted_homology(n: usize, s_max: usize, window: i32, opts: &RankOptions) -> Result<HochschildResult, HomologyError> {
    if n < 2 || window < 2 {
        return Err(HomologyError::InvalidInput(format!("need n >= 2 and L >= 2, got n={n}, L={window}")));
    }
    let points = all_points(n, window);
    let per_block: Vec<(ExpVec, Vec<usize>)> = points
        .par_iter()
        .map(|beta| {
            let key = BlockKey::untwisted(beta.clone());
            let mut ranks = vec![0usize; n + 2];
            for s in 1..=n {
                let m = block_matrix(n, s, &key, window);
                ranks[s] = rank(&m.matrix, &opts.for_job(&format!("untwisted {beta} d{s}")))?.rank;
            }
            let h = (0..=n).map(|s| binomial(n, s) - ranks[s] - ranks[s + 1]).collect();
            Ok((beta.clone(), h))
        })
        .collect::<Result<_, HomologyError>>()?;

    let mut dims = BTreeMap::new();
    let mut checks = Vec::new();
    for s in 0..=s_max {
        let mut total = 0;
        let mut exact = 0;
        let mut zero_dim = 0;
        for (beta, h) in &per_block {
            let hs = h.get(s).copied().unwrap_or(0);
            if beta.is_zero() {
                zero_dim = hs;
            } else if hs != 0 {
                return Err(HomologyError::UnexpectedHomology { block: beta.to_string(), degree: s, dim: hs });
            } else {
                exact += 1;
            }
            total += hs;
        }
        dims.insert(s, total);
        checks.push(BlockCheck { degree: s, window, blocks: per_block.len(), nonzero_blocks_exact: exact, zero_block_dim: zero_dim });
    }
    Ok(HochschildResult {
        mode: Mode::Untwisted,
        n,
        window,
        stabilized: dims.keys().map(|s| (*s, true)).collect(),
        dims,
        invariant_dims: BTreeMap::new(),
        blocks_checked: checks,
        twisted: vec![],
        invariance: vec![],
        notes: vec![],
    })
}

/// Flip-invariant part of untwisted homology, one transport computation per
/// generator `1 ⊗ e_I`.
pub fn untwisted_invariants(n: usize, s_max: usize) -> Result<(BTreeMap<usize, usize>, Vec<InvarianceRecord>), HomologyError> {
    let mut dims = BTreeMap::new();
    let mut records = Vec::new();
    for s in 0..=s_max {
        let mut count = 0;
        for w in WedgeIndex::all(n, s) {
            let eps = invariance_sign(n, w)?;
            let invariant = eps.is_one();
            count += usize::from(invariant);
            records.push(InvarianceRecord { degree: s, generator: format!("1⊗e{w}"), scalar: eps.to_string(), invariant });
        }
        dims.insert(s, count);
    }
    Ok((dims, records))
}

/// Untwisted homology plus its flip invariants.
pub fn untwisted_result(n: usize, window: i32, opts: &RankOptions) -> Result<HochschildResult, HomologyError> {
    let mut result = untwisted_homology(n, n, window, opts)?;
    let (inv, records) = untwisted_invariants(n, n)?;
    result.invariant_dims = inv;
    result.invariance = records;
    Ok(result)
}

/// Twisted `H_0`: one class per residue `β_0 ∈ {0,1}^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedH0 {
    pub dim: usize,
    pub representatives: Vec<ExpVec>,
}

pub fn twisted_h0(n: usize) -> TwistedH0 {
    let representatives: Vec<ExpVec> = BlockKey::twisted_classes(n).iter().map(|k| k.label().clone()).collect();
    TwistedH0 { dim: representatives.len(), representatives }
}

/// `x = Σ_{β0} c_{β0} ν^{β0} + d(preimage)` with every `β0 ∈ {0,1}^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H0Rewrite {
    pub normal_form: BTreeMap<ExpVec, Scalar>,
    pub preimage: KoszulChain,
}

/// Rewrites a degree-0 twisted chain into the representatives modulo
/// explicit boundaries, using `d(γ, {i}) = -(γ) + τ(i, γ)(γ + 2e_i)`.
pub fn rewrite_twisted_h0(x: &KoszulChain) -> H0Rewrite {
    assert_eq!(x.degree(), 0, "rewriting applies to degree-0 chains");
    let n = x.n();
    let mut normal_form: BTreeMap<ExpVec, Scalar> = BTreeMap::new();
    let mut preimage = KoszulChain::zero(n, 1);
    for ((beta, _), c) in x.terms() {
        let mut beta = beta.clone();
        let mut c = c.clone();
        while let Some(axis) = (1..=n).find(|a| !(0..=1).contains(&beta.coord(*a))) {
            let w = WedgeIndex::new(&[axis]);
            if beta.coord(axis) >= 2 {
                // (β) = τ^-1 (γ) + τ^-1 d(γ, {i}),  γ = β - 2e_i
                let gamma = beta.shifted(axis, -2);
                let tau_inv = Scalar::monomial(twisted_conj_scalar(axis, &gamma).inv());
                c = &c * &tau_inv;
                preimage.add_term(gamma.clone(), w, c.clone());
                beta = gamma;
            } else {
                // (β) = τ(β + 2e_i) - d(β, {i})
                let tau = Scalar::monomial(twisted_conj_scalar(axis, &beta));
                preimage.add_term(beta.clone(), w, -&c);
                c = &c * &tau;
                beta = beta.shifted(axis, 2);
            }
        }
        let slot = normal_form.entry(beta).or_default();
        *slot = &*slot + &c;
    }
    normal_form.retain(|_, c| !c.is_zero());
    H0Rewrite { normal_form, preimage }
}

/// Flip eigenvalue on each twisted `H_0` class: `flip(ν^{β0}) = c ν^{-β0}`,
/// then `ν^{-β0} ≡ μ ν^{β0}`; the class is invariant iff `cμ = 1`.
pub fn twisted_h0_invariants(n: usize) -> Vec<InvarianceRecord> {
    twisted_h0(n)
        .representatives
        .into_iter()
        .map(|b0| {
            let (c, image) = flip_monomial(&b0);
            let chain = KoszulChain::basis(image, WedgeIndex::empty(), Scalar::monomial(c));
            let rewritten = rewrite_twisted_h0(&chain);
            let scalar = rewritten.normal_form.get(&b0).cloned().unwrap_or_default();
            debug_assert!(rewritten.normal_form.len() <= 1);
            InvarianceRecord { degree: 0, generator: format!("ν^{b0}"), invariant: scalar.is_one(), scalar: scalar.to_string() }
        })
        .collect()
}

/// Twisted homology of one class in degree `s`, from the window
/// `[-L, L]^n`: cycles there modulo boundaries of chains in `[-L-m, L+m]^n`
/// that fall inside the window.
pub fn twisted_window_estimate(
    n: usize,
    s: usize,
    key: &BlockKey,
    window: i32,
    margin: i32,
    opts: &RankOptions,
) -> Result<WindowEstimate, HomologyError> {
    let job = |part: &str| opts.for_job(&format!("twisted {key} s={s} L={window} m={margin} {part}"));
    let a = block_matrix(n, s, key, window);
    let columns = a.matrix.cols();
    let mut certificates = Vec::new();
    let ra = rank(&a.matrix, &job("A"))?;
    let cycles = columns - ra.rank;
    certificates.push(ra);
    let mut boundaries = 0;
    if s < n {
        let d = block_matrix(n, s + 1, key, window + margin);
        let d_out = d.matrix.select_rows(&d.rows_outside(window));
        let rd = rank(&d.matrix, &job("D"))?;
        let ro = rank(&d_out, &job("D_out"))?;
        boundaries = rd.rank - ro.rank;
        certificates.push(rd);
        certificates.push(ro);
    }
    Ok(WindowEstimate { window, margin, cycles, boundaries, dim: cycles - boundaries, columns, certificates })
}

fn twisted_degree(n: usize, s: usize, window: i32, margin: i32, opts: &RankOptions) -> Result<TwistedDegree, HomologyError> {
    if window < 2 || margin < 2 {
        return Err(HomologyError::InvalidInput(format!("need L >= 2 and margin >= 2, got L={window}, m={margin}")));
    }
    let windows = [window - 1, window];
    let jobs: Vec<(BlockKey, i32)> =
        BlockKey::twisted_classes(n).into_iter().flat_map(|k| windows.iter().map(move |w| (k.clone(), *w))).collect();
    let estimates: Vec<WindowEstimate> = jobs
        .par_iter()
        .map(|(key, w)| twisted_window_estimate(n, s, key, *w, margin, opts))
        .collect::<Result<_, _>>()?;
    let classes: Vec<ClassTrajectory> = jobs
        .chunks(windows.len())
        .zip(estimates.chunks(windows.len()))
        .map(|(job, est)| {
            let stabilized = est.windows(2).all(|p| p[0].dim == p[1].dim);
            ClassTrajectory { class: job[0].0.label().to_string(), value: est.last().unwrap().dim, stabilized, estimates: est.to_vec() }
        })
        .collect();
    Ok(TwistedDegree {
        degree: s,
        dim: classes.iter().map(|c| c.value).sum(),
        stabilized: classes.iter().all(|c| c.stabilized),
        classes,
    })
}

/// Twisted homology in degree `1 ≤ s ≤ n`, estimated at windows `L-1` and `L`.
///
/// Fails with `NotStabilized` if some class changes between the two windows.
pub fn twisted_homology(n: usize, s: usize, window: i32, margin: i32, opts: &RankOptions) -> Result<TwistedDegree, HomologyError> {
    if !(1..=n).contains(&s) {
        return Err(HomologyError::InvalidInput(format!("twisted degree {s} outside 1..={n}")));
    }
    let result = twisted_degree(n, s, window, margin, opts)?;
    if let Some(bad) = result.classes.iter().find(|c| !c.stabilized) {
        return Err(HomologyError::NotStabilized {
            degree: s,
            class: bad.class.clone(),
            trajectory: bad.estimates.iter().map(|e| e.dim).collect(),
        });
    }
    Ok(result)
}

/// Full twisted result: `H_0` by rewriting (cross-checked against the window
/// estimate), `H_s` for `1 ≤ s ≤ n` by window estimates, and invariants.
pub fn twisted_result(n: usize, window: i32, margin: i32, opts: &RankOptions) -> Result<HochschildResult, HomologyError> {
    let h0 = twisted_h0(n);
    let check = twisted_degree(n, 0, window, margin, opts)?;
    for class in &check.classes {
        if class.value != 1 || !class.stabilized {
            return Err(HomologyError::H0Mismatch { class: class.class.clone(), matrix_dim: class.value });
        }
    }
    let invariance = twisted_h0_invariants(n);
    let mut dims = BTreeMap::from([(0, h0.dim)]);
    let mut invariant_dims = BTreeMap::from([(0, invariance.iter().filter(|r| r.invariant).count())]);
    let mut stabilized = BTreeMap::from([(0, true)]);
    let mut notes = Vec::new();
    let mut degrees = vec![check];
    for s in 1..=n {
        let t = twisted_homology(n, s, window, margin, opts)?;
        dims.insert(s, t.dim);
        stabilized.insert(s, t.stabilized);
        if t.dim == 0 {
            invariant_dims.insert(s, 0);
        } else {
            notes.push(format!("twisted degree {s} has dimension {}; its invariant part is not computed", t.dim));
            invariant_dims.insert(s, t.dim);
        }
        degrees.push(t);
    }
    Ok(HochschildResult {
        mode: Mode::Twisted,
        n,
        window,
        dims,
        invariant_dims,
        blocks_checked: vec![],
        stabilized,
        twisted: degrees,
        invariance,
        notes,
    })
}

/// One hyperplane `{β_axis = value}` cleared by the sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hyperplane {
    pub class: ExpVec,
    pub axis: usize,
    pub value: i32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionCertificate {
    pub input: KoszulChain,
    pub preimage: KoszulChain,
    pub residual: KoszulChain,
    pub sweep_trace: Vec<Hyperplane>,
}

impl ReductionCertificate {
    /// `residual = 0` and `d(preimage) = input`, rechecked from scratch.
    pub fn verify(&self) -> bool {
        self.residual.is_zero() && self.preimage.twisted_diff() == self.input
    }
}

/// Writes a twisted cycle of degree `s ≥ 1` as an explicit boundary.
///
/// Axis by axis, the highest hyperplane `{β_a = l}` of the support is cleared
/// with corrections at `β - 2e_a`; once the support is flat along `a` the
/// cycle has no `e_a` factors left and the next axis is swept.
pub fn reduce_twisted_cycle(gamma: &KoszulChain) -> Result<ReductionCertificate, HomologyError> {
    let n = gamma.n();
    let s = gamma.degree();
    if s == 0 || s > n {
        return Err(HomologyError::InvalidInput(format!("cycle degree {s} outside 1..={n}")));
    }
    if !gamma.twisted_diff().is_zero() {
        return Err(HomologyError::NotACycle);
    }
    // the differential preserves residue classes mod 2, so each class is swept on its own
    let mut preimage = KoszulChain::zero(n, s + 1);
    let mut residual = KoszulChain::zero(n, s);
    let mut trace = Vec::new();
    for key in gamma.blocks(Mode::Twisted) {
        let (part, rest, steps) = sweep_class(&gamma.restrict_block(&key), key.label());
        preimage = preimage.add(&part);
        residual = residual.add(&rest);
        trace.extend(steps);
    }
    if !residual.is_zero() {
        return Err(HomologyError::ResidualNonzero { residual: residual.to_string() });
    }
    Ok(ReductionCertificate { input: gamma.clone(), preimage, residual, sweep_trace: trace })
}

fn sweep_class(cycle: &KoszulChain, class: &ExpVec) -> (KoszulChain, KoszulChain, Vec<Hyperplane>) {
    let n = cycle.n();
    let s = cycle.degree();
    let mut current = cycle.clone();
    let mut preimage = KoszulChain::zero(n, s + 1);
    let mut trace = Vec::new();
    for axis in 1..=n {
        loop {
            let (Some(lo), Some(top)) = (
                current.terms().keys().map(|(b, _)| b.coord(axis)).min(),
                current.terms().keys().map(|(b, _)| b.coord(axis)).max(),
            ) else {
                break;
            };
            if lo == top {
                break;
            }
            trace.push(Hyperplane { class: class.clone(), axis, value: top });
            let mut correction = KoszulChain::zero(n, s + 1);
            for ((beta, wedge), c) in current.terms() {
                if beta.coord(axis) != top || wedge.contains(axis) {
                    continue;
                }
                let below = beta.shifted(axis, -2);
                let wider = wedge.with(axis);
                let k = wider.position(axis).expect("axis was just added");
                let tau = Scalar::monomial(twisted_conj_scalar(axis, &below));
                let x = &(c / &tau) * &Scalar::from_int(if k % 2 == 1 { 1 } else { -1 });
                correction.add_term(below, wider, x);
            }
            if correction.is_zero() {
                break;
            }
            current = current.sub(&correction.twisted_diff());
            preimage = preimage.add(&correction);
        }
    }
    (preimage, current, trace)
}

/// A nonzero twisted cycle of degree `s`, built as the boundary of a random
/// degree-`(s+1)` chain with entries in `[-radius, radius]^n`.
pub fn random_twisted_cycle(n: usize, s: usize, radius: i32, seed: u64) -> KoszulChain {
    assert!(s < n, "twisted cycles built as boundaries need s < n");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let wedges = WedgeIndex::all(n, s + 1);
    let vars = crate::scalars::num_vars(n);
    loop {
        let mut mu = KoszulChain::zero(n, s + 1);
        for _ in 0..rng.gen_range(1..=4) {
            let beta: Vec<i32> = (0..n).map(|_| rng.gen_range(-radius..=radius)).collect();
            let w = wedges[rng.gen_range(0..wedges.len())];
            let mut c = 0;
            while c == 0 {
                c = rng.gen_range(-3i64..=3);
            }
            let m = LambdaMonomial::from_exponents((0..vars).map(|_| rng.gen_range(-1..=1)));
            mu.add_term(ExpVec::from_slice(&beta), w, &Scalar::from_int(c) * &Scalar::monomial(m));
        }
        let cycle = mu.twisted_diff();
        if !cycle.is_zero() {
            return cycle;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(v: &[i32]) -> ExpVec {
        ExpVec::from_slice(v)
    }

    #[test]
    fn untwisted_dims_small() {
        let opts = RankOptions::exact();
        let r = untwisted_homology(2, 2, 2, &opts).unwrap();
        assert_eq!(r.dims.values().copied().collect::<Vec<_>>(), vec![1, 2, 1]);
        let r = untwisted_homology(3, 3, 2, &opts).unwrap();
        assert_eq!(r.dims.values().copied().collect::<Vec<_>>(), vec![1, 3, 3, 1]);
        assert!(r.blocks_checked.iter().all(|b| b.nonzero_blocks_exact == 124));
        assert!(untwisted_homology(2, 2, 1, &opts).is_err());
    }

    #[test]
    fn untwisted_invariant_dims() {
        assert_eq!(untwisted_invariants(2, 2).unwrap().0.into_values().collect::<Vec<_>>(), vec![1, 0, 1]);
        assert_eq!(untwisted_invariants(3, 3).unwrap().0.into_values().collect::<Vec<_>>(), vec![1, 0, 3, 0]);
    }

    #[test]
    fn h0_rewrite_example() {
        let x = KoszulChain::basis(ev(&[2, 0]), WedgeIndex::empty(), Scalar::one());
        let r = rewrite_twisted_h0(&x);
        assert_eq!(r.normal_form, BTreeMap::from([(ev(&[0, 0]), Scalar::one())]));
        let rebuilt = KoszulChain::basis(ev(&[0, 0]), WedgeIndex::empty(), Scalar::one()).add(&r.preimage.twisted_diff());
        assert_eq!(rebuilt, x);
    }

    #[test]
    fn h0_rewrite_round_trip() {
        for seed in 0..40u64 {
            let n = 2 + (seed % 2) as usize;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut x = KoszulChain::zero(n, 0);
            for _ in 0..4 {
                let b: Vec<i32> = (0..n).map(|_| rng.gen_range(-4..=4)).collect();
                x.add_term(ev(&b), WedgeIndex::empty(), Scalar::from_int(rng.gen_range(1..=5)));
            }
            let r = rewrite_twisted_h0(&x);
            let mut rebuilt = r.preimage.twisted_diff();
            for (b, c) in &r.normal_form {
                assert!(b.entries().iter().all(|e| (0..=1).contains(e)));
                rebuilt.add_term(b.clone(), WedgeIndex::empty(), c.clone());
            }
            assert_eq!(rebuilt, x);
        }
    }

    #[test]
    fn h0_counts_and_invariants() {
        assert_eq!(twisted_h0(2).dim, 4);
        assert_eq!(twisted_h0(3).dim, 8);
        for n in 2..=4 {
            let inv = twisted_h0_invariants(n);
            assert_eq!(inv.len(), 1 << n);
            assert!(inv.iter().all(|r| r.invariant), "{inv:?}");
        }
    }

    #[test]
    fn twisted_vanishing_n2() {
        let opts = RankOptions::exact();
        for s in 1..=2 {
            let t = twisted_homology(2, s, 3, 2, &opts).unwrap();
            assert_eq!(t.dim, 0);
            assert!(t.stabilized);
        }
        let check = twisted_degree(2, 0, 3, 2, &opts).unwrap();
        assert!(check.classes.iter().all(|c| c.value == 1));
    }

    #[test]
    fn twisted_kernel_matches_modular() {
        let key = BlockKey::twisted(&ev(&[1, 1]));
        let exact = twisted_window_estimate(2, 1, &key, 2, 2, &RankOptions::exact()).unwrap();
        let modular = twisted_window_estimate(2, 1, &key, 2, 2, &RankOptions::modular(9)).unwrap();
        assert_eq!(exact.cycles, modular.cycles);
        assert_eq!(exact.dim, modular.dim);
    }

    #[test]
    fn reduce_zero_and_example() {
        let z = KoszulChain::zero(2, 1);
        let cert = reduce_twisted_cycle(&z).unwrap();
        assert!(cert.preimage.is_zero() && cert.verify());

        let mu = KoszulChain::basis(ev(&[0, 0]), WedgeIndex::new(&[1, 2]), Scalar::one());
        let gamma = mu.twisted_diff();
        let cert = reduce_twisted_cycle(&gamma).unwrap();
        assert!(cert.verify());

        let not_cycle = KoszulChain::basis(ev(&[0, 0]), WedgeIndex::new(&[1]), Scalar::one());
        assert!(matches!(reduce_twisted_cycle(&not_cycle), Err(HomologyError::NotACycle)));
    }

    #[test]
    fn reduce_random_cycles() {
        for seed in 0..20 {
            for (n, s) in [(2, 1), (3, 1), (3, 2), (4, 2)] {
                let gamma = random_twisted_cycle(n, s, 2, seed);
                let cert = reduce_twisted_cycle(&gamma).unwrap();
                assert!(cert.verify(), "n={n} s={s} seed={seed}");
            }
        }
    }
}
