//! Exact sparse linear algebra over [`Scalar`].
//!
//! Two rank backends share one sparse elimination loop (sparsest column
//! first, then the cheapest entry in it):
//!
//! * exact: fraction-free elimination over `Z[λ^±1]`. Unit pivots (`±λ^μ`)
//!   are divided out directly; other pivots cross-multiply and the updated
//!   row is stripped of its integer and monomial content.
//! * modular: the matrix is evaluated at random points of `F_p` and
//!   eliminated there. A modular rank never exceeds the true rank; agreement
//!   across independent seeds is reported, not claimed as proof.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::scalars::{inv_mod, mul_mod, sub_mod, LambdaMonomial, LaurentPoly, ModularPoint, Scalar, ScalarError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("modular evaluation failed: {0}")]
    Scalar(#[from] ScalarError),
    #[error("modular ranks disagree across seeds {seeds:?}: {ranks:?}")]
    Disagreement { ranks: Vec<usize>, seeds: Vec<u64> },
    #[error("d_out · d_in is not zero")]
    NotAComplex,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Column-major sparse matrix over the generic field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, Scalar)>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self { rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zero(k, k);
        for i in 0..k {
            m.columns[i].push((i, Scalar::one()));
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` triplets; duplicates add up.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Scalar)>,
    {
        let mut acc: Vec<HashMap<usize, Scalar>> = vec![HashMap::new(); cols];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r}, {c}) out of range {rows}x{cols}");
            let slot = acc[c].entry(r).or_default();
            *slot = &*slot + &v;
        }
        let columns = acc
            .into_iter()
            .map(|col| {
                let mut col: Vec<_> = col.into_iter().filter(|(_, v)| !v.is_zero()).collect();
                col.sort_by_key(|(r, _)| *r);
                col
            })
            .collect();
        Self { rows, cols, columns }
    }

    /// Builds a matrix from sparse columns given as `(row, value)` lists.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, Scalar)>>) -> Self {
        let cols = columns.len();
        Self::from_triplets(
            rows,
            cols,
            columns.into_iter().enumerate().flat_map(|(c, col)| col.into_iter().map(move |(r, v)| (r, c, v))),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> &[(usize, Scalar)] {
        &self.columns[c]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.columns[c]
            .binary_search_by_key(&r, |(row, _)| *row)
            .map(|k| self.columns[c][k].1.clone())
            .unwrap_or_default()
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    /// `(row, col, value)` for every stored entry.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.columns.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![Scalar::zero(); self.rows];
        for (c, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (r, a) in &self.columns[c] {
                out[*r] = &out[*r] + &(a * x);
            }
        }
        out
    }

    /// Exact product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let columns = other
            .columns
            .iter()
            .map(|ocol| {
                let mut acc: HashMap<usize, Scalar> = HashMap::new();
                for (k, b) in ocol {
                    for (r, a) in &self.columns[*k] {
                        let slot = acc.entry(*r).or_default();
                        *slot = &*slot + &(a * b);
                    }
                }
                acc.into_iter().collect()
            })
            .collect();
        Ok(Self::from_columns(self.rows, columns))
    }

    /// Keeps the listed rows (in the given order), renumbered from zero.
    pub fn select_rows(&self, keep: &[usize]) -> Self {
        let index: HashMap<usize, usize> = keep.iter().enumerate().map(|(new, old)| (*old, new)).collect();
        let columns = self
            .columns
            .iter()
            .map(|col| col.iter().filter_map(|(r, v)| index.get(r).map(|nr| (*nr, v.clone()))).collect())
            .collect();
        Self::from_columns(keep.len(), columns)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Modular,
    /// Modular above [`RankOptions::auto_threshold`] columns, exact otherwise.
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendUsed {
    Exact,
    Modular,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankOptions {
    pub backend: Backend,
    pub seed: u64,
    /// Independent evaluation points per modular rank (at least two are used).
    pub modular_seeds: usize,
    pub auto_threshold: usize,
}

impl Default for RankOptions {
    fn default() -> Self {
        Self { backend: Backend::Auto, seed: 0, modular_seeds: 3, auto_threshold: 500 }
    }
}

impl RankOptions {
    pub fn exact() -> Self {
        Self { backend: Backend::Exact, ..Self::default() }
    }

    pub fn modular(seed: u64) -> Self {
        Self { backend: Backend::Modular, seed, ..Self::default() }
    }

    /// Same options with a job-specific seed.
    pub fn for_job(&self, label: &str) -> Self {
        Self { seed: derive_seed(self.seed, label), ..self.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankCertificate {
    pub rank: usize,
    pub backend: BackendUsed,
    pub seeds: Vec<u64>,
    pub agreement: bool,
}

/// Deterministic per-job seed (FNV-1a of the label folded through splitmix64).
pub fn derive_seed(base: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    splitmix64(base ^ h)
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Rank over `Q(λ)` with the requested backend.
pub fn rank(m: &SparseMatrix, opts: &RankOptions) -> Result<RankCertificate, LinalgError> {
    let use_modular = match opts.backend {
        Backend::Exact => false,
        Backend::Modular => true,
        Backend::Auto => m.cols() > opts.auto_threshold,
    };
    if !use_modular {
        return Ok(RankCertificate { rank: exact_rank(m), backend: BackendUsed::Exact, seeds: vec![], agreement: true });
    }
    let n_vars = max_var_count(m);
    let wanted = opts.modular_seeds.max(2);
    let mut seeds = Vec::new();
    let mut ranks = Vec::new();
    let mut attempt = 0u64;
    while ranks.len() < wanted {
        if attempt > 16 * wanted as u64 {
            return Err(LinalgError::Scalar(ScalarError::DenominatorVanished { seed: opts.seed }));
        }
        let seed = splitmix64(opts.seed.wrapping_add(attempt));
        attempt += 1;
        let point = ModularPoint::random_for_vars(n_vars, seed);
        match modular_rank(m, &point) {
            Ok(r) => {
                seeds.push(seed);
                ranks.push(r);
            }
            Err(ScalarError::DenominatorVanished { .. }) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    if ranks.iter().all(|r| *r == ranks[0]) {
        return Ok(RankCertificate { rank: ranks[0], backend: BackendUsed::Modular, seeds, agreement: true });
    }
    match opts.backend {
        Backend::Auto => Ok(RankCertificate { rank: exact_rank(m), backend: BackendUsed::Exact, seeds, agreement: false }),
        _ => Err(LinalgError::Disagreement { ranks, seeds }),
    }
}

fn max_var_count(m: &SparseMatrix) -> usize {
    m.entries()
        .flat_map(|(_, _, v)| v.numerator().terms().iter().chain(v.denominator().terms()))
        .map(|(mono, _)| mono.exponents().len())
        .max()
        .unwrap_or(0)
}

/// Rank over the fraction field by fraction-free elimination.
pub fn exact_rank(m: &SparseMatrix) -> usize {
    // rank(M) = rank(M^T): eliminate the columns as sparse vectors
    let vectors: Vec<Vec<(u32, LaurentPoly)>> = (0..m.cols()).map(|c| clear_denominators(m.column(c))).collect();
    sparse_rank(&PolyDomain, vectors, m.rows())
}

/// Rank of the image of `m` at a modular point.
pub fn modular_rank(m: &SparseMatrix, point: &ModularPoint) -> Result<usize, ScalarError> {
    let mut vectors = Vec::with_capacity(m.cols());
    for c in 0..m.cols() {
        let mut v = Vec::with_capacity(m.column(c).len());
        for (r, x) in m.column(c) {
            let e = x.evaluate_mod(point)?;
            if e != 0 {
                v.push((*r as u32, e));
            }
        }
        vectors.push(v);
    }
    Ok(sparse_rank(&ModDomain { prime: point.prime }, vectors, m.rows()))
}

fn clear_denominators(col: &[(usize, Scalar)]) -> Vec<(u32, LaurentPoly)> {
    let mut dens: Vec<&LaurentPoly> = Vec::new();
    for (_, x) in col {
        let d = x.denominator();
        if !d.is_one() && !dens.contains(&d) {
            dens.push(d);
        }
    }
    let common = dens.iter().fold(LaurentPoly::one(), |acc, d| &acc * *d);
    col.iter()
        .map(|(r, x)| {
            let scale = if x.denominator().is_one() {
                common.clone()
            } else {
                common.div_exact(x.denominator()).expect("denominator divides the product")
            };
            (*r as u32, x.numerator() * &scale)
        })
        .collect()
}

impl ModularPoint {
    /// Random point over [`crate::scalars::MERSENNE_61`] for a given variable count.
    pub(crate) fn random_for_vars(n_vars: usize, seed: u64) -> Self {
        // smallest torus dimension with at least `n_vars` parameters
        let mut n = 0;
        while crate::scalars::num_vars(n) < n_vars {
            n += 1;
        }
        Self::random(n.max(2), seed)
    }
}

/// Arithmetic needed by the sparse elimination loop.
trait EliminationDomain {
    type Elem: Clone;
    type Pivot;

    fn cost(&self, e: &Self::Elem) -> u64;
    fn prepare(&self, pivot: &Self::Elem) -> Self::Pivot;
    /// `target` with its entry `t` in the pivot column cancelled against the
    /// pivot row. The result has no entry in that column.
    fn eliminate(
        &self,
        target: &[(u32, Self::Elem)],
        t: &Self::Elem,
        pivot_row: &[(u32, Self::Elem)],
        pivot: &Self::Pivot,
    ) -> Vec<(u32, Self::Elem)>;
}

struct ModDomain {
    prime: u64,
}

impl EliminationDomain for ModDomain {
    type Elem = u64;
    type Pivot = u64;

    fn cost(&self, _: &u64) -> u64 {
        0
    }

    fn prepare(&self, pivot: &u64) -> u64 {
        inv_mod(*pivot, self.prime)
    }

    fn eliminate(&self, target: &[(u32, u64)], t: &u64, pivot_row: &[(u32, u64)], inv: &u64) -> Vec<(u32, u64)> {
        let p = self.prime;
        let f = mul_mod(*t, *inv, p);
        let mut out = Vec::with_capacity(target.len() + pivot_row.len());
        let (mut i, mut j) = (0, 0);
        while i < target.len() || j < pivot_row.len() {
            let ci = target.get(i).map(|x| x.0).unwrap_or(u32::MAX);
            let cj = pivot_row.get(j).map(|x| x.0).unwrap_or(u32::MAX);
            if ci < cj {
                out.push(target[i]);
                i += 1;
            } else if cj < ci {
                out.push((cj, sub_mod(0, mul_mod(f, pivot_row[j].1, p), p)));
                j += 1;
            } else {
                let v = sub_mod(target[i].1, mul_mod(f, pivot_row[j].1, p), p);
                if v != 0 {
                    out.push((ci, v));
                }
                i += 1;
                j += 1;
            }
        }
        out
    }
}

struct PolyDomain;

enum PolyPivot {
    /// Inverse of a unit pivot.
    Unit(LaurentPoly),
    General(LaurentPoly),
}

fn combine_rows(
    target: &[(u32, LaurentPoly)],
    a: &LaurentPoly,
    pivot_row: &[(u32, LaurentPoly)],
    b: &LaurentPoly,
) -> Vec<(u32, LaurentPoly)> {
    // a·target − b·pivot_row
    let mut out = Vec::with_capacity(target.len() + pivot_row.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < pivot_row.len() {
        let ci = target.get(i).map(|x| x.0).unwrap_or(u32::MAX);
        let cj = pivot_row.get(j).map(|x| x.0).unwrap_or(u32::MAX);
        if ci < cj {
            out.push((ci, a * &target[i].1));
            i += 1;
        } else if cj < ci {
            out.push((cj, -(b * &pivot_row[j].1)));
            j += 1;
        } else {
            let v = &(a * &target[i].1) - &(b * &pivot_row[j].1);
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn strip_content(row: &mut [(u32, LaurentPoly)]) {
    let mut g = BigInt::zero();
    let mut shift: Option<LambdaMonomial> = None;
    for (_, v) in row.iter() {
        g = g.gcd(&v.integer_content());
        let c = v.monomial_content();
        shift = Some(match shift {
            None => c,
            Some(s) => {
                let len = s.exponents().len().max(c.exponents().len());
                LambdaMonomial::from_exponents((0..len).map(|k| {
                    let a = s.exponents().get(k).copied().unwrap_or(0);
                    let b = c.exponents().get(k).copied().unwrap_or(0);
                    a.min(b)
                }))
            }
        });
    }
    let inv_shift = shift.map(|s| s.inv()).unwrap_or_default();
    if g.is_zero() || (g.is_one() && inv_shift.is_one()) {
        return;
    }
    for (_, v) in row.iter_mut() {
        let mut nv = if g.is_one() { v.clone() } else { v.div_integer_exact(&g) };
        if !inv_shift.is_one() {
            nv = nv.mul_monomial(&inv_shift);
        }
        *v = nv;
    }
}

impl EliminationDomain for PolyDomain {
    type Elem = LaurentPoly;
    type Pivot = (LaurentPoly, PolyPivot);

    fn cost(&self, e: &LaurentPoly) -> u64 {
        if e.is_unit() {
            0
        } else {
            1 + 64 * e.degree() as u64 + e.len() as u64
        }
    }

    fn prepare(&self, pivot: &LaurentPoly) -> Self::Pivot {
        let kind = match pivot.as_unit() {
            Some((m, positive)) => PolyPivot::Unit(LaurentPoly::term(m.inv(), if positive { 1 } else { -1 })),
            None => PolyPivot::General(pivot.clone()),
        };
        (pivot.clone(), kind)
    }

    fn eliminate(
        &self,
        target: &[(u32, LaurentPoly)],
        t: &LaurentPoly,
        pivot_row: &[(u32, LaurentPoly)],
        pivot: &Self::Pivot,
    ) -> Vec<(u32, LaurentPoly)> {
        match &pivot.1 {
            PolyPivot::Unit(inv) => combine_rows(target, &LaurentPoly::one(), pivot_row, &(t * inv)),
            PolyPivot::General(p) => {
                let mut row = combine_rows(target, p, pivot_row, t);
                strip_content(&mut row);
                row
            }
        }
    }
}

/// Rank of a list of sparse vectors (sorted by index) of length `width`.
fn sparse_rank<D: EliminationDomain>(dom: &D, vectors: Vec<Vec<(u32, D::Elem)>>, width: usize) -> usize {
    let mut rows: Vec<Option<Vec<(u32, D::Elem)>>> =
        vectors.into_iter().map(|v| if v.is_empty() { None } else { Some(v) }).collect();
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); width];
    for (ri, row) in rows.iter().enumerate() {
        if let Some(row) = row {
            debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
            for (c, _) in row {
                col_rows[*c as usize].push(ri as u32);
            }
        }
    }
    let mut heap: BinaryHeap<Reverse<(usize, u32)>> = col_rows
        .iter()
        .enumerate()
        .filter(|(_, rs)| !rs.is_empty())
        .map(|(c, rs)| Reverse((rs.len(), c as u32)))
        .collect();
    let mut done = vec![false; width];
    let mut rank = 0;

    let remove = |list: &mut Vec<u32>, r: u32| {
        if let Some(k) = list.iter().position(|x| *x == r) {
            list.swap_remove(k);
        }
    };

    while let Some(Reverse((count, c))) = heap.pop() {
        let cu = c as usize;
        if done[cu] || col_rows[cu].len() != count || count == 0 {
            continue;
        }
        // cheapest pivot entry, then shortest row
        let (pr, _) = col_rows[cu]
            .iter()
            .map(|&r| {
                let row = rows[r as usize].as_ref().expect("listed row is live");
                let e = &row[row.binary_search_by_key(&c, |x| x.0).expect("entry present")].1;
                (r, (dom.cost(e), row.len()))
            })
            .min_by_key(|(r, key)| (*key, *r))
            .expect("nonempty column");
        let prow = rows[pr as usize].take().expect("pivot row is live");
        let pval = prow[prow.binary_search_by_key(&c, |x| x.0).unwrap()].1.clone();
        let pivot = dom.prepare(&pval);
        for (cc, _) in &prow {
            let list = &mut col_rows[*cc as usize];
            remove(list, pr);
            if *cc != c && !done[*cc as usize] && !list.is_empty() {
                heap.push(Reverse((list.len(), *cc)));
            }
        }
        let targets = std::mem::take(&mut col_rows[cu]);
        for t in targets {
            let trow = rows[t as usize].take().expect("target row is live");
            let tval = trow[trow.binary_search_by_key(&c, |x| x.0).unwrap()].1.clone();
            let new = dom.eliminate(&trow, &tval, &prow, &pivot);
            // update column membership by merging the old and new patterns
            let (mut i, mut j) = (0, 0);
            while i < trow.len() || j < new.len() {
                let ci = trow.get(i).map(|x| x.0).unwrap_or(u32::MAX);
                let cj = new.get(j).map(|x| x.0).unwrap_or(u32::MAX);
                if ci == cj {
                    i += 1;
                    j += 1;
                    continue;
                }
                let changed = if ci < cj {
                    i += 1;
                    if ci != c {
                        remove(&mut col_rows[ci as usize], t);
                    }
                    ci
                } else {
                    j += 1;
                    col_rows[cj as usize].push(t);
                    cj
                };
                if changed != c && !done[changed as usize] && !col_rows[changed as usize].is_empty() {
                    heap.push(Reverse((col_rows[changed as usize].len(), changed)));
                }
            }
            rows[t as usize] = if new.is_empty() { None } else { Some(new) };
        }
        done[cu] = true;
        rank += 1;
    }
    rank
}

fn pivot_preference(x: &Scalar) -> (u8, usize) {
    if x.as_signed_monomial().is_some() {
        (0, 0)
    } else {
        (1, x.numerator().len() + x.denominator().len())
    }
}

/// Basis of `ker(m)` over `Q(λ)` by Gauss–Jordan elimination.
///
/// Dense internally; meant for the small matrices used in tests and
/// diagnostics, not for full window blocks.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vec<Scalar>> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = vec![vec![Scalar::zero(); cols]; rows];
    for (r, c, v) in m.entries() {
        a[r][c] = v.clone();
    }
    let mut pivot_cols = Vec::new();
    let mut next_row = 0;
    for c in 0..cols {
        if next_row == rows {
            break;
        }
        let Some(pr) = (next_row..rows).filter(|r| !a[*r][c].is_zero()).min_by_key(|r| pivot_preference(&a[*r][c]))
        else {
            continue;
        };
        a.swap(next_row, pr);
        let inv = a[next_row][c].inv().expect("nonzero pivot");
        for x in a[next_row].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = a[next_row].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == next_row || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (k, pv) in pivot_row.iter().enumerate() {
                if !pv.is_zero() {
                    row[k] = &row[k] - &(&f * pv);
                }
            }
        }
        pivot_cols.push(c);
        next_row += 1;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![Scalar::zero(); cols];
        v[free] = Scalar::one();
        for (r, pc) in pivot_cols.iter().enumerate() {
            v[*pc] = -&a[r][free];
        }
        basis.push(v);
    }
    basis
}

/// `dim ker(d_out) − rank(d_in)` for a composable pair with `d_out · d_in = 0`.
pub fn image_quotient_dim(d_in: &SparseMatrix, d_out: &SparseMatrix, opts: &RankOptions) -> Result<usize, LinalgError> {
    let product = d_out.mul(d_in)?;
    if !product.is_zero_matrix() {
        return Err(LinalgError::NotAComplex);
    }
    let r_out = rank(d_out, opts)?.rank;
    let r_in = rank(d_in, opts)?.rank;
    Ok(d_out.cols() - r_out - r_in)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lam(i: usize, j: usize) -> Scalar {
        Scalar::lambda(i, j)
    }

    /// Oracle: rank by dense Gaussian elimination over Scalar fractions.
    fn dense_rank(m: &SparseMatrix) -> usize {
        m.cols() - kernel_basis(m).len()
    }

    #[test]
    fn trivial_ranks() {
        let z = SparseMatrix::zero(4, 5);
        assert_eq!(rank(&z, &RankOptions::exact()).unwrap().rank, 0);
        assert_eq!(rank(&z, &RankOptions::modular(1)).unwrap().rank, 0);
        for k in 1..6 {
            let id = SparseMatrix::identity(k);
            assert_eq!(rank(&id, &RankOptions::exact()).unwrap().rank, k);
            assert_eq!(rank(&id, &RankOptions::modular(3)).unwrap().rank, k);
        }
    }

    #[test]
    fn single_nonzero_entry() {
        // the n=2, s=1, β=(0,1) untwisted block: [-(1-λ12^-1), 0]
        let entry = -(&Scalar::one() - &lam(2, 1));
        let m = SparseMatrix::from_triplets(1, 2, [(0, 0, entry)]);
        assert_eq!(rank(&m, &RankOptions::exact()).unwrap().rank, 1);
    }

    #[test]
    fn generic_rank_drop_detected_exactly() {
        // [[1-λ, 1-λ^2], [1, 1+λ]] is singular over Q(λ)
        let l = lam(1, 2);
        let one = Scalar::one();
        let m = SparseMatrix::from_triplets(
            2,
            2,
            [
                (0, 0, &one - &l),
                (0, 1, &one - &(&l * &l)),
                (1, 0, one.clone()),
                (1, 1, &one + &l),
            ],
        );
        assert_eq!(exact_rank(&m), 1);
        assert_eq!(dense_rank(&m), 1);
        let cert = rank(&m, &RankOptions::modular(11)).unwrap();
        assert_eq!(cert.rank, 1);
        assert!(cert.seeds.len() >= 2 && cert.agreement);
    }

    #[test]
    fn kernel_basics() {
        assert!(kernel_basis(&SparseMatrix::identity(3)).is_empty());
        let z = SparseMatrix::zero(2, 3);
        let k = kernel_basis(&z);
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                assert_eq!(x.is_one(), i == j);
                assert_eq!(x.is_zero(), i != j);
            }
        }
    }

    #[test]
    fn quotient_dim_examples() {
        let z_in = SparseMatrix::zero(3, 2);
        let z_out = SparseMatrix::zero(1, 3);
        assert_eq!(image_quotient_dim(&z_in, &z_out, &RankOptions::exact()).unwrap(), 3);
        // 0 -> k --id--> k -> 0 is exact at the middle
        let id = SparseMatrix::identity(2);
        let zero = SparseMatrix::zero(0, 2);
        assert_eq!(image_quotient_dim(&id, &zero, &RankOptions::exact()).unwrap(), 0);
        assert_eq!(
            image_quotient_dim(&id, &SparseMatrix::identity(2), &RankOptions::exact()),
            Err(LinalgError::NotAComplex)
        );
    }

    #[test]
    fn derive_seed_is_stable() {
        assert_eq!(derive_seed(7, "twisted"), derive_seed(7, "twisted"));
        assert_ne!(derive_seed(7, "twisted"), derive_seed(8, "twisted"));
        assert_ne!(derive_seed(7, "a"), derive_seed(7, "b"));
    }

    fn entry() -> impl Strategy<Value = Scalar> {
        prop_oneof![
            3 => Just(Scalar::zero()),
            1 => (-2i64..=2).prop_map(Scalar::from_int),
            1 => (-2i32..=2, -1i32..=1).prop_map(|(a, b)| Scalar::monomial(LambdaMonomial::from_exponents([a, b]))),
            1 => (-2i32..=2).prop_map(|a| &Scalar::one() - &Scalar::monomial(LambdaMonomial::from_exponents([a, 1]))),
        ]
    }

    fn matrix() -> impl Strategy<Value = SparseMatrix> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            prop::collection::vec(entry(), r * c).prop_map(move |vals| {
                SparseMatrix::from_triplets(r, c, vals.into_iter().enumerate().map(|(k, v)| (k / c, k % c, v)))
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn kernel_vectors_are_exact(m in matrix()) {
            let k = kernel_basis(&m);
            for v in &k {
                prop_assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
            }
            let r = exact_rank(&m);
            prop_assert_eq!(r + k.len(), m.cols());
        }

        #[test]
        fn exact_and_modular_agree(m in matrix(), seed in 0u64..1_000) {
            let exact = exact_rank(&m);
            let modular = rank(&m, &RankOptions::modular(seed)).unwrap();
            prop_assert_eq!(exact, modular.rank);
            prop_assert_eq!(exact, dense_rank(&m));
        }
    }
}
