//! Koszul chains `A ⊗ Λ^s V` and the untwisted and twisted differentials.
//!
//! A basis element is a pair `(β, I)`: the monomial `ν^β` tensored with
//! `e_{i_1} ∧ ⋯ ∧ e_{i_s}`. Both differentials are diagonal in a grading
//! (the multidegree `β` untwisted, its class mod `2Z^n` twisted), so every
//! computation splits into independent blocks.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::algebra::{conj_scalar, twisted_conj_scalar, ExpVec};
use crate::linalg::SparseMatrix;
use crate::scalars::Scalar;

/// Strictly increasing subset of `{1..n}`, stored as a bitmask (bit `i-1` for axis `i`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WedgeIndex(u32);

impl WedgeIndex {
    pub fn empty() -> Self {
        Self(0)
    }

    /// Panics unless `axes` is strictly increasing and 1-based.
    pub fn new(axes: &[usize]) -> Self {
        assert!(axes.windows(2).all(|w| w[0] < w[1]), "wedge axes must increase strictly: {axes:?}");
        let mut bits = 0u32;
        for &a in axes {
            assert!((1..=32).contains(&a), "axis {a} out of range");
            bits |= 1 << (a - 1);
        }
        Self(bits)
    }

    pub fn degree(&self) -> usize {
        self.0.count_ones() as usize
    }

    /// Axes in increasing order.
    pub fn axes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..32).filter(move |b| self.0 >> b & 1 == 1).map(|b| b + 1)
    }

    pub fn contains(&self, axis: usize) -> bool {
        self.0 >> (axis - 1) & 1 == 1
    }

    pub fn with(&self, axis: usize) -> Self {
        Self(self.0 | 1 << (axis - 1))
    }

    pub fn without(&self, axis: usize) -> Self {
        Self(self.0 & !(1 << (axis - 1)))
    }

    /// 1-based position of `axis` among the sorted axes.
    pub fn position(&self, axis: usize) -> Option<usize> {
        self.contains(axis).then(|| (self.0 & ((1 << (axis - 1)) - 1)).count_ones() as usize + 1)
    }

    /// Largest axis used, 0 for the empty wedge.
    pub fn max_axis(&self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    /// All wedges of size `s` in `{1..n}`, in lexicographic order of axis tuples.
    pub fn all(n: usize, s: usize) -> Vec<Self> {
        fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<WedgeIndex>) {
            if left == 0 {
                out.push(WedgeIndex::new(cur));
                return;
            }
            for a in start..=n {
                if n - a + 1 < left {
                    break;
                }
                cur.push(a);
                rec(a + 1, n, left - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if s <= n {
            rec(1, n, s, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl fmt::Display for WedgeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, a) in self.axes().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Untwisted,
    Twisted,
}

/// Finitely supported element of `A ⊗ Λ^s V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulChain {
    n: usize,
    degree: usize,
    terms: BTreeMap<(ExpVec, WedgeIndex), Scalar>,
}

impl KoszulChain {
    pub fn zero(n: usize, degree: usize) -> Self {
        Self { n, degree, terms: BTreeMap::new() }
    }

    pub fn basis(beta: ExpVec, wedge: WedgeIndex, coeff: Scalar) -> Self {
        let mut out = Self::zero(beta.len(), wedge.degree());
        out.add_term(beta, wedge, coeff);
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<(ExpVec, WedgeIndex), Scalar> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, beta: &ExpVec, wedge: WedgeIndex) -> Scalar {
        self.terms.get(&(beta.clone(), wedge)).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, beta: ExpVec, wedge: WedgeIndex, coeff: Scalar) {
        assert_eq!(beta.len(), self.n, "exponent vector of the wrong torus");
        assert_eq!(wedge.degree(), self.degree, "wedge {wedge} in a degree-{} chain", self.degree);
        assert!(wedge.max_axis() <= self.n, "wedge {wedge} outside {{1..{}}}", self.n);
        if coeff.is_zero() {
            return;
        }
        let key = (beta, wedge);
        match self.terms.get_mut(&key) {
            Some(c) => {
                *c = &*c + &coeff;
                if c.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for ((b, w), c) in &other.terms {
            out.add_term(b.clone(), *w, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.n, self.degree);
        for ((b, w), x) in &self.terms {
            out.add_term(b.clone(), *w, x * c);
        }
        out
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!((self.n, self.degree), (other.n, other.degree), "chains of different shape");
    }

    /// `Σ_k (-1)^k (1 - σ(i_k, β)) (β, I∖i_k)`.
    pub fn untwisted_diff(&self) -> Self {
        assert!(self.degree >= 1, "differential of a degree-0 chain");
        let mut out = Self::zero(self.n, self.degree - 1);
        for ((beta, wedge), c) in &self.terms {
            for (k, axis) in wedge.axes().enumerate() {
                let factor = &Scalar::one() - &Scalar::monomial(conj_scalar(axis, beta));
                if factor.is_zero() {
                    continue;
                }
                let sign = if k % 2 == 0 { -1 } else { 1 };
                out.add_term(beta.clone(), wedge.without(axis), &(c * &factor) * &Scalar::from_int(sign));
            }
        }
        out
    }

    /// `Σ_k (-1)^k [(β, I∖i_k) - τ(i_k, β) (β + 2e_{i_k}, I∖i_k)]`.
    pub fn twisted_diff(&self) -> Self {
        assert!(self.degree >= 1, "differential of a degree-0 chain");
        let mut out = Self::zero(self.n, self.degree - 1);
        for ((beta, wedge), c) in &self.terms {
            for (k, axis) in wedge.axes().enumerate() {
                let signed = if k % 2 == 0 { -c } else { c.clone() };
                let face = wedge.without(axis);
                let tau = Scalar::monomial(twisted_conj_scalar(axis, beta));
                out.add_term(beta.clone(), face, signed.clone());
                out.add_term(beta.shifted(axis, 2), face, -(&signed * &tau));
            }
        }
        out
    }

    pub fn diff(&self, mode: Mode) -> Self {
        match mode {
            Mode::Untwisted => self.untwisted_diff(),
            Mode::Twisted => self.twisted_diff(),
        }
    }

    pub fn restrict_block(&self, key: &BlockKey) -> Self {
        let mut out = Self::zero(self.n, self.degree);
        for ((b, w), c) in &self.terms {
            if key.contains(b) {
                out.terms.insert((b.clone(), *w), c.clone());
            }
        }
        out
    }

    /// Distinct blocks meeting the support.
    pub fn blocks(&self, mode: Mode) -> Vec<BlockKey> {
        let mut keys: Vec<BlockKey> = self.terms.keys().map(|(b, _)| BlockKey::of(mode, b)).collect();
        keys.sort();
        keys.dedup();
        keys
    }

    /// Largest coordinate magnitude in the support.
    pub fn sup_norm(&self) -> i32 {
        self.terms.keys().map(|(b, _)| b.sup_norm()).max().unwrap_or(0)
    }
}

impl fmt::Display for KoszulChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ((b, w), c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*[{b}|{w}]")?;
        }
        Ok(())
    }
}

/// A summand of the block decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockKey {
    mode: Mode,
    label: ExpVec,
}

impl BlockKey {
    pub fn untwisted(beta: ExpVec) -> Self {
        Self { mode: Mode::Untwisted, label: beta }
    }

    /// Residue class of `beta` mod 2.
    pub fn twisted(beta: &ExpVec) -> Self {
        Self { mode: Mode::Twisted, label: beta.mod2() }
    }

    pub fn of(mode: Mode, beta: &ExpVec) -> Self {
        match mode {
            Mode::Untwisted => Self::untwisted(beta.clone()),
            Mode::Twisted => Self::twisted(beta),
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn label(&self) -> &ExpVec {
        &self.label
    }

    pub fn contains(&self, beta: &ExpVec) -> bool {
        match self.mode {
            Mode::Untwisted => beta == &self.label,
            Mode::Twisted => beta.mod2() == self.label,
        }
    }

    /// Multidegrees of the block inside `[-window, window]^n`, lexicographic.
    pub fn points(&self, window: i32) -> Vec<ExpVec> {
        match self.mode {
            Mode::Untwisted => {
                if self.label.sup_norm() <= window {
                    vec![self.label.clone()]
                } else {
                    vec![]
                }
            }
            Mode::Twisted => {
                let axes: Vec<Vec<i32>> =
                    self.label.entries().iter().map(|r| (-window..=window).filter(|x| (x - r) % 2 == 0).collect()).collect();
                let mut out = vec![Vec::new()];
                for choices in &axes {
                    out = out
                        .into_iter()
                        .flat_map(|prefix| {
                            choices.iter().map(move |x| {
                                let mut p = prefix.clone();
                                p.push(*x);
                                p
                            })
                        })
                        .collect();
                }
                out.into_iter().map(|p| ExpVec::from_slice(&p)).collect()
            }
        }
    }

    /// The `2^n` twisted classes, lexicographic.
    pub fn twisted_classes(n: usize) -> Vec<Self> {
        (0..1u32 << n)
            .map(|m| {
                let v: Vec<i32> = (0..n).map(|k| (m >> (n - 1 - k) & 1) as i32).collect();
                Self::twisted(&ExpVec::from_slice(&v))
            })
            .collect()
    }
}

impl fmt::Display for BlockKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = match self.mode {
            Mode::Untwisted => "untwisted",
            Mode::Twisted => "twisted",
        };
        write!(f, "{m}:{}", self.label)
    }
}

/// Matrix of `d_s` on one block: columns are the degree-`s` basis in the
/// domain window, rows the degree-`(s-1)` basis of a window wide enough to
/// hold every image.
#[derive(Clone, Debug)]
pub struct BlockMatrix {
    pub key: BlockKey,
    pub degree: usize,
    pub window: i32,
    pub codomain_window: i32,
    pub domain: Vec<(ExpVec, WedgeIndex)>,
    pub codomain: Vec<(ExpVec, WedgeIndex)>,
    pub matrix: SparseMatrix,
}

impl BlockMatrix {
    /// Rows whose multidegree lies outside `[-inner, inner]^n`.
    pub fn rows_outside(&self, inner: i32) -> Vec<usize> {
        self.codomain.iter().enumerate().filter(|(_, (b, _))| b.sup_norm() > inner).map(|(r, _)| r).collect()
    }
}

fn basis(key: &BlockKey, n: usize, s: Option<usize>, window: i32) -> Vec<(ExpVec, WedgeIndex)> {
    let Some(s) = s else { return vec![] };
    let wedges = WedgeIndex::all(n, s);
    key.points(window).into_iter().flat_map(|b| wedges.iter().map(move |w| (b.clone(), *w))).collect()
}

/// Matrix of `d_s` restricted to `key` and the window `[-window, window]^n`.
pub fn block_matrix(n: usize, s: usize, key: &BlockKey, window: i32) -> BlockMatrix {
    assert!(window >= 1, "window must be at least 1");
    assert_eq!(key.label.len(), n);
    let codomain_window = match key.mode {
        Mode::Untwisted => window,
        Mode::Twisted => window + 2,
    };
    let domain = basis(key, n, Some(s), window);
    let codomain = basis(key, n, s.checked_sub(1), codomain_window);
    let index: HashMap<&(ExpVec, WedgeIndex), usize> = codomain.iter().enumerate().map(|(k, b)| (b, k)).collect();
    let columns = domain
        .iter()
        .map(|(b, w)| {
            if s == 0 {
                return vec![];
            }
            let image = KoszulChain::basis(b.clone(), *w, Scalar::one()).diff(key.mode);
            image
                .terms()
                .iter()
                .map(|(t, c)| (*index.get(t).unwrap_or_else(|| panic!("image term {:?} outside codomain window", t)), c.clone()))
                .collect()
        })
        .collect();
    let matrix = SparseMatrix::from_columns(codomain.len(), columns);
    BlockMatrix { key: key.clone(), degree: s, window, codomain_window, domain, codomain, matrix }
}
