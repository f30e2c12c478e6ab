//! Comparison maps between the Koszul complex and the Hochschild (bar)
//! complex, used to read off the flip action on untwisted homology.
//!
//! `h` sends a Koszul generator to its antisymmetrization in the bar complex,
//! `k` goes back through the maps `ρ_i` and the graded product on
//! `E_• = A ⊗ Λ^• V ⊗ A`. Only chains whose slots are single monomials are
//! handled; that is all the invariance computation needs.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{flip_monomial, monomial_inverse, monomial_product, ExpVec};
use crate::koszul::{KoszulChain, WedgeIndex};
use crate::scalars::{LambdaMonomial, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransportError {
    #[error("bar term {0} is not of the form (ν^π1⋯ν^πs)^-1 ⊗ ν^π1 ⊗ ⋯ ⊗ ν^πs")]
    ShapeError(String),
    #[error("k(flip(h(g))) is not a multiple of the generator: {0}")]
    NotAMultiple(String),
}

/// Hochschild chain `Σ c · ν^a0 ⊗ ν^a1 ⊗ ⋯ ⊗ ν^as` with monomial slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarChain {
    n: usize,
    degree: usize,
    terms: BTreeMap<Vec<ExpVec>, Scalar>,
}

impl BarChain {
    pub fn zero(n: usize, degree: usize) -> Self {
        Self { n, degree, terms: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<ExpVec>, Scalar> {
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

    pub fn add_term(&mut self, slots: Vec<ExpVec>, coeff: Scalar) {
        assert_eq!(slots.len(), self.degree + 1, "bar term with the wrong number of slots");
        assert!(slots.iter().all(|s| s.len() == self.n));
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&slots) {
            Some(c) => {
                *c = &*c + &coeff;
                if c.is_zero() {
                    self.terms.remove(&slots);
                }
            }
            None => {
                self.terms.insert(slots, coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (slots, c) in &other.terms {
            out.add_term(slots.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.n, self.degree);
        for (slots, x) in &self.terms {
            out.add_term(slots.clone(), x * c);
        }
        out
    }

    /// Hochschild boundary
    /// `b(a0⊗⋯⊗as) = Σ_{i<s} (-1)^i a0⊗⋯⊗a_i a_{i+1}⊗⋯ + (-1)^s a_s a0⊗a1⊗⋯⊗a_{s-1}`.
    pub fn boundary(&self) -> Self {
        assert!(self.degree >= 1);
        let s = self.degree;
        let mut out = Self::zero(self.n, s - 1);
        for (slots, c) in &self.terms {
            for i in 0..s {
                let (m, prod) = monomial_product(&slots[i], &slots[i + 1]);
                let mut face: Vec<ExpVec> = slots[..i].to_vec();
                face.push(prod);
                face.extend_from_slice(&slots[i + 2..]);
                let sign = if i % 2 == 0 { 1 } else { -1 };
                out.add_term(face, &(c * &Scalar::monomial(m)) * &Scalar::from_int(sign));
            }
            let (m, prod) = monomial_product(&slots[s], &slots[0]);
            let mut face = vec![prod];
            face.extend_from_slice(&slots[1..s]);
            let sign = if s % 2 == 0 { 1 } else { -1 };
            out.add_term(face, &(c * &Scalar::monomial(m)) * &Scalar::from_int(sign));
        }
        out
    }
}

/// Element of `E_s = A ⊗ Λ^s V ⊗ A` with monomial tensor factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EChain {
    n: usize,
    degree: usize,
    terms: BTreeMap<(ExpVec, WedgeIndex, ExpVec), Scalar>,
}

/// `E_1 ≅ A ⊗ V ⊗ A`, the codomain of `ρ_i`.
pub type E1Chain = EChain;

impl EChain {
    pub fn zero(n: usize, degree: usize) -> Self {
        Self { n, degree, terms: BTreeMap::new() }
    }

    /// `1 ⊗ 1 ⊗ 1` in `E_0`, the unit of the graded product.
    pub fn unit(n: usize) -> Self {
        let mut out = Self::zero(n, 0);
        out.add_term(ExpVec::zero(n), WedgeIndex::empty(), ExpVec::zero(n), Scalar::one());
        out
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<(ExpVec, WedgeIndex, ExpVec), Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, left: ExpVec, wedge: WedgeIndex, right: ExpVec, coeff: Scalar) {
        assert_eq!(wedge.degree(), self.degree);
        if coeff.is_zero() {
            return;
        }
        let key = (left, wedge, right);
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

    /// Graded product: left factors multiply left to right, right factors in
    /// the opposite order, wedges anticommute.
    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n, self.degree + other.degree);
        for ((l1, w1, r1), c1) in &self.terms {
            for ((l2, w2, r2), c2) in &other.terms {
                let Some((sign, w)) = merge_wedges(*w1, *w2) else { continue };
                let (ml, left) = monomial_product(l1, l2);
                let (mr, right) = monomial_product(r2, r1);
                let scalar = Scalar::monomial(ml.mul(&mr));
                out.add_term(left, w, right, &(&(c1 * c2) * &scalar) * &Scalar::from_int(sign));
            }
        }
        out
    }

    /// `a ⊗ e_J ⊗ b ↦ (a b) ⊗ e_J`.
    pub fn tensor_down(&self) -> KoszulChain {
        let mut out = KoszulChain::zero(self.n, self.degree);
        for ((l, w, r), c) in &self.terms {
            let (m, beta) = monomial_product(l, r);
            out.add_term(beta, *w, c * &Scalar::monomial(m));
        }
        out
    }
}

/// `e_I ∧ e_J = sign · e_{I∪J}`, or `None` when they overlap.
fn merge_wedges(a: WedgeIndex, b: WedgeIndex) -> Option<(i64, WedgeIndex)> {
    let mut merged = a;
    let mut inversions = 0;
    for j in b.axes() {
        if a.contains(j) {
            return None;
        }
        inversions += a.axes().filter(|i| *i > j).count();
        merged = merged.with(j);
    }
    Some((if inversions % 2 == 0 { 1 } else { -1 }, merged))
}

fn signed_permutations(items: &[usize]) -> Vec<(i64, Vec<usize>)> {
    if items.is_empty() {
        return vec![(1, vec![])];
    }
    let mut out = Vec::new();
    for (k, first) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(k);
        let sign = if k % 2 == 0 { 1 } else { -1 };
        for (s, mut tail) in signed_permutations(&rest) {
            tail.insert(0, *first);
            out.push((sign * s, tail));
        }
    }
    out
}

/// Product `ν^{π_1} ⋯ ν^{π_k}` as `(scalar, exponent)`.
fn product_of(n: usize, factors: &[ExpVec]) -> (LambdaMonomial, ExpVec) {
    factors.iter().fold((LambdaMonomial::one(), ExpVec::zero(n)), |(c, acc), f| {
        let (m, next) = monomial_product(&acc, f);
        (c.mul(&m), next)
    })
}

/// `ν^β ⊗ e_I ↦ Σ_σ sgn(σ) (ν_{σ(i_1)} ⋯ ν_{σ(i_s)})^-1 ν^β ⊗ ν_{σ(i_1)} ⊗ ⋯ ⊗ ν_{σ(i_s)}`.
pub fn h_map(x: &KoszulChain) -> BarChain {
    let n = x.n();
    let s = x.degree();
    let mut out = BarChain::zero(n, s);
    for ((beta, wedge), c) in x.terms() {
        let axes: Vec<usize> = wedge.axes().collect();
        for (sign, perm) in signed_permutations(&axes) {
            let letters: Vec<ExpVec> = perm.iter().map(|a| ExpVec::unit(n, *a)).collect();
            let (cp, p) = product_of(n, &letters);
            // P^-1 = cp^-1 (ν^p)^-1
            let (ci, pinv) = monomial_inverse(&p);
            let (cb, slot0) = monomial_product(&pinv, beta);
            let scalar = cp.inv().mul(&ci).mul(&cb);
            let mut slots = vec![slot0];
            slots.extend(letters);
            out.add_term(slots, &(c * &Scalar::monomial(scalar)) * &Scalar::from_int(sign));
        }
    }
    out
}

/// `ρ_i((ν^π)^-1 ⊗ ν^π) = t^-1 (Σ'_{k=0}^{π_i - 1} ν_i^-k ⊗ e_i ⊗ ν_i^k) t`
/// with `t = ν_{i+1}^{π_{i+1}} ⋯ ν_n^{π_n}`.
///
/// The primed sum is the ordinary sum for upper limit `m ≥ 0`, zero for
/// `m = -1`, and `-Σ_{k=m+1}^{-1}` for `m < -1`.
pub fn rho(axis: usize, pi: &ExpVec) -> E1Chain {
    let n = pi.len();
    let mut tail = ExpVec::zero(n);
    for a in axis + 1..=n {
        tail = tail.shifted(a, pi.coord(a));
    }
    let (ct, tail_inv) = monomial_inverse(&tail);
    let m = pi.coord(axis) - 1;
    let (range, sign) = if m >= 0 { (0..=m, 1) } else { (m + 1..=-1, -1) };
    let mut out = EChain::zero(n, 1);
    if m == -1 {
        return out;
    }
    for k in range {
        let (cl, left) = monomial_product(&tail_inv, &ExpVec::zero(n).shifted(axis, -k));
        let (cr, right) = monomial_product(&ExpVec::zero(n).shifted(axis, k), &tail);
        let scalar = ct.mul(&cl).mul(&cr);
        out.add_term(left, WedgeIndex::new(&[axis]), right, &Scalar::monomial(scalar) * &Scalar::from_int(sign));
    }
    out
}

fn decreasing_tuples(n: usize, s: usize) -> Vec<Vec<usize>> {
    WedgeIndex::all(n, s).into_iter().map(|w| w.axes().collect::<Vec<_>>().into_iter().rev().collect()).collect()
}

/// `k((ν^π1⋯ν^πs)^-1 ⊗ ν^π1 ⊗ ⋯ ⊗ ν^πs) = Σ_{i1>⋯>is} ρ_i1(π1) ∧ ⋯ ∧ ρ_is(πs)`,
/// tensored down to `A ⊗ Λ^s V`.
pub fn k_map(x: &BarChain) -> Result<KoszulChain, TransportError> {
    let n = x.n();
    let s = x.degree();
    let tuples = decreasing_tuples(n, s);
    let mut out = KoszulChain::zero(n, s);
    for (slots, c) in x.terms() {
        let (cp, p) = product_of(n, &slots[1..]);
        let (ci, pinv) = monomial_inverse(&p);
        if slots[0] != pinv {
            let shown: Vec<String> = slots.iter().map(ToString::to_string).collect();
            return Err(TransportError::ShapeError(shown.join(" ⊗ ")));
        }
        // slots[0] as a basis monomial equals (scalar of P^-1)^-1 · P^-1
        let coeff = c * &Scalar::monomial(cp.inv().mul(&ci).inv());
        let mut image = EChain::zero(n, s);
        for tuple in &tuples {
            let mut acc = EChain::unit(n);
            for (axis, pi) in tuple.iter().zip(&slots[1..]) {
                acc = acc.wedge(&rho(*axis, pi));
                if acc.is_zero() {
                    break;
                }
            }
            for ((l, w, r), v) in acc.terms {
                image.add_term(l, w, r, v);
            }
        }
        out = out.add(&image.tensor_down().scale(&coeff));
    }
    Ok(out)
}

/// Applies the flip `ν_i ↦ ν_i^-1` to every slot.
pub fn flip_bar(x: &BarChain) -> BarChain {
    let mut out = BarChain::zero(x.n(), x.degree());
    for (slots, c) in x.terms() {
        let mut scalar = LambdaMonomial::one();
        let flipped = slots
            .iter()
            .map(|slot| {
                let (m, img) = flip_monomial(slot);
                scalar = scalar.mul(&m);
                img
            })
            .collect();
        out.add_term(flipped, c * &Scalar::monomial(scalar));
    }
    out
}

/// The scalar `ε` with `k(flip(h(1 ⊗ e_I))) = ε · 1 ⊗ e_I`.
pub fn invariance_sign(n: usize, wedge: WedgeIndex) -> Result<Scalar, TransportError> {
    let g = KoszulChain::basis(ExpVec::zero(n), wedge, Scalar::one());
    let image = k_map(&flip_bar(&h_map(&g)))?;
    let c = image.coeff(&ExpVec::zero(n), wedge);
    if image.len() != 1 || c.is_zero() {
        return Err(TransportError::NotAMultiple(image.to_string()));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ev(v: &[i32]) -> ExpVec {
        ExpVec::from_slice(v)
    }

    fn generator(n: usize, axes: &[usize]) -> KoszulChain {
        KoszulChain::basis(ExpVec::zero(n), WedgeIndex::new(axes), Scalar::one())
    }

    #[test]
    fn h_map_degree_one() {
        let h = h_map(&generator(3, &[2]));
        let mut expected = BarChain::zero(3, 1);
        expected.add_term(vec![ev(&[0, -1, 0]), ev(&[0, 1, 0])], Scalar::one());
        assert_eq!(h, expected);
    }

    #[test]
    fn h_map_degree_two() {
        let h = h_map(&generator(2, &[1, 2]));
        assert_eq!(h.len(), 2);
        // (ν1ν2)^-1 = ν2^-1 ν1^-1 = λ12^-1 ν1^-1 ν2^-1 (transposition rule)
        let c_id = h.terms()[&vec![ev(&[-1, -1]), ev(&[1, 0]), ev(&[0, 1])]].clone();
        assert_eq!(c_id, Scalar::monomial(LambdaMonomial::lambda_pow(1, 2, -1)));
        // (ν2ν1)^-1 = ν1^-1 ν2^-1, with sign -1
        let c_sw = h.terms()[&vec![ev(&[-1, -1]), ev(&[0, 1]), ev(&[1, 0])]].clone();
        assert_eq!(c_sw, Scalar::from_int(-1));
    }

    #[test]
    fn h_map_term_count() {
        for (s, fact) in [(1, 1), (2, 2), (3, 6), (4, 24)] {
            let axes: Vec<usize> = (1..=s).collect();
            assert_eq!(h_map(&generator(4, &axes)).len(), fact);
        }
    }

    #[test]
    fn rho_examples() {
        let n = 3;
        assert!(rho(2, &ev(&[1, 0, 4])).is_zero());
        let mut unit = EChain::zero(n, 1);
        unit.add_term(ExpVec::zero(n), WedgeIndex::new(&[2]), ExpVec::zero(n), Scalar::one());
        assert_eq!(rho(2, &ExpVec::unit(n, 2)), unit);
        let mut neg = EChain::zero(n, 1);
        neg.add_term(ExpVec::unit(n, 2), WedgeIndex::new(&[2]), ev(&[0, -1, 0]), Scalar::from_int(-1));
        assert_eq!(rho(2, &ev(&[0, -1, 0])), neg);
        // |π_i| terms in both directions
        assert_eq!(rho(1, &ev(&[3, 1, 1])).terms().len(), 3);
        assert_eq!(rho(1, &ev(&[-3, 1, 1])).terms().len(), 3);
    }

    #[test]
    fn rho_tensors_down_to_telescoping_boundary() {
        // the bimodule boundary of ρ_i is ν^π ⊗ 1 - 1 ⊗ ν^π on the i-th
        // factor; after tensoring down, the total multidegree is 0.
        for pi in [ev(&[2, -1, 3]), ev(&[-2, 1, 1]), ev(&[1, 0, -1])] {
            for axis in 1..=3 {
                for ((l, _, r), _) in rho(axis, &pi).terms() {
                    let (_, total) = monomial_product(l, r);
                    assert!(total.is_zero());
                }
            }
        }
    }

    #[test]
    fn k_map_examples() {
        let n = 3;
        for i in 1..=n {
            let mut x = BarChain::zero(n, 1);
            x.add_term(vec![ExpVec::unit(n, i).neg(), ExpVec::unit(n, i)], Scalar::one());
            assert_eq!(k_map(&x).unwrap(), generator(n, &[i]));

            let mut y = BarChain::zero(n, 1);
            y.add_term(vec![ExpVec::unit(n, i), ExpVec::unit(n, i).neg()], Scalar::one());
            assert_eq!(k_map(&y).unwrap(), generator(n, &[i]).scale(&Scalar::from_int(-1)));
        }
        let mut bad = BarChain::zero(n, 1);
        bad.add_term(vec![ExpVec::zero(n), ExpVec::unit(n, 1)], Scalar::one());
        assert!(matches!(k_map(&bad), Err(TransportError::ShapeError(_))));
    }

    #[test]
    fn flip_bar_examples() {
        let h = h_map(&generator(2, &[1]));
        let f = flip_bar(&h);
        let mut expected = BarChain::zero(2, 1);
        expected.add_term(vec![ev(&[1, 0]), ev(&[-1, 0])], Scalar::one());
        assert_eq!(f, expected);
        assert_eq!(flip_bar(&f), h);
        let h3 = h_map(&generator(3, &[1, 2, 3]));
        assert_eq!(flip_bar(&flip_bar(&h3)), h3);
        assert!(flip_bar(&h3).terms().keys().all(|slots| slots.len() == 4));
    }

    #[test]
    fn k_after_h_is_identity_on_generators() {
        for n in 1..=4 {
            for s in 0..=n {
                for w in WedgeIndex::all(n, s) {
                    let g = KoszulChain::basis(ExpVec::zero(n), w, Scalar::one());
                    assert_eq!(k_map(&h_map(&g)).unwrap(), g, "n={n} wedge={w}");
                }
            }
        }
    }

    #[test]
    fn sign_law_small() {
        for n in 2..=3 {
            for s in 1..=n {
                for w in WedgeIndex::all(n, s) {
                    let expected = Scalar::from_int(if s % 2 == 0 { 1 } else { -1 });
                    assert_eq!(invariance_sign(n, w).unwrap(), expected, "n={n} wedge={w}");
                }
            }
        }
    }

    #[test]
    fn merge_wedge_signs() {
        let a = WedgeIndex::new(&[2]);
        let b = WedgeIndex::new(&[1]);
        assert_eq!(merge_wedges(a, b), Some((-1, WedgeIndex::new(&[1, 2]))));
        assert_eq!(merge_wedges(b, a), Some((1, WedgeIndex::new(&[1, 2]))));
        assert_eq!(merge_wedges(a, a), None);
        assert_eq!(merge_wedges(WedgeIndex::new(&[1, 3]), WedgeIndex::new(&[2])), Some((-1, WedgeIndex::new(&[1, 2, 3]))));
    }

    fn koszul_term(n: usize, s: usize) -> impl Strategy<Value = KoszulChain> {
        let wedges = WedgeIndex::all(n, s);
        (prop::collection::vec(-2i32..=2, n), 0..wedges.len(), -3i64..=3)
            .prop_map(move |(b, w, c)| KoszulChain::basis(ExpVec::from_slice(&b), wedges[w], Scalar::from_int(c)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        // b ∘ h = h ∘ d on Koszul basis elements with arbitrary multidegree.
        #[test]
        fn h_is_a_chain_map(x in (2usize..=4).prop_flat_map(|n| (Just(n), 1..=n)).prop_flat_map(|(n, s)| koszul_term(n, s))) {
            let left = h_map(&x).boundary();
            let right = h_map(&x.untwisted_diff());
            prop_assert_eq!(left, right);
        }

        #[test]
        fn bar_boundary_squares_to_zero(x in (2usize..=3).prop_flat_map(|n| (Just(n), 2..=n)).prop_flat_map(|(n, s)| koszul_term(n, s))) {
            let h = h_map(&x);
            prop_assert!(h.boundary().boundary().is_zero());
        }
    }
}
