//! The quantum torus in the normal-ordered basis `ν^π = ν_1^π_1 ⋯ ν_n^π_n`.
//!
//! Generators satisfy `ν_i ν_j = λ_ij ν_j ν_i`. Every product is brought back
//! to normal order, which only ever costs a monomial in the `λ_ij`.

use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::scalars::{num_vars, pair_index, LambdaMonomial, Scalar};

/// Exponent vector `π ∈ Z^n` of the monomial `ν^π`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExpVec(SmallVec<[i32; 4]>);

impl ExpVec {
    pub fn zero(n: usize) -> Self {
        Self(SmallVec::from_elem(0, n))
    }

    /// `e_axis`, with 1-based axis.
    pub fn unit(n: usize, axis: usize) -> Self {
        let mut v = Self::zero(n);
        v.0[axis - 1] = 1;
        v
    }

    pub fn from_slice(entries: &[i32]) -> Self {
        Self(SmallVec::from_slice(entries))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[i32] {
        &self.0
    }

    /// Coordinate along a 1-based axis.
    pub fn coord(&self, axis: usize) -> i32 {
        self.0[axis - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|e| *e == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|a| -a).collect())
    }

    /// `self + delta·e_axis`.
    pub fn shifted(&self, axis: usize, delta: i32) -> Self {
        let mut v = self.clone();
        v.0[axis - 1] += delta;
        v
    }

    /// Residue class modulo `2Z^n`, with entries in `{0, 1}`.
    pub fn mod2(&self) -> Self {
        Self(self.0.iter().map(|a| a.rem_euclid(2)).collect())
    }

    /// Largest absolute coordinate.
    pub fn sup_norm(&self) -> i32 {
        self.0.iter().map(|a| a.abs()).max().unwrap_or(0)
    }
}

impl serde::Serialize for ExpVec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter())
    }
}

impl fmt::Display for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// The scalar `c(π, ρ)` with `ν^π · ν^ρ = c(π, ρ) ν^(π+ρ)`.
///
/// Moving `ν_j^ρ_j` left past `ν_i^π_i` for `i > j` costs `λ_ij^(π_i ρ_j)`,
/// and `λ_ij = λ_ji^-1`.
pub fn normal_order_cocycle(pi: &ExpVec, rho: &ExpVec) -> LambdaMonomial {
    assert_eq!(pi.len(), rho.len(), "exponent vectors of different tori");
    let n = pi.len();
    let mut exps = vec![0i32; num_vars(n)];
    for i in 1..n {
        let p = pi.0[i];
        if p == 0 {
            continue;
        }
        for j in 0..i {
            exps[pair_index(j + 1, i + 1)] -= p * rho.0[j];
        }
    }
    LambdaMonomial::from_exponents(exps)
}

/// `ν^π · ν^ρ` as `(scalar, exponent)`.
pub fn monomial_product(pi: &ExpVec, rho: &ExpVec) -> (LambdaMonomial, ExpVec) {
    (normal_order_cocycle(pi, rho), pi.add(rho))
}

/// `(ν^π)^-1 = c · ν^(-π)`.
pub fn monomial_inverse(pi: &ExpVec) -> (LambdaMonomial, ExpVec) {
    let neg = pi.neg();
    (normal_order_cocycle(pi, &neg).inv(), neg)
}

/// `σ` with `ν_i^-1 ν^β ν_i = σ ν^β`, computed by multiplying out.
pub fn conj_scalar(axis: usize, beta: &ExpVec) -> LambdaMonomial {
    let n = beta.len();
    let e = ExpVec::unit(n, axis);
    let (c1, left) = monomial_product(&e.neg(), beta);
    let (c2, full) = monomial_product(&left, &e);
    debug_assert_eq!(&full, beta);
    c1.mul(&c2)
}

/// `τ` with `ν_i ν^β ν_i = τ ν^(β+2e_i)`, computed by multiplying out.
pub fn twisted_conj_scalar(axis: usize, beta: &ExpVec) -> LambdaMonomial {
    let n = beta.len();
    let e = ExpVec::unit(n, axis);
    let (c1, left) = monomial_product(&e, beta);
    let (c2, _) = monomial_product(&left, &e);
    c1.mul(&c2)
}

/// Image of `ν^π` under the flip `ν_i ↦ ν_i^-1`: the word
/// `ν_1^-π_1 ⋯ ν_n^-π_n` multiplied into normal order.
pub fn flip_monomial(pi: &ExpVec) -> (LambdaMonomial, ExpVec) {
    let n = pi.len();
    let mut scalar = LambdaMonomial::one();
    let mut acc = ExpVec::zero(n);
    for axis in 1..=n {
        let factor = ExpVec::zero(n).shifted(axis, -pi.coord(axis));
        let (c, next) = monomial_product(&acc, &factor);
        scalar = scalar.mul(&c);
        acc = next;
    }
    (scalar, acc)
}

/// A finitely supported element of the quantum torus. The same space carries
/// the twisted bimodule structure; only the differentials differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    n: usize,
    terms: BTreeMap<ExpVec, Scalar>,
}

impl AlgebraElement {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(ExpVec::zero(n), Scalar::one())
    }

    pub fn monomial(pi: ExpVec, coeff: Scalar) -> Self {
        let mut out = Self::zero(pi.len());
        out.add_term(pi, coeff);
        out
    }

    /// The generator `ν_axis`.
    pub fn generator(n: usize, axis: usize) -> Self {
        Self::monomial(ExpVec::unit(n, axis), Scalar::one())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<ExpVec, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, pi: &ExpVec) -> Scalar {
        self.terms.get(pi).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, pi: ExpVec, coeff: Scalar) {
        assert_eq!(pi.len(), self.n);
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&pi) {
            Some(c) => {
                *c = &*c + &coeff;
                if c.is_zero() {
                    self.terms.remove(&pi);
                }
            }
            None => {
                self.terms.insert(pi, coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (pi, c) in &other.terms {
            out.add_term(pi.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.n);
        for (pi, x) in &self.terms {
            out.add_term(pi.clone(), x * c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    /// Bilinear extension of the monomial product.
    pub fn multiply(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = Self::zero(self.n);
        for (pi, a) in &self.terms {
            for (rho, b) in &other.terms {
                let (c, sum) = monomial_product(pi, rho);
                out.add_term(sum, &(a * b) * &Scalar::monomial(c));
            }
        }
        out
    }

    /// The flip automorphism `ν_i ↦ ν_i^-1`.
    pub fn flip(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (pi, a) in &self.terms {
            let (c, image) = flip_monomial(pi);
            out.add_term(image, a * &Scalar::monomial(c));
        }
        out
    }
}
