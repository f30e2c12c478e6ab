//! Exact arithmetic over the generic deformation field `Q(λ_ij)`.
//!
//! The commutation parameters `λ_ij` (`i < j`) are treated as independent
//! transcendentals. [`LaurentPoly`] is the ring `Z[λ_ij^±1]`, [`Scalar`] its
//! fraction field, and [`ModularPoint`] a random evaluation homomorphism into
//! `F_p` used by the randomized rank backend.
//!
//! Skew symmetry is resolved at construction: `λ_ji` is stored as `λ_ij^-1`
//! and `λ_ii` as `1`, so every monomial has a single canonical form.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smallvec::SmallVec;
use thiserror::Error;

/// The Mersenne prime `2^61 - 1`, the fixed modulus of the randomized backend.
pub const MERSENNE_61: u64 = (1u64 << 61) - 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("denominator vanished at the modular evaluation point (seed {seed})")]
    DenominatorVanished { seed: u64 },
    #[error("residue {residue} is not invertible modulo {prime}")]
    InvalidResidue { residue: u64, prime: u64 },
    #[error("modular point assigns {assigned} variables but the scalar uses variable #{needed}")]
    MissingVariable { assigned: usize, needed: usize },
    #[error("division by zero")]
    DivisionByZero,
}

/// Number of deformation parameters `λ_ij`, `1 <= i < j <= n`.
pub fn num_vars(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of `λ_ij` (1-based, `i < j`) in the variable order.
///
/// Variables are ordered by `j` then `i`, so the index of a pair does not
/// depend on the torus dimension.
pub fn pair_index(i: usize, j: usize) -> usize {
    assert!(1 <= i && i < j, "pair_index expects 1 <= i < j, got ({i}, {j})");
    (j - 1) * (j - 2) / 2 + (i - 1)
}

/// Inverse of [`pair_index`].
pub fn pair_of_index(idx: usize) -> (usize, usize) {
    let mut j = 2;
    while (j - 1) * j / 2 <= idx {
        j += 1;
    }
    let i = idx - (j - 1) * (j - 2) / 2 + 1;
    (i, j)
}

/// A Laurent monomial `∏ λ_ij^e_ij`. Trailing zero exponents are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LambdaMonomial {
    exps: SmallVec<[i32; 6]>,
}

impl LambdaMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    /// `λ_ij` with skew symmetry applied: `λ_ji = λ_ij^-1`, `λ_ii = 1`.
    pub fn lambda(i: usize, j: usize) -> Self {
        Self::lambda_pow(i, j, 1)
    }

    /// `λ_ij^e` with skew symmetry applied.
    pub fn lambda_pow(i: usize, j: usize, e: i32) -> Self {
        match i.cmp(&j) {
            Ordering::Equal => Self::one(),
            Ordering::Less => Self::from_index_exponent(pair_index(i, j), e),
            Ordering::Greater => Self::from_index_exponent(pair_index(j, i), -e),
        }
    }

    fn from_index_exponent(idx: usize, e: i32) -> Self {
        let mut exps: SmallVec<[i32; 6]> = SmallVec::from_elem(0, idx + 1);
        exps[idx] = e;
        Self::from_raw(exps)
    }

    /// Builds a monomial from exponents listed in variable order.
    pub fn from_exponents<I: IntoIterator<Item = i32>>(exps: I) -> Self {
        Self::from_raw(exps.into_iter().collect())
    }

    fn from_raw(mut exps: SmallVec<[i32; 6]>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Self { exps }
    }

    /// Exponents in variable order (trailing zeros omitted).
    pub fn exponents(&self) -> &[i32] {
        &self.exps
    }

    fn exp_at(&self, idx: usize) -> i32 {
        self.exps.get(idx).copied().unwrap_or(0)
    }

    /// Exponent of `λ_ij` (`i < j`).
    pub fn exponent(&self, i: usize, j: usize) -> i32 {
        self.exp_at(pair_index(i, j))
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let len = self.exps.len().max(other.exps.len());
        Self::from_raw((0..len).map(|k| self.exp_at(k) + other.exp_at(k)).collect())
    }

    pub fn inv(&self) -> Self {
        Self { exps: self.exps.iter().map(|e| -e).collect() }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    pub fn pow(&self, k: i32) -> Self {
        Self::from_raw(self.exps.iter().map(|e| e * k).collect())
    }

    /// Sum of absolute exponents.
    pub fn abs_degree(&self) -> u32 {
        self.exps.iter().map(|e| e.unsigned_abs()).sum()
    }

    /// Componentwise minimum.
    fn meet(&self, other: &Self) -> Self {
        let len = self.exps.len().max(other.exps.len());
        Self::from_raw((0..len).map(|k| self.exp_at(k).min(other.exp_at(k))).collect())
    }

    fn num_vars_used(&self) -> usize {
        self.exps.len()
    }

    /// Nonzero factors `(i, j, e)` meaning `λ_ij^e`.
    pub fn factors(&self) -> impl Iterator<Item = (usize, usize, i32)> + '_ {
        self.exps.iter().enumerate().filter(|(_, e)| **e != 0).map(|(k, e)| {
            let (i, j) = pair_of_index(k);
            (i, j, *e)
        })
    }
}

impl PartialOrd for LambdaMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order on the zero-padded exponent vectors. This is a
/// monomial order, which polynomial division relies on.
impl Ord for LambdaMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let len = self.exps.len().max(other.exps.len());
        for k in 0..len {
            match self.exp_at(k).cmp(&other.exp_at(k)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

fn var_name(i: usize, j: usize) -> String {
    if j < 10 {
        format!("l{i}{j}")
    } else {
        format!("l{i}_{j}")
    }
}

impl fmt::Display for LambdaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, j, e) in self.factors() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", var_name(i, j))?;
            } else {
                write!(f, "{}^{}", var_name(i, j), e)?;
            }
        }
        Ok(())
    }
}

/// An element of `Z[λ_ij^±1]`: sorted terms with nonzero integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: Vec<(LambdaMonomial, BigInt)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant<C: Into<BigInt>>(c: C) -> Self {
        Self::term(LambdaMonomial::one(), c)
    }

    pub fn term<C: Into<BigInt>>(m: LambdaMonomial, c: C) -> Self {
        let c = c.into();
        if c.is_zero() {
            Self::zero()
        } else {
            Self { terms: vec![(m, c)] }
        }
    }

    pub fn monomial(m: LambdaMonomial) -> Self {
        Self::term(m, 1)
    }

    /// Canonicalizes an arbitrary list of terms (merging duplicates).
    pub fn from_terms<I: IntoIterator<Item = (LambdaMonomial, BigInt)>>(terms: I) -> Self {
        let mut terms: Vec<_> = terms.into_iter().collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(LambdaMonomial, BigInt)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Self { terms: out }
    }

    pub fn terms(&self) -> &[(LambdaMonomial, BigInt)] {
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

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// `±λ^μ`, the units of the ring.
    pub fn as_unit(&self) -> Option<(&LambdaMonomial, bool)> {
        match self.terms.as_slice() {
            [(m, c)] if c.abs().is_one() => Some((m, c.is_positive())),
            _ => None,
        }
    }

    pub fn is_unit(&self) -> bool {
        self.as_unit().is_some()
    }

    /// Single-term polynomial `c·λ^μ`.
    pub fn as_term(&self) -> Option<(&LambdaMonomial, &BigInt)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((m, c)),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(LambdaMonomial, BigInt)> {
        self.terms.last()
    }

    pub fn mul_term(&self, m: &LambdaMonomial, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        // multiplying by a monomial preserves the order
        Self { terms: self.terms.iter().map(|(tm, tc)| (tm.mul(m), tc * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &LambdaMonomial) -> Self {
        Self { terms: self.terms.iter().map(|(tm, tc)| (tm.mul(m), tc.clone())).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        self.mul_term(&LambdaMonomial::one(), c)
    }

    /// Divides every coefficient by `c`, which must divide all of them.
    pub fn div_integer_exact(&self, c: &BigInt) -> Self {
        Self { terms: self.terms.iter().map(|(m, tc)| (m.clone(), tc / c)).collect() }
    }

    /// Positive gcd of the coefficients (zero for the zero polynomial).
    pub fn integer_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// The largest monomial dividing every term, i.e. the componentwise
    /// minimum exponent.
    pub fn monomial_content(&self) -> LambdaMonomial {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return LambdaMonomial::one();
        };
        it.fold(first.clone(), |acc, (m, _)| acc.meet(m))
    }

    /// Total degree after removing the monomial content.
    pub fn degree(&self) -> u32 {
        let content = self.monomial_content();
        self.terms.iter().map(|(m, _)| m.div(&content).abs_degree()).max().unwrap_or(0)
    }

    fn add_scaled(&self, other: &Self, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut a, mut b) = (self.terms.iter().peekable(), other.terms.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => {
                    let (m, c) = b.next().unwrap();
                    out.push((m.clone(), if negate { -c } else { c.clone() }));
                }
                (Some((ma, _)), Some((mb, _))) => match ma.cmp(mb) {
                    Ordering::Less => out.push(a.next().unwrap().clone()),
                    Ordering::Greater => {
                        let (m, c) = b.next().unwrap();
                        out.push((m.clone(), if negate { -c } else { c.clone() }));
                    }
                    Ordering::Equal => {
                        let (m, ca) = a.next().unwrap();
                        let (_, cb) = b.next().unwrap();
                        let c = if negate { ca - cb } else { ca + cb };
                        if !c.is_zero() {
                            out.push((m.clone(), c));
                        }
                    }
                },
            }
        }
        Self { terms: out }
    }

    fn mul_poly(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some((m, c)) = other.as_term() {
            return self.mul_term(m, c);
        }
        if let Some((m, c)) = self.as_term() {
            return other.mul_term(m, c);
        }
        let mut acc = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                acc.push((ma.mul(mb), ca * cb));
            }
        }
        Self::from_terms(acc)
    }

    /// Exact quotient `self / d` in `Z[λ^±1]`, or `None` if `d` does not divide.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some((m, c)) = d.as_term() {
            let minv = m.inv();
            let mut terms = Vec::with_capacity(self.terms.len());
            for (tm, tc) in &self.terms {
                let (q, r) = tc.div_rem(c);
                if !r.is_zero() {
                    return None;
                }
                terms.push((tm.mul(&minv), q));
            }
            return Some(Self { terms });
        }
        // Reduce to content-free polynomials; the quotient is then a polynomial.
        let shift_num = self.monomial_content();
        let shift_den = d.monomial_content();
        let mut rem = self.mul_monomial(&shift_num.inv());
        let divisor = d.mul_monomial(&shift_den.inv());
        let (lead_m, lead_c) = divisor.leading().cloned()?;
        let mut quotient = Vec::new();
        while let Some((rm, rc)) = rem.leading().cloned() {
            let e = rm.div(&lead_m);
            if e.exps.iter().any(|x| *x < 0) {
                return None;
            }
            let (q, r) = rc.div_rem(&lead_c);
            if !r.is_zero() {
                return None;
            }
            rem = rem.add_scaled(&divisor.mul_term(&e, &q), true);
            quotient.push((e, q));
        }
        Some(Self::from_terms(quotient).mul_monomial(&shift_num.div(&shift_den)))
    }

    fn num_vars_used(&self) -> usize {
        self.terms.iter().map(|(m, _)| m.num_vars_used()).max().unwrap_or(0)
    }

    /// Image under the evaluation homomorphism at `point`.
    pub fn evaluate_mod(&self, point: &ModularPoint) -> Result<u64, ScalarError> {
        let needed = self.num_vars_used();
        if needed > point.assignment.len() {
            return Err(ScalarError::MissingVariable { assigned: point.assignment.len(), needed });
        }
        let p = point.prime;
        let big_p = BigInt::from(p);
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let c = c.mod_floor(&big_p).to_u64().expect("residue fits in u64");
            let v = mul_mod(c, point.eval_monomial(m), p);
            acc = add_mod(acc, v, p);
        }
        Ok(acc)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.add_scaled(rhs, false)
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.add_scaled(rhs, true)
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.mul_poly(rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl From<LambdaMonomial> for LaurentPoly {
    fn from(m: LambdaMonomial) -> Self {
        Self::monomial(m)
    }
}

/// An element `numerator / denominator` of `Q(λ_ij)`.
///
/// Representations are partially reduced (integer content, monomial content,
/// exact polynomial division) but not unique; equality cross-multiplies.
#[derive(Clone, Debug)]
pub struct Scalar {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Scalar {
    pub fn zero() -> Self {
        Self { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(c: i64) -> Self {
        Self { num: LaurentPoly::constant(c), den: LaurentPoly::one() }
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self { num: p, den: LaurentPoly::one() }
    }

    pub fn monomial(m: LambdaMonomial) -> Self {
        Self::from_poly(LaurentPoly::monomial(m))
    }

    /// `λ_ij` with skew symmetry applied.
    pub fn lambda(i: usize, j: usize) -> Self {
        Self::monomial(LambdaMonomial::lambda(i, j))
    }

    /// Builds `num / den`; fails if `den` is zero.
    pub fn ratio(num: LaurentPoly, den: LaurentPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self { num, den }.reduced())
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// `Some(±λ^μ)` when the scalar is a signed monomial.
    pub fn as_signed_monomial(&self) -> Option<(LambdaMonomial, bool)> {
        let (nm, npos) = self.num.as_unit()?;
        let (dm, dpos) = self.den.as_unit()?;
        Some((nm.div(dm), npos == dpos))
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self { num: self.den.clone(), den: self.num.clone() }.reduced())
        }
    }

    fn reduced(self) -> Self {
        let Self { mut num, mut den } = self;
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_one() {
            return Self { num, den };
        }
        let g = num.integer_content().gcd(&den.integer_content());
        let mut g = if g.is_zero() { BigInt::one() } else { g };
        if den.leading().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            g = -g;
        }
        if !g.is_one() {
            num = num.div_integer_exact(&g);
            den = den.div_integer_exact(&g);
        }
        let shift = den.monomial_content();
        if !shift.is_one() {
            let inv = shift.inv();
            num = num.mul_monomial(&inv);
            den = den.mul_monomial(&inv);
        }
        if den.is_one() {
            return Self { num, den };
        }
        if let Some(q) = num.div_exact(&den) {
            return Self { num: q, den: LaurentPoly::one() };
        }
        if num.len() < den.len() {
            if let Some(q) = den.div_exact(&num) {
                // num / (q·num) = 1/q
                let sign = if q.leading().map(|(_, c)| c.is_negative()).unwrap_or(false) {
                    -1
                } else {
                    1
                };
                let q = q.scale(&BigInt::from(sign));
                let shift = q.monomial_content();
                return Self {
                    num: LaurentPoly::term(shift.inv(), sign),
                    den: q.mul_monomial(&shift.inv()),
                };
            }
        }
        Self { num, den }
    }

    /// Image under the evaluation homomorphism; fails if the denominator
    /// vanishes at the point, in which case the caller redraws.
    pub fn evaluate_mod(&self, point: &ModularPoint) -> Result<u64, ScalarError> {
        let d = self.den.evaluate_mod(point)?;
        if d == 0 {
            return Err(ScalarError::DenominatorVanished { seed: point.seed });
        }
        let n = self.num.evaluate_mod(point)?;
        Ok(mul_mod(n, inv_mod(d, point.prime), point.prime))
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        (&self.num * &other.den) == (&other.num * &self.den)
    }
}

impl Eq for Scalar {}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl From<LambdaMonomial> for Scalar {
    fn from(m: LambdaMonomial) -> Self {
        Self::monomial(m)
    }
}

impl From<LaurentPoly> for Scalar {
    fn from(p: LaurentPoly) -> Self {
        Self::from_poly(p)
    }
}

impl From<i64> for Scalar {
    fn from(c: i64) -> Self {
        Self::from_int(c)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return Scalar { num: &self.num + &rhs.num, den: self.den.clone() }.reduced();
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        Scalar { num, den: &self.den * &rhs.den }.reduced()
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        Scalar { num: &self.num * &rhs.num, den: &self.den * &rhs.den }.reduced()
    }
}

/// Panics on division by zero, like the primitive numeric types.
impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs.inv().expect("Scalar division by zero");
        self * &inv
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident, $ty:ty) => {
        impl $trait<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add, Scalar);
forward_owned_binop!(Sub, sub, Scalar);
forward_owned_binop!(Mul, mul, Scalar);
forward_owned_binop!(Div, div, Scalar);
forward_owned_binop!(Add, add, LaurentPoly);
forward_owned_binop!(Sub, sub, LaurentPoly);
forward_owned_binop!(Mul, mul, LaurentPoly);

pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Inverse modulo a prime (Fermat). `a` must be nonzero mod `p`.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// A random evaluation point `λ_ij ↦ r_ij ∈ F_p^×`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularPoint {
    pub prime: u64,
    /// Residue of each variable, in [`pair_index`] order.
    pub assignment: Vec<u64>,
    pub seed: u64,
    inverses: Vec<u64>,
}

impl ModularPoint {
    /// Explicit point; every residue must be invertible modulo `prime`.
    pub fn new(prime: u64, assignment: Vec<u64>, seed: u64) -> Result<Self, ScalarError> {
        let mut inverses = Vec::with_capacity(assignment.len());
        for &r in &assignment {
            if r % prime == 0 {
                return Err(ScalarError::InvalidResidue { residue: r, prime });
            }
            inverses.push(inv_mod(r % prime, prime));
        }
        let assignment = assignment.into_iter().map(|r| r % prime).collect();
        Ok(Self { prime, assignment, seed, inverses })
    }

    /// Point for the `n`-torus drawn from `seed` modulo [`MERSENNE_61`].
    pub fn random(n: usize, seed: u64) -> Self {
        Self::random_with_prime(n, MERSENNE_61, seed)
    }

    pub fn random_with_prime(n: usize, prime: u64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let assignment = (0..num_vars(n)).map(|_| rng.gen_range(1..prime)).collect();
        Self::new(prime, assignment, seed).expect("residues drawn from 1..prime")
    }

    pub fn eval_monomial(&self, m: &LambdaMonomial) -> u64 {
        let mut acc = 1u64;
        for (k, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let base = if e > 0 { self.assignment[k] } else { self.inverses[k] };
            acc = mul_mod(acc, pow_mod(base, e.unsigned_abs() as u64, self.prime), self.prime);
        }
        acc
    }
}
