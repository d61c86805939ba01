//! Arithmetic in realizations of the completed Grothendieck ring of
//! varieties with the Lefschetz class L inverted.
//!
//! A [`CompletedClass`] is a finite integer combination of monomials:
//!
//! * Hodge–Deligne realization: monomials `u^a v^b` with integer exponents
//!   `(a, b)`; the Lefschetz class L is the monomial `uv = (1, 1)`.
//! * Counting realization at a fixed prime q: monomials `L^k`; these are
//!   stored on the diagonal `(k, k)` so both realizations share one
//!   arithmetic kernel.
//!
//! Every class carries a precision. `Exact` means all monomials are known;
//! `Finite(N)` means monomials of depth `max(a, b) <= -N` have been
//! discarded. Depth is the dimension filtration: a monomial is effective
//! when `max(a, b) <= 0`, and multiplying by effective classes never lifts
//! a discarded monomial back above the cutoff, so truncated arithmetic is
//! well defined on effective classes.
//!
//! Invariants maintained by every constructor and operation:
//! - no stored coefficient is zero (canonical form);
//! - at precision `Finite(N)` every stored monomial has `max(a, b) > -N`;
//! - counting-mode classes only store diagonal monomials.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Largest prime accepted for the counting realization.
pub const MAX_COUNTING_PRIME: u32 = 65521;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("realization mismatch: {0} vs {1}")]
    RealizationMismatch(Realization, Realization),
    #[error("class is not pure-L: a Hodge monomial with a != b is present")]
    NonTateClass,
    #[error("precision must be at least 1")]
    BadPrecision,
    #[error("q = {0} is not a prime in 2..={MAX_COUNTING_PRIME}")]
    BadPrime(u32),
    #[error("denominator factor exponents must be >= 1")]
    BadDenominator,
    #[error("expected a class with exact precision")]
    NotExact,
}

fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Which realization of the Grothendieck class a value lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Realization {
    /// Hodge–Deligne: classes are E-polynomials in u, v (Laurent).
    HodgeDeligne,
    /// Point counting over F_q: classes are Laurent polynomials in L = q.
    Counting { q: u32 },
}

impl Realization {
    /// Checked constructor for the counting realization.
    pub fn counting(q: u32) -> Result<Self, RingError> {
        if !(2..=MAX_COUNTING_PRIME).contains(&q) || !is_prime(q) {
            return Err(RingError::BadPrime(q));
        }
        Ok(Realization::Counting { q })
    }

    pub fn is_counting(&self) -> bool {
        matches!(self, Realization::Counting { .. })
    }
}

impl fmt::Display for Realization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Realization::HodgeDeligne => write!(f, "hodge"),
            Realization::Counting { q } => write!(f, "count({q})"),
        }
    }
}

/// Precision of a class: `Finite(N)` keeps monomials with `max(a, b) > -N`.
///
/// `Finite(N) < Finite(M)` for `N < M`, and every finite precision is below
/// `Exact`, so `min` picks the coarser of two precisions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Precision {
    Finite(u32),
    Exact,
}

impl Precision {
    /// The depth cutoff: monomials with `max(a, b) <= cutoff` are dropped.
    fn cutoff(&self) -> Option<i64> {
        match self {
            Precision::Finite(n) => Some(-(*n as i64)),
            Precision::Exact => None,
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Finite(n) => write!(f, "{n}"),
            Precision::Exact => write!(f, "exact"),
        }
    }
}

/// Virtual dimension of a class: depth in the dimension filtration.
///
/// The zero class has virtual dimension plus infinity; otherwise it is
/// `-max` over stored monomials of `max(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Vdim {
    Finite(i64),
    PlusInfinity,
}

impl fmt::Display for Vdim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vdim::Finite(n) => write!(f, "{n}"),
            Vdim::PlusInfinity => write!(f, "+inf"),
        }
    }
}

/// A realized Grothendieck-ring element with finite precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletedClass {
    realization: Realization,
    precision: Precision,
    monomials: BTreeMap<(i64, i64), BigInt>,
}

impl CompletedClass {
    pub fn zero(realization: Realization) -> Self {
        CompletedClass {
            realization,
            precision: Precision::Exact,
            monomials: BTreeMap::new(),
        }
    }

    pub fn one(realization: Realization) -> Self {
        Self::l_power(realization, 0)
    }

    /// The Lefschetz class L.
    pub fn lefschetz(realization: Realization) -> Self {
        Self::l_power(realization, 1)
    }

    /// L^k for any integer k.
    pub fn l_power(realization: Realization, k: i64) -> Self {
        let mut monomials = BTreeMap::new();
        monomials.insert((k, k), BigInt::one());
        CompletedClass {
            realization,
            precision: Precision::Exact,
            monomials,
        }
    }

    /// The Hodge–Deligne monomial u^a v^b.
    pub fn hodge_monomial(a: i64, b: i64) -> Self {
        let mut monomials = BTreeMap::new();
        monomials.insert((a, b), BigInt::one());
        CompletedClass {
            realization: Realization::HodgeDeligne,
            precision: Precision::Exact,
            monomials,
        }
    }

    /// Build a class from raw terms, normalizing to canonical form.
    ///
    /// In counting mode, every key must be diagonal.
    pub fn from_terms<I>(realization: Realization, terms: I, precision: Precision) -> Self
    where
        I: IntoIterator<Item = ((i64, i64), BigInt)>,
    {
        let mut monomials: BTreeMap<(i64, i64), BigInt> = BTreeMap::new();
        for (key, coeff) in terms {
            if realization.is_counting() {
                assert_eq!(key.0, key.1, "counting classes store diagonal monomials");
            }
            if coeff.is_zero() {
                continue;
            }
            match monomials.entry(key) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(coeff);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += coeff;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
            }
        }
        let mut class = CompletedClass {
            realization,
            precision,
            monomials,
        };
        class.enforce_cutoff();
        class
    }

    /// Convenience constructor for integer Laurent polynomials in L:
    /// `from_l_terms(r, [(2, 1), (1, 1), (0, -1)])` is L^2 + L - 1.
    pub fn from_l_terms<I>(realization: Realization, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, i64)>,
    {
        Self::from_terms(
            realization,
            terms
                .into_iter()
                .map(|(k, c)| ((k, k), BigInt::from(c))),
            Precision::Exact,
        )
    }

    fn enforce_cutoff(&mut self) {
        if let Some(cutoff) = self.precision.cutoff() {
            self.monomials.retain(|&(a, b), _| a.max(b) > cutoff);
        }
    }

    pub fn realization(&self) -> Realization {
        self.realization
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Iterate monomials in ascending lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &BigInt)> {
        self.monomials.iter()
    }

    pub fn coeff(&self, key: (i64, i64)) -> BigInt {
        self.monomials.get(&key).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Largest `max(a, b)` over stored monomials, or None for zero.
    pub fn top_depth(&self) -> Option<i64> {
        self.monomials.keys().map(|&(a, b)| a.max(b)).max()
    }

    /// Largest total weight `a + b` over stored monomials, or None for zero.
    ///
    /// For the class of a variety this is twice its dimension.
    pub fn top_weight(&self) -> Option<i64> {
        self.monomials.keys().map(|&(a, b)| a + b).max()
    }

    /// True when every monomial is a power of L (diagonal exponents).
    pub fn is_pure_l(&self) -> bool {
        self.monomials.keys().all(|&(a, b)| a == b)
    }

    /// True when every monomial is effective, i.e. `max(a, b) <= 0`.
    pub fn is_effective(&self) -> bool {
        self.monomials.keys().all(|&(a, b)| a.max(b) <= 0)
    }

    fn check_realization(&self, other: &Self) -> Result<(), RingError> {
        if self.realization != other.realization {
            return Err(RingError::RealizationMismatch(
                self.realization,
                other.realization,
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, RingError> {
        self.check_realization(other)?;
        let precision = self.precision.min(other.precision);
        Ok(Self::from_terms(
            self.realization,
            self.monomials
                .iter()
                .chain(other.monomials.iter())
                .map(|(&k, c)| (k, c.clone())),
            precision,
        ))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, RingError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, RingError> {
        self.check_realization(other)?;
        let precision = self.precision.min(other.precision);
        let mut terms: BTreeMap<(i64, i64), BigInt> = BTreeMap::new();
        for (&(a1, b1), c1) in &self.monomials {
            for (&(a2, b2), c2) in &other.monomials {
                let key = (a1 + a2, b1 + b2);
                let prod = c1 * c2;
                match terms.entry(key) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += prod;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                }
            }
        }
        let mut class = CompletedClass {
            realization: self.realization,
            precision,
            monomials: terms,
        };
        class.enforce_cutoff();
        Ok(class)
    }

    pub fn neg(&self) -> Self {
        CompletedClass {
            realization: self.realization,
            precision: self.precision,
            monomials: self
                .monomials
                .iter()
                .map(|(&k, c)| (k, -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        if factor.is_zero() {
            let mut z = Self::zero(self.realization);
            z.precision = self.precision;
            return z;
        }
        CompletedClass {
            realization: self.realization,
            precision: self.precision,
            monomials: self
                .monomials
                .iter()
                .map(|(&k, c)| (k, c * factor))
                .collect(),
        }
    }

    /// Multiply by L^k (shift every exponent diagonally).
    pub fn shift_l(&self, k: i64) -> Self {
        let mut class = CompletedClass {
            realization: self.realization,
            precision: self.precision,
            monomials: self
                .monomials
                .iter()
                .map(|(&(a, b), c)| ((a + k, b + k), c.clone()))
                .collect(),
        };
        class.enforce_cutoff();
        class
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.realization);
        for _ in 0..exp {
            acc = acc.try_mul(self).expect("same realization");
        }
        acc
    }

    /// Drop monomials with `max(a, b) <= -n`; the result has precision
    /// `min(n, precision(self))`. `n` must be at least 1.
    pub fn truncate(&self, n: u32) -> Result<Self, RingError> {
        if n == 0 {
            return Err(RingError::BadPrecision);
        }
        let precision = self.precision.min(Precision::Finite(n));
        let mut class = CompletedClass {
            realization: self.realization,
            precision,
            monomials: self.monomials.clone(),
        };
        class.enforce_cutoff();
        Ok(class)
    }

    /// Virtual dimension: plus infinity for zero, otherwise the negative of
    /// the largest monomial depth.
    pub fn vdim(&self) -> Vdim {
        match self.top_depth() {
            None => Vdim::PlusInfinity,
            Some(d) => Vdim::Finite(-d),
        }
    }

    /// Equality of canonical forms after truncating both sides to the
    /// common precision.
    pub fn eq_class(&self, other: &Self) -> Result<bool, RingError> {
        self.check_realization(other)?;
        let precision = self.precision.min(other.precision);
        let (lhs, rhs) = match precision {
            Precision::Exact => (self.clone(), other.clone()),
            Precision::Finite(n) => (self.truncate(n)?, other.truncate(n)?),
        };
        Ok(lhs.monomials == rhs.monomials)
    }

    /// Evaluate the counting measure: substitute L -> q exactly.
    ///
    /// Requires a pure-L class. In counting realization the base prime
    /// must agree with `q`.
    pub fn realize_count(&self, q: u32) -> Result<BigRational, RingError> {
        let target = Realization::counting(q)?;
        if let Realization::Counting { q: q0 } = self.realization {
            if q0 != q {
                return Err(RingError::RealizationMismatch(self.realization, target));
            }
        }
        if !self.is_pure_l() {
            return Err(RingError::NonTateClass);
        }
        let base = BigRational::from(BigInt::from(q));
        let mut total = BigRational::zero();
        for (&(k, _), c) in &self.monomials {
            let term = BigRational::from(c.clone())
                * base.pow(i32::try_from(k).expect("exponent fits i32"));
            total += term;
        }
        Ok(total)
    }

    /// Reinterpret a pure-L class in the counting realization at prime q.
    pub fn to_counting(&self, q: u32) -> Result<Self, RingError> {
        let realization = Realization::counting(q)?;
        if !self.is_pure_l() {
            return Err(RingError::NonTateClass);
        }
        Ok(CompletedClass {
            realization,
            precision: self.precision,
            monomials: self.monomials.clone(),
        })
    }
}

impl std::ops::Add for &CompletedClass {
    type Output = CompletedClass;
    fn add(self, rhs: &CompletedClass) -> CompletedClass {
        self.try_add(rhs).expect("realizations must match")
    }
}

impl std::ops::Sub for &CompletedClass {
    type Output = CompletedClass;
    fn sub(self, rhs: &CompletedClass) -> CompletedClass {
        self.try_sub(rhs).expect("realizations must match")
    }
}

impl std::ops::Mul for &CompletedClass {
    type Output = CompletedClass;
    fn mul(self, rhs: &CompletedClass) -> CompletedClass {
        self.try_mul(rhs).expect("realizations must match")
    }
}

impl fmt::Display for CompletedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return write!(f, "0");
        }
        // Descending depth reads naturally: leading terms first.
        let mut terms: Vec<(&(i64, i64), &BigInt)> = self.monomials.iter().collect();
        terms.sort_by_key(|(&(a, b), _)| (-(a.max(b)), -(a + b), a.min(b)));
        let mut first = true;
        for (&(a, b), coeff) in terms {
            let negative = coeff.is_negative();
            let abs = coeff.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
                first = false;
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let var = monomial_str(a, b);
            if var.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{abs}*{var}")?;
            }
        }
        if let Precision::Finite(n) = self.precision {
            write!(f, " + O(L^-{n})")?;
        }
        Ok(())
    }
}

fn monomial_str(a: i64, b: i64) -> String {
    if a == b {
        match a {
            0 => String::new(),
            1 => "L".to_string(),
            k => format!("L^{k}"),
        }
    } else {
        let part = |sym: &str, e: i64| match e {
            0 => String::new(),
            1 => sym.to_string(),
            k => format!("{sym}^{k}"),
        };
        let u = part("u", a);
        let v = part("v", b);
        match (u.is_empty(), v.is_empty()) {
            (true, true) => String::new(),
            (false, true) => u,
            (true, false) => v,
            (false, false) => format!("{u}*{v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l() -> CompletedClass {
        CompletedClass::lefschetz(Realization::HodgeDeligne)
    }

    fn one() -> CompletedClass {
        CompletedClass::one(Realization::HodgeDeligne)
    }

    #[test]
    fn product_of_l_plus_minus_one() {
        let a = &l() - &one();
        let b = &l() + &one();
        let expected =
            CompletedClass::from_l_terms(Realization::HodgeDeligne, [(2, 1), (0, -1)]);
        assert_eq!(a.try_mul(&b).unwrap(), expected);
    }

    #[test]
    fn product_shifts_exponents() {
        let a = &one() + &l();
        let b = CompletedClass::l_power(Realization::HodgeDeligne, -1);
        let expected =
            CompletedClass::from_l_terms(Realization::HodgeDeligne, [(-1, 1), (0, 1)]);
        assert_eq!(a.try_mul(&b).unwrap(), expected);
    }

    #[test]
    fn hodge_monomial_product() {
        // (1 - u)(1 - v) = 1 - u - v + uv, and uv is the monomial (1, 1) = L.
        let u = CompletedClass::hodge_monomial(1, 0);
        let v = CompletedClass::hodge_monomial(0, 1);
        let a = &one() - &u;
        let b = &one() - &v;
        let prod = a.try_mul(&b).unwrap();
        let expected = CompletedClass::from_terms(
            Realization::HodgeDeligne,
            [
                ((0, 0), BigInt::from(1)),
                ((1, 0), BigInt::from(-1)),
                ((0, 1), BigInt::from(-1)),
                ((1, 1), BigInt::from(1)),
            ],
            Precision::Exact,
        );
        assert_eq!(prod, expected);
        assert_eq!(prod.coeff((1, 1)), BigInt::one());
    }

    #[test]
    fn realization_mismatch_is_an_error() {
        let a = one();
        let b = CompletedClass::one(Realization::counting(3).unwrap());
        assert!(matches!(
            a.try_add(&b),
            Err(RingError::RealizationMismatch(_, _))
        ));
    }

    #[test]
    fn vdim_of_zero_is_plus_infinity() {
        assert_eq!(
            CompletedClass::zero(Realization::HodgeDeligne).vdim(),
            Vdim::PlusInfinity
        );
    }

    #[test]
    fn vdim_of_projective_line_class() {
        // [P^1] = 1 + L has virtual dimension -1.
        let p1 = &one() + &l();
        assert_eq!(p1.vdim(), Vdim::Finite(-1));
    }

    #[test]
    fn vdim_of_deep_tail() {
        let c = CompletedClass::from_l_terms(Realization::HodgeDeligne, [(-3, 1), (-5, 1)]);
        assert_eq!(c.vdim(), Vdim::Finite(3));
    }

    #[test]
    fn truncate_drops_deep_monomials() {
        let c = CompletedClass::from_l_terms(Realization::HodgeDeligne, [(0, 1), (-6, 1)]);
        let t = c.truncate(5).unwrap();
        assert_eq!(t.monomials.len(), 1);
        assert_eq!(t.coeff((0, 0)), BigInt::one());
        assert_eq!(t.precision(), Precision::Finite(5));

        let c = CompletedClass::from_l_terms(Realization::HodgeDeligne, [(-2, 1), (-4, 1)]);
        let t = c.truncate(3).unwrap();
        assert_eq!(t.coeff((-2, -2)), BigInt::one());
        assert!(t.coeff((-4, -4)).is_zero());
    }

    #[test]
    fn truncate_kills_classes_below_cutoff() {
        // vdim(x) >= N forces truncate(x, N) = 0.
        let c = CompletedClass::from_l_terms(Realization::HodgeDeligne, [(-4, 7), (-6, -2)]);
        assert_eq!(c.vdim(), Vdim::Finite(4));
        assert!(c.truncate(4).unwrap().is_zero());
        assert!(c.truncate(3).unwrap().is_zero());
        assert!(!c.truncate(5).unwrap().is_zero());
    }

    #[test]
    fn truncate_rejects_zero_precision() {
        assert_eq!(one().truncate(0), Err(RingError::BadPrecision));
    }

    #[test]
    fn eq_class_ignores_tail_below_common_precision() {
        let a = CompletedClass::from_l_terms(Realization::HodgeDeligne, [(0, 1), (-6, 1)])
            .truncate(5)
            .unwrap();
        let b = one().truncate(5).unwrap();
        assert!(a.eq_class(&b).unwrap());

        let c = one().truncate(3).unwrap();
        let d = CompletedClass::from_l_terms(Realization::HodgeDeligne, [(0, 1), (-2, 1)])
            .truncate(3)
            .unwrap();
        assert!(!c.eq_class(&d).unwrap());
    }

    #[test]
    fn lefschetz_is_the_uv_monomial() {
        assert!(l().eq_class(&CompletedClass::hodge_monomial(1, 1)).unwrap());
    }

    #[test]
    fn realize_count_substitutes_q() {
        let c = CompletedClass::from_l_terms(Realization::HodgeDeligne, [(2, 1), (1, 1)]);
        assert_eq!(
            c.realize_count(3).unwrap(),
            BigRational::from(BigInt::from(12))
        );
    }

    #[test]
    fn realize_count_rejects_non_tate() {
        let c = CompletedClass::hodge_monomial(1, 0);
        assert_eq!(c.realize_count(3), Err(RingError::NonTateClass));
    }

    #[test]
    fn counting_realization_validates_primality() {
        assert!(Realization::counting(2).is_ok());
        assert!(Realization::counting(65521).is_ok());
        assert_eq!(Realization::counting(1), Err(RingError::BadPrime(1)));
        assert_eq!(Realization::counting(4), Err(RingError::BadPrime(4)));
        assert_eq!(
            Realization::counting(65522),
            Err(RingError::BadPrime(65522))
        );
    }

    #[test]
    fn display_is_readable() {
        let c = CompletedClass::from_l_terms(Realization::HodgeDeligne, [(0, 1), (-1, -1)]);
        assert_eq!(c.to_string(), "1 - L^-1");
    }
}
