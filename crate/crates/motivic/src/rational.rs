//! Exact closed-form classes: a numerator over a product of (L^e - 1)
//! factors, times a global power of L.
//!
//! These are the only denominators produced by summing the geometric series
//! of contact orders, so no general rational normal form is needed: two
//! closed forms are compared by cross-multiplication, and a closed form is
//! expanded to a [`CompletedClass`] through the series
//! 1/(L^e - 1) = L^-e + L^-2e + ... which converges in the completion.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use std::fmt;

use crate::ring::{CompletedClass, Precision, Realization, RingError};

/// An exact class of the shape `numerator * L^lshift / prod (L^e - 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalClass {
    numerator: CompletedClass,
    lshift: i64,
    denominators: Vec<u32>,
}

impl RationalClass {
    pub fn new(
        numerator: CompletedClass,
        lshift: i64,
        mut denominators: Vec<u32>,
    ) -> Result<Self, RingError> {
        if numerator.precision() != Precision::Exact {
            return Err(RingError::NotExact);
        }
        if denominators.contains(&0) {
            return Err(RingError::BadDenominator);
        }
        denominators.sort_unstable();
        Ok(RationalClass {
            numerator,
            lshift,
            denominators,
        })
    }

    pub fn from_class(numerator: CompletedClass) -> Result<Self, RingError> {
        Self::new(numerator, 0, Vec::new())
    }

    pub fn zero(realization: Realization) -> Self {
        RationalClass {
            numerator: CompletedClass::zero(realization),
            lshift: 0,
            denominators: Vec::new(),
        }
    }

    pub fn numerator(&self) -> &CompletedClass {
        &self.numerator
    }

    pub fn lshift(&self) -> i64 {
        self.lshift
    }

    pub fn denominators(&self) -> &[u32] {
        &self.denominators
    }

    pub fn realization(&self) -> Realization {
        self.numerator.realization()
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// The expanded denominator `prod (L^e - 1)` as an exact class.
    pub fn denominator_class(&self) -> CompletedClass {
        let realization = self.realization();
        let mut acc = CompletedClass::one(realization);
        for &e in &self.denominators {
            let factor = CompletedClass::from_l_terms(realization, [(e as i64, 1), (0, -1)]);
            acc = acc.try_mul(&factor).expect("same realization");
        }
        acc
    }

    pub fn mul_class(&self, class: &CompletedClass) -> Result<Self, RingError> {
        Self::new(
            self.numerator.try_mul(class)?,
            self.lshift,
            self.denominators.clone(),
        )
    }

    pub fn mul(&self, other: &Self) -> Result<Self, RingError> {
        let mut denominators = self.denominators.clone();
        denominators.extend_from_slice(&other.denominators);
        Self::new(
            self.numerator.try_mul(&other.numerator)?,
            self.lshift + other.lshift,
            denominators,
        )
    }

    /// Shift by a global power of L.
    pub fn shift_l(&self, k: i64) -> Self {
        RationalClass {
            numerator: self.numerator.clone(),
            lshift: self.lshift + k,
            denominators: self.denominators.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        RationalClass {
            numerator: self.numerator.neg(),
            lshift: self.lshift,
            denominators: self.denominators.clone(),
        }
    }

    /// Add by cross-multiplying onto the combined denominator.
    pub fn add(&self, other: &Self) -> Result<Self, RingError> {
        let shift = self.lshift.min(other.lshift);
        let lhs = self
            .numerator
            .shift_l(self.lshift - shift)
            .try_mul(&other.denominator_class())?;
        let rhs = other
            .numerator
            .shift_l(other.lshift - shift)
            .try_mul(&self.denominator_class())?;
        let mut denominators = self.denominators.clone();
        denominators.extend_from_slice(&other.denominators);
        Self::new(lhs.try_add(&rhs)?, shift, denominators)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, RingError> {
        self.add(&other.neg())
    }

    /// Exact equality by cross-multiplication; no normal form is computed.
    pub fn eq_cross(&self, other: &Self) -> Result<bool, RingError> {
        let lhs = self
            .numerator
            .shift_l(self.lshift)
            .try_mul(&other.denominator_class())?;
        let rhs = other
            .numerator
            .shift_l(other.lshift)
            .try_mul(&self.denominator_class())?;
        Ok(lhs == rhs)
    }

    /// Truncation at precision `n` of `numerator * L^lshift / prod (L^e - 1)`.
    ///
    /// Each inverse factor is expanded as the geometric series in L^-e with
    /// enough terms that every discarded product term lies below the cutoff.
    pub fn expand(&self, n: u32) -> Result<CompletedClass, RingError> {
        if n == 0 {
            return Err(RingError::BadPrecision);
        }
        let realization = self.realization();
        if self.numerator.is_zero() {
            return CompletedClass::zero(realization).truncate(n);
        }
        let top = self.numerator.top_depth().expect("nonzero") + self.lshift;
        // A product term built from geometric terms L^{-j_f e_f} has depth
        // at most top - sum j_f e_f; it survives the cutoff only if
        // sum j_f e_f <= bound.
        let bound = top + n as i64 - 1;
        let mut acc = self.numerator.shift_l(self.lshift);
        for &e in &self.denominators {
            let j_max = if bound < e as i64 {
                0
            } else {
                bound / e as i64
            };
            let series = CompletedClass::from_terms(
                realization,
                (1..=j_max).map(|j| {
                    let k = -j * e as i64;
                    ((k, k), BigInt::one())
                }),
                Precision::Exact,
            );
            acc = acc.try_mul(&series)?;
        }
        acc.truncate(n)
    }

    /// Evaluate the counting measure exactly: L -> q, factors -> q^e - 1.
    pub fn realize_count(&self, q: u32) -> Result<BigRational, RingError> {
        let mut value = self.numerator.realize_count(q)?;
        let base = BigRational::from(BigInt::from(q));
        value *= base.pow(i32::try_from(self.lshift).expect("shift fits i32"));
        for &e in &self.denominators {
            let factor = BigRational::from(BigInt::from(q).pow(e) - BigInt::one());
            value /= factor;
        }
        Ok(value)
    }
}

impl fmt::Display for RationalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.numerator)?;
        match self.lshift {
            0 => {}
            1 => write!(f, " * L")?,
            k => write!(f, " * L^{k}")?,
        }
        if !self.denominators.is_empty() {
            let factors: Vec<String> = self
                .denominators
                .iter()
                .map(|&e| {
                    if e == 1 {
                        "(L-1)".to_string()
                    } else {
                        format!("(L^{e}-1)")
                    }
                })
                .collect();
            if factors.len() == 1 {
                write!(f, " / {}", factors[0])?;
            } else {
                write!(f, " / ({})", factors.join("*"))?;
            }
        }
        Ok(())
    }
}
