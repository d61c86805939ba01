//! Independent brute-force verification over finite fields: point counts
//! of affine schemes, truncated jet counts, contact loci, blow-up fibration
//! fibers, and zeta-function assembly.
//!
//! Everything here is exhaustive enumeration over prime fields, kept
//! deliberately separate from the class arithmetic it checks. States are
//! enumerated in lexicographic order over coefficient tuples with the
//! least-significant variable fastest, so failure reports are
//! reproducible; the parallel split and the integer-sum reduction keep
//! counts bit-identical across thread counts.

mod enumerate;
mod ff;

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::ring::{CompletedClass, Realization, RingError};
use enumerate::{fold_ranges, Odometer};
use ff::{series_mul, series_order, PrimeField, SeriesScratch};

/// Hard ceiling on scheme size so enumeration spaces stay sane.
pub const MAX_SCHEME_VARS: usize = 8;
/// Hard ceiling on the total degree of any defining polynomial.
pub const MAX_TOTAL_DEGREE: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("enumeration needs {needed} states, budget allows {max}")]
    BudgetExceeded { needed: u128, max: u64 },
    #[error("jet level {level} is below the required level {required}")]
    LevelTooLow { level: u32, required: u32 },
    #[error("class is not a polynomial in L with nonnegative exponents")]
    NonPolynomialClass,
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A polynomial with integer coefficients in sparse monomial form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    pub n_vars: usize,
    /// (coefficient, exponent vector of length n_vars)
    pub terms: Vec<(i64, Vec<u32>)>,
}

impl Polynomial {
    pub fn new(n_vars: usize, terms: Vec<(i64, Vec<u32>)>) -> Self {
        Polynomial { n_vars, terms }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(_, exps)| exps.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        for (_, exps) in &self.terms {
            if exps.len() != self.n_vars {
                return Err(OracleError::InvalidScheme(format!(
                    "exponent vector of length {} in a polynomial on {} variables",
                    exps.len(),
                    self.n_vars
                )));
            }
        }
        if self.total_degree() > MAX_TOTAL_DEGREE {
            return Err(OracleError::InvalidScheme(format!(
                "total degree {} exceeds {MAX_TOTAL_DEGREE}",
                self.total_degree()
            )));
        }
        Ok(())
    }

    fn eval_point(&self, f: &PrimeField, point: &[u64]) -> u64 {
        let mut acc = 0u64;
        for (c, exps) in &self.terms {
            let mut term = f.reduce_i64(*c);
            for (x, &e) in point.iter().zip(exps) {
                if e > 0 {
                    term = f.mul(term, f.pow(*x, e));
                }
            }
            acc = f.add(acc, term);
        }
        acc
    }

    /// Evaluate on truncated power series into `scratch.acc`, mod t^len.
    ///
    /// `coeffs` holds the variables var-major: variable i occupies
    /// `coeffs[i*len..(i+1)*len]`, constant coefficient first.
    fn eval_series(&self, f: &PrimeField, coeffs: &[u64], len: usize, scratch: &mut SeriesScratch) {
        scratch.acc.fill(0);
        for (c, exps) in &self.terms {
            scratch.term.fill(0);
            scratch.term[0] = f.reduce_i64(*c);
            for (i, &e) in exps.iter().enumerate() {
                let series = &coeffs[i * len..(i + 1) * len];
                for _ in 0..e {
                    series_mul(f, &scratch.term, series, &mut scratch.tmp);
                    scratch.term.copy_from_slice(&scratch.tmp);
                }
            }
            for (a, t) in scratch.acc.iter_mut().zip(&scratch.term) {
                *a = f.add(*a, *t);
            }
        }
    }
}

/// Integer-coefficient equations in affine space, with optional
/// inequations carving a locally closed subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSchemeSpec {
    pub n_vars: usize,
    pub equations: Vec<Polynomial>,
    pub inequations: Vec<Polynomial>,
}

impl AffineSchemeSpec {
    pub fn new(
        n_vars: usize,
        equations: Vec<Polynomial>,
        inequations: Vec<Polynomial>,
    ) -> Self {
        AffineSchemeSpec {
            n_vars,
            equations,
            inequations,
        }
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        if self.n_vars == 0 || self.n_vars > MAX_SCHEME_VARS {
            return Err(OracleError::InvalidScheme(format!(
                "n_vars = {} is not in 1..={MAX_SCHEME_VARS}",
                self.n_vars
            )));
        }
        for p in self.equations.iter().chain(&self.inequations) {
            if p.n_vars != self.n_vars {
                return Err(OracleError::InvalidScheme(
                    "polynomial variable count differs from the scheme".to_string(),
                ));
            }
            p.validate()?;
        }
        Ok(())
    }
}

/// Enumeration limits and the thread selector (1 forces the sequential
/// kernel; anything else uses the rayon pool when the `parallel` feature
/// is on).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_states: u64,
    pub threads: usize,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_states: 1_000_000_000,
            threads: 0,
        }
    }
}

impl EnumerationBudget {
    fn admit(&self, states: u128) -> Result<u64, OracleError> {
        if states > self.max_states as u128 {
            return Err(OracleError::BudgetExceeded {
                needed: states,
                max: self.max_states,
            });
        }
        Ok(states as u64)
    }
}

/// q^digits, saturating so absurd levels fail the budget instead of
/// overflowing.
fn state_space(q: u64, digits: usize) -> u128 {
    let mut states: u128 = 1;
    for _ in 0..digits {
        states = states.saturating_mul(q as u128);
    }
    states
}

fn checked_prime(q: u32) -> Result<u64, OracleError> {
    Realization::counting(q)?;
    Ok(q as u64)
}

/// Size the global worker pool. 0 keeps the default parallelism; without
/// the `parallel` feature this is a no-op and enumeration is sequential.
pub fn configure_thread_pool(threads: usize) {
    #[cfg(feature = "parallel")]
    if threads > 1 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
}

/// Digit-aligned leading block: large enough to amortize, small enough to
/// spread across the pool.
fn leading_block(total: u64, q: u64) -> u64 {
    let mut block = total;
    while block > 1024 && total / block < 512 {
        block /= q;
    }
    block.max(1)
}

/// Exact number of F_q-points satisfying all equations and inequations.
pub fn count_points(
    spec: &AffineSchemeSpec,
    q: u32,
    budget: &EnumerationBudget,
) -> Result<u64, OracleError> {
    spec.validate()?;
    let q = checked_prime(q)?;
    let total = budget.admit(state_space(q, spec.n_vars))?;
    let f = PrimeField { q };
    let n = spec.n_vars;
    let count = fold_ranges(
        total,
        leading_block(total, q),
        budget.threads,
        |range| {
            let mut odo = Odometer::start(range.start, q, n);
            let mut hits = 0u64;
            for _ in range {
                let point = odo.digits.as_slice();
                if spec.equations.iter().all(|p| p.eval_point(&f, point) == 0)
                    && spec
                        .inequations
                        .iter()
                        .all(|p| p.eval_point(&f, point) != 0)
                {
                    hits += 1;
                }
                odo.step();
            }
            hits
        },
        |a, b| a + b,
    );
    Ok(count)
}

/// Exact number of m-jets: tuples of truncated power series satisfying the
/// equations mod t^{m+1}. Inequations must have a unit constant term, so
/// the jet lands in the locally closed subset.
pub fn count_jets(
    spec: &AffineSchemeSpec,
    q: u32,
    m: u32,
    budget: &EnumerationBudget,
) -> Result<u64, OracleError> {
    spec.validate()?;
    let q = checked_prime(q)?;
    let len = m as usize + 1;
    let digits = spec.n_vars * len;
    let total = budget.admit(state_space(q, digits))?;
    let f = PrimeField { q };
    let count = fold_ranges(
        total,
        leading_block(total, q),
        budget.threads,
        |range| {
            let mut odo = Odometer::start(range.start, q, digits);
            let mut scratch = SeriesScratch::new(len);
            let mut hits = 0u64;
            for _ in range {
                let coeffs = odo.digits.as_slice();
                let on_jets = spec.equations.iter().all(|p| {
                    p.eval_series(&f, coeffs, len, &mut scratch);
                    scratch.acc.iter().all(|&c| c == 0)
                }) && spec.inequations.iter().all(|p| {
                    p.eval_series(&f, coeffs, len, &mut scratch);
                    scratch.acc[0] != 0
                });
                if on_jets {
                    hits += 1;
                }
                odo.step();
            }
            hits
        },
        |a, b| a + b,
    );
    Ok(count)
}

/// Raw jet count next to the smooth-space prediction q^{md} * #X(F_q).
///
/// Over a singular base the law may fail; the report carries the raw value
/// with the comparison flag rather than asserting anything.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetLawReport {
    pub jet_count: u64,
    pub point_count: u64,
    pub smooth_prediction: u64,
    pub matches_smooth_law: bool,
}

pub fn jet_law_report(
    spec: &AffineSchemeSpec,
    dim: u32,
    q: u32,
    m: u32,
    budget: &EnumerationBudget,
) -> Result<JetLawReport, OracleError> {
    let jet_count = count_jets(spec, q, m, budget)?;
    let point_count = count_points(spec, q, budget)?;
    let smooth_prediction = (q as u64).pow(m * dim) * point_count;
    Ok(JetLawReport {
        jet_count,
        point_count,
        smooth_prediction,
        matches_smooth_law: jet_count == smooth_prediction,
    })
}

/// Prescription for a contact locus: exact t-adic orders per divisor
/// component, or a total order for the weighted divisor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContactOrders {
    /// Required order of each g_i in turn (0 means the jet misses it).
    Exact(Vec<u32>),
    /// Required value of sum a_i * ord(g_i).
    Total(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContactCountReport {
    /// Jets matching the prescription exactly.
    pub count: u64,
    /// Jets where some component order is >= m + 1 (undetermined at this
    /// level); reported separately, never silently matched.
    pub saturated: u64,
}

/// Count m-jets of A^n with prescribed t-adic contact orders along a
/// divisor given by defining polynomials with multiplicities.
pub fn count_contact_locus(
    n_vars: usize,
    divisor: &[(Polynomial, u32)],
    q: u32,
    m: u32,
    orders: &ContactOrders,
    budget: &EnumerationBudget,
) -> Result<ContactCountReport, OracleError> {
    let spec = AffineSchemeSpec::new(n_vars, Vec::new(), Vec::new());
    spec.validate()?;
    for (p, _) in divisor {
        if p.n_vars != n_vars {
            return Err(OracleError::InvalidScheme(
                "divisor polynomial variable count differs from the ambient".to_string(),
            ));
        }
        p.validate()?;
    }
    let required = match orders {
        ContactOrders::Exact(prescribed) => {
            if prescribed.len() != divisor.len() {
                return Err(OracleError::InvalidScheme(
                    "one prescribed order per divisor component is required".to_string(),
                ));
            }
            prescribed.iter().sum()
        }
        ContactOrders::Total(e) => *e,
    };
    if m < required {
        return Err(OracleError::LevelTooLow {
            level: m,
            required,
        });
    }
    let q = checked_prime(q)?;
    let len = m as usize + 1;
    let digits = n_vars * len;
    let total = budget.admit(state_space(q, digits))?;
    let f = PrimeField { q };

    let (count, saturated) = fold_ranges(
        total,
        leading_block(total, q),
        budget.threads,
        |range| {
            let mut odo = Odometer::start(range.start, q, digits);
            let mut scratch = SeriesScratch::new(len);
            let mut ords = vec![0usize; divisor.len()];
            let mut matched = 0u64;
            let mut truncated = 0u64;
            for _ in range {
                for (slot, (p, _)) in ords.iter_mut().zip(divisor) {
                    p.eval_series(&f, &odo.digits, len, &mut scratch);
                    *slot = series_order(&scratch.acc);
                }
                if ords.iter().any(|&o| o >= len) {
                    truncated += 1;
                }
                let hit = match orders {
                    ContactOrders::Exact(prescribed) => prescribed
                        .iter()
                        .zip(&ords)
                        .all(|(&want, &got)| got == want as usize),
                    ContactOrders::Total(e) => {
                        ords.iter().all(|&o| o < len)
                            && divisor
                                .iter()
                                .zip(&ords)
                                .map(|((_, a), &o)| *a as usize * o)
                                .sum::<usize>()
                                == *e as usize
                    }
                };
                if hit {
                    matched += 1;
                }
                odo.step();
            }
            (matched, truncated)
        },
        |a, b| (a.0 + b.0, a.1 + b.1),
    );
    Ok(ContactCountReport { count, saturated })
}

/// Fiber-size audit of the blow-up of the plane at the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrationReport {
    pub prime: u32,
    pub level: u32,
    pub order: u32,
    pub source_jets: u64,
    pub fibers: u64,
    pub expected_fiber: u64,
    pub min_fiber: u64,
    pub max_fiber: u64,
    pub passed: bool,
}

/// Enumerate the m-jets of Bl_0(A^2) with contact order `e` along the
/// relative canonical divisor and bucket them by their image downstairs:
/// every fiber must have exactly q^e points (requires m >= 2e).
///
/// The blown-up surface is covered by the two standard charts; the second
/// chart is restricted to exceptional coordinate zero, splitting the
/// exceptional P^1 as A^1 plus the point at infinity so no jet is counted
/// twice. On either chart the Jacobian determinant of the blow-down is the
/// chart equation of E, so the contact order is the t-adic order of that
/// coordinate.
pub fn fibration_fiber_counts(
    q: u32,
    m: u32,
    e: u32,
    budget: &EnumerationBudget,
) -> Result<FibrationReport, OracleError> {
    if m < 2 * e {
        return Err(OracleError::LevelTooLow {
            level: m,
            required: 2 * e,
        });
    }
    let q = checked_prime(q)?;
    let len = m as usize + 1;
    let chart1_states = budget.admit(state_space(q, 2 * len))?;
    // Chart 2 pins the constant term of the exceptional coordinate to zero.
    let chart2_states = chart1_states / q;
    let f = PrimeField { q };

    let mut fibers: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut source_jets = 0u64;
    let mut scratch = vec![0u64; len];

    // Chart 1: (x, u) -> (x, x*u); E = {x = 0}, det = x.
    let mut odo = Odometer::start(0, q, 2 * len);
    for _ in 0..chart1_states {
        let (x, u) = odo.digits.split_at(len);
        if series_order(x) == e as usize {
            series_mul(&f, x, u, &mut scratch);
            let mut image = Vec::with_capacity(2 * len);
            image.extend_from_slice(x);
            image.extend_from_slice(&scratch);
            *fibers.entry(image).or_insert(0) += 1;
            source_jets += 1;
        }
        odo.step();
    }

    // Chart 2 minus chart 1: (v, y) -> (v*y, y) with v(0) = 0; E = {y = 0},
    // det = y.
    let mut odo = Odometer::start(0, q, 2 * len - 1);
    let mut v = vec![0u64; len];
    for _ in 0..chart2_states {
        v[1..].copy_from_slice(&odo.digits[..len - 1]);
        let y = &odo.digits[len - 1..];
        if series_order(y) == e as usize {
            series_mul(&f, &v, y, &mut scratch);
            let mut image = Vec::with_capacity(2 * len);
            image.extend_from_slice(&scratch);
            image.extend_from_slice(y);
            *fibers.entry(image).or_insert(0) += 1;
            source_jets += 1;
        }
        odo.step();
    }

    let expected_fiber = q.pow(e);
    let min_fiber = fibers.values().copied().min().unwrap_or(0);
    let max_fiber = fibers.values().copied().max().unwrap_or(0);
    let passed = !fibers.is_empty() && min_fiber == expected_fiber && max_fiber == expected_fiber;
    Ok(FibrationReport {
        prime: q as u32,
        level: m,
        order: e,
        source_jets,
        fibers: fibers.len() as u64,
        expected_fiber,
        min_fiber,
        max_fiber,
        passed,
    })
}

/// A zeta function in factored form: the product of (1 - q^k t)^{-c_k}.
///
/// Kept factored so equality checks stay exact; never expanded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaFactored {
    pub q: u32,
    /// k -> c_k, the multiplicity of L^k in the class.
    pub factors: BTreeMap<i64, BigInt>,
}

impl fmt::Display for ZetaFactored {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let write_side = |f: &mut fmt::Formatter<'_>, side: Vec<(&i64, BigInt)>| -> fmt::Result {
            if side.is_empty() {
                return write!(f, "1");
            }
            for (k, mult) in side {
                let base = BigInt::from(self.q).pow(u32::try_from(*k).expect("k >= 0"));
                let factor = if base.is_one() {
                    "(1 - t)".to_string()
                } else {
                    format!("(1 - {base}*t)")
                };
                if mult.is_one() {
                    write!(f, "{factor}")?;
                } else {
                    write!(f, "{factor}^{mult}")?;
                }
            }
            Ok(())
        };
        let numerator: Vec<(&i64, BigInt)> = self
            .factors
            .iter()
            .filter(|(_, c)| c.is_negative())
            .map(|(k, c)| (k, c.abs()))
            .collect();
        let denominator: Vec<(&i64, BigInt)> = self
            .factors
            .iter()
            .filter(|(_, c)| c.is_positive())
            .map(|(k, c)| (k, c.clone()))
            .collect();
        write_side(f, numerator)?;
        write!(f, " / ")?;
        write_side(f, denominator)
    }
}

/// Assemble Z(t) = prod (1 - q^k t)^{-c_k} for a polynomial pure-L class.
pub fn zeta_closed_form(class: &CompletedClass, q: u32) -> Result<ZetaFactored, OracleError> {
    checked_prime(q)?;
    if let Realization::Counting { q: q0 } = class.realization() {
        if q0 != q {
            return Err(OracleError::Ring(RingError::RealizationMismatch(
                class.realization(),
                Realization::counting(q)?,
            )));
        }
    }
    if !class.is_pure_l() {
        return Err(OracleError::NonPolynomialClass);
    }
    let mut factors = BTreeMap::new();
    for (&(k, _), c) in class.terms() {
        if k < 0 {
            return Err(OracleError::NonPolynomialClass);
        }
        factors.insert(k, c.clone());
    }
    Ok(ZetaFactored { q, factors })
}
