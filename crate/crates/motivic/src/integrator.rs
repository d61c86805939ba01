//! The motivic integral of L^{-ord_D} for SNC data, its closed form, the
//! transformation-rule verifier, and the K-equivalence checker.
//!
//! The integral is computed twice and the two routes are required to agree:
//!
//! * series route: arcs are stratified by their contact orders along the
//!   divisor components; each stratum contributes a cylinder measure, and
//!   the level-s measures are summed against L^-s up to the working
//!   precision. Contact vectors are enumerated subject to
//!   `sum (a_j + 1) m_j <= 2N + 2d + maxweight`, which guarantees every
//!   omitted term falls below the precision cutoff.
//! * closed route: each component's geometric series is summed once and
//!   for all, giving L^-d * sum_J [D_J°] * prod_{j in J} (L-1)/(L^{a_j+1}-1)
//!   over the common denominator.
//!
//! Arcs trapped inside the divisor (infinite order) are discarded: they
//! live over a positive-codimension subvariety and vanish in every
//! truncation, as certified by `jets::subvariety_vdim_bound`.

use std::collections::BTreeMap;

use crate::geometry::{
    motive_class, validate_snc, BlowupSpec, ComponentSet, GeometryError, KEquivalencePair,
    SncModel,
};
use crate::jets::{contact_measure, ContactDatum, JetsError};
use crate::rational::RationalClass;
use crate::ring::{CompletedClass, Realization, RingError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntegratorError {
    #[error("precision must be at least 1")]
    PrecisionTooSmall,
    #[error("invalid SNC model: {0:?}")]
    InvalidModel(Vec<String>),
    #[error("inconsistent transform data: {0}")]
    InconsistentTransform(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Jets(#[from] JetsError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A motivic integral with its closed form, truncated series, and the
/// per-level measures that were summed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralResult {
    pub closed: RationalClass,
    pub series: CompletedClass,
    pub level_measures: BTreeMap<u32, CompletedClass>,
}

/// Side-by-side comparison of two integrals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub passed: bool,
    pub lhs: IntegralResult,
    pub rhs: IntegralResult,
    pub discrepancy: CompletedClass,
}

impl VerificationReport {
    fn compare(lhs: IntegralResult, rhs: IntegralResult) -> Result<Self, IntegratorError> {
        let discrepancy = lhs.series.try_sub(&rhs.series)?;
        let passed = discrepancy.is_zero() && lhs.closed.eq_cross(&rhs.closed)?;
        Ok(VerificationReport {
            passed,
            lhs,
            rhs,
            discrepancy,
        })
    }
}

/// All contact vectors (J, m) with the prescribed exact order
/// sum_{j in J} a_j m_j = s.
fn vectors_at_level(mults: &[u32], s: u32) -> Vec<BTreeMap<usize, u32>> {
    let mut out = Vec::new();
    let mut current = BTreeMap::new();
    descend_level(mults, 0, s, &mut current, &mut out);
    out
}

fn descend_level(
    mults: &[u32],
    index: usize,
    remaining: u32,
    current: &mut BTreeMap<usize, u32>,
    out: &mut Vec<BTreeMap<usize, u32>>,
) {
    if index == mults.len() {
        if remaining == 0 {
            out.push(current.clone());
        }
        return;
    }
    descend_level(mults, index + 1, remaining, current, out);
    let a = mults[index];
    let mut m = 1u32;
    while a * m <= remaining {
        current.insert(index, m);
        descend_level(mults, index + 1, remaining - a * m, current, out);
        current.remove(&index);
        m += 1;
    }
}

/// All contact vectors with sum (a_j + 1) m_j <= bound.
fn vectors_within_bound(mults: &[u32], bound: i64) -> Vec<BTreeMap<usize, u32>> {
    let mut out = Vec::new();
    let mut current = BTreeMap::new();
    descend_bound(mults, 0, bound, &mut current, &mut out);
    out
}

fn descend_bound(
    mults: &[u32],
    index: usize,
    budget: i64,
    current: &mut BTreeMap<usize, u32>,
    out: &mut Vec<BTreeMap<usize, u32>>,
) {
    if index == mults.len() {
        out.push(current.clone());
        return;
    }
    descend_bound(mults, index + 1, budget, current, out);
    let cost = mults[index] as i64 + 1;
    let mut m = 1u32;
    while cost * m as i64 <= budget {
        current.insert(index, m);
        descend_bound(mults, index + 1, budget - cost * m as i64, current, out);
        current.remove(&index);
        m += 1;
    }
}

fn checked_model(snc: &SncModel) -> Result<Vec<u32>, IntegratorError> {
    let report = validate_snc(snc);
    if !report.passed() {
        return Err(IntegratorError::InvalidModel(report.violations));
    }
    Ok(snc.components.iter().map(|c| c.multiplicity).collect())
}

/// The measure of the locus ord_D = s: the finite sum of contact measures
/// over all vectors with sum a_j m_j = s.
pub fn level_measure(snc: &SncModel, s: u32) -> Result<CompletedClass, IntegratorError> {
    let mults = checked_model(snc)?;
    let mut total = CompletedClass::zero(Realization::HodgeDeligne);
    for vector in vectors_at_level(&mults, s) {
        let datum = ContactDatum {
            snc,
            contact: vector,
        };
        total = total.try_add(&contact_measure(&datum)?)?;
    }
    Ok(total)
}

/// Integrate L^{-ord_D} over the arc space of the ambient variety.
pub fn integrate_snc(snc: &SncModel, n: u32) -> Result<IntegralResult, IntegratorError> {
    if n == 0 {
        return Err(IntegratorError::PrecisionTooSmall);
    }
    let mults = checked_model(snc)?;
    let d = snc.ambient.dim;
    let realization = Realization::HodgeDeligne;

    // Series route. Terms omitted by the bound lie below the cutoff.
    let bound = 2 * n as i64 + 2 * d + snc.max_stratum_weight();
    let mut level_measures: BTreeMap<u32, CompletedClass> = BTreeMap::new();
    for vector in vectors_within_bound(&mults, bound) {
        let datum = ContactDatum {
            snc,
            contact: vector,
        };
        let level = datum.order();
        let measure = contact_measure(&datum)?;
        match level_measures.entry(level) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(measure);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().try_add(&measure)?;
                e.insert(sum);
            }
        }
    }
    // Levels above bound/2 may be partially enumerated; their terms are
    // below the cutoff either way, so drop them from the exposed map.
    let complete = (bound / 2).max(0) as u32;
    level_measures.retain(|&s, _| s <= complete);

    let mut series = CompletedClass::zero(realization);
    for (&s, measure) in &level_measures {
        series = series.try_add(&measure.shift_l(-(s as i64)))?;
    }
    let series = series.truncate(n)?;

    // Closed route over the common denominator prod (L^{a_j+1} - 1).
    let torus = CompletedClass::from_l_terms(realization, [(1, 1), (0, -1)]);
    let mut numerator = CompletedClass::zero(realization);
    for (&set, class) in &snc.strata {
        let mut term = class.try_mul(&torus.pow(set.len()))?;
        for (j, &a) in mults.iter().enumerate() {
            if !set.contains(j) {
                let factor =
                    CompletedClass::from_l_terms(realization, [(a as i64 + 1, 1), (0, -1)]);
                term = term.try_mul(&factor)?;
            }
        }
        numerator = numerator.try_add(&term)?;
    }
    let denominators: Vec<u32> = mults.iter().map(|&a| a + 1).collect();
    let closed = RationalClass::new(numerator, -d, denominators)?;

    let expanded = closed.expand(n)?;
    assert!(
        expanded.eq_class(&series)?,
        "closed form and contact series disagree at precision {n}: {expanded} vs {series}"
    );

    Ok(IntegralResult {
        closed,
        series,
        level_measures,
    })
}

/// A transformation-rule instance: a divisor on the base, the blow-up, and
/// the user-supplied transformed divisor on the blown-up model. The
/// component named `exceptional` must carry the declared pullback
/// multiplicity plus the discrepancy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformCase {
    pub lhs: SncModel,
    pub blowup: BlowupSpec,
    pub rhs: SncModel,
    pub exceptional: String,
    pub pullback_mult: u32,
}

impl TransformCase {
    /// The empty-divisor case: D = ∅ upstairs becomes k_E * E downstairs.
    pub fn empty_divisor(blowup: BlowupSpec) -> Self {
        let lhs = SncModel::empty_divisor(blowup.base.clone());
        let produced = blowup.produced.clone();
        let open = produced
            .total_class()
            .try_sub(&blowup.exceptional_class)
            .expect("hodge");
        let rhs = SncModel::new(
            produced,
            vec![("E", blowup.discrepancy as u32)],
            [
                (ComponentSet::EMPTY, open),
                (
                    ComponentSet::from_indices([0]),
                    blowup.exceptional_class.clone(),
                ),
            ],
        );
        TransformCase {
            lhs,
            blowup,
            rhs,
            exceptional: "E".to_string(),
            pullback_mult: 0,
        }
    }

    /// D = a*H for a hyperplane H through a point center of A^d: the total
    /// transform is a*H~ + (a + d - 1)*E.
    pub fn hyperplane(d: u32, a: u32) -> Result<Self, IntegratorError> {
        if d < 2 || a == 0 {
            return Err(IntegratorError::InconsistentTransform(format!(
                "hyperplane case needs d >= 2 and a >= 1, got d = {d}, a = {a}"
            )));
        }
        let realization = Realization::HodgeDeligne;
        let base = crate::geometry::affine_space(d);
        let blowup = crate::geometry::blowup_classes(&base, crate::geometry::BlowupCenter::Point)?;
        let dd = d as i64;
        let hyperplane = CompletedClass::l_power(realization, dd - 1);
        let off = CompletedClass::from_l_terms(realization, [(dd, 1), (dd - 1, -1)]);
        let lhs = SncModel::new(
            base,
            vec![("H", a)],
            [
                (ComponentSet::EMPTY, off.clone()),
                (ComponentSet::from_indices([0]), hyperplane),
            ],
        );
        // Strict transform meets E in a P^{d-2}.
        let corner = crate::geometry::projective_space_class(d - 2);
        let strict_open = CompletedClass::from_l_terms(realization, [(dd - 1, 1), (0, -1)]);
        let exc_open = CompletedClass::l_power(realization, dd - 1);
        let rhs = SncModel::new(
            blowup.produced.clone(),
            vec![("H~", a), ("E", a + d - 1)],
            [
                (ComponentSet::EMPTY, off),
                (ComponentSet::from_indices([0]), strict_open),
                (ComponentSet::from_indices([1]), exc_open),
                (ComponentSet::from_indices([0, 1]), corner),
            ],
        );
        Ok(TransformCase {
            lhs,
            blowup,
            rhs,
            exceptional: "E".to_string(),
            pullback_mult: a,
        })
    }
}

/// Verify the transformation rule on a user-supplied transform.
///
/// Consistency is checked first: the blow-up class bookkeeping, the shared
/// ambient classes, and that the exceptional multiplicity equals the
/// declared pullback multiplicity plus the discrepancy. A consistent case
/// then passes iff the two integrals agree exactly.
pub fn transform_check(case: &TransformCase, n: u32) -> Result<VerificationReport, IntegratorError> {
    let blowup_report = case.blowup.validate();
    if !blowup_report.passed() {
        return Err(IntegratorError::InconsistentTransform(format!(
            "blow-up data: {}",
            blowup_report.violations.join("; ")
        )));
    }
    if case.lhs.ambient.total_class() != case.blowup.base.total_class()
        || case.lhs.ambient.dim != case.blowup.base.dim
    {
        return Err(IntegratorError::InconsistentTransform(
            "lhs ambient does not match the blow-up base".to_string(),
        ));
    }
    if case.rhs.ambient.total_class() != case.blowup.produced.total_class()
        || case.rhs.ambient.dim != case.blowup.produced.dim
    {
        return Err(IntegratorError::InconsistentTransform(
            "rhs ambient does not match the blown-up model".to_string(),
        ));
    }
    let e_index = case.rhs.component_index(&case.exceptional).ok_or_else(|| {
        IntegratorError::InconsistentTransform(format!(
            "rhs has no component named `{}`",
            case.exceptional
        ))
    })?;
    let expected = case.pullback_mult as i64 + case.blowup.discrepancy;
    let declared = case.rhs.multiplicity(e_index) as i64;
    if declared != expected {
        return Err(IntegratorError::InconsistentTransform(format!(
            "exceptional multiplicity {declared} differs from pullback + discrepancy = {expected}"
        )));
    }
    let lhs = integrate_snc(&case.lhs, n)?;
    let rhs = integrate_snc(&case.rhs, n)?;
    VerificationReport::compare(lhs, rhs)
}

/// Result of a K-equivalence check: the comparison of the two integrals
/// over the common resolution, and the common class when they agree.
#[derive(Debug, Clone)]
pub struct KEquivalenceOutcome {
    pub report: VerificationReport,
    /// Exact when the pair is declared crepant-complete, otherwise the
    /// truncated series.
    pub common_class: Option<CompletedClass>,
    pub k_equivalent_data: bool,
}

/// Integrate L^{-ord_K} for both relative canonical divisors on the common
/// resolution and compare. For crepant-complete pairs the integrals must
/// also equal the motive classes of the two sides.
pub fn kequiv_check(
    pair: &KEquivalencePair,
    n: u32,
) -> Result<KEquivalenceOutcome, IntegratorError> {
    let pair_report = pair.validate();
    if !pair_report.passed() {
        return Err(IntegratorError::InvalidModel(pair_report.violations));
    }
    let lhs = integrate_snc(&pair.k_left, n)?;
    let rhs = integrate_snc(&pair.k_right, n)?;
    let mut report = VerificationReport::compare(lhs, rhs)?;

    if report.passed && pair.crepant_complete {
        for (side, integral) in [(&pair.left, &report.lhs), (&pair.right, &report.rhs)] {
            let expected = motive_class(side)?;
            let series_ok = integral.series.eq_class(&expected)?;
            let closed_ok = integral
                .closed
                .eq_cross(&RationalClass::from_class(expected)?)?;
            if !series_ok || !closed_ok {
                report.passed = false;
            }
        }
    }

    let common_class = if report.passed {
        Some(if pair.crepant_complete {
            motive_class(&pair.left)?
        } else {
            report.lhs.series.clone()
        })
    } else {
        None
    };
    Ok(KEquivalenceOutcome {
        k_equivalent_data: pair.is_k_equivalent(),
        report,
        common_class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{affine_space, blowup_classes, BlowupCenter};

    fn hodge() -> Realization {
        Realization::HodgeDeligne
    }

    fn l_terms(terms: &[(i64, i64)]) -> CompletedClass {
        CompletedClass::from_l_terms(hodge(), terms.iter().copied())
    }

    fn a1_divisor(a: u32) -> SncModel {
        SncModel::new(
            affine_space(1),
            vec![("origin", a)],
            [
                (ComponentSet::EMPTY, l_terms(&[(1, 1), (0, -1)])),
                (ComponentSet::from_indices([0]), CompletedClass::one(hodge())),
            ],
        )
    }

    #[test]
    fn level_measures_on_the_line() {
        let snc = a1_divisor(1);
        assert_eq!(
            level_measure(&snc, 2).unwrap(),
            l_terms(&[(-2, 1), (-3, -1)])
        );
        assert_eq!(
            level_measure(&snc, 0).unwrap(),
            l_terms(&[(0, 1), (-1, -1)])
        );
    }

    #[test]
    fn level_measure_of_empty_divisor_vanishes_positively() {
        let snc = SncModel::empty_divisor(affine_space(2));
        for s in 1..5 {
            assert!(level_measure(&snc, s).unwrap().is_zero());
        }
    }

    #[test]
    fn empty_divisor_integral_is_the_motive_class() {
        for d in 1..4 {
            let x = affine_space(d);
            let snc = SncModel::empty_divisor(x.clone());
            let result = integrate_snc(&snc, 8).unwrap();
            let expected = motive_class(&x).unwrap();
            assert!(result.series.eq_class(&expected).unwrap());
            assert!(result
                .closed
                .eq_cross(&RationalClass::from_class(expected).unwrap())
                .unwrap());
        }
    }

    #[test]
    fn line_with_multiplicity_has_geometric_closed_form() {
        for a in 1..4u32 {
            let result = integrate_snc(&a1_divisor(a), 10).unwrap();
            // (L-1) L^a / (L^{a+1} - 1)
            let expected = RationalClass::new(
                l_terms(&[(1, 1), (0, -1)]),
                a as i64,
                vec![a + 1],
            )
            .unwrap();
            assert!(result.closed.eq_cross(&expected).unwrap());
            assert_eq!(result.series, expected.expand(10).unwrap());
        }
    }

    #[test]
    fn alternating_series_for_simple_divisor() {
        // a = 1: the series is 1 - L^-1 + L^-2 - ...
        let result = integrate_snc(&a1_divisor(1), 5).unwrap();
        let expected = l_terms(&[(0, 1), (-1, -1), (-2, 1), (-3, -1), (-4, 1)])
            .truncate(5)
            .unwrap();
        assert_eq!(result.series, expected);
    }

    #[test]
    fn blowup_exceptional_integral_is_one() {
        let blowup = blowup_classes(&affine_space(2), BlowupCenter::Point).unwrap();
        let case = TransformCase::empty_divisor(blowup);
        let result = integrate_snc(&case.rhs, 9).unwrap();
        assert!(result
            .series
            .eq_class(&CompletedClass::one(hodge()))
            .unwrap());
    }

    #[test]
    fn transform_rule_for_point_blowups() {
        for d in 2..4u32 {
            let blowup = blowup_classes(&affine_space(d), BlowupCenter::Point).unwrap();
            let case = TransformCase::empty_divisor(blowup);
            let report = transform_check(&case, 12).unwrap();
            assert!(report.passed);
            assert!(report.discrepancy.is_zero());
        }
    }

    #[test]
    fn transform_rule_for_hyperplanes_through_the_center() {
        for a in 1..3u32 {
            let case = TransformCase::hyperplane(2, a).unwrap();
            let report = transform_check(&case, 12).unwrap();
            assert!(report.passed, "hyperplane multiplicity {a}");
        }
    }

    #[test]
    fn wrong_discrepancy_fails_with_nonzero_discrepancy() {
        let blowup = blowup_classes(&affine_space(2), BlowupCenter::Point).unwrap();
        let mut case = TransformCase::empty_divisor(blowup);
        // Claim the empty divisor pulls back with multiplicity one along E,
        // which makes the declared total 2E arithmetically consistent but
        // geometrically wrong.
        case.rhs.components[0].multiplicity = 2;
        case.pullback_mult = 1;
        let report = transform_check(&case, 8).unwrap();
        assert!(!report.passed);
        assert!(!report.discrepancy.is_zero());
        // The first affected coefficient is at depth -2.
        assert_eq!(report.discrepancy.top_depth(), Some(-2));
    }

    #[test]
    fn inconsistent_multiplicity_is_rejected_up_front() {
        let blowup = blowup_classes(&affine_space(2), BlowupCenter::Point).unwrap();
        let mut case = TransformCase::empty_divisor(blowup);
        case.rhs.components[0].multiplicity = 2; // pullback still declared 0
        assert!(matches!(
            transform_check(&case, 8),
            Err(IntegratorError::InconsistentTransform(_))
        ));
    }

    #[test]
    fn precision_zero_is_rejected() {
        let snc = SncModel::empty_divisor(affine_space(1));
        assert!(matches!(
            integrate_snc(&snc, 0),
            Err(IntegratorError::PrecisionTooSmall)
        ));
    }

    #[test]
    fn monotone_refinement_of_series() {
        let snc = a1_divisor(2);
        let coarse = integrate_snc(&snc, 4).unwrap().series;
        let fine = integrate_snc(&snc, 9).unwrap().series;
        assert!(fine.truncate(4).unwrap().eq_class(&coarse).unwrap());
    }

    #[test]
    fn series_is_the_sum_of_level_measures() {
        for snc in [a1_divisor(2), crate::bundled::a2_axes()] {
            let n = 7;
            let result = integrate_snc(&snc, n).unwrap();
            let mut sum = CompletedClass::zero(hodge());
            for (&s, measure) in &result.level_measures {
                sum = sum.try_add(&measure.shift_l(-(s as i64))).unwrap();
            }
            assert!(sum.truncate(n).unwrap().eq_class(&result.series).unwrap());
        }
    }

    #[test]
    fn non_equivalent_pair_fails() {
        // Left is the plane, right is its blow-up, roof equal to the
        // blow-up: the integrals are 1 and 1 + L^-1.
        let blowup = blowup_classes(&affine_space(2), BlowupCenter::Point).unwrap();
        let case = TransformCase::empty_divisor(blowup.clone());
        let pair = crate::geometry::KEquivalencePair {
            left: affine_space(2),
            right: blowup.produced.clone(),
            resolution: blowup.produced.clone(),
            k_left: case.rhs.clone(),
            k_right: SncModel::empty_divisor(blowup.produced.clone()),
            crepant_complete: false,
        };
        let outcome = kequiv_check(&pair, 8).unwrap();
        assert!(!outcome.report.passed);
        assert!(!outcome.k_equivalent_data);
        assert!(outcome.common_class.is_none());
        // 1 vs 1 + L^-1: the discrepancy is exactly -L^-1.
        assert_eq!(
            outcome.report.discrepancy,
            CompletedClass::from_l_terms(hodge(), [(-1, -1)])
                .truncate(8)
                .unwrap()
        );
    }
}
