//! Property tests: ring laws on effective classes at fixed precision,
//! truncation compatibility, expansion round trips, counting-measure
//! homomorphism, JSON canonicity, and the exhaustion of arc space by
//! contact strata on the bundled models.

use proptest::prelude::*;

use motivic::bundled;
use motivic::geometry::SncModel;
use motivic::jets::{contact_measure, measure_disjoint_union, ContactDatum};
use motivic::jsonio;
use motivic::rational::RationalClass;
use motivic::ring::{CompletedClass, Precision, Realization, Vdim};

fn hodge() -> Realization {
    Realization::HodgeDeligne
}

const WORKING_PRECISION: u32 = 8;

/// Effective classes: every monomial has max(a, b) <= 0, which is the
/// regime where truncated arithmetic is a genuine ring quotient.
fn effective_class() -> impl Strategy<Value = CompletedClass> {
    prop::collection::vec(((-6i64..=0, -6i64..=0), -9i64..=9), 0..6).prop_map(|terms| {
        CompletedClass::from_terms(
            hodge(),
            terms
                .into_iter()
                .map(|((a, b), c)| ((a.min(b), a.max(b).min(0)), c.into())),
            Precision::Finite(WORKING_PRECISION),
        )
    })
}

fn pure_l_class() -> impl Strategy<Value = CompletedClass> {
    prop::collection::vec((-4i64..=4, -9i64..=9), 0..6)
        .prop_map(|terms| CompletedClass::from_l_terms(hodge(), terms))
}

proptest! {
    #[test]
    fn addition_is_commutative_and_associative(
        a in effective_class(),
        b in effective_class(),
        c in effective_class(),
    ) {
        prop_assert_eq!(a.try_add(&b).unwrap(), b.try_add(&a).unwrap());
        prop_assert_eq!(
            a.try_add(&b).unwrap().try_add(&c).unwrap(),
            a.try_add(&b.try_add(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn multiplication_is_commutative_and_associative(
        a in effective_class(),
        b in effective_class(),
        c in effective_class(),
    ) {
        prop_assert_eq!(a.try_mul(&b).unwrap(), b.try_mul(&a).unwrap());
        prop_assert_eq!(
            a.try_mul(&b).unwrap().try_mul(&c).unwrap(),
            a.try_mul(&b.try_mul(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn multiplication_distributes(
        a in effective_class(),
        b in effective_class(),
        c in effective_class(),
    ) {
        prop_assert_eq!(
            a.try_mul(&b.try_add(&c).unwrap()).unwrap(),
            a.try_mul(&b).unwrap().try_add(&a.try_mul(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn identities_act_trivially(a in effective_class()) {
        let zero = CompletedClass::zero(hodge());
        let one = CompletedClass::one(hodge());
        prop_assert_eq!(a.try_add(&zero).unwrap(), a.clone());
        prop_assert_eq!(a.try_mul(&one).unwrap(), a.clone());
        prop_assert!(a.try_sub(&a).unwrap().is_zero());
    }

    #[test]
    fn truncation_commutes_with_effective_products(
        a in effective_class(),
        b in effective_class(),
    ) {
        let n = 4;
        let product_then_truncate = a.try_mul(&b).unwrap().truncate(n).unwrap();
        let truncate_then_product = a
            .truncate(n).unwrap()
            .try_mul(&b.truncate(n).unwrap()).unwrap()
            .truncate(n).unwrap();
        prop_assert_eq!(product_then_truncate, truncate_then_product);
    }

    #[test]
    fn deep_tails_do_not_affect_effective_products(
        a in effective_class(),
        b in effective_class(),
        tail_coeff in -9i64..=9,
    ) {
        // Adding a class below the cutoff never changes the truncated
        // product against an effective cofactor.
        let n = 4;
        let tail = CompletedClass::from_l_terms(hodge(), [(-(n as i64) - 1, tail_coeff)]);
        let with_tail = a.try_add(&tail).unwrap().try_mul(&b).unwrap().truncate(n).unwrap();
        let without = a.try_mul(&b).unwrap().truncate(n).unwrap();
        prop_assert!(with_tail.eq_class(&without).unwrap());
    }

    #[test]
    fn vdim_is_additive_on_l_powers(a in -10i64..=10, b in -10i64..=10) {
        let la = CompletedClass::l_power(hodge(), a);
        let lb = CompletedClass::l_power(hodge(), b);
        prop_assert_eq!(la.vdim(), Vdim::Finite(-a));
        prop_assert_eq!(la.try_mul(&lb).unwrap().vdim(), Vdim::Finite(-(a + b)));
    }

    #[test]
    fn expansion_round_trips(
        numerator in pure_l_class(),
        lshift in -3i64..=3,
        denominators in prop::collection::vec(1u32..=4, 0..3),
    ) {
        let r = RationalClass::new(numerator, lshift, denominators).unwrap();
        let n = 6u32;
        let slack: u32 = r.denominators().iter().sum();
        let back = r
            .expand(n + slack).unwrap()
            .try_mul(&r.denominator_class()).unwrap()
            .truncate(n).unwrap();
        let direct = r.numerator().shift_l(r.lshift()).truncate(n).unwrap();
        prop_assert!(back.eq_class(&direct).unwrap());
    }

    #[test]
    fn counting_measure_is_a_ring_homomorphism(
        x in pure_l_class(),
        y in pure_l_class(),
    ) {
        for q in [2u32, 3, 5] {
            let lhs = x.try_mul(&y).unwrap().realize_count(q).unwrap();
            let rhs = x.realize_count(q).unwrap() * y.realize_count(q).unwrap();
            prop_assert_eq!(&lhs, &rhs);
            let sum_lhs = x.try_add(&y).unwrap().realize_count(q).unwrap();
            let sum_rhs = x.realize_count(q).unwrap() + y.realize_count(q).unwrap();
            prop_assert_eq!(&sum_lhs, &sum_rhs);
        }
    }

    #[test]
    fn class_json_is_canonical(a in effective_class()) {
        let value = jsonio::class_to_value(&a);
        let text = jsonio::canonical_string(&value);
        let parsed = jsonio::class_from_value(
            &jsonio::parse_document(&text).unwrap(),
            "$",
        ).unwrap();
        prop_assert_eq!(&parsed, &a);
        prop_assert_eq!(jsonio::canonical_string(&jsonio::class_to_value(&parsed)), text);
    }
}

/// Sum of contact measures over all contact data, truncated: the whole arc
/// space minus measure zero, which must be [X] L^-d.
fn exhaustion_sum(snc: &SncModel, n: u32) -> CompletedClass {
    let mults: Vec<u32> = snc.components.iter().map(|c| c.multiplicity).collect();
    let d = snc.ambient.dim;
    let budget = n as i64 + snc.max_stratum_weight() + d;
    let mut vectors: Vec<Vec<(usize, u32)>> = Vec::new();
    let mut stack = vec![(0usize, Vec::new(), 0i64)];
    while let Some((index, current, used)) = stack.pop() {
        if index == mults.len() {
            vectors.push(current);
            continue;
        }
        stack.push((index + 1, current.clone(), used));
        let mut m = 1u32;
        while used + m as i64 <= budget {
            let mut next = current.clone();
            next.push((index, m));
            stack.push((index + 1, next, used + m as i64));
            m += 1;
        }
    }
    let parts = vectors
        .into_iter()
        .map(|contact| contact_measure(&ContactDatum::new(snc, contact)).unwrap());
    measure_disjoint_union(parts, n).unwrap()
}

#[test]
fn contact_strata_exhaust_the_arc_space() {
    let models = [
        bundled::a1_divisor(1),
        bundled::a1_divisor(2),
        bundled::a1_divisor(3),
        bundled::a2_axes(),
    ];
    for snc in &models {
        for n in [3u32, 6, 9] {
            let total = exhaustion_sum(snc, n);
            let expected = snc
                .ambient
                .total_class()
                .shift_l(-snc.ambient.dim)
                .truncate(n)
                .unwrap();
            assert!(
                total.eq_class(&expected).unwrap(),
                "exhaustion fails for {} at precision {n}: {total} vs {expected}",
                snc.ambient.name
            );
        }
    }
}

#[test]
fn motive_classes_of_smooth_varieties_have_vdim_zero() {
    for x in bundled::bundled_smooth_varieties() {
        let mc = motivic::geometry::motive_class(&x).unwrap();
        assert_eq!(mc.vdim(), Vdim::Finite(0), "{}", x.name);
        assert_eq!(x.total_class().vdim(), Vdim::Finite(-x.dim), "{}", x.name);
    }
}

#[test]
fn cylinder_measures_are_stable_under_level_raise() {
    use motivic::jets::{cylinder_measure, jet_space_class, JetCylinder};
    for x in bundled::bundled_smooth_varieties() {
        for m in 0..3 {
            let cylinder = JetCylinder::new(x.clone(), m, jet_space_class(&x, m).unwrap());
            let raised = cylinder.raise_level();
            assert_eq!(
                cylinder_measure(&cylinder).unwrap(),
                cylinder_measure(&raised).unwrap(),
                "{} at level {m}",
                x.name
            );
        }
    }
}

#[test]
fn monotone_refinement_is_prefix_stable() {
    use motivic::integrator::integrate_snc;
    for snc in [bundled::a1_divisor(2), bundled::a2_axes()] {
        let mut previous: Option<CompletedClass> = None;
        for n in 3..=12 {
            let series = integrate_snc(&snc, n).unwrap().series;
            if let Some(prev) = previous {
                let refined = series.truncate(n - 1).unwrap();
                assert!(refined.eq_class(&prev).unwrap());
            }
            previous = Some(series);
        }
    }
}
