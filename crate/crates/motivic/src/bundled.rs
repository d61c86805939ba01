//! The bundled example corpus: the SNC models, blow-ups, K-equivalence
//! data, and affine schemes that the CLI exposes by id and the test suites
//! run end to end.

use crate::counting::{AffineSchemeSpec, Polynomial};
use crate::geometry::{
    affine_space, blowup_classes, BlowupCenter, ComponentSet, KEquivalencePair, SncModel,
    Stratum, StratifiedVariety,
};
use crate::integrator::TransformCase;
use crate::ring::{CompletedClass, Realization};

fn l_terms(terms: &[(i64, i64)]) -> CompletedClass {
    CompletedClass::from_l_terms(Realization::HodgeDeligne, terms.iter().copied())
}

/// A^1 with the divisor a * {0}.
pub fn a1_divisor(a: u32) -> SncModel {
    SncModel::new(
        affine_space(1),
        vec![("origin", a)],
        [
            (ComponentSet::EMPTY, l_terms(&[(1, 1), (0, -1)])),
            (
                ComponentSet::from_indices([0]),
                CompletedClass::one(Realization::HodgeDeligne),
            ),
        ],
    )
}

/// Defining polynomial of the divisor in [`a1_divisor`], for the oracle.
pub fn a1_divisor_polys(a: u32) -> Vec<(Polynomial, u32)> {
    vec![(Polynomial::new(1, vec![(1, vec![1])]), a)]
}

/// A^2 with the two coordinate axes, each with multiplicity one.
pub fn a2_axes() -> SncModel {
    let axis = l_terms(&[(1, 1), (0, -1)]);
    SncModel::new(
        affine_space(2),
        vec![("x-axis", 1), ("y-axis", 1)],
        [
            (ComponentSet::EMPTY, l_terms(&[(2, 1), (1, -2), (0, 1)])),
            (ComponentSet::from_indices([0]), axis.clone()),
            (ComponentSet::from_indices([1]), axis),
            (
                ComponentSet::from_indices([0, 1]),
                CompletedClass::one(Realization::HodgeDeligne),
            ),
        ],
    )
}

/// Defining polynomials of the axes (x and y), for the oracle.
pub fn a2_axes_polys() -> Vec<(Polynomial, u32)> {
    vec![
        (Polynomial::new(2, vec![(1, vec![1, 0])]), 1),
        (Polynomial::new(2, vec![(1, vec![0, 1])]), 1),
    ]
}

/// The projective line: a point and an affine cell.
pub fn projective_line() -> StratifiedVariety {
    StratifiedVariety::new(
        "P1",
        1,
        true,
        vec![
            Stratum::new("point", 0, CompletedClass::one(Realization::HodgeDeligne)),
            Stratum::new("cell", 1, l_terms(&[(1, 1)])),
        ],
    )
}

/// The affine node threefold xy = zw, with its singular point split off.
pub fn node_threefold_variety() -> StratifiedVariety {
    StratifiedVariety::new(
        "node-threefold",
        3,
        false,
        vec![
            Stratum::new("smooth-locus", 3, l_terms(&[(3, 1), (2, 1), (1, -1), (0, -1)])),
            Stratum::new("node", 0, CompletedClass::one(Realization::HodgeDeligne)),
        ],
    )
}

/// A small resolution of the node threefold: the node is replaced by a P^1.
pub fn small_resolution(name: &str) -> StratifiedVariety {
    StratifiedVariety::new(
        name,
        3,
        true,
        vec![
            Stratum::new("open", 3, l_terms(&[(3, 1), (2, 1), (1, -1), (0, -1)])),
            Stratum::new("curve", 1, l_terms(&[(1, 1), (0, 1)])),
        ],
    )
}

/// The common roof of the two small resolutions: blowing up the curve
/// replaces it by E = P^1 x P^1.
pub fn flop_roof() -> StratifiedVariety {
    StratifiedVariety::new(
        "flop-roof",
        3,
        true,
        vec![
            Stratum::new("open", 3, l_terms(&[(3, 1), (2, 1), (1, -1), (0, -1)])),
            Stratum::new("exceptional", 2, l_terms(&[(2, 1), (1, 2), (0, 1)])),
        ],
    )
}

fn flop_relative_canonical() -> SncModel {
    SncModel::new(
        flop_roof(),
        vec![("E", 1)],
        [
            (
                ComponentSet::EMPTY,
                l_terms(&[(3, 1), (2, 1), (1, -1), (0, -1)]),
            ),
            (
                ComponentSet::from_indices([0]),
                l_terms(&[(2, 1), (1, 2), (0, 1)]),
            ),
        ],
    )
}

/// The Atiyah flop: both small resolutions of the node threefold under
/// their common blow-up, with equal relative canonical divisors 1 * E.
pub fn atiyah_flop() -> KEquivalencePair {
    KEquivalencePair {
        left: small_resolution("flop-left"),
        right: small_resolution("flop-right"),
        resolution: flop_roof(),
        k_left: flop_relative_canonical(),
        k_right: flop_relative_canonical(),
        crepant_complete: true,
    }
}

/// The node threefold as equations, with its known class for cross-checks.
pub fn node_threefold_scheme() -> SchemeExample {
    SchemeExample {
        spec: AffineSchemeSpec::new(
            4,
            vec![Polynomial::new(
                4,
                vec![(1, vec![1, 1, 0, 0]), (-1, vec![0, 0, 1, 1])],
            )],
            vec![],
        ),
        dim: Some(3),
        class: Some(l_terms(&[(3, 1), (2, 1), (1, -1)])),
    }
}

/// The hyperbola xy = 1, a smooth curve for the jet-count law.
pub fn hyperbola_scheme() -> SchemeExample {
    SchemeExample {
        spec: AffineSchemeSpec::new(
            2,
            vec![Polynomial::new(2, vec![(1, vec![1, 1]), (-1, vec![0, 0])])],
            vec![],
        ),
        dim: Some(1),
        class: Some(l_terms(&[(1, 1), (0, -1)])),
    }
}

/// An affine scheme together with optional dimension and class data used
/// by law reports and zeta assembly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeExample {
    pub spec: AffineSchemeSpec,
    pub dim: Option<u32>,
    pub class: Option<CompletedClass>,
}

/// An SNC integration case with the oracle polynomials of its divisor.
///
/// The oracle enumerates jets of affine space of the ambient's dimension,
/// so contact counting only makes sense when the ambient is A^d and the
/// listed polynomials cut out the components in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContactCase {
    pub snc: SncModel,
    pub divisor: Vec<(Polynomial, u32)>,
}

#[derive(Debug, Clone)]
pub enum ExampleData {
    Integrate(ContactCase),
    Transform(TransformCase),
    KEquivalence(KEquivalencePair),
    Scheme(SchemeExample),
}

#[derive(Debug, Clone)]
pub struct Example {
    pub id: &'static str,
    pub summary: &'static str,
    pub data: ExampleData,
}

fn transform_bl_a2_origin() -> TransformCase {
    TransformCase::empty_divisor(
        blowup_classes(&affine_space(2), BlowupCenter::Point).expect("supported center"),
    )
}

fn transform_bl_a3_origin() -> TransformCase {
    TransformCase::empty_divisor(
        blowup_classes(&affine_space(3), BlowupCenter::Point).expect("supported center"),
    )
}

fn transform_bl_a3_line() -> TransformCase {
    TransformCase::empty_divisor(
        blowup_classes(&affine_space(3), BlowupCenter::CoordinateSubspace { dim: 1 })
            .expect("supported center"),
    )
}

/// Deliberately wrong: D = ∅ upstairs but 2E declared downstairs, with a
/// claimed pullback multiplicity that makes the data internally consistent.
fn transform_wrong_discrepancy() -> TransformCase {
    let mut case = transform_bl_a2_origin();
    case.rhs.components[0].multiplicity = 2;
    case.pullback_mult = 1;
    case
}

/// The full corpus, ordered by id.
pub fn all_examples() -> Vec<Example> {
    let mut out = vec![
        Example {
            id: "a1-divisor-a1",
            summary: "A^1 with divisor 1*{0}",
            data: ExampleData::Integrate(ContactCase {
                snc: a1_divisor(1),
                divisor: a1_divisor_polys(1),
            }),
        },
        Example {
            id: "a1-divisor-a2",
            summary: "A^1 with divisor 2*{0}",
            data: ExampleData::Integrate(ContactCase {
                snc: a1_divisor(2),
                divisor: a1_divisor_polys(2),
            }),
        },
        Example {
            id: "a1-divisor-a3",
            summary: "A^1 with divisor 3*{0}",
            data: ExampleData::Integrate(ContactCase {
                snc: a1_divisor(3),
                divisor: a1_divisor_polys(3),
            }),
        },
        Example {
            id: "a2-axes",
            summary: "A^2 with the two coordinate axes",
            data: ExampleData::Integrate(ContactCase {
                snc: a2_axes(),
                divisor: a2_axes_polys(),
            }),
        },
        Example {
            id: "atiyah-flop",
            summary: "both small resolutions of xy = zw under their common roof",
            data: ExampleData::KEquivalence(atiyah_flop()),
        },
        Example {
            id: "bl-a2-hyperplane-a1",
            summary: "blow-up of A^2 at the origin, D = 1*H through the center",
            data: ExampleData::Transform(
                TransformCase::hyperplane(2, 1).expect("valid case"),
            ),
        },
        Example {
            id: "bl-a2-hyperplane-a2",
            summary: "blow-up of A^2 at the origin, D = 2*H through the center",
            data: ExampleData::Transform(
                TransformCase::hyperplane(2, 2).expect("valid case"),
            ),
        },
        Example {
            id: "bl-a2-origin",
            summary: "blow-up of A^2 at the origin, empty divisor",
            data: ExampleData::Transform(transform_bl_a2_origin()),
        },
        Example {
            id: "bl-a2-wrong-discrepancy",
            summary: "blow-up of A^2 with a deliberately wrong discrepancy",
            data: ExampleData::Transform(transform_wrong_discrepancy()),
        },
        Example {
            id: "bl-a3-line",
            summary: "blow-up of A^3 along a coordinate line, empty divisor",
            data: ExampleData::Transform(transform_bl_a3_line()),
        },
        Example {
            id: "bl-a3-origin",
            summary: "blow-up of A^3 at the origin, empty divisor",
            data: ExampleData::Transform(transform_bl_a3_origin()),
        },
        Example {
            id: "hyperbola-jets",
            summary: "the smooth hyperbola xy = 1 for the jet-count law",
            data: ExampleData::Scheme(hyperbola_scheme()),
        },
        Example {
            id: "node-threefold",
            summary: "the affine node threefold xy = zw",
            data: ExampleData::Scheme(node_threefold_scheme()),
        },
    ];
    out.sort_by_key(|e| e.id);
    out
}

pub fn find_example(id: &str) -> Option<Example> {
    all_examples().into_iter().find(|e| e.id == id)
}

/// Every bundled smooth variety, for identities quantified over the corpus.
pub fn bundled_smooth_varieties() -> Vec<StratifiedVariety> {
    vec![
        affine_space(1),
        affine_space(2),
        affine_space(3),
        projective_line(),
        transform_bl_a2_origin().blowup.produced,
        transform_bl_a3_origin().blowup.produced,
        transform_bl_a3_line().blowup.produced,
        small_resolution("flop-left"),
        small_resolution("flop-right"),
        flop_roof(),
    ]
}

/// Every bundled variety including the singular node threefold.
pub fn bundled_varieties() -> Vec<StratifiedVariety> {
    let mut out = bundled_smooth_varieties();
    out.push(node_threefold_variety());
    out
}
