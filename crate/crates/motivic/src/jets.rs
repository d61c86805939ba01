//! Classes of truncated jet spaces and measures of cylinder and
//! contact-order subsets of arc space.
//!
//! For smooth X of dimension d, the level-m jet space is an A^{dm}-bundle
//! over X, so a constructible A_m at level m defines the cylinder measure
//! [A_m] * L^{-(m+1)d}, independent of the presentation level. Countable
//! disjoint unions are summed under a convergence guard: once the virtual
//! dimension of a part reaches the working precision the part contributes
//! nothing, and a family with too many shallow parts is rejected as
//! divergent.

use std::collections::BTreeMap;

use crate::geometry::{ComponentSet, SncModel, StratifiedVariety};
use crate::ring::{CompletedClass, RingError, Vdim};

/// Families may contribute at most this many parts below the precision
/// cutoff before `measure_disjoint_union` rejects them as divergent.
pub const DEFAULT_FAMILY_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JetsError {
    #[error("variety `{0}` is not smooth")]
    NotSmooth(String),
    #[error("cylinder base has top weight {weight}, above the jet-space bound {bound}")]
    CylinderTooBig { weight: i64, bound: i64 },
    #[error("contact orders must be >= 1")]
    InvalidContact,
    #[error("no stratum entry for subset {0} in the SNC model")]
    MissingStratum(String),
    #[error("family has more than {0} parts surviving at the working precision")]
    DivergentFamily(usize),
    #[error("subvariety dimension {y_dim} is not in 0..{d}")]
    BadCodim { y_dim: i64, d: i64 },
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A constructible subset of a level-m jet space, presented by its class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetCylinder {
    pub ambient: StratifiedVariety,
    pub level: u32,
    pub base_class: CompletedClass,
}

impl JetCylinder {
    pub fn new(ambient: StratifiedVariety, level: u32, base_class: CompletedClass) -> Self {
        JetCylinder {
            ambient,
            level,
            base_class,
        }
    }

    /// Re-present the same cylinder one level higher: the base gains an
    /// A^d-bundle factor.
    pub fn raise_level(&self) -> Self {
        JetCylinder {
            ambient: self.ambient.clone(),
            level: self.level + 1,
            base_class: self.base_class.shift_l(self.ambient.dim),
        }
    }
}

/// Contact orders along a subset of SNC components: the keys form the
/// subset J and each value is the prescribed order m_j >= 1. An empty map
/// is the boundary case of arcs meeting no component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContactDatum<'a> {
    pub snc: &'a SncModel,
    pub contact: BTreeMap<usize, u32>,
}

impl<'a> ContactDatum<'a> {
    pub fn new(snc: &'a SncModel, contact: impl IntoIterator<Item = (usize, u32)>) -> Self {
        ContactDatum {
            snc,
            contact: contact.into_iter().collect(),
        }
    }

    pub fn subset(&self) -> ComponentSet {
        ComponentSet::from_indices(self.contact.keys().copied())
    }

    /// The level of the order function: sum of a_j * m_j over J.
    pub fn order(&self) -> u32 {
        self.contact
            .iter()
            .map(|(&j, &m)| self.snc.multiplicity(j) * m)
            .sum()
    }
}

/// [J_m(X)] = [X] * L^{md} for smooth X.
pub fn jet_space_class(x: &StratifiedVariety, m: u32) -> Result<CompletedClass, JetsError> {
    if !x.smooth {
        return Err(JetsError::NotSmooth(x.name.clone()));
    }
    Ok(x.total_class().shift_l(m as i64 * x.dim))
}

/// The measure of a cylinder: [A_m] * L^{-(m+1)d}.
///
/// The base must fit inside the level-m jet space: its top weight cannot
/// exceed 2(m+1)d.
pub fn cylinder_measure(c: &JetCylinder) -> Result<CompletedClass, JetsError> {
    if !c.ambient.smooth {
        return Err(JetsError::NotSmooth(c.ambient.name.clone()));
    }
    let d = c.ambient.dim;
    let bound = 2 * (c.level as i64 + 1) * d;
    if let Some(weight) = c.base_class.top_weight() {
        if weight > bound {
            return Err(JetsError::CylinderTooBig { weight, bound });
        }
    }
    Ok(c.base_class.shift_l(-(c.level as i64 + 1) * d))
}

/// The measure of the locus of arcs with exact contact orders m_j along
/// the components in J: [D_J°] * (L-1)^{|J|} * L^{-sum m_j - d}.
pub fn contact_measure(cd: &ContactDatum<'_>) -> Result<CompletedClass, JetsError> {
    if cd.contact.values().any(|&m| m == 0) {
        return Err(JetsError::InvalidContact);
    }
    let subset = cd.subset();
    let class = cd
        .snc
        .stratum_class(subset)
        .ok_or_else(|| JetsError::MissingStratum(subset.to_string()))?;
    let d = cd.snc.ambient.dim;
    let torus = CompletedClass::from_l_terms(class.realization(), [(1, 1), (0, -1)])
        .pow(subset.len());
    let total_contact: i64 = cd.contact.values().map(|&m| m as i64).sum();
    Ok(class
        .try_mul(&torus)?
        .shift_l(-total_contact - d))
}

/// Truncated sum of a (possibly generated) disjoint family of measures.
///
/// Parts whose virtual dimension reaches `n` vanish after truncation and
/// are skipped; the sum diverges at precision `n` if more than `limit`
/// parts lie below the cutoff. Infinite generators must be bounded by the
/// caller (the enumeration bounds used by the integrator guarantee this
/// for contact families). An empty family yields the Hodge–Deligne zero.
pub fn measure_disjoint_union_with_limit(
    parts: impl IntoIterator<Item = CompletedClass>,
    n: u32,
    limit: usize,
) -> Result<CompletedClass, JetsError> {
    if n == 0 {
        return Err(JetsError::Ring(RingError::BadPrecision));
    }
    let mut sum: Option<CompletedClass> = None;
    let mut shallow = 0usize;
    for part in parts {
        if part.vdim() >= Vdim::Finite(n as i64) {
            continue;
        }
        shallow += 1;
        if shallow > limit {
            return Err(JetsError::DivergentFamily(limit));
        }
        sum = Some(match sum {
            None => part,
            Some(acc) => acc.try_add(&part)?,
        });
    }
    match sum {
        None => Ok(CompletedClass::zero(crate::ring::Realization::HodgeDeligne)
            .truncate(n)?),
        Some(acc) => Ok(acc.truncate(n)?),
    }
}

/// [`measure_disjoint_union_with_limit`] with the default family limit.
pub fn measure_disjoint_union(
    parts: impl IntoIterator<Item = CompletedClass>,
    n: u32,
) -> Result<CompletedClass, JetsError> {
    measure_disjoint_union_with_limit(parts, n, DEFAULT_FAMILY_LIMIT)
}

/// The lower bound (n+1)(d - y_dim) on the virtual dimension of the
/// level-n cylinder over jets of a y_dim-dimensional subvariety. Callers
/// use it to certify that arcs trapped in a positive-codimension
/// subvariety have measure zero in every truncation.
pub fn subvariety_vdim_bound(
    x: &StratifiedVariety,
    y_dim: i64,
    n: u32,
) -> Result<i64, JetsError> {
    let d = x.dim;
    if y_dim < 0 || y_dim >= d {
        return Err(JetsError::BadCodim { y_dim, d });
    }
    Ok((n as i64 + 1) * (d - y_dim))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{affine_space, ComponentSet, SncModel};
    use crate::ring::{Precision, Realization};

    fn hodge() -> Realization {
        Realization::HodgeDeligne
    }

    fn l_terms(terms: &[(i64, i64)]) -> CompletedClass {
        CompletedClass::from_l_terms(hodge(), terms.iter().copied())
    }

    fn a1_origin_model() -> SncModel {
        SncModel::new(
            affine_space(1),
            vec![("origin", 1)],
            [
                (ComponentSet::EMPTY, l_terms(&[(1, 1), (0, -1)])),
                (
                    ComponentSet::from_indices([0]),
                    CompletedClass::one(hodge()),
                ),
            ],
        )
    }

    #[test]
    fn jet_space_of_plane() {
        for m in 0..4 {
            assert_eq!(
                jet_space_class(&affine_space(2), m).unwrap(),
                CompletedClass::l_power(hodge(), 2 * (m as i64 + 1)),
            );
        }
    }

    #[test]
    fn level_one_jets_are_the_tangent_bundle() {
        let x = affine_space(3);
        let tangent = x.total_class().shift_l(3);
        assert_eq!(jet_space_class(&x, 1).unwrap(), tangent);
    }

    #[test]
    fn jet_space_of_projective_line() {
        let p1 = crate::bundled::projective_line();
        assert_eq!(
            jet_space_class(&p1, 2).unwrap(),
            l_terms(&[(3, 1), (2, 1)]) // (1 + L) * L^2
        );
    }

    #[test]
    fn oversized_cylinder_base_is_rejected() {
        let c = JetCylinder::new(affine_space(1), 0, l_terms(&[(2, 1)]));
        assert_eq!(
            cylinder_measure(&c),
            Err(JetsError::CylinderTooBig {
                weight: 4,
                bound: 2
            })
        );
    }

    #[test]
    fn measure_of_point_cylinder_in_line() {
        let c = JetCylinder::new(affine_space(1), 0, CompletedClass::one(hodge()));
        assert_eq!(
            cylinder_measure(&c).unwrap(),
            CompletedClass::l_power(hodge(), -1)
        );
    }

    #[test]
    fn full_jet_space_measures_to_motive_class() {
        let x = affine_space(2);
        for m in 0..3 {
            let c = JetCylinder::new(x.clone(), m, jet_space_class(&x, m).unwrap());
            assert_eq!(
                cylinder_measure(&c).unwrap(),
                crate::geometry::motive_class(&x).unwrap()
            );
        }
    }

    #[test]
    fn measure_is_stable_under_level_raise() {
        let c = JetCylinder::new(affine_space(2), 1, l_terms(&[(3, 1), (2, -1)]));
        assert_eq!(
            cylinder_measure(&c).unwrap(),
            cylinder_measure(&c.raise_level()).unwrap()
        );
    }

    #[test]
    fn contact_measure_on_the_line() {
        let snc = a1_origin_model();
        let cd = ContactDatum::new(&snc, [(0usize, 2u32)]);
        assert_eq!(
            contact_measure(&cd).unwrap(),
            l_terms(&[(-2, 1), (-3, -1)]) // (L-1) * L^-3
        );
    }

    #[test]
    fn empty_contact_is_the_open_cylinder() {
        let snc = a1_origin_model();
        let cd = ContactDatum::new(&snc, []);
        assert_eq!(
            contact_measure(&cd).unwrap(),
            l_terms(&[(0, 1), (-1, -1)]) // (L-1) * L^-1
        );
    }

    #[test]
    fn contact_measure_rejects_zero_order() {
        let snc = a1_origin_model();
        let cd = ContactDatum::new(&snc, [(0usize, 0u32)]);
        assert_eq!(contact_measure(&cd), Err(JetsError::InvalidContact));
    }

    #[test]
    fn finite_additivity_of_disjoint_union() {
        let c1 = l_terms(&[(-1, 1)]);
        let c2 = l_terms(&[(-2, 3)]);
        let sum = measure_disjoint_union([c1.clone(), c2.clone()], 6).unwrap();
        assert_eq!(sum, c1.try_add(&c2).unwrap().truncate(6).unwrap());
    }

    #[test]
    fn empty_union_is_zero() {
        let sum = measure_disjoint_union([], 4).unwrap();
        assert!(sum.is_zero());
        assert_eq!(sum.precision(), Precision::Finite(4));
    }

    #[test]
    fn divergent_family_is_rejected() {
        let parts = (0..100).map(|_| CompletedClass::one(hodge()));
        assert_eq!(
            measure_disjoint_union_with_limit(parts, 4, 10),
            Err(JetsError::DivergentFamily(10))
        );
    }

    #[test]
    fn vdim_bound_for_line_in_plane() {
        let a2 = affine_space(2);
        for n in 0..5 {
            assert_eq!(subvariety_vdim_bound(&a2, 1, n).unwrap(), n as i64 + 1);
        }
    }

    #[test]
    fn vdim_bound_for_point_in_space() {
        let a3 = affine_space(3);
        assert_eq!(subvariety_vdim_bound(&a3, 0, 2).unwrap(), 9);
    }

    #[test]
    fn vdim_bound_rejects_full_dimension() {
        let a2 = affine_space(2);
        assert_eq!(
            subvariety_vdim_bound(&a2, 2, 1),
            Err(JetsError::BadCodim { y_dim: 2, d: 2 })
        );
    }

    #[test]
    fn covering_bound_on_explicit_covers() {
        // The {ord >= k} cylinder in A^1 measures L^-k; cover it by the
        // exact-order strata {ord = k}, .., {ord = big - 1} plus the tail
        // cylinder {ord >= big}. The covered measure's vdim must dominate
        // the minimum over the pieces.
        let snc = a1_origin_model();
        for k in 1..=4u32 {
            for big in (k + 1)..=6 {
                let covered = l_terms(&[(-(k as i64), 1)]);
                let mut pieces: Vec<CompletedClass> = (k..big)
                    .map(|m| contact_measure(&ContactDatum::new(&snc, [(0usize, m)])).unwrap())
                    .collect();
                pieces.push(l_terms(&[(-(big as i64), 1)]));
                // The cover is exact here, so additivity holds too.
                let sum = measure_disjoint_union(pieces.clone(), 12).unwrap();
                assert!(sum.eq_class(&covered).unwrap());
                let min = pieces.iter().map(|p| p.vdim()).min().unwrap();
                assert!(covered.vdim() >= min, "k = {k}, big = {big}");
            }
        }
    }
}
