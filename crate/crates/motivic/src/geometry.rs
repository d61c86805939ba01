//! Declarative models of stratified varieties, simple-normal-crossing
//! divisors, blow-ups with discrepancy data, and K-equivalence pairs.
//!
//! Strata are user-declared together with their classes; nothing here does
//! symbolic scheme theory. The only derived geometry is the blow-up of
//! affine space along a point or a coordinate subspace, for which the class
//! bookkeeping is forced: [X'] = [X] - [Z] + [Z][P^{c-1}] and the
//! exceptional divisor carries discrepancy c - 1. Everything else is
//! supplied as data and validated, not computed.

use std::collections::BTreeMap;
use std::fmt;

use crate::ring::{CompletedClass, Precision, Realization, RingError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("variety `{0}` is not smooth")]
    NotSmooth(String),
    #[error("unsupported blow-up center: {0}")]
    UnsupportedCenter(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Outcome of a validation pass: violations are reported, not thrown.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn note(&mut self, violation: impl Into<String>) {
        self.violations.push(violation.into());
    }

    pub fn absorb(&mut self, prefix: &str, other: ValidationReport) {
        for v in other.violations {
            self.violations.push(format!("{prefix}: {v}"));
        }
    }
}

/// A locally closed piece of a variety with its exact class.
///
/// Empty strata carry the sentinel dim = -1 and the zero class, so that
/// partition sums stay total without case splits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    pub name: String,
    pub dim: i64,
    pub class: CompletedClass,
}

impl Stratum {
    pub fn new(name: impl Into<String>, dim: i64, class: CompletedClass) -> Self {
        Stratum {
            name: name.into(),
            dim,
            class,
        }
    }

    pub fn empty(name: impl Into<String>) -> Self {
        Stratum {
            name: name.into(),
            dim: -1,
            class: CompletedClass::zero(Realization::HodgeDeligne),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        if self.class.precision() != Precision::Exact {
            report.note(format!("stratum `{}`: class must be exact", self.name));
        }
        if self.class.is_zero() {
            if self.dim != -1 {
                report.note(format!(
                    "stratum `{}`: zero class requires the empty sentinel dim = -1",
                    self.name
                ));
            }
            return report;
        }
        if self.dim < 0 {
            report.note(format!(
                "stratum `{}`: nonempty stratum has negative dim",
                self.name
            ));
            return report;
        }
        if self.class.terms().any(|(&(a, b), _)| a < 0 || b < 0) {
            report.note(format!(
                "stratum `{}`: variety classes have nonnegative exponents",
                self.name
            ));
        }
        let top = self.class.top_weight().expect("nonzero class");
        if top != 2 * self.dim {
            report.note(format!(
                "stratum `{}`: top weight {top} does not match 2*dim = {}",
                self.name,
                2 * self.dim
            ));
        }
        report
    }
}

/// A variety presented as finitely many strata with classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratifiedVariety {
    pub name: String,
    pub dim: i64,
    pub smooth: bool,
    pub strata: Vec<Stratum>,
}

impl StratifiedVariety {
    pub fn new(
        name: impl Into<String>,
        dim: i64,
        smooth: bool,
        strata: Vec<Stratum>,
    ) -> Self {
        StratifiedVariety {
            name: name.into(),
            dim,
            smooth,
            strata,
        }
    }

    /// The total class [X], the partition sum over strata.
    pub fn total_class(&self) -> CompletedClass {
        let mut total = CompletedClass::zero(Realization::HodgeDeligne);
        for s in &self.strata {
            total = total.try_add(&s.class).expect("hodge strata");
        }
        total
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for s in &self.strata {
            report.absorb(&format!("variety `{}`", self.name), s.validate());
        }
        if self.strata.iter().any(|s| s.dim > self.dim) {
            report.note(format!(
                "variety `{}`: a stratum exceeds the declared dimension {}",
                self.name, self.dim
            ));
        }
        if !self.strata.iter().any(|s| s.dim == self.dim) {
            report.note(format!(
                "variety `{}`: no stratum of full dimension {}",
                self.name, self.dim
            ));
        }
        report
    }
}

/// The class 1 + L + ... + L^n of projective n-space.
pub fn projective_space_class(n: u32) -> CompletedClass {
    CompletedClass::from_l_terms(
        Realization::HodgeDeligne,
        (0..=n as i64).map(|k| (k, 1)),
    )
}

/// Affine d-space as a single-stratum smooth variety.
pub fn affine_space(d: u32) -> StratifiedVariety {
    let class = CompletedClass::l_power(Realization::HodgeDeligne, d as i64);
    StratifiedVariety::new(
        format!("A{d}"),
        d as i64,
        true,
        vec![Stratum::new("cell", d as i64, class)],
    )
}

/// The realized class of the motive of a smooth variety: [X] * L^-d.
pub fn motive_class(x: &StratifiedVariety) -> Result<CompletedClass, GeometryError> {
    if !x.smooth {
        return Err(GeometryError::NotSmooth(x.name.clone()));
    }
    Ok(x.total_class().shift_l(-x.dim))
}

/// A subset of SNC component indices, stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentSet(u32);

impl ComponentSet {
    pub const EMPTY: ComponentSet = ComponentSet(0);

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut mask = 0u32;
        for i in indices {
            assert!(i < 32, "at most 32 SNC components supported");
            mask |= 1 << i;
        }
        ComponentSet(mask)
    }

    pub fn contains(&self, i: usize) -> bool {
        i < 32 && self.0 & (1 << i) != 0
    }

    pub fn len(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..32).filter(|&i| self.contains(i))
    }

    /// All 2^n subsets of {0, .., n-1} in mask order.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = ComponentSet> {
        assert!(n < 32);
        (0u32..(1 << n)).map(ComponentSet)
    }
}

impl fmt::Display for ComponentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        let mut first = true;
        for i in self.iter() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
            first = false;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SncComponent {
    pub name: String,
    pub multiplicity: u32,
}

/// A simple-normal-crossing divisor on a smooth ambient variety, encoded by
/// component multiplicities and the classes of the open strata [D_J°]
/// (points lying on exactly the components in J; J = ∅ is X minus D).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SncModel {
    pub ambient: StratifiedVariety,
    pub components: Vec<SncComponent>,
    pub strata: BTreeMap<ComponentSet, CompletedClass>,
}

impl SncModel {
    pub fn new(
        ambient: StratifiedVariety,
        components: Vec<(impl Into<String>, u32)>,
        strata: impl IntoIterator<Item = (ComponentSet, CompletedClass)>,
    ) -> Self {
        SncModel {
            ambient,
            components: components
                .into_iter()
                .map(|(name, multiplicity)| SncComponent {
                    name: name.into(),
                    multiplicity,
                })
                .collect(),
            strata: strata.into_iter().collect(),
        }
    }

    /// The divisor-free model: no components, one stratum [X].
    pub fn empty_divisor(ambient: StratifiedVariety) -> Self {
        let total = ambient.total_class();
        SncModel {
            ambient,
            components: Vec::new(),
            strata: BTreeMap::from([(ComponentSet::EMPTY, total)]),
        }
    }

    pub fn stratum_class(&self, set: ComponentSet) -> Option<&CompletedClass> {
        self.strata.get(&set)
    }

    pub fn multiplicity(&self, i: usize) -> u32 {
        self.components[i].multiplicity
    }

    /// Index of the component with the given name, if present.
    pub fn component_index(&self, name: &str) -> Option<usize> {
        self.components.iter().position(|c| c.name == name)
    }

    /// Largest top weight among nonzero strata classes; 0 for the empty model.
    pub fn max_stratum_weight(&self) -> i64 {
        self.strata
            .values()
            .filter_map(|c| c.top_weight())
            .max()
            .unwrap_or(0)
    }
}

/// Check every SNC model invariant, reporting all violations.
pub fn validate_snc(m: &SncModel) -> ValidationReport {
    let mut report = ValidationReport::default();
    report.absorb("ambient", m.ambient.validate());
    if !m.ambient.smooth {
        report.note("ambient variety must be smooth");
    }
    for c in &m.components {
        if c.multiplicity == 0 {
            report.note(format!("component `{}`: multiplicity must be >= 1", c.name));
        }
    }
    let n = m.components.len();
    if n >= 32 {
        report.note("at most 31 components supported");
        return report;
    }
    let mut sum = CompletedClass::zero(Realization::HodgeDeligne);
    for set in ComponentSet::all_subsets(n) {
        match m.strata.get(&set) {
            None => report.note(format!("missing subset entry {set}")),
            Some(class) => {
                sum = sum.try_add(class).expect("hodge strata");
                if class.terms().any(|(&(a, b), _)| a < 0 || b < 0) {
                    report.note(format!(
                        "stratum {set}: variety classes have nonnegative exponents"
                    ));
                }
                if let Some(top) = class.top_weight() {
                    let expected = 2 * (m.ambient.dim - set.len() as i64);
                    if top != expected {
                        report.note(format!(
                            "stratum {set}: top weight {top}, expected {expected}"
                        ));
                    }
                }
            }
        }
    }
    for set in m.strata.keys() {
        if set.iter().any(|i| i >= n) {
            report.note(format!("stratum {set} names a component out of range"));
        }
    }
    let total = m.ambient.total_class();
    if sum != total {
        report.note(format!(
            "partition sum {} does not equal the ambient class {}",
            sum, total
        ));
    }
    report
}

/// Supported blow-up centers inside affine space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlowupCenter {
    Point,
    /// A coordinate linear subspace of the given dimension.
    CoordinateSubspace { dim: u32 },
}

/// A blow-up of a smooth base with its class bookkeeping and discrepancy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupSpec {
    pub base: StratifiedVariety,
    pub center_dim: i64,
    pub center_class: CompletedClass,
    pub codim: i64,
    pub produced: StratifiedVariety,
    pub exceptional_class: CompletedClass,
    /// k_E, the multiplicity of the relative canonical divisor along E.
    pub discrepancy: i64,
}

impl BlowupSpec {
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        report.absorb("base", self.base.validate());
        report.absorb("produced", self.produced.validate());
        let c = self.codim;
        if c < 2 {
            report.note("blow-up center must have codimension >= 2");
            return report;
        }
        let proj = projective_space_class((c - 1) as u32);
        let expected_e = self.center_class.try_mul(&proj).expect("hodge");
        if self.exceptional_class != expected_e {
            report.note("[E] differs from [Z]*[P^{c-1}]");
        }
        let expected_total = self
            .base
            .total_class()
            .try_sub(&self.center_class)
            .and_then(|t| t.try_add(&expected_e))
            .expect("hodge");
        if self.produced.total_class() != expected_total {
            report.note("[X'] differs from [X] - [Z] + [Z]*[P^{c-1}]");
        }
        if self.discrepancy != c - 1 {
            report.note(format!(
                "discrepancy {} differs from codim - 1 = {}",
                self.discrepancy,
                c - 1
            ));
        }
        report
    }
}

/// Blow up affine space along a point or a coordinate subspace.
///
/// The base must be A^d presented with total class L^d; any other center or
/// base is rejected, and richer birational models must be supplied as
/// explicit SNC data instead.
pub fn blowup_classes(
    base: &StratifiedVariety,
    center: BlowupCenter,
) -> Result<BlowupSpec, GeometryError> {
    if !base.smooth {
        return Err(GeometryError::NotSmooth(base.name.clone()));
    }
    let d = base.dim;
    let l_d = CompletedClass::l_power(Realization::HodgeDeligne, d);
    if base.total_class() != l_d || d < 0 {
        return Err(GeometryError::UnsupportedCenter(format!(
            "base `{}` is not affine space presented as L^{d}",
            base.name
        )));
    }
    let z = match center {
        BlowupCenter::Point => 0i64,
        BlowupCenter::CoordinateSubspace { dim } => dim as i64,
    };
    let c = d - z;
    if c < 2 {
        return Err(GeometryError::UnsupportedCenter(format!(
            "center of dimension {z} in A^{d} has codimension {c} < 2"
        )));
    }
    let center_class = CompletedClass::l_power(Realization::HodgeDeligne, z);
    let exceptional_class = center_class
        .try_mul(&projective_space_class((c - 1) as u32))
        .expect("hodge");
    let off_center = l_d.try_sub(&center_class).expect("hodge");
    let produced = StratifiedVariety::new(
        format!("bl-{}-z{}", base.name, z),
        d,
        true,
        vec![
            Stratum::new("off_center", d, off_center),
            Stratum::new("exceptional", d - 1, exceptional_class.clone()),
        ],
    );
    Ok(BlowupSpec {
        base: base.clone(),
        center_dim: z,
        center_class,
        codim: c,
        produced,
        exceptional_class,
        discrepancy: c - 1,
    })
}

/// Two varieties with a common smooth roof and the SNC models of the two
/// relative canonical divisors on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KEquivalencePair {
    pub left: StratifiedVariety,
    pub right: StratifiedVariety,
    pub resolution: StratifiedVariety,
    pub k_left: SncModel,
    pub k_right: SncModel,
    /// Declares that each side is the transformation-rule image of the
    /// empty divisor, so the integrals must equal the motive classes.
    pub crepant_complete: bool,
}

impl KEquivalencePair {
    /// Set iff the two relative canonical divisors are identical
    /// component-by-component (same supports and multiplicities).
    pub fn is_k_equivalent(&self) -> bool {
        self.k_left.components == self.k_right.components
            && self.k_left.strata == self.k_right.strata
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        report.absorb("k_left", validate_snc(&self.k_left));
        report.absorb("k_right", validate_snc(&self.k_right));
        report.absorb("resolution", self.resolution.validate());
        if !self.resolution.smooth {
            report.note("resolution must be smooth");
        }
        let total = self.resolution.total_class();
        if self.k_left.ambient.total_class() != total
            || self.k_right.ambient.total_class() != total
        {
            report.note("k_left and k_right must share the resolution as ambient");
        }
        report
    }
}
