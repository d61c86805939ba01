//! Exact motivic integration on jet spaces at the level of realized
//! Grothendieck classes.
//!
//! The library computes cylinder measures, order-function integrals, and
//! transformation-rule comparisons for simple-normal-crossing data, with
//! classes realized either as Hodge–Deligne polynomials or as finite-field
//! point counts. A brute-force enumeration oracle over prime fields
//! independently verifies points, jets, contact loci, blow-up fibrations,
//! and zeta functions.
//!
//! Modules:
//! - [`ring`]: completed classes, precision truncation, virtual dimension.
//! - [`rational`]: exact closed forms over products of (L^e - 1).
//! - [`geometry`]: stratified varieties, SNC divisors, blow-ups,
//!   K-equivalence pairs.
//! - [`jets`]: jet-space classes and cylinder/contact measures.
//! - [`integrator`]: the integral of L^{-ord_D}, the transformation-rule
//!   verifier, and the K-equivalence checker.
//! - [`counting`]: the finite-field oracle (data-parallel with a
//!   sequential fallback when built without the `parallel` feature).
//! - [`jsonio`]: canonical JSON for every payload and report.
//! - [`bundled`]: the example corpus.
//!
//! All values are immutable after construction and all operations are pure
//! functions, so everything is safe to share across threads.
//!
//! ```
//! use motivic::bundled;
//! use motivic::integrator::integrate_snc;
//!
//! // Integrate L^{-ord} against the divisor 1 * {0} on the affine line.
//! let result = integrate_snc(&bundled::a1_divisor(1), 6).unwrap();
//! assert_eq!(result.closed.to_string(), "(L^3 - L^2) * L^-1 / (L^2-1)");
//! assert_eq!(result.series.to_string(), "1 - L^-1 + L^-2 - L^-3 + L^-4 - L^-5 + O(L^-6)");
//!
//! // The finite-field oracle agrees with the class arithmetic.
//! use motivic::counting::{count_points, EnumerationBudget};
//! let node = bundled::node_threefold_scheme();
//! let points = count_points(&node.spec, 2, &EnumerationBudget::default()).unwrap();
//! assert_eq!(points, 10);
//! ```

pub mod bundled;
pub mod counting;
pub mod geometry;
pub mod integrator;
pub mod jets;
pub mod jsonio;
pub mod rational;
pub mod ring;

pub use ring::{CompletedClass, Precision, Realization, RingError, Vdim};
