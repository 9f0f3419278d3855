//! Error types shared across the crate.
//!
//! Every validation failure names the violated invariant explicitly, so that
//! callers (and the CLI) can surface structured diagnostics instead of a
//! generic "invalid input".

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// `cmp_sq_threshold` was asked to compare against sqrt(p/q) with q = 0
    /// or p < 0.
    #[error("invalid threshold sqrt({p}/{q}): requires p >= 0 and q > 0")]
    InvalidThreshold { p: i64, q: i64 },

    /// A Gram matrix handed to the short-vector enumerator is not symmetric
    /// positive definite.
    #[error("matrix is not positive definite: {detail}")]
    NotPositiveDefinite { detail: String },

    /// A rank-16 Gram did not decompose into the root-component signature of
    /// either even unimodular class (two rank-8/240-root components, or one
    /// rank-16/480-root component).
    #[error("not a recognized rank-16 even unimodular lattice: {detail}")]
    NotRecognizedRank16 { detail: String },

    /// A sublattice handed to the plane classifier is not rank-two primitive
    /// isotropic.
    #[error("not a primitive isotropic rank-2 sublattice: {detail}")]
    InvalidPlane { detail: String },

    /// Generators of a sublattice basis are linearly dependent.
    #[error("sublattice generators are linearly dependent")]
    DependentGenerators,

    /// The period pairs to zero with y2, so no normalized chart representative
    /// exists.
    #[error("degenerate period: <omega, y2> = 0")]
    DegeneratePeriod,

    /// The period lies in the conjugate component of the domain.
    #[error(
        "period lies in the conjugate component (Im tau < 0); hint: conjugate the period vector"
    )]
    WrongComponent,

    /// A vector violates one of the two defining conditions of the period
    /// domain, or the positivity selecting its distinguished component.
    #[error("not a point of the positive period domain: {detail}")]
    NotInDomain { detail: String },

    /// `reduce_sl2` needs Im(tau) > 0.
    #[error("tau is not in the upper half-plane (Im <= 0)")]
    NotInUpperHalfPlane,

    /// A claimed oriented basis of the distinguished isotropic plane fails
    /// isotropy or primitivity.
    #[error("invalid isotropic-plane basis: {detail}")]
    InvalidBasis { detail: String },

    /// The pairing-bound gap requires a vector with nonzero pairing against
    /// the distinguished plane.
    #[error("vector lies in the orthogonal complement of the plane: (a1, a2) = (0, 0)")]
    VectorInVperp,

    /// The shear constraint R^t m + m^t R + m^t Q Q^t m = 0 fails.
    #[error("shear constraint R^t m + m^t R + m^t Q Q^t m = 0 violated: {detail}")]
    ShearConstraint { detail: String },

    /// The rank-16 block f does not preserve the Gram of the definite factor.
    #[error("f is not an isometry of the rank-16 factor: {detail}")]
    NotLambdaIsometry { detail: String },

    /// The assembled 20x20 matrix does not preserve the full Gram.
    #[error("matrix does not preserve the Gram form: {detail}")]
    GramPreservation { detail: String },

    /// det(m) = -1: the element stabilizes the plane but swaps the two
    /// components of the domain, so it is excluded from component-preserving
    /// APIs.
    #[error(
        "det(m) = -1: element is orientation-reversing (stabilizer, but not component-preserving)"
    )]
    OrientationReversing,

    /// A matrix expected to be unimodular is not.
    #[error("matrix is not unimodular: {detail}")]
    NotUnimodular { detail: String },

    /// A root set did not decompose into simply-laced components.
    #[error("not a root system: {detail}")]
    NotARootSystem { detail: String },

    /// A fiber-scan sample does not satisfy the large-complex-structure test.
    #[error("fiber scan sample is not a large-complex-structure point: {detail}")]
    NotLcsSample { detail: String },

    /// Root sets differ across fiber samples. The theory forbids this, so a
    /// mismatch signals an implementation bug (or bounds too small to see the
    /// full set).
    #[error("root sets differ across fiber samples: {detail}")]
    FiberMismatch { detail: String },

    /// Integer arithmetic left the i64 range while building an output value.
    #[error("integer overflow in {context}")]
    Overflow { context: &'static str },

    /// Malformed structured input (dimension mismatches and the like).
    #[error("invalid input: {detail}")]
    InvalidInput { detail: String },
}
