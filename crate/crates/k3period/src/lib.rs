//! Exact-arithmetic computations on the period domain attached to the even
//! unimodular lattice of signature (2, 18).
//!
//! The crate fixes a splitting of that lattice into two hyperbolic pairs and
//! a rank-16 negative definite factor (either E8+E8 or the Barnes-Wall
//! lattice D16+), and provides:
//!
//! * exact scalars over Q and Q(i), with sign-safe comparisons against
//!   sqrt(p/q) thresholds ([`scalar`]);
//! * integral lattice machinery: pairing evaluation, Smith/Hermite normal
//!   forms, short-vector enumeration, primitive isotropic planes and the
//!   classification of their rank-16 quotients ([`lattice`], [`linalg`]);
//! * the tube-domain and Narain coordinate charts of the positive period
//!   component, reduction to the modular fundamental domain, and the
//!   large-complex-structure predicate
//!   `u2 > max(rho(tau), 2/sqrt(3))` ([`period`]);
//! * the parabolic stabilizer of the distinguished isotropic plane: element
//!   validation, composition, the 20x20 matrix action, and closed-form
//!   coordinate transformations ([`parabolic`]);
//! * root systems orthogonal to a period point, their unique decomposition
//!   into A/D/E components, and the associated Kodaira fiber-type candidates
//!   ([`ade`]).
//!
//! Every predicate is decided in exact arithmetic; floats appear only in
//! clearly marked convenience values.
//!
//! ```
//! use k3period::{lcs_test, Frame, GaussianRational, NarainCoords, Rational};
//!
//! let frame = Frame::e8e8();
//! let tau = GaussianRational::i();
//! let u_tilde = GaussianRational::new(Rational::zero(), Rational::from_int(2));
//! let z = vec![GaussianRational::zero(); 16];
//! let point = NarainCoords::new(tau, u_tilde, z, frame)?;
//! let report = lcs_test(&point);
//! assert!(report.is_lcs);
//! assert_eq!(report.rho, Rational::one());
//! # Ok::<(), k3period::Error>(())
//! ```

pub mod ade;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod parabolic;
pub mod period;
pub mod sample;
pub mod scalar;

pub use ade::{
    decompose_root_system, fiber_constancy_scan, find_roots_general, kodaira_candidates,
    roots_in_vperp, AdeLabel, RootComponent, RootSystemReport,
};
pub use error::{Error, Result};
pub use lattice::{
    classify_isotropic_plane, classify_rank16, enumerate_short_vectors,
    is_primitive_isotropic_rank2, lambda_pair, lambda_roots, orthogonal_complement, pair, Frame,
    LambdaKind, LatticeElement, SublatticeBasis,
};
pub use parabolic::{
    sample_in_class, sample_parabolic, shear_from_pair, GeneralIsometry, GeneratorClass,
    ParabolicIsometry, SampleBounds,
};
pub use period::{
    apply_nilpotent, lcs_test, narain_from_omega, narain_from_tube, omega_from_narain,
    omega_from_tube, pairing_lower_bound_gap, reduce_sl2, tau_u2_from_basis, tube_from_narain,
    tube_from_omega, Binding, LcsReport, NarainCoords, PairingBoundGap, PeriodVector,
    ReductionResult, TubeCoords,
};
pub use scalar::{cmp_sq_threshold, GaussianRational, Rational};

#[cfg(test)]
mod thread_safety {
    use super::*;

    fn assert_send_sync<T: Send + Sync>() {}

    // All domain values are immutable after construction and shareable
    // across threads.
    #[test]
    fn domain_types_are_send_and_sync() {
        assert_send_sync::<Rational>();
        assert_send_sync::<GaussianRational>();
        assert_send_sync::<Frame>();
        assert_send_sync::<LatticeElement>();
        assert_send_sync::<SublatticeBasis>();
        assert_send_sync::<PeriodVector>();
        assert_send_sync::<TubeCoords>();
        assert_send_sync::<NarainCoords>();
        assert_send_sync::<ParabolicIsometry>();
        assert_send_sync::<GeneralIsometry>();
        assert_send_sync::<RootSystemReport>();
        assert_send_sync::<LcsReport>();
    }
}
