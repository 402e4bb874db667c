//! Exact sofic approximations for actions of free groups.
//!
//! The crate is organised bottom-up:
//!
//! * [`word`]: reduced words in a free group `F_k`.
//! * [`perm`]: permutations stored as image arrays.
//! * [`stallings`]: folded subgroup graphs, coset tables, Hall completion and
//!   normal cores.
//! * [`actions`]: coset, biregular and restricted actions, canonical points,
//!   separation targets and orbit decomposition.
//! * [`builder`]: construction of certificates (finite-index base case, lift
//!   through a separating subgroup, orbit products, biregular pipeline).
//! * [`verifier`]: an independent checker for certificates, a brute-force
//!   witness search and mutation tooling for negative tests.
//! * [`certificate`]: the JSON file format.
//!
//! All arithmetic is exact. Built certificates always carry a genuine
//! homomorphism `φ: G → Sym(A)` with `S = A`, so they verify at `ε = 0`.

pub mod actions;
pub mod builder;
pub mod certificate;
mod error;
pub mod perm;
pub mod stallings;
pub mod verifier;
pub mod word;

pub use actions::{
    orbit_partition, separation_targets, Action, ActionSpec, GroupElement, GroupShape, OrbitClass,
    Point, SeparationTargets, Stabilizer,
};
pub use builder::{
    approximate, biregular_approx, build_finite_index_approx, chabouty_lift, combine_orbits,
    restrict_approx, BaseApprox, BuildOptions, Certificate, OrbitWitness, Provenance,
    SeparatorTrace, SoficApproximation, Strategy,
};
pub use certificate::ActionJson;
pub use error::{Error, Result};
pub use perm::Perm;
pub use stallings::{core_graph, hall_completion, CosetTable, ImageGroup, StallingsGraph};
pub use verifier::{
    brute_force_witness, check_orbit_witness, invalidating_mutations, verify, verify_certificate,
    verify_certificate_file, Clause, Mutation, MutationKind, VerificationReport, Verdict,
};
pub use word::Word;

/// Exact non-negative rationals used for `ε`, Hamming distances and ratios.
pub type Rational = num_rational::Ratio<u64>;
