//! Finite-dimensional *-algebras with a trace, the standard bimodule `L²(A)`,
//! the group `N(A)` of unitaries implementing pairs of automorphisms, finite
//! sub-2-groups of `𝒰(A)`, and unitary representations into them.

mod algebra;
pub mod carriers;
mod nelement;
mod representation;
mod standard;
mod ua;

pub use algebra::{AlgebraElement, Automorphism, StarAlgebra};
pub use nelement::{canonical_implementation, compose_in_ua, source_target, NElement};
pub use representation::{check_representation, Representation};
pub use standard::{check_standard_identities, StandardBimodule};
pub use ua::{build_ua, generate_ua, UnitaryTwoGroup, MAX_CARRIER};
