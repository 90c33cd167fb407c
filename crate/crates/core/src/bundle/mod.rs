//! Finite covers and fibre products, principal bundles for finite groups,
//! and principal 2-group bundles with anchors, tensor products and
//! extension along homomorphisms.
//!
//! Quotients are computed by orbit enumeration; every class is named by its
//! lowest-index member.

mod principal;
mod space;
mod two_bundle;

pub use principal::{
    check_principal_bundle, extend_group, Extension, Orbits, PrincipalBundle, Pullback,
};
pub use space::{check_projections, Cover, FibreProduct, FiniteSpace};
pub use two_bundle::{
    associator, check_bundle_map, check_principal_two_bundle, extend_two_group, left_unitor, psi,
    right_unitor, tensor, Associator, PrincipalTwoBundle, Psi, Tensor, TwoExtension, TwoPullback,
};
