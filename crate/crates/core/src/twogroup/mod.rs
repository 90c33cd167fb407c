//! Finite groups, crossed modules and strict 2-groups.

mod crossed;
mod group;
mod hom;
mod two_group;

pub use crossed::{check_crossed_module, CrossedModule};
pub use group::{check_homomorphism, FiniteGroup};
pub use hom::{check_two_group_hom, TwoGroupHom};
pub use two_group::{
    check_round_trip, check_two_group_parts, crossed_module_from_two_group,
    two_group_from_crossed_module, verify_calculus, TwoGroup,
};
