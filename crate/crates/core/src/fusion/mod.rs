//! Finite-dimensional bimodules and their relative tensor product, which
//! stands in for Connes fusion: twisted standard bimodules, the
//! isomorphisms `χ`, and the functor `𝒯`.

mod bimodule;
mod fuse;
mod twisted;

pub use bimodule::{check_bimodule, conjugate, Bimodule, Intertwiner};
pub use fuse::{
    associator, associator_between, b_inner, fuse, fuse_intertwiners, fuse_intertwiners_between,
    left_unitor, pentagon_residual, right_unitor, tensor_gram, triangle_residual, Fused,
};
pub use twisted::*;
