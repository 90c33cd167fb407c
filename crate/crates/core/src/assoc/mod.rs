//! The functor `Mod` from principal 2-bundles to bimodule bundles, its
//! monoidality, 2-Hilbert bundles and the associated 2-Hilbert bundle of a
//! gerbe, and refinements between 2-Hilbert bundles.

mod modfunctor;
mod refinement;
mod two_vector;

pub use modfunctor::{
    check_bimodule_bundle, mod_monoidality, mod_of_bundle, mod_of_morphism,
    morphism_square_residual, BimoduleBundle, ModBundle, Monoidality,
};
pub use refinement::{check_refinement, pullback_refinement, Refinement};
pub use two_vector::{associate, check_two_vector_bundle, TwoVectorBundle};

#[cfg(test)]
mod tests;
