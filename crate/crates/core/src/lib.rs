//! Finite models of strict 2-groups, crossed modules, principal 2-group
//! bundles, nonabelian bundle gerbes, bimodule fusion over finite-dimensional
//! *-algebras, and the associated 2-Hilbert bundle construction.
//!
//! Everything here is pure computation over small finite data: groups are
//! multiplication tables, algebras are direct sums of matrix blocks, bundles
//! live over finite discrete spaces. Every structural claim comes with an
//! exhaustive checker that returns a [`Report`] of the violated instances.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod assoc;
pub mod bundle;
mod error;
pub mod fusion;
pub mod gerbe;
pub mod numerics;
mod report;
pub mod staralg;
pub mod twogroup;

pub use error::{Error, Result};
pub use numerics::{CMatrix, CVector, Tolerance, C64};
pub use report::{Report, Violation};
