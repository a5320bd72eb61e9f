//! Annulus SLE(6) and critical percolation: elliptic special functions, the
//! driving diffusion, its backward equations, lattice Monte Carlo and the
//! eta-quotient formula for the probability of no circuit.
//!
//! The guide under `book/` walks through each module; its snippets run as
//! doctests of this crate.

pub mod annulus;
pub mod cardy;
pub mod compare;
pub mod diffusion;
pub mod elliptic;
pub mod error;
pub mod lattice;
pub mod mc;
pub mod pde;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/drift.md")]
    pub struct Drift;
    #[doc = include_str!("../../../book/src/annulus.md")]
    pub struct Annulus;
    #[doc = include_str!("../../../book/src/diffusion.md")]
    pub struct Diffusion;
    #[doc = include_str!("../../../book/src/pde.md")]
    pub struct Pde;
    #[doc = include_str!("../../../book/src/lattice.md")]
    pub struct Lattice;
    #[doc = include_str!("../../../book/src/cardy.md")]
    pub struct Cardy;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
