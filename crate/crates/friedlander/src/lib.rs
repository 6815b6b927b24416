//! Wave packets in the Friedlander half-plane model.
//!
//! The same solution is computed from its eigenmode expansion
//! ([`propagator`]) and from its sum over boundary reflections
//! ([`parametrix`]); [`norms`] measures it and [`exponents`] does the exact
//! arithmetic on Strichartz pairs. The book in `book/` walks through each part.

pub mod airy;
pub mod bump;
pub mod dd;
pub mod error;
pub mod exponents;
pub mod experiment;
pub mod field;
pub mod norms;
pub mod parametrix;
pub mod phase;
pub mod poisson;
pub mod profile;
pub mod propagator;
pub mod quadrature;
pub mod region;
pub mod spectrum;
pub mod wavepacket;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/airy.md")]
    mod airy {}
    #[doc = include_str!("../../../book/src/modes.md")]
    mod modes {}
    #[doc = include_str!("../../../book/src/reflections.md")]
    mod reflections {}
    #[doc = include_str!("../../../book/src/norms.md")]
    mod norms {}
    #[doc = include_str!("../../../book/src/exponents.md")]
    mod exponents {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
