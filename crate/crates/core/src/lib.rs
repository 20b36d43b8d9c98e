//! Tame symbols, Parshin symbols and their logarithmic versions on the
//! projective line and on `P1 x P1`.
//!
//! Exact symbols live in [`curve`] and [`parshin`]; numeric path integrals
//! and truncated transport in [`paths`] and [`iterated`]; the logarithmic
//! symbols and their reciprocity checks in [`logsym`].

pub mod curve;
pub mod error;
pub mod exec;
pub mod fuzz;
pub mod iterated;
pub mod logsym;
pub mod parshin;
pub mod paths;
pub mod rational;
pub mod surface;

pub use error::{Error, Result};
pub use rational::{FactoredFunction1D, P1Point, Rat};
