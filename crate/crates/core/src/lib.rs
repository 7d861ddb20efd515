//! Exact symbolic certification of higher-order derivation identities.
//!
//! The crate is organised bottom-up: [`arith`] and [`poly`] provide exact
//! arithmetic, [`jets`] the free differential setting in which derivations
//! act on formal symbols, and [`dclass`], [`cover`] and [`cosets`] build the
//! certified checks on top. [`parse`] reads operators and rational functions
//! from text, and [`suite`] runs the complete battery.

pub mod arith;
pub mod config;
pub mod cosets;
pub mod cover;
pub mod dclass;
pub mod error;
pub mod jets;
pub mod parse;
pub mod poly;
pub mod suite;

pub use config::Config;
pub use error::{Error, Result};
