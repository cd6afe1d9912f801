//! Genus-one modular invariance checks for conformal full field algebras.
//!
//! Starting from finite fusion-category data (fusion rules, conformal
//! weights, F and R symbols) the library computes the S₃ action on
//! intertwiner spaces, the bilinear pairing and its dual bases, the α and β
//! monodromy matrices on genus-one two-point spaces, the one-point S-matrix,
//! and the modular invariance criteria for full field algebras. A q-series
//! engine evaluates characters and partition functions as an independent
//! numerical cross-check.

pub mod cli;
pub mod error;
pub mod exact;
pub mod full_field;
pub mod fusion;
pub mod io;
pub mod modular;
pub mod qseries;
pub mod symbols;

pub use error::{Error, Result};
