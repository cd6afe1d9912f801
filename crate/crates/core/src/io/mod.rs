//! Text formats: constant expressions, category files and character files.

pub mod constexpr;
pub mod format;
