//! Exact-arithmetic toolkit for Sturmian words, alternating-base digit
//! expansions, and certified orbit enclosures modulo one.
//!
//! Everything numeric is exact: words come from floor formulas evaluated in
//! real quadratic fields, series values are rational partial sums plus
//! worst-case tail bounds, and every emitted real is a certified enclosure.

pub mod error;
pub mod exact;
pub mod orbits;
pub mod series;
pub mod speclang;
pub mod sturmian;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
pub use exact::{QuadraticReal, Rat, RealEnclosure};
pub use words::{FiniteWord, WordStream};
