//! Exact numeric substrate: big rationals, real quadratic irrationals with
//! decidable order and floor, certified enclosures, continued fractions.

pub mod cf;
pub mod enclosure;
pub mod quadratic;
pub mod rational;

pub use cf::{cf_stream, convergents, detect_period, CfExpansion, CfIter};
pub use enclosure::RealEnclosure;
pub use quadratic::{golden_slope, QuadraticReal};
pub use rational::{dec_string, floor_int, pow2_neg, rat, rat_int, rat_pow, Rat};
