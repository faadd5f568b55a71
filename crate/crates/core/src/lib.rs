//! Elliptic divisibility sequences over `k(T)` and `Q` with exact arithmetic.

pub mod algebra;
pub mod curve;
pub mod eds;
pub mod ffexp;
pub mod cli;
