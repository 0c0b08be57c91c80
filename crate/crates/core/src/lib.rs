//! Exact arithmetic for elliptic divisibility sequences over Q: curve and
//! point models, denominator sequences, primitive-divisor certificates,
//! perfect-power scans, square-root descent in a number-field tower, Frey
//! curve construction, and exponent bounds derived from eigenform data.

pub mod arith;
pub mod bound;
pub mod cache;
pub mod curve;
pub mod eds;
pub mod error;
pub mod frey;
pub mod input;
pub mod modpoly;
pub mod poly;
pub mod tower;

pub use error::{Error, Result};
pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
