//! Sesquilinear Tate pairings on elliptic curves oriented by imaginary
//! quadratic orders, and pairing-based attacks on oriented isogeny problems.

pub mod arith;
pub mod attacks;
pub mod curve;
pub mod dlog;
pub mod error;
pub mod ffield;
pub mod linalg;
pub mod orientation;
pub mod par;
pub mod pairings;
pub mod poly;
pub mod qorder;

pub use error::{Error, Result};
