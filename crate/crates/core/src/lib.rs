//! Certified verification engine for the cubic Thue equations
//! `F_{3,t}(x, y) = x^3 - (t^4 - t) x^2 y + (t^5 - 2t^2) x y^2 + y^3 = 1`.
//!
//! The crate reproduces every computational step of the solution of this
//! family: certified root expansions and their error constants, recovery of
//! unit exponents, lower bounds for linear forms in logarithms, the absolute
//! bound on `t`, Baker–Davenport reduction over a range of `t`, and bounded
//! exhaustive search for small parameters and sporadic forms.
//!
//! All real-number reasoning goes through [`realnum::CertifiedReal`]; no
//! floating-point value is ever used to accept a claim.

pub mod bounds;
mod error;
pub mod exponents;
pub mod forms;
pub(crate) mod json_int;
pub mod realnum;
pub mod reduction;
pub mod roots_asym;
pub mod search;
pub mod sweep;

pub use error::{Error, Result};

/// Version tag written into every JSON record.
pub const SCHEMA_VERSION: u32 = 1;
