//! Midpoint-radius enclosure arithmetic at caller-chosen precision.
//!
//! A [`CertifiedReal`] carries an exact dyadic midpoint and an upward-rounded
//! radius. Every operation returns an enclosure of the exact result; when
//! the sign of an operand cannot be decided (division, logarithm) the
//! operation fails with [`Error::IndeterminateSign`](crate::Error) and the
//! caller is expected to retry at higher precision.

mod ball;
mod contfrac;
mod decimal;
mod dyadic;
mod elementary;
mod mag;

pub use ball::CertifiedReal;
pub use contfrac::{continued_fraction_convergents, nearest_integer_distance, Convergent};
pub use decimal::{parse_integer, parse_rational, rational_to_string};
pub use dyadic::Dyadic;
pub use mag::Mag;

/// Working precision for Baker–Davenport work at bound `q_bound`:
/// about 40 guard digits beyond `q_bound^2`.
pub fn reduction_precision(q_bound: &num_bigint::BigInt) -> u32 {
    let digits = q_bound.to_string().len() as f64 - 1.0;
    (3.33 * (2.0 * digits + 40.0)).ceil() as u32
}
