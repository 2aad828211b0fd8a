//! Fixed-point series for the few transcendental constants the engine needs.
//!
//! All routines return an integer `v` and an error bound `err` (both in
//! units of `2^-w`) such that the true value lies in `[v - err, v + err]`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::dyadic::Dyadic;

/// `atanh(z)` for `z = num / den` in `[0, 1/3)`, at `w` fractional bits.
fn atanh_fixed(num: &BigInt, den: &BigInt, w: u64) -> (BigInt, u64) {
    let z: BigInt = (num << w) / den;
    let z2: BigInt = (&z * &z) >> w;
    let mut power = z;
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        sum += &power / BigInt::from(2 * k + 1);
        power = (&power * &z2) >> w;
        k += 1;
    }
    // truncated powers stay within 2 ulp of the truth, each quotient adds 1,
    // and the tail after `power` hits zero is below 3 ulp
    (sum, 4 * k + 8)
}

fn ln2_cache() -> &'static Mutex<HashMap<u64, (BigInt, u64)>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, (BigInt, u64)>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `ln 2 = 2 atanh(1/3)` at `w` fractional bits.
pub(crate) fn ln2_fixed(w: u64) -> (BigInt, u64) {
    if let Some(v) = ln2_cache().lock().unwrap().get(&w) {
        return v.clone();
    }
    let (s, e) = atanh_fixed(&BigInt::one(), &BigInt::from(3), w);
    let v = (s << 1u32, 2 * e);
    ln2_cache().lock().unwrap().insert(w, v.clone());
    v
}

/// Natural logarithm of a positive dyadic at `w` fractional bits.
pub(crate) fn ln_fixed(x: &Dyadic, w: u64) -> (BigInt, u64) {
    assert!(x.signum() > 0, "ln of nonpositive value");
    // x = 2^k * u with u in [1, 2)
    let k = x.magnitude() - 1;
    let u = x.mul_pow2(-k);
    let num = u.sub(&Dyadic::one());
    let den = u.add(&Dyadic::one());
    // (u-1)/(u+1) as a ratio of integers sharing the exponent of u
    let e = u.exponent().min(0);
    let to_int = |d: &Dyadic| -> BigInt {
        if d.is_zero() {
            BigInt::zero()
        } else {
            d.mantissa() << (d.exponent() - e) as u64
        }
    };
    let (s, se) = atanh_fixed(&to_int(&num), &to_int(&den), w);
    let (l2, l2e) = ln2_fixed(w);
    let value = (s << 1u32) + &l2 * BigInt::from(k);
    let err = 2 * se + l2e * k.unsigned_abs();
    (value, err)
}

/// Euler's number at `w` fractional bits.
pub(crate) fn e_fixed(w: u64) -> (BigInt, u64) {
    let mut term = BigInt::one() << w;
    let mut sum = term.clone();
    let mut k: u64 = 1;
    while !term.is_zero() {
        term /= BigInt::from(k);
        sum += &term;
        k += 1;
    }
    (sum, 3 * k + 4)
}

#[cfg(test)]
mod tests {
    use num_traits::Signed;
    use super::*;

    fn to_f64(v: &BigInt, w: u64) -> f64 {
        let shift = w.saturating_sub(60);
        let top: i128 = (v.abs() >> shift).try_into().unwrap();
        let f = top as f64 * 2f64.powi(-((w - shift) as i32));
        if v.is_negative() {
            -f
        } else {
            f
        }
    }

    #[test]
    fn ln2_matches_f64() {
        let (v, err) = ln2_fixed(80);
        assert!((to_f64(&v, 80) - std::f64::consts::LN_2).abs() < 1e-15);
        assert!(err < 1000);
    }

    #[test]
    fn ln_of_ten() {
        let (v, _) = ln_fixed(&Dyadic::from_int(10), 90);
        assert!((to_f64(&v, 90) - 10f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn ln_below_one() {
        let x = Dyadic::new(BigInt::from(3), -7); // 3/128
        let (v, _) = ln_fixed(&x, 90);
        assert!((to_f64(&v, 90) - (3.0f64 / 128.0).ln()).abs() < 1e-14);
    }

    #[test]
    fn e_matches_f64() {
        let (v, _) = e_fixed(90);
        assert!((to_f64(&v, 90) - std::f64::consts::E).abs() < 1e-15);
    }
}
