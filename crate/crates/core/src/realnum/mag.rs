use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::dyadic::Dyadic;

/// Nonnegative radius `man * 2^exp` with a 64-bit mantissa.
///
/// Every operation rounds upward, so a `Mag` is always a valid upper bound
/// for the quantity it stands for. Nonzero mantissas have bit 63 set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mag {
    man: u64,
    exp: i64,
}

const TOP: u64 = 1 << 63;

impl Mag {
    pub const fn zero() -> Self {
        Mag { man: 0, exp: 0 }
    }

    pub fn pow2(k: i64) -> Self {
        Mag { man: TOP, exp: k - 63 }
    }

    pub fn is_zero(&self) -> bool {
        self.man == 0
    }

    fn from_u128_up(m: u128, e: i64) -> Self {
        if m == 0 {
            return Mag::zero();
        }
        let bits = 128 - m.leading_zeros() as i64;
        if bits <= 64 {
            let shift = 64 - bits;
            return Mag { man: (m as u64) << shift, exp: e - shift };
        }
        let s = (bits - 64) as u32;
        let inexact = m & ((1u128 << s) - 1) != 0;
        let mut q = (m >> s) + inexact as u128;
        let mut e = e + s as i64;
        if q >> 64 != 0 {
            q >>= 1;
            e += 1;
        }
        Mag { man: q as u64, exp: e }
    }

    fn from_u128_down(m: u128, e: i64) -> Self {
        if m == 0 {
            return Mag::zero();
        }
        let bits = 128 - m.leading_zeros() as i64;
        if bits <= 64 {
            let shift = 64 - bits;
            return Mag { man: (m as u64) << shift, exp: e - shift };
        }
        let s = (bits - 64) as u32;
        Mag { man: (m >> s) as u64, exp: e + s as i64 }
    }

    fn top_bits(d: &Dyadic) -> (u128, i64, bool) {
        let mag = d.mantissa().magnitude();
        let b = mag.bits();
        if b <= 64 {
            (mag.to_u64().unwrap() as u128, d.exponent(), false)
        } else {
            let s = b - 64;
            // normalized mantissas are odd, so truncation always drops bits
            ((mag >> s).to_u64().unwrap() as u128, d.exponent() + s as i64, true)
        }
    }

    /// Upper bound for `|d|`.
    pub fn from_dyadic_up(d: &Dyadic) -> Self {
        if d.is_zero() {
            return Mag::zero();
        }
        let (m, e, inexact) = Self::top_bits(d);
        Self::from_u128_up(m + inexact as u128, e)
    }

    /// Lower bound for `|d|`.
    pub fn from_dyadic_down(d: &Dyadic) -> Self {
        if d.is_zero() {
            return Mag::zero();
        }
        let (m, e, _) = Self::top_bits(d);
        Self::from_u128_down(m, e)
    }

    pub fn to_dyadic(&self) -> Dyadic {
        Dyadic::new(BigInt::from(self.man), self.exp)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_dyadic().to_f64()
    }

    pub fn add(&self, other: &Mag) -> Mag {
        if self.is_zero() {
            return *other;
        }
        if other.is_zero() {
            return *self;
        }
        let (big, small) = if self.exp >= other.exp { (self, other) } else { (other, self) };
        let diff = big.exp - small.exp;
        if diff >= 64 {
            // small < 2^(small.exp + 64) <= one unit of big
            return Self::from_u128_up(big.man as u128 + 1, big.exp);
        }
        let m = ((big.man as u128) << diff) + small.man as u128;
        Self::from_u128_up(m, small.exp)
    }

    pub fn mul(&self, other: &Mag) -> Mag {
        if self.is_zero() || other.is_zero() {
            return Mag::zero();
        }
        Self::from_u128_up(self.man as u128 * other.man as u128, self.exp + other.exp)
    }

    /// Upper bound for `self / lower` where `lower` bounds the divisor from below.
    pub fn div(&self, lower: &Mag) -> Mag {
        assert!(!lower.is_zero(), "Mag division by zero");
        if self.is_zero() {
            return Mag::zero();
        }
        let num = (self.man as u128) << 64;
        let d = lower.man as u128;
        let q = num / d + (num % d != 0) as u128;
        Self::from_u128_up(q, self.exp - 64 - lower.exp)
    }

    pub fn mul_pow2(&self, k: i64) -> Mag {
        if self.is_zero() {
            return *self;
        }
        Mag { man: self.man, exp: self.exp + k }
    }

    pub fn max(self, other: Mag) -> Mag {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// `floor(log2(self))`, or `i64::MIN` for zero.
    pub fn log2_floor(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + 63
        }
    }
}

impl Ord for Mag {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self.exp.cmp(&other.exp).then(self.man.cmp(&other.man)),
        }
    }
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn dy(v: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(v), e)
    }

    #[test]
    fn rounding_directions() {
        let big = Dyadic::new((BigInt::from(1) << 100u32) + 1, 0);
        assert!(Mag::from_dyadic_up(&big).to_dyadic() >= big);
        assert!(Mag::from_dyadic_down(&big).to_dyadic() <= big);
    }

    #[test]
    fn add_far_apart_still_bounds() {
        let a = Mag::from_dyadic_up(&dy(1, 0));
        let b = Mag::from_dyadic_up(&dy(1, -200));
        let s = a.add(&b);
        assert!(s.to_dyadic() >= dy(1, 0).add(&dy(1, -200)));
    }

    #[test]
    fn div_rounds_up() {
        let one = Mag::from_dyadic_up(&dy(1, 0));
        let three = Mag::from_dyadic_down(&dy(3, 0));
        let q = one.div(&three).to_dyadic();
        assert!(q.mul(&dy(3, 0)) >= dy(1, 0));
    }

    #[test]
    fn ordering_matches_values() {
        let a = Mag::from_dyadic_up(&dy(5, -3));
        let b = Mag::from_dyadic_up(&dy(3, -2));
        assert!(a < b);
        assert!(Mag::zero() < a);
    }
}
