use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::mag::Mag;

/// An exact binary fraction `man * 2^exp`.
///
/// Kept normalized: the mantissa is odd, or zero with `exp == 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        if man.is_zero() {
            return Self::zero();
        }
        let tz = man.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Self { man, exp }
        } else {
            Self { man: man >> tz, exp: exp + tz as i64 }
        }
    }

    pub fn zero() -> Self {
        Self { man: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Self { man: BigInt::one(), exp: 0 }
    }

    pub fn from_int(v: i64) -> Self {
        Self::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        Self::new(v.clone(), 0)
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        Self { man: BigInt::one(), exp: k }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.man.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Bit length of the mantissa.
    pub fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// `m` such that `2^(m-1) <= |x| < 2^m`; `i64::MIN` for zero.
    pub fn magnitude(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.bits() as i64 + self.exp
        }
    }

    pub fn neg(&self) -> Self {
        Self { man: -&self.man, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        Self { man: self.man.abs(), exp: self.exp }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << (self.exp - e) as u64;
        let b = &other.man << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        // product of odd mantissas is odd
        Dyadic { man: &self.man * &other.man, exp: self.exp + other.exp }
    }

    pub fn mul_int(&self, k: &BigInt) -> Dyadic {
        Dyadic::new(&self.man * k, self.exp)
    }

    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { man: self.man.clone(), exp: self.exp + k }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.man << self.exp as u64)
        } else {
            BigRational::new(self.man.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as u64
        } else {
            self.man.div_floor(&(BigInt::one() << (-self.exp) as u64))
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(self.neg().floor())
    }

    /// Integer value if this dyadic is an integer.
    pub fn to_integer(&self) -> Option<BigInt> {
        if self.exp >= 0 {
            Some(&self.man << self.exp as u64)
        } else if self.is_zero() {
            Some(BigInt::zero())
        } else {
            None
        }
    }

    /// Truncate toward zero to at most `prec` mantissa bits. Returns the
    /// rounded value and an upper bound on the discarded part.
    pub fn round_to_bits(&self, prec: u32) -> (Dyadic, Mag) {
        let b = self.bits();
        if b <= prec as u64 {
            return (self.clone(), Mag::zero());
        }
        let s = b - prec as u64;
        let sign = self.man.sign();
        let kept = BigInt::from_biguint(sign, self.man.magnitude() >> s);
        let e = self.exp + s as i64;
        (Dyadic::new(kept, e), Mag::pow2(e))
    }

    /// Quotient `a / b` truncated to at least `prec` significant bits,
    /// together with an error bound.
    pub fn div_to_bits(a: &Dyadic, b: &Dyadic, prec: u32) -> (Dyadic, Mag) {
        assert!(!b.is_zero(), "division by exact zero");
        if a.is_zero() {
            return (Dyadic::zero(), Mag::zero());
        }
        let s = (prec as i64 + b.bits() as i64 - a.bits() as i64 + 2).max(0);
        let num = &a.man << s as u64;
        let (q, r) = num.div_rem(&b.man);
        let e = a.exp - s - b.exp;
        let err = if r.is_zero() { Mag::zero() } else { Mag::pow2(e) };
        (Dyadic::new(q, e), err)
    }

    /// Approximation of a rational with an error bound.
    pub fn from_rational(r: &BigRational, prec: u32) -> (Dyadic, Mag) {
        let n = Dyadic::new(r.numer().clone(), 0);
        let d = Dyadic::new(r.denom().clone(), 0);
        Dyadic::div_to_bits(&n, &d, prec)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = self.bits() as i64;
        let (m, e) = if b > 60 {
            let s = (b - 60) as u64;
            (BigInt::from_biguint(self.man.sign(), self.man.magnitude() >> s), self.exp + s as i64)
        } else {
            (self.man.clone(), self.exp)
        };
        let m = m.to_f64().unwrap_or(f64::NAN);
        m * 2f64.powi(e.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.signum(), other.signum()) {
            (a, b) if a != b => a.cmp(&b),
            _ => self.sub(other).signum().cmp(&0),
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.man, self.exp)
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::from_int(v)
    }
}
