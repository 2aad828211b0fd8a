use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::dyadic::Dyadic;
use super::elementary;
use super::mag::Mag;
use crate::error::{Error, Result};

/// Guard bits used by the fixed-point series.
const SERIES_GUARD: u32 = 24;

/// A real number known to lie in `[mid - rad, mid + rad]`.
///
/// `prec` is the number of significant bits kept in the midpoint after each
/// operation; anything discarded is added to the radius.
#[derive(Clone, PartialEq, Eq)]
pub struct CertifiedReal {
    mid: Dyadic,
    rad: Mag,
    prec: u32,
}

impl CertifiedReal {
    fn finish(mid: Dyadic, rad: Mag, prec: u32) -> Self {
        let (mid, err) = mid.round_to_bits(prec);
        CertifiedReal { mid, rad: rad.add(&err), prec }
    }

    pub fn new(mid: Dyadic, rad: Mag, prec: u32) -> Self {
        Self::finish(mid, rad, prec)
    }

    pub fn exact(mid: Dyadic, prec: u32) -> Self {
        Self::finish(mid, Mag::zero(), prec)
    }

    pub fn from_int(v: i64, prec: u32) -> Self {
        Self::exact(Dyadic::from_int(v), prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Self::exact(Dyadic::from_bigint(v), prec)
    }

    /// Enclosure of an exact rational: exact when dyadic, otherwise
    /// with relative radius about `2^(1-prec)`.
    pub fn enclose_rational(r: &BigRational, prec: u32) -> Self {
        let (mid, err) = Dyadic::from_rational(r, prec);
        Self::finish(mid, err, prec)
    }

    /// `p / q` for small integers.
    pub fn ratio(p: i64, q: i64, prec: u32) -> Self {
        Self::enclose_rational(&BigRational::new(p.into(), q.into()), prec)
    }

    /// Enclosure of the whole closed interval `[lo, hi]`.
    pub fn from_interval(lo: &BigRational, hi: &BigRational, prec: u32) -> Self {
        assert!(lo <= hi, "empty interval");
        let two = BigRational::from_integer(2.into());
        let center = (lo + hi) / &two;
        let half = (hi - lo) / &two;
        let c = Self::enclose_rational(&center, prec);
        let (h, herr) = Dyadic::from_rational(&half, 64);
        let rad = c.rad.add(&Mag::from_dyadic_up(&h)).add(&herr);
        CertifiedReal { mid: c.mid, rad, prec }
    }

    /// Enclosure of the interval spanned by two dyadic endpoints.
    pub fn from_endpoints(lo: &Dyadic, hi: &Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "empty interval");
        let sum = lo.add(hi).mul_pow2(-1);
        let half = hi.sub(lo).mul_pow2(-1);
        Self::finish(sum, Mag::from_dyadic_up(&half), prec)
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> Mag {
        self.rad
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        Self::finish(self.mid.clone(), self.rad, prec)
    }

    /// Enlarge the radius by `extra`.
    pub fn inflate(&self, extra: Mag) -> Self {
        CertifiedReal { mid: self.mid.clone(), rad: self.rad.add(&extra), prec: self.prec }
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&self.rad.to_dyadic())
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add(&self.rad.to_dyadic())
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.lower().signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.upper().signum() < 0
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_positive() && !self.is_negative()
    }

    /// Sign if determined by the enclosure.
    pub fn sign(&self) -> Result<i32> {
        if self.is_positive() {
            Ok(1)
        } else if self.is_negative() {
            Ok(-1)
        } else if self.mid.is_zero() && self.rad.is_zero() {
            Ok(0)
        } else {
            Err(Error::IndeterminateSign("enclosure straddles zero"))
        }
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        let d = (r - self.mid.to_rational()).abs();
        d <= self.rad.to_dyadic().to_rational()
    }

    pub fn contains_dyadic(&self, d: &Dyadic) -> bool {
        self.mid.sub(d).abs() <= self.rad.to_dyadic()
    }

    pub fn overlaps(&self, other: &CertifiedReal) -> bool {
        self.mid.sub(&other.mid).abs() <= self.rad.add(&other.rad).to_dyadic()
    }

    /// True when the whole enclosure lies in the open interval `(lo, hi)`.
    pub fn inside_open(&self, lo: &BigRational, hi: &BigRational) -> bool {
        &self.lower().to_rational() > lo && &self.upper().to_rational() < hi
    }

    /// True when `other` contains every point of `self`.
    pub fn subset_of(&self, other: &CertifiedReal) -> bool {
        other.lower() <= self.lower() && self.upper() <= other.upper()
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn abs(&self) -> Result<Self> {
        match self.sign()? {
            -1 => Ok(-self),
            _ => Ok(self.clone()),
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        CertifiedReal { mid: self.mid.mul_pow2(k), rad: self.rad.mul_pow2(k), prec: self.prec }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        let rad = self.rad.mul(&Mag::from_dyadic_up(&Dyadic::from_bigint(k)));
        Self::finish(self.mid.mul_int(k), rad, self.prec)
    }

    pub fn div(&self, other: &CertifiedReal) -> Result<Self> {
        let prec = self.prec.max(other.prec);
        let den_lower = other.mid.abs().sub(&other.rad.to_dyadic());
        if den_lower.signum() <= 0 {
            return Err(Error::IndeterminateSign("divisor enclosure touches zero"));
        }
        let (q, qerr) = Dyadic::div_to_bits(&self.mid, &other.mid, prec + 2);
        let q_abs = Mag::from_dyadic_up(&q).add(&qerr);
        let num = self.rad.add(&q_abs.mul(&other.rad));
        let rad = num.div(&Mag::from_dyadic_down(&den_lower)).add(&qerr);
        Ok(Self::finish(q, rad, prec))
    }

    pub fn recip(&self) -> Result<Self> {
        CertifiedReal::from_int(1, self.prec).div(self)
    }

    pub fn sqr(&self) -> Self {
        self * self
    }

    /// Integer power; negative exponents require a nonzero enclosure.
    pub fn powi(&self, k: i64) -> Result<Self> {
        let mut base = self.clone();
        let mut e = k.unsigned_abs();
        let mut acc = CertifiedReal::from_int(1, self.prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        if k < 0 {
            acc.recip()
        } else {
            Ok(acc)
        }
    }

    /// Certified natural logarithm; the enclosure must be strictly positive.
    pub fn ln(&self) -> Result<Self> {
        let lower = self.lower();
        if lower.signum() <= 0 {
            return Err(Error::IndeterminateSign("logarithm of enclosure touching zero"));
        }
        let w = (self.prec + SERIES_GUARD) as u64;
        let (v, err) = elementary::ln_fixed(&self.mid, w);
        let series_err = Mag::from_dyadic_up(&Dyadic::new(BigInt::from(err), -(w as i64)));
        // |ln y - ln mid| <= |y - mid| / min(y)
        let spread = self.rad.div(&Mag::from_dyadic_down(&lower));
        let mid = Dyadic::new(v, -(w as i64));
        Ok(Self::finish(mid, series_err.add(&spread), self.prec))
    }

    pub fn ln2(prec: u32) -> Self {
        let w = (prec + SERIES_GUARD) as u64;
        let (v, err) = elementary::ln2_fixed(w);
        let rad = Mag::from_dyadic_up(&Dyadic::new(BigInt::from(err), -(w as i64)));
        Self::finish(Dyadic::new(v, -(w as i64)), rad, prec)
    }

    /// Euler's number.
    pub fn e(prec: u32) -> Self {
        let w = (prec + SERIES_GUARD) as u64;
        let (v, err) = elementary::e_fixed(w);
        let rad = Mag::from_dyadic_up(&Dyadic::new(BigInt::from(err), -(w as i64)));
        Self::finish(Dyadic::new(v, -(w as i64)), rad, prec)
    }

    /// Radius bounded by `2^k`.
    pub fn radius_below_pow2(&self, k: i64) -> bool {
        self.rad <= Mag::pow2(k) && (self.rad.is_zero() || self.rad.log2_floor() < k)
    }

    /// Radius strictly below a positive rational.
    pub fn radius_below(&self, bound: &BigRational) -> bool {
        &self.rad.to_dyadic().to_rational() < bound
    }

    /// Hull of two enclosures.
    pub fn hull(&self, other: &CertifiedReal) -> Self {
        let lo = self.lower().min(other.lower());
        let hi = self.upper().max(other.upper());
        Self::from_endpoints(&lo, &hi, self.prec.max(other.prec))
    }

    pub fn max_of(&self, other: &CertifiedReal) -> Self {
        let lo = self.lower().max(other.lower());
        let hi = self.upper().max(other.upper());
        Self::from_endpoints(&lo, &hi, self.prec.max(other.prec))
    }
}

impl<'a> Add<&'a CertifiedReal> for &'a CertifiedReal {
    type Output = CertifiedReal;
    fn add(self, rhs: &CertifiedReal) -> CertifiedReal {
        CertifiedReal::finish(self.mid.add(&rhs.mid), self.rad.add(&rhs.rad), self.prec.max(rhs.prec))
    }
}

impl<'a> Sub<&'a CertifiedReal> for &'a CertifiedReal {
    type Output = CertifiedReal;
    fn sub(self, rhs: &CertifiedReal) -> CertifiedReal {
        CertifiedReal::finish(self.mid.sub(&rhs.mid), self.rad.add(&rhs.rad), self.prec.max(rhs.prec))
    }
}

impl<'a> Mul<&'a CertifiedReal> for &'a CertifiedReal {
    type Output = CertifiedReal;
    fn mul(self, rhs: &CertifiedReal) -> CertifiedReal {
        let a = Mag::from_dyadic_up(&self.mid);
        let b = Mag::from_dyadic_up(&rhs.mid);
        let rad = a.mul(&rhs.rad).add(&b.mul(&self.rad)).add(&self.rad.mul(&rhs.rad));
        CertifiedReal::finish(self.mid.mul(&rhs.mid), rad, self.prec.max(rhs.prec))
    }
}

impl Neg for &CertifiedReal {
    type Output = CertifiedReal;
    fn neg(self) -> CertifiedReal {
        CertifiedReal { mid: self.mid.neg(), rad: self.rad, prec: self.prec }
    }
}

impl Add for CertifiedReal {
    type Output = CertifiedReal;
    fn add(self, rhs: CertifiedReal) -> CertifiedReal {
        &self + &rhs
    }
}

impl Sub for CertifiedReal {
    type Output = CertifiedReal;
    fn sub(self, rhs: CertifiedReal) -> CertifiedReal {
        &self - &rhs
    }
}

impl Mul for CertifiedReal {
    type Output = CertifiedReal;
    fn mul(self, rhs: CertifiedReal) -> CertifiedReal {
        &self * &rhs
    }
}

impl Neg for CertifiedReal {
    type Output = CertifiedReal;
    fn neg(self) -> CertifiedReal {
        -&self
    }
}

impl fmt::Debug for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for CertifiedReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CertifiedReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn third_at_64_bits() {
        let x = CertifiedReal::ratio(1, 3, 64);
        assert!(x.contains_rational(&rat(1, 3)));
        assert!(x.radius_below_pow2(-62));
    }

    #[test]
    fn zero_is_exact() {
        let z = CertifiedReal::enclose_rational(&BigRational::zero(), 64);
        assert!(z.is_exact());
        assert_eq!(z.sign().unwrap(), 0);
    }

    #[test]
    fn tiny_rational_is_tight() {
        let r = BigRational::new(1.into(), num_traits::pow(BigInt::from(10), 120));
        let x = CertifiedReal::enclose_rational(&r, 512);
        assert!(x.contains_rational(&r));
        let width = x.rad.to_dyadic().to_rational() * BigRational::from_integer(2.into());
        let limit = BigRational::new(1.into(), num_traits::pow(BigInt::from(10), 150));
        assert!(width < limit);
    }

    #[test]
    fn log_of_one_contains_zero() {
        let l = CertifiedReal::from_int(1, 128).ln().unwrap();
        assert!(l.contains_zero());
    }

    #[test]
    fn log_of_e_contains_one() {
        let l = CertifiedReal::e(200).ln().unwrap();
        assert!(l.contains_rational(&BigRational::one()));
        assert!(l.radius_below_pow2(-180));
    }

    #[test]
    fn log_rejects_nonpositive() {
        let x = CertifiedReal::from_endpoints(&Dyadic::from_int(-1), &Dyadic::from_int(1), 64);
        assert!(matches!(x.ln(), Err(Error::IndeterminateSign(_))));
        assert!(x.recip().is_err());
    }

    #[test]
    fn ln_of_product_is_sum_of_logs() {
        let p = 256;
        let a = CertifiedReal::ratio(7, 3, p);
        let b = CertifiedReal::ratio(11, 5, p);
        let lhs = (&a * &b).ln().unwrap();
        let rhs = &a.ln().unwrap() + &b.ln().unwrap();
        assert!(lhs.overlaps(&rhs));
        assert!(lhs.radius_below_pow2(-240));
    }

    #[test]
    fn powi_negative() {
        let x = CertifiedReal::from_int(3, 128);
        let y = x.powi(-2).unwrap();
        assert!(y.contains_rational(&rat(1, 9)));
    }

    #[test]
    fn doubling_precision_never_widens() {
        let expr = |p: u32| {
            let a = CertifiedReal::ratio(22, 7, p);
            let b = CertifiedReal::ratio(355, 113, p);
            (&a - &b).div(&a.ln().unwrap()).unwrap()
        };
        let mut last = expr(32).rad();
        for p in [64, 128, 256, 512] {
            let r = expr(p).rad();
            assert!(r <= last);
            last = r;
        }
    }
}
