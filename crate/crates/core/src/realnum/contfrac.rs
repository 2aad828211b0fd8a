use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::ball::CertifiedReal;
use super::dyadic::Dyadic;
use super::mag::Mag;
use crate::error::{Error, Result};

/// A continued-fraction convergent `p / q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Convergent {
    #[serde(with = "crate::json_int")]
    pub p: BigInt,
    #[serde(with = "crate::json_int")]
    pub q: BigInt,
    pub index: usize,
}

impl Convergent {
    /// `|x q - p| < 1/q` for the exact rational `x`.
    pub fn satisfies_law(&self, x: &BigRational) -> bool {
        let lhs = (x * BigRational::from_integer(self.q.clone()) - BigRational::from_integer(self.p.clone())).abs();
        lhs < BigRational::new(BigInt::one(), self.q.clone())
    }
}

/// A rational endpoint being expanded: `num / den` with `den > 0`.
struct Tail {
    num: BigInt,
    den: BigInt,
}

impl Tail {
    fn from_rational(r: &BigRational) -> Self {
        Tail { num: r.numer().clone(), den: r.denom().clone() }
    }

    fn floor(&self) -> BigInt {
        self.num.div_floor(&self.den)
    }

    /// Replace `x` by `1 / (x - a)`; false when `x == a`.
    fn advance(&mut self, a: &BigInt) -> bool {
        let rem = &self.num - a * &self.den;
        if rem.is_zero() {
            return false;
        }
        let den = std::mem::replace(&mut self.den, rem);
        self.num = den;
        if self.den.is_negative() {
            self.num = -&self.num;
            self.den = -&self.den;
        }
        true
    }
}

/// All convergents `p/q` of the exact value enclosed by `x` with `q <= bound`.
///
/// Both enclosure endpoints are expanded in lockstep; as long as their
/// partial quotients agree, every point in between shares them.
pub fn continued_fraction_convergents(x: &CertifiedReal, bound: &BigInt) -> Result<Vec<Convergent>> {
    if !bound.is_positive() {
        return Ok(Vec::new());
    }
    let mut lo = Tail::from_rational(&x.lower().to_rational());
    let mut hi = Tail::from_rational(&x.upper().to_rational());
    let (mut p_prev, mut q_prev) = (BigInt::zero(), BigInt::one());
    let (mut p_cur, mut q_cur) = (BigInt::one(), BigInt::zero());
    let mut out = Vec::new();
    loop {
        let index = out.len();
        let a_lo = lo.floor();
        let a_hi = hi.floor();
        if a_lo != a_hi {
            // the next denominator is at least min(a) * q_cur + q_prev
            let a_min = (&a_lo).min(&a_hi);
            if index > 0 && a_min * &q_cur + &q_prev > *bound {
                return Ok(out);
            }
            return Err(Error::PrecisionInsufficient(format!(
                "partial quotient {index} undetermined by enclosure"
            )));
        }
        let a = a_lo;
        let p_next = &a * &p_cur + &p_prev;
        let q_next = &a * &q_cur + &q_prev;
        if q_next > *bound {
            return Ok(out);
        }
        p_prev = std::mem::replace(&mut p_cur, p_next);
        q_prev = std::mem::replace(&mut q_cur, q_next);
        out.push(Convergent { p: p_cur.clone(), q: q_cur.clone(), index });
        let lo_more = lo.advance(&a);
        let hi_more = hi.advance(&a);
        match (lo_more, hi_more) {
            (false, false) => return Ok(out),
            (true, true) => {}
            _ => {
                // one endpoint terminated: any further convergent of the
                // other has denominator >= q_cur + q_prev
                if &q_cur + &q_prev > *bound {
                    return Ok(out);
                }
                return Err(Error::PrecisionInsufficient(format!(
                    "expansion terminates at one endpoint after quotient {index}"
                )));
            }
        }
    }
}

fn dist_to_integer(v: &Dyadic) -> Dyadic {
    let f = v.floor();
    let down = v.sub(&Dyadic::from_bigint(&f));
    let up = Dyadic::one().sub(&down);
    down.min(up)
}

/// Enclosure of `||x||`, the distance from `x` to the nearest integer.
pub fn nearest_integer_distance(x: &CertifiedReal) -> CertifiedReal {
    let prec = x.precision();
    let lo = x.lower();
    let hi = x.upper();
    let half = Dyadic::pow2(-1);
    if hi.sub(&lo) >= Dyadic::one() {
        return CertifiedReal::from_endpoints(&Dyadic::zero(), &half, prec);
    }
    let d_lo = dist_to_integer(&lo);
    let d_hi = dist_to_integer(&hi);
    let has_integer = hi.floor() >= lo.ceil();
    // half-integers k + 1/2 in [lo, hi] <=> integers in [lo - 1/2, hi - 1/2]
    let has_half = hi.sub(&half).floor() >= lo.sub(&half).ceil();
    let min = if has_integer { Dyadic::zero() } else { d_lo.clone().min(d_hi.clone()) };
    let max = if has_half { half } else { d_lo.max(d_hi) };
    let mid = min.add(&max).mul_pow2(-1);
    let rad = Mag::from_dyadic_up(&max.sub(&min).mul_pow2(-1));
    // the midpoint is exact here; keep all of its bits
    CertifiedReal::new(mid, rad, prec.max(1 + max.bits() as u32 + min.bits() as u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pq(c: &[Convergent]) -> Vec<(i64, i64)> {
        use num_traits::ToPrimitive;
        c.iter().map(|c| (c.p.to_i64().unwrap(), c.q.to_i64().unwrap())).collect()
    }

    #[test]
    fn terminating_rational() {
        let x = CertifiedReal::ratio(45, 16, 64);
        let c = continued_fraction_convergents(&x, &BigInt::from(100)).unwrap();
        assert_eq!(pq(&c), vec![(2, 1), (3, 1), (14, 5), (45, 16)]);
    }

    #[test]
    fn golden_ratio_gives_fibonacci() {
        // (1 + sqrt 5)/2 enclosed via a tight rational bracket
        let lo = BigRational::new(BigInt::from(1_618_033_988_749_894_848i64), BigInt::from(1_000_000_000_000_000_000i64));
        let hi = &lo + BigRational::new(BigInt::one(), BigInt::from(1_000_000_000_000_000_000i64));
        let x = CertifiedReal::from_interval(&lo, &hi, 128);
        let c = continued_fraction_convergents(&x, &BigInt::from(100)).unwrap();
        let fib = [1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144];
        let expect: Vec<(i64, i64)> = (0..11).map(|i| (fib[i + 1], fib[i])).collect();
        assert_eq!(pq(&c), expect);
    }

    #[test]
    fn wide_enclosure_is_reported() {
        let x = CertifiedReal::from_interval(&BigRational::new(3.into(), 1.into()), &BigRational::new(7.into(), 2.into()), 64);
        assert!(matches!(
            continued_fraction_convergents(&x, &BigInt::from(10)),
            Err(Error::PrecisionInsufficient(_))
        ));
    }

    #[test]
    fn distances() {
        let d = nearest_integer_distance(&CertifiedReal::ratio(37, 10, 128));
        assert!(d.contains_rational(&BigRational::new(3.into(), 10.into())));
        let d = nearest_integer_distance(&CertifiedReal::ratio(5, 2, 64));
        assert!(d.contains_rational(&BigRational::new(1.into(), 2.into())));
        assert!(d.is_exact());
        let d = nearest_integer_distance(&CertifiedReal::from_int(-7, 64));
        assert!(d.is_exact() && d.contains_zero());
    }

    #[test]
    fn straddling_integer_has_zero_lower_end() {
        let x = CertifiedReal::from_interval(&BigRational::new(19.into(), 10.into()), &BigRational::new(21.into(), 10.into()), 64);
        let d = nearest_integer_distance(&x);
        assert!(d.lower().is_zero());
        assert!(d.contains_rational(&BigRational::new(1.into(), 10.into())));
    }
}
