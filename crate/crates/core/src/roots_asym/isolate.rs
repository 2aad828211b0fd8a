//! Real root isolation for integer polynomials of low degree.
//!
//! Roots are bracketed by Sturm counts, refined by bisection and Newton
//! steps, and every returned bracket is validated by the exact sign of the
//! polynomial at its dyadic endpoints.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::forms::BinaryCubicForm;
use crate::realnum::{CertifiedReal, Dyadic};

/// Integer polynomial, constant term first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntPoly { coeffs }
    }

    /// `F(x, 1)`.
    pub fn from_form(f: &BinaryCubicForm) -> Self {
        Self::new(f.dehomogenize().to_vec())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn eval_dyadic(&self, x: &Dyadic) -> Dyadic {
        let mut acc = Dyadic::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&Dyadic::from_bigint(c));
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn sign_at(&self, x: &Dyadic) -> i32 {
        self.eval_dyadic(x).signum()
    }

    pub fn eval_ball(&self, x: &CertifiedReal) -> CertifiedReal {
        let prec = x.precision();
        let mut acc = CertifiedReal::from_int(0, prec);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &CertifiedReal::from_bigint(c, prec);
        }
        acc
    }

    pub fn derivative(&self) -> IntPoly {
        if self.degree() == 0 {
            return IntPoly::new(vec![BigInt::zero()]);
        }
        IntPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    /// `k` with every real root inside `(-2^k, 2^k)`.
    fn root_bound_log2(&self) -> i64 {
        let lead = self.coeffs.last().unwrap().abs();
        let max = self.coeffs[..self.degree()].iter().map(|c| c.abs()).max().unwrap_or_default();
        // Cauchy: |x| < 1 + max |c_i| / |c_n|
        let ratio = max.div_ceil(&lead) + 1u32;
        ratio.bits() as i64 + 1
    }

    /// Squarefree part, scaled to a primitive integer polynomial.
    pub fn squarefree(&self) -> IntPoly {
        let p = RatPoly::from_int(self);
        let g = RatPoly::gcd(&p, &RatPoly::from_int(&self.derivative()));
        if g.degree() == 0 {
            return self.clone();
        }
        p.div_exact(&g).to_primitive()
    }
}

/// Rational polynomial used for the Sturm chain.
#[derive(Clone, Debug)]
struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigRational::zero());
        }
        RatPoly { coeffs }
    }

    fn from_int(p: &IntPoly) -> Self {
        Self::new(p.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        let mut r = self.coeffs.clone();
        let dn = d.degree();
        let lead = d.coeffs[dn].clone();
        if r.len() <= dn {
            return (RatPoly::new(vec![]), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dn];
        for i in (0..q.len()).rev() {
            let f = &r[i + dn] / &lead;
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i + j] -= &f * dc;
            }
            q[i] = f;
        }
        r.truncate(dn.max(1));
        (RatPoly::new(q), RatPoly::new(r))
    }

    fn div_exact(&self, d: &RatPoly) -> RatPoly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero());
        q
    }

    fn gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a
    }

    fn neg(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    fn sign_at(&self, x: &BigRational) -> i32 {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        if acc.is_positive() {
            1
        } else if acc.is_negative() {
            -1
        } else {
            0
        }
    }

    fn to_primitive(&self) -> IntPoly {
        let den = self.coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
        IntPoly::new(ints.into_iter().map(|c| c / &g * &sign).collect())
    }
}

struct SturmChain(Vec<RatPoly>);

impl SturmChain {
    fn new(p: &IntPoly) -> Self {
        let p0 = RatPoly::from_int(p);
        let p1 = RatPoly::from_int(&p.derivative());
        let mut chain = vec![p0, p1];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(r.neg());
        }
        SturmChain(chain)
    }

    fn variations(&self, x: &Dyadic) -> usize {
        let x = x.to_rational();
        let signs: Vec<i32> = self.0.iter().map(|p| p.sign_at(&x)).filter(|&s| s != 0).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }
}

/// A bracket `[lo, hi]` around exactly one real root; `lo == hi` for an
/// exactly dyadic root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootBracket {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl RootBracket {
    fn point(x: Dyadic) -> Self {
        RootBracket { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn to_ball(&self, prec: u32) -> CertifiedReal {
        let mag = self.lo.abs().max(self.hi.abs()).magnitude().max(0);
        CertifiedReal::from_endpoints(&self.lo, &self.hi, prec + mag as u32 + 4)
    }
}

/// Disjoint isolating brackets for the distinct real roots of `p`, in
/// increasing order.
pub fn isolate_real_roots(p: &IntPoly) -> Result<Vec<RootBracket>> {
    if p.is_zero() {
        return Err(Error::InvalidInput("zero polynomial has no isolated roots".into()));
    }
    let sqf = p.squarefree();
    if sqf.degree() == 0 {
        return Ok(Vec::new());
    }
    let chain = SturmChain::new(&sqf);
    let k = sqf.root_bound_log2();
    let lo = Dyadic::pow2(k).neg();
    let hi = Dyadic::pow2(k);
    let mut out = Vec::new();
    // intervals (lo, hi] with their variation counts
    let mut stack = vec![(lo.clone(), chain.variations(&lo), hi.clone(), chain.variations(&hi))];
    while let Some((a, va, b, vb)) = stack.pop() {
        let count = va - vb;
        if count == 0 {
            continue;
        }
        if count == 1 {
            if sqf.sign_at(&b) == 0 {
                out.push(RootBracket::point(b));
            } else {
                out.push(RootBracket { lo: a, hi: b });
            }
            continue;
        }
        let m = a.add(&b).mul_pow2(-1);
        let vm = chain.variations(&m);
        stack.push((a, va, m.clone(), vm));
        stack.push((m, vm, b, vb));
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    // shrink each open bracket so both endpoints carry strict signs
    let mut brackets = Vec::with_capacity(out.len());
    for br in out {
        if br.lo == br.hi {
            brackets.push(br);
            continue;
        }
        let sl = sqf.sign_at(&br.lo);
        if sl != 0 {
            brackets.push(br);
            continue;
        }
        // lo is a neighbouring root; move inward until the sign is strict
        let mut lo = br.lo.clone();
        let mut step = br.width().mul_pow2(-1);
        loop {
            let cand = lo.add(&step);
            let s = sqf.sign_at(&cand);
            let inside = chain.variations(&cand) - chain.variations(&br.hi) == 1;
            if s != 0 && inside {
                lo = cand;
                break;
            }
            step = step.mul_pow2(-1);
        }
        brackets.push(RootBracket { lo, hi: br.hi });
    }
    Ok(brackets)
}

/// Narrow a sign-change bracket of a squarefree `p` until its width is at
/// most `2^-bits`.
pub fn refine_root(p: &IntPoly, bracket: &RootBracket, bits: i64) -> Result<RootBracket> {
    if bracket.lo == bracket.hi {
        return Ok(bracket.clone());
    }
    let target = Dyadic::pow2(-bits);
    let s_lo = p.sign_at(&bracket.lo);
    let s_hi = p.sign_at(&bracket.hi);
    if s_lo == 0 || s_hi == 0 || s_lo == s_hi {
        return Err(Error::PrecisionInsufficient("bracket endpoints lack a strict sign change".into()));
    }
    let mut lo = bracket.lo.clone();
    let mut hi = bracket.hi.clone();
    // bisection until Newton is safely convergent
    let scale = lo.abs().max(hi.abs()).magnitude();
    let newton_start = Dyadic::pow2(scale - 48).min(Dyadic::pow2(-8));
    while hi.sub(&lo) > target && hi.sub(&lo) > newton_start {
        let m = lo.add(&hi).mul_pow2(-1);
        match p.sign_at(&m) {
            0 => return Ok(RootBracket::point(m)),
            s if s == s_lo => lo = m,
            _ => hi = m,
        }
    }
    if hi.sub(&lo) <= target {
        return Ok(RootBracket { lo, hi });
    }
    if let Some(br) = newton(p, &lo, &hi, s_lo, bits) {
        return Ok(br);
    }
    while hi.sub(&lo) > target {
        let m = lo.add(&hi).mul_pow2(-1);
        match p.sign_at(&m) {
            0 => return Ok(RootBracket::point(m)),
            s if s == s_lo => lo = m,
            _ => hi = m,
        }
    }
    Ok(RootBracket { lo, hi })
}

/// Newton iteration with a final exact sign validation; `None` when the
/// validation fails.
fn newton(p: &IntPoly, lo: &Dyadic, hi: &Dyadic, s_lo: i32, bits: i64) -> Option<RootBracket> {
    let dp = p.derivative();
    let mut x = lo.add(hi).mul_pow2(-1);
    let mut w: i64 = 48;
    loop {
        w = (2 * w).min(bits + 16);
        for _ in 0..2 {
            let fx = p.eval_dyadic(&x);
            if fx.is_zero() {
                return Some(RootBracket::point(x));
            }
            let dx = dp.eval_dyadic(&x);
            if dx.is_zero() {
                return None;
            }
            let mag = x.magnitude().max(0);
            let (step, _) = Dyadic::div_to_bits(&fx, &dx, (w + mag + 8) as u32);
            x = x.sub(&step);
            // keep about w fractional bits
            let keep = (w + 8 + x.magnitude()).max(8) as u32;
            x = x.round_to_bits(keep).0;
        }
        if w >= bits + 16 {
            break;
        }
    }
    let eps = Dyadic::pow2(-bits - 1);
    let a = x.sub(&eps);
    let b = x.add(&eps);
    if a < *lo || b > *hi {
        return None;
    }
    let sa = p.sign_at(&a);
    let sb = p.sign_at(&b);
    if sa == s_lo && sb == -s_lo {
        Some(RootBracket { lo: a, hi: b })
    } else {
        None
    }
}

/// Enclosures of all distinct real roots of `F(x, 1)`, each of absolute
/// radius at most `2^-bits`.
pub fn real_root_enclosures(f: &BinaryCubicForm, bits: u32) -> Result<Vec<CertifiedReal>> {
    let p = IntPoly::from_form(f);
    if p.degree() == 0 {
        return Ok(Vec::new());
    }
    let sqf = p.squarefree();
    isolate_real_roots(&p)?
        .iter()
        .map(|br| refine_root(&sqf, br, bits as i64).map(|r| r.to_ball(bits)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> IntPoly {
        IntPoly::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    #[test]
    fn isolates_simple_cubic() {
        // (x - 1)(x - 2)(x + 3) = x^3 - 7x + 6
        let p = poly(&[6, -7, 0, 1]);
        let r = isolate_real_roots(&p).unwrap();
        assert_eq!(r.len(), 3);
        let mids: Vec<f64> = r.iter().map(|b| b.lo.add(&b.hi).mul_pow2(-1).to_f64()).collect();
        assert!(r.windows(2).all(|w| w[0].hi <= w[1].lo));
        let _ = mids;
        for br in &r {
            let rb = refine_root(&p, br, 60).unwrap();
            let m = rb.lo.add(&rb.hi).mul_pow2(-1).to_f64();
            assert!([-3.0, 1.0, 2.0].iter().any(|v| (v - m).abs() < 1e-12), "{m}");
        }
    }

    #[test]
    fn repeated_root_is_counted_once() {
        // (x - 1)^2 (x + 1)
        let p = poly(&[1, -1, -1, 1]);
        assert_eq!(isolate_real_roots(&p).unwrap().len(), 2);
        assert_eq!(p.squarefree(), poly(&[-1, 0, 1]));
    }

    #[test]
    fn single_real_root() {
        // x^3 - x + 1 has one real root near -1.3247
        let f = BinaryCubicForm::new(1, 0, -1, 1);
        let r = real_root_enclosures(&f, 100).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].to_f64() + 1.324_717_957_244_746).abs() < 1e-14);
        assert!(r[0].radius_below_pow2(-100));
    }

    #[test]
    fn refinement_validates_by_sign() {
        let p = poly(&[-2, 0, 1]);
        let br = &isolate_real_roots(&p).unwrap()[1];
        let r = refine_root(&p, br, 300).unwrap();
        assert!(r.width() <= Dyadic::pow2(-300));
        assert!(p.sign_at(&r.lo) < 0 && p.sign_at(&r.hi) > 0);
    }
}
