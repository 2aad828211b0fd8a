//! Solution types, unit exponents and their growth bounds.
//!
//! Every solution of `F_{3,t}(x, y) = 1` satisfies
//! `x - y θ = ± (t - θ)^n θ^(-m)` in `Z[θ]`. The exponents are recovered
//! numerically and then certified both in every real embedding and by exact
//! arithmetic in `Z[θ]`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{f3, Solution};
use crate::realnum::CertifiedReal;
use crate::roots_asym::{default_precision, isolate_roots, RootTriple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SolutionType {
    Small,
    TypeI,
    TypeII,
    TypeIII,
    None,
}

impl SolutionType {
    /// Root index `i` with `x/y` near `θ_i`.
    pub fn root_index(self) -> Option<usize> {
        match self {
            SolutionType::TypeI => Some(1),
            SolutionType::TypeII => Some(2),
            SolutionType::TypeIII => Some(3),
            _ => None,
        }
    }
}

impl fmt::Display for SolutionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SolutionType::Small => "small",
            SolutionType::TypeI => "I",
            SolutionType::TypeII => "II",
            SolutionType::TypeIII => "III",
            SolutionType::None => "none",
        };
        f.write_str(s)
    }
}

fn rat(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// The interval `I_i` for a given `|y|`, as open rational endpoints.
pub fn type_interval(kind: SolutionType, t: i64, abs_y: &BigInt) -> Option<(BigRational, BigRational)> {
    let tb = BigInt::from(t);
    let t5 = num_traits::pow(tb.clone(), 5);
    let t8 = num_traits::pow(tb.clone(), 8);
    let wide = rat(113, 100);
    let inner = BigRational::one() - rat(1, abs_y * abs_y * abs_y);
    let tr = BigRational::from_integer(tb.clone());
    match kind {
        SolutionType::TypeI => Some((-&wide / BigRational::from_integer(t5.clone()), -inner / BigRational::from_integer(t5))),
        SolutionType::TypeII => {
            let t5r = BigRational::from_integer(t5);
            Some((&tr + inner / &t5r, &tr + wide / &t5r))
        }
        SolutionType::TypeIII => {
            let top = BigRational::from_integer(num_traits::pow(tb.clone(), 4) - 2 * &tb);
            let t8r = BigRational::from_integer(t8);
            Some((&top - wide / &t8r, &top - inner / &t8r))
        }
        _ => None,
    }
}

/// Classify `(x, y)` by the position of `x/y`; exact rational comparisons.
pub fn classify(t: i64, x: &BigInt, y: &BigInt) -> SolutionType {
    let ay = y.abs();
    if ay <= BigInt::one() {
        return SolutionType::Small;
    }
    let q = rat(x.clone(), y.clone());
    for kind in [SolutionType::TypeI, SolutionType::TypeII, SolutionType::TypeIII] {
        let (lo, hi) = type_interval(kind, t, &ay).expect("typed interval");
        if lo < q && q < hi {
            return kind;
        }
    }
    SolutionType::None
}

/// Element `a + b θ + c θ^2` of `Z[θ]`, `θ` a root of `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZTheta {
    pub coords: [BigInt; 3],
    b: BigInt,
    c: BigInt,
}

impl ZTheta {
    fn new(t: i64, coords: [BigInt; 3]) -> Self {
        let tb = BigInt::from(t);
        let t2 = &tb * &tb;
        let t4 = &t2 * &t2;
        // θ^3 = B θ^2 - C θ - 1
        let b = &t4 - &tb;
        let c = &t4 * &tb - 2 * &t2;
        ZTheta { coords, b, c }
    }

    fn one(t: i64) -> Self {
        Self::new(t, [BigInt::one(), BigInt::zero(), BigInt::zero()])
    }

    fn mul(&self, o: &ZTheta) -> ZTheta {
        let a = &self.coords;
        let e = &o.coords;
        let mut prod = vec![BigInt::zero(); 5];
        for i in 0..3 {
            for j in 0..3 {
                prod[i + j] += &a[i] * &e[j];
            }
        }
        // reduce θ^4 then θ^3
        for k in [4usize, 3] {
            let top = std::mem::take(&mut prod[k]);
            if top.is_zero() {
                continue;
            }
            prod[k - 1] += &top * &self.b;
            prod[k - 2] -= &top * &self.c;
            prod[k - 3] -= &top;
        }
        ZTheta { coords: [prod[0].clone(), prod[1].clone(), prod[2].clone()], b: self.b.clone(), c: self.c.clone() }
    }

    fn pow(&self, mut e: u64) -> ZTheta {
        let mut acc = ZTheta { coords: [BigInt::one(), BigInt::zero(), BigInt::zero()], b: self.b.clone(), c: self.c.clone() };
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// `(-1)^δ (t - θ)^n θ^(-m)` in `Z[θ]`.
pub fn unit_element(t: i64, delta: u8, n: i64, m: i64) -> ZTheta {
    let tb = BigInt::from(t);
    let z = |c: [BigInt; 3]| ZTheta::new(t, c);
    let theta = z([BigInt::zero(), BigInt::one(), BigInt::zero()]);
    let unit = ZTheta::one(t);
    let t_minus = z([tb.clone(), -BigInt::one(), BigInt::zero()]);
    // (t - θ)^(-1) = θ^2 + (2t - t^4) θ
    let t_minus_inv = z([BigInt::zero(), 2 * &tb - num_traits::pow(tb.clone(), 4), BigInt::one()]);
    // θ^(-1) = -θ^2 + B θ - C
    let theta_inv = z([-unit.c.clone(), unit.b.clone(), -BigInt::one()]);
    let a = if n >= 0 { t_minus.pow(n as u64) } else { t_minus_inv.pow(n.unsigned_abs()) };
    let b = if m >= 0 { theta_inv.pow(m as u64) } else { theta.pow(m.unsigned_abs()) };
    let mut v = a.mul(&b);
    if delta == 1 {
        v.coords = v.coords.map(|c| -c);
    }
    v
}

/// Exponents with `x - y θ = (-1)^δ (t - θ)^n θ^(-m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentPair {
    pub delta: u8,
    pub n: i64,
    pub m: i64,
    /// Largest distance of the real solution of the linear system from the
    /// accepted integers.
    pub residual: CertifiedReal,
}

fn solve_pair(logs: &[CertifiedReal; 3], big_l: &[CertifiedReal; 3], big_m: &[CertifiedReal; 3], i: usize, j: usize) -> Result<(CertifiedReal, CertifiedReal)> {
    // v_k = n L_k - m M_k for k = i, j
    let det = &(&big_m[i] * &big_l[j]) - &(&big_l[i] * &big_m[j]);
    let n = (&(&big_m[i] * &logs[j]) - &(&logs[i] * &big_m[j])).div(&det)?;
    let m = (&(&big_l[i] * &logs[j]) - &(&big_l[j] * &logs[i])).div(&det)?;
    Ok((n, m))
}

/// Nearest integer when the enclosure lies within `tol` of one.
fn round_within(v: &CertifiedReal, tol: &BigRational) -> Option<(i64, CertifiedReal)> {
    let mid = v.mid().to_rational();
    let k = mid.round().to_integer();
    let d = v - &CertifiedReal::from_bigint(&k, v.precision());
    let d = if d.is_negative() { -d } else { d };
    if d.upper().to_rational() < *tol && -d.lower().to_rational() < *tol {
        Some((k.to_i64()?, d))
    } else {
        None
    }
}

/// Certify `x - y θ_i ∈ (-1)^δ (t - θ_i)^n θ_i^(-m)` in every embedding.
fn embeddings_agree(roots: &RootTriple, x: &BigInt, y: &BigInt, delta: u8, n: i64, m: i64) -> Result<bool> {
    let p = roots.theta1.precision();
    let t = CertifiedReal::from_int(roots.t, p);
    for th in roots.roots() {
        let lhs = &CertifiedReal::from_bigint(x, p) - &(&CertifiedReal::from_bigint(y, p) * th);
        let mut rhs = &(&t - th).powi(n)? * &th.powi(-m)?;
        if delta == 1 {
            rhs = -rhs;
        }
        if !lhs.overlaps(&rhs) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn recover_at(t: i64, x: &BigInt, y: &BigInt, prec: u32) -> Result<ExponentPair> {
    let roots = isolate_roots(t, prec)?;
    let p = roots.theta1.precision();
    let tb = CertifiedReal::from_int(t, p);
    let mut logs = Vec::with_capacity(3);
    let mut big_l = Vec::with_capacity(3);
    let mut big_m = Vec::with_capacity(3);
    for th in roots.roots() {
        let v = &CertifiedReal::from_bigint(x, p) - &(&CertifiedReal::from_bigint(y, p) * th);
        logs.push(v.abs()?.ln()?);
        big_l.push((&tb - th).abs()?.ln()?);
        big_m.push(th.abs()?.ln()?);
    }
    let logs: [CertifiedReal; 3] = logs.try_into().unwrap();
    let big_l: [CertifiedReal; 3] = big_l.try_into().unwrap();
    let big_m: [CertifiedReal; 3] = big_m.try_into().unwrap();
    let tol = rat(1, 100);
    let mut last_err = Error::PrecisionInsufficient("no index pair yields integral exponents".into());
    for (i, j) in [(1, 2), (0, 2), (0, 1)] {
        let (n_real, m_real) = match solve_pair(&logs, &big_l, &big_m, i, j) {
            Ok(v) => v,
            Err(e) => {
                last_err = e;
                continue;
            }
        };
        let (Some((n, dn)), Some((m, dm))) = (round_within(&n_real, &tol), round_within(&m_real, &tol)) else {
            continue;
        };
        // sign of x - y θ_1 fixes δ
        let th = &roots.theta1;
        let v = &CertifiedReal::from_bigint(x, p) - &(&CertifiedReal::from_bigint(y, p) * th);
        let s_v = v.sign()?;
        let s_l = (&tb - th).sign()?;
        let s_m = th.sign()?;
        let unit_sign = if n.rem_euclid(2) == 1 { s_l } else { 1 } * if m.rem_euclid(2) == 1 { s_m } else { 1 };
        let delta = if s_v == unit_sign { 0 } else { 1 };
        if !embeddings_agree(&roots, x, y, delta, n, m)? {
            return Err(Error::VerificationFailed(format!("exponents ({n}, {m}) do not match every embedding")));
        }
        if n.unsigned_abs() + m.unsigned_abs() <= 4096 {
            let u = unit_element(t, delta, n, m);
            if u.coords != [x.clone(), -y.clone(), BigInt::zero()] {
                return Err(Error::VerificationFailed(format!("exponents ({n}, {m}) fail the exact check in Z[θ]")));
            }
        }
        let residual = dn.max_of(&dm);
        return Ok(ExponentPair { delta, n, m, residual });
    }
    Err(last_err)
}

/// Recover `(δ, n, m)` for a solution of `F_{3,t}(x, y) = 1`.
pub fn recover_exponents(t: i64, x: &BigInt, y: &BigInt) -> Result<ExponentPair> {
    if t < 2 {
        return Err(Error::InvalidInput("exponent recovery needs t >= 2".into()));
    }
    if f3(t).evaluate(x, y) != BigInt::one() {
        return Err(Error::InvalidInput(format!("({x}, {y}) is not a solution at t = {t}")));
    }
    // x - y θ can be as small as 1/y^2
    let extra = 4 * (x.bits().max(y.bits()) as u32);
    let mut prec = default_precision(t) + extra;
    let mut last = None;
    for _ in 0..4 {
        match recover_at(t, x, y, prec) {
            Err(e) if e.is_precision() => last = Some(e),
            other => return other,
        }
        prec *= 2;
    }
    Err(last.unwrap_or_else(|| Error::PrecisionInsufficient("exponent recovery".into())))
}

/// Rebuild `(x, y)` from exponents by exact arithmetic in `Z[θ]`.
pub fn reconstruct(t: i64, pair: &ExponentPair) -> Result<Solution> {
    let u = unit_element(t, pair.delta, pair.n, pair.m);
    let [a, b, c] = u.coords;
    if !c.is_zero() {
        return Err(Error::VerificationFailed("unit has a θ^2 component".into()));
    }
    Ok(Solution { x: a, y: -b })
}

/// `k = 3n - m - 1` (I), `k = n - 3m - 1` (II), `s = n + m` (III).
pub fn k_relation(kind: SolutionType, n: i64, m: i64) -> Result<i64> {
    match kind {
        SolutionType::TypeI => Ok(3 * n - m - 1),
        SolutionType::TypeII => Ok(n - 3 * m - 1),
        SolutionType::TypeIII => Ok(n + m),
        other => Err(Error::InvalidInput(format!("no exponent relation for solutions of type {other}"))),
    }
}

/// Lower bound on `max(|m|, |n|)` for a non-special solution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthBound {
    pub kind: SolutionType,
    pub t: i64,
    pub bound: CertifiedReal,
}

/// `(coefficient, power of t)` in `c t^k ln t`.
pub fn growth_coefficients(kind: SolutionType) -> Result<(BigRational, u32)> {
    match kind {
        SolutionType::TypeI => Ok((rat(86, 10), 6)),
        SolutionType::TypeII => Ok((rat(35, 10), 3)),
        SolutionType::TypeIII => Ok((rat(98, 10), 3)),
        other => Err(Error::InvalidInput(format!("no growth bound for type {other}"))),
    }
}

/// `8.6 t^6 ln t` (I), `3.5 t^3 ln t` (II), `9.8 t^3 ln t` (III).
pub fn growth_lower_bound(kind: SolutionType, t: i64) -> Result<GrowthBound> {
    if t < 10 {
        return Err(Error::InvalidInput("growth bounds are stated for t >= 10".into()));
    }
    let (c, k) = growth_coefficients(kind)?;
    let prec = 128;
    let tk = BigRational::from_integer(num_traits::pow(BigInt::from(t), k as usize));
    let coef = CertifiedReal::enclose_rational(&(c * tk), prec);
    let bound = &coef * &CertifiedReal::from_int(t, prec).ln()?;
    Ok(GrowthBound { kind, t, bound })
}

/// The solution attached to the degenerate exponents of each type.
pub fn special_exponent_solutions(kind: SolutionType, t: i64) -> Result<Solution> {
    let tb = BigInt::from(t);
    let p = |k: usize| num_traits::pow(tb.clone(), k);
    let s = match kind {
        SolutionType::TypeI => Solution::new(1 - p(3), p(8) - 3 * p(5) + 3 * p(2)),
        SolutionType::TypeII => Solution::new(tb.clone(), 1),
        SolutionType::TypeIII => Solution::new(p(4) - 2 * &tb, 1),
        other => return Err(Error::InvalidInput(format!("no special solution for type {other}"))),
    };
    if f3(t).evaluate(&s.x, &s.y) != BigInt::one() {
        return Err(Error::VerificationFailed(format!("{s} does not solve the equation at t = {t}")));
    }
    Ok(s)
}

/// The exponents `(n, m)` of the special solution of each type.
pub fn special_exponents(kind: SolutionType) -> Option<(i64, i64)> {
    match kind {
        SolutionType::TypeI => Some((-1, -4)),
        SolutionType::TypeII => Some((1, 0)),
        SolutionType::TypeIII => Some((-1, 1)),
        _ => None,
    }
}
