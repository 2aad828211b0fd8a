//! Binary cubic forms over the integers, the parametric families, and the
//! `GL_2(Z)` action.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `a x^3 + b x^2 y + c x y^2 + d y^3`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinaryCubicForm {
    #[serde(with = "crate::json_int")]
    pub a: BigInt,
    #[serde(with = "crate::json_int")]
    pub b: BigInt,
    #[serde(with = "crate::json_int")]
    pub c: BigInt,
    #[serde(with = "crate::json_int")]
    pub d: BigInt,
}

impl BinaryCubicForm {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        BinaryCubicForm { a: a.into(), b: b.into(), c: c.into(), d: d.into() }
    }

    /// Homogenize a univariate cubic `a x^3 + b x^2 + c x + d`.
    pub fn homogenize(coeffs: [i64; 4]) -> Self {
        Self::new(coeffs[0], coeffs[1], coeffs[2], coeffs[3])
    }

    pub fn coefficients(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn evaluate(&self, x: &BigInt, y: &BigInt) -> BigInt {
        let x2 = x * x;
        let y2 = y * y;
        &self.a * &x2 * x + &self.b * &x2 * y + &self.c * x * &y2 + &self.d * &y2 * y
    }

    /// Exact evaluation on machine integers; `None` on overflow.
    pub fn evaluate_i128(&self, x: i128, y: i128) -> Option<i128> {
        let a = self.a.to_i128()?;
        let b = self.b.to_i128()?;
        let c = self.c.to_i128()?;
        let d = self.d.to_i128()?;
        let x2 = x.checked_mul(x)?;
        let y2 = y.checked_mul(y)?;
        let t0 = a.checked_mul(x2.checked_mul(x)?)?;
        let t1 = b.checked_mul(x2)?.checked_mul(y)?;
        let t2 = c.checked_mul(x)?.checked_mul(y2)?;
        let t3 = d.checked_mul(y2.checked_mul(y)?)?;
        t0.checked_add(t1)?.checked_add(t2)?.checked_add(t3)
    }

    /// `b^2 c^2 - 4 a c^3 - 4 b^3 d - 27 a^2 d^2 + 18 a b c d`.
    pub fn discriminant(&self) -> BigInt {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let b2 = b * b;
        let c2 = c * c;
        &b2 * &c2 - 4 * a * &c2 * c - 4 * &b2 * b * d - 27 * a * a * d * d + 18 * a * b * c * d
    }

    /// `F(p x + q y, r x + s y)` for `M = [[p, q], [r, s]]` with `det M = ±1`.
    pub fn apply_gl2(&self, m: &Matrix2) -> Result<Self> {
        let det = m.det();
        if det.abs() != BigInt::one() {
            return Err(Error::NonUnimodular(det.to_string()));
        }
        Ok(self.substitute(m))
    }

    /// Linear substitution without the unimodularity check.
    pub(crate) fn substitute(&self, m: &Matrix2) -> Self {
        // homogeneous polynomials in (x, y) as coefficient vectors, x^k y^(n-k) at index n-k
        let l1 = [m.p.clone(), m.q.clone()];
        let l2 = [m.r.clone(), m.s.clone()];
        let mut out = vec![BigInt::zero(); 4];
        let coeffs = [&self.a, &self.b, &self.c, &self.d];
        for (k, coeff) in coeffs.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            // L1^(3-k) * L2^k
            let mut poly = vec![BigInt::one()];
            for _ in 0..(3 - k) {
                poly = poly_mul(&poly, &l1);
            }
            for _ in 0..k {
                poly = poly_mul(&poly, &l2);
            }
            for (slot, v) in out.iter_mut().zip(poly) {
                *slot += *coeff * v;
            }
        }
        let [a, b, c, d]: [BigInt; 4] = out.try_into().unwrap();
        BinaryCubicForm { a, b, c, d }
    }

    /// Coefficients of `F(x, 1)` from the constant term up.
    pub fn dehomogenize(&self) -> [BigInt; 4] {
        [self.d.clone(), self.c.clone(), self.b.clone(), self.a.clone()]
    }
}

fn poly_mul(u: &[BigInt], v: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); u.len() + v.len() - 1];
    for (i, a) in u.iter().enumerate() {
        for (j, b) in v.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

impl fmt::Display for BinaryCubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let monomials = ["x^3", "x^2y", "xy^2", "y^3"];
        let mut first = true;
        for (coeff, mono) in self.coefficients().into_iter().zip(monomials) {
            if coeff.is_zero() {
                continue;
            }
            let sign = if coeff.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = coeff.abs();
            if mag.is_one() {
                write!(f, "{sign}{mono}")?;
            } else {
                write!(f, "{sign}{mag}{mono}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryCubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a, self.b, self.c, self.d)
    }
}

/// A 2x2 integer matrix `[[p, q], [r, s]]`, serialized row-major as `[p, q, r, s]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix2 {
    pub p: BigInt,
    pub q: BigInt,
    pub r: BigInt,
    pub s: BigInt,
}

impl Matrix2 {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>, r: impl Into<BigInt>, s: impl Into<BigInt>) -> Self {
        Matrix2 { p: p.into(), q: q.into(), r: r.into(), s: s.into() }
    }

    pub fn identity() -> Self {
        Self::new(1, 0, 0, 1)
    }

    pub fn swap() -> Self {
        Self::new(0, 1, 1, 0)
    }

    pub fn det(&self) -> BigInt {
        &self.p * &self.s - &self.q * &self.r
    }

    pub fn mul(&self, o: &Matrix2) -> Matrix2 {
        Matrix2 {
            p: &self.p * &o.p + &self.q * &o.r,
            q: &self.p * &o.q + &self.q * &o.s,
            r: &self.r * &o.p + &self.s * &o.r,
            s: &self.r * &o.q + &self.s * &o.s,
        }
    }

    pub fn row_major(&self) -> [BigInt; 4] {
        [self.p.clone(), self.q.clone(), self.r.clone(), self.s.clone()]
    }
}

impl Serialize for Matrix2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeTuple;
        let mut t = s.serialize_tuple(4)?;
        for v in [&self.p, &self.q, &self.r, &self.s] {
            t.serialize_element(&v.to_i64().ok_or_else(|| serde::ser::Error::custom("matrix entry exceeds i64"))?)?;
        }
        t.end()
    }
}

impl<'de> Deserialize<'de> for Matrix2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [p, q, r, s] = <[i64; 4]>::deserialize(d)?;
        Ok(Matrix2::new(p, q, r, s))
    }
}

/// One of the four parametric families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyId {
    pub index: u8,
    pub t: i64,
}

impl FamilyId {
    pub fn new(index: u8, t: i64) -> Self {
        FamilyId { index, t }
    }
}

/// Coefficients of the family member `F_{index,t}`.
///
/// * `F_1 = x^3 - (t+1) x^2 y + t x y^2 + y^3`
/// * `F_2 = x^3 - t^2 x y^2 + y^3`
/// * `F_3 = x^3 - (t^4 - t) x^2 y + (t^5 - 2t^2) x y^2 + y^3`
/// * `F_4 = x^3 - (t^4 + 4t) x^2 y + (t^5 + 3t^2) x y^2 + y^3`
pub fn family_form(id: FamilyId) -> Result<BinaryCubicForm> {
    let t = BigInt::from(id.t);
    let t2 = &t * &t;
    let t4 = &t2 * &t2;
    let t5 = &t4 * &t;
    let neg = |v: BigInt| -> BigInt { -v };
    let form = match id.index {
        1 => BinaryCubicForm::new(1, neg(&t + 1i32), t.clone(), 1),
        2 => BinaryCubicForm::new(1, 0, -t2, 1),
        3 => BinaryCubicForm::new(1, neg(&t4 - &t), &t5 - 2 * &t2, 1),
        4 => BinaryCubicForm::new(1, neg(&t4 + 4 * &t), &t5 + 3 * &t2, 1),
        other => return Err(Error::InvalidInput(format!("no family with index {other}"))),
    };
    Ok(form)
}

/// Shorthand for `F_{3,t}`.
pub fn f3(t: i64) -> BinaryCubicForm {
    family_form(FamilyId::new(3, t)).expect("family 3 exists")
}

/// `t^18 - 10t^15 + 41t^12 - 90t^9 + 102t^6 - 40t^3 - 27`.
pub fn f3_discriminant_polynomial(t: i64) -> BigInt {
    let u = num_traits::pow(BigInt::from(t), 3);
    let mut acc = BigInt::zero();
    for c in [1i64, -10, 41, -90, 102, -40, -27] {
        acc = acc * &u + c;
    }
    acc
}

/// Solutions of `F_{3,t}(x, y) = 1` asserted by the solution theorem.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionSet {
    pub t: i64,
    pub solutions: Vec<Solution>,
}

/// An integer pair `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Solution {
    #[serde(with = "crate::json_int")]
    pub x: BigInt,
    #[serde(with = "crate::json_int")]
    pub y: BigInt,
}

impl Solution {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        Solution { x: x.into(), y: y.into() }
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// `{(1,0), (0,1), (t,1), (t^4-2t,1), (1-t^3, t^8-3t^5+3t^2)}`, plus `(6,-5)`
/// when `t = -1`; duplicates removed, first occurrence kept.
pub fn known_solutions(t: i64) -> SolutionSet {
    let tb = BigInt::from(t);
    let t2 = &tb * &tb;
    let t3 = &t2 * &tb;
    let t4 = &t3 * &tb;
    let t5 = &t4 * &tb;
    let t8 = &t4 * &t4;
    let mut candidates = vec![
        Solution::new(1, 0),
        Solution::new(0, 1),
        Solution::new(tb.clone(), 1),
        Solution::new(&t4 - 2 * &tb, 1),
        Solution::new(1 - &t3, t8 - 3 * t5 + 3 * t2),
    ];
    if t == -1 {
        candidates.push(Solution::new(6, -5));
    }
    let mut solutions: Vec<Solution> = Vec::new();
    for s in candidates {
        if !solutions.contains(&s) {
            solutions.push(s);
        }
    }
    SolutionSet { t, solutions }
}

/// Brute-force search for a unimodular `M` with entries in `[-bound, bound]`
/// and `apply_gl2(f, M) = g`.
///
/// Columns are filtered first: the first column `(p, r)` must satisfy
/// `f(p, r) = g.a` and the second `(q, s)` must satisfy `f(q, s) = g.d`.
pub fn gl2_equivalent_search(f: &BinaryCubicForm, g: &BinaryCubicForm, bound: i64) -> Result<Option<Matrix2>> {
    if bound < 1 {
        return Err(Error::InvalidInput("entry bound must be at least 1".into()));
    }
    if f.discriminant() != g.discriminant() {
        return Ok(None);
    }
    let columns = |target: &BigInt| -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for u in -bound..=bound {
            for v in -bound..=bound {
                if f.evaluate(&BigInt::from(u), &BigInt::from(v)) == *target {
                    out.push((u, v));
                }
            }
        }
        out
    };
    let firsts = columns(&g.a);
    let seconds = columns(&g.d);
    // prefer small matrices: identity first when it works
    for &(p, r) in &firsts {
        for &(q, s) in &seconds {
            let m = Matrix2::new(p, q, r, s);
            if m.det().abs() != BigInt::one() {
                continue;
            }
            if f.substitute(&m) == *g {
                return Ok(Some(m));
            }
        }
    }
    Ok(None)
}
