//! Bounded exhaustive search for solutions of `F(x, y) = 1`.
//!
//! For a solution, `∏ |x - y θ_i| = 1/|a| <= 1`, so some conjugate satisfies
//! `|x - y θ_i| <= 1`, and then `|x - y Re θ_i| <= 1`. For each `y` it is
//! therefore enough to test the integers within distance 1 of `y c`, where
//! `c` runs over the real roots of `F(x, 1)` and the real part of a complex
//! pair. Roots are certified enclosures; acceptance is exact evaluation.
//!
//! Nothing is claimed beyond `|y| <= y_bound`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{f3, known_solutions, BinaryCubicForm, Solution};
use crate::realnum::CertifiedReal;
use crate::roots_asym::real_root_enclosures;
use crate::SCHEMA_VERSION;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub schema: u32,
    pub form: BinaryCubicForm,
    pub y_bound: u64,
    /// Sorted lexicographically by `(x, y)`.
    pub solutions: Vec<Solution>,
    pub count: usize,
    pub expected: Option<Vec<Solution>>,
    pub matches_expected: Option<bool>,
    /// Always true: completeness is only claimed for `|y| <= y_bound`.
    pub bounded_verification: bool,
}

impl SearchReport {
    fn new(form: &BinaryCubicForm, y_bound: u64, solutions: Vec<Solution>) -> Self {
        SearchReport {
            schema: SCHEMA_VERSION,
            form: form.clone(),
            y_bound,
            count: solutions.len(),
            solutions,
            expected: None,
            matches_expected: None,
            bounded_verification: true,
        }
    }

    fn compare(mut self, mut expected: Vec<Solution>) -> Self {
        expected.sort();
        self.matches_expected = Some(expected == self.solutions);
        self.expected = Some(expected);
        self
    }
}

/// Centres `c` with every solution within 1 of `y c`.
fn centres(form: &BinaryCubicForm, bits: u32) -> Result<Vec<CertifiedReal>> {
    let mut cs = real_root_enclosures(form, bits)?;
    if cs.len() == 1 && form.discriminant().is_negative() {
        // the complex pair has real part (-b/a - θ)/2
        let sum = CertifiedReal::enclose_rational(&BigRational::new(-form.b.clone(), form.a.clone()), bits + 8);
        cs.push((&sum - &cs[0]).mul_pow2(-1));
    }
    Ok(cs)
}

fn is_solution(form: &BinaryCubicForm, x: &BigInt, y: i64) -> bool {
    if let Some(val) = x.to_i128().and_then(|xs| form.evaluate_i128(xs, y as i128)) {
        return val == 1;
    }
    form.evaluate(x, &BigInt::from(y)) == BigInt::from(1)
}

fn solutions_at(form: &BinaryCubicForm, cs: &[CertifiedReal], y: i64) -> Vec<Solution> {
    let yb = BigInt::from(y);
    let mut out = Vec::new();
    for c in cs {
        let v = c.mul_int(&yb);
        let lo = v.lower().floor() - 1;
        let hi = v.upper().ceil() + 1;
        let mut x = lo;
        while x <= hi {
            if is_solution(form, &x, y) {
                out.push(Solution::new(x.clone(), y));
            }
            x += 1;
        }
    }
    out
}

/// All solutions of `F(x, y) = 1` with `|y| <= y_bound`.
pub fn thue_solutions_bruteforce(form: &BinaryCubicForm, y_bound: u64) -> Result<SearchReport> {
    if form.a.is_zero() {
        return Err(Error::InvalidInput("leading coefficient must be nonzero".into()));
    }
    let yb = i64::try_from(y_bound).map_err(|_| Error::InvalidInput("y_bound too large".into()))?;
    let bits = 64 + 64 - y_bound.leading_zeros();
    let cs = centres(form, bits)?;
    let mut sols: Vec<Solution> = (-yb..=yb).into_par_iter().flat_map_iter(|y| solutions_at(form, &cs, y)).collect();
    sols.sort();
    sols.dedup();
    Ok(SearchReport::new(form, y_bound, sols))
}

/// Bounded search on `F_{3,t}` compared with the asserted solution list.
pub fn theorem_report(t: i64, y_bound: u64) -> Result<SearchReport> {
    let rep = thue_solutions_bruteforce(&f3(t), y_bound)?;
    let bound = BigInt::from(y_bound);
    let expected = known_solutions(t).solutions.into_iter().filter(|s| s.y.abs() <= bound).collect();
    Ok(rep.compare(expected))
}

/// True iff the solutions with `|y| <= y_bound` are exactly the known ones.
pub fn verify_theorem(t: i64, y_bound: u64) -> Result<bool> {
    Ok(theorem_report(t, y_bound)?.matches_expected == Some(true))
}

/// Full scan of `|x| <= x_bound`, `|y| <= y_bound`.
pub fn scan_2d(form: &BinaryCubicForm, x_bound: i64, y_bound: i64) -> Result<Vec<Solution>> {
    let mut k = [0i128; 4];
    for (slot, c) in k.iter_mut().zip(form.coefficients()) {
        *slot = c.to_i128().ok_or_else(|| Error::InvalidInput("coefficients too large for a scan".into()))?;
    }
    let m = x_bound.max(y_bound).max(1) as f64;
    if k.iter().map(|c| c.unsigned_abs() as f64).sum::<f64>() * m * m * m >= 1e37 {
        return Err(Error::InvalidInput("scan range overflows i128".into()));
    }
    let mut sols: Vec<Solution> = (-y_bound..=y_bound)
        .into_par_iter()
        .flat_map_iter(|y| {
            let y = y as i128;
            let (b, c, d) = (k[1] * y, k[2] * y * y, k[3] * y * y * y);
            (-x_bound..=x_bound)
                .filter(move |&x| {
                    let x = x as i128;
                    ((k[0] * x + b) * x + c) * x + d == 1
                })
                .map(move |x| Solution::new(x, y as i64))
        })
        .collect();
    sols.sort();
    Ok(sols)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableGroup {
    /// Positive discriminant, at least six solutions.
    AtLeastSix,
    /// Positive discriminant up to `10^7`, five or more solutions, outside
    /// the three families.
    Sporadic,
    /// Negative discriminant with four or five solutions.
    NegativeDiscriminant,
}

/// A listed form with its discriminant and solution count.
#[derive(Clone, Debug)]
pub struct TableEntry {
    pub group: TableGroup,
    pub coeffs: [i64; 4],
    pub discriminant: i64,
    pub count: usize,
}

/// Every listed form. For the negative-discriminant forms the count is exact.
pub fn table_entries() -> Vec<TableEntry> {
    use TableGroup::*;
    let e = |group, coeffs, discriminant, count| TableEntry { group, coeffs, discriminant, count };
    vec![
        e(AtLeastSix, [1, -1, -2, 1], 49, 9),
        e(AtLeastSix, [1, 0, -3, 1], 81, 6),
        e(AtLeastSix, [1, 0, -4, 1], 229, 6),
        e(AtLeastSix, [1, 0, -5, 3], 257, 6),
        e(AtLeastSix, [1, 2, -5, 1], 361, 6),
        e(Sporadic, [1, 0, -3, 1], 81, 5),
        e(Sporadic, [1, 1, -3, -1], 148, 5),
        e(Sporadic, [1, 2, -5, 1], 361, 5),
        e(Sporadic, [1, 0, -5, -1], 473, 5),
        e(Sporadic, [1, 0, -7, -1], 1345, 5),
        e(Sporadic, [1, 9, -12, -21], 108_729, 5),
        e(Sporadic, [1, 21, -2, -21], 783_689, 5),
        e(Sporadic, [1, 21, -1, -22], 810_661, 5),
        e(Sporadic, [1, 18, -21, -37], 1_257_849, 5),
        e(NegativeDiscriminant, [1, 0, -1, 1], -23, 5),
        e(NegativeDiscriminant, [1, 0, 1, 1], -31, 4),
        e(NegativeDiscriminant, [1, -1, 1, 1], -44, 4),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub group: TableGroup,
    pub listed_discriminant: i64,
    #[serde(with = "crate::json_int")]
    pub discriminant: BigInt,
    pub listed_count: usize,
    /// Whether the listed count is exact rather than a lower bound.
    pub exact: bool,
    pub pass: bool,
    pub search: SearchReport,
}

/// Search every listed form and compare with its discriminant and count.
pub fn verify_sporadic_tables(y_bound: u64) -> Result<Vec<TableReport>> {
    table_entries()
        .into_iter()
        .map(|e| {
            let form = BinaryCubicForm::homogenize(e.coeffs);
            let search = thue_solutions_bruteforce(&form, y_bound)?;
            let discriminant = form.discriminant();
            let exact = e.group == TableGroup::NegativeDiscriminant;
            let count_ok = if exact { search.count == e.count } else { search.count >= e.count };
            let pass = count_ok && discriminant == BigInt::from(e.discriminant);
            Ok(TableReport {
                group: e.group,
                listed_discriminant: e.discriminant,
                discriminant,
                listed_count: e.count,
                exact,
                pass,
                search,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sols(v: &[(i64, i64)]) -> Vec<Solution> {
        let mut s: Vec<Solution> = v.iter().map(|&(x, y)| Solution::new(x, y)).collect();
        s.sort();
        s
    }

    #[test]
    fn delone_nagell_minus_23() {
        let r = thue_solutions_bruteforce(&BinaryCubicForm::new(1, 0, -1, 1), 100).unwrap();
        assert_eq!(r.solutions, sols(&[(1, 0), (0, 1), (1, 1), (-1, 1), (4, -3)]));
        assert!(r.bounded_verification);
    }

    #[test]
    fn discriminant_49_has_nine() {
        let r = thue_solutions_bruteforce(&BinaryCubicForm::new(1, -1, -2, 1), 10_000).unwrap();
        assert_eq!(r.count, 9);
    }

    #[test]
    fn sum_of_cubes() {
        let r = thue_solutions_bruteforce(&f3(0), 10).unwrap();
        assert_eq!(r.solutions, sols(&[(1, 0), (0, 1)]));
        assert!(verify_theorem(0, 100).unwrap());
    }

    #[test]
    fn theorem_small_t() {
        let r = theorem_report(-1, 100).unwrap();
        assert_eq!(r.count, 6);
        assert!(r.solutions.contains(&Solution::new(6, -5)));
        assert_eq!(r.matches_expected, Some(true));
        let r = theorem_report(2, 1000).unwrap();
        assert_eq!(r.count, 5);
        assert!(r.solutions.contains(&Solution::new(-7, 172)));
        assert_eq!(r.matches_expected, Some(true));
    }

    #[test]
    fn t_one_has_an_extra_solution() {
        // F_{3,1} = x^3 - x y^2 + y^3
        let r = theorem_report(1, 100).unwrap();
        assert_eq!(r.matches_expected, Some(false));
        assert!(r.solutions.contains(&Solution::new(4, -3)));
    }

    #[test]
    fn agrees_with_scan() {
        let f = BinaryCubicForm::new(1, 0, -5, 3);
        let a = thue_solutions_bruteforce(&f, 20).unwrap().solutions;
        assert_eq!(a, scan_2d(&f, 2000, 20).unwrap());
    }

    #[test]
    fn listed_discriminants() {
        for e in table_entries() {
            assert_eq!(BinaryCubicForm::homogenize(e.coeffs).discriminant(), BigInt::from(e.discriminant), "{:?}", e.coeffs);
        }
    }

    #[test]
    fn leading_zero_rejected() {
        assert!(thue_solutions_bruteforce(&BinaryCubicForm::new(0, 1, 1, 1), 5).is_err());
    }
}
