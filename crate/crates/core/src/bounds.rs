//! Linear forms in logarithms: the Siegel identity, the forms `Λ1, Λ2, Λ3`,
//! their upper bounds, Matveev's lower bound and the resulting bound on `t`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::{growth_coefficients, SolutionType};
use crate::realnum::{parse_rational, CertifiedReal};
use crate::roots_asym::{default_precision, isolate_roots, RootTriple};

/// Precision used for the `t`-independent constants.
const CONST_PREC: u32 = 192;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ball(r: &BigRational, prec: u32) -> CertifiedReal {
    CertifiedReal::enclose_rational(r, prec)
}

fn ln_rat(r: &BigRational, prec: u32) -> Result<CertifiedReal> {
    ball(r, prec).ln()
}

/// `(θ2 - θ3)(x - yθ1) + (θ3 - θ1)(x - yθ2) + (θ1 - θ2)(x - yθ3)`, which
/// vanishes identically.
pub fn siegel_residual(roots: &RootTriple, x: &BigInt, y: &BigInt) -> CertifiedReal {
    let [t1, t2, t3] = roots.roots();
    let p = t1.precision();
    let xb = CertifiedReal::from_bigint(x, p);
    let yb = CertifiedReal::from_bigint(y, p);
    let lin = |th: &CertifiedReal| &xb - &(&yb * th);
    let a = &(t2 - t3) * &lin(t1);
    let b = &(t3 - t1) * &lin(t2);
    let c = &(t1 - t2) * &lin(t3);
    &(&a + &b) + &c
}

/// `Λ = b1 ln α1 + b2 ln α2 + b3 ln α3` at given exponents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogLinearForm {
    pub which: u8,
    pub t: i64,
    pub n: i64,
    pub m: i64,
    pub coefficients: [i64; 3],
    pub logs: [CertifiedReal; 3],
    pub value: CertifiedReal,
}

/// `[ln α1, ln α2, ln α3]` for the chosen form; `α3` carries coefficient 1,
/// `α2` carries `n`, and `α1` carries `-m` for `Λ1` and `m` otherwise.
pub fn lambda_logs(which: u8, roots: &RootTriple) -> Result<[CertifiedReal; 3]> {
    let [t1, t2, t3] = roots.roots();
    let p = t1.precision();
    let t = CertifiedReal::from_int(roots.t, p);
    let ln_abs_ratio = |a: &CertifiedReal, b: &CertifiedReal| -> Result<CertifiedReal> { a.div(b)?.abs()?.ln() };
    match which {
        1 => Ok([
            ln_abs_ratio(t2, t3)?,
            ln_abs_ratio(&(&t - t2), &(&t - t3))?,
            ln_abs_ratio(&(t1 - t3), &(t1 - t2))?,
        ]),
        2 => Ok([
            ln_abs_ratio(t3, t1)?,
            ln_abs_ratio(&(&t - t1), &(&t - t3))?,
            ln_abs_ratio(&(t3 - t2), &(t2 - t1))?,
        ]),
        3 => Ok([
            ln_abs_ratio(t2, t1)?,
            ln_abs_ratio(&(&t - t1), &(&t - t2))?,
            ln_abs_ratio(&(t3 - t2), &(t3 - t1))?,
        ]),
        _ => Err(Error::InvalidInput(format!("no linear form Λ{which}"))),
    }
}

fn check_which(which: u8) -> Result<()> {
    if (1..=3).contains(&which) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("no linear form Λ{which}")))
    }
}

/// Enclosure of `Λ_which` at `(n, m)`.
pub fn lambda_value(which: u8, t: i64, n: i64, m: i64) -> Result<LogLinearForm> {
    check_which(which)?;
    if t < 10 {
        return Err(Error::InvalidInput("linear forms are evaluated for t >= 10".into()));
    }
    let roots = isolate_roots(t, default_precision(t) + 64)?;
    lambda_value_with(which, &roots, n, m)
}

/// As [`lambda_value`] with caller-supplied roots.
pub fn lambda_value_with(which: u8, roots: &RootTriple, n: i64, m: i64) -> Result<LogLinearForm> {
    check_which(which)?;
    let logs = lambda_logs(which, roots)?;
    let b1 = if which == 1 { -m } else { m };
    let coefficients = [b1, n, 1];
    let value = &(&logs[0].mul_int(&BigInt::from(b1)) + &logs[1].mul_int(&BigInt::from(n))) + &logs[2];
    Ok(LogLinearForm { which, t: roots.t, n, m, coefficients, logs, value })
}

/// `c` in `ln|Λ| < ln 2 - c · size · ln t`.
pub fn lambda_coefficient(which: u8) -> Result<BigRational> {
    match which {
        1 => Ok(rat(77, 10)),
        2 => Ok(rat(79, 10)),
        3 => Ok(rat(89, 10)),
        _ => Err(Error::InvalidInput(format!("no linear form Λ{which}"))),
    }
}

/// The exponent measuring the size of a solution for `Λ_which`:
/// `|m|` for `Λ1`, `n` for `Λ2` and `|n|` for `Λ3`.
pub fn exponent_size(which: u8, n: i64, m: i64) -> Result<i64> {
    match which {
        1 => Ok(m.abs()),
        2 => Ok(n),
        3 => Ok(n.abs()),
        _ => Err(Error::InvalidInput(format!("no linear form Λ{which}"))),
    }
}

/// False at the degenerate exponents excluded from the upper bounds: the
/// special solution `(n, m) = (-1, -4)` for `Λ1` and `m = 0` for `Λ2`.
pub fn lambda_bound_applies(which: u8, n: i64, m: i64) -> bool {
    match which {
        1 => (n, m) != (-1, -4),
        2 => m != 0,
        _ => true,
    }
}

/// `ln 2 - c · size · ln t`.
pub fn lambda_upper_bound(which: u8, t: i64, size: &BigInt) -> Result<CertifiedReal> {
    let c = lambda_coefficient(which)?;
    let prec = CONST_PREC + size.bits() as u32;
    let ln_t = CertifiedReal::from_int(t, prec).ln()?;
    let cs = ball(&(c * BigRational::from_integer(size.clone())), prec);
    Ok(&CertifiedReal::ln2(prec) - &(&cs * &ln_t))
}

/// Parameters of Matveev's lower bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatveevInput {
    pub nlogs: u32,
    pub degree: u32,
    pub chi: u32,
    pub a: Vec<CertifiedReal>,
    pub b: CertifiedReal,
}

impl MatveevInput {
    pub fn omega(&self) -> CertifiedReal {
        let one = CertifiedReal::from_int(1, CONST_PREC);
        self.a.iter().fold(one, |acc, ai| &acc * ai)
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `C = 16/(n! χ) e^n (2n+1+2χ)(n+2)(4n+4)^(n+1)(en/2)^χ`.
pub fn matveev_c(nlogs: u32, chi: u32) -> Result<CertifiedReal> {
    let p = CONST_PREC;
    let n = nlogs as i64;
    let chi_i = chi as i64;
    let e = CertifiedReal::e(p);
    let head = BigRational::new(BigInt::from(16), factorial(nlogs) * BigInt::from(chi))
        * BigRational::from_integer(BigInt::from((2 * n + 1 + 2 * chi_i) * (n + 2)) * num_traits::pow(BigInt::from(4 * n + 4), (n + 1) as usize));
    let en2 = &e * &ball(&rat(n, 2), p);
    Ok(&(&ball(&head, p) * &e.powi(n)?) * &en2.powi(chi_i)?)
}

/// `C0 = 4.4n + 7 + 5.5 ln n + 2 ln D + ln(1 + ln D)`.
pub fn matveev_c0(nlogs: u32, degree: u32) -> Result<CertifiedReal> {
    let p = CONST_PREC;
    let n = nlogs as i64;
    let ln_n = ln_rat(&rat(n, 1), p)?;
    let ln_d = ln_rat(&rat(degree as i64, 1), p)?;
    let linear = ball(&(rat(44, 10) * rat(n, 1) + rat(7, 1)), p);
    let ln_ed = &CertifiedReal::from_int(1, p) + &ln_d;
    let logs = &(&ball(&rat(11, 2), p) * &ln_n) + &ln_d.mul_int(&BigInt::from(2));
    Ok(&(&linear + &logs) + &ln_ed.ln()?)
}

/// `W0 = ln(1.5 e B D ln(e D))`.
pub fn matveev_w0(b: &CertifiedReal, degree: u32) -> Result<CertifiedReal> {
    let p = CONST_PREC.max(b.precision());
    let ln_d = ln_rat(&rat(degree as i64, 1), p)?;
    let ln_ed = &CertifiedReal::from_int(1, p) + &ln_d;
    let parts = [ln_rat(&rat(3, 2), p)?, CertifiedReal::from_int(1, p), b.ln()?, ln_d, ln_ed.ln()?];
    Ok(parts.iter().fold(CertifiedReal::from_int(0, p), |acc, v| &acc + v))
}

/// `-C C0 W0 D^2 Ω`, a lower bound for `ln|Λ|`.
pub fn matveev_bound(input: &MatveevInput) -> Result<CertifiedReal> {
    if input.a.len() != input.nlogs as usize || input.nlogs == 0 {
        return Err(Error::InvalidInput("need one height bound per logarithm".into()));
    }
    if !(input.chi == 1 || input.chi == 2) {
        return Err(Error::InvalidInput("χ is 1 or 2".into()));
    }
    let omega = input.omega();
    if !omega.is_positive() {
        return Err(Error::InvalidInput("Ω must be positive".into()));
    }
    let c = matveev_c(input.nlogs, input.chi)?;
    let c0 = matveev_c0(input.nlogs, input.degree)?;
    let w0 = matveev_w0(&input.b, input.degree)?;
    let d2 = CertifiedReal::from_int((input.degree * input.degree) as i64, CONST_PREC);
    Ok(-(&(&(&(&c * &c0) * &w0) * &d2) * &omega))
}

/// `C C0 D^2 · 36 · 18 · 18`: the factor of `ln^3 t · W0` for the families,
/// with `D = 6`, `χ = 1`, `A3 = 36 ln t` and `A1 = A2 = 18 ln t`.
pub fn family_coefficient() -> Result<CertifiedReal> {
    let c = matveev_c(3, 1)?;
    let c0 = matveev_c0(3, 6)?;
    Ok((&c * &c0).mul_int(&BigInt::from(36 * 36 * 18 * 18)))
}

/// `W0 - ln N` for `B = N/2`, `D = 6`: `ln(1.5 e · 6 ln(6e) / 2)`.
pub fn family_w0_prefactor() -> Result<CertifiedReal> {
    let p = CONST_PREC;
    let ln_d = ln_rat(&rat(6, 1), p)?;
    let ln_ed = &CertifiedReal::from_int(1, p) + &ln_d;
    let inner = &(&ball(&rat(3 * 6, 2 * 2), p) * &CertifiedReal::e(p)) * &ln_ed;
    Ok(inner)
}

/// A numerically verified height inequality `A_i >= max(D h(α_i), |ln α_i|)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightCheck {
    pub index: u8,
    pub height: CertifiedReal,
    pub log_abs: CertifiedReal,
    pub a: CertifiedReal,
    pub pass: bool,
}

/// Result of instantiating Matveev's bound for one family member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatveevReport {
    pub which: u8,
    pub t: i64,
    pub heights: Vec<HeightCheck>,
    /// `ln|Λ| > -coefficient · ln^3 t · ln(w0_prefactor · N)`.
    pub coefficient: CertifiedReal,
    pub w0_prefactor: CertifiedReal,
    pub bound: String,
}

/// Height of a ratio of two conjugates of a unit with conjugate log
/// absolute values `l`: `(max l - min l) / 3`.
fn unit_ratio_height(l: [CertifiedReal; 3]) -> CertifiedReal {
    let max = l[0].max_of(&l[1]).max_of(&l[2]);
    let min = -(&(-&l[0]).max_of(&(-&l[1])).max_of(&(-&l[2])));
    (&max - &min).div(&CertifiedReal::from_int(3, max.precision())).expect("nonzero divisor")
}

/// `(2/3) ln |(θ1-θ2)(θ1-θ3)(θ2-θ3)|`, bounding the height of a ratio of
/// root differences.
fn difference_ratio_height(roots: &RootTriple) -> Result<CertifiedReal> {
    let [t1, t2, t3] = roots.roots();
    let prod = &(&(t1 - t2) * &(t1 - t3)) * &(t2 - t3);
    let l = prod.abs()?.ln()?;
    Ok(&l.mul_int(&BigInt::from(2)) * &CertifiedReal::ratio(1, 3, l.precision()))
}

/// Instantiate Matveev's bound for `Λ_which` at `t`, checking the height
/// inequalities behind `A3 = 36 ln t`, `A1 = A2 = 18 ln t`.
pub fn matveev_for_family(which: u8, t: i64) -> Result<MatveevReport> {
    check_which(which)?;
    if t < 10 {
        return Err(Error::InvalidInput("Matveev instantiation needs t >= 10".into()));
    }
    let roots = isolate_roots(t, default_precision(t))?;
    let [t1, t2, t3] = roots.roots();
    let p = t1.precision();
    let tb = CertifiedReal::from_int(t, p);
    let ln_abs = |v: &CertifiedReal| -> Result<CertifiedReal> { v.abs()?.ln() };
    let theta_logs = [ln_abs(t1)?, ln_abs(t2)?, ln_abs(t3)?];
    let shift_logs = [ln_abs(&(&tb - t1))?, ln_abs(&(&tb - t2))?, ln_abs(&(&tb - t3))?];
    let h_theta = unit_ratio_height(theta_logs);
    let h_shift = unit_ratio_height(shift_logs);
    let h_diff = difference_ratio_height(&roots)?;
    let logs = lambda_logs(which, &roots)?;
    let ln_t = tb.ln()?;
    let d = BigInt::from(6);
    let mut heights = Vec::with_capacity(3);
    for (i, (h, a_mul)) in [(h_theta, 18), (h_shift, 18), (h_diff, 36)].into_iter().enumerate() {
        let a = ln_t.mul_int(&BigInt::from(a_mul));
        let dh = h.mul_int(&d);
        let log_abs = logs[i].abs()?;
        let pass = (&a - &dh).is_positive() && (&a - &log_abs).is_positive();
        heights.push(HeightCheck { index: i as u8 + 1, height: h, log_abs, a, pass });
    }
    if let Some(bad) = heights.iter().find(|h| !h.pass) {
        return Err(Error::HeightBoundViolated(format!("A{} fails at t = {t} for Λ{which}", bad.index)));
    }
    let coefficient = family_coefficient()?;
    let w0_prefactor = family_w0_prefactor()?;
    let size = match which {
        1 => "|m|",
        2 => "n",
        _ => "|n|",
    };
    let bound = format!(
        "log|Λ{which}| > -{:.4e} · log^3 t · log({:.4} · {size})",
        coefficient.to_f64(),
        w0_prefactor.to_f64()
    );
    Ok(MatveevReport { which, t, heights, coefficient, w0_prefactor, bound })
}

/// The constant `K` in `N / ln(35 N) < K ln^2 t` for each form.
///
/// For `Λ2` this is the rounded `1.07e15`; for `Λ1`, `Λ3` it is
/// `8.4e15 / c` with `c` the upper-bound coefficient.
pub fn tmax_constant(which: u8) -> Result<BigRational> {
    match which {
        2 => Ok(parse_rational("1.07e15").expect("literal")),
        1 | 3 => Ok(parse_rational("8.4e15").expect("literal") / lambda_coefficient(which)?),
        _ => Err(Error::InvalidInput(format!("no linear form Λ{which}"))),
    }
}

/// Result of the absolute bound on `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TMax {
    pub which: u8,
    pub t_max: i64,
    /// Upper end of the exponent range compatible with `t_max`.
    pub n_max: CertifiedReal,
    pub constant: String,
}

fn tmax_prec() -> u32 {
    256
}

/// `N(t) = c t^k ln t` for the form's solution type.
fn growth(which: u8, t: i64, prec: u32) -> Result<CertifiedReal> {
    let kind = match which {
        1 => SolutionType::TypeI,
        2 => SolutionType::TypeII,
        _ => SolutionType::TypeIII,
    };
    let (c, k) = growth_coefficients(kind)?;
    let tk = BigRational::from_integer(num_traits::pow(BigInt::from(t), k as usize));
    Ok(&ball(&(c * tk), prec) * &CertifiedReal::from_int(t, prec).ln()?)
}

/// `N / ln(35 N)`.
fn g(n: &CertifiedReal) -> Result<CertifiedReal> {
    n.div(&n.mul_int(&BigInt::from(35)).ln()?)
}

/// Whether a solution of size at least `N(t)` is compatible with
/// `N / ln(35 N) < K ln^2 t`.
pub fn tmax_feasible(which: u8, t: i64) -> Result<bool> {
    let prec = tmax_prec();
    let k = ball(&tmax_constant(which)?, prec);
    let n = growth(which, t, prec)?;
    let ln_t = CertifiedReal::from_int(t, prec).ln()?;
    let diff = &(&k * &ln_t.sqr()) - &g(&n)?;
    Ok(diff.sign()? > 0)
}

/// Largest `t` passing [`tmax_feasible`], by bisection over `[10, 10^7]`.
pub fn derive_t_max(which: u8) -> Result<TMax> {
    check_which(which)?;
    let (mut lo, mut hi) = (10i64, 10_000_000i64);
    if !tmax_feasible(which, lo)? {
        return Err(Error::VerificationFailed("bound excludes every t >= 10".into()));
    }
    if tmax_feasible(which, hi)? {
        return Err(Error::VerificationFailed("no bound on t below 10^7".into()));
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if tmax_feasible(which, mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let n_max = n_ceiling(which, lo)?;
    let constant = crate::realnum::rational_to_string(&tmax_constant(which)?, 6);
    Ok(TMax { which, t_max: lo, n_max, constant })
}

/// The root `N` of `N / ln(35 N) = K ln^2 t`, enclosed by bisection.
pub fn n_ceiling(which: u8, t: i64) -> Result<CertifiedReal> {
    let prec = tmax_prec();
    let rhs = &ball(&tmax_constant(which)?, prec) * &CertifiedReal::from_int(t, prec).ln()?.sqr();
    let below = |n: &BigInt| -> Result<bool> {
        let v = g(&CertifiedReal::from_bigint(n, prec))?;
        Ok((&rhs - &v).sign()? > 0)
    };
    let mut lo = BigInt::one();
    let mut hi = BigInt::from(10).pow(40u32);
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        if below(&mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lo_r = BigRational::from_integer(lo);
    let hi_r = BigRational::from_integer(hi);
    Ok(CertifiedReal::from_interval(&lo_r, &hi_r, prec))
}

/// Lower bound `-coef · ln^3 t · ln(w · N)` for `ln|Λ|` at size `N`.
pub fn matveev_lower_bound(t: i64, size: &BigInt) -> Result<CertifiedReal> {
    if !size.is_positive() {
        return Err(Error::InvalidInput("exponent size must be positive".into()));
    }
    let prec = CONST_PREC + size.bits() as u32;
    let ln_t = CertifiedReal::from_int(t, prec).ln()?;
    let w = &family_w0_prefactor()?.with_precision(prec) * &CertifiedReal::from_bigint(size, prec);
    let v = &(&family_coefficient()?.with_precision(prec) * &ln_t.powi(3)?) * &w.ln()?;
    Ok(-v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::recover_exponents;

    #[test]
    fn siegel_examples() {
        let r = isolate_roots(10, 256).unwrap();
        let s = siegel_residual(&r, &BigInt::from(10), &BigInt::from(1));
        assert!(s.contains_zero());
        assert!(s.radius_below(&BigRational::new(BigInt::one(), BigInt::from(10).pow(20u32))));
        let r50 = isolate_roots(50, 256).unwrap();
        assert!(siegel_residual(&r50, &BigInt::from(0), &BigInt::one()).contains_zero());
        assert!(siegel_residual(&r, &BigInt::from(-999), &BigInt::from(99_700_300)).contains_zero());
    }

    #[test]
    fn matveev_constants() {
        let c = matveev_c(3, 1).unwrap().to_f64();
        assert!((c / 6.44e8 - 1.0).abs() < 5e-3, "{c}");
        let c0 = matveev_c0(3, 6).unwrap().to_f64();
        assert!((c0 - 30.9).abs() < 0.1, "{c0}");
        let k = family_coefficient().unwrap();
        assert!(k.inside_open(&parse_rational("8.3e15").unwrap(), &parse_rational("8.4e15").unwrap()));
        let w = family_w0_prefactor().unwrap();
        assert!(w.inside_open(&rat(34, 1), &rat(35, 1)));
    }

    #[test]
    fn matveev_bound_matches_family_form() {
        let prec = CONST_PREC;
        let t = 10;
        let ln_t = CertifiedReal::from_int(t, prec).ln().unwrap();
        let n = BigInt::from(8060);
        let input = MatveevInput {
            nlogs: 3,
            degree: 6,
            chi: 1,
            a: vec![ln_t.mul_int(&18.into()), ln_t.mul_int(&18.into()), ln_t.mul_int(&36.into())],
            b: CertifiedReal::ratio(8060, 2, prec),
        };
        let direct = matveev_bound(&input).unwrap();
        let family = matveev_lower_bound(t, &n).unwrap();
        assert!(direct.overlaps(&family), "{direct} vs {family}");
    }

    #[test]
    fn upper_bound_values() {
        let b = lambda_upper_bound(2, 10, &BigInt::from(8060)).unwrap();
        assert!((b.to_f64() + 146_614.1).abs() < 0.1, "{b}");
        let b = lambda_upper_bound(1, 10, &BigInt::one()).unwrap();
        assert!((b.to_f64() - (2f64.ln() - 7.7 * 10f64.ln())).abs() < 1e-12);
        let b = lambda_upper_bound(3, 10, &BigInt::one()).unwrap();
        assert!((b.to_f64() - (2f64.ln() - 8.9 * 10f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn lambda_at_special_exponents() {
        let l2 = lambda_value(2, 10, 1, 0).unwrap();
        assert!(l2.value.to_f64().abs() < 1e-5);
        let l3 = lambda_value(3, 10, -1, 1).unwrap();
        let ub = lambda_upper_bound(3, 10, &BigInt::one()).unwrap();
        assert!((&ub - &l3.value.abs().unwrap().ln().unwrap()).is_positive());
    }

    #[test]
    fn excluded_exponents_violate_the_bounds() {
        // the bounds genuinely fail where they are excluded
        for (which, n, m, size) in [(1u8, -1, -4, 4), (2, 1, 0, 1)] {
            assert!(!lambda_bound_applies(which, n, m));
            let l = lambda_value(which, 10, n, m).unwrap();
            let ub = lambda_upper_bound(which, 10, &BigInt::from(size)).unwrap();
            assert!((&l.value.abs().unwrap().ln().unwrap() - &ub).is_positive());
        }
    }

    #[test]
    fn special_solutions_against_their_own_form() {
        // each special solution meets the form of its own type; the bound
        // either holds or the exponents are on the excluded list
        let cases = [(1u8, SolutionType::TypeI), (2, SolutionType::TypeII), (3, SolutionType::TypeIII)];
        for t in 10..=100 {
            for (which, kind) in cases {
                let s = crate::exponents::special_exponent_solutions(kind, t).unwrap();
                let e = recover_exponents(t, &s.x, &s.y).unwrap();
                let size = exponent_size(which, e.n, e.m).unwrap();
                let l = lambda_value(which, t, e.n, e.m).unwrap();
                let ub = lambda_upper_bound(which, t, &BigInt::from(size)).unwrap();
                let holds = (&ub - &l.value.abs().unwrap().ln().unwrap()).is_positive();
                assert_eq!(holds, lambda_bound_applies(which, e.n, e.m), "t = {t}, Λ{which}");
            }
        }
    }

    #[test]
    fn heights_pass() {
        for which in 1..=3 {
            let r = matveev_for_family(which, 10).unwrap();
            assert!(r.heights.iter().all(|h| h.pass));
        }
        let r = matveev_for_family(2, 576_241).unwrap();
        assert!(r.coefficient.overlaps(&family_coefficient().unwrap()));
    }

    #[test]
    fn t_max_for_lambda2() {
        let r = derive_t_max(2).unwrap();
        assert_eq!(r.t_max, 576_241);
        assert!(r.n_max.inside_open(&parse_rational("8.8e18").unwrap(), &parse_rational("9.0e18").unwrap()));
    }

    #[test]
    fn feasibility_flips_once() {
        let mut flips = 0;
        let mut prev = true;
        let mut t = 10i64;
        while t <= 10_000_000 {
            let f = tmax_feasible(2, t).unwrap();
            if f != prev {
                flips += 1;
                prev = f;
            }
            t = t * 11 / 10 + 1;
        }
        assert_eq!(flips, 1);
    }
}
