//! Certified roots `θ1 < θ2 < θ3` of `P(x) = F_{3,t}(x, 1)` and the error
//! constants `κ1 … κ16` of their asymptotic expansions.

mod isolate;
mod kappa;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

pub use isolate::{isolate_real_roots, real_root_enclosures, refine_root, IntPoly, RootBracket};
pub use kappa::{kappa_envelope, kappa_t_only, kappa_target, verify_kappas, verify_kappas_with, KappaReport, KappaRow};

use crate::error::{Error, Result};
use crate::forms::f3;
use crate::realnum::{CertifiedReal, Dyadic};

/// Working precision used for `t`: about `20 * bitlen(t) + 128` bits.
pub fn default_precision(t: i64) -> u32 {
    let bits = 64 - t.unsigned_abs().leading_zeros();
    20 * bits + 128
}

/// The three real roots of `P`, each with absolute radius at most
/// `2^-precision`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootTriple {
    pub t: i64,
    pub theta1: CertifiedReal,
    pub theta2: CertifiedReal,
    pub theta3: CertifiedReal,
    pub precision: u32,
}

impl RootTriple {
    pub fn roots(&self) -> [&CertifiedReal; 3] {
        [&self.theta1, &self.theta2, &self.theta3]
    }

    /// `θ_i` for `i` in `1..=3`.
    pub fn theta(&self, i: usize) -> &CertifiedReal {
        self.roots()[i - 1]
    }
}

/// `P(x) = x^3 - (t^4 - t) x^2 + (t^5 - 2t^2) x + 1`.
pub fn p_poly(t: i64) -> IntPoly {
    IntPoly::from_form(&f3(t))
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Open windows `(lo, hi)` containing `θ1, θ2, θ3` for `t >= 10`.
pub fn root_windows(t: i64) -> [(BigRational, BigRational); 3] {
    let tr = BigRational::from_integer(t.into());
    let t5 = BigRational::from_integer(num_traits::pow(BigInt::from(t), 5));
    let t8 = BigRational::from_integer(num_traits::pow(BigInt::from(t), 8));
    let c = rat(113, 100);
    let top = BigRational::from_integer(num_traits::pow(BigInt::from(t), 4) - 2 * BigInt::from(t));
    [
        (-(&c / &t5), rat(0, 1)),
        (tr.clone(), &tr + &c / &t5),
        (&top - &c / &t8, top),
    ]
}

/// Dyadic inner approximation of a rational: `>= r` when `up`.
fn dyadic_toward(r: &BigRational, up: bool) -> Dyadic {
    let bits = (r.numer().bits() + r.denom().bits() + 64) as u32;
    let (d, err) = Dyadic::from_rational(r, bits);
    let e = err.to_dyadic();
    if up {
        d.add(&e)
    } else {
        d.sub(&e)
    }
}

/// Certified enclosures of `θ1 < θ2 < θ3` for `t ∉ {0, 1}`.
///
/// For `t >= 10` each root is bracketed inside its asymptotic window and the
/// final enclosure is checked to lie strictly inside it; otherwise roots are
/// isolated by Sturm sequences.
pub fn isolate_roots(t: i64, precision: u32) -> Result<RootTriple> {
    if t == 0 || t == 1 {
        return Err(Error::InvalidInput(format!("P has a repeated or complex root pair at t = {t}")));
    }
    let p = p_poly(t);
    let brackets: Vec<RootBracket> = if t >= 10 {
        let windows = root_windows(t);
        let mut out = Vec::with_capacity(3);
        for (lo, hi) in &windows {
            let a = dyadic_toward(lo, true);
            let b = dyadic_toward(hi, false);
            let (sa, sb) = (p.sign_at(&a), p.sign_at(&b));
            if sa * sb >= 0 {
                return Err(Error::VerificationFailed(format!("no sign change of P in a root window at t = {t}")));
            }
            out.push(RootBracket { lo: a, hi: b });
        }
        out
    } else {
        isolate_real_roots(&p)?
    };
    if brackets.len() != 3 {
        return Err(Error::VerificationFailed(format!("P has {} real roots at t = {t}", brackets.len())));
    }
    let mut balls = Vec::with_capacity(3);
    for br in &brackets {
        let r = refine_root(&p, br, precision as i64 + 2)?;
        balls.push(r.to_ball(precision));
    }
    let [theta1, theta2, theta3]: [CertifiedReal; 3] = balls.try_into().expect("three roots");
    if !(theta1.upper() < theta2.lower() && theta2.upper() < theta3.lower()) {
        return Err(Error::PrecisionInsufficient(format!("root enclosures overlap at t = {t}")));
    }
    if t >= 10 {
        for (ball, (lo, hi)) in [&theta1, &theta2, &theta3].into_iter().zip(root_windows(t).iter()) {
            if !ball.inside_open(lo, hi) {
                return Err(Error::VerificationFailed(format!("root enclosure leaves its window at t = {t}")));
            }
        }
    }
    Ok(RootTriple { t, theta1, theta2, theta3, precision })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    /// Bisection on the exact rational polynomial.
    fn oracle_root(t: i64, lo: f64, hi: f64) -> f64 {
        let p = p_poly(t);
        let to_r = |v: f64| BigRational::from_float(v).unwrap();
        let (mut a, mut b) = (to_r(lo), to_r(hi));
        let sa = p.eval_rational(&a).numer().sign();
        for _ in 0..200 {
            let m = (&a + &b) / BigRational::from_integer(2.into());
            if p.eval_rational(&m).numer().sign() == sa {
                a = m;
            } else {
                b = m;
            }
        }
        a.to_f64().unwrap()
    }

    #[test]
    fn theta1_at_ten() {
        let r = isolate_roots(10, 200).unwrap();
        let want = oracle_root(10, -2e-5, -5e-6);
        assert!((r.theta1.to_f64() - want).abs() < 1e-20);
        assert!((r.theta1.to_f64() + 1.002_003_003_0e-5).abs() < 1e-15);
        assert!(r.theta1.radius_below_pow2(-200));
    }

    #[test]
    fn theta2_window_at_ten() {
        let r = isolate_roots(10, 128).unwrap();
        assert!(r.theta2.inside_open(&(rat(10, 1) + rat(1, 100_000)), &(rat(10, 1) + rat(113, 10_000_000))));
    }

    #[test]
    fn small_t_uses_sturm() {
        for t in [-30, -5, -1, 2, 3, 9] {
            let r = isolate_roots(t, 100).unwrap();
            let p = p_poly(t);
            for th in r.roots() {
                assert!(p.eval_ball(th).contains_zero(), "t = {t}");
            }
        }
        let r = isolate_roots(2, 128).unwrap();
        let prod = &(&r.theta1 * &r.theta2) * &r.theta3;
        assert!(prod.contains_rational(&rat(-1, 1)));
    }

    #[test]
    fn degenerate_parameters_rejected() {
        assert!(isolate_roots(0, 64).is_err());
        assert!(isolate_roots(1, 64).is_err());
    }

    #[test]
    fn large_t_windows() {
        for t in [10, 57, 1000, 576_241, 10_000_000] {
            let r = isolate_roots(t, default_precision(t)).unwrap();
            let p = p_poly(t);
            for th in r.roots() {
                assert!(p.eval_ball(th).contains_zero());
            }
        }
    }
}
