//! Error constants of the root expansions.
//!
//! Each `κ_j` is obtained by solving its defining identity for `κ_j` and
//! evaluating the result in ball arithmetic. For the solution-dependent
//! constants (`j` in 4, 7, 8, 11, 14) the ratio `x/y` enters as the whole
//! admissible interval for `|y| >= 2`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{default_precision, isolate_roots, RootTriple};
use crate::error::{Error, Result};
use crate::realnum::{parse_rational, CertifiedReal};

const T_ONLY: [u8; 11] = [1, 2, 3, 5, 6, 9, 10, 12, 13, 15, 16];
const ENVELOPE: [u8; 5] = [4, 7, 8, 11, 14];

const TARGETS: [(&str, &str); 16] = [
    ("3", "3.1"),
    ("8", "8.03"),
    ("5", "5.02"),
    ("1.8", "2.2"),
    ("7.99", "8.03"),
    ("3", "3.01"),
    ("3.8", "4.3"),
    ("0", "3.1"),
    ("0", "1.1"),
    ("4.9", "5"),
    ("4.5", "7.7"),
    ("4.5", "5.7"),
    ("2.9", "3.1"),
    ("25.9", "26.6"),
    ("2.9", "3.1"),
    ("-0.1", "0.1"),
];

/// Target open interval for `κ_j` as exact decimals.
pub fn kappa_target(j: u8) -> Result<(&'static str, &'static str)> {
    if !(1..=16).contains(&j) {
        return Err(Error::InvalidInput(format!("no constant κ{j}")));
    }
    Ok(TARGETS[j as usize - 1])
}

/// Exact inputs shared by all the formulas.
struct Ctx<'a> {
    t: CertifiedReal,
    ln_t: CertifiedReal,
    r: &'a RootTriple,
    prec: u32,
    t_int: BigInt,
}

impl<'a> Ctx<'a> {
    fn new(r: &'a RootTriple) -> Result<Self> {
        let prec = r.precision + 64;
        let t = CertifiedReal::from_int(r.t, prec);
        let ln_t = t.ln()?;
        Ok(Ctx { t, ln_t, r, prec, t_int: BigInt::from(r.t) })
    }

    fn int(&self, v: i64) -> CertifiedReal {
        CertifiedReal::from_int(v, self.prec)
    }

    /// `t^k`.
    fn tp(&self, k: u32) -> CertifiedReal {
        CertifiedReal::from_bigint(&num_traits::pow(self.t_int.clone(), k as usize), self.prec)
    }

    /// `c / t^k`.
    fn over_tp(&self, c: i64, k: u32) -> CertifiedReal {
        let den = num_traits::pow(self.t_int.clone(), k as usize);
        CertifiedReal::enclose_rational(&BigRational::new(c.into(), den), self.prec)
    }

    fn th(&self, i: usize) -> CertifiedReal {
        self.r.theta(i).with_precision(self.prec)
    }

    fn rational(&self, v: BigRational) -> CertifiedReal {
        CertifiedReal::enclose_rational(&v, self.prec)
    }

    /// `k ln t - c / t^3`.
    fn log_head(&self, k: i64, c: i64) -> CertifiedReal {
        &self.ln_t.mul_int(&BigInt::from(k)) - &self.over_tp(c, 3)
    }

    /// The admissible interval for `x/y` near `θ_i` with `|y| >= 2`.
    fn envelope(&self, i: usize) -> CertifiedReal {
        let t = BigRational::from_integer(self.t_int.clone());
        let t5 = BigRational::from_integer(num_traits::pow(self.t_int.clone(), 5));
        let t8 = BigRational::from_integer(num_traits::pow(self.t_int.clone(), 8));
        let wide = BigRational::new(113.into(), 100.into());
        let narrow = BigRational::new(7.into(), 8.into());
        let (lo, hi) = match i {
            1 => (-(&wide / &t5), -(&narrow / &t5)),
            2 => (&t + &narrow / &t5, &t + &wide / &t5),
            _ => {
                let top = &t * &t * &t * &t - BigRational::from_integer(2.into()) * &t;
                (&top - &wide / &t8, &top - &narrow / &t8)
            }
        };
        CertifiedReal::from_interval(&lo, &hi, self.prec)
    }
}

/// `κ_j` for the constants depending on `t` alone.
pub fn kappa_t_only(j: u8, roots: &RootTriple) -> Result<CertifiedReal> {
    if !T_ONLY.contains(&j) {
        return Err(Error::InvalidInput(format!("κ{j} is not a function of t alone")));
    }
    if roots.t < 10 {
        return Err(Error::InvalidInput("κ constants are defined for t >= 10".into()));
    }
    let c = Ctx::new(roots)?;
    let (th1, th2, th3) = (c.th(1), c.th(2), c.th(3));
    let t = &c.t;
    let v = match j {
        1 => -(&c.tp(11) * &(&(&th1 + &c.over_tp(1, 5)) + &c.over_tp(2, 8))),
        2 => &c.tp(11) * &(&(&(&th2 - t) - &c.over_tp(1, 5)) - &c.over_tp(3, 8)),
        3 => {
            let top = CertifiedReal::from_bigint(&(num_traits::pow(c.t_int.clone(), 4) - 2 * &c.t_int), c.prec);
            &c.tp(11) * &(&(&top - &c.over_tp(1, 8)) - &th3)
        }
        5 => {
            let ratio = (t - &th3).div(&(t - &th2))?;
            &c.tp(6) * &(&c.log_head(9, 6) - &ratio.ln()?)
        }
        6 => &c.tp(6) * &(&c.log_head(3, 2) - &th3.div(&th2)?.ln()?),
        9 => {
            let ratio = (&th3 - t).div(&(t - &th1))?;
            &c.tp(3) * &(&(&c.tp(3) - &c.int(3)) - &ratio)
        }
        10 => {
            let ratio = th3.div(&th1.abs()?)?;
            (&(&ratio - &c.tp(9)) + &c.tp(6).mul_int(&BigInt::from(4))).div(&c.tp(3))?
        }
        12 => {
            let ratio = (&th3 - t).div(&(t - &th1))?;
            &c.tp(6) * &(&c.log_head(3, 3) - &ratio.ln()?)
        }
        13 => &c.tp(6) * &(&c.log_head(9, 4) - &th3.div(&th1.abs()?)?.ln()?),
        15 => {
            let ratio = (t - &th1).div(&(&th2 - t))?;
            &c.tp(3) * &(&c.ln_t.mul_int(&BigInt::from(6)) - &ratio.ln()?)
        }
        16 => &c.tp(6) * &(&c.log_head(6, 2) - &th2.div(&th1.abs()?)?.ln()?),
        _ => unreachable!(),
    };
    Ok(v)
}

/// Enclosure of the solution-dependent `κ_j` over every admissible `x/y`.
pub fn kappa_envelope(j: u8, roots: &RootTriple) -> Result<CertifiedReal> {
    if !ENVELOPE.contains(&j) {
        return Err(Error::InvalidInput(format!("κ{j} does not depend on the solution")));
    }
    if roots.t < 10 {
        return Err(Error::InvalidInput("κ constants are defined for t >= 10".into()));
    }
    let c = Ctx::new(roots)?;
    let (th1, th2, th3) = (c.th(1), c.th(2), c.th(3));
    let v = match j {
        4 => {
            let r = c.envelope(1);
            let ratio = (&th3 - &r).div(&(&th2 - &r))?;
            &c.tp(3) * &(&(&c.tp(3) - &c.int(2)) - &ratio)
        }
        7 => {
            let r = c.envelope(1);
            let ratio = (&th3 - &r).div(&(&th2 - &r))?;
            &c.tp(6) * &(&c.log_head(3, 2) - &ratio.ln()?)
        }
        8 => {
            let r = c.envelope(2);
            let ratio = (&th3 - &r).div(&(&r - &th1))?;
            &c.tp(3) * &(&(&c.tp(3) - &c.int(3)) - &ratio)
        }
        11 => {
            let r = c.envelope(2);
            let ratio = (&th3 - &r).div(&(&r - &th1))?;
            &c.tp(6) * &(&c.log_head(3, 3) - &ratio.ln()?)
        }
        14 => {
            let r = c.envelope(3);
            // ln(1 + q) keeps the width of r out of the leading term
            let q = (&th2 - &th1).div(&(&r - &th2))?;
            let series = &(&c.over_tp(1, 3) + &c.rational(BigRational::new(5.into(), BigInt::from(2) * num_traits::pow(c.t_int.clone(), 6))))
                + &c.rational(BigRational::new(25.into(), BigInt::from(3) * num_traits::pow(c.t_int.clone(), 9)));
            let l = (&c.int(1) + &q).ln()?;
            &c.tp(12) * &(&l - &series)
        }
        _ => unreachable!(),
    };
    Ok(v)
}

/// One `(t, j)` row of a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KappaRow {
    pub t: i64,
    pub j: u8,
    pub enclosure: Option<CertifiedReal>,
    pub target: [String; 2],
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// All sixteen constants at one `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KappaReport {
    pub t: i64,
    pub precision: u32,
    pub rows: Vec<KappaRow>,
}

impl KappaReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

fn evaluate(j: u8, roots: &RootTriple) -> Result<CertifiedReal> {
    if T_ONLY.contains(&j) {
        kappa_t_only(j, roots)
    } else {
        kappa_envelope(j, roots)
    }
}

fn row(j: u8, t: i64, value: Result<CertifiedReal>) -> KappaRow {
    let (lo, hi) = TARGETS[j as usize - 1];
    let bounds = (parse_rational(lo).expect("target literal"), parse_rational(hi).expect("target literal"));
    let target = [lo.to_string(), hi.to_string()];
    match value {
        Ok(v) => {
            let pass = v.inside_open(&bounds.0, &bounds.1);
            KappaRow { t, j, enclosure: Some(v), target, pass, error: None }
        }
        Err(e) => KappaRow { t, j, enclosure: None, target, pass: false, error: Some(e.to_string()) },
    }
}

/// Certify all sixteen constants at `t >= 10`, escalating precision when an
/// enclosure is too wide to decide.
pub fn verify_kappas(t: i64) -> Result<KappaReport> {
    let p = default_precision(t);
    verify_kappas_with(t, p, p * 8)
}

/// As [`verify_kappas`] with explicit initial and maximal precision.
pub fn verify_kappas_with(t: i64, precision: u32, cap: u32) -> Result<KappaReport> {
    if t < 10 {
        return Err(Error::InvalidInput("κ constants are certified for t >= 10 only".into()));
    }
    let mut prec = precision.max(64);
    loop {
        let roots = isolate_roots(t, prec)?;
        let rows: Vec<KappaRow> = (1..=16u8).map(|j| row(j, t, evaluate(j, &roots))).collect();
        // a failure is final once the enclosure lies outside the target or
        // further precision is unavailable
        let undecided = rows.iter().any(|r| !r.pass && undecided(r));
        if !undecided || prec >= cap {
            return Ok(KappaReport { t, precision: prec, rows });
        }
        prec = (prec * 2).min(cap);
    }
}

fn undecided(r: &KappaRow) -> bool {
    let Some(v) = &r.enclosure else { return true };
    let lo = parse_rational(&r.target[0]).expect("target literal");
    let hi = parse_rational(&r.target[1]).expect("target literal");
    // midpoint inside the target: more precision may shrink the ball into it
    let m = v.mid().to_rational();
    lo < m && m < hi
}
