//! Baker–Davenport reduction of `Λ = μα + νβ + δ` for a single `t`, and the
//! range driver that applies it to every `t` in an interval.
//!
//! The instance replaces `α/β` and `δ/β` by the exact dyadic midpoints of
//! their enclosures. The enclosure radii certify how close these are, so
//! everything downstream (convergents, `q‖qγ2‖`) is exact rational work.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{lambda_coefficient, lambda_logs};
use crate::error::{Error, Result};
use crate::exponents::{growth_coefficients, SolutionType};
use crate::realnum::{continued_fraction_convergents, rational_to_string, reduction_precision, CertifiedReal, Convergent};
use crate::roots_asym::isolate_roots;
use crate::SCHEMA_VERSION;

/// Number of doublings tried after a precision failure.
pub const MAX_ESCALATIONS: u32 = 3;

/// Bits spent on the logarithmic lower bound and the margin.
const BOUND_PREC: u32 = 128;

/// `A = 3 · 10^18`.
pub fn default_a() -> BigInt {
    BigInt::from(3_000_000_000_000_000_000u64)
}

/// `Q = 10^60`.
pub fn default_q() -> BigInt {
    BigInt::from(10).pow(60u32)
}

/// One application of the reduction lemma.
///
/// `which = 0` marks a synthetic instance that is not attached to the
/// family; no contradiction margin is computed for it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionInstance {
    pub which: u8,
    pub t: i64,
    pub alpha: CertifiedReal,
    pub beta: CertifiedReal,
    pub delta: CertifiedReal,
    #[serde(with = "crate::json_int")]
    pub a: BigInt,
    #[serde(with = "crate::json_int")]
    pub q_bound: BigInt,
    /// Exact; within `1/(100 Q^2)` of `α/β`.
    pub gamma1: CertifiedReal,
    /// Exact; within `1/Q^2` of `δ/β`.
    pub gamma2: CertifiedReal,
    pub precision: u32,
}

/// Outcome of [`baker_davenport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub success: bool,
    pub convergent: Option<Convergent>,
    /// `q ‖q γ2‖` at the chosen convergent, exact.
    pub q_distance: Option<String>,
    /// `ln(|β| / Q^2)`, a lower bound for `ln|Λ|`.
    pub log_lower_bound: Option<CertifiedReal>,
    /// `ln(|β| / Q^2)` minus the upper bound for `ln|Λ|`.
    pub margin: Option<CertifiedReal>,
}

impl Verdict {
    fn failure() -> Self {
        Verdict { success: false, convergent: None, q_distance: None, log_lower_bound: None, margin: None }
    }
}

fn check_which(which: u8) -> Result<()> {
    if (1..=3).contains(&which) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("no linear form Λ{which}")))
    }
}

fn bitlen(t: i64) -> u32 {
    64 - t.unsigned_abs().leading_zeros()
}

/// Precision for the roots so that the logarithms keep `precision` bits
/// despite `θ1` and `t - θ2` being of size `t^-5`.
pub fn root_precision(t: i64, precision: u32) -> u32 {
    precision + 5 * bitlen(t) + 32
}

/// Build the instance for `Λ_which` at `t`: `μ` is the coefficient of `α`
/// (`m`), `ν` that of `β` (`n`).
pub fn build_instance(which: u8, t: i64, a: &BigInt, q_bound: &BigInt, precision: u32) -> Result<ReductionInstance> {
    check_which(which)?;
    if t < 10 {
        return Err(Error::InvalidInput("reduction is run for t >= 10".into()));
    }
    let roots = isolate_roots(t, root_precision(t, precision))?;
    let [l1, l2, l3] = lambda_logs(which, &roots)?;
    let alpha = if which == 1 { -l1 } else { l1 };
    let mut inst = instance_from_logs(alpha, l2, l3, a, q_bound)?;
    inst.which = which;
    inst.t = t;
    inst.precision = precision;
    Ok(inst)
}

/// Instance from given enclosures of `α, β, δ`, with `which = 0`.
pub fn instance_from_logs(
    alpha: CertifiedReal,
    beta: CertifiedReal,
    delta: CertifiedReal,
    a: &BigInt,
    q_bound: &BigInt,
) -> Result<ReductionInstance> {
    if !a.is_positive() || !q_bound.is_positive() {
        return Err(Error::InvalidInput("A and Q must be positive".into()));
    }
    let r1 = alpha.div(&beta)?;
    let r2 = delta.div(&beta)?;
    let q2 = BigRational::from_integer(q_bound * q_bound);
    if !r1.radius_below(&(q2.recip() / BigRational::from_integer(100.into()))) {
        return Err(Error::PrecisionInsufficient("α/β enclosure wider than 1/(100 Q^2)".into()));
    }
    if !r2.radius_below(&q2.recip()) {
        return Err(Error::PrecisionInsufficient("δ/β enclosure wider than 1/Q^2".into()));
    }
    let precision = alpha.precision();
    let gamma1 = CertifiedReal::exact(r1.mid().clone(), r1.precision());
    let gamma2 = CertifiedReal::exact(r2.mid().clone(), r2.precision());
    Ok(ReductionInstance {
        which: 0,
        t: 0,
        alpha,
        beta,
        delta,
        a: a.clone(),
        q_bound: q_bound.clone(),
        gamma1,
        gamma2,
        precision,
    })
}

/// `1.01 A + 2`.
pub fn distance_threshold(a: &BigInt) -> BigRational {
    BigRational::new(a * 101 + 200, BigInt::from(100))
}

/// `q ‖q x‖` for exact `x`.
pub fn q_times_distance(q: &BigInt, x: &BigRational) -> BigRational {
    let v = x * BigRational::from_integer(q.clone());
    let frac = &v - BigRational::from_integer(v.floor().to_integer());
    let dist = frac.clone().min(BigRational::one() - frac);
    dist * BigRational::from_integer(q.clone())
}

/// Scan convergents of `γ1` with `q <= Q` upward and stop at the first with
/// `q ‖q γ2‖ >= 1.01 A + 2`; then `|Λ| > |β| / Q^2`.
pub fn baker_davenport(inst: &ReductionInstance) -> Result<Verdict> {
    let g1 = inst.gamma1.mid().to_rational();
    let g2 = inst.gamma2.mid().to_rational();
    let threshold = distance_threshold(&inst.a);
    let convergents = continued_fraction_convergents(&inst.gamma1, &inst.q_bound)?;
    debug_assert!(convergents.iter().all(|c| c.satisfies_law(&g1)));
    let Some((conv, dist)) = convergents
        .into_iter()
        .map(|c| {
            let d = q_times_distance(&c.q, &g2);
            (c, d)
        })
        .find(|(_, d)| *d >= threshold)
    else {
        return Ok(Verdict::failure());
    };
    let lower = log_lower_bound(&inst.beta, &inst.q_bound)?;
    let margin = if inst.which == 0 { None } else { Some(contradiction_margin(inst.which, inst.t, &lower)?) };
    Ok(Verdict {
        success: true,
        convergent: Some(conv),
        q_distance: Some(rational_to_string(&dist, 12)),
        log_lower_bound: Some(lower),
        margin,
    })
}

/// `ln(|β| / Q^2)`.
pub fn log_lower_bound(beta: &CertifiedReal, q_bound: &BigInt) -> Result<CertifiedReal> {
    let b = beta.with_precision(BOUND_PREC).abs()?.ln()?;
    let lq = CertifiedReal::from_bigint(q_bound, BOUND_PREC).ln()?;
    Ok(&b - &lq.mul_int(&BigInt::from(2)))
}

/// Upper bound for `ln|Λ_which|` at the smallest admissible exponent:
/// `ln 2 - c · c' t^k ln^2 t`.
pub fn contradiction_threshold(which: u8, t: i64) -> Result<CertifiedReal> {
    let kind = match which {
        1 => SolutionType::TypeI,
        2 => SolutionType::TypeII,
        3 => SolutionType::TypeIII,
        _ => return Err(Error::InvalidInput(format!("no linear form Λ{which}"))),
    };
    let (g, k) = growth_coefficients(kind)?;
    let c = lambda_coefficient(which)? * g * BigRational::from_integer(num_traits::pow(BigInt::from(t), k as usize));
    let ln_t = CertifiedReal::from_int(t, BOUND_PREC).ln()?;
    let main = &CertifiedReal::enclose_rational(&c, BOUND_PREC) * &ln_t.sqr();
    Ok(&CertifiedReal::ln2(BOUND_PREC) - &main)
}

/// `lower - contradiction_threshold(which, t)`.
pub fn contradiction_margin(which: u8, t: i64, lower: &CertifiedReal) -> Result<CertifiedReal> {
    Ok(lower - &contradiction_threshold(which, t)?)
}

/// True iff the verdict succeeded and its bound certifiably exceeds the
/// upper bound for `ln|Λ_which|`.
pub fn contradiction_check(which: u8, t: i64, verdict: &Verdict) -> bool {
    let Some(lower) = verdict.log_lower_bound.as_ref().filter(|_| verdict.success) else {
        return false;
    };
    contradiction_margin(which, t, lower).map(|m| m.is_positive()).unwrap_or(false)
}

/// Independent re-check of a successful verdict against its instance.
pub fn reverify(inst: &ReductionInstance, verdict: &Verdict) -> bool {
    let Some(c) = verdict.convergent.as_ref().filter(|_| verdict.success) else {
        return false;
    };
    if !c.q.is_positive() || c.q > inst.q_bound || !c.p.gcd(&c.q).is_one() {
        return false;
    }
    let g1 = inst.gamma1.mid().to_rational();
    let g2 = inst.gamma2.mid().to_rational();
    let q = BigRational::from_integer(c.q.clone());
    let err = (&g1 - BigRational::new(c.p.clone(), c.q.clone())).abs();
    if err >= (&q * &q).recip() {
        return false;
    }
    q_times_distance(&c.q, &g2) >= distance_threshold(&inst.a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Success,
    Failed,
    Inconclusive,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Success => "success",
            Status::Failed => "failed",
            Status::Inconclusive => "inconclusive",
        })
    }
}

/// One line of a range report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeRecord {
    pub schema: u32,
    pub which: u8,
    pub t: i64,
    pub precision: u32,
    /// The `Q` that was finally used.
    pub q_bound: String,
    /// Denominator of the chosen convergent.
    pub q: Option<String>,
    /// Lower end of `ln(|β| / Q^2)`.
    pub bound: Option<String>,
    /// Lower end of the contradiction margin.
    pub margin: Option<String>,
    pub status: Status,
    pub note: Option<String>,
}

fn lower_str(x: &CertifiedReal) -> String {
    rational_to_string(&x.lower().to_rational(), 10)
}

fn attempt(which: u8, t: i64, a: &BigInt, q_bound: &BigInt, precision: u32) -> Result<(u32, ReductionInstance, Verdict)> {
    let mut prec = precision;
    let mut last = None;
    for _ in 0..=MAX_ESCALATIONS {
        let run = build_instance(which, t, a, q_bound, prec).and_then(|inst| baker_davenport(&inst).map(|v| (inst, v)));
        match run {
            Ok((inst, v)) => return Ok((prec, inst, v)),
            Err(e) if e.is_precision() => {
                last = Some(e);
                prec *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Reduce a single `t`, escalating precision and then `Q` once.
pub fn verify_t(which: u8, t: i64, a: &BigInt, q_bound: &BigInt, precision_cap: Option<u32>) -> RangeRecord {
    let mut rec = RangeRecord {
        schema: SCHEMA_VERSION,
        which,
        t,
        precision: 0,
        q_bound: q_bound.to_string(),
        q: None,
        bound: None,
        margin: None,
        status: Status::Inconclusive,
        note: None,
    };
    let mut qs = vec![q_bound.clone()];
    qs.push(q_bound * BigInt::from(100_000));
    for q in &qs {
        let mut start = reduction_precision(q);
        if let Some(cap) = precision_cap {
            start = start.min(cap);
        }
        rec.q_bound = q.to_string();
        match attempt(which, t, a, q, start) {
            Ok((prec, inst, verdict)) => {
                rec.precision = prec;
                if !verdict.success {
                    rec.note = Some("no convergent meets the distance condition".into());
                    continue;
                }
                if !reverify(&inst, &verdict) {
                    rec.status = Status::Failed;
                    rec.note = Some("verdict failed re-verification".into());
                    return rec;
                }
                rec.q = verdict.convergent.as_ref().map(|c| c.q.to_string());
                rec.bound = verdict.log_lower_bound.as_ref().map(lower_str);
                rec.margin = verdict.margin.as_ref().map(lower_str);
                let holds = contradiction_check(which, t, &verdict);
                rec.status = if holds { Status::Success } else { Status::Failed };
                rec.note = (!holds).then(|| "lower bound does not contradict the upper bound".into());
                return rec;
            }
            Err(e) if e.is_precision() => {
                rec.precision = start << MAX_ESCALATIONS;
                rec.note = Some(e.to_string());
                return rec;
            }
            Err(e) => {
                rec.status = Status::Failed;
                rec.note = Some(e.to_string());
                return rec;
            }
        }
    }
    rec
}

/// Per-`t` records, in input order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeReport {
    pub which: u8,
    pub records: Vec<RangeRecord>,
}

impl RangeReport {
    pub fn count(&self, status: Status) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    pub fn all_success(&self) -> bool {
        self.records.iter().all(|r| r.status == Status::Success)
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidInput(format!("worker pool: {e}")))
}

/// Reduce every `t` in `ts` on `workers` threads; output order follows `ts`.
pub fn verify_values(
    which: u8,
    ts: &[i64],
    a: &BigInt,
    q_bound: &BigInt,
    workers: usize,
    precision_cap: Option<u32>,
) -> Result<RangeReport> {
    check_which(which)?;
    if let Some(&t) = ts.iter().find(|&&t| t < 10) {
        return Err(Error::InvalidInput(format!("reduction is run for t >= 10, got {t}")));
    }
    let records = pool(workers)?.install(|| ts.par_iter().map(|&t| verify_t(which, t, a, q_bound, precision_cap)).collect());
    Ok(RangeReport { which, records })
}

/// [`verify_values`] over `t_lo ..= t_hi`; empty when `t_lo > t_hi`.
pub fn verify_range(which: u8, t_lo: i64, t_hi: i64, a: &BigInt, q_bound: &BigInt, workers: usize) -> Result<RangeReport> {
    let ts: Vec<i64> = (t_lo..=t_hi).collect();
    verify_values(which, &ts, a, q_bound, workers, None)
}
