//! Acceptance run: one PASS/FAIL line per criterion, each with its time
//! budget. Exits non-zero if any criterion fails.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use thue_core::bounds::{derive_t_max, family_coefficient, siegel_residual};
use thue_core::exponents::{reconstruct, recover_exponents};
use thue_core::forms::{f3, f3_discriminant_polynomial, known_solutions, Solution};
use thue_core::realnum::{continued_fraction_convergents, parse_rational, CertifiedReal};
use thue_core::reduction::{
    baker_davenport, default_a, default_q, distance_threshold, instance_from_logs, q_times_distance, verify_values, Status,
};
use thue_core::roots_asym::{isolate_roots, verify_kappas};
use thue_core::search::{theorem_report, verify_sporadic_tables};
use thue_core::sweep::{desk_slice, DEFAULT_SEED};

type Outcome = Result<(bool, String), String>;

fn rat(s: &str) -> BigRational {
    parse_rational(s).unwrap()
}

fn matveev_constant() -> Outcome {
    let c = family_coefficient().map_err(|e| e.to_string())?;
    let ok = c.lower().to_rational() >= rat("8.30e15") && c.upper().to_rational() <= rat("8.40e15");
    Ok((ok, format!("coefficient {:.6e}", c.to_f64())))
}

fn absolute_bound() -> Outcome {
    let r = derive_t_max(2).map_err(|e| e.to_string())?;
    let ok = r.t_max == 576_241
        && r.n_max.lower().to_rational() >= rat("8.8e18")
        && r.n_max.upper().to_rational() <= rat("9.0e18");
    Ok((ok, format!("t_max {} n_max {:.4e}", r.t_max, r.n_max.to_f64())))
}

fn kappa_certification() -> Outcome {
    let mut ts: Vec<i64> = (10..=2000).collect();
    ts.extend([1_000, 10_000, 100_000, 1_000_000, 576_241]);
    let bad: Vec<i64> = ts
        .iter()
        .copied()
        .filter(|&t| !verify_kappas(t).map(|r| r.all_pass()).unwrap_or(false))
        .collect();
    Ok((bad.is_empty(), format!("{} values of t, failing {:?}", ts.len(), &bad[..bad.len().min(10)])))
}

fn reduction_slice() -> Outcome {
    let ts = desk_slice(DEFAULT_SEED);
    let rep = verify_values(2, &ts, &default_a(), &default_q(), 4, None).map_err(|e| e.to_string())?;
    let mut worst = f64::INFINITY;
    let mut bad = Vec::new();
    for r in &rep.records {
        let margin: f64 = r.margin.as_deref().and_then(|m| m.parse().ok()).unwrap_or(f64::NEG_INFINITY);
        worst = worst.min(margin);
        if r.status != Status::Success || margin <= 100.0 {
            bad.push(r.t);
        }
    }
    Ok((bad.is_empty(), format!("{} values of t, min margin {worst:.1}, failing {:?}", ts.len(), &bad[..bad.len().min(10)])))
}

fn theorem_small_t() -> Outcome {
    let mut bad = Vec::new();
    for t in (-30..=30).filter(|t| *t != 0 && *t != 1) {
        let r = theorem_report(t, 5000).map_err(|e| e.to_string())?;
        if r.matches_expected != Some(true) {
            bad.push(t);
        }
    }
    let r = theorem_report(-1, 5000).map_err(|e| e.to_string())?;
    let six = r.count == 6 && r.solutions.contains(&Solution::new(6, -5));
    Ok((bad.is_empty() && six, format!("mismatches {bad:?}, t = -1 count {}", r.count)))
}

fn tables() -> Outcome {
    let reps = verify_sporadic_tables(10_000).map_err(|e| e.to_string())?;
    let counts: Vec<usize> = reps.iter().map(|r| r.search.count).collect();
    Ok((reps.iter().all(|r| r.pass), format!("counts {counts:?}")))
}

fn discriminant_identity() -> Outcome {
    let bad: Vec<i64> = (-100..=100).filter(|&t| f3(t).discriminant() != f3_discriminant_polynomial(t)).collect();
    Ok((bad.is_empty(), format!("mismatches {bad:?}")))
}

fn exponent_recovery() -> Outcome {
    let mut bad = Vec::new();
    for t in 2..=100i64 {
        let tb = BigInt::from(t);
        let want = |s: &Solution| -> Option<(i64, i64)> {
            if s.x == &BigInt::one() - tb.pow(3) {
                Some((-1, -4))
            } else if s.y.is_one() && s.x == tb {
                Some((1, 0))
            } else if s.y.is_one() && s.x == tb.pow(4) - 2 * &tb {
                Some((-1, 1))
            } else {
                None
            }
        };
        for s in known_solutions(t).solutions {
            let ok = match recover_exponents(t, &s.x, &s.y) {
                Ok(p) => {
                    reconstruct(t, &p).ok().as_ref() == Some(&s) && want(&s).is_none_or(|nm| nm == (p.n, p.m))
                }
                Err(_) => false,
            };
            if !ok {
                bad.push((t, s.to_string()));
            }
        }
    }
    Ok((bad.is_empty(), format!("failing {:?}", &bad[..bad.len().min(5)])))
}

fn euclid(x: &BigRational, bound: &BigInt) -> Vec<(BigInt, BigInt)> {
    let (mut num, mut den) = (x.numer().clone(), x.denom().clone());
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let mut out = Vec::new();
    while !den.is_zero() {
        let (a, r) = num.div_mod_floor(&den);
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if &q2 > bound {
            break;
        }
        out.push((p2.clone(), q2.clone()));
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        (num, den) = (den, r);
    }
    out
}

fn properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut notes = Vec::new();

    // Siegel identity
    let mut siegel_bad = 0;
    for _ in 0..1000 {
        let t = loop {
            let t = rng.gen_range(-1000i64..=1000);
            if t != 0 && t != 1 {
                break t;
            }
        };
        let roots = isolate_roots(t, 160).map_err(|e| e.to_string())?;
        let x = BigInt::from(rng.gen_range(-1_000_000_000_000i64..=1_000_000_000_000));
        let y = BigInt::from(rng.gen_range(-1_000_000_000_000i64..=1_000_000_000_000));
        if !siegel_residual(&roots, &x, &y).contains_zero() {
            siegel_bad += 1;
        }
    }
    notes.push(format!("siegel {siegel_bad}"));

    // enclosures contain the exact value at every point of their inputs
    let mut incl_bad = 0;
    for _ in 0..10_000 {
        let r = |rng: &mut ChaCha8Rng| BigRational::new(rng.gen_range(-10_000i64..=10_000).into(), rng.gen_range(1i64..=997).into());
        let (x, y) = (r(&mut rng), r(&mut rng));
        let w = BigRational::new(BigInt::one(), BigInt::from(rng.gen_range(1i64..=1_000_000)));
        let prec = rng.gen_range(24u32..=200);
        let xb = CertifiedReal::from_interval(&(&x - &w), &(&x + &w), prec);
        let yb = CertifiedReal::from_interval(&(&y - &w), &(&y + &w), prec);
        let mut ok = (&xb + &yb).contains_rational(&(&x + &y))
            && (&xb - &yb).contains_rational(&(&x - &y))
            && (&xb * &yb).contains_rational(&(&x * &y));
        if let Ok(q) = xb.div(&yb) {
            ok &= q.contains_rational(&(&x / &y));
        }
        if x.is_positive() {
            if let (Ok(wide), Ok(point)) = (xb.ln(), CertifiedReal::enclose_rational(&x, prec).ln()) {
                ok &= wide.overlaps(&point);
            }
        }
        if !ok {
            incl_bad += 1;
        }
    }
    notes.push(format!("inclusion {incl_bad}"));

    // convergents of exact dyadic rationals against Euclid
    let mut cf_bad = 0;
    for _ in 0..1000 {
        let num = BigInt::from(rng.gen_range(-(1i64 << 50)..=(1i64 << 50)));
        let k = rng.gen_range(0u32..=60);
        let x = BigRational::new(num, BigInt::one() << k);
        let bound = BigInt::from(10).pow(rng.gen_range(1u32..=25));
        let ball = CertifiedReal::enclose_rational(&x, 128);
        let ours: Vec<(BigInt, BigInt)> = continued_fraction_convergents(&ball, &bound)
            .map(|v| v.into_iter().map(|c| (c.p, c.q)).collect())
            .unwrap_or_default();
        if ours != euclid(&x, &bound) {
            cf_bad += 1;
        }
    }
    notes.push(format!("continued fractions {cf_bad}"));

    // Baker–Davenport against all convergents
    let mut bd_bad = 0;
    for _ in 0..100 {
        let prec = 256;
        let ln_r = |rng: &mut ChaCha8Rng| {
            let p = rng.gen_range(2i64..=1000);
            let q = rng.gen_range(1i64..p);
            CertifiedReal::ratio(p, q, prec).ln().unwrap()
        };
        let (a1, b1, d1) = (ln_r(&mut rng), ln_r(&mut rng), ln_r(&mut rng));
        let a = BigInt::from(rng.gen_range(1i64..=10_000));
        let q_bound = BigInt::from(10).pow(rng.gen_range(4u32..=20));
        let inst = instance_from_logs(a1, b1, d1, &a, &q_bound).map_err(|e| e.to_string())?;
        let v = baker_davenport(&inst).map_err(|e| e.to_string())?;
        let g1 = inst.gamma1.mid().to_rational();
        let g2 = inst.gamma2.mid().to_rational();
        let th = distance_threshold(&a);
        let want = euclid(&g1, &q_bound).into_iter().find(|(_, q)| q_times_distance(q, &g2) >= th).map(|(_, q)| q);
        if v.convergent.map(|c| c.q) != want || v.success != want.is_some() {
            bd_bad += 1;
        }
    }
    notes.push(format!("reduction oracle {bd_bad}"));

    let ok = siegel_bad + incl_bad + cf_bad + bd_bad == 0;
    Ok((ok, notes.join(", ")))
}

fn main() {
    let criteria: Vec<(&str, Duration, fn() -> Outcome)> = vec![
        ("1 matveev constant", Duration::from_secs(1), matveev_constant),
        ("2 absolute bound", Duration::from_secs(1), absolute_bound),
        ("3 kappa certification", Duration::from_secs(600), kappa_certification),
        ("4 reduction sweep slice", Duration::from_secs(1800), reduction_slice),
        ("5 bounded theorem check", Duration::from_secs(300), theorem_small_t),
        ("6 sporadic tables", Duration::from_secs(600), tables),
        ("7 discriminant identity", Duration::from_secs(1), discriminant_identity),
        ("8 exponent recovery", Duration::from_secs(120), exponent_recovery),
        ("9 property suites", Duration::from_secs(600), properties),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok((ok, d)) => (ok && took <= budget, d),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("{verdict} [{name}] {:.2}s (budget {}s): {detail}", took.as_secs_f64(), budget.as_secs());
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
