//! `thue-verify`: runs the verification pipeline for `F_{3,t}(x, y) = 1`.
//!
//! Results go to stdout (or `--output`) as JSON lines, one object per
//! record, each tagged with `schema` and `kind`. A short human summary goes
//! to stderr.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 inconclusive,
//! 3 usage error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{Map, Value};

use thue_core::bounds::{derive_t_max, family_coefficient, family_w0_prefactor, matveev_for_family};
use thue_core::exponents::{classify, recover_exponents};
use thue_core::forms::{known_solutions, BinaryCubicForm, Solution};
use thue_core::realnum::{parse_integer, parse_rational};
use thue_core::reduction::{default_a, default_q, verify_values, RangeReport, Status};
use thue_core::roots_asym::{default_precision, isolate_roots, verify_kappas_with};
use thue_core::search::{theorem_report, thue_solutions_bruteforce, verify_sporadic_tables};
use thue_core::sweep::{desk_slice, full_range, run_sweep, sweep_values, SweepJob, CHECKPOINT_EVERY, DEFAULT_SEED};
use thue_core::{Error, SCHEMA_VERSION};

#[derive(Parser, Debug)]
#[command(name = "thue-verify", version, about = "Certified verification for x^3 - (t^4-t)x^2y + (t^5-2t^2)xy^2 + y^3 = 1")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// Single parameter value.
    #[arg(long, global = true, allow_negative_numbers = true)]
    t: Option<i64>,
    /// Lower end of a parameter range.
    #[arg(long, global = true, allow_negative_numbers = true)]
    t_lo: Option<i64>,
    /// Upper end of a parameter range.
    #[arg(long, global = true, allow_negative_numbers = true)]
    t_hi: Option<i64>,
    /// Linear form (1, 2 or 3).
    #[arg(long, global = true, default_value_t = 2)]
    which: u8,
    /// Working precision in bits.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Highest starting precision for reduction work.
    #[arg(long, global = true, env = "THUE_PRECISION_CAP")]
    precision_cap: Option<u32>,
    /// Reduction bound Q; accepts literals such as 1e60.
    #[arg(long = "Q", alias = "q", global = true, value_parser = positive_integer)]
    q: Option<BigInt>,
    /// Bound A on the coefficient of α; accepts literals such as 3e18.
    #[arg(long = "A", alias = "a", global = true, value_parser = positive_integer)]
    a: Option<BigInt>,
    #[arg(long, global = true)]
    y_bound: Option<u64>,
    #[arg(long, global = true, env = "THUE_WORKERS", default_value_t = 4)]
    workers: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Number of sampled t beyond the range in `sweep`.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Sweep every t in [10, 576241].
    #[arg(long, global = true)]
    full: bool,
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    #[arg(long, global = true)]
    checkpoint: Option<PathBuf>,
    /// Form coefficients a,b,c,d for `search`.
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    form: Option<Vec<i64>>,
    #[arg(long, global = true, allow_negative_numbers = true, value_parser = any_integer)]
    x: Option<BigInt>,
    #[arg(long, global = true, allow_negative_numbers = true, value_parser = any_integer)]
    y: Option<BigInt>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Certified roots of F(x, 1).
    Roots,
    /// Certify the sixteen κ constants.
    Kappas,
    /// Recover unit exponents of solutions.
    Exponents,
    /// Matveev's bound for the family.
    Matveev,
    /// The absolute bound on t.
    Tmax,
    /// Baker–Davenport reduction at given t.
    Reduce,
    /// Resumable reduction sweep.
    Sweep,
    /// Bounded search for solutions of one form.
    Search,
    /// Compare bounded search with the known solutions.
    VerifyTheorem,
    /// Check the listed forms and their solution counts.
    VerifyTables,
    /// Run every stage in order.
    CertifyAll,
}

fn positive_integer(s: &str) -> Result<BigInt, String> {
    let v = parse_integer(s).map_err(|e| e.to_string())?;
    if v <= BigInt::from(0) {
        return Err("must be positive".into());
    }
    Ok(v)
}

fn any_integer(s: &str) -> Result<BigInt, String> {
    parse_integer(s).map_err(|e| e.to_string())
}

/// Settings after defaults are applied.
#[derive(Debug, Clone)]
struct RunConfig {
    command: Command,
    ts: Vec<i64>,
    which: u8,
    precision: Option<u32>,
    precision_cap: Option<u32>,
    q: BigInt,
    a: BigInt,
    y_bound: Option<u64>,
    workers: usize,
    seed: u64,
}

/// Worst outcome seen so far; the exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Pass,
    Inconclusive,
    Fail,
}

impl Outcome {
    fn code(self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Inconclusive => 2,
        }
    }

    fn severity(self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Inconclusive => 1,
            Outcome::Fail => 2,
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

struct Run {
    out: Box<dyn Write>,
    outcome: Outcome,
}

impl Run {
    fn emit<T: Serialize>(&mut self, kind: &str, v: &T) -> io::Result<()> {
        let mut obj = match serde_json::to_value(v).expect("record serializes") {
            Value::Object(m) => m,
            other => {
                let mut m = Map::new();
                m.insert("value".into(), other);
                m
            }
        };
        obj.insert("schema".into(), SCHEMA_VERSION.into());
        obj.insert("kind".into(), kind.into());
        writeln!(self.out, "{}", Value::Object(obj))
    }

    fn note(&mut self, o: Outcome) {
        if o.severity() > self.outcome.severity() {
            self.outcome = o;
        }
    }
}

fn usage(msg: impl std::fmt::Display) -> Error {
    Error::InvalidInput(msg.to_string())
}

fn range(opts: &Opts) -> Result<Vec<i64>, Error> {
    match (opts.t, opts.t_lo, opts.t_hi) {
        (Some(t), None, None) => Ok(vec![t]),
        (None, Some(lo), Some(hi)) if lo <= hi => Ok((lo..=hi).collect()),
        (None, Some(_), Some(_)) => Err(usage("empty range: --t-lo exceeds --t-hi")),
        (None, None, None) => Ok(Vec::new()),
        _ => Err(usage("give either --t or both --t-lo and --t-hi")),
    }
}

fn require(ts: Vec<i64>) -> Result<Vec<i64>, Error> {
    if ts.is_empty() {
        Err(usage("this command needs --t or --t-lo/--t-hi"))
    } else {
        Ok(ts)
    }
}

fn config(cli: &Cli) -> Result<RunConfig, Error> {
    let opts = &cli.opts;
    if !(1..=3).contains(&opts.which) {
        return Err(usage("--which must be 1, 2 or 3"));
    }
    if opts.workers == 0 {
        return Err(usage("--workers must be positive"));
    }
    Ok(RunConfig {
        command: cli.command,
        ts: range(opts)?,
        which: opts.which,
        precision: opts.precision,
        precision_cap: opts.precision_cap,
        q: opts.q.clone().unwrap_or_else(default_q),
        a: opts.a.clone().unwrap_or_else(default_a),
        y_bound: opts.y_bound,
        workers: opts.workers,
        seed: opts.seed,
    })
}

fn kappas(run: &mut Run, cfg: &RunConfig, ts: &[i64]) -> Result<(), Error> {
    let mut failed = Vec::new();
    for &t in ts {
        let p = cfg.precision.unwrap_or_else(|| default_precision(t));
        let rep = verify_kappas_with(t, p, p * 8)?;
        if !rep.all_pass() {
            failed.push(t);
        }
        run.emit("kappas", &rep).map_err(io_error)?;
    }
    eprintln!("kappas: {} values of t, {} failing {:?}", ts.len(), failed.len(), &failed[..failed.len().min(10)]);
    run.note(Outcome::from_bool(failed.is_empty()));
    Ok(())
}

fn matveev(run: &mut Run, cfg: &RunConfig) -> Result<(), Error> {
    let c = family_coefficient()?;
    let w = family_w0_prefactor()?;
    let lo = parse_rational("8.30e15").expect("literal");
    let hi = parse_rational("8.40e15").expect("literal");
    let ok = c.lower().to_rational() >= lo && c.upper().to_rational() <= hi;
    #[derive(Serialize)]
    struct Constant {
        coefficient: String,
        w0_prefactor: String,
        within_expected: bool,
    }
    run.emit("matveev_constant", &Constant { coefficient: c.to_string(), w0_prefactor: w.to_string(), within_expected: ok })
        .map_err(io_error)?;
    eprintln!("matveev: coefficient {:.6e}, W0 prefactor {:.4}", c.to_f64(), w.to_f64());
    run.note(Outcome::from_bool(ok));
    for &t in &cfg.ts {
        match matveev_for_family(cfg.which, t) {
            Ok(rep) => {
                eprintln!("matveev: t = {t}: {}", rep.bound);
                run.emit("matveev", &rep).map_err(io_error)?;
            }
            Err(e @ Error::HeightBoundViolated(_)) => {
                eprintln!("matveev: t = {t}: {e}");
                run.note(Outcome::Fail);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

fn tmax(run: &mut Run, cfg: &RunConfig) -> Result<(), Error> {
    let r = derive_t_max(cfg.which)?;
    eprintln!("tmax: t_max = {}, n_max ≈ {:.4e}", r.t_max, r.n_max.to_f64());
    run.emit("tmax", &r).map_err(io_error)
}

fn report_outcome(rep: &RangeReport) -> Outcome {
    if rep.count(Status::Failed) > 0 {
        Outcome::Fail
    } else if rep.count(Status::Inconclusive) > 0 {
        Outcome::Inconclusive
    } else {
        Outcome::Pass
    }
}

fn reduce(run: &mut Run, cfg: &RunConfig, ts: &[i64]) -> Result<(), Error> {
    let rep = verify_values(cfg.which, ts, &cfg.a, &cfg.q, cfg.workers, cfg.precision_cap)?;
    for r in &rep.records {
        run.emit("reduction", r).map_err(io_error)?;
    }
    eprintln!(
        "reduce: Λ{} over {} values of t: {} success, {} failed, {} inconclusive",
        cfg.which,
        rep.records.len(),
        rep.count(Status::Success),
        rep.count(Status::Failed),
        rep.count(Status::Inconclusive)
    );
    run.note(report_outcome(&rep));
    Ok(())
}

fn sweep(run: &mut Run, cfg: &RunConfig, opts: &Opts) -> Result<(), Error> {
    let ts = if opts.full {
        full_range()
    } else if cfg.ts.is_empty() {
        match opts.samples {
            Some(n) => sweep_values(10, 2000, n, 576_241, cfg.seed),
            None => desk_slice(cfg.seed),
        }
    } else {
        let hi = *cfg.ts.last().expect("nonempty");
        sweep_values(cfg.ts[0], hi, opts.samples.unwrap_or(0), 576_241, cfg.seed)
    };
    let job = SweepJob {
        which: cfg.which,
        ts,
        a: cfg.a.clone(),
        q_bound: cfg.q.clone(),
        workers: cfg.workers,
        precision_cap: cfg.precision_cap,
        output: opts.output.clone().unwrap_or_else(|| PathBuf::from("sweep.jsonl")),
        csv: opts.csv.clone(),
        checkpoint: opts.checkpoint.clone(),
        checkpoint_every: CHECKPOINT_EVERY,
    };
    if opts.output.is_none() {
        eprintln!("sweep: records go to {}", job.output.display());
    }
    let s = run_sweep(&job)?;
    eprintln!(
        "sweep: {} records ({} resumed), {} success, {} failed, {} inconclusive, min margin {}",
        s.total,
        s.resumed_from,
        s.success,
        s.failed,
        s.inconclusive,
        s.min_margin.as_deref().unwrap_or("-")
    );
    let o = if s.failed > 0 {
        Outcome::Fail
    } else if s.inconclusive > 0 {
        Outcome::Inconclusive
    } else {
        Outcome::Pass
    };
    run.emit("sweep_summary", &s).map_err(io_error)?;
    run.note(o);
    Ok(())
}

fn search(run: &mut Run, cfg: &RunConfig, opts: &Opts) -> Result<(), Error> {
    let y_bound = cfg.y_bound.unwrap_or(1000);
    let form = match (&opts.form, cfg.ts.as_slice()) {
        (Some(c), _) if c.len() == 4 => BinaryCubicForm::new(c[0], c[1], c[2], c[3]),
        (Some(_), _) => return Err(usage("--form takes four coefficients a,b,c,d")),
        (None, [t]) => thue_core::forms::f3(*t),
        _ => return Err(usage("search needs --form a,b,c,d or a single --t")),
    };
    let rep = thue_solutions_bruteforce(&form, y_bound)?;
    let list: Vec<String> = rep.solutions.iter().map(Solution::to_string).collect();
    eprintln!("search: {form:?} |y| <= {y_bound}: {} solutions {}", rep.count, list.join(" "));
    run.emit("search", &rep).map_err(io_error)
}

fn verify_theorem(run: &mut Run, cfg: &RunConfig, ts: &[i64]) -> Result<(), Error> {
    let y_bound = cfg.y_bound.unwrap_or(1000);
    let mut bad = Vec::new();
    for &t in ts {
        let rep = theorem_report(t, y_bound)?;
        if rep.matches_expected != Some(true) {
            bad.push(t);
        }
        eprintln!("verify-theorem: t = {t}: {} solutions, matches: {}", rep.count, rep.matches_expected == Some(true));
        run.emit("theorem", &rep).map_err(io_error)?;
    }
    run.note(Outcome::from_bool(bad.is_empty()));
    Ok(())
}

fn verify_tables(run: &mut Run, cfg: &RunConfig) -> Result<(), Error> {
    let y_bound = cfg.y_bound.unwrap_or(10_000);
    let reps = verify_sporadic_tables(y_bound)?;
    let mut ok = true;
    for r in &reps {
        ok &= r.pass;
        eprintln!(
            "verify-tables: D = {} listed {} found {} {}",
            r.discriminant,
            r.listed_count,
            r.search.count,
            if r.pass { "ok" } else { "MISMATCH" }
        );
        run.emit("table", r).map_err(io_error)?;
    }
    run.note(Outcome::from_bool(ok));
    Ok(())
}

fn exponents(run: &mut Run, opts: &Opts, ts: &[i64]) -> Result<(), Error> {
    #[derive(Serialize)]
    struct Row {
        t: i64,
        solution: Solution,
        kind: String,
        delta: u8,
        n: i64,
        m: i64,
    }
    for &t in ts {
        let sols = match (&opts.x, &opts.y) {
            (Some(x), Some(y)) => vec![Solution::new(x.clone(), y.clone())],
            (None, None) => known_solutions(t).solutions,
            _ => return Err(usage("give both --x and --y")),
        };
        for s in sols {
            let p = recover_exponents(t, &s.x, &s.y)?;
            let kind = if t >= 10 { classify(t, &s.x, &s.y).to_string() } else { "unclassified".into() };
            eprintln!("exponents: t = {t} {s}: δ = {} n = {} m = {}", p.delta, p.n, p.m);
            run.emit("exponents", &Row { t, solution: s, kind, delta: p.delta, n: p.n, m: p.m }).map_err(io_error)?;
        }
    }
    Ok(())
}

fn roots(run: &mut Run, cfg: &RunConfig, ts: &[i64]) -> Result<(), Error> {
    for &t in ts {
        let p = cfg.precision.unwrap_or_else(|| default_precision(t));
        let r = isolate_roots(t, p)?;
        eprintln!("roots: t = {t}: {:.12e} {:.12e} {:.12e}", r.theta1.to_f64(), r.theta2.to_f64(), r.theta3.to_f64());
        run.emit("roots", &r).map_err(io_error)?;
    }
    Ok(())
}

fn certify_all(run: &mut Run, cfg: &RunConfig, opts: &Opts) -> Result<(), Error> {
    let mut kts: Vec<i64> = (10..=2000).collect();
    kts.extend([10_000, 100_000, 1_000_000, 576_241]);
    kappas(run, cfg, &kts)?;
    matveev(run, &RunConfig { ts: Vec::new(), ..cfg.clone() })?;
    let r = derive_t_max(2)?;
    eprintln!("tmax: t_max = {}", r.t_max);
    run.emit("tmax", &r).map_err(io_error)?;
    let ts = if opts.full { full_range() } else { desk_slice(cfg.seed) };
    let rep = verify_values(2, &ts, &cfg.a, &cfg.q, cfg.workers, cfg.precision_cap)?;
    for rec in &rep.records {
        run.emit("reduction", rec).map_err(io_error)?;
    }
    eprintln!("reduce: {} of {} values of t succeed", rep.count(Status::Success), rep.records.len());
    run.note(report_outcome(&rep));
    let small: Vec<i64> = (-30..=30).filter(|t| *t != 0 && *t != 1).collect();
    verify_theorem(run, &RunConfig { y_bound: Some(cfg.y_bound.unwrap_or(5000)), ..cfg.clone() }, &small)?;
    verify_tables(run, cfg)
}

fn io_error(e: io::Error) -> Error {
    Error::InvalidInput(format!("write failed: {e}"))
}

fn execute(cli: &Cli) -> Result<Outcome, Error> {
    let cfg = config(cli)?;
    let opts = &cli.opts;
    // the sweep owns its output file
    let out: Box<dyn Write> = match (&opts.output, cfg.command) {
        (Some(p), c) if c != Command::Sweep => {
            Box::new(BufWriter::new(File::create(p).map_err(|e| usage(format!("{}: {e}", p.display())))?))
        }
        _ => Box::new(BufWriter::new(io::stdout())),
    };
    rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build_global().ok();
    let mut run = Run { out, outcome: Outcome::Pass };
    match cfg.command {
        Command::Roots => roots(&mut run, &cfg, &require(cfg.ts.clone())?)?,
        Command::Kappas => kappas(&mut run, &cfg, &require(cfg.ts.clone())?)?,
        Command::Exponents => exponents(&mut run, opts, &require(cfg.ts.clone())?)?,
        Command::Matveev => matveev(&mut run, &cfg)?,
        Command::Tmax => tmax(&mut run, &cfg)?,
        Command::Reduce => reduce(&mut run, &cfg, &require(cfg.ts.clone())?)?,
        Command::Sweep => sweep(&mut run, &cfg, opts)?,
        Command::Search => search(&mut run, &cfg, opts)?,
        Command::VerifyTheorem => verify_theorem(&mut run, &cfg, &require(cfg.ts.clone())?)?,
        Command::VerifyTables => verify_tables(&mut run, &cfg)?,
        Command::CertifyAll => certify_all(&mut run, &cfg, opts)?,
    }
    run.out.flush().map_err(io_error)?;
    Ok(run.outcome)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(o) => ExitCode::from(o.code()),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::InvalidInput(_) | Error::NonUnimodular(_) => 3,
                Error::IndeterminateSign(_) | Error::PrecisionInsufficient(_) => 2,
                Error::VerificationFailed(_) | Error::HeightBoundViolated(_) => 1,
            };
            ExitCode::from(code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("thue-verify").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn scientific_bounds() {
        let cli = parse(&["reduce", "--t", "10", "--Q", "1e60", "--A", "3e18"]);
        let cfg = config(&cli).unwrap();
        assert_eq!(cfg.q, BigInt::from(10).pow(60u32));
        assert_eq!(cfg.a, default_a());
        assert!(Cli::try_parse_from(["thue-verify", "reduce", "--Q", "1.5"]).is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(config(&parse(&["kappas", "--t-lo", "10", "--t-hi", "12"])).unwrap().ts, vec![10, 11, 12]);
        assert_eq!(config(&parse(&["roots", "--t", "-3"])).unwrap().ts, vec![-3]);
        assert!(config(&parse(&["roots", "--t", "3", "--t-lo", "1"])).is_err());
        assert!(config(&parse(&["tmax", "--which", "4"])).is_err());
    }

    #[test]
    fn worst_outcome_wins() {
        let mut run = Run { out: Box::new(io::sink()), outcome: Outcome::Pass };
        run.note(Outcome::Inconclusive);
        run.note(Outcome::Fail);
        run.note(Outcome::Inconclusive);
        assert_eq!(run.outcome.code(), 1);
    }
}
