//! Resumable reduction sweeps: JSON-lines records, a CSV summary, and a
//! checkpoint holding the last completed `t` and a hash chained over every
//! record line written so far.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::reduction::{verify_values, RangeRecord, Status};
use crate::SCHEMA_VERSION;

/// Records between two checkpoints.
pub const CHECKPOINT_EVERY: usize = 10_000;

/// Default seed for sampled `t`.
pub const DEFAULT_SEED: u64 = 20_240_101;

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::InvalidInput(format!("{}: {e}", path.display()))
}

/// `t_lo ..= t_hi` followed by `samples` distinct values drawn uniformly
/// from `(t_hi, sample_hi]`, in increasing order.
pub fn sweep_values(t_lo: i64, t_hi: i64, samples: usize, sample_hi: i64, seed: u64) -> Vec<i64> {
    let mut ts: Vec<i64> = (t_lo..=t_hi).collect();
    let lo = t_hi.max(t_lo - 1) + 1;
    if samples == 0 || lo > sample_hi {
        return ts;
    }
    let room = (sample_hi - lo + 1) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = std::collections::BTreeSet::new();
    while picked.len() < samples.min(room) {
        picked.insert(rng.gen_range(lo..=sample_hi));
    }
    ts.extend(picked);
    ts
}

/// `[10, 2000]` plus 100 seeded samples up to `576241`.
pub fn desk_slice(seed: u64) -> Vec<i64> {
    sweep_values(10, 2000, 100, 576_241, seed)
}

/// The whole range `[10, 576241]`.
pub fn full_range() -> Vec<i64> {
    (10..=576_241).collect()
}

/// `sha256(prev || line)` in hex; the chain starts from the empty string.
pub fn chain_hash(prev: &str, line: &str) -> String {
    let mut h = Sha256::new();
    h.update(prev.as_bytes());
    h.update(line.as_bytes());
    hex::encode(h.finalize())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub schema: u32,
    pub which: u8,
    /// Number of records already written.
    pub completed: usize,
    pub last_t: Option<i64>,
    pub hash: String,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Option<Checkpoint>> {
        match fs::read_to_string(path) {
            Ok(s) => serde_json::from_str(&s)
                .map(Some)
                .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display()))),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(io_err(path, e)),
        }
    }

    /// Written to a sibling file and renamed into place.
    pub fn store(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        let body = serde_json::to_string(self).expect("checkpoint serializes");
        fs::write(&tmp, body + "\n").map_err(|e| io_err(&tmp, e))?;
        fs::rename(&tmp, path).map_err(|e| io_err(path, e))
    }
}

/// Where and how a sweep runs.
#[derive(Clone, Debug)]
pub struct SweepJob {
    pub which: u8,
    pub ts: Vec<i64>,
    pub a: BigInt,
    pub q_bound: BigInt,
    pub workers: usize,
    pub precision_cap: Option<u32>,
    pub output: PathBuf,
    pub csv: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
    pub checkpoint_every: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub schema: u32,
    pub which: u8,
    pub total: usize,
    pub success: usize,
    pub failed: usize,
    pub inconclusive: usize,
    /// Smallest certified margin among successes.
    pub min_margin: Option<String>,
    pub resumed_from: usize,
    pub hash: String,
}

impl SweepSummary {
    pub fn all_success(&self) -> bool {
        self.success == self.total
    }
}

/// Read back the first `n` lines of `path`, checking them against `hash`.
fn replay(path: &Path, n: usize, hash: &str) -> Result<Vec<String>> {
    let f = fs::File::open(path).map_err(|e| io_err(path, e))?;
    let mut lines = Vec::with_capacity(n);
    let mut h = String::new();
    for line in BufReader::new(f).lines().take(n) {
        let line = line.map_err(|e| io_err(path, e))?;
        h = chain_hash(&h, &line);
        lines.push(line);
    }
    if lines.len() != n || h != hash {
        return Err(Error::VerificationFailed(format!("{} does not match its checkpoint", path.display())));
    }
    Ok(lines)
}

fn parse_records(lines: &[String]) -> Result<Vec<RangeRecord>> {
    lines
        .iter()
        .map(|l| serde_json::from_str(l).map_err(|e| Error::InvalidInput(format!("bad record: {e}"))))
        .collect()
}

/// Run or resume a sweep. Output is identical whether or not the run was
/// interrupted, and for any worker count.
pub fn run_sweep(job: &SweepJob) -> Result<SweepSummary> {
    let every = job.checkpoint_every.max(1);
    let saved = match &job.checkpoint {
        Some(p) => Checkpoint::load(p)?,
        None => None,
    };
    let (mut lines, mut hash) = match &saved {
        Some(cp) => {
            if cp.which != job.which || cp.completed > job.ts.len() || cp.last_t != cp.completed.checked_sub(1).map(|i| job.ts[i]) {
                return Err(Error::InvalidInput("checkpoint belongs to a different sweep".into()));
            }
            (replay(&job.output, cp.completed, &cp.hash)?, cp.hash.clone())
        }
        None => (Vec::new(), String::new()),
    };
    let resumed_from = lines.len();
    let f = fs::File::create(&job.output).map_err(|e| io_err(&job.output, e))?;
    let mut out = BufWriter::new(f);
    for l in &lines {
        writeln!(out, "{l}").map_err(|e| io_err(&job.output, e))?;
    }
    for chunk in job.ts[resumed_from..].chunks(every) {
        let report = verify_values(job.which, chunk, &job.a, &job.q_bound, job.workers, job.precision_cap)?;
        for rec in &report.records {
            let line = serde_json::to_string(rec).expect("record serializes");
            hash = chain_hash(&hash, &line);
            writeln!(out, "{line}").map_err(|e| io_err(&job.output, e))?;
            lines.push(line);
        }
        out.flush().map_err(|e| io_err(&job.output, e))?;
        if let Some(p) = &job.checkpoint {
            let cp = Checkpoint {
                schema: SCHEMA_VERSION,
                which: job.which,
                completed: lines.len(),
                last_t: lines.len().checked_sub(1).map(|i| job.ts[i]),
                hash: hash.clone(),
            };
            cp.store(p)?;
        }
    }
    let records = parse_records(&lines)?;
    if let Some(p) = &job.csv {
        write_csv(p, &records)?;
    }
    Ok(summarize(job.which, &records, resumed_from, hash))
}

fn summarize(which: u8, records: &[RangeRecord], resumed_from: usize, hash: String) -> SweepSummary {
    let count = |s: Status| records.iter().filter(|r| r.status == s).count();
    let min_margin = records
        .iter()
        .filter(|r| r.status == Status::Success)
        .filter_map(|r| r.margin.as_ref().and_then(|m| m.parse::<f64>().ok().map(|v| (v, m))))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, m)| m.clone());
    SweepSummary {
        schema: SCHEMA_VERSION,
        which,
        total: records.len(),
        success: count(Status::Success),
        failed: count(Status::Failed),
        inconclusive: count(Status::Inconclusive),
        min_margin,
        resumed_from,
        hash,
    }
}

/// One CSV row per record.
pub fn write_csv(path: &Path, records: &[RangeRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    for r in records {
        w.serialize(r).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::{default_a, default_q};

    fn job(dir: &Path, ts: Vec<i64>, workers: usize) -> SweepJob {
        SweepJob {
            which: 2,
            ts,
            a: default_a(),
            q_bound: default_q(),
            workers,
            precision_cap: None,
            output: dir.join("out.jsonl"),
            csv: Some(dir.join("out.csv")),
            checkpoint: Some(dir.join("out.ckpt")),
            checkpoint_every: 3,
        }
    }

    #[test]
    fn samples_are_seeded_and_distinct() {
        let a = desk_slice(7);
        assert_eq!(a, desk_slice(7));
        assert_eq!(a.len(), 1991 + 100);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        assert!(*a.last().unwrap() <= 576_241);
        assert_ne!(a, desk_slice(8));
        assert_eq!(sweep_values(5, 4, 0, 10, 1), Vec::<i64>::new());
    }

    #[test]
    fn resume_reproduces_uninterrupted_run() {
        let ts: Vec<i64> = (10..=19).collect();
        let d1 = tempfile::tempdir().unwrap();
        let full = run_sweep(&job(d1.path(), ts.clone(), 2)).unwrap();
        assert!(full.all_success());
        let whole = fs::read_to_string(d1.path().join("out.jsonl")).unwrap();

        // stop after the first chunk, then resume
        let d2 = tempfile::tempdir().unwrap();
        let mut first = job(d2.path(), ts[..3].to_vec(), 1);
        first.csv = None;
        run_sweep(&first).unwrap();
        let resumed = run_sweep(&job(d2.path(), ts, 4)).unwrap();
        assert_eq!(resumed.resumed_from, 3);
        assert_eq!(resumed.hash, full.hash);
        assert_eq!(fs::read_to_string(d2.path().join("out.jsonl")).unwrap(), whole);
        let csv = fs::read_to_string(d2.path().join("out.csv")).unwrap();
        assert_eq!(csv.lines().count(), 11);
        assert!(csv.starts_with("schema,which,t,"));
    }

    #[test]
    fn tampered_output_is_detected() {
        let d = tempfile::tempdir().unwrap();
        let ts: Vec<i64> = (10..=12).collect();
        run_sweep(&job(d.path(), ts.clone(), 1)).unwrap();
        let p = d.path().join("out.jsonl");
        let s = fs::read_to_string(&p).unwrap().replace("\"t\":11", "\"t\":99");
        fs::write(&p, s).unwrap();
        assert!(run_sweep(&job(d.path(), ts, 1)).is_err());
    }
}
