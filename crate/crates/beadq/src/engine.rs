//! Trajectory database ingestion, necklace-level alibi queries with
//! time-interval pruning, fixed-time queries and the benchmark harness.

use std::collections::HashMap;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::alibi::beads_intersect;
use crate::discs::alibi_at_time;
use crate::model::{Bead, FiredCase, ModelError, Necklace, Sample, TrajectoryDatabase};
use crate::oracle::oracle_beads_intersect;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("duplicate sample for label {label:?} at t = {t} (line {line})")]
    DuplicateRow { label: String, t: f64, line: u64 },
    #[error("negative speed at line {line}")]
    NegativeSpeed { line: u64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DbFormat {
    Csv,
    Json,
}

impl DbFormat {
    /// `.json` files are JSON, anything else is the CSV schema.
    pub fn infer(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => DbFormat::Json,
            _ => DbFormat::Csv,
        }
    }
}

/// Loads and validates a trajectory database. CSV rows follow the schema
/// `label,t,x,y,v` (a header row is accepted and skipped); JSON input is an
/// array of objects with the same fields.
pub fn load_database(path: &Path, format: DbFormat) -> Result<TrajectoryDatabase, EngineError> {
    let io_err = |source| EngineError::Io { path: path.display().to_string(), source };
    match format {
        DbFormat::Json => {
            let text = std::fs::read_to_string(path).map_err(io_err)?;
            let rows: Vec<Sample> = serde_json::from_str(&text)
                .map_err(|e| EngineError::Parse { line: e.line() as u64, message: e.to_string() })?;
            Ok(TrajectoryDatabase::from_samples(rows)?)
        }
        DbFormat::Csv => {
            let file = std::fs::File::open(path).map_err(io_err)?;
            let mut reader = csv::ReaderBuilder::new()
                .has_headers(false)
                .trim(csv::Trim::All)
                .from_reader(file);
            let mut rows = Vec::new();
            let mut seen: HashMap<(String, u64), u64> = HashMap::new();
            for (idx, record) in reader.records().enumerate() {
                let line = idx as u64 + 1;
                let record = record.map_err(|e| EngineError::Parse { line, message: e.to_string() })?;
                if record.len() != 5 {
                    return Err(EngineError::Parse {
                        line,
                        message: format!("expected 5 fields (label,t,x,y,v), found {}", record.len()),
                    });
                }
                let numeric: Result<Vec<f64>, _> = (1..5).map(|i| record[i].parse::<f64>()).collect();
                let values = match numeric {
                    Ok(v) => v,
                    Err(e) => {
                        // A leading header row is allowed.
                        if idx == 0 && record.iter().skip(1).all(|f| f.parse::<f64>().is_err()) {
                            continue;
                        }
                        return Err(EngineError::Parse { line, message: e.to_string() });
                    }
                };
                let (t, x, y, v) = (values[0], values[1], values[2], values[3]);
                if v < 0.0 {
                    return Err(EngineError::NegativeSpeed { line });
                }
                let label = record[0].to_string();
                if let Some(_first) = seen.insert((label.clone(), t.to_bits()), line) {
                    return Err(EngineError::DuplicateRow { label, t, line });
                }
                rows.push(Sample { label, t, x, y, v });
            }
            Ok(TrajectoryDatabase::from_samples(rows)?)
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Default, PartialEq)]
pub struct Timings {
    pub median_ns: u64,
    pub p95_ns: u64,
    pub total_ns: u64,
}

impl Timings {
    fn from_samples(mut ns: Vec<u64>) -> Self {
        if ns.is_empty() {
            return Timings::default();
        }
        ns.sort_unstable();
        let total = ns.iter().sum();
        let median = ns[ns.len() / 2];
        let p95 = ns[((ns.len() as f64 * 0.95) as usize).min(ns.len() - 1)];
        Timings { median_ns: median, p95_ns: p95, total_ns: total }
    }
}

/// Analytic-vs-oracle agreement tally from a benchmark run. Boundary pairs
/// are those whose oracle margin sits inside the reliability band.
#[derive(Debug, Clone, Copy, Serialize, Default, PartialEq)]
pub struct AgreementStats {
    pub pairs: u64,
    pub agree: u64,
    pub disagree: u64,
    pub boundary_excluded: u64,
    pub oracle_median_ns: u64,
}

/// Result of one query run; serializes with stable field names.
#[derive(Debug, Clone, Serialize)]
pub struct QueryReport {
    pub kind: String,
    pub labels: Vec<String>,
    /// `alibi`: true iff the objects could not have met. `alibi-at`: true iff
    /// they could have met at the instant. `bead`: true iff the beads
    /// intersect.
    pub verdict: Option<bool>,
    /// Fired case per intersecting pair, in evaluation order.
    pub cases: Vec<String>,
    pub pairs_considered: u64,
    pub pairs_pruned: u64,
    pub timings: Timings,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<AgreementStats>,
}

fn necklace_pair(
    db: &TrajectoryDatabase,
    label_a: &str,
    label_b: &str,
) -> Result<(Necklace, Necklace), EngineError> {
    Ok((db.necklace(label_a)?, db.necklace(label_b)?))
}

/// The alibi query over two necklaces: true iff no bead pair intersects.
/// Bead lists are swept in time order and only pairs with overlapping time
/// slabs are evaluated; without `exhaustive` the sweep stops at the first
/// intersection. `pairs_considered + pairs_pruned` always accounts for the
/// full naive product.
pub fn run_alibi(
    db: &TrajectoryDatabase,
    label_a: &str,
    label_b: &str,
    exhaustive: bool,
) -> Result<QueryReport, EngineError> {
    let (na, nb) = necklace_pair(db, label_a, label_b)?;
    let (a, b) = (na.beads(), nb.beads());
    let total_pairs = (a.len() * b.len()) as u64;

    let mut cases = Vec::new();
    let mut durations = Vec::new();
    let mut considered = 0u64;
    let mut met = false;
    let mut j_low = 0usize;
    'outer: for bead_a in a {
        // Beads ending before this one starts stay behind the cursor for
        // every later bead_a as well, since starts are sorted.
        while j_low < b.len() && b[j_low].end() < bead_a.start() {
            j_low += 1;
        }
        for bead_b in &b[j_low..] {
            if bead_b.start() > bead_a.end() {
                break;
            }
            considered += 1;
            let started = Instant::now();
            let verdict = beads_intersect(bead_a, bead_b);
            durations.push(started.elapsed().as_nanos() as u64);
            if verdict.intersects {
                met = true;
                cases.push(verdict.fired_case.to_string());
                if !exhaustive {
                    break 'outer;
                }
            }
        }
    }

    Ok(QueryReport {
        kind: "alibi".into(),
        labels: vec![label_a.to_string(), label_b.to_string()],
        verdict: Some(!met),
        cases,
        pairs_considered: considered,
        pairs_pruned: total_pairs - considered,
        timings: Timings::from_samples(durations),
        agreement: None,
    })
}

/// Evaluates every bead pair with no pruning and no short-circuit; the
/// pruned sweep must always agree with this on the boolean verdict.
pub fn run_alibi_naive(
    db: &TrajectoryDatabase,
    label_a: &str,
    label_b: &str,
) -> Result<QueryReport, EngineError> {
    let (na, nb) = necklace_pair(db, label_a, label_b)?;
    let mut cases = Vec::new();
    let mut durations = Vec::new();
    let mut met = false;
    for bead_a in na.beads() {
        for bead_b in nb.beads() {
            let started = Instant::now();
            let verdict = beads_intersect(bead_a, bead_b);
            durations.push(started.elapsed().as_nanos() as u64);
            if verdict.intersects {
                met = true;
                cases.push(verdict.fired_case.to_string());
            }
        }
    }
    Ok(QueryReport {
        kind: "alibi".into(),
        labels: vec![label_a.to_string(), label_b.to_string()],
        verdict: Some(!met),
        cases,
        pairs_considered: (na.len() * nb.len()) as u64,
        pairs_pruned: 0,
        timings: Timings::from_samples(durations),
        agreement: None,
    })
}

/// Could the two objects have met at instant `t0`? Locates the bead of each
/// necklace whose time slab contains `t0` and runs the four-disc slice test;
/// the verdict is false when either object has no bead covering `t0`.
pub fn run_alibi_at(
    db: &TrajectoryDatabase,
    label_a: &str,
    label_b: &str,
    t0: f64,
) -> Result<QueryReport, EngineError> {
    let (na, nb) = necklace_pair(db, label_a, label_b)?;
    let total_pairs = (na.len() * nb.len()) as u64;
    let locate = |n: &Necklace| n.beads().iter().find(|b| b.start() <= t0 && t0 <= b.end()).copied();
    let (met, considered, elapsed) = match (locate(&na), locate(&nb)) {
        (Some(ba), Some(bb)) => {
            let started = Instant::now();
            let met = alibi_at_time(&ba, &bb, t0);
            (met, 1u64, started.elapsed().as_nanos() as u64)
        }
        _ => (false, 0, 0),
    };
    Ok(QueryReport {
        kind: "alibi-at".into(),
        labels: vec![label_a.to_string(), label_b.to_string()],
        verdict: Some(met),
        cases: Vec::new(),
        pairs_considered: considered,
        pairs_pruned: total_pairs - considered,
        timings: Timings::from_samples(if considered > 0 { vec![elapsed] } else { vec![] }),
        agreement: None,
    })
}

/// Direct bead-vs-bead query; the report's verdict is the intersection
/// boolean and `cases` carries the fired case.
pub fn run_bead_pair(b1: &Bead, b2: &Bead) -> QueryReport {
    let started = Instant::now();
    let verdict = beads_intersect(b1, b2);
    let elapsed = started.elapsed().as_nanos() as u64;
    QueryReport {
        kind: "bead".into(),
        labels: Vec::new(),
        verdict: Some(verdict.intersects),
        cases: if verdict.fired_case == FiredCase::None {
            vec![]
        } else {
            vec![verdict.fired_case.to_string()]
        },
        pairs_considered: 1,
        pairs_pruned: 0,
        timings: Timings::from_samples(vec![elapsed]),
        agreement: None,
    }
}

pub(crate) fn random_nonempty_bead(rng: &mut impl Rng) -> Bead {
    loop {
        let mut t1: f64 = rng.gen_range(-5.0..5.0);
        let mut t2: f64 = rng.gen_range(-5.0..5.0);
        if t1 == t2 {
            continue;
        }
        if t2 < t1 {
            std::mem::swap(&mut t1, &mut t2);
        }
        let b = Bead::from_coords(
            t1,
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-5.0..5.0),
            t2,
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-5.0..5.0),
            rng.gen_range(f64::MIN_POSITIVE..3.0),
        )
        .unwrap();
        if b.is_nonempty() {
            return b;
        }
    }
}

/// Times the analytic decision against the sampling oracle on seeded random
/// nonempty bead pairs and tallies agreement; pairs whose oracle margin sits
/// inside the `1e-6` band are counted as boundary cases rather than
/// disagreements.
pub fn bench(pairs: u64, seed: u64) -> QueryReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut analytic_ns = Vec::with_capacity(pairs as usize);
    let mut oracle_ns = Vec::with_capacity(pairs as usize);
    let mut stats = AgreementStats { pairs, ..Default::default() };
    let mut cases = Vec::new();

    for _ in 0..pairs {
        let b1 = random_nonempty_bead(&mut rng);
        let b2 = random_nonempty_bead(&mut rng);

        let started = Instant::now();
        let verdict = beads_intersect(&b1, &b2);
        analytic_ns.push(started.elapsed().as_nanos() as u64);

        let started = Instant::now();
        let sampled = oracle_beads_intersect(&b1, &b2, crate::oracle::DEFAULT_SLICES);
        oracle_ns.push(started.elapsed().as_nanos() as u64);

        if verdict.intersects {
            cases.push(verdict.fired_case.to_string());
        }
        if sampled.margin.abs() < 1e-6 {
            stats.boundary_excluded += 1;
        } else if verdict.intersects == sampled.intersects {
            stats.agree += 1;
        } else {
            stats.disagree += 1;
        }
    }

    let oracle_t = Timings::from_samples(oracle_ns);
    stats.oracle_median_ns = oracle_t.median_ns;
    QueryReport {
        kind: "bench".into(),
        labels: Vec::new(),
        verdict: None,
        cases,
        pairs_considered: pairs,
        pairs_pruned: 0,
        timings: Timings::from_samples(analytic_ns),
        agreement: Some(stats),
    }
}
