//! Command-line front end for the alibi query engine.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use beadq::engine::{
    bench, load_database, run_alibi, run_alibi_at, run_bead_pair, DbFormat, QueryReport,
};
use beadq::model::Bead;

#[derive(Parser)]
#[command(name = "beadq", version, about = "Alibi queries on uncertain trajectories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a trajectory database, reporting its shape.
    LoadCheck { path: PathBuf },
    /// Decide whether two objects could have met anywhere on their necklaces.
    Alibi {
        db: PathBuf,
        label_a: String,
        label_b: String,
        /// Evaluate every overlapping pair instead of stopping at the first hit.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether two objects could have met at one instant.
    AlibiAt {
        db: PathBuf,
        label_a: String,
        label_b: String,
        #[arg(allow_negative_numbers = true)]
        t0: f64,
        #[arg(long)]
        json: bool,
    },
    /// Decide intersection for two explicit beads:
    /// t1 x1 y1 t2 x2 y2 v1  t3 x3 y3 t4 x4 y4 v2.
    Bead {
        #[arg(num_args = 14, value_name = "REAL", allow_negative_numbers = true)]
        coords: Vec<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Time the analytic decision against the sampling oracle on random pairs.
    Bench {
        #[arg(long, default_value_t = 1000)]
        pairs: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

fn print_report(report: &QueryReport, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(report).expect("report serializes"));
        return;
    }
    match report.kind.as_str() {
        "alibi" => {
            let alibi = report.verdict.unwrap_or(false);
            println!(
                "alibi {} and {}: {}",
                report.labels[0],
                report.labels[1],
                if alibi { "true (they cannot have met)" } else { "false (they can have met)" }
            );
            if !report.cases.is_empty() {
                println!("intersecting pairs fired cases: {}", report.cases.join(", "));
            }
        }
        "alibi-at" => {
            println!(
                "meeting possible for {} and {}: {}",
                report.labels[0],
                report.labels[1],
                report.verdict.unwrap_or(false)
            );
        }
        "bead" => {
            println!("beads intersect: {}", report.verdict.unwrap_or(false));
            if !report.cases.is_empty() {
                println!("fired case: {}", report.cases[0]);
            }
        }
        "bench" => {
            if let Some(stats) = &report.agreement {
                println!(
                    "pairs: {}  agree: {}  disagree: {}  boundary: {}",
                    stats.pairs, stats.agree, stats.disagree, stats.boundary_excluded
                );
                println!("oracle median: {} ns", stats.oracle_median_ns);
            }
        }
        _ => {}
    }
    println!(
        "pairs considered: {}  pruned: {}  median: {} ns  p95: {} ns",
        report.pairs_considered, report.pairs_pruned, report.timings.median_ns, report.timings.p95_ns
    );
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::LoadCheck { path } => {
            let db = load_database(&path, DbFormat::infer(&path)).map_err(|e| e.to_string())?;
            let labels: Vec<&str> = db.labels().collect();
            println!("ok: {} labels, {} samples", labels.len(), db.len());
            for label in labels {
                println!("  {label}: {} samples", db.samples(label).map_or(0, |s| s.len()));
            }
            Ok(())
        }
        Command::Alibi { db, label_a, label_b, exhaustive, json } => {
            let database = load_database(&db, DbFormat::infer(&db)).map_err(|e| e.to_string())?;
            let report =
                run_alibi(&database, &label_a, &label_b, exhaustive).map_err(|e| e.to_string())?;
            print_report(&report, json);
            Ok(())
        }
        Command::AlibiAt { db, label_a, label_b, t0, json } => {
            if !t0.is_finite() {
                return Err("t0 must be finite".into());
            }
            let database = load_database(&db, DbFormat::infer(&db)).map_err(|e| e.to_string())?;
            let report = run_alibi_at(&database, &label_a, &label_b, t0).map_err(|e| e.to_string())?;
            print_report(&report, json);
            Ok(())
        }
        Command::Bead { coords, json } => {
            let b1 = Bead::from_coords(
                coords[0], coords[1], coords[2], coords[3], coords[4], coords[5], coords[6],
            )
            .map_err(|e| format!("first bead: {e}"))?;
            let b2 = Bead::from_coords(
                coords[7], coords[8], coords[9], coords[10], coords[11], coords[12], coords[13],
            )
            .map_err(|e| format!("second bead: {e}"))?;
            print_report(&run_bead_pair(&b1, &b2), json);
            Ok(())
        }
        Command::Bench { pairs, seed, json } => {
            if pairs == 0 {
                return Err("--pairs must be at least 1".into());
            }
            print_report(&bench(pairs, seed), json);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}
