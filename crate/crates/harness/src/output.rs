//! CSV and JSON writers. Floats are written with Rust's shortest round-trip
//! formatting so repeated runs produce identical bytes.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use spg_core::bounds::EnsemblePoint;
use spg_core::solver::PointRecord;
use spg_core::RunTrace;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Series {
    Iterate,
    Average,
}

fn point(r: &spg_core::solver::TraceRecord, which: Series) -> Option<&PointRecord> {
    match which {
        Series::Iterate => Some(&r.iterate),
        Series::Average => r.average.as_ref(),
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))
}

fn writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))
}

/// `seed,n,dist_to_ref,objective,zero_count`, one row per recorded point.
pub fn write_trace_csv(path: &Path, seeds: &[u64], traces: &[RunTrace], which: Series) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["seed", "n", "dist_to_ref", "objective", "zero_count"])?;
    for (seed, t) in seeds.iter().zip(traces) {
        for r in &t.records {
            if let Some(p) = point(r, which) {
                w.write_record([
                    seed.to_string(),
                    r.n.to_string(),
                    opt(p.dist_to_ref),
                    p.objective.to_string(),
                    p.zero_count.to_string(),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// `n,mean_dist,std_dist,mean_sq_dist,bound_value`; the bound column is empty
/// where `bound` returns `None`.
pub fn write_summary_csv(path: &Path, stats: &[EnsemblePoint], bound: impl Fn(usize) -> Option<f64>) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["n", "mean_dist", "std_dist", "mean_sq_dist", "bound_value"])?;
    for s in stats {
        w.write_record([
            s.n.to_string(),
            s.mean_dist.to_string(),
            s.std_dist.to_string(),
            s.mean_sq_dist.to_string(),
            opt(bound(s.n)),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `seed,n,spg_zero_count,fobos_zero_count`.
pub fn write_sparsity_csv(path: &Path, seeds: &[u64], traces: &[RunTrace]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["seed", "n", "spg_zero_count", "fobos_zero_count"])?;
    for (seed, t) in seeds.iter().zip(traces) {
        for r in &t.records {
            w.write_record([
                seed.to_string(),
                r.n.to_string(),
                r.iterate.zero_count.to_string(),
                r.average.as_ref().map(|a| a.zero_count.to_string()).unwrap_or_default(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Arbitrary rows under a header.
pub fn write_rows(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    fs::write(path, s).with_context(|| format!("cannot write {}", path.display()))
}
