//! Batch scans of trace slices of the rank-two character variety.
//!
//! Each grid cell is certified independently with the same class list; rows run in
//! parallel and are collected in index order, so the CSV does not depend on the
//! worker count. Per-cell timings are recorded only when `timing` is on.

mod config;

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use rand::seq::index::sample;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

pub use config::{Axis, Outputs, ScanConfig, Slice, SliceKind, SliceParam, TracePoint, CONFIG_VERSION};

use crate::error::{Error, Result};
use crate::group::{enumerate_separable_classes, CyclicClass};
use crate::hyperbolic::rep_from_traces;
use crate::stability::{certify, certify_classes, StabilityVerdict};

pub const CSV_HEADER: &str = "ix,iy,x_re,x_im,y_re,y_im,z_re,z_im,verdict,min_ratio,witness,classes_tested,ms";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRecord {
    pub ix: usize,
    pub iy: usize,
    pub point: TracePoint,
    /// 0 certified, 1 rejected parabolic, 2 rejected elliptic, 3 undetermined.
    pub verdict: u8,
    pub min_ratio: Option<f64>,
    pub witness: String,
    pub classes_tested: usize,
    pub ms: u64,
}

impl ScanRecord {
    fn csv_line(&self, out: &mut String) {
        let p = &self.point;
        let ratio = self.min_ratio.map(|r| format!("{r:.12}")).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},\"{}\",{},{}",
            self.ix,
            self.iy,
            p.x[0],
            p.x[1],
            p.y[0],
            p.y[1],
            p.z[0],
            p.z[1],
            self.verdict,
            ratio,
            self.witness,
            self.classes_tested,
            self.ms
        );
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct VerdictCounts {
    pub certified_at_depth: usize,
    pub rejected_parabolic: usize,
    pub rejected_elliptic: usize,
    pub undetermined: usize,
}

impl VerdictCounts {
    pub fn from_records(records: &[ScanRecord]) -> Self {
        let mut c = VerdictCounts::default();
        for r in records {
            match r.verdict {
                0 => c.certified_at_depth += 1,
                1 => c.rejected_parabolic += 1,
                2 => c.rejected_elliptic += 1,
                _ => c.undetermined += 1,
            }
        }
        c
    }

    pub fn total(&self) -> usize {
        self.certified_at_depth + self.rejected_parabolic + self.rejected_elliptic + self.undetermined
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfCheck {
    pub cells: Vec<(usize, usize)>,
    pub mismatches: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanOutcome {
    pub records: Vec<ScanRecord>,
    pub counts: VerdictCounts,
    pub self_check: Option<SelfCheck>,
    pub runtime_seconds: f64,
}

impl ScanOutcome {
    /// True when no cell reached a decision (the CLI exits with code 3).
    pub fn all_undetermined(&self) -> bool {
        !self.records.is_empty() && self.counts.undetermined == self.records.len()
    }
}

fn record_from(ix: usize, iy: usize, point: TracePoint, v: &StabilityVerdict, ms: u64) -> ScanRecord {
    ScanRecord {
        ix,
        iy,
        point,
        verdict: v.code(),
        min_ratio: v.score.as_ref().map(|s| s.min_ratio),
        witness: v.witness_word(),
        classes_tested: v.score.as_ref().map(|s| s.classes_tested).unwrap_or(0),
        ms,
    }
}

/// Certifies a single slice cell against a precomputed class list.
pub fn scan_cell(cfg: &ScanConfig, classes: &[CyclicClass], ix: usize, iy: usize) -> Result<ScanRecord> {
    let point = cfg.slice.point(ix, iy);
    let start = Instant::now();
    let (x, y, z) = point.traces();
    let rep = rep_from_traces(x, y, z)?;
    let v = certify_classes(&rep, classes, cfg.depth, cfg.enlargement, &cfg.nesting, cfg.tolerance)?;
    let ms = if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 };
    Ok(record_from(ix, iy, point, &v, ms))
}

/// Certifies a cell from scratch through `certify`, as a standalone run would.
pub fn certify_cell(cfg: &ScanConfig, ix: usize, iy: usize) -> Result<ScanRecord> {
    let point = cfg.slice.point(ix, iy);
    let (x, y, z) = point.traces();
    let rep = rep_from_traces(x, y, z)?;
    let v = certify(&rep, &cfg.presentation, cfg.depth, cfg.enlargement, &cfg.nesting, cfg.tolerance)?;
    Ok(record_from(ix, iy, point, &v, 0))
}

/// Computes every record in row-major order (rows from minimal y) without writing files.
pub fn scan_records(cfg: &ScanConfig) -> Result<Vec<ScanRecord>> {
    cfg.validate()?;
    let classes = enumerate_separable_classes(&cfg.presentation, cfg.depth, cfg.enlargement)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::config("workers", e.to_string()))?;
    let rows: Vec<Result<Vec<ScanRecord>>> = pool.install(|| {
        (0..cfg.height())
            .into_par_iter()
            .map(|iy| (0..cfg.width()).map(|ix| scan_cell(cfg, &classes, ix, iy)).collect())
            .collect()
    });
    let mut records = Vec::with_capacity(cfg.width() * cfg.height());
    for row in rows {
        records.extend(row?);
    }
    Ok(records)
}

/// Re-runs `n` seeded random cells through the standalone certifier.
pub fn self_check(cfg: &ScanConfig, records: &[ScanRecord], n: usize) -> Result<SelfCheck> {
    let total = records.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let picks = sample(&mut rng, total, n.min(total)).into_vec();
    let mut check = SelfCheck {
        cells: Vec::new(),
        mismatches: Vec::new(),
    };
    for k in picks {
        let r = &records[k];
        let fresh = certify_cell(cfg, r.ix, r.iy)?;
        check.cells.push((r.ix, r.iy));
        let same = fresh.verdict == r.verdict
            && fresh.min_ratio.map(f64::to_bits) == r.min_ratio.map(f64::to_bits)
            && fresh.witness == r.witness
            && fresh.classes_tested == r.classes_tested;
        if !same {
            check.mismatches.push((r.ix, r.iy));
        }
    }
    Ok(check)
}

pub fn render_csv(records: &[ScanRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        r.csv_line(&mut out);
    }
    out
}

pub fn verdict_color(r: &ScanRecord, ratio_cap: f64) -> [u8; 3] {
    match r.verdict {
        0 => {
            let t = r.min_ratio.unwrap_or(0.0) / ratio_cap;
            [0, 0, (255.0 * t).clamp(0.0, 255.0).round() as u8]
        }
        1 => [255, 0, 0],
        2 => [255, 0, 255],
        _ => [128, 128, 128],
    }
}

/// Binary P6 image, one pixel per cell, first row at minimal y.
pub fn render_ppm(records: &[ScanRecord], width: usize, height: usize, ratio_cap: f64) -> Result<Vec<u8>> {
    if records.len() != width * height {
        return Err(Error::input(format!(
            "{} records for a {width}×{height} grid",
            records.len()
        )));
    }
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    for (k, r) in records.iter().enumerate() {
        if (r.ix, r.iy) != (k % width, k / width) {
            return Err(Error::input(format!("record {k} is out of grid order")));
        }
        out.extend_from_slice(&verdict_color(r, ratio_cap));
    }
    Ok(out)
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Runs the scan and writes the CSV, PPM and metadata files.
pub fn run_scan(cfg: &ScanConfig) -> Result<ScanOutcome> {
    let start = Instant::now();
    let records = scan_records(cfg)?;
    let check = if cfg.self_check_cells > 0 {
        Some(self_check(cfg, &records, cfg.self_check_cells)?)
    } else {
        None
    };
    let counts = VerdictCounts::from_records(&records);
    write(&cfg.outputs.csv, render_csv(&records).as_bytes())?;
    write(&cfg.outputs.ppm, &render_ppm(&records, cfg.width(), cfg.height(), cfg.ratio_cap)?)?;
    let runtime_seconds = start.elapsed().as_secs_f64();
    let meta = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg,
        "runtime_seconds": runtime_seconds,
        "records": records.len(),
        "counts": counts,
        "self_check": check,
    });
    write(
        &cfg.outputs.metadata,
        serde_json::to_string_pretty(&meta).expect("serializable").as_bytes(),
    )?;
    Ok(ScanOutcome {
        records,
        counts,
        self_check: check,
        runtime_seconds,
    })
}
