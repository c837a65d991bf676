use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Presentation, Shape};
use crate::hyperbolic::DEFAULT_PARABOLIC_TOL;
use crate::stability::NestingParams;

pub const CONFIG_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SliceParam {
    XRe,
    XIm,
    YRe,
    YIm,
    ZRe,
    ZIm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub param: SliceParam,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    /// Value at grid index `k`; a single step sits at `min`.
    pub fn value(&self, k: usize) -> f64 {
        if self.steps <= 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * k as f64 / (self.steps - 1) as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TracePoint {
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub z: [f64; 2],
}

impl TracePoint {
    pub fn traces(&self) -> (Complex64, Complex64, Complex64) {
        let c = |v: [f64; 2]| Complex64::new(v[0], v[1]);
        (c(self.x), c(self.y), c(self.z))
    }

    fn set(&mut self, param: SliceParam, v: f64) {
        match param {
            SliceParam::XRe => self.x[0] = v,
            SliceParam::XIm => self.x[1] = v,
            SliceParam::YRe => self.y[0] = v,
            SliceParam::YIm => self.y[1] = v,
            SliceParam::ZRe => self.z[0] = v,
            SliceParam::ZIm => self.z[1] = v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SliceKind {
    F2Trace,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Slice {
    pub kind: SliceKind,
    /// Values of the components not swept by the axes.
    pub base: TracePoint,
    pub horizontal: Axis,
    pub vertical: Axis,
}

impl Slice {
    pub fn point(&self, ix: usize, iy: usize) -> TracePoint {
        let mut p = self.base;
        p.set(self.horizontal.param, self.horizontal.value(ix));
        p.set(self.vertical.param, self.vertical.value(iy));
        p
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    pub csv: PathBuf,
    pub ppm: PathBuf,
    pub metadata: PathBuf,
}

fn default_tolerance() -> f64 {
    DEFAULT_PARABOLIC_TOL
}
fn default_workers() -> usize {
    1
}
fn default_ratio_cap() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub version: String,
    pub presentation: Presentation,
    pub slice: Slice,
    pub depth: usize,
    #[serde(default)]
    pub enlargement: usize,
    #[serde(default)]
    pub nesting: NestingParams,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    pub outputs: Outputs,
    /// Minimal ratio rendered at full blue.
    #[serde(default = "default_ratio_cap")]
    pub ratio_cap: f64,
    /// Seed for the randomized self-check; nothing else is random.
    #[serde(default)]
    pub seed: u64,
    /// Record per-cell milliseconds (otherwise 0, keeping the CSV reproducible).
    #[serde(default)]
    pub timing: bool,
    /// Number of random cells re-run through the standalone certifier.
    #[serde(default)]
    pub self_check_cells: usize,
}

impl ScanConfig {
    /// Parses and validates; relative output paths are taken relative to `base_dir`.
    pub fn from_json(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let mut cfg: ScanConfig = serde_json::from_str(text).map_err(|e| {
            let msg = e.to_string();
            // serde names the offending field in its message
            let field = msg
                .split('`')
                .nth(1)
                .map(str::to_string)
                .unwrap_or_else(|| "config".to_string());
            Error::config(field, msg)
        })?;
        if let Some(dir) = base_dir {
            for p in [&mut cfg.outputs.csv, &mut cfg.outputs.ppm, &mut cfg.outputs.metadata] {
                if p.is_relative() {
                    *p = dir.join(&*p);
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("cannot read config {}: {e}", path.display())))?;
        ScanConfig::from_json(&text, path.parent())
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != CONFIG_VERSION {
            return Err(Error::config(
                "version",
                format!("unsupported version {:?}, expected {CONFIG_VERSION:?}", self.version),
            ));
        }
        if self.presentation.shape() != Shape::Handlebody || self.presentation.free_rank() != 2 {
            return Err(Error::config("presentation", "the F2_TRACE slice needs the free group of rank 2"));
        }
        for (name, axis) in [("slice.horizontal", &self.slice.horizontal), ("slice.vertical", &self.slice.vertical)] {
            if axis.steps < 1 {
                return Err(Error::config(format!("{name}.steps"), "must be at least 1"));
            }
            if !axis.min.is_finite() || !axis.max.is_finite() {
                return Err(Error::config(name, "range must be finite"));
            }
        }
        if self.slice.horizontal.param == self.slice.vertical.param {
            return Err(Error::config("slice.vertical.param", "must differ from the horizontal parameter"));
        }
        let b = &self.slice.base;
        if b.x.iter().chain(&b.y).chain(&b.z).any(|v| !v.is_finite()) {
            return Err(Error::config("slice.base", "values must be finite"));
        }
        if self.depth < 1 {
            return Err(Error::config("depth", "must be at least 1"));
        }
        self.nesting
            .validate()
            .map_err(|e| match e {
                Error::Config { field, message } => Error::config(format!("nesting.{field}"), message),
                other => other,
            })?;
        if !(self.tolerance > 0.0) || !self.tolerance.is_finite() {
            return Err(Error::config("tolerance", "must be positive and finite"));
        }
        if self.workers < 1 {
            return Err(Error::config("workers", "must be at least 1"));
        }
        if !(self.ratio_cap > 0.0) || !self.ratio_cap.is_finite() {
            return Err(Error::config("ratio_cap", "must be positive and finite"));
        }
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.slice.horizontal.steps
    }

    pub fn height(&self) -> usize {
        self.slice.vertical.steps
    }
}
