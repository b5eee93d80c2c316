//! Machine-readable verification reports.

use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::expr::C64;
use crate::meshio::{write_atomic, GridSpec};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorstPoint {
    /// Each coordinate as `[re, im]`.
    pub coords: Vec<[f64; 2]>,
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub subject: String,
    pub parameters: Map<String, Value>,
    pub grid: Option<GridSpec>,
    pub points_checked: usize,
    pub points_skipped: usize,
    pub max_abs_err: f64,
    pub mean_abs_err: f64,
    pub worst_point: Option<WorstPoint>,
    pub policy: String,
    pub pass: bool,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timestamp: Option<String>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Writes the report through a temporary file and a rename.
    pub fn write(&self, path: impl AsRef<Path>) -> io::Result<()> {
        write_atomic(path.as_ref(), self.to_json().as_bytes())
    }

    pub fn with_timestamp(mut self) -> Self {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        self.timestamp = Some(secs.to_string());
        self
    }

    /// Changes the tolerance and recomputes `pass`.
    pub fn retolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.pass = self.points_checked > 0 && self.max_abs_err <= tolerance;
        self
    }
}

/// Accumulates per-point discrepancies in a fixed order so the resulting
/// statistics do not depend on how the sweep was scheduled.
#[derive(Debug, Default)]
pub struct ErrorAccumulator {
    count: usize,
    skipped: usize,
    sum: f64,
    max: f64,
    worst: Option<WorstPoint>,
}

impl ErrorAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, err: f64, coords: &[C64], lhs: C64, rhs: C64) {
        self.count += 1;
        self.sum += err;
        // NaN always becomes the worst point
        if err.is_nan() || self.worst.is_none() || err > self.max {
            self.max = if err.is_nan() { f64::INFINITY } else { err };
            self.worst = Some(WorstPoint {
                coords: coords.iter().map(|c| [c.re, c.im]).collect(),
                lhs: [lhs.re, lhs.im],
                rhs: [rhs.re, rhs.im],
            });
        }
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn finish(
        self,
        subject: impl Into<String>,
        parameters: Map<String, Value>,
        grid: Option<GridSpec>,
        policy: impl Into<String>,
        tolerance: f64,
    ) -> VerificationReport {
        let mean = if self.count > 0 {
            self.sum / self.count as f64
        } else {
            0.0
        };
        VerificationReport {
            schema: SCHEMA_VERSION,
            subject: subject.into(),
            parameters,
            grid,
            points_checked: self.count,
            points_skipped: self.skipped,
            max_abs_err: self.max,
            mean_abs_err: mean,
            worst_point: self.worst,
            policy: policy.into(),
            pass: self.count > 0 && self.max <= tolerance,
            tolerance,
            timestamp: None,
        }
    }
}
