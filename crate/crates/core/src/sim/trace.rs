use csv::{ReaderBuilder, Trim};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::viewport::Pose;

pub const TRACE_HEADER: [&str; 4] = ["t_ms", "yaw_deg", "pitch_deg", "roll_deg"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceError {
    #[error("bad header at line {line}: expected \"t_ms,yaw_deg,pitch_deg,roll_deg\", found {found:?}")]
    BadHeader { line: u64, found: String },
    #[error("expected 4 fields at line {line}, found {found}")]
    FieldCount { line: u64, found: usize },
    #[error("non-numeric {field} {value:?} at line {line}")]
    NonNumeric { line: u64, field: &'static str, value: String },
    #[error("non-increasing timestamp at line {line}")]
    NonIncreasing { line: u64 },
    #[error("pitch {value} out of [-90, 90] at line {line}")]
    PitchRange { line: u64, value: f64 },
    #[error("malformed CSV at line {line}: {message}")]
    Csv { line: u64, message: String },
    #[error("trace has no samples")]
    Empty,
}

/// Time-ordered head poses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientationTrace {
    samples: Vec<Pose<f64>>,
}

impl OrientationTrace {
    /// Wraps samples that must be non-empty with strictly increasing `t_ms`.
    pub fn new(samples: Vec<Pose<f64>>) -> Result<Self, TraceError> {
        if samples.is_empty() {
            return Err(TraceError::Empty);
        }
        // header is line 1, sample k is line k + 2
        if let Some(k) = samples.windows(2).position(|w| w[1].t_ms <= w[0].t_ms) {
            return Err(TraceError::NonIncreasing { line: k as u64 + 3 });
        }
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[Pose<f64>] {
        &self.samples
    }

    pub fn duration_ms(&self) -> u64 {
        self.samples.last().map_or(0, |p| p.t_ms)
    }

    /// Latest sample at or before `t_ms`, or the first sample if none is.
    pub fn pose_at(&self, t_ms: u64) -> &Pose<f64> {
        let k = self.samples.partition_point(|p| p.t_ms <= t_ms);
        &self.samples[k.saturating_sub(1)]
    }

    pub fn to_csv(&self) -> String {
        let mut out = TRACE_HEADER.join(",");
        out.push('\n');
        for p in &self.samples {
            out.push_str(&format!("{},{},{},{}\n", p.t_ms, p.yaw_deg, p.pitch_deg, p.roll_deg));
        }
        out
    }
}

/// Parses a `t_ms,yaw_deg,pitch_deg,roll_deg` CSV trace.
///
/// Rows must already be in increasing time order; unsorted input is rejected.
pub fn load_trace(text: &str) -> Result<OrientationTrace, TraceError> {
    let mut reader = ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(Trim::All)
        .from_reader(text.as_bytes());
    let mut records = reader.records();

    let header = match records.next() {
        None => return Err(TraceError::BadHeader { line: 1, found: String::new() }),
        Some(r) => r.map_err(|e| csv_error(&e))?,
    };
    if header.iter().collect::<Vec<_>>() != TRACE_HEADER {
        return Err(TraceError::BadHeader {
            line: header.position().map_or(1, |p| p.line()),
            found: header.iter().collect::<Vec<_>>().join(","),
        });
    }

    let mut samples: Vec<Pose<f64>> = Vec::new();
    for rec in records {
        let rec = rec.map_err(|e| csv_error(&e))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != 4 {
            return Err(TraceError::FieldCount { line, found: rec.len() });
        }
        let num = |i: usize| -> Result<f64, TraceError> {
            rec[i]
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| TraceError::NonNumeric {
                    line,
                    field: TRACE_HEADER[i],
                    value: rec[i].to_owned(),
                })
        };
        let t_ms: u64 = rec[0].parse().map_err(|_| TraceError::NonNumeric {
            line,
            field: TRACE_HEADER[0],
            value: rec[0].to_owned(),
        })?;
        let (yaw, pitch, roll) = (num(1)?, num(2)?, num(3)?);
        if !(-90.0..=90.0).contains(&pitch) {
            return Err(TraceError::PitchRange { line, value: pitch });
        }
        if samples.last().is_some_and(|p| t_ms <= p.t_ms) {
            return Err(TraceError::NonIncreasing { line });
        }
        samples.push(Pose::new(t_ms, yaw, pitch, roll).expect("validated above"));
    }
    OrientationTrace::new(samples)
}

fn csv_error(e: &csv::Error) -> TraceError {
    TraceError::Csv {
        line: e.position().map_or(0, |p| p.line()),
        message: e.to_string(),
    }
}
