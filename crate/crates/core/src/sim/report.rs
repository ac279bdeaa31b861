use std::fmt::Write;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::Serialize;

use super::{SavingsReport, SessionReport};
use crate::segment::SegmentId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown report format {other:?}")),
        }
    }
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        }
    }
}

/// A report that renders as CSV rows or one JSON document.
pub trait Report: Serialize + DeserializeOwned {
    fn to_csv(&self) -> String;

    fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

impl Report for SessionReport {
    /// One row per interval: start time, the six chosen ranks, bytes.
    fn to_csv(&self) -> String {
        let mut out = String::from("interval,start_ms");
        for s in SegmentId::ALL {
            out.push(',');
            out.push_str(s.name());
        }
        out.push_str(",bytes\n");
        for r in &self.intervals {
            let _ = write!(out, "{},{}", r.interval_index, r.start_ms);
            for s in SegmentId::ALL {
                let _ = write!(out, ",{}", r.decision.choice[s]);
            }
            let _ = writeln!(out, ",{:.3}", r.total_bytes);
        }
        out
    }
}

impl Report for SavingsReport {
    /// Per-interval rows followed by a `total` row.
    fn to_csv(&self) -> String {
        let mut out =
            String::from("label,interval,start_ms,adaptive_bytes,baseline_bytes,savings_fraction\n");
        for r in &self.intervals {
            let _ = writeln!(
                out,
                "{},{},{},{:.3},{:.3},{:.4}",
                self.label, r.interval_index, r.start_ms, r.adaptive_bytes, r.baseline_bytes, r.savings_fraction
            );
        }
        let _ = writeln!(
            out,
            "{},total,,{:.3},{:.3},{:.4}",
            self.label, self.adaptive_bytes, self.baseline_bytes, self.savings_fraction
        );
        out
    }
}

pub fn emit_report<R: Report>(r: &R, format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => r.to_csv(),
        ReportFormat::Json => r.to_json(),
    }
}
