//! Trace-driven streaming sessions and bandwidth accounting.
//!
//! A session is cut into intervals of one media segment each. The pose in
//! effect at an interval's start decides the representation of every tile
//! for that interval, and the bytes fetched are the chosen bandwidth times
//! the segment duration.

mod report;
mod trace;

pub use report::{emit_report, Report, ReportFormat};
pub use trace::{load_trace, OrientationTrace, TraceError, TRACE_HEADER};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adaptation::{baseline_decision, decide, AdaptationDecision, AdaptationPolicy, Tier};
use crate::error::ParamError;
use crate::mpd::{MpdError, MpdModel};
use crate::segment::{PerSegment, SegmentId};
use crate::sphere::HexafacePartition;
use crate::tiling::compute_tile_grid;
use crate::viewport::Visibility;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("manifest has no adaptation sets")]
    EmptyManifest,
    #[error(transparent)]
    Manifest(#[from] MpdError),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("partition does not match manifest tiling: {0}")]
    Inconsistent(String),
    #[error("reports differ in interval structure: {0}")]
    IntervalMismatch(String),
}

/// Accounting for one segment-long interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalRecord {
    pub interval_index: usize,
    pub start_ms: u64,
    pub decision: AdaptationDecision,
    pub bytes: PerSegment<f64>,
    pub total_bytes: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionReport {
    pub segment_duration_s: f64,
    pub intervals: Vec<IntervalRecord>,
    pub total_bytes: f64,
    /// Mean rank over all in-view tiles of all intervals.
    pub mean_in_fov_rep: f64,
    /// Representation changes between consecutive intervals, summed over tiles.
    pub switch_count: u64,
}

impl SessionReport {
    pub fn bytes_per_segment(&self) -> PerSegment<f64> {
        let mut out = PerSegment::splat(0.0);
        for r in &self.intervals {
            for s in SegmentId::ALL {
                out[s] += r.bytes[s];
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalSavings {
    pub interval_index: usize,
    pub start_ms: u64,
    pub adaptive_bytes: f64,
    pub baseline_bytes: f64,
    pub savings_fraction: f64,
}

/// Adaptive session bytes against the all-REP1 baseline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavingsReport {
    pub label: String,
    pub adaptive_bytes: f64,
    pub baseline_bytes: f64,
    pub savings_fraction: f64,
    pub intervals: Vec<IntervalSavings>,
}

fn savings(adaptive: f64, baseline: f64) -> f64 {
    if baseline > 0.0 {
        1.0 - adaptive / baseline
    } else {
        0.0
    }
}

/// Number of intervals needed to cover `duration_ms`; at least one.
pub fn interval_count(duration_ms: u64, segment_duration_s: f64) -> usize {
    let seg_ms = segment_duration_s * 1000.0;
    ((duration_ms as f64 / seg_ms).ceil() as usize).max(1)
}

fn check_inputs(mpd: &MpdModel, partition: &HexafacePartition<f64>) -> Result<(), SimError> {
    if mpd.adaptation_sets.is_empty() {
        return Err(SimError::EmptyManifest);
    }
    mpd.validate()?;
    let grid = mpd
        .tile_grid()
        .ok_or_else(|| SimError::Inconsistent("manifest lacks a tile".into()))?;
    let expected = compute_tile_grid(partition, grid.frame_w, grid.frame_h)?;
    if let Some(s) = SegmentId::ALL
        .into_iter()
        .find(|&s| grid.tiles[s] != expected.tiles[s])
    {
        return Err(SimError::Inconsistent(format!(
            "{s} tile {:?} but partition gives {:?}",
            grid.tiles[s], expected.tiles[s]
        )));
    }
    Ok(())
}

fn run(
    mpd: &MpdModel,
    trace: &OrientationTrace,
    partition: &HexafacePartition<f64>,
    min_overlap: f64,
    choose: impl Fn(&Visibility<f64>) -> AdaptationDecision,
) -> Result<SessionReport, SimError> {
    check_inputs(mpd, partition)?;
    let seg_s = mpd.segment_duration_s;
    let n = interval_count(trace.duration_ms(), seg_s);
    let mut intervals = Vec::with_capacity(n);
    for i in 0..n {
        let start_ms = (i as f64 * seg_s * 1000.0).round() as u64;
        let pose = trace.pose_at(start_ms);
        let vis = partition.visible_segments(pose, min_overlap)?;
        let mut decision = choose(&vis);
        decision.interval_index = i;
        decision.pose = *pose;
        let mut bytes = PerSegment::splat(0.0);
        for s in SegmentId::ALL {
            let rep = decision.choice[s];
            let bw = mpd.bandwidth(s, rep).ok_or_else(|| {
                SimError::Inconsistent(format!("manifest has no REP{rep} for {s}"))
            })?;
            bytes[s] = bw as f64 * seg_s / 8.0;
        }
        let total_bytes = bytes.0.iter().sum();
        intervals.push(IntervalRecord {
            interval_index: i,
            start_ms,
            decision,
            bytes,
            total_bytes,
        });
    }

    let total_bytes = intervals.iter().map(|r| r.total_bytes).sum();
    let (rep_sum, rep_n) = intervals
        .iter()
        .flat_map(|r| {
            SegmentId::ALL
                .into_iter()
                .filter(|&s| r.decision.tiers[s] == Tier::InFov)
                .map(|s| r.decision.choice[s] as f64)
        })
        .fold((0.0, 0usize), |(sum, n), v| (sum + v, n + 1));
    let switch_count = intervals
        .windows(2)
        .map(|w| {
            SegmentId::ALL
                .into_iter()
                .filter(|&s| w[0].decision.choice[s] != w[1].decision.choice[s])
                .count() as u64
        })
        .sum();
    Ok(SessionReport {
        segment_duration_s: seg_s,
        intervals,
        total_bytes,
        mean_in_fov_rep: if rep_n > 0 { rep_sum / rep_n as f64 } else { 0.0 },
        switch_count,
    })
}

/// Runs `trace` against the manifest under `policy`.
pub fn simulate(
    mpd: &MpdModel,
    trace: &OrientationTrace,
    policy: &AdaptationPolicy,
    partition: &HexafacePartition<f64>,
) -> Result<SessionReport, SimError> {
    policy.validate()?;
    run(mpd, trace, partition, policy.min_overlap, |vis| decide(vis, policy))
}

/// Runs `trace` with every tile at REP1.
pub fn simulate_baseline(
    mpd: &MpdModel,
    trace: &OrientationTrace,
    partition: &HexafacePartition<f64>,
) -> Result<SessionReport, SimError> {
    run(mpd, trace, partition, 0.0, |_| baseline_decision())
}

/// Savings of `adaptive` relative to `baseline`, overall and per interval.
pub fn compare(adaptive: &SessionReport, baseline: &SessionReport) -> Result<SavingsReport, SimError> {
    if adaptive.intervals.len() != baseline.intervals.len() {
        return Err(SimError::IntervalMismatch(format!(
            "{} intervals vs {}",
            adaptive.intervals.len(),
            baseline.intervals.len()
        )));
    }
    let mut intervals = Vec::with_capacity(adaptive.intervals.len());
    for (a, b) in adaptive.intervals.iter().zip(&baseline.intervals) {
        if a.start_ms != b.start_ms {
            return Err(SimError::IntervalMismatch(format!(
                "interval {} starts at {} ms vs {} ms",
                a.interval_index, a.start_ms, b.start_ms
            )));
        }
        intervals.push(IntervalSavings {
            interval_index: a.interval_index,
            start_ms: a.start_ms,
            adaptive_bytes: a.total_bytes,
            baseline_bytes: b.total_bytes,
            savings_fraction: savings(a.total_bytes, b.total_bytes),
        });
    }
    Ok(SavingsReport {
        label: "session".into(),
        adaptive_bytes: adaptive.total_bytes,
        baseline_bytes: baseline.total_bytes,
        savings_fraction: savings(adaptive.total_bytes, baseline.total_bytes),
        intervals,
    })
}

impl SavingsReport {
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}
