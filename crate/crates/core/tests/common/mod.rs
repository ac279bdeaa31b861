//! Test oracles kept independent of the library's interval arithmetic.
#![allow(dead_code)]

use std::collections::BTreeSet;

use hexaface::{Partition, SegmentId};

/// Segments hit by a `cols × rows` grid of rays spread over the viewport
/// rectangle, each ray classified on its own.
pub fn ray_sample_visible(p: &Partition, yaw: f64, pitch: f64, cols: usize, rows: usize) -> BTreeSet<SegmentId> {
    let mut hit = BTreeSet::new();
    for i in 0..cols {
        let y = yaw - p.h_fov_deg / 2.0 + (i as f64 + 0.5) * p.h_fov_deg / cols as f64;
        for j in 0..rows {
            let ph = pitch - p.v_fov_deg / 2.0 + (j as f64 + 0.5) * p.v_fov_deg / rows as f64;
            if !(-90.0..=90.0).contains(&ph) {
                continue;
            }
            hit.insert(p.classify(y, ph).unwrap());
        }
    }
    hit
}

/// Yaw and pitch overlap, in degrees, of the viewport with a segment's region,
/// computed by stepping through the window at 1/1000 degree.
pub fn axis_overlaps(p: &Partition, s: SegmentId, yaw: f64, pitch: f64) -> (f64, f64) {
    let r = p.region(s);
    let step = 1e-3;
    let n_yaw = (p.h_fov_deg / step).round() as usize;
    let mut yaw_hits = 0usize;
    for k in 0..n_yaw {
        let y = yaw - p.h_fov_deg / 2.0 + (k as f64 + 0.5) * step;
        let d = (y - r.yaw_min_deg).rem_euclid(360.0);
        if r.yaw_span() >= 360.0 || d < r.yaw_span() {
            yaw_hits += 1;
        }
    }
    let lo = (pitch - p.v_fov_deg / 2.0).max(-90.0);
    let hi = (pitch + p.v_fov_deg / 2.0).min(90.0);
    let pitch_ov = (hi.min(r.pitch_max_deg) - lo.max(r.pitch_min_deg)).max(0.0);
    (yaw_hits as f64 * step, pitch_ov)
}

/// Uniform direction on the sphere from two unit-interval draws.
pub fn uniform_direction(u: f64, v: f64) -> (f64, f64) {
    let yaw = u * 360.0 - 180.0;
    let pitch = (2.0 * v - 1.0).asin().to_degrees();
    (yaw, pitch)
}
