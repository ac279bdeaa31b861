//! Head orientation and per-pose viewport visibility.
//!
//! The viewport is treated as the angle-space rectangle `h_fov × v_fov`
//! around the gaze direction. Each segment's overlap fraction is the area of
//! its (yaw, pitch) intersection with that rectangle divided by the
//! rectangle's area after clamping pitch to `[-90, 90]`. Roll is carried on
//! the pose but does not change the rectangle.

mod quaternion;

pub use quaternion::{direction_to_angles, Quaternion};

use serde::{Deserialize, Serialize};

use crate::angle::{interval_overlap, normalize_yaw, YawArc};
use crate::error::ParamError;
use crate::scalar::Scalar;
use crate::segment::{PerSegment, SegmentId};
use crate::sphere::HexafacePartition;

/// Timestamped head orientation, yaw normalised to `[-180, 180)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose<T> {
    pub t_ms: u64,
    pub yaw_deg: T,
    pub pitch_deg: T,
    pub roll_deg: T,
}

impl<T: Scalar> Pose<T> {
    pub fn new(t_ms: u64, yaw_deg: T, pitch_deg: T, roll_deg: T) -> Result<Self, ParamError> {
        if !yaw_deg.is_finite() {
            return Err(ParamError::new("yaw", format!("{yaw_deg} is not finite")));
        }
        if !roll_deg.is_finite() {
            return Err(ParamError::new("roll", format!("{roll_deg} is not finite")));
        }
        let ninety = T::lit(90.0);
        if !(pitch_deg >= -ninety && pitch_deg <= ninety) {
            return Err(ParamError::new("pitch", format!("{pitch_deg} not in [-90, 90]")));
        }
        Ok(Self {
            t_ms,
            yaw_deg: normalize_yaw(yaw_deg),
            pitch_deg,
            roll_deg,
        })
    }

    pub fn orientation(&self) -> Quaternion<T> {
        Quaternion::from_euler(self.yaw_deg, self.pitch_deg, self.roll_deg)
    }

    /// Gaze direction through the quaternion pipeline.
    pub fn gaze(&self) -> [T; 3] {
        self.orientation()
            .direction()
            .expect("from_euler yields a unit quaternion")
    }
}

/// Overlap of the viewport with each segment for one pose.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Visibility<T> {
    pub pose: Pose<T>,
    /// Fraction of the viewport area inside each segment.
    pub fractions: PerSegment<T>,
    /// Segment containing the gaze direction.
    pub gaze: SegmentId,
    pub min_overlap: T,
}

impl<T: Scalar> Visibility<T> {
    pub fn is_visible(&self, s: SegmentId) -> bool {
        s == self.gaze || self.fractions[s] > self.min_overlap
    }

    pub fn visible(&self) -> Vec<SegmentId> {
        SegmentId::ALL
            .into_iter()
            .filter(|&s| self.is_visible(s))
            .collect()
    }
}

impl<T: Scalar> HexafacePartition<T> {
    /// Segments intersecting the viewport at `pose`.
    ///
    /// A segment is visible when its overlap fraction exceeds `min_overlap`;
    /// the gaze segment is always visible.
    pub fn visible_segments(&self, pose: &Pose<T>, min_overlap: T) -> Result<Visibility<T>, ParamError> {
        if !(min_overlap >= T::zero() && min_overlap < T::one()) {
            return Err(ParamError::new("min-overlap", format!("{min_overlap} not in [0, 1)")));
        }
        let pose = Pose::new(pose.t_ms, pose.yaw_deg, pose.pitch_deg, pose.roll_deg)?;
        let two = T::lit(2.0);
        let ninety = T::lit(90.0);
        let window = YawArc::centred(pose.yaw_deg, self.h_fov_deg);
        let p_lo = (pose.pitch_deg - self.v_fov_deg / two).max(-ninety);
        let p_hi = (pose.pitch_deg + self.v_fov_deg / two).min(ninety);
        let area = self.h_fov_deg * (p_hi - p_lo);

        let fractions = PerSegment::from_fn(|s| {
            let r = self.region(s);
            let arc = YawArc::new(r.yaw_min_deg, r.yaw_span());
            let yaw_ov = window.overlap(&arc);
            let pitch_ov = interval_overlap(p_lo, p_hi, r.pitch_min_deg, r.pitch_max_deg);
            (yaw_ov * pitch_ov / area).min(T::one())
        });

        // Roll spins about the gaze axis, so the pose angles are the gaze angles.
        let gaze = self.classify(pose.yaw_deg, pose.pitch_deg)?;
        Ok(Visibility {
            pose,
            fractions,
            gaze,
            min_overlap,
        })
    }
}
