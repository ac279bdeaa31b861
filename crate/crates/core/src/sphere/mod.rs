//! The hexaface partition of the viewing sphere.
//!
//! The sphere is cut into a top cap, a middle body of `2β` degrees of pitch
//! and a bottom cap; the middle body is then split into four 90° yaw
//! segments. Boundaries follow one convention everywhere: the middle body is
//! closed at pitch `±β` (the caps are open there) and yaw intervals are
//! half-open, `[start, start + 90)`.
//!
//! Axes are right-handed and Y-up, the camera looks down `-Z`; yaw turns about
//! `+Y` and pitch about `+X`.

mod mesh;
mod obj;

pub use mesh::SegmentMesh;
pub use obj::{export_obj, parse_obj_vertices};

use serde::{Deserialize, Serialize};

use crate::angle::{normalize_yaw, wrap_360};
use crate::error::ParamError;
use crate::scalar::Scalar;
use crate::segment::{PerSegment, SegmentId};

/// Yaw width of each middle segment.
pub const MIDDLE_YAW_SPAN_DEG: f64 = 90.0;

/// Region of (yaw, pitch) space covered by one segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularRegion<T> {
    pub yaw_min_deg: T,
    pub yaw_max_deg: T,
    pub pitch_min_deg: T,
    pub pitch_max_deg: T,
    pub pitch_min_open: bool,
    pub pitch_max_open: bool,
}

impl<T: Scalar> AngularRegion<T> {
    pub fn yaw_span(&self) -> T {
        self.yaw_max_deg - self.yaw_min_deg
    }

    pub fn pitch_span(&self) -> T {
        self.pitch_max_deg - self.pitch_min_deg
    }

    /// Direction at the middle of the region's yaw and pitch extent.
    pub fn centre(&self) -> (T, T) {
        let two = T::lit(2.0);
        (
            normalize_yaw((self.yaw_min_deg + self.yaw_max_deg) / two),
            (self.pitch_min_deg + self.pitch_max_deg) / two,
        )
    }

    /// Membership under the region's own boundary flags; yaw is half-open.
    pub fn contains(&self, yaw_deg: T, pitch_deg: T) -> bool {
        let above_min = if self.pitch_min_open {
            pitch_deg > self.pitch_min_deg
        } else {
            pitch_deg >= self.pitch_min_deg
        };
        let below_max = if self.pitch_max_open {
            pitch_deg < self.pitch_max_deg
        } else {
            pitch_deg <= self.pitch_max_deg
        };
        if !(above_min && below_max) {
            return false;
        }
        let span = self.yaw_span();
        span >= T::lit(360.0) || wrap_360(yaw_deg - self.yaw_min_deg) < span
    }

    /// Solid angle in steradians: `Δyaw · (sin pitch_max − sin pitch_min)`.
    pub fn solid_angle(&self) -> T {
        self.yaw_span().to_radians()
            * (self.pitch_max_deg.to_radians().sin() - self.pitch_min_deg.to_radians().sin())
    }
}

/// The six regions of the hexaface sphere for one HMD field of view.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HexafacePartition<T> {
    pub h_fov_deg: T,
    pub v_fov_deg: T,
    /// Half the vertical FoV; the middle body spans pitch `[-beta, beta]`.
    pub beta_deg: T,
    pub regions: PerSegment<AngularRegion<T>>,
}

impl<T: Scalar> HexafacePartition<T> {
    /// Builds the partition for a `h_fov × v_fov` viewport (both in `(0, 180)`).
    pub fn new(h_fov_deg: T, v_fov_deg: T) -> Result<Self, ParamError> {
        let lo = T::zero();
        let hi = T::lit(180.0);
        if !(h_fov_deg > lo && h_fov_deg < hi) {
            return Err(ParamError::new("h-fov", format!("{h_fov_deg} not in (0, 180)")));
        }
        if !(v_fov_deg > lo && v_fov_deg < hi) {
            return Err(ParamError::new("v-fov", format!("{v_fov_deg} not in (0, 180)")));
        }
        let beta = v_fov_deg / T::lit(2.0);
        let ninety = T::lit(90.0);
        let width = T::lit(MIDDLE_YAW_SPAN_DEG);
        let regions = PerSegment::from_fn(|s| match s {
            SegmentId::Top => AngularRegion {
                yaw_min_deg: -hi,
                yaw_max_deg: hi,
                pitch_min_deg: beta,
                pitch_max_deg: ninety,
                pitch_min_open: true,
                pitch_max_open: false,
            },
            SegmentId::Bottom => AngularRegion {
                yaw_min_deg: -hi,
                yaw_max_deg: hi,
                pitch_min_deg: -ninety,
                pitch_max_deg: -beta,
                pitch_min_open: false,
                pitch_max_open: true,
            },
            m => {
                let k = T::lit(m.middle_index().expect("middle segment") as f64);
                let start = -width / T::lit(2.0) + k * width;
                AngularRegion {
                    yaw_min_deg: start,
                    yaw_max_deg: start + width,
                    pitch_min_deg: -beta,
                    pitch_max_deg: beta,
                    pitch_min_open: false,
                    pitch_max_open: false,
                }
            }
        });
        Ok(Self {
            h_fov_deg,
            v_fov_deg,
            beta_deg: beta,
            regions,
        })
    }

    pub fn region(&self, s: SegmentId) -> &AngularRegion<T> {
        &self.regions[s]
    }

    /// Segment containing the direction `(yaw, pitch)`; yaw may be any real.
    pub fn classify(&self, yaw_deg: T, pitch_deg: T) -> Result<SegmentId, ParamError> {
        let ninety = T::lit(90.0);
        if !(pitch_deg >= -ninety && pitch_deg <= ninety) {
            return Err(ParamError::new("pitch", format!("{pitch_deg} not in [-90, 90]")));
        }
        if !yaw_deg.is_finite() {
            return Err(ParamError::new("yaw", format!("{yaw_deg} is not finite")));
        }
        if pitch_deg > self.beta_deg {
            return Ok(SegmentId::Top);
        }
        if pitch_deg < -self.beta_deg {
            return Ok(SegmentId::Bottom);
        }
        let width = T::lit(MIDDLE_YAW_SPAN_DEG);
        let shifted = wrap_360(normalize_yaw(yaw_deg) + width / T::lit(2.0));
        let k = (shifted / width).floor().to_usize().unwrap_or(0).min(3);
        Ok(SegmentId::middle(k))
    }

    pub fn solid_angle(&self, s: SegmentId) -> T {
        self.regions[s].solid_angle()
    }
}

/// Unit view direction for `(yaw, pitch)` in degrees (forward is `-Z`).
pub fn direction_from_angles<T: Scalar>(yaw_deg: T, pitch_deg: T) -> [T; 3] {
    let (sy, cy) = yaw_deg.to_radians().sin_cos();
    let (sp, cp) = pitch_deg.to_radians().sin_cos();
    [-sy * cp, sp, -cy * cp]
}
