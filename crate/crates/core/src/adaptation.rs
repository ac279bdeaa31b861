//! Prioritised view-aware quality selection.
//!
//! Tiles inside the viewport get `in_fov_rep`; tiles bordering an in-view
//! middle tile get `adjacent_rep`; everything else gets `far_rep`.

use serde::{Deserialize, Serialize};

use crate::error::ParamError;
use crate::scalar::Scalar;
use crate::segment::{PerSegment, RepId, SegmentId};
use crate::viewport::{Pose, Visibility};

/// Quality tiers and thresholds of the view-aware policy.
///
/// `adjacency` turns on the adjacent tier for the yaw neighbours of in-view
/// middle tiles. `cap_adjacency` additionally puts both caps in that tier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AdaptationPolicy {
    pub in_fov_rep: RepId,
    pub adjacent_rep: RepId,
    pub far_rep: RepId,
    pub min_overlap: f64,
    pub adjacency: bool,
    pub cap_adjacency: bool,
}

impl Default for AdaptationPolicy {
    fn default() -> Self {
        Self {
            in_fov_rep: 1,
            adjacent_rep: 2,
            far_rep: 4,
            min_overlap: 0.05,
            adjacency: true,
            cap_adjacency: false,
        }
    }
}

impl AdaptationPolicy {
    /// Every tile at REP1 regardless of gaze.
    pub fn all_highest() -> Self {
        Self {
            in_fov_rep: 1,
            adjacent_rep: 1,
            far_rep: 1,
            ..Self::default()
        }
    }

    pub fn without_adjacency() -> Self {
        Self {
            adjacency: false,
            ..Self::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ParamError> {
        let p: Self = serde_json::from_str(text).map_err(|e| ParamError::new("policy", e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        for (field, r) in [
            ("in_fov_rep", self.in_fov_rep),
            ("adjacent_rep", self.adjacent_rep),
            ("far_rep", self.far_rep),
        ] {
            if !(1..=4).contains(&r) {
                return Err(ParamError::new(field, format!("{r} not in 1..4")));
            }
        }
        if !(self.in_fov_rep <= self.adjacent_rep && self.adjacent_rep <= self.far_rep) {
            return Err(ParamError::new(
                "policy",
                "tiers must satisfy in_fov_rep <= adjacent_rep <= far_rep",
            ));
        }
        if !(0.0..1.0).contains(&self.min_overlap) {
            return Err(ParamError::new("min_overlap", format!("{} not in [0, 1)", self.min_overlap)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    InFov,
    Adjacent,
    Far,
}

/// Representation chosen for every segment during one interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptationDecision<T = f64> {
    pub interval_index: usize,
    pub choice: PerSegment<RepId>,
    pub tiers: PerSegment<Tier>,
    pub pose: Pose<T>,
}

/// Applies `policy` to one visibility result.
///
/// A tile is in view when its overlap exceeds `min_overlap`. The gaze tile is
/// always in view, and so is any tile overlapping at least as much as it.
pub fn decide<T: Scalar>(vis: &Visibility<T>, policy: &AdaptationPolicy) -> AdaptationDecision<T> {
    let threshold = T::lit(policy.min_overlap);
    let gaze_overlap = vis.fractions[vis.gaze];
    let in_fov = PerSegment::from_fn(|s| {
        s == vis.gaze || vis.fractions[s] > threshold || vis.fractions[s] >= gaze_overlap
    });

    let mut tiers = in_fov.map(|_, &v| if v { Tier::InFov } else { Tier::Far });
    if policy.adjacency {
        for m in SegmentId::MIDDLE.into_iter().filter(|&m| in_fov[m]) {
            let (prev, next) = m.yaw_neighbours().expect("middle segment");
            let mut near = vec![prev, next];
            if policy.cap_adjacency {
                near.extend([SegmentId::Top, SegmentId::Bottom]);
            }
            for n in near {
                if tiers[n] == Tier::Far {
                    tiers[n] = Tier::Adjacent;
                }
            }
        }
    }
    let choice = tiers.map(|_, t| match t {
        Tier::InFov => policy.in_fov_rep,
        Tier::Adjacent => policy.adjacent_rep,
        Tier::Far => policy.far_rep,
    });
    AdaptationDecision {
        interval_index: 0,
        choice,
        tiers,
        pose: vis.pose,
    }
}

/// No view awareness: all six tiles at REP1.
pub fn baseline_decision<T: Scalar>() -> AdaptationDecision<T> {
    AdaptationDecision {
        interval_index: 0,
        choice: PerSegment::splat(1),
        tiers: PerSegment::splat(Tier::InFov),
        pose: Pose {
            t_ms: 0,
            yaw_deg: T::zero(),
            pitch_deg: T::zero(),
            roll_deg: T::zero(),
        },
    }
}
