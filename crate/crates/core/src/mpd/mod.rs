//! DASH manifests whose adaptation sets carry SRD properties.
//!
//! Every tile becomes one adaptation set. Its SRD value is
//! `source_id,x,y,w,h,total_w,total_h,spatial_set_id`, where the optional
//! `spatial_set_id` field holds the hexaface segment encoding (0..5) and so
//! links the 2D tile to its 3D sub-mesh. All tiles share source id 0. The
//! seam tile's `x + w` exceeds `total_w`; it wraps to the left edge.

mod parse;
mod write;

pub use parse::parse_mpd;
pub use write::serialize_mpd;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::segment::{PerSegment, RepId, SegmentId, REP_COUNT};
use crate::tiling::{Ladder, TileGrid, TileRect};

pub const SRD_SCHEME: &str = "urn:mpeg:dash:srd:2014";
pub const DASH_NAMESPACE: &str = "urn:mpeg:dash:schema:mpd:2011";

/// SRD value of one tile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrdDescriptor {
    pub source_id: u32,
    pub object_x: u32,
    pub object_y: u32,
    pub object_w: u32,
    pub object_h: u32,
    pub total_w: u32,
    pub total_h: u32,
    pub spatial_set_id: u8,
}

impl SrdDescriptor {
    pub fn segment(&self) -> Option<SegmentId> {
        SegmentId::from_index(self.spatial_set_id as usize)
    }

    /// SRD `value` attribute text.
    pub fn value(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.source_id,
            self.object_x,
            self.object_y,
            self.object_w,
            self.object_h,
            self.total_w,
            self.total_h,
            self.spatial_set_id
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MpdRepresentation {
    pub rep_id: RepId,
    pub width: u32,
    pub height: u32,
    pub bandwidth_bps: u64,
    pub media_template: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileAdaptationSet {
    pub srd: SrdDescriptor,
    pub representations: Vec<MpdRepresentation>,
}

/// Document model of a tiled on-demand manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MpdModel {
    pub media_duration_s: f64,
    pub segment_duration_s: f64,
    pub adaptation_sets: Vec<TileAdaptationSet>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MpdErrorKind {
    Xml(String),
    MissingAttribute(&'static str),
    MissingSrd,
    SrdArity(usize),
    SrdValue(String),
    MissingSpatialSet,
    SpatialSetRange(u64),
    DuplicateSpatialSet(u8),
    SrdTotals(String),
    SrdBounds(String),
    AdaptationSetCount(usize),
    RepresentationCount(usize),
    RepresentationOrder(String),
    Duration(String),
    LadderMismatch(String),
}

impl MpdErrorKind {
    /// Stable short name of the error class.
    pub fn name(&self) -> &'static str {
        match self {
            MpdErrorKind::Xml(_) => "xml",
            MpdErrorKind::MissingAttribute(_) => "missing-attribute",
            MpdErrorKind::MissingSrd => "missing-srd",
            MpdErrorKind::SrdArity(_) => "srd-arity",
            MpdErrorKind::SrdValue(_) => "srd-value",
            MpdErrorKind::MissingSpatialSet => "missing-spatial-set",
            MpdErrorKind::SpatialSetRange(_) => "spatial-set-range",
            MpdErrorKind::DuplicateSpatialSet(_) => "duplicate-spatial-set",
            MpdErrorKind::SrdTotals(_) => "srd-totals",
            MpdErrorKind::SrdBounds(_) => "srd-bounds",
            MpdErrorKind::AdaptationSetCount(_) => "adaptation-set-count",
            MpdErrorKind::RepresentationCount(_) => "representation-count",
            MpdErrorKind::RepresentationOrder(_) => "representation-order",
            MpdErrorKind::Duration(_) => "duration",
            MpdErrorKind::LadderMismatch(_) => "ladder-mismatch",
        }
    }
}

impl fmt::Display for MpdErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MpdErrorKind::Xml(m) => write!(f, "malformed XML: {m}"),
            MpdErrorKind::MissingAttribute(a) => write!(f, "missing attribute {a}"),
            MpdErrorKind::MissingSrd => f.write_str("adaptation set has no SRD property"),
            MpdErrorKind::SrdArity(n) => write!(f, "SRD value has {n} fields, expected 7 or 8"),
            MpdErrorKind::SrdValue(v) => write!(f, "SRD field {v:?} is not a non-negative integer"),
            MpdErrorKind::MissingSpatialSet => f.write_str("SRD value lacks spatial_set_id"),
            MpdErrorKind::SpatialSetRange(v) => write!(f, "spatial_set_id {v} not in 0..5"),
            MpdErrorKind::DuplicateSpatialSet(v) => write!(f, "spatial_set_id {v} used twice"),
            MpdErrorKind::SrdTotals(m)
            | MpdErrorKind::SrdBounds(m)
            | MpdErrorKind::RepresentationOrder(m)
            | MpdErrorKind::Duration(m)
            | MpdErrorKind::LadderMismatch(m) => f.write_str(m),
            MpdErrorKind::AdaptationSetCount(n) => write!(f, "{n} adaptation sets, expected 6"),
            MpdErrorKind::RepresentationCount(n) => write!(f, "{n} representations, expected 4"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{} at {location}: {kind}", kind.name())]
pub struct MpdError {
    pub kind: MpdErrorKind,
    pub location: String,
}

impl MpdError {
    pub fn new(kind: MpdErrorKind, location: impl Into<String>) -> Self {
        Self {
            kind,
            location: location.into(),
        }
    }
}

/// Media template of one tile representation, `$Number$` left for the player.
pub fn media_template(segment: SegmentId, rep_id: RepId) -> String {
    format!("tile{}_rep{}_$Number$.m4s", segment as u8, rep_id)
}

/// Builds the manifest model for a tile grid and its ladder.
pub fn generate_mpd(
    grid: &TileGrid,
    ladder: &Ladder,
    media_duration_s: f64,
    segment_duration_s: f64,
) -> Result<MpdModel, MpdError> {
    for (s, tile) in grid.tiles.iter() {
        let best = ladder.rep(s, 1);
        if (best.width, best.height) != (tile.w, tile.h) {
            return Err(MpdError::new(
                MpdErrorKind::LadderMismatch(format!(
                    "REP1 {}x{} differs from tile {}x{}",
                    best.width, best.height, tile.w, tile.h
                )),
                s.name(),
            ));
        }
    }
    let adaptation_sets = SegmentId::ALL
        .into_iter()
        .map(|s| {
            let t = grid.tile(s);
            TileAdaptationSet {
                srd: SrdDescriptor {
                    source_id: 0,
                    object_x: t.x,
                    object_y: t.y,
                    object_w: t.w,
                    object_h: t.h,
                    total_w: grid.frame_w,
                    total_h: grid.frame_h,
                    spatial_set_id: s as u8,
                },
                representations: ladder.reps[s]
                    .iter()
                    .map(|r| MpdRepresentation {
                        rep_id: r.rep_id,
                        width: r.width,
                        height: r.height,
                        bandwidth_bps: r.bandwidth_bps,
                        media_template: media_template(s, r.rep_id),
                    })
                    .collect(),
            }
        })
        .collect();
    let model = MpdModel {
        media_duration_s,
        segment_duration_s,
        adaptation_sets,
    };
    model.validate()?;
    Ok(model)
}

impl MpdModel {
    pub fn validate(&self) -> Result<(), MpdError> {
        self.validate_located(|i| format!("AdaptationSet[{i}]"))
    }

    pub(crate) fn validate_located(&self, locate: impl Fn(usize) -> String) -> Result<(), MpdError> {
        for (name, d) in [
            ("mediaPresentationDuration", self.media_duration_s),
            ("maxSegmentDuration", self.segment_duration_s),
        ] {
            if !(d.is_finite() && d > 0.0) {
                return Err(MpdError::new(
                    MpdErrorKind::Duration(format!("{name} {d} must be positive")),
                    "MPD",
                ));
            }
        }
        if self.adaptation_sets.len() != 6 {
            return Err(MpdError::new(
                MpdErrorKind::AdaptationSetCount(self.adaptation_sets.len()),
                "Period",
            ));
        }
        let mut seen = [false; 6];
        let first = self.adaptation_sets[0].srd;
        for (i, set) in self.adaptation_sets.iter().enumerate() {
            let srd = set.srd;
            let err = |kind| Err(MpdError::new(kind, locate(i)));
            if srd.spatial_set_id > 5 {
                return err(MpdErrorKind::SpatialSetRange(srd.spatial_set_id as u64));
            }
            if std::mem::replace(&mut seen[srd.spatial_set_id as usize], true) {
                return err(MpdErrorKind::DuplicateSpatialSet(srd.spatial_set_id));
            }
            if srd.total_h == 0 || srd.total_w as u64 != 2 * srd.total_h as u64 {
                return err(MpdErrorKind::SrdTotals(format!(
                    "reference space {}x{} is not 2:1",
                    srd.total_w, srd.total_h
                )));
            }
            if (srd.total_w, srd.total_h, srd.source_id) != (first.total_w, first.total_h, first.source_id) {
                return err(MpdErrorKind::SrdTotals(format!(
                    "reference space {}x{} (source {}) differs from {}x{} (source {})",
                    srd.total_w, srd.total_h, srd.source_id, first.total_w, first.total_h, first.source_id
                )));
            }
            if srd.object_w == 0
                || srd.object_h == 0
                || srd.object_x >= srd.total_w
                || srd.object_w > srd.total_w
                || srd.object_y as u64 + srd.object_h as u64 > srd.total_h as u64
            {
                return err(MpdErrorKind::SrdBounds(format!(
                    "object {}x{}+{}+{} outside {}x{}",
                    srd.object_w, srd.object_h, srd.object_x, srd.object_y, srd.total_w, srd.total_h
                )));
            }
            if set.representations.len() != REP_COUNT {
                return err(MpdErrorKind::RepresentationCount(set.representations.len()));
            }
            for (k, r) in set.representations.iter().enumerate() {
                if r.rep_id as usize != k + 1 {
                    return err(MpdErrorKind::RepresentationOrder(format!(
                        "representation {k} has rank {}, expected {}",
                        r.rep_id,
                        k + 1
                    )));
                }
            }
            for w in set.representations.windows(2) {
                let px = |r: &MpdRepresentation| r.width as u64 * r.height as u64;
                if w[1].bandwidth_bps >= w[0].bandwidth_bps || px(&w[1]) >= px(&w[0]) {
                    return err(MpdErrorKind::RepresentationOrder(format!(
                        "REP{} does not decrease from REP{}",
                        w[1].rep_id, w[0].rep_id
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn adaptation_set(&self, s: SegmentId) -> Option<&TileAdaptationSet> {
        self.adaptation_sets
            .iter()
            .find(|a| a.srd.spatial_set_id == s as u8)
    }

    /// Bandwidth of `rep_id` in the adaptation set of segment `s`.
    pub fn bandwidth(&self, s: SegmentId, rep_id: RepId) -> Option<u64> {
        self.adaptation_set(s)?
            .representations
            .iter()
            .find(|r| r.rep_id == rep_id)
            .map(|r| r.bandwidth_bps)
    }

    /// Tile grid described by the SRD properties.
    pub fn tile_grid(&self) -> Option<TileGrid> {
        let first = self.adaptation_sets.first()?.srd;
        let mut tiles = Vec::with_capacity(6);
        for s in SegmentId::ALL {
            let srd = self.adaptation_set(s)?.srd;
            tiles.push(TileRect {
                segment: s,
                x: srd.object_x,
                y: srd.object_y,
                w: srd.object_w,
                h: srd.object_h,
            });
        }
        Some(TileGrid {
            frame_w: first.total_w,
            frame_h: first.total_h,
            tiles: PerSegment(tiles.try_into().ok()?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::HexafacePartition;
    use crate::tiling::{build_ladder, compute_tile_grid, BitrateModel, DEFAULT_SCALES};

    pub(crate) fn model() -> MpdModel {
        let p = HexafacePartition::new(96.0_f64, 90.0).unwrap();
        let g = compute_tile_grid(&p, 3840, 1920).unwrap();
        let l = build_ladder(&g, DEFAULT_SCALES, &BitrateModel::default()).unwrap();
        generate_mpd(&g, &l, 10.0, 1.0).unwrap()
    }

    #[test]
    fn m0_srd() {
        let m = model();
        let set = m.adaptation_set(SegmentId::M0).unwrap();
        assert_eq!(set.srd.value(), "0,1440,480,960,960,3840,1920,2");
        let ids: Vec<u8> = m.adaptation_sets.iter().map(|a| a.srd.spatial_set_id).collect();
        assert_eq!(ids, vec![0, 1, 2, 3, 4, 5]);
        for a in &m.adaptation_sets {
            assert_eq!(a.representations.len(), 4);
            assert!(a.representations.windows(2).all(|w| w[1].bandwidth_bps < w[0].bandwidth_bps));
        }
        assert_eq!(set.representations[0].media_template, "tile2_rep1_$Number$.m4s");
    }

    #[test]
    fn srd_matches_grid() {
        let p = HexafacePartition::new(96.0_f64, 90.0).unwrap();
        let g = compute_tile_grid(&p, 3840, 1920).unwrap();
        assert_eq!(model().tile_grid().unwrap(), g);
    }

    #[test]
    fn mismatched_ladder() {
        let p = HexafacePartition::new(96.0_f64, 90.0).unwrap();
        let g = compute_tile_grid(&p, 3840, 1920).unwrap();
        let other = compute_tile_grid(&p, 4096, 2048).unwrap();
        let l = build_ladder(&other, DEFAULT_SCALES, &BitrateModel::default()).unwrap();
        let e = generate_mpd(&g, &l, 10.0, 1.0).unwrap_err();
        assert_eq!(e.kind.name(), "ladder-mismatch");
        let l = build_ladder(&g, DEFAULT_SCALES, &BitrateModel::default()).unwrap();
        assert_eq!(generate_mpd(&g, &l, 0.0, 1.0).unwrap_err().kind.name(), "duration");
    }

    #[test]
    fn validator_mutations() {
        let base = model();
        type Mutation = (&'static str, Box<dyn Fn(&mut MpdModel)>);
        let cases: Vec<Mutation> = vec![
            ("adaptation-set-count", Box::new(|m| { m.adaptation_sets.pop(); })),
            ("duplicate-spatial-set", Box::new(|m| m.adaptation_sets[1].srd.spatial_set_id = 0)),
            ("spatial-set-range", Box::new(|m| m.adaptation_sets[1].srd.spatial_set_id = 9)),
            ("srd-totals", Box::new(|m| m.adaptation_sets[3].srd.total_w = 4000)),
            ("srd-bounds", Box::new(|m| m.adaptation_sets[0].srd.object_h = 5000)),
            ("representation-count", Box::new(|m| { m.adaptation_sets[2].representations.pop(); })),
            ("representation-order", Box::new(|m| m.adaptation_sets[2].representations[3].bandwidth_bps = u64::MAX)),
            ("duration", Box::new(|m| m.segment_duration_s = -1.0)),
        ];
        for (name, mutate) in cases {
            let mut m = base.clone();
            mutate(&mut m);
            let e = m.validate().unwrap_err();
            assert_eq!(e.kind.name(), name, "{e}");
        }
    }
}
