//! Equirectangular tile grid and per-tile representation ladders.
//!
//! Yaw −180° sits at the left edge of the frame and yaw 0 at its centre, so
//! the tile of the middle segment facing yaw 180° (M2) straddles the
//! left/right seam. Its rectangle starts at `x = 7/8 · width` and runs past the
//! right edge, continuing from `x = 0`; [`TileRect::pieces`] splits it back
//! into in-frame rectangles.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::ParamError;
use crate::scalar::Scalar;
use crate::segment::{PerSegment, RepId, SegmentId, REP_COUNT};
use crate::sphere::HexafacePartition;

/// Pixel rectangle of one tile, `y` growing downward.
///
/// `x + w` may exceed the frame width for the seam tile, which then wraps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileRect {
    pub segment: SegmentId,
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
}

impl TileRect {
    pub fn area(&self) -> u64 {
        self.w as u64 * self.h as u64
    }

    pub fn wraps(&self, frame_w: u32) -> bool {
        self.x + self.w > frame_w
    }

    /// In-frame rectangles `(x, y, w, h)` covered by this tile.
    pub fn pieces(&self, frame_w: u32) -> Vec<(u32, u32, u32, u32)> {
        if self.wraps(frame_w) {
            let right = frame_w - self.x;
            vec![
                (self.x, self.y, right, self.h),
                (0, self.y, self.w - right, self.h),
            ]
        } else {
            vec![(self.x, self.y, self.w, self.h)]
        }
    }

    pub fn contains(&self, px: u32, py: u32, frame_w: u32) -> bool {
        self.pieces(frame_w)
            .into_iter()
            .any(|(x, y, w, h)| px >= x && px < x + w && py >= y && py < y + h)
    }

    /// Crop filters in `w:h:x:y` form, one per piece.
    pub fn crops(&self, frame_w: u32) -> Vec<String> {
        self.pieces(frame_w)
            .into_iter()
            .map(|(x, y, w, h)| format!("{w}:{h}:{x}:{y}"))
            .collect()
    }
}

/// The six tiles of an equirectangular frame.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileGrid {
    pub frame_w: u32,
    pub frame_h: u32,
    pub tiles: PerSegment<TileRect>,
}

impl TileGrid {
    pub fn tile(&self, s: SegmentId) -> &TileRect {
        &self.tiles[s]
    }

    /// Tile containing pixel `(px, py)`.
    pub fn tile_at(&self, px: u32, py: u32) -> Option<SegmentId> {
        SegmentId::ALL
            .into_iter()
            .find(|&s| self.tiles[s].contains(px, py, self.frame_w))
    }

    /// Checks that the tiles cover the frame exactly once.
    pub fn validate(&self) -> Result<(), String> {
        let mut pieces = Vec::new();
        for (s, t) in self.tiles.iter() {
            if t.segment != s {
                return Err(format!("tile for {s} is labelled {}", t.segment));
            }
            if t.w == 0 || t.h == 0 {
                return Err(format!("{s} tile is empty"));
            }
            if t.x >= self.frame_w || t.w > self.frame_w || t.y + t.h > self.frame_h {
                return Err(format!("{s} tile {t:?} leaves the frame"));
            }
            pieces.extend(t.pieces(self.frame_w).into_iter().map(|p| (s, p)));
        }
        for (i, (sa, a)) in pieces.iter().enumerate() {
            for (sb, b) in &pieces[i + 1..] {
                let ix = a.0.max(b.0) < (a.0 + a.2).min(b.0 + b.2);
                let iy = a.1.max(b.1) < (a.1 + a.3).min(b.1 + b.3);
                if ix && iy {
                    return Err(format!("{sa} and {sb} overlap"));
                }
            }
        }
        let area: u64 = self.tiles.0.iter().map(TileRect::area).sum();
        if area != self.frame_w as u64 * self.frame_h as u64 {
            return Err(format!("tile area {area} differs from frame area"));
        }
        Ok(())
    }
}

/// Lays the partition onto a `frame_w × frame_h` equirectangular frame.
///
/// The frame must be 2:1 and its width a multiple of 8 so the four middle
/// tiles have equal integer widths. Cap heights are rounded; the middle row
/// absorbs the remainder.
pub fn compute_tile_grid<T: Scalar>(
    p: &HexafacePartition<T>,
    frame_w: u32,
    frame_h: u32,
) -> Result<TileGrid, ParamError> {
    if frame_h == 0 || frame_w as u64 != 2 * frame_h as u64 {
        return Err(ParamError::new(
            "frame",
            format!("{frame_w}x{frame_h} is not a 2:1 equirectangular frame"),
        ));
    }
    if !frame_w.is_multiple_of(8) {
        return Err(ParamError::new("width", format!("{frame_w} is not a multiple of 8")));
    }
    let beta = p.beta_deg.as_f64();
    let cap_h = (frame_h as f64 * (90.0 - beta) / 180.0).round() as u32;
    if cap_h == 0 || 2 * cap_h >= frame_h {
        return Err(ParamError::new(
            "frame",
            format!("{frame_w}x{frame_h} too small for a {beta}° middle body"),
        ));
    }
    let mid_h = frame_h - 2 * cap_h;
    let tile_w = frame_w / 4;
    let tiles = PerSegment::from_fn(|s| match s {
        SegmentId::Top => TileRect { segment: s, x: 0, y: 0, w: frame_w, h: cap_h },
        SegmentId::Bottom => TileRect { segment: s, x: 0, y: cap_h + mid_h, w: frame_w, h: cap_h },
        m => {
            // M0 starts at yaw -45, i.e. 3/8 of the way across.
            let k = m.middle_index().expect("middle segment") as u32;
            let x = (frame_w / 8 * 3 + k * tile_w) % frame_w;
            TileRect { segment: s, x, y: cap_h, w: tile_w, h: mid_h }
        }
    });
    Ok(TileGrid { frame_w, frame_h, tiles })
}

/// One encoded quality level of a tile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representation {
    pub rep_id: RepId,
    pub width: u32,
    pub height: u32,
    pub bandwidth_bps: u64,
}

impl Representation {
    pub fn pixels(&self) -> u64 {
        self.width as u64 * self.height as u64
    }
}

/// Explicit bandwidth for one `(segment, rep_id)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitrateEntry {
    pub segment: SegmentId,
    pub rep_id: RepId,
    pub bandwidth_bps: u64,
}

/// Bandwidth of a representation: `bits_per_pixel · width · height · fps`,
/// unless an override entry names the pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BitrateModel {
    pub bits_per_pixel: f64,
    pub fps: f64,
    #[serde(default)]
    pub overrides: Vec<BitrateEntry>,
}

impl Default for BitrateModel {
    fn default() -> Self {
        Self {
            bits_per_pixel: 0.1,
            fps: 60.0,
            overrides: Vec::new(),
        }
    }
}

impl BitrateModel {
    pub fn pixel_rate(bits_per_pixel: f64, fps: f64) -> Self {
        Self {
            bits_per_pixel,
            fps,
            overrides: Vec::new(),
        }
    }

    /// Parses an override table: a JSON array of `{segment, rep_id, bandwidth_bps}`.
    pub fn with_override_json(mut self, text: &str) -> Result<Self, ParamError> {
        let entries: Vec<BitrateEntry> = serde_json::from_str(text)
            .map_err(|e| ParamError::new("bitrate-table", e.to_string()))?;
        self.overrides.extend(entries);
        Ok(self)
    }

    pub fn bandwidth(&self, segment: SegmentId, rep_id: RepId, width: u32, height: u32) -> u64 {
        if let Some(e) = self
            .overrides
            .iter()
            .rev()
            .find(|e| e.segment == segment && e.rep_id == rep_id)
        {
            return e.bandwidth_bps;
        }
        (self.bits_per_pixel * width as f64 * height as f64 * self.fps).round() as u64
    }
}

/// Linear scale factors producing the published ladder REP1..REP4.
pub const DEFAULT_SCALES: [f64; REP_COUNT] = [1.0, 0.75, 0.5, 0.25];

/// Four representations per tile, best first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ladder {
    pub scale_factors: [f64; REP_COUNT],
    pub reps: PerSegment<[Representation; REP_COUNT]>,
}

impl Ladder {
    pub fn rep(&self, s: SegmentId, rep_id: RepId) -> &Representation {
        &self.reps[s][rep_id as usize - 1]
    }
}

/// Scales each tile by `scale_factors` and prices every level with `model`.
pub fn build_ladder(
    grid: &TileGrid,
    scale_factors: [f64; REP_COUNT],
    model: &BitrateModel,
) -> Result<Ladder, ParamError> {
    if scale_factors[0] != 1.0 {
        return Err(ParamError::new("scales", "first factor must be 1.0"));
    }
    if scale_factors.iter().any(|&f| !(f > 0.0 && f <= 1.0)) {
        return Err(ParamError::new("scales", "factors must lie in (0, 1]"));
    }
    if scale_factors.windows(2).any(|w| w[1] >= w[0]) {
        return Err(ParamError::new("scales", "factors must be strictly decreasing"));
    }
    if !(model.bits_per_pixel > 0.0 && model.fps > 0.0) {
        return Err(ParamError::new("bitrate", "bits per pixel and fps must be positive"));
    }
    if let Some(e) = model.overrides.iter().find(|e| !(1..=4).contains(&e.rep_id)) {
        return Err(ParamError::new("bitrate-table", format!("rep_id {} not in 1..4", e.rep_id)));
    }

    let mut reps = BTreeMap::new();
    for (s, tile) in grid.tiles.iter() {
        let ladder: [Representation; REP_COUNT] = std::array::from_fn(|k| {
            let f = scale_factors[k];
            let width = (tile.w as f64 * f).round() as u32;
            let height = (tile.h as f64 * f).round() as u32;
            let rep_id = k as RepId + 1;
            Representation {
                rep_id,
                width,
                height,
                bandwidth_bps: model.bandwidth(s, rep_id, width, height),
            }
        });
        for pair in ladder.windows(2) {
            if pair[1].width == 0 || pair[1].height == 0 || pair[1].pixels() >= pair[0].pixels() {
                return Err(ParamError::new(
                    "scales",
                    format!("{s} tile too small: REP{} does not shrink", pair[1].rep_id),
                ));
            }
            if pair[1].bandwidth_bps >= pair[0].bandwidth_bps {
                return Err(ParamError::new(
                    "bitrate",
                    format!("{s} REP{} bandwidth does not decrease", pair[1].rep_id),
                ));
            }
        }
        reps.insert(s, ladder);
    }
    Ok(Ladder {
        scale_factors,
        reps: PerSegment::from_fn(|s| reps[&s]),
    })
}

/// Tiling plan handed to external croppers/encoders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TilingPlan {
    pub frame_w: u32,
    pub frame_h: u32,
    pub tiles: Vec<PlannedTile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlannedTile {
    pub segment: SegmentId,
    pub spatial_set_id: u8,
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
    pub crops: Vec<String>,
    pub representations: Vec<Representation>,
}

impl TilingPlan {
    pub fn new(grid: &TileGrid, ladder: &Ladder) -> Self {
        let tiles = SegmentId::ALL
            .into_iter()
            .map(|s| {
                let t = grid.tile(s);
                PlannedTile {
                    segment: s,
                    spatial_set_id: s as u8,
                    x: t.x,
                    y: t.y,
                    w: t.w,
                    h: t.h,
                    crops: t.crops(grid.frame_w),
                    representations: ladder.reps[s].to_vec(),
                }
            })
            .collect();
        Self {
            frame_w: grid.frame_w,
            frame_h: grid.frame_h,
            tiles,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serializes")
    }
}
