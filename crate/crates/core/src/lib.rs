//! View-aware tiled 360° video streaming.
//!
//! The viewing sphere is split into a *hexaface* partition: a top cap, a
//! bottom cap and four 90° wide segments around the middle body. Each segment
//! maps to one rectangular tile of the equirectangular source frame, every
//! tile is offered as a four-step quality ladder inside a DASH manifest whose
//! SRD properties link the 2D tile to its 3D segment, and a trace-driven
//! simulator picks per-tile qualities from the viewer's head orientation.
//!
//! Geometry and orientation types are generic over the floating point scalar
//! (`f32` or `f64`); the aliases below fix the scalar to `f64`, which is what
//! the tiling, manifest and simulation layers use.

pub mod adaptation;
pub mod angle;
pub mod error;
pub mod mpd;
pub mod scalar;
pub mod segment;
pub mod sim;
pub mod sphere;
pub mod tiling;
pub mod viewport;

pub use adaptation::{baseline_decision, decide, AdaptationDecision, AdaptationPolicy, Tier};
pub use error::ParamError;
pub use mpd::{generate_mpd, parse_mpd, serialize_mpd, MpdError, MpdErrorKind, MpdModel, SrdDescriptor};
pub use scalar::Scalar;
pub use segment::{PerSegment, RepId, SegmentId};
pub use sim::{compare, load_trace, simulate, OrientationTrace, SavingsReport, SessionReport};
pub use sphere::{AngularRegion, HexafacePartition, SegmentMesh};
pub use tiling::{build_ladder, compute_tile_grid, BitrateModel, Ladder, Representation, TileGrid, TileRect};
pub use viewport::{Pose, Quaternion, Visibility};

/// Hexaface partition over `f64` angles.
pub type Partition = HexafacePartition<f64>;
/// Hexaface partition over `f32` angles.
pub type PartitionF32 = HexafacePartition<f32>;
/// Angular region over `f64` angles.
pub type Region = AngularRegion<f64>;
/// Triangle mesh of one segment with `f64` coordinates.
pub type Mesh = SegmentMesh<f64>;
/// Triangle mesh of one segment with `f32` coordinates.
pub type MeshF32 = SegmentMesh<f32>;
/// Unit quaternion over `f64`.
pub type Quat = Quaternion<f64>;
/// Unit quaternion over `f32`.
pub type QuatF32 = Quaternion<f32>;
/// Head pose over `f64` angles.
pub type HeadPose = Pose<f64>;
/// Per-segment viewport overlap over `f64`.
pub type SegmentVisibility = Visibility<f64>;
