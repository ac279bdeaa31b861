use serde::Serialize;

use super::{direction_from_angles, HexafacePartition};
use crate::error::ParamError;
use crate::scalar::Scalar;
use crate::segment::SegmentId;

/// Triangle mesh of one hexaface segment on the unit sphere.
///
/// `uvs[i]` is the texture coordinate of `vertices[i]` inside the segment's
/// own tile. Triangles wind counter-clockwise as seen from the sphere centre.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegmentMesh<T> {
    pub segment: SegmentId,
    pub vertices: Vec<[T; 3]>,
    pub uvs: Vec<[T; 2]>,
    pub triangles: Vec<[u32; 3]>,
    pub slices: usize,
    pub stacks: usize,
}

impl<T: Scalar> HexafacePartition<T> {
    /// Samples segment `s` on a `(slices + 1) × (stacks + 1)` grid of yaw and
    /// pitch. Cap segments collapse their pole ring into a single vertex.
    pub fn tessellate(
        &self,
        s: SegmentId,
        slices: usize,
        stacks: usize,
    ) -> Result<SegmentMesh<T>, ParamError> {
        if slices < 2 {
            return Err(ParamError::new("slices", format!("{slices} < 2")));
        }
        if stacks < 1 {
            return Err(ParamError::new("stacks", format!("{stacks} < 1")));
        }
        let region = self.region(s);
        let yaw0 = region.yaw_min_deg;
        let pitch0 = region.pitch_min_deg;
        let yaw_span = region.yaw_span();
        let pitch_span = region.pitch_span();
        let cols = slices + 1;

        let uv_at = |i: usize, j: usize| -> [T; 2] {
            [
                T::lit(i as f64) / T::lit(slices as f64),
                T::lit(j as f64) / T::lit(stacks as f64),
            ]
        };
        let mut vertices = Vec::new();
        let mut uvs = Vec::new();
        let mut push = |uv: [T; 2]| {
            let yaw = yaw0 + uv[0] * yaw_span;
            let pitch = pitch0 + uv[1] * pitch_span;
            vertices.push(direction_from_angles(yaw, pitch));
            uvs.push(uv);
        };

        // Rows of the grid that carry a full ring of vertices.
        let (rows, pole) = match s {
            SegmentId::Top => (0..stacks, Some(stacks)),
            SegmentId::Bottom => (1..stacks + 1, Some(0)),
            _ => (0..stacks + 1, None),
        };
        let first_row = rows.start;
        for j in rows.clone() {
            for i in 0..cols {
                push(uv_at(i, j));
            }
        }
        if let Some(j) = pole {
            push([T::lit(0.5), uv_at(0, j)[1]]);
        }
        let pole_index = pole.map(|_| (vertices.len() - 1) as u32);

        let ring = |i: usize, j: usize| -> u32 {
            match (pole, pole_index) {
                (Some(pj), Some(pi)) if j == pj => pi,
                _ => ((j - first_row) * cols + i) as u32,
            }
        };

        let mut triangles = Vec::with_capacity(2 * slices * stacks);
        for j in 0..stacks {
            for i in 0..slices {
                let a = ring(i, j);
                let b = ring(i + 1, j);
                let c = ring(i + 1, j + 1);
                let d = ring(i, j + 1);
                if a != b {
                    triangles.push([a, c, b]);
                }
                if c != d {
                    triangles.push([a, d, c]);
                }
            }
        }

        Ok(SegmentMesh {
            segment: s,
            vertices,
            uvs,
            triangles,
            slices,
            stacks,
        })
    }
}

impl<T: Scalar> SegmentMesh<T> {
    /// Checks unit-norm vertices, UVs in `[0, 1]`, in-range non-degenerate triangles.
    pub fn validate(&self, norm_tol: T) -> Result<(), String> {
        for (i, v) in self.vertices.iter().enumerate() {
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if (n - T::one()).abs() > norm_tol {
                return Err(format!("vertex {i} has norm {n}"));
            }
        }
        for (i, uv) in self.uvs.iter().enumerate() {
            if uv.iter().any(|&c| c < T::zero() || c > T::one()) {
                return Err(format!("uv {i} out of range: {uv:?}"));
            }
        }
        if self.uvs.len() != self.vertices.len() {
            return Err("uv count differs from vertex count".into());
        }
        let n = self.vertices.len() as u32;
        for (k, t) in self.triangles.iter().enumerate() {
            if t.iter().any(|&i| i >= n) {
                return Err(format!("triangle {k} index out of range: {t:?}"));
            }
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(format!("triangle {k} is degenerate: {t:?}"));
            }
        }
        Ok(())
    }
}
