use std::fmt::Write;

use super::SegmentMesh;
use crate::scalar::Scalar;

/// Wavefront OBJ text for a mesh: `v`, `vt` and `f v/vt` records, 1-based.
pub fn export_obj<T: Scalar>(m: &SegmentMesh<T>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# hexaface segment {}", m.segment);
    let _ = writeln!(out, "o {}", m.segment);
    for v in &m.vertices {
        let _ = writeln!(
            out,
            "v {:.6} {:.6} {:.6}",
            v[0].as_f64(),
            v[1].as_f64(),
            v[2].as_f64()
        );
    }
    for uv in &m.uvs {
        let _ = writeln!(out, "vt {:.6} {:.6}", uv[0].as_f64(), uv[1].as_f64());
    }
    for t in &m.triangles {
        let [a, b, c] = t.map(|i| i + 1);
        let _ = writeln!(out, "f {a}/{a} {b}/{b} {c}/{c}");
    }
    out
}

/// Reads the `v` records of an OBJ document.
pub fn parse_obj_vertices(text: &str) -> Result<Vec<[f64; 3]>, String> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let mut parts = line.split_whitespace();
        if parts.next() != Some("v") {
            continue;
        }
        let coords: Vec<f64> = parts
            .map(|p| p.parse::<f64>().map_err(|e| format!("line {}: {e}", n + 1)))
            .collect::<Result<_, _>>()?;
        if coords.len() != 3 {
            return Err(format!("line {}: expected 3 coordinates", n + 1));
        }
        out.push([coords[0], coords[1], coords[2]]);
    }
    Ok(out)
}
