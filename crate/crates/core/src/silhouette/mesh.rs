//! Triangle-soup airframe meshes and an OBJ-subset reader.

use std::path::Path;

use crate::error::{Error, Result};
use crate::geom::Vec3;

/// Airframe surface as a bag of triangles in the body frame
/// (ft; x forward, y right, z down).
#[derive(Clone, Debug)]
pub struct TriangleMesh {
    vertices: Vec<Vec3>,
    triangles: Vec<[usize; 3]>,
}

impl TriangleMesh {
    /// Validates index ranges, finiteness, and non-emptiness.
    pub fn new(vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        if triangles.is_empty() {
            return Err(Error::input("mesh has no triangles"));
        }
        for (i, v) in vertices.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::input(format!("mesh vertex {i} is not finite")));
            }
        }
        for (i, t) in triangles.iter().enumerate() {
            for &k in t {
                if k >= vertices.len() {
                    return Err(Error::input(format!(
                        "triangle {i} references vertex {k}, but mesh has {} vertices",
                        vertices.len()
                    )));
                }
            }
        }
        Ok(TriangleMesh {
            vertices,
            triangles,
        })
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Uniformly scale all vertices about the origin.
    pub fn scaled(&self, factor: f64) -> TriangleMesh {
        TriangleMesh {
            vertices: self.vertices.iter().map(|&v| v * factor).collect(),
            triangles: self.triangles.clone(),
        }
    }

    /// Parse an ASCII triangle-soup mesh with OBJ-subset semantics:
    /// `v x y z` vertex lines and `f i j k` one-based face lines.
    /// Faces with more than three indices are fan-triangulated; anything
    /// other than `v`/`f`/comments is ignored.
    pub fn from_obj_str(text: &str) -> Result<Self> {
        let mut vertices = Vec::new();
        let mut triangles = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            let mut fields = line.split_whitespace();
            match fields.next() {
                Some("v") => {
                    let mut coord = |name: &str| -> Result<f64> {
                        fields
                            .next()
                            .ok_or_else(|| {
                                Error::input(format!(
                                    "line {}: vertex missing {name} coordinate",
                                    lineno + 1
                                ))
                            })?
                            .parse::<f64>()
                            .map_err(|e| Error::input(format!("line {}: {e}", lineno + 1)))
                    };
                    let (x, y, z) = (coord("x")?, coord("y")?, coord("z")?);
                    vertices.push(Vec3::new(x, y, z));
                }
                Some("f") => {
                    let idx: Vec<usize> = fields
                        .map(|tok| {
                            // accept "i", "i/..." forms; only the vertex index is used
                            let head = tok.split('/').next().unwrap_or(tok);
                            head.parse::<usize>().map_err(|e| {
                                Error::input(format!("line {}: {e}", lineno + 1))
                            })
                        })
                        .collect::<Result<_>>()?;
                    if idx.len() < 3 {
                        return Err(Error::input(format!(
                            "line {}: face needs at least 3 indices",
                            lineno + 1
                        )));
                    }
                    if idx.contains(&0) {
                        return Err(Error::input(format!(
                            "line {}: face indices are one-based",
                            lineno + 1
                        )));
                    }
                    for w in 1..idx.len() - 1 {
                        triangles.push([idx[0] - 1, idx[w] - 1, idx[w + 1] - 1]);
                    }
                }
                _ => {}
            }
        }
        TriangleMesh::new(vertices, triangles)
    }

    pub fn from_obj_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_obj_str(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn obj_round_trip_with_quads_and_comments() {
        let obj = "# sample\nv 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n";
        let mesh = TriangleMesh::from_obj_str(obj).unwrap();
        assert_eq!(mesh.vertices().len(), 4);
        assert_eq!(mesh.triangles().len(), 2); // quad fan-triangulated
    }

    #[test]
    fn rejects_out_of_range_index() {
        let obj = "v 0 0 0\nv 1 0 0\nf 1 2 3\n";
        assert!(TriangleMesh::from_obj_str(obj).is_err());
    }

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(TriangleMesh::new(vec![], vec![]).is_err());
        let bad = TriangleMesh::new(
            vec![
                Vec3::new(0.0, 0.0, f64::NAN),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(0.0, 1.0, 0.0),
            ],
            vec![[0, 1, 2]],
        );
        assert!(bad.is_err());
    }
}
