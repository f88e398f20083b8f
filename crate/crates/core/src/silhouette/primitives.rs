//! Mesh constructors for sample shapes and calibration targets.

use super::TriangleMesh;
use crate::geom::Vec3;

/// Axis-aligned unit cube centered at the origin.
pub fn unit_cube() -> TriangleMesh {
    cuboid(Vec3::ZERO, 1.0, 1.0, 1.0)
}

/// Axis-aligned rectangular box centered at `center` with full extents
/// (dx, dy, dz).
pub fn cuboid(center: Vec3, dx: f64, dy: f64, dz: f64) -> TriangleMesh {
    let (hx, hy, hz) = (dx / 2.0, dy / 2.0, dz / 2.0);
    let mut vertices = Vec::with_capacity(8);
    for &sz in &[-1.0, 1.0] {
        for &sy in &[-1.0, 1.0] {
            for &sx in &[-1.0, 1.0] {
                vertices.push(center + Vec3::new(sx * hx, sy * hy, sz * hz));
            }
        }
    }
    // 6 faces, 2 triangles each; winding is irrelevant for silhouettes
    let quads = [
        [0, 1, 3, 2], // bottom (z-)
        [4, 6, 7, 5], // top (z+)
        [0, 4, 5, 1], // y-
        [2, 3, 7, 6], // y+
        [0, 2, 6, 4], // x-
        [1, 5, 7, 3], // x+
    ];
    let mut triangles = Vec::with_capacity(12);
    for q in quads {
        triangles.push([q[0], q[1], q[2]]);
        triangles.push([q[0], q[2], q[3]]);
    }
    TriangleMesh::new(vertices, triangles).expect("cuboid construction is valid")
}

/// Sphere approximated by subdividing an icosahedron `subdivisions` times
/// and projecting onto the radius. Four subdivisions keep silhouette error
/// well under 1%.
pub fn icosphere(radius: f64, subdivisions: u32) -> TriangleMesh {
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    let mut vertices: Vec<Vec3> = [
        (-1.0, phi, 0.0),
        (1.0, phi, 0.0),
        (-1.0, -phi, 0.0),
        (1.0, -phi, 0.0),
        (0.0, -1.0, phi),
        (0.0, 1.0, phi),
        (0.0, -1.0, -phi),
        (0.0, 1.0, -phi),
        (phi, 0.0, -1.0),
        (phi, 0.0, 1.0),
        (-phi, 0.0, -1.0),
        (-phi, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| Vec3::new(x, y, z).normalized() * radius)
    .collect();

    let mut triangles: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];

    for _ in 0..subdivisions {
        let mut midpoints = std::collections::HashMap::new();
        let mut next = Vec::with_capacity(triangles.len() * 4);
        for tri in &triangles {
            let mut mid = [0usize; 3];
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                mid[k] = *midpoints.entry(key).or_insert_with(|| {
                    let m = ((vertices[a] + vertices[b]) * 0.5).normalized() * radius;
                    vertices.push(m);
                    vertices.len() - 1
                });
            }
            next.push([tri[0], mid[0], mid[2]]);
            next.push([tri[1], mid[1], mid[0]]);
            next.push([tri[2], mid[2], mid[1]]);
            next.push([mid[0], mid[1], mid[2]]);
        }
        triangles = next;
    }

    TriangleMesh::new(vertices, triangles).expect("icosphere construction is valid")
}

/// Simplified high-wing single-engine airframe built from boxes, with
/// Cessna-172-like overall dimensions (ft). Suitable as a sample input
/// for table building; not a substitute for measured airframe data.
pub fn high_wing_single() -> TriangleMesh {
    let parts = [
        // fuselage: nose to tail cone
        cuboid(Vec3::new(3.0, 0.0, 0.0), 12.0, 3.3, 4.6),
        // tail boom
        cuboid(Vec3::new(-7.5, 0.0, -0.6), 9.0, 1.6, 2.2),
        // engine cowl
        cuboid(Vec3::new(10.2, 0.0, 0.4), 2.5, 2.8, 3.2),
        // high wing
        cuboid(Vec3::new(2.5, 0.0, -2.6), 4.9, 36.1, 0.9),
        // horizontal stabilizer
        cuboid(Vec3::new(-12.0, 0.0, -0.8), 3.4, 11.3, 0.5),
        // vertical fin
        cuboid(Vec3::new(-12.2, 0.0, -3.4), 3.0, 0.4, 4.6),
    ];
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for part in parts {
        let base = vertices.len();
        vertices.extend_from_slice(part.vertices());
        triangles.extend(
            part.triangles()
                .iter()
                .map(|t| [t[0] + base, t[1] + base, t[2] + base]),
        );
    }
    TriangleMesh::new(vertices, triangles).expect("airframe construction is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn icosphere_vertices_on_radius() {
        let s = icosphere(2.0, 2);
        for v in s.vertices() {
            assert!((v.norm() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn airframe_is_wider_than_tall() {
        let m = high_wing_single();
        let (mut max_y, mut max_z) = (0.0f64, 0.0f64);
        for v in m.vertices() {
            max_y = max_y.max(v.y.abs());
            max_z = max_z.max(v.z.abs());
        }
        assert!(max_y > 17.0 && max_y < 19.0); // half-span
        assert!(max_z < 6.0);
    }
}
