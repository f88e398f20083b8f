//! Orthographic silhouette projection by coverage rasterization.
//!
//! The silhouette is the union of the mesh triangles projected onto the
//! plane perpendicular to the view direction, so overlapping structure
//! (fuselage behind wing, etc.) is counted once. Coverage is sampled at
//! pixel centers over the projected bounding box.

use rayon::prelude::*;

use super::{AreaTable, TriangleMesh, ViewAngles};
use crate::error::{Error, Result};
use crate::geom::{Vec3, body_direction};

/// Result of one silhouette projection.
#[derive(Clone, Copy, Debug)]
pub struct Projection {
    /// Silhouette area in the mesh's squared length unit (ft²).
    pub area: f64,
    /// Set when the projected mesh had zero extent and the area is 0.
    pub degenerate: bool,
}

/// Project the mesh silhouette onto the plane perpendicular to the view
/// direction and measure its area by rasterization. `resolution` is the
/// pixel count across the longer edge of the projected bounding box.
pub fn project_silhouette_area(
    mesh: &TriangleMesh,
    view: ViewAngles,
    resolution: u32,
) -> Result<Projection> {
    if resolution < 64 {
        return Err(Error::input(format!(
            "rasterization resolution {resolution} below minimum 64"
        )));
    }

    // View direction (from airframe toward viewer) and an orthonormal
    // in-plane basis. Any basis gives the same area.
    let dir = body_direction(view.azimuth_deg(), view.elevation_deg());
    let helper = if dir.z.abs() < 0.9 {
        Vec3::new(0.0, 0.0, 1.0)
    } else {
        Vec3::new(1.0, 0.0, 0.0)
    };
    let e1 = helper.cross(dir).normalized();
    let e2 = dir.cross(e1);

    let pts: Vec<(f64, f64)> = mesh
        .vertices()
        .iter()
        .map(|&v| (v.dot(e1), v.dot(e2)))
        .collect();

    let (mut min_x, mut max_x) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut min_y, mut max_y) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        min_y = min_y.min(y);
        max_y = max_y.max(y);
    }
    let width = max_x - min_x;
    let height = max_y - min_y;
    let extent = width.max(height);
    if extent <= 0.0 {
        return Ok(Projection {
            area: 0.0,
            degenerate: true,
        });
    }

    let px = extent / resolution as f64;
    let nx = ((width / px).ceil() as usize).max(1);
    let ny = ((height / px).ceil() as usize).max(1);

    let mut covered = vec![0u64; (nx * ny).div_ceil(64)];
    let mut any = false;
    for tri in mesh.triangles() {
        let (ax, ay) = pts[tri[0]];
        let (bx, by) = pts[tri[1]];
        let (cx, cy) = pts[tri[2]];
        // twice the signed area; zero means edge-on or degenerate
        let det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
        if det == 0.0 {
            continue;
        }
        let flip = if det < 0.0 { -1.0 } else { 1.0 };

        let lo_i = (((ax.min(bx).min(cx)) - min_x) / px - 0.5).floor().max(0.0) as usize;
        let hi_i = ((((ax.max(bx).max(cx)) - min_x) / px - 0.5).ceil() as usize).min(nx - 1);
        let lo_j = (((ay.min(by).min(cy)) - min_y) / px - 0.5).floor().max(0.0) as usize;
        let hi_j = ((((ay.max(by).max(cy)) - min_y) / px - 0.5).ceil() as usize).min(ny - 1);

        for j in lo_j..=hi_j {
            let sy = min_y + (j as f64 + 0.5) * px;
            for i in lo_i..=hi_i {
                let sx = min_x + (i as f64 + 0.5) * px;
                let w0 = flip * ((bx - ax) * (sy - ay) - (by - ay) * (sx - ax));
                let w1 = flip * ((cx - bx) * (sy - by) - (cy - by) * (sx - bx));
                let w2 = flip * ((ax - cx) * (sy - cy) - (ay - cy) * (sx - cx));
                if w0 >= 0.0 && w1 >= 0.0 && w2 >= 0.0 {
                    let bit = j * nx + i;
                    covered[bit / 64] |= 1 << (bit % 64);
                    any = true;
                }
            }
        }
    }

    let count: u64 = covered.iter().map(|w| w.count_ones() as u64).sum();
    Ok(Projection {
        area: count as f64 * px * px,
        degenerate: !any,
    })
}

/// Build a full azimuth × elevation area table for a mesh. Steps are in
/// whole degrees and must divide 180 evenly; azimuth spans [0, 180]
/// (lateral symmetry) and elevation [-90, 90]. Cells are computed
/// independently, so the grid parallelizes with deterministic output.
pub fn build_area_table(
    mesh: &TriangleMesh,
    airframe_id: &str,
    az_step_deg: u32,
    el_step_deg: u32,
    resolution: u32,
) -> Result<AreaTable> {
    for (name, step) in [("azimuth", az_step_deg), ("elevation", el_step_deg)] {
        if step == 0 || 180 % step != 0 {
            return Err(Error::input(format!(
                "{name} step {step}° must divide 180 evenly"
            )));
        }
    }
    let azimuths: Vec<f64> = (0..=180).step_by(az_step_deg as usize).map(f64::from).collect();
    let elevations: Vec<f64> = (-90..=90)
        .step_by(el_step_deg as usize)
        .map(f64::from)
        .collect();

    let cells: Vec<(usize, usize)> = (0..azimuths.len())
        .flat_map(|i| (0..elevations.len()).map(move |j| (i, j)))
        .collect();
    let flat: Vec<f64> = cells
        .par_iter()
        .map(|&(i, j)| {
            project_silhouette_area(mesh, ViewAngles::new(azimuths[i], elevations[j]), resolution)
                .map(|p| p.area)
        })
        .collect::<Result<_>>()?;

    let mut areas = vec![vec![0.0; elevations.len()]; azimuths.len()];
    for (k, &(i, j)) in cells.iter().enumerate() {
        areas[i][j] = flat[k];
    }
    AreaTable::new(airframe_id.to_string(), azimuths, elevations, areas)
}
