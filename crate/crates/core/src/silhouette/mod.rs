//! Projected silhouette areas of target airframes.
//!
//! The projected area of the target, as seen from the viewer's direction,
//! drives the visual acquisition rate. Areas come either from rasterized
//! orthographic projections of a triangle mesh or from a pre-computed
//! lookup table over view azimuth/elevation.

mod mesh;
pub mod primitives;
mod raster;
mod table;

pub use mesh::TriangleMesh;
pub use raster::{Projection, build_area_table, project_silhouette_area};
pub use table::{AreaTable, TableMeta};

use serde::{Deserialize, Serialize};

use crate::units::wrap_deg_180;

/// Direction from which an airframe is viewed, in its body frame.
/// Azimuth 0 / elevation 0 is nose-on; azimuth 90 / elevation 0 is the
/// side of the fuselage; elevation +90 looks down on the planform.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViewAngles {
    azimuth_deg: f64,
    elevation_deg: f64,
}

impl ViewAngles {
    /// Build view angles, wrapping azimuth into [-180, 180] and clamping
    /// elevation into [-90, 90].
    pub fn new(azimuth_deg: f64, elevation_deg: f64) -> Self {
        ViewAngles {
            azimuth_deg: wrap_deg_180(azimuth_deg),
            elevation_deg: elevation_deg.clamp(-90.0, 90.0),
        }
    }

    pub fn azimuth_deg(&self) -> f64 {
        self.azimuth_deg
    }

    pub fn elevation_deg(&self) -> f64 {
        self.elevation_deg
    }
}
