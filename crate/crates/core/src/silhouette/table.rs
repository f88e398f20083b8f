//! Gridded projected-area tables with bilinear lookup and CSV round-trip.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::ViewAngles;
use crate::error::{Error, Result};

/// Projected silhouette area A(azimuth, elevation) for one airframe, ft².
/// Azimuth covers [0, 180] (lateral symmetry assumed); elevation covers
/// [-90, 90]. Grids need not be uniform.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AreaTable {
    airframe_id: String,
    azimuth_grid_deg: Vec<f64>,
    elevation_grid_deg: Vec<f64>,
    /// areas[az_index][el_index], ft²
    areas: Vec<Vec<f64>>,
}

/// Sidecar metadata written alongside a table CSV.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableMeta {
    pub airframe_id: String,
    /// Grid steps in degrees when the grid is uniform.
    pub az_step_deg: Option<f64>,
    pub el_step_deg: Option<f64>,
}

fn grid_step(grid: &[f64]) -> Option<f64> {
    let step = grid[1] - grid[0];
    let uniform = grid
        .windows(2)
        .all(|w| ((w[1] - w[0]) - step).abs() < 1e-9);
    uniform.then_some(step)
}

impl AreaTable {
    pub fn new(
        airframe_id: String,
        azimuth_grid_deg: Vec<f64>,
        elevation_grid_deg: Vec<f64>,
        areas: Vec<Vec<f64>>,
    ) -> Result<Self> {
        for (name, grid, lo, hi) in [
            ("azimuth", &azimuth_grid_deg, 0.0, 180.0),
            ("elevation", &elevation_grid_deg, -90.0, 90.0),
        ] {
            if grid.len() < 2 {
                return Err(Error::input(format!("{name} grid needs at least 2 nodes")));
            }
            if grid.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::input(format!("{name} grid must be strictly ascending")));
            }
            if grid[0] != lo || *grid.last().unwrap() != hi {
                return Err(Error::input(format!(
                    "{name} grid must cover [{lo}, {hi}], got [{}, {}]",
                    grid[0],
                    grid.last().unwrap()
                )));
            }
        }
        if areas.len() != azimuth_grid_deg.len()
            || areas.iter().any(|row| row.len() != elevation_grid_deg.len())
        {
            return Err(Error::input("area matrix does not match grid dimensions"));
        }
        if areas.iter().flatten().any(|a| !a.is_finite() || *a < 0.0) {
            return Err(Error::input("areas must be finite and non-negative"));
        }
        Ok(AreaTable {
            airframe_id,
            azimuth_grid_deg,
            elevation_grid_deg,
            areas,
        })
    }

    pub fn airframe_id(&self) -> &str {
        &self.airframe_id
    }

    pub fn azimuth_grid_deg(&self) -> &[f64] {
        &self.azimuth_grid_deg
    }

    pub fn elevation_grid_deg(&self) -> &[f64] {
        &self.elevation_grid_deg
    }

    pub fn cell(&self, az_index: usize, el_index: usize) -> f64 {
        self.areas[az_index][el_index]
    }

    /// Bilinear interpolation of the projected area. Azimuth is folded to
    /// |azimuth| by lateral symmetry; grid nodes are returned exactly.
    pub fn lookup(&self, view: ViewAngles) -> f64 {
        let az = view.azimuth_deg().abs();
        let el = view.elevation_deg();
        let (i0, i1, tx) = bracket(&self.azimuth_grid_deg, az);
        let (j0, j1, ty) = bracket(&self.elevation_grid_deg, el);
        let a00 = self.areas[i0][j0];
        let a01 = self.areas[i0][j1];
        let a10 = self.areas[i1][j0];
        let a11 = self.areas[i1][j1];
        let low = a00 + (a10 - a00) * tx;
        let high = a01 + (a11 - a01) * tx;
        low + (high - low) * ty
    }

    /// Write the table as CSV (header row of elevations, first column
    /// azimuths, cells in ft²) plus a JSON metadata sidecar.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = String::from("az_deg");
        for el in &self.elevation_grid_deg {
            out.push_str(&format!(",{el}"));
        }
        out.push('\n');
        for (i, az) in self.azimuth_grid_deg.iter().enumerate() {
            out.push_str(&format!("{az}"));
            for j in 0..self.elevation_grid_deg.len() {
                out.push_str(&format!(",{}", self.areas[i][j]));
            }
            out.push('\n');
        }
        std::fs::write(path, out).map_err(|e| Error::io(path, e))?;

        let meta = TableMeta {
            airframe_id: self.airframe_id.clone(),
            az_step_deg: grid_step(&self.azimuth_grid_deg),
            el_step_deg: grid_step(&self.elevation_grid_deg),
        };
        let meta_path = sidecar_path(path);
        let text = serde_json::to_string_pretty(&meta)
            .map_err(|e| Error::Runtime(format!("metadata serialization: {e}")))?;
        std::fs::write(&meta_path, text).map_err(|e| Error::io(meta_path, e))
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let meta_path = sidecar_path(path);
        let airframe_id = match std::fs::read_to_string(&meta_path) {
            Ok(meta_text) => {
                let meta: TableMeta = serde_json::from_str(&meta_text).map_err(|e| {
                    Error::input(format!("{}: bad metadata sidecar: {e}", meta_path.display()))
                })?;
                meta.airframe_id
            }
            Err(_) => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "unknown".to_string()),
        };
        Self::from_csv_str(&text, airframe_id)
            .map_err(|e| Error::input(format!("{}: {e}", path.display())))
    }

    pub fn from_csv_str(text: &str, airframe_id: String) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::input("empty area table"))?;
        let elevation_grid_deg: Vec<f64> = header
            .split(',')
            .skip(1)
            .map(|tok| {
                tok.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::input(format!("header: {e}")))
            })
            .collect::<Result<_>>()?;

        let mut azimuth_grid_deg = Vec::new();
        let mut areas = Vec::new();
        for (lineno, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split(',');
            let az = fields
                .next()
                .unwrap()
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::input(format!("line {}: {e}", lineno + 1)))?;
            let row: Vec<f64> = fields
                .map(|tok| {
                    tok.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::input(format!("line {}: {e}", lineno + 1)))
                })
                .collect::<Result<_>>()?;
            azimuth_grid_deg.push(az);
            areas.push(row);
        }
        AreaTable::new(airframe_id, azimuth_grid_deg, elevation_grid_deg, areas)
    }

    /// Bundled Cessna-172 table: an ellipsoid-hull fit calibrated to the
    /// type's frontal/side/planform silhouette areas, with measured sample
    /// values kept exactly at their grid nodes.
    pub fn cessna172() -> &'static AreaTable {
        use std::sync::OnceLock;
        static TABLE: OnceLock<AreaTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            AreaTable::from_csv_str(
                include_str!("../../data/cessna172_areas.csv"),
                "cessna172".to_string(),
            )
            .expect("bundled cessna172 table is valid")
        })
    }
}

fn sidecar_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "table".to_string());
    path.with_file_name(format!("{stem}.meta.json"))
}

/// Indices of the grid interval containing x, plus the interpolation
/// fraction. Clamps to the grid range.
fn bracket(grid: &[f64], x: f64) -> (usize, usize, f64) {
    if x <= grid[0] {
        return (0, 0, 0.0);
    }
    if x >= *grid.last().unwrap() {
        let last = grid.len() - 1;
        return (last, last, 0.0);
    }
    let hi = grid.partition_point(|&g| g <= x);
    let lo = hi - 1;
    let t = (x - grid[lo]) / (grid[hi] - grid[lo]);
    (lo, hi, t)
}
