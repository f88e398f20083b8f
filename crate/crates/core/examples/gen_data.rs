//! Regenerates the bundled data files under crates/core/data/:
//!
//! - `cessna172.obj`: the simplified high-wing sample mesh
//! - `cessna172_areas.csv` (+ sidecar): the bundled Cessna 172 projected
//!   area table
//!
//! The table is an ellipsoid-hull model calibrated so the frontal, side,
//! and planform areas match the type's reference silhouette areas
//! (110 / 118 / 430 ft²); the remaining reference sample values at
//! off-cardinal view angles are kept exactly at their grid nodes.

use std::fmt::Write as _;
use std::path::Path;

use lookout_core::silhouette::primitives::high_wing_single;

/// Reference sample values (azimuth °, elevation °, ft²) for the C172.
const REFERENCE_SAMPLES: &[(f64, f64, f64)] = &[
    (0.0, 0.0, 110.0),
    (0.0, -90.0, 430.0),
    (0.0, 90.0, 430.0),
    (0.0, -75.0, 407.0),
    (0.0, 75.0, 424.0),
    (0.0, -60.0, 363.0),
    (0.0, 60.0, 388.0),
    (60.0, 0.0, 143.0),
    (75.0, 0.0, 145.0),
    (90.0, 0.0, 118.0),
];

const FRONTAL_SQFT: f64 = 110.0;
const SIDE_SQFT: f64 = 118.0;
const PLANFORM_SQFT: f64 = 430.0;

/// Projected area of the calibrated ellipsoid hull for a unit view
/// direction (ux along the fuselage, uy spanwise, uz vertical).
fn ellipsoid_area(az_deg: f64, el_deg: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let bc = FRONTAL_SQFT / pi;
    let ac = SIDE_SQFT / pi;
    let ab = PLANFORM_SQFT / pi;
    let (se, ce) = el_deg.to_radians().sin_cos();
    let (sa, ca) = az_deg.to_radians().sin_cos();
    let (ux, uy, uz) = (ce * ca, ce * sa, se);
    pi * ((bc * ux).powi(2) + (ac * uy).powi(2) + (ab * uz).powi(2)).sqrt()
}

fn main() {
    let data_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    std::fs::create_dir_all(&data_dir).unwrap();

    // sample mesh
    let mesh = high_wing_single();
    let mut obj = String::from("# simplified high-wing single-engine airframe, ft, body frame\n");
    for v in mesh.vertices() {
        let _ = writeln!(obj, "v {} {} {}", v.x, v.y, v.z);
    }
    for t in mesh.triangles() {
        let _ = writeln!(obj, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
    }
    std::fs::write(data_dir.join("cessna172.obj"), obj).unwrap();

    // area table on a 15° grid with reference samples pinned exactly
    let mut csv = String::from("az_deg");
    let elevations: Vec<i32> = (-90..=90).step_by(15).collect();
    let azimuths: Vec<i32> = (0..=180).step_by(15).collect();
    for el in &elevations {
        let _ = write!(csv, ",{el}");
    }
    csv.push('\n');
    for &az in &azimuths {
        let _ = write!(csv, "{az}");
        for &el in &elevations {
            let reference = REFERENCE_SAMPLES
                .iter()
                .find(|(a, e, _)| *a == az as f64 && *e == el as f64);
            let area = match reference {
                Some((_, _, sq_ft)) => *sq_ft,
                None => (ellipsoid_area(az as f64, el as f64) * 100.0).round() / 100.0,
            };
            let _ = write!(csv, ",{area}");
        }
        csv.push('\n');
    }
    std::fs::write(data_dir.join("cessna172_areas.csv"), csv).unwrap();
    std::fs::write(
        data_dir.join("cessna172_areas.meta.json"),
        "{\n  \"airframe_id\": \"cessna172\",\n  \"az_step_deg\": 15.0,\n  \"el_step_deg\": 15.0\n}\n",
    )
    .unwrap();

    println!("wrote {}", data_dir.display());
}
