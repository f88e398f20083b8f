//! Unit conversions and physical constants (US customary aviation units).

/// Feet per nautical mile.
pub const FT_PER_NMI: f64 = 6076.115;

/// Feet per second per knot.
pub const FPS_PER_KT: f64 = FT_PER_NMI / 3600.0;

/// Gravitational acceleration, ft/s².
pub const G_FPS2: f64 = 32.174;

/// Arc minutes per radian.
pub const ARCMIN_PER_RAD: f64 = 60.0 * 180.0 / std::f64::consts::PI;

pub fn kts_to_fps(kts: f64) -> f64 {
    kts * FPS_PER_KT
}

pub fn fps_to_kts(fps: f64) -> f64 {
    fps / FPS_PER_KT
}

pub fn nmi_to_ft(nmi: f64) -> f64 {
    nmi * FT_PER_NMI
}

pub fn ft_to_nmi(ft: f64) -> f64 {
    ft / FT_PER_NMI
}

/// Wrap an angle in degrees to (-180, 180].
pub fn wrap_deg_180(deg: f64) -> f64 {
    let mut d = deg % 360.0;
    if d <= -180.0 {
        d += 360.0;
    } else if d > 180.0 {
        d -= 360.0;
    }
    d
}

/// Wrap an angle in degrees to [0, 360).
pub fn wrap_deg_360(deg: f64) -> f64 {
    let d = deg % 360.0;
    if d < 0.0 { d + 360.0 } else { d }
}
