//! Flat-earth point-mass aircraft propagation and relative geometry.
//!
//! Commands slew first-order toward their targets at fixed rates; within
//! each slew segment the position integral has a closed form (constant
//! turn rate with linearly varying speed), so stepping at 1 Hz introduces
//! no curvature error and halved steps reproduce the same trajectory.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Vec3, body_to_angles, world_to_body};
use crate::silhouette::ViewAngles;
use crate::units::{G_FPS2, kts_to_fps, wrap_deg_180, wrap_deg_360};

/// Standard-rate turn limit, deg/s.
pub const MAX_TURN_RATE_DPS: f64 = 3.0;
/// Vertical-rate slew limit, ft/s².
pub const MAX_VERTICAL_ACCEL_FPS2: f64 = 2.0;
/// Speed slew limit, ft/s².
pub const MAX_SPEED_ACCEL_FPS2: f64 = 3.4;
/// Commanded-speed envelope, kts.
pub const SPEED_ENVELOPE_KTS: (f64, f64) = (60.0, 250.0);

/// Kinematic state of one aircraft at one instant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AircraftState {
    pub t_s: f64,
    pub east_ft: f64,
    pub north_ft: f64,
    /// Above ground level.
    pub altitude_ft: f64,
    pub ground_speed_fps: f64,
    /// Degrees clockwise from north, [0, 360).
    pub heading_deg: f64,
    /// Positive climbing.
    pub vertical_rate_fps: f64,
    /// Positive turning right.
    pub turn_rate_dps: f64,
    pub bank_deg: f64,
    pub pitch_deg: f64,
}

impl AircraftState {
    /// Level, unaccelerated state at t = 0.
    pub fn level(east_ft: f64, north_ft: f64, altitude_ft: f64, speed_fps: f64, heading_deg: f64) -> Self {
        AircraftState {
            t_s: 0.0,
            east_ft,
            north_ft,
            altitude_ft,
            ground_speed_fps: speed_fps,
            heading_deg: wrap_deg_360(heading_deg),
            vertical_rate_fps: 0.0,
            turn_rate_dps: 0.0,
            bank_deg: 0.0,
            pitch_deg: 0.0,
        }
    }

    pub fn horizontal_position(&self) -> (f64, f64) {
        (self.east_ft, self.north_ft)
    }

    /// World-frame (NED) velocity vector, ft/s.
    pub fn velocity_ned(&self) -> Vec3 {
        let (s, c) = self.heading_deg.to_radians().sin_cos();
        Vec3::new(
            self.ground_speed_fps * c,
            self.ground_speed_fps * s,
            -self.vertical_rate_fps,
        )
    }

    pub fn is_finite(&self) -> bool {
        [
            self.t_s,
            self.east_ft,
            self.north_ft,
            self.altitude_ft,
            self.ground_speed_fps,
            self.heading_deg,
            self.vertical_rate_fps,
            self.turn_rate_dps,
            self.bank_deg,
            self.pitch_deg,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

/// A pilot or script maneuver: slew to the given targets starting at
/// `onset_t_s`. `None` holds the current value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManeuverCommand {
    pub target_heading_deg: Option<f64>,
    pub target_vertical_rate_fps: Option<f64>,
    pub target_speed_fps: Option<f64>,
    pub onset_t_s: f64,
}

impl ManeuverCommand {
    pub fn hold(onset_t_s: f64) -> Self {
        ManeuverCommand {
            target_heading_deg: None,
            target_vertical_rate_fps: None,
            target_speed_fps: None,
            onset_t_s,
        }
    }

    pub fn heading(onset_t_s: f64, target_heading_deg: f64) -> Self {
        ManeuverCommand {
            target_heading_deg: Some(wrap_deg_360(target_heading_deg)),
            target_vertical_rate_fps: None,
            target_speed_fps: None,
            onset_t_s,
        }
    }

    pub fn vertical_rate(onset_t_s: f64, target_vertical_rate_fps: f64) -> Self {
        ManeuverCommand {
            target_heading_deg: None,
            target_vertical_rate_fps: Some(target_vertical_rate_fps),
            target_speed_fps: None,
            onset_t_s,
        }
    }

    /// Clamp the commanded speed into the [60, 250] kt envelope.
    /// Returns the clamped command and whether clamping occurred.
    pub fn clamped_to_envelope(mut self) -> (Self, bool) {
        let (lo, hi) = (kts_to_fps(SPEED_ENVELOPE_KTS.0), kts_to_fps(SPEED_ENVELOPE_KTS.1));
        let mut clamped = false;
        if let Some(v) = self.target_speed_fps {
            let c = v.clamp(lo, hi);
            clamped = c != v;
            self.target_speed_fps = Some(c);
        }
        (self, clamped)
    }
}

/// Advance one aircraft by `dt_s` under an optionally active command.
///
/// Heading slews at up to 3 deg/s, vertical rate at up to 2 ft/s², speed
/// at up to 3.4 ft/s²; each slew segment is integrated with the exact
/// constant-turn-rate arc. Bank follows the coordinated-turn relation
/// tan(bank) = v·ω/g and pitch the kinematic asin(vz/v), feeding the
/// silhouette view geometry.
pub fn propagate(state: &AircraftState, command: Option<&ManeuverCommand>, dt_s: f64) -> Result<AircraftState> {
    if dt_s <= 0.0 {
        return Err(Error::input(format!("propagate needs dt > 0, got {dt_s}")));
    }
    let cmd = command
        .copied()
        .map(|c| c.clamped_to_envelope().0)
        .unwrap_or(ManeuverCommand::hold(state.t_s));

    let mut heading = state.heading_deg;
    let mut speed = state.ground_speed_fps;
    let mut vrate = state.vertical_rate_fps;
    let mut east = state.east_ft;
    let mut north = state.north_ft;
    let mut altitude = state.altitude_ft;
    let mut turn_rate = 0.0;

    let mut remaining = dt_s;
    while remaining > 1e-12 {
        // rates for this segment
        let dh = cmd
            .target_heading_deg
            .map(|t| wrap_deg_180(t - heading))
            .unwrap_or(0.0);
        let omega_dps = if dh == 0.0 { 0.0 } else { MAX_TURN_RATE_DPS.copysign(dh) };
        let dv = cmd.target_speed_fps.map(|t| t - speed).unwrap_or(0.0);
        let accel = if dv == 0.0 { 0.0 } else { MAX_SPEED_ACCEL_FPS2.copysign(dv) };
        let dz = cmd.target_vertical_rate_fps.map(|t| t - vrate).unwrap_or(0.0);
        let vaccel = if dz == 0.0 { 0.0 } else { MAX_VERTICAL_ACCEL_FPS2.copysign(dz) };

        // segment ends at the earliest slew completion
        let mut seg = remaining;
        if omega_dps != 0.0 {
            seg = seg.min(dh.abs() / MAX_TURN_RATE_DPS);
        }
        if accel != 0.0 {
            seg = seg.min(dv.abs() / MAX_SPEED_ACCEL_FPS2);
        }
        if vaccel != 0.0 {
            seg = seg.min(dz.abs() / MAX_VERTICAL_ACCEL_FPS2);
        }
        seg = seg.max(1e-12);

        let psi0 = heading.to_radians();
        let omega = omega_dps.to_radians();
        let v0 = speed;
        let v1 = v0 + accel * seg;
        if omega == 0.0 {
            let dist = v0 * seg + 0.5 * accel * seg * seg;
            east += dist * psi0.sin();
            north += dist * psi0.cos();
        } else {
            let psi1 = psi0 + omega * seg;
            east += (v0 * psi0.cos() - v1 * psi1.cos()) / omega
                + accel / (omega * omega) * (psi1.sin() - psi0.sin());
            north += (v1 * psi1.sin() - v0 * psi0.sin()) / omega
                + accel / (omega * omega) * (psi1.cos() - psi0.cos());
        }
        altitude += vrate * seg + 0.5 * vaccel * seg * seg;

        // advance the slewed quantities, snapping on completion
        if omega_dps != 0.0 {
            let done = seg >= dh.abs() / MAX_TURN_RATE_DPS - 1e-12;
            heading = if done {
                cmd.target_heading_deg.unwrap()
            } else {
                wrap_deg_360(heading + omega_dps * seg)
            };
            turn_rate = if done { 0.0 } else { omega_dps };
        }
        if accel != 0.0 {
            let done = seg >= dv.abs() / MAX_SPEED_ACCEL_FPS2 - 1e-12;
            speed = if done { cmd.target_speed_fps.unwrap() } else { v1 };
        }
        if vaccel != 0.0 {
            let done = seg >= dz.abs() / MAX_VERTICAL_ACCEL_FPS2 - 1e-12;
            vrate = if done {
                cmd.target_vertical_rate_fps.unwrap()
            } else {
                vrate + vaccel * seg
            };
        }
        remaining -= seg;
    }

    if altitude < 0.0 {
        altitude = 0.0;
        vrate = vrate.max(0.0);
    }

    let bank_deg = (speed * turn_rate.to_radians() / G_FPS2).atan().to_degrees();
    let pitch_deg = (vrate / speed).clamp(-1.0, 1.0).asin().to_degrees();

    Ok(AircraftState {
        t_s: state.t_s + dt_s,
        east_ft: east,
        north_ft: north,
        altitude_ft: altitude,
        ground_speed_fps: speed,
        heading_deg: wrap_deg_360(heading),
        vertical_rate_fps: vrate,
        turn_rate_dps: turn_rate,
        bank_deg,
        pitch_deg,
    })
}

/// Geometry of a target as seen from an ownship at the same instant.
#[derive(Clone, Copy, Debug)]
pub struct RelativeGeometry {
    pub range_ft: f64,
    /// Target bearing in the ownship body frame, degrees, +right.
    pub rel_bearing_deg: f64,
    /// Target elevation in the ownship body frame, degrees, +up.
    pub rel_elevation_deg: f64,
    /// Direction to the ownship in the target's body frame; selects which
    /// silhouette of the target the ownship pilot sees.
    pub target_view: ViewAngles,
    /// Range closure rate, ft/s, positive when closing.
    pub closure_rate_fps: f64,
    /// Set when the aircraft positions coincide and angles default to 0.
    pub coincident: bool,
}

/// Exact 3D relative geometry between two synchronized states.
pub fn relative_geometry(own: &AircraftState, tgt: &AircraftState) -> Result<RelativeGeometry> {
    if (own.t_s - tgt.t_s).abs() > 1e-9 {
        return Err(Error::input(format!(
            "relative geometry needs synchronized states ({} vs {})",
            own.t_s, tgt.t_s
        )));
    }
    // NED displacement from own to target
    let d = Vec3::new(
        tgt.north_ft - own.north_ft,
        tgt.east_ft - own.east_ft,
        -(tgt.altitude_ft - own.altitude_ft),
    );
    let range = d.norm();
    if range == 0.0 {
        return Ok(RelativeGeometry {
            range_ft: 0.0,
            rel_bearing_deg: 0.0,
            rel_elevation_deg: 0.0,
            target_view: ViewAngles::new(0.0, 0.0),
            closure_rate_fps: 0.0,
            coincident: true,
        });
    }

    let own_body = world_to_body(d, own.heading_deg, own.pitch_deg, own.bank_deg);
    let (rel_bearing_deg, rel_elevation_deg) = body_to_angles(own_body);

    let tgt_body = world_to_body(-d, tgt.heading_deg, tgt.pitch_deg, tgt.bank_deg);
    let (view_az, view_el) = body_to_angles(tgt_body);

    let rel_vel = tgt.velocity_ned() - own.velocity_ned();
    let closure_rate_fps = -d.dot(rel_vel) / range;

    Ok(RelativeGeometry {
        range_ft: range,
        rel_bearing_deg,
        rel_elevation_deg,
        target_view: ViewAngles::new(view_az, view_el),
        closure_rate_fps,
        coincident: false,
    })
}

/// Horizontal separation between two states, ft.
pub fn horizontal_separation_ft(a: &AircraftState, b: &AircraftState) -> f64 {
    (a.east_ft - b.east_ft).hypot(a.north_ft - b.north_ft)
}
