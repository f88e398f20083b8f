//! Conflict detection against a well-clear volume and the delayed
//! stochastic pilot response that follows visual acquisition.

use rand::RngExt;
use serde::{Deserialize, Serialize};

use crate::acquisition::AcquisitionState;
use crate::dynamics::{AircraftState, ManeuverCommand};

/// Well-clear volume and prediction horizon.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct WellClearParams {
    pub horizontal_threshold_ft: f64,
    pub vertical_threshold_ft: f64,
    /// Maximum time-to-CPA that counts as a conflict, s.
    pub time_threshold_s: f64,
    /// Prediction horizon, s.
    pub lookahead_s: f64,
}

impl Default for WellClearParams {
    fn default() -> Self {
        WellClearParams {
            horizontal_threshold_ft: 4000.0,
            vertical_threshold_ft: 450.0,
            time_threshold_s: 35.0,
            lookahead_s: 60.0,
        }
    }
}

/// Stochastic pilot response parameters.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct PilotResponseParams {
    /// Total human response latency plus aircraft response lag, s.
    pub response_delay_s: f64,
    /// Probability of a horizontal (turn) maneuver; otherwise vertical.
    pub p_horizontal: f64,
    /// Turn magnitude away from the predicted conflict, degrees.
    pub turn_magnitude_deg: f64,
    /// Vertical-rate magnitude away from the intruder, ft/s.
    pub vertical_rate_magnitude_fps: f64,
    /// Probability the pilot maneuvers at all, given an alert.
    pub p_comply: f64,
}

impl Default for PilotResponseParams {
    fn default() -> Self {
        PilotResponseParams {
            response_delay_s: 10.0,
            p_horizontal: 0.75,
            turn_magnitude_deg: 30.0,
            vertical_rate_magnitude_fps: 500.0 / 60.0,
            p_comply: 1.0,
        }
    }
}

/// Closest point of approach under constant-velocity extrapolation.
#[derive(Clone, Copy, Debug)]
pub struct CpaPrediction {
    /// Time to CPA from now, clamped to [0, lookahead], s.
    pub t_cpa_s: f64,
    /// Horizontal miss distance at CPA, ft (non-negative).
    pub hmd_ft: f64,
    /// Signed vertical miss at CPA, ft, positive when the target is above.
    pub vmd_ft: f64,
}

/// Predict the horizontal CPA of two constant-velocity extrapolations.
/// With zero relative velocity the CPA is now, at the current separation.
pub fn predict_cpa(own: &AircraftState, tgt: &AircraftState, lookahead_s: f64) -> CpaPrediction {
    let px = tgt.east_ft - own.east_ft;
    let py = tgt.north_ft - own.north_ft;
    let own_v = own.velocity_ned();
    let tgt_v = tgt.velocity_ned();
    let vx = tgt_v.y - own_v.y;
    let vy = tgt_v.x - own_v.x;
    let v2 = vx * vx + vy * vy;
    let t_cpa_s = if v2 > 0.0 {
        (-(px * vx + py * vy) / v2).clamp(0.0, lookahead_s)
    } else {
        0.0
    };
    let hx = px + vx * t_cpa_s;
    let hy = py + vy * t_cpa_s;
    let dz = tgt.altitude_ft - own.altitude_ft;
    let dvz = tgt.vertical_rate_fps - own.vertical_rate_fps;
    CpaPrediction {
        t_cpa_s,
        hmd_ft: hx.hypot(hy),
        vmd_ft: dz + dvz * t_cpa_s,
    }
}

/// Current-separation summary used for the already-inside check.
#[derive(Clone, Copy, Debug)]
pub struct CurrentSeparation {
    pub horizontal_ft: f64,
    pub vertical_ft: f64,
}

impl CurrentSeparation {
    pub fn between(own: &AircraftState, tgt: &AircraftState) -> Self {
        CurrentSeparation {
            horizontal_ft: crate::dynamics::horizontal_separation_ft(own, tgt),
            vertical_ft: (tgt.altitude_ft - own.altitude_ft).abs(),
        }
    }
}

/// True when the predicted CPA penetrates the well-clear volume within
/// the time threshold, or the aircraft are already inside it.
pub fn well_clear_violated(
    pred: &CpaPrediction,
    params: &WellClearParams,
    current: &CurrentSeparation,
) -> bool {
    let predicted = pred.hmd_ft.abs() < params.horizontal_threshold_ft
        && pred.vmd_ft.abs() < params.vertical_threshold_ft
        && pred.t_cpa_s >= 0.0
        && pred.t_cpa_s <= params.time_threshold_s;
    let already_inside = current.horizontal_ft < params.horizontal_threshold_ft
        && current.vertical_ft < params.vertical_threshold_ft;
    predicted || already_inside
}

/// Pilot decision phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PilotPhase {
    Searching,
    AcquiredWaiting,
    Maneuvering,
    Resumed,
}

/// Per-pilot response state over one encounter.
#[derive(Clone, Copy, Debug)]
pub struct PilotState {
    pub phase: PilotPhase,
    pub alert_active: bool,
    pub pending_command: Option<ManeuverCommand>,
    /// Set once the comply draw has been made, so a refusal is final.
    declined: bool,
}

impl PilotState {
    pub fn new() -> Self {
        PilotState {
            phase: PilotPhase::Searching,
            alert_active: false,
            pending_command: None,
            declined: false,
        }
    }
}

impl Default for PilotState {
    fn default() -> Self {
        Self::new()
    }
}

/// Advance one pilot's response logic for the step covering
/// [t_s, t_s + dt_s).
///
/// On acquisition the pilot waits out the response delay while tracking;
/// once the delay expires (within this step) and the
/// (perfect-information) well-clear check flags a conflict, the pilot
/// complies with probability `p_comply` and issues a single maneuver: a
/// turn away from the conflict with probability `p_horizontal`,
/// otherwise a vertical-rate change away in altitude. The command's
/// onset is the exact delay expiry (never earlier than acquisition plus
/// the delay) and it is held through the end of the encounter. Losing
/// the target from the FOV before a maneuver returns the pilot to
/// search.
#[allow(clippy::too_many_arguments)]
pub fn pilot_step(
    pilot: &mut PilotState,
    acq: &AcquisitionState,
    own: &AircraftState,
    tgt: &AircraftState,
    response: &PilotResponseParams,
    well_clear: &WellClearParams,
    rng: &mut impl RngExt,
    t_s: f64,
    dt_s: f64,
) -> Option<ManeuverCommand> {
    match pilot.phase {
        PilotPhase::Searching => {
            debug_assert!(pilot.pending_command.is_none());
            if acq.acquired {
                pilot.phase = PilotPhase::AcquiredWaiting;
            }
            None
        }
        PilotPhase::AcquiredWaiting => {
            if !acq.acquired {
                // target left the FOV before any maneuver
                pilot.phase = PilotPhase::Searching;
                pilot.alert_active = false;
                return None;
            }
            let t_acquired = acq.t_acquired_s.unwrap_or(t_s);
            let earliest = t_acquired + response.response_delay_s;
            if t_s + dt_s <= earliest {
                return None;
            }
            let pred = predict_cpa(own, tgt, well_clear.lookahead_s);
            let current = CurrentSeparation::between(own, tgt);
            if !well_clear_violated(&pred, well_clear, &current) {
                return None;
            }
            pilot.alert_active = true;
            if !pilot.declined {
                pilot.declined = !rng.random_bool(response.p_comply);
            }
            if pilot.declined {
                return None;
            }
            let onset = earliest.max(t_s);
            let command = if rng.random_bool(response.p_horizontal) {
                turn_command(own, tgt, response.turn_magnitude_deg, well_clear.lookahead_s, onset)
            } else {
                vertical_command(&pred, response.vertical_rate_magnitude_fps, onset)
            };
            pilot.phase = PilotPhase::Maneuvering;
            pilot.pending_command = Some(command);
            Some(command)
        }
        // maneuver held through encounter end
        PilotPhase::Maneuvering | PilotPhase::Resumed => None,
    }
}

/// Turn away from the conflict: of the two candidate headings ±magnitude,
/// pick the one whose re-predicted horizontal miss is larger; ties turn
/// right.
fn turn_command(
    own: &AircraftState,
    tgt: &AircraftState,
    magnitude_deg: f64,
    lookahead_s: f64,
    t_s: f64,
) -> ManeuverCommand {
    let miss_with = |delta: f64| {
        let mut trial = *own;
        trial.heading_deg = crate::units::wrap_deg_360(own.heading_deg + delta);
        predict_cpa(&trial, tgt, lookahead_s).hmd_ft
    };
    let right = miss_with(magnitude_deg);
    let left = miss_with(-magnitude_deg);
    // ties (within float noise of the symmetric geometry) turn right
    let delta = if right >= left - 1e-6 { magnitude_deg } else { -magnitude_deg };
    ManeuverCommand::heading(t_s, own.heading_deg + delta)
}

/// Climb or descend away from the intruder; a co-altitude tie climbs.
fn vertical_command(pred: &CpaPrediction, magnitude_fps: f64, t_s: f64) -> ManeuverCommand {
    let rate = if pred.vmd_ft > 0.0 { -magnitude_fps } else { magnitude_fps };
    ManeuverCommand::vertical_rate(t_s, rate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use crate::units::{kts_to_fps, nmi_to_ft};

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() < tol, "{a} vs {b}");
    }

    fn head_on_pair(separation_ft: f64) -> (AircraftState, AircraftState) {
        let own = AircraftState::level(0.0, 0.0, 1000.0, kts_to_fps(100.0), 0.0);
        let tgt = AircraftState::level(0.0, separation_ft, 1000.0, kts_to_fps(100.0), 180.0);
        (own, tgt)
    }

    #[test]
    fn cpa_head_on() {
        let (own, tgt) = head_on_pair(nmi_to_ft(2.0));
        let pred = predict_cpa(&own, &tgt, 60.0);
        assert_close(pred.t_cpa_s, 36.0, 0.01);
        assert_close(pred.hmd_ft, 0.0, 1e-6);
        assert_close(pred.vmd_ft, 0.0, 1e-9);
    }

    #[test]
    fn cpa_parallel_tracks() {
        let own = AircraftState::level(0.0, 0.0, 1000.0, kts_to_fps(100.0), 0.0);
        let tgt = AircraftState::level(3000.0, 500.0, 1200.0, kts_to_fps(100.0), 0.0);
        let pred = predict_cpa(&own, &tgt, 60.0);
        // zero relative velocity: CPA is now at the current offset
        assert_eq!(pred.t_cpa_s, 0.0);
        assert_close(pred.hmd_ft, (3000.0f64.powi(2) + 500.0f64.powi(2)).sqrt(), 1e-9);
        assert_close(pred.vmd_ft, 200.0, 1e-9);
    }

    #[test]
    fn cpa_crossing_matches_brute_force() {
        let v = kts_to_fps(140.0);
        let own = AircraftState::level(0.0, -8000.0, 1000.0, v, 0.0);
        let tgt = AircraftState::level(-9000.0, 0.0, 1000.0, v, 90.0);
        let pred = predict_cpa(&own, &tgt, 120.0);
        // brute-force sweep of the linear extrapolation
        let mut best = (0.0, f64::INFINITY);
        let mut t = 0.0;
        while t <= 120.0 {
            let oe = 0.0;
            let on = -8000.0 + v * t;
            let te = -9000.0 + v * t;
            let tn = 0.0;
            let sep = (te - oe).hypot(tn - on);
            if sep < best.1 {
                best = (t, sep);
            }
            t += 0.01;
        }
        assert_close(pred.t_cpa_s, best.0, 0.02);
        assert_close(pred.hmd_ft, best.1, 0.5);
    }

    #[test]
    fn well_clear_cases() {
        let params = WellClearParams::default();
        let far = CurrentSeparation {
            horizontal_ft: 20_000.0,
            vertical_ft: 0.0,
        };
        // head-on at 36 s is outside the 35 s time threshold
        let pred = CpaPrediction { t_cpa_s: 36.0, hmd_ft: 0.0, vmd_ft: 0.0 };
        assert!(!well_clear_violated(&pred, &params, &far));
        let pred = CpaPrediction { t_cpa_s: 20.0, hmd_ft: 3000.0, vmd_ft: 100.0 };
        assert!(well_clear_violated(&pred, &params, &far));
        let pred = CpaPrediction { t_cpa_s: 10.0, hmd_ft: 5000.0, vmd_ft: 0.0 };
        assert!(!well_clear_violated(&pred, &params, &far));
        // already inside the volume
        let inside = CurrentSeparation {
            horizontal_ft: 3500.0,
            vertical_ft: 200.0,
        };
        let pred = CpaPrediction { t_cpa_s: 60.0, hmd_ft: 9000.0, vmd_ft: 0.0 };
        assert!(well_clear_violated(&pred, &params, &inside));
    }

    fn acquired_at(t: f64) -> AcquisitionState {
        AcquisitionState {
            cum_prob: 1.0,
            draw_u: 0.5,
            acquired: true,
            tracking: true,
            t_acquired_s: Some(t),
            time_in_range_s: 10.0,
        }
    }

    #[test]
    fn no_command_before_response_delay() {
        let (own, tgt) = head_on_pair(8000.0);
        let response = PilotResponseParams::default();
        let wc = WellClearParams::default();
        let mut pilot = PilotState::new();
        let acq = acquired_at(50.0);
        let mut rng = stream(1, &[1]);

        pilot.phase = PilotPhase::AcquiredWaiting;
        for t in [50.0, 55.0, 58.9] {
            assert!(
                pilot_step(&mut pilot, &acq, &own, &tgt, &response, &wc, &mut rng, t, 1.0)
                    .is_none()
            );
        }
        // the delay expires inside this step; onset lands exactly on it
        let cmd = pilot_step(&mut pilot, &acq, &own, &tgt, &response, &wc, &mut rng, 59.5, 1.0);
        let cmd = cmd.expect("maneuver at acquisition + delay");
        assert_eq!(cmd.onset_t_s, 60.0);
        assert_eq!(pilot.phase, PilotPhase::Maneuvering);
    }

    #[test]
    fn no_command_without_conflict() {
        // parallel tracks widely separated: never well-clear violated
        let own = AircraftState::level(0.0, 0.0, 1000.0, kts_to_fps(100.0), 0.0);
        let tgt = AircraftState::level(30_000.0, 0.0, 1000.0, kts_to_fps(100.0), 0.0);
        let response = PilotResponseParams::default();
        let wc = WellClearParams::default();
        let mut pilot = PilotState::new();
        pilot.phase = PilotPhase::AcquiredWaiting;
        let acq = acquired_at(10.0);
        let mut rng = stream(1, &[2]);
        for t in 20..200 {
            assert!(
                pilot_step(&mut pilot, &acq, &own, &tgt, &response, &wc, &mut rng, t as f64, 1.0)
                    .is_none()
            );
        }
        assert_eq!(pilot.phase, PilotPhase::AcquiredWaiting);
    }

    #[test]
    fn p_comply_zero_never_maneuvers() {
        let (own, tgt) = head_on_pair(8000.0);
        let response = PilotResponseParams {
            p_comply: 0.0,
            ..Default::default()
        };
        let wc = WellClearParams::default();
        let mut pilot = PilotState::new();
        pilot.phase = PilotPhase::AcquiredWaiting;
        let acq = acquired_at(0.0);
        let mut rng = stream(1, &[3]);
        for t in 10..100 {
            assert!(
                pilot_step(&mut pilot, &acq, &own, &tgt, &response, &wc, &mut rng, t as f64, 1.0)
                    .is_none()
            );
        }
    }

    #[test]
    fn turn_direction_beats_mirror_image() {
        // intruder crossing left to right ahead: turning one way must
        // re-predict at least as much miss as the other
        let own = AircraftState::level(0.0, 0.0, 1000.0, kts_to_fps(120.0), 0.0);
        let tgt = AircraftState::level(-6000.0, 9000.0, 1000.0, kts_to_fps(120.0), 90.0);
        let cmd = turn_command(&own, &tgt, 30.0, 60.0, 0.0);
        let chosen = cmd.target_heading_deg.unwrap();
        let mirror = crate::units::wrap_deg_360(own.heading_deg - (chosen - own.heading_deg));
        let miss = |heading: f64| {
            let mut trial = own;
            trial.heading_deg = heading;
            predict_cpa(&trial, &tgt, 60.0).hmd_ft
        };
        assert!(miss(chosen) >= miss(mirror));
    }

    #[test]
    fn symmetric_head_on_tie_turns_right() {
        let (own, tgt) = head_on_pair(nmi_to_ft(1.0));
        let cmd = turn_command(&own, &tgt, 30.0, 60.0, 0.0);
        assert_close(cmd.target_heading_deg.unwrap(), 30.0, 1e-9);
    }

    #[test]
    fn vertical_maneuver_moves_away() {
        let above = CpaPrediction { t_cpa_s: 20.0, hmd_ft: 0.0, vmd_ft: 300.0 };
        let cmd = vertical_command(&above, 8.333, 0.0);
        assert!(cmd.target_vertical_rate_fps.unwrap() < 0.0);
        let below = CpaPrediction { t_cpa_s: 20.0, hmd_ft: 0.0, vmd_ft: -300.0 };
        let cmd = vertical_command(&below, 8.333, 0.0);
        assert!(cmd.target_vertical_rate_fps.unwrap() > 0.0);
        // co-altitude tie climbs
        let tie = CpaPrediction { t_cpa_s: 20.0, hmd_ft: 0.0, vmd_ft: 0.0 };
        assert!(vertical_command(&tie, 8.333, 0.0).target_vertical_rate_fps.unwrap() > 0.0);
    }

    #[test]
    fn fov_loss_returns_to_search_without_command() {
        let (own, tgt) = head_on_pair(8000.0);
        let response = PilotResponseParams::default();
        let wc = WellClearParams::default();
        let mut pilot = PilotState::new();
        pilot.phase = PilotPhase::AcquiredWaiting;
        let lost = AcquisitionState {
            acquired: false,
            tracking: false,
            cum_prob: 0.0,
            draw_u: 0.5,
            t_acquired_s: None,
            time_in_range_s: 3.0,
        };
        let mut rng = stream(1, &[4]);
        let cmd = pilot_step(&mut pilot, &lost, &own, &tgt, &response, &wc, &mut rng, 30.0, 1.0);
        assert!(cmd.is_none());
        assert_eq!(pilot.phase, PilotPhase::Searching);
        assert!(pilot.pending_command.is_none());
    }
}
