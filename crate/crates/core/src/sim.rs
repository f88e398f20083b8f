//! Per-encounter simulation loop wiring dynamics, silhouettes, visual
//! acquisition, and the pilot response together.

use serde::{Deserialize, Serialize};

use crate::acquisition::{AcquisitionParams, AcquisitionState, angular_size_arcmin};
use crate::avoidance::{PilotResponseParams, PilotState, WellClearParams, pilot_step};
use crate::dynamics::{AircraftState, ManeuverCommand, propagate, relative_geometry};
use crate::encounters::{ALTITUDE_BAND_FT, EncounterSpec, ScriptedTrajectory, merge_command};
use crate::error::Result;
use crate::metrics::{MinSeparation, NmacTracker};
use crate::rng::{mix, purpose, stream};
use crate::silhouette::AreaTable;

/// Whether pilots respond to what they see.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunMode {
    /// Scripted trajectories only; the denominator of the risk ratio.
    Nominal,
    /// Visual acquisition plus delayed stochastic avoidance.
    Mitigated,
}

/// Everything one encounter simulation needs besides the encounter.
#[derive(Clone, Debug)]
pub struct SimParams<'a> {
    pub dt_s: f64,
    pub duration_s: f64,
    /// Shared by both pilots (same β, visibility, FOV, DOV).
    pub acquisition: AcquisitionParams,
    pub pilot: PilotResponseParams,
    pub well_clear: WellClearParams,
    /// Silhouette table of the ownship airframe (seen by the intruder).
    pub own_table: &'a AreaTable,
    /// Silhouette table of the intruder airframe (seen by the ownship).
    pub intruder_table: &'a AreaTable,
    /// When false, pilots never maneuver.
    pub avoidance: bool,
}

/// Result of one simulated run of one encounter.
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub nmac: bool,
    pub t_first_nmac_s: Option<f64>,
    pub min_sep: MinSeparation,
    pub acquisition_time_own_s: Option<f64>,
    pub acquisition_time_intruder_s: Option<f64>,
    /// Numeric-fault diagnostic; the run is excluded when set.
    pub diagnostic: Option<String>,
}

/// Instantaneous view of the target from one cockpit.
#[derive(Clone, Copy, Debug, Default)]
struct Sight {
    lambda: f64,
    in_fov: bool,
    above_acuity: bool,
}

/// One aircraft's live simulation state: dynamics, script position,
/// acquisition, and pilot response, plus the table describing what this
/// pilot's target looks like.
struct Ship<'a> {
    state: AircraftState,
    events: &'a [ManeuverCommand],
    next_event: usize,
    script_targets: ManeuverCommand,
    /// Pilot avoidance command; once active, the script is abandoned.
    pilot_command: Option<ManeuverCommand>,
    pilot: PilotState,
    acq: AcquisitionState,
    acq_rng: rand_pcg::Pcg64,
    pilot_rng: rand_pcg::Pcg64,
    scan_seed: u64,
    target_table: &'a AreaTable,
    sight: Sight,
    acquisition_time_s: Option<f64>,
}

impl<'a> Ship<'a> {
    fn new(
        traj: &'a ScriptedTrajectory,
        target_table: &'a AreaTable,
        spec_seed: u64,
        pilot_index: u64,
    ) -> Self {
        let mut acq_rng = stream(spec_seed, &[purpose::ACQUISITION, pilot_index]);
        let acq = AcquisitionState::new(&mut acq_rng);
        Ship {
            state: traj.initial,
            events: &traj.events,
            next_event: 0,
            script_targets: ManeuverCommand::hold(0.0),
            pilot_command: None,
            pilot: PilotState::new(),
            acq,
            acq_rng,
            pilot_rng: stream(spec_seed, &[purpose::PILOT, pilot_index]),
            scan_seed: mix(spec_seed, &[pilot_index]),
            target_table,
            sight: Sight::default(),
            acquisition_time_s: None,
        }
    }

    /// Look at the target and record the sighting state at the current
    /// instant: effective rate, FOV membership, and acuity.
    fn look(&mut self, target: &AircraftState, params: &SimParams) -> Result<()> {
        let geom = relative_geometry(&self.state, target)?;
        self.sight = if geom.coincident {
            Sight::default()
        } else {
            let area = self.target_table.lookup(geom.target_view);
            let in_fov = params
                .acquisition
                .fov
                .contains(geom.rel_bearing_deg, geom.rel_elevation_deg);
            let above_acuity = angular_size_arcmin(area, geom.range_ft)
                >= params.acquisition.acuity_threshold_arcmin;
            let lambda = params.acquisition.effective_rate(
                area,
                geom.range_ft,
                geom.rel_bearing_deg,
                geom.rel_elevation_deg,
                self.state.t_s,
                self.scan_seed,
                self.pilot.alert_active,
            )?;
            Sight {
                lambda,
                in_fov,
                above_acuity,
            }
        };
        Ok(())
    }

    /// Advance the acquisition state over (t_s, t_s + dt_s] using the
    /// trapezoid of the segment-endpoint rates; FOV membership and
    /// acuity are taken at the segment end.
    fn integrate_acquisition(&mut self, prev: Sight, dt_s: f64, t_s: f64) {
        let lambda = 0.5 * (prev.lambda + self.sight.lambda);
        self.acq.step(
            lambda,
            dt_s,
            self.sight.in_fov,
            self.sight.above_acuity,
            t_s,
            &mut self.acq_rng,
        );
        if self.acquisition_time_s.is_none() {
            self.acquisition_time_s = self.acq.t_acquired_s;
        }
    }

    /// Run the response logic at the step start; a command issued here
    /// carries its exact (possibly mid-step) onset time.
    fn respond(&mut self, target: &AircraftState, params: &SimParams, t_s: f64) {
        if !params.avoidance || self.pilot_command.is_some() {
            return;
        }
        if let Some(cmd) = pilot_step(
            &mut self.pilot,
            &self.acq,
            &self.state,
            target,
            &params.pilot,
            &params.well_clear,
            &mut self.pilot_rng,
            t_s,
            params.dt_s,
        ) {
            self.pilot_command = Some(cmd.clamped_to_envelope().0);
        }
    }

    /// Commands active at `t_s`: the pilot override once its onset has
    /// passed, otherwise the merged script targets, leveled off at the
    /// altitude band limits.
    fn active_command(&mut self, t_s: f64) -> ManeuverCommand {
        let pilot_active = self
            .pilot_command
            .is_some_and(|c| c.onset_t_s <= t_s + 1e-9);
        let mut cmd = if pilot_active {
            self.pilot_command.unwrap()
        } else {
            while self.next_event < self.events.len()
                && self.events[self.next_event].onset_t_s <= t_s + 1e-9
            {
                let event = self.events[self.next_event];
                merge_command(&mut self.script_targets, &event);
                self.next_event += 1;
            }
            self.script_targets
        };
        let vz = cmd.target_vertical_rate_fps.unwrap_or(self.state.vertical_rate_fps);
        if vz != 0.0 {
            // ramp-down distance at the vertical slew limit
            let settle_ft = vz * vz / (2.0 * crate::dynamics::MAX_VERTICAL_ACCEL_FPS2);
            let descending = vz < 0.0 && self.state.altitude_ft - settle_ft <= ALTITUDE_BAND_FT.0;
            let climbing = vz > 0.0 && self.state.altitude_ft + settle_ft >= ALTITUDE_BAND_FT.1;
            if descending || climbing {
                cmd.target_vertical_rate_fps = Some(0.0);
            }
        }
        cmd
    }

    /// Next command onset strictly inside (t_s, until): a pending script
    /// event, or the pilot command's mid-step onset.
    fn next_onset(&self, t_s: f64, until: f64) -> Option<f64> {
        let mut next: Option<f64> = None;
        let pilot_active = self
            .pilot_command
            .is_some_and(|c| c.onset_t_s <= t_s + 1e-9);
        if let Some(c) = self.pilot_command
            && !pilot_active
            && c.onset_t_s < until
        {
            next = Some(c.onset_t_s);
        }
        if !pilot_active
            && let Some(e) = self.events.get(self.next_event)
            && e.onset_t_s > t_s + 1e-9
            && e.onset_t_s < until
        {
            next = Some(next.map_or(e.onset_t_s, |n| n.min(e.onset_t_s)));
        }
        next
    }

    /// Propagate across [t_s, t_s + dt_s), splitting at exact command
    /// onsets so maneuvers start at their commanded times rather than on
    /// the step grid.
    fn advance(&mut self, t_s: f64, dt_s: f64) -> Result<()> {
        let until = t_s + dt_s;
        let mut now = t_s;
        while until - now > 1e-9 {
            let cmd = self.active_command(now);
            let seg_end = self.next_onset(now, until).unwrap_or(until);
            self.state = propagate(&self.state, Some(&cmd), seg_end - now)?;
            now = seg_end;
        }
        // keep the timestamp exact on the step grid
        self.state.t_s = until;
        Ok(())
    }
}

/// Simulate one encounter in one mode.
///
/// Steps t = 0..duration at dt: propagate both aircraft under scripted
/// events (plus pilot commands in mitigated mode), evaluate the relative
/// geometry and each viewer's projected target area, advance each
/// pilot's acquisition state with trapezoidal hazard integration, and
/// run the response logic for both pilots. All stochastic draws come
/// from streams keyed by the encounter's seed and the pilot index, so
/// nominal and mitigated runs (and runs of the same encounter in
/// different sweep cells) share acquisition draws, and results do not
/// depend on worker scheduling.
pub fn simulate_encounter(spec: &EncounterSpec, params: &SimParams, mode: RunMode) -> Result<RunRecord> {
    let steps = (spec.duration_s.min(params.duration_s) / params.dt_s).round() as usize;
    let dt = params.dt_s;

    let mut own = Ship::new(&spec.ownship_nominal, params.intruder_table, spec.seed, 0);
    let mut intruder = Ship::new(&spec.intruder_nominal, params.own_table, spec.seed, 1);
    let mut tracker = NmacTracker::new();
    tracker.push(&own.state, &intruder.state);

    if mode == RunMode::Mitigated {
        let intruder_state = intruder.state;
        own.look(&intruder_state, params)?;
        let own_state = own.state;
        intruder.look(&own_state, params)?;
    }

    for k in 0..steps {
        let t = k as f64 * dt;
        if mode == RunMode::Mitigated {
            // both pilots decide at the step start: see and be seen
            let intruder_state = intruder.state;
            own.respond(&intruder_state, params, t);
            let own_state = own.state;
            intruder.respond(&own_state, params, t);
        }

        own.advance(t, dt)?;
        intruder.advance(t, dt)?;

        if !own.state.is_finite() || !intruder.state.is_finite() {
            return Ok(RunRecord {
                nmac: false,
                t_first_nmac_s: None,
                min_sep: MinSeparation { horizontal_ft: f64::NAN, vertical_ft: f64::NAN },
                acquisition_time_own_s: None,
                acquisition_time_intruder_s: None,
                diagnostic: Some(format!("non-finite aircraft state at t = {} s", t + dt)),
            });
        }
        tracker.push(&own.state, &intruder.state);

        if mode == RunMode::Mitigated {
            let prev_own = own.sight;
            let prev_intr = intruder.sight;
            let intruder_state = intruder.state;
            own.look(&intruder_state, params)?;
            let own_state = own.state;
            intruder.look(&own_state, params)?;
            own.integrate_acquisition(prev_own, dt, t);
            intruder.integrate_acquisition(prev_intr, dt, t);
        }
    }

    let nmac = tracker.finish();
    Ok(RunRecord {
        nmac: nmac.nmac,
        t_first_nmac_s: nmac.t_first_s,
        min_sep: nmac.min_sep,
        acquisition_time_own_s: own.acquisition_time_s,
        acquisition_time_intruder_s: intruder.acquisition_time_s,
        diagnostic: None,
    })
}
