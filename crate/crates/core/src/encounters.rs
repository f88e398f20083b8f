//! Importance-sampled pairwise VFR encounter generation and set files.
//!
//! Encounters are built backwards from a closest-point-of-approach
//! configuration at t = 180 s: miss-distance bins are importance sampled,
//! nominal trajectories (cruise plus at most one heading event and one
//! vertical event per aircraft) are solved so the unmitigated miss at CPA
//! equals the sampled values, and each encounter carries the
//! target/sampling probability-ratio weight.

use rand::RngExt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};
use std::path::Path;

use crate::dynamics::{AircraftState, ManeuverCommand, propagate};
use crate::error::{Error, Result};
use crate::rng::{purpose, stream};
use crate::units::{kts_to_fps, wrap_deg_360};

/// Minimum lateral separation at t = 0, ft (3.5 nmi).
pub const MIN_INITIAL_SEPARATION_FT: f64 = 3.5 * crate::units::FT_PER_NMI;
/// Operating altitude band, ft AGL.
pub const ALTITUDE_BAND_FT: (f64, f64) = (200.0, 4000.0);
/// Default encounter duration and CPA time, s.
pub const DEFAULT_DURATION_S: f64 = 220.0;
pub const DEFAULT_T_CPA_S: f64 = 180.0;

const MAX_ATTEMPTS: usize = 1000;
/// Keep mid-step altitude excursions inside the band.
const ALTITUDE_MARGIN_FT: f64 = 15.0;
/// CPA must be the strict closest horizontal approach; earlier separation
/// must exceed the CPA miss by this margin.
const EARLY_APPROACH_MARGIN_FT: f64 = 50.0;
/// Reject near-parallel geometries with negligible closure, ft/s.
const MIN_RELATIVE_SPEED_FPS: f64 = 20.0;
/// Maneuver events settle before this time so the CPA geometry is flown
/// straight and level.
const LAST_EVENT_SETTLED_S: f64 = 170.0;

/// Broad airframe class; affects sampled speeds and vertical-event rates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AirframeClass {
    FixedWing,
    RotaryWing,
}

impl AirframeClass {
    pub fn all() -> [AirframeClass; 2] {
        [AirframeClass::FixedWing, AirframeClass::RotaryWing]
    }

    /// Cruise-speed sampling range, kts. Rotary-wing trajectories admit
    /// slower cruise but no hover-like legs.
    pub fn speed_range_kts(self) -> (f64, f64) {
        match self {
            AirframeClass::FixedWing => (90.0, 250.0),
            AirframeClass::RotaryWing => (60.0, 155.0),
        }
    }

    /// Vertical-event rate magnitude range, ft/s.
    pub fn vertical_rate_range_fps(self) -> (f64, f64) {
        match self {
            AirframeClass::FixedWing => (5.0, 500.0 / 60.0),
            AirframeClass::RotaryWing => (5.0, 800.0 / 60.0),
        }
    }
}

impl std::fmt::Display for AirframeClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AirframeClass::FixedWing => "fixed-wing",
            AirframeClass::RotaryWing => "rotary-wing",
        })
    }
}

/// Importance-sampling scheme over signed HMD/VMD bins.
///
/// Bin edges partition the miss-distance envelope; encounters are drawn
/// from `sampling_probs` and reweighted by target/sampling ratios so
/// weighted statistics estimate the `target_probs` distribution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ImportanceScheme {
    pub hmd_edges_ft: Vec<f64>,
    pub vmd_edges_ft: Vec<f64>,
    pub sampling_probs_hmd: Vec<f64>,
    pub sampling_probs_vmd: Vec<f64>,
    pub target_probs_hmd: Vec<f64>,
    pub target_probs_vmd: Vec<f64>,
}

fn uniform_probs(bins: usize) -> Vec<f64> {
    vec![1.0 / bins as f64; bins]
}

fn width_probs(edges: &[f64]) -> Vec<f64> {
    let span = edges.last().unwrap() - edges[0];
    edges.windows(2).map(|w| (w[1] - w[0]) / span).collect()
}

impl Default for ImportanceScheme {
    /// Uniform sampling over the bins, targets proportional to bin width.
    fn default() -> Self {
        let hmd_edges_ft = vec![-2000.0, -500.0, 500.0, 2000.0];
        let vmd_edges_ft = vec![-450.0, -100.0, 100.0, 450.0];
        ImportanceScheme {
            sampling_probs_hmd: uniform_probs(hmd_edges_ft.len() - 1),
            sampling_probs_vmd: uniform_probs(vmd_edges_ft.len() - 1),
            target_probs_hmd: width_probs(&hmd_edges_ft),
            target_probs_vmd: width_probs(&vmd_edges_ft),
            hmd_edges_ft,
            vmd_edges_ft,
        }
    }
}

impl ImportanceScheme {
    pub fn validate(&self) -> Result<()> {
        for (name, edges, probs) in [
            ("hmd", &self.hmd_edges_ft, [&self.sampling_probs_hmd, &self.target_probs_hmd]),
            ("vmd", &self.vmd_edges_ft, [&self.sampling_probs_vmd, &self.target_probs_vmd]),
        ] {
            if edges.len() < 2 || edges.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::input(format!("{name} edges must be strictly ascending")));
            }
            for p in probs {
                if p.len() != edges.len() - 1 {
                    return Err(Error::input(format!(
                        "{name} probability vector length {} does not match {} bins",
                        p.len(),
                        edges.len() - 1
                    )));
                }
                if p.iter().any(|&x| x <= 0.0) {
                    return Err(Error::input(format!("{name} probabilities must be positive")));
                }
                if ((p.iter().sum::<f64>()) - 1.0).abs() > 1e-9 {
                    return Err(Error::input(format!("{name} probabilities must sum to 1")));
                }
            }
        }
        Ok(())
    }

    pub fn weight(&self, hmd_bin: usize, vmd_bin: usize) -> f64 {
        (self.target_probs_hmd[hmd_bin] / self.sampling_probs_hmd[hmd_bin])
            * (self.target_probs_vmd[vmd_bin] / self.sampling_probs_vmd[vmd_bin])
    }
}

/// A scripted nominal flight: an initial state plus timed maneuver events.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScriptedTrajectory {
    pub initial: AircraftState,
    pub events: Vec<ManeuverCommand>,
}

/// One generated pairwise encounter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EncounterSpec {
    pub id: u64,
    pub ownship_nominal: ScriptedTrajectory,
    pub intruder_nominal: ScriptedTrajectory,
    pub duration_s: f64,
    pub t_cpa_s: f64,
    pub hmd_bin: usize,
    pub vmd_bin: usize,
    /// Signed: positive means the intruder passes to the ownship's right.
    pub sampled_hmd_ft: f64,
    /// Signed: positive means the intruder passes above.
    pub sampled_vmd_ft: f64,
    pub weight: f64,
    /// Per-encounter stream seed for acquisition and pilot draws.
    pub seed: u64,
}

/// Sampled single-aircraft nominal plan before geometry placement.
struct FlightPlan {
    speed_fps: f64,
    heading_at_cpa_deg: f64,
    initial_heading_deg: f64,
    events: Vec<ManeuverCommand>,
    /// Relative displacement profile at 1 Hz from a zero start.
    east_profile: Vec<f64>,
    north_profile: Vec<f64>,
    alt_profile: Vec<f64>,
}

fn sample_plan(class: AirframeClass, duration_s: f64, rng: &mut impl RngExt) -> FlightPlan {
    let (lo_kts, hi_kts) = class.speed_range_kts();
    let speed_fps = kts_to_fps(rng.random_range(lo_kts..hi_kts));
    let heading_at_cpa_deg = rng.random_range(0.0..360.0);

    let mut events = Vec::new();
    let mut initial_heading_deg = heading_at_cpa_deg;
    if rng.random_bool(0.5) {
        // one heading event, finished well before CPA; whole-second
        // onsets keep scripted trajectories identical across timesteps
        let onset = rng.random_range(30..140) as f64;
        let magnitude = rng.random_range(15.0..90.0);
        let delta = if rng.random_bool(0.5) { magnitude } else { -magnitude };
        initial_heading_deg = wrap_deg_360(heading_at_cpa_deg - delta);
        events.push(ManeuverCommand::heading(onset, heading_at_cpa_deg));
    }
    if rng.random_bool(0.5) {
        // one vertical event: rate on, rate back to level
        let onset = rng.random_range(30..110) as f64;
        let hold = rng.random_range(20..50) as f64;
        let (rlo, rhi) = class.vertical_rate_range_fps();
        let magnitude = rng.random_range(rlo..rhi);
        let rate = if rng.random_bool(0.5) { magnitude } else { -magnitude };
        events.push(ManeuverCommand::vertical_rate(onset, rate));
        events.push(ManeuverCommand::vertical_rate(onset + hold, 0.0));
    }
    events.sort_by(|a, b| a.onset_t_s.partial_cmp(&b.onset_t_s).unwrap());

    // displacement profile from a high placeholder altitude (no ground
    // clamp can trigger); relative profiles are start-independent
    let placeholder_alt = 50_000.0;
    let mut state = AircraftState::level(0.0, 0.0, placeholder_alt, speed_fps, initial_heading_deg);
    let steps = duration_s.round() as usize;
    let mut east_profile = Vec::with_capacity(steps + 1);
    let mut north_profile = Vec::with_capacity(steps + 1);
    let mut alt_profile = Vec::with_capacity(steps + 1);
    east_profile.push(0.0);
    north_profile.push(0.0);
    alt_profile.push(0.0);
    let mut cursor = 0usize;
    let mut active = ManeuverCommand::hold(0.0);
    for k in 0..steps {
        let t = k as f64;
        while cursor < events.len() && events[cursor].onset_t_s <= t {
            merge_command(&mut active, &events[cursor]);
            cursor += 1;
        }
        state = propagate(&state, Some(&active), 1.0).expect("unit step");
        east_profile.push(state.east_ft);
        north_profile.push(state.north_ft);
        alt_profile.push(state.altitude_ft - placeholder_alt);
    }

    FlightPlan {
        speed_fps,
        heading_at_cpa_deg,
        initial_heading_deg,
        events,
        east_profile,
        north_profile,
        alt_profile,
    }
}

/// Merge a newly active event into the running command targets.
pub fn merge_command(active: &mut ManeuverCommand, event: &ManeuverCommand) {
    if event.target_heading_deg.is_some() {
        active.target_heading_deg = event.target_heading_deg;
    }
    if event.target_vertical_rate_fps.is_some() {
        active.target_vertical_rate_fps = event.target_vertical_rate_fps;
    }
    if event.target_speed_fps.is_some() {
        active.target_speed_fps = event.target_speed_fps;
    }
    active.onset_t_s = event.onset_t_s;
}

/// Generate one encounter on the (master_seed, id) stream.
///
/// Rejection-samples plan pairs until the geometric constraints hold:
/// initial lateral separation of at least 3.5 nmi, all altitudes within
/// the [200, 4000] ft band, meaningful closure, and t = 180 s being the
/// strict closest horizontal approach with the sampled signed miss
/// distances.
pub fn sample_encounter(
    scheme: &ImportanceScheme,
    class: AirframeClass,
    id: u64,
    master_seed: u64,
) -> Result<EncounterSpec> {
    scheme.validate()?;
    let mut rng = stream(master_seed, &[purpose::GENERATE, id]);
    let mut rejects = RejectCounts::default();

    for _ in 0..MAX_ATTEMPTS {
        // miss-distance bins and values
        let hmd_bin = pick_bin(&scheme.sampling_probs_hmd, &mut rng);
        let vmd_bin = pick_bin(&scheme.sampling_probs_vmd, &mut rng);
        let hmd = rng.random_range(scheme.hmd_edges_ft[hmd_bin]..scheme.hmd_edges_ft[hmd_bin + 1]);
        let vmd = rng.random_range(scheme.vmd_edges_ft[vmd_bin]..scheme.vmd_edges_ft[vmd_bin + 1]);

        let own = sample_plan(class, DEFAULT_DURATION_S, &mut rng);
        let intr = sample_plan(class, DEFAULT_DURATION_S, &mut rng);

        let cpa_idx = DEFAULT_T_CPA_S as usize;
        // relative horizontal velocity at CPA (both straight there)
        let (oe, on) = heading_unit(own.heading_at_cpa_deg);
        let (ie, inn) = heading_unit(intr.heading_at_cpa_deg);
        let we = intr.speed_fps * ie - own.speed_fps * oe;
        let wn = intr.speed_fps * inn - own.speed_fps * on;
        let wmag = we.hypot(wn);
        if wmag < MIN_RELATIVE_SPEED_FPS {
            rejects.slow_closure += 1;
            continue;
        }

        // miss vector perpendicular to the relative velocity, oriented so
        // positive HMD puts the intruder off the ownship's right side
        let (mut ue, mut un) = (wn / wmag, -we / wmag);
        let (re, rn) = (on, -oe); // own right axis
        if ue * re + un * rn < 0.0 {
            ue = -ue;
            un = -un;
        }

        // ownship altitude with the whole profile inside the band
        let (own_alt_min, own_alt_max) = profile_range(&own.alt_profile);
        let lo = ALTITUDE_BAND_FT.0 + ALTITUDE_MARGIN_FT - own_alt_min;
        let hi = ALTITUDE_BAND_FT.1 - ALTITUDE_MARGIN_FT - own_alt_max;
        if lo >= hi {
            rejects.altitude += 1;
            continue;
        }
        let own_alt0 = rng.random_range(lo..hi);

        // intruder altitude is pinned by the sampled VMD at CPA
        let intr_alt_cpa = own_alt0 + own.alt_profile[cpa_idx] + vmd;
        let intr_alt0 = intr_alt_cpa - intr.alt_profile[cpa_idx];
        let (intr_alt_min, intr_alt_max) = profile_range(&intr.alt_profile);
        if intr_alt0 + intr_alt_min < ALTITUDE_BAND_FT.0 + ALTITUDE_MARGIN_FT
            || intr_alt0 + intr_alt_max > ALTITUDE_BAND_FT.1 - ALTITUDE_MARGIN_FT
        {
            rejects.altitude += 1;
            continue;
        }

        // place the intruder: CPA offset minus its own displacement
        let intr_e0 = own.east_profile[cpa_idx] + hmd * ue - intr.east_profile[cpa_idx];
        let intr_n0 = own.north_profile[cpa_idx] + hmd * un - intr.north_profile[cpa_idx];

        let sep0 = intr_e0.hypot(intr_n0);
        if sep0 < MIN_INITIAL_SEPARATION_FT {
            rejects.initial_separation += 1;
            continue;
        }

        // CPA must be the strict closest horizontal approach
        let early_limit = (LAST_EVENT_SETTLED_S as usize).min(cpa_idx.saturating_sub(8));
        let mut early_min = f64::INFINITY;
        for k in 0..=early_limit {
            let de = intr_e0 + intr.east_profile[k] - own.east_profile[k];
            let dn = intr_n0 + intr.north_profile[k] - own.north_profile[k];
            early_min = early_min.min(de.hypot(dn));
        }
        if early_min <= hmd.abs() + EARLY_APPROACH_MARGIN_FT {
            rejects.early_approach += 1;
            continue;
        }

        let seed = rng.random::<u64>();
        return Ok(EncounterSpec {
            id,
            ownship_nominal: ScriptedTrajectory {
                initial: AircraftState::level(0.0, 0.0, own_alt0, own.speed_fps, own.initial_heading_deg),
                events: own.events,
            },
            intruder_nominal: ScriptedTrajectory {
                initial: AircraftState::level(
                    intr_e0,
                    intr_n0,
                    intr_alt0,
                    intr.speed_fps,
                    intr.initial_heading_deg,
                ),
                events: intr.events,
            },
            duration_s: DEFAULT_DURATION_S,
            t_cpa_s: DEFAULT_T_CPA_S,
            hmd_bin,
            vmd_bin,
            sampled_hmd_ft: hmd,
            sampled_vmd_ft: vmd,
            weight: scheme.weight(hmd_bin, vmd_bin),
            seed,
        });
    }

    Err(Error::Generation(format!(
        "encounter {id}: no feasible geometry in {MAX_ATTEMPTS} attempts \
         (slow closure {}, altitude {}, initial separation {}, early approach {})",
        rejects.slow_closure, rejects.altitude, rejects.initial_separation, rejects.early_approach
    )))
}

#[derive(Default)]
struct RejectCounts {
    slow_closure: usize,
    altitude: usize,
    initial_separation: usize,
    early_approach: usize,
}

fn heading_unit(heading_deg: f64) -> (f64, f64) {
    let (s, c) = heading_deg.to_radians().sin_cos();
    (s, c) // (east, north)
}

fn profile_range(profile: &[f64]) -> (f64, f64) {
    profile
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
}

fn pick_bin(probs: &[f64], rng: &mut impl RngExt) -> usize {
    let mut u = rng.random::<f64>();
    for (i, &p) in probs.iter().enumerate() {
        if u < p {
            return i;
        }
        u -= p;
    }
    probs.len() - 1
}

/// A generated encounter set with its provenance header.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EncounterSet {
    pub header: EncounterSetHeader,
    pub encounters: Vec<EncounterSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EncounterSetHeader {
    pub schema: String,
    pub version: u32,
    pub master_seed: u64,
    pub airframe_class: AirframeClass,
    pub scheme: ImportanceScheme,
    pub count: usize,
}

pub const ENCOUNTER_SET_SCHEMA: &str = "lookout-encounter-set";
pub const ENCOUNTER_SET_VERSION: u32 = 1;

/// Generate a full set in parallel; per-id streams make the output
/// independent of worker scheduling.
pub fn generate_set(
    scheme: &ImportanceScheme,
    class: AirframeClass,
    count: usize,
    master_seed: u64,
) -> Result<EncounterSet> {
    scheme.validate()?;
    let encounters: Vec<EncounterSpec> = (0..count as u64)
        .into_par_iter()
        .map(|id| sample_encounter(scheme, class, id, master_seed))
        .collect::<Result<_>>()?;
    Ok(EncounterSet {
        header: EncounterSetHeader {
            schema: ENCOUNTER_SET_SCHEMA.to_string(),
            version: ENCOUNTER_SET_VERSION,
            master_seed,
            airframe_class: class,
            scheme: scheme.clone(),
            count,
        },
        encounters,
    })
}

/// Write a set as line-delimited JSON: header line, then one record per
/// encounter. Output bytes are deterministic for a given set.
pub fn write_set(path: &Path, set: &EncounterSet) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    let header = serde_json::to_string(&set.header)
        .map_err(|e| Error::Runtime(format!("header serialization: {e}")))?;
    writeln!(w, "{header}").map_err(|e| Error::io(path, e))?;
    for spec in &set.encounters {
        let line = serde_json::to_string(spec)
            .map_err(|e| Error::Runtime(format!("record serialization: {e}")))?;
        writeln!(w, "{line}").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Read a set, validating the schema version and reporting the index of
/// any malformed record.
pub fn read_set(path: &Path) -> Result<EncounterSet> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = std::io::BufReader::new(file).lines();
    let header_line = lines
        .next()
        .ok_or_else(|| Error::input(format!("{}: empty encounter set", path.display())))?
        .map_err(|e| Error::io(path, e))?;
    let header: EncounterSetHeader = serde_json::from_str(&header_line)
        .map_err(|e| Error::input(format!("{}: bad header: {e}", path.display())))?;
    if header.version != ENCOUNTER_SET_VERSION {
        return Err(Error::VersionMismatch {
            found: header.version,
            expected: ENCOUNTER_SET_VERSION,
        });
    }
    let mut encounters = Vec::with_capacity(header.count);
    for (index, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let spec: EncounterSpec = serde_json::from_str(&line).map_err(|e| Error::MalformedRecord {
            index,
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        encounters.push(spec);
    }
    Ok(EncounterSet { header, encounters })
}
