//! NMAC detection, importance-weighted risk ratios with the
//! unresolved/induced decomposition, and MAC-probability chaining.

use rand::RngExt;
use serde::{Deserialize, Serialize};

use crate::dynamics::AircraftState;
use crate::error::{Error, Result};
use crate::rng::{purpose, stream};

/// NMAC cylinder: horizontal radius and half-height, ft.
pub const NMAC_HORIZONTAL_FT: f64 = 500.0;
pub const NMAC_VERTICAL_FT: f64 = 100.0;

/// Closest-approach summary of one simulated run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinSeparation {
    /// Minimum horizontal separation over the run, ft.
    pub horizontal_ft: f64,
    /// Vertical separation at the horizontal minimum, ft.
    pub vertical_ft: f64,
}

/// NMAC determination for one run.
#[derive(Clone, Copy, Debug)]
pub struct NmacResult {
    pub nmac: bool,
    pub t_first_s: Option<f64>,
    pub min_sep: MinSeparation,
}

/// Streaming NMAC detector over synchronized state pairs.
///
/// Between samples, relative motion is interpolated piecewise-linearly;
/// an NMAC is any instant with horizontal separation under 500 ft and
/// vertical separation under 100 ft, even if no sample lands inside.
#[derive(Clone, Debug, Default)]
pub struct NmacTracker {
    prev: Option<(AircraftState, AircraftState)>,
    nmac: bool,
    t_first_s: Option<f64>,
    min_h: f64,
    v_at_min_h: f64,
    started: bool,
}

impl NmacTracker {
    pub fn new() -> Self {
        NmacTracker {
            prev: None,
            nmac: false,
            t_first_s: None,
            min_h: f64::INFINITY,
            v_at_min_h: f64::INFINITY,
            started: false,
        }
    }

    pub fn push(&mut self, own: &AircraftState, tgt: &AircraftState) {
        let (px, py, pz) = rel(own, tgt);
        if !self.started {
            self.started = true;
            self.consider_point(own.t_s, px.hypot(py), pz);
        }
        if let Some((pown, ptgt)) = self.prev {
            self.segment(&pown, &ptgt, own, tgt);
        }
        self.prev = Some((*own, *tgt));
    }

    pub fn finish(self) -> NmacResult {
        NmacResult {
            nmac: self.nmac,
            t_first_s: self.t_first_s,
            min_sep: MinSeparation {
                horizontal_ft: self.min_h,
                vertical_ft: self.v_at_min_h.abs(),
            },
        }
    }

    fn consider_point(&mut self, t: f64, h: f64, v: f64) {
        if h < self.min_h {
            self.min_h = h;
            self.v_at_min_h = v;
        }
        if h < NMAC_HORIZONTAL_FT && v.abs() < NMAC_VERTICAL_FT && !self.nmac {
            self.nmac = true;
            self.t_first_s = Some(t);
        }
    }

    fn segment(&mut self, o0: &AircraftState, t0: &AircraftState, o1: &AircraftState, t1: &AircraftState) {
        let (ax, ay, az) = rel(o0, t0);
        let (bx, by, bz) = rel(o1, t1);
        let (dx, dy, dz) = (bx - ax, by - ay, bz - az);
        let dt = o1.t_s - o0.t_s;

        // horizontal minimum within the segment
        let d2 = dx * dx + dy * dy;
        let tau_min = if d2 > 0.0 {
            (-(ax * dx + ay * dy) / d2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let hmin = (ax + tau_min * dx).hypot(ay + tau_min * dy);
        if hmin < self.min_h {
            self.min_h = hmin;
            self.v_at_min_h = az + tau_min * dz;
        }

        // interval with |vertical| < threshold
        let (vlo, vhi) = interval_below_abs(az, dz, NMAC_VERTICAL_FT);
        // interval with horizontal² < threshold²
        let (hlo, hhi) = interval_inside_circle(ax, ay, dx, dy, NMAC_HORIZONTAL_FT);

        let lo = vlo.max(hlo).max(0.0);
        let hi = vhi.min(hhi).min(1.0);
        if lo <= hi {
            if !self.nmac {
                self.t_first_s = Some(o0.t_s + lo * dt);
            }
            self.nmac = true;
        }
    }
}

fn rel(own: &AircraftState, tgt: &AircraftState) -> (f64, f64, f64) {
    (
        tgt.east_ft - own.east_ft,
        tgt.north_ft - own.north_ft,
        tgt.altitude_ft - own.altitude_ft,
    )
}

/// τ interval of [0,1] where |a + τ·d| < lim; empty interval is (1, 0).
fn interval_below_abs(a: f64, d: f64, lim: f64) -> (f64, f64) {
    if d == 0.0 {
        return if a.abs() < lim { (0.0, 1.0) } else { (1.0, 0.0) };
    }
    let t1 = (-lim - a) / d;
    let t2 = (lim - a) / d;
    (t1.min(t2), t1.max(t2))
}

/// τ interval where the interpolated 2D point stays inside the circle.
fn interval_inside_circle(ax: f64, ay: f64, dx: f64, dy: f64, radius: f64) -> (f64, f64) {
    let a = dx * dx + dy * dy;
    let b = 2.0 * (ax * dx + ay * dy);
    let c = ax * ax + ay * ay - radius * radius;
    if a == 0.0 {
        return if c < 0.0 { (0.0, 1.0) } else { (1.0, 0.0) };
    }
    let disc = b * b - 4.0 * a * c;
    if disc <= 0.0 {
        return (1.0, 0.0);
    }
    let sq = disc.sqrt();
    ((-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a))
}

/// NMAC determination over two synchronized state series.
pub fn detect_nmac(own: &[AircraftState], tgt: &[AircraftState]) -> Result<NmacResult> {
    if own.len() != tgt.len() {
        return Err(Error::input(format!(
            "mismatched series lengths {} vs {}",
            own.len(),
            tgt.len()
        )));
    }
    if own.is_empty() {
        return Err(Error::input("empty state series"));
    }
    let mut tracker = NmacTracker::new();
    for (o, t) in own.iter().zip(tgt) {
        tracker.push(o, t);
    }
    Ok(tracker.finish())
}

/// Paired nominal/mitigated result of one encounter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EncounterOutcome {
    pub id: u64,
    pub nominal_nmac: bool,
    pub mitigated_nmac: bool,
    /// Importance weight from the encounter's sampling bins.
    pub weight: f64,
    pub nominal_min_sep: MinSeparation,
    pub mitigated_min_sep: MinSeparation,
    /// First-acquisition times in the mitigated run, per pilot.
    pub acquisition_time_own_s: Option<f64>,
    pub acquisition_time_intruder_s: Option<f64>,
    /// Set when the encounter was excluded (e.g. a numeric fault); the
    /// outcome then carries the reason and is skipped by the metrics.
    pub diagnostic: Option<String>,
}

/// 95% confidence interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ci95 {
    pub lower: f64,
    pub upper: f64,
}

/// Importance-weighted risk ratios with bootstrap confidence intervals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RiskRatioReport {
    pub total: f64,
    pub unresolved: f64,
    pub induced: f64,
    pub weighted_nominal_nmacs: f64,
    pub weighted_unresolved: f64,
    pub weighted_induced: f64,
    pub n_encounters: usize,
    pub total_ci95: Ci95,
    pub unresolved_ci95: Ci95,
    pub induced_ci95: Ci95,
}

/// Bootstrap settings for the risk-ratio confidence intervals.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub resamples: usize,
    pub seed: u64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            resamples: 1000,
            seed: 0,
        }
    }
}

/// Compute risk ratios over paired outcomes.
///
/// The denominator is the weighted count of nominal NMACs; unresolved
/// counts mitigated NMACs that were already nominal NMACs, induced counts
/// those that were not, and total = unresolved + induced exactly.
/// Excluded outcomes are skipped.
pub fn risk_ratio(outcomes: &[EncounterOutcome], bootstrap: &BootstrapConfig) -> Result<RiskRatioReport> {
    let usable: Vec<&EncounterOutcome> = outcomes.iter().filter(|o| o.diagnostic.is_none()).collect();
    let sums = RatioSums::over(usable.iter().copied());
    let Some((unresolved, induced)) = sums.ratios() else {
        return Err(Error::ZeroDenominator);
    };

    let mut rng = stream(bootstrap.seed, &[purpose::BOOTSTRAP]);
    let mut unres_samples = Vec::with_capacity(bootstrap.resamples);
    let mut ind_samples = Vec::with_capacity(bootstrap.resamples);
    let mut tot_samples = Vec::with_capacity(bootstrap.resamples);
    for _ in 0..bootstrap.resamples {
        let mut s = RatioSums::default();
        for _ in 0..usable.len() {
            let k = rng.random_range(0..usable.len());
            s.add(usable[k]);
        }
        if let Some((u, i)) = s.ratios() {
            unres_samples.push(u);
            ind_samples.push(i);
            tot_samples.push(u + i);
        }
    }

    Ok(RiskRatioReport {
        total: unresolved + induced,
        unresolved,
        induced,
        weighted_nominal_nmacs: sums.nominal,
        weighted_unresolved: sums.unresolved,
        weighted_induced: sums.induced,
        n_encounters: usable.len(),
        total_ci95: percentile_ci(&mut tot_samples),
        unresolved_ci95: percentile_ci(&mut unres_samples),
        induced_ci95: percentile_ci(&mut ind_samples),
    })
}

#[derive(Default)]
struct RatioSums {
    nominal: f64,
    unresolved: f64,
    induced: f64,
}

impl RatioSums {
    fn over<'a>(outcomes: impl Iterator<Item = &'a EncounterOutcome>) -> Self {
        let mut s = RatioSums::default();
        for o in outcomes {
            s.add(o);
        }
        s
    }

    fn add(&mut self, o: &EncounterOutcome) {
        if o.nominal_nmac {
            self.nominal += o.weight;
            if o.mitigated_nmac {
                self.unresolved += o.weight;
            }
        } else if o.mitigated_nmac {
            self.induced += o.weight;
        }
    }

    fn ratios(&self) -> Option<(f64, f64)> {
        (self.nominal > 0.0).then(|| (self.unresolved / self.nominal, self.induced / self.nominal))
    }
}

fn percentile_ci(samples: &mut [f64]) -> Ci95 {
    if samples.is_empty() {
        return Ci95 {
            lower: f64::NAN,
            upper: f64::NAN,
        };
    }
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let at = |p: f64| {
        let idx = (p * (samples.len() - 1) as f64).round() as usize;
        samples[idx]
    };
    Ci95 {
        lower: at(0.025),
        upper: at(0.975),
    }
}

/// Chain an NMAC risk ratio with a P(MAC | NMAC) scalar.
///
/// Both factors come from published decimal requirements, so the product
/// is taken in exact decimal arithmetic over the shortest round-trip
/// representations and rounded once; plain binary multiplication can land
/// one ulp off the decimal-arithmetic result.
pub fn mac_probability(risk_ratio: f64, p_mac_given_nmac: f64) -> f64 {
    if !risk_ratio.is_finite() || !p_mac_given_nmac.is_finite() {
        return risk_ratio * p_mac_given_nmac;
    }
    match decimal_product(risk_ratio, p_mac_given_nmac) {
        Some(p) => p,
        None => risk_ratio * p_mac_given_nmac,
    }
}

/// Exact decimal product of two f64 values via their shortest decimal
/// forms; None when the digit product would overflow u128.
fn decimal_product(a: f64, b: f64) -> Option<f64> {
    let (da, ea, sa) = decimal_parts(a)?;
    let (db, eb, sb) = decimal_parts(b)?;
    let digits = da.checked_mul(db)?;
    let exp = ea + eb;
    let sign = if sa ^ sb { "-" } else { "" };
    let text = if exp >= 0 {
        format!("{sign}{digits}{}", "0".repeat(exp as usize))
    } else {
        let s = digits.to_string();
        let point = -exp as usize;
        if s.len() > point {
            format!("{sign}{}.{}", &s[..s.len() - point], &s[s.len() - point..])
        } else {
            format!("{sign}0.{}{}", "0".repeat(point - s.len()), s)
        }
    };
    text.parse::<f64>().ok()
}

/// Decompose the shortest decimal representation into integer digits,
/// a power-of-ten exponent, and a sign.
fn decimal_parts(x: f64) -> Option<(u128, i32, bool)> {
    let s = format!("{x}");
    let (neg, s) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.as_str()),
    };
    // f64 Display may use scientific notation for extreme magnitudes
    let (mantissa, e) = match s.split_once('e') {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let digits: String = format!("{int_part}{frac_part}");
    let value = digits.parse::<u128>().ok()?;
    Some((value, e - frac_part.len() as i32, neg))
}
