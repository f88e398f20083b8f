//! Visual acquisition model: nonhomogeneous-Poisson sighting rate,
//! per-timestep cumulative probability, acuity threshold, field-of-view
//! gating, direction-of-view dwell weighting, and the per-pilot
//! acquisition state machine.

use rand::RngExt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::open_unit;
use crate::units::ARCMIN_PER_RAD;

/// Koschmieder 5% contrast-threshold constant in the visual range
/// attenuation term: exp(-2.996) ≈ 0.05.
pub const CONTRAST_THRESHOLD_CONSTANT: f64 = 2.996;

/// Visual acquisition rate λ (per second) for a target of projected area
/// `area_sq_ft` at range `range_ft`, searched with effectiveness `beta`
/// (acquisitions per steradian per second) under prevailing visual range
/// `visibility_ft`.
pub fn acquisition_rate(beta: f64, area_sq_ft: f64, range_ft: f64, visibility_ft: f64) -> Result<f64> {
    if range_ft <= 0.0 {
        return Err(Error::input(format!(
            "acquisition rate undefined at range {range_ft} ft"
        )));
    }
    let solid_angle = area_sq_ft / (range_ft * range_ft);
    let attenuation = (-CONTRAST_THRESHOLD_CONSTANT * range_ft / visibility_ft).exp();
    Ok(beta * solid_angle * attenuation)
}

/// Apparent angular diameter (arc minutes) of a target of area
/// `area_sq_ft` at `range_ft`, modeled as the equivalent circle.
pub fn angular_size_arcmin(area_sq_ft: f64, range_ft: f64) -> f64 {
    let radius = (area_sq_ft / std::f64::consts::PI).sqrt();
    2.0 * (radius / range_ft).atan() * ARCMIN_PER_RAD
}

/// Cockpit field-of-view limits as positive angular magnitudes (degrees).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct FovLimits {
    pub up_deg: f64,
    pub down_deg: f64,
    pub left_deg: f64,
    pub right_deg: f64,
}

impl Default for FovLimits {
    /// Pilot-compartment view limits for a left-seat pilot.
    fn default() -> Self {
        FovLimits {
            up_deg: 15.0,
            down_deg: 17.0,
            left_deg: 120.0,
            right_deg: 80.0,
        }
    }
}

impl FovLimits {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("up", self.up_deg),
            ("down", self.down_deg),
            ("left", self.left_deg),
            ("right", self.right_deg),
        ] {
            if !(v > 0.0 && v <= 180.0) {
                return Err(Error::input(format!("fov {name} limit {v}° outside (0, 180]")));
            }
        }
        Ok(())
    }

    /// True when a target at the given relative bearing (+right) and
    /// elevation (+up) is inside the window.
    pub fn contains(&self, rel_bearing_deg: f64, rel_elevation_deg: f64) -> bool {
        rel_bearing_deg >= -self.left_deg
            && rel_bearing_deg <= self.right_deg
            && rel_elevation_deg >= -self.down_deg
            && rel_elevation_deg <= self.up_deg
    }
}

/// How a pilot's scan distributes attention across bearing partitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DovMode {
    /// Equal attention everywhere in the FOV.
    Uniform,
    /// Deterministic per-partition scaling of β by normalized dwell weight.
    WeightedScaling,
    /// One partition attended at a time, resampled each dwell period.
    StochasticScan,
}

impl std::fmt::Display for DovMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DovMode::Uniform => "uniform",
            DovMode::WeightedScaling => "weighted",
            DovMode::StochasticScan => "stochastic",
        })
    }
}

/// One bearing partition of the horizontal FOV with its dwell weight.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DovPartition {
    pub lower_az_deg: f64,
    pub upper_az_deg: f64,
    pub weight: f64,
}

/// Direction-of-view scan configuration.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct DovConfig {
    pub partitions: Vec<DovPartition>,
    pub mode: DovMode,
    /// Attention dwell per partition visit (stochastic scan only).
    pub dwell_period_s: f64,
}

impl Default for DovConfig {
    /// Weighted dwell times for a left-seat pilot scan; the center of the
    /// FOV receives the most attention.
    fn default() -> Self {
        DovConfig {
            partitions: vec![
                DovPartition { lower_az_deg: -120.0, upper_az_deg: -60.0, weight: 3.5 },
                DovPartition { lower_az_deg: -60.0, upper_az_deg: 0.0, weight: 5.75 },
                DovPartition { lower_az_deg: 0.0, upper_az_deg: 60.0, weight: 5.75 },
                DovPartition { lower_az_deg: 60.0, upper_az_deg: 90.0, weight: 3.5 },
            ],
            mode: DovMode::WeightedScaling,
            dwell_period_s: 2.0,
        }
    }
}

impl DovConfig {
    pub fn with_mode(mode: DovMode) -> Self {
        DovConfig {
            mode,
            ..Default::default()
        }
    }

    pub fn validate(&self, fov: &FovLimits) -> Result<()> {
        if self.partitions.is_empty() {
            return Err(Error::input("dov needs at least one partition"));
        }
        for p in &self.partitions {
            if p.weight <= 0.0 {
                return Err(Error::input("dov weights must be positive"));
            }
            if p.upper_az_deg <= p.lower_az_deg {
                return Err(Error::input("dov partition bounds must ascend"));
            }
        }
        for w in self.partitions.windows(2) {
            if (w[1].lower_az_deg - w[0].upper_az_deg).abs() > 1e-9 {
                return Err(Error::input("dov partitions must be contiguous"));
            }
        }
        let lo = self.partitions[0].lower_az_deg;
        let hi = self.partitions.last().unwrap().upper_az_deg;
        if lo > -fov.left_deg || hi < fov.right_deg {
            return Err(Error::input(format!(
                "dov partitions [{lo}, {hi}] do not cover the horizontal fov \
                 [{}, {}]",
                -fov.left_deg, fov.right_deg
            )));
        }
        if self.mode == DovMode::StochasticScan && self.dwell_period_s <= 0.0 {
            return Err(Error::input("dwell period must be positive"));
        }
        Ok(())
    }

    fn partition_index(&self, rel_bearing_deg: f64) -> Option<usize> {
        // membership is [lower, upper); the last partition is closed
        self.partitions.iter().position(|p| {
            rel_bearing_deg >= p.lower_az_deg
                && (rel_bearing_deg < p.upper_az_deg
                    || (rel_bearing_deg == p.upper_az_deg
                        && p.upper_az_deg == self.partitions.last().unwrap().upper_az_deg))
        })
    }

    /// Attention multiplier on β for a target at the given bearing.
    ///
    /// Uniform: 1 everywhere. Weighted scaling: normalized partition
    /// weight over the uniform share 1/N, preserving the β-weighted
    /// average across partitions. Stochastic scan: N while the attended
    /// partition (resampled each dwell period from the normalized
    /// weights, on `scan_seed`'s stream) contains the bearing, else 0.
    /// Bearings outside every partition get 0.
    pub fn factor(&self, rel_bearing_deg: f64, time_s: f64, scan_seed: u64) -> f64 {
        let Some(idx) = self.partition_index(rel_bearing_deg) else {
            return 0.0;
        };
        let n = self.partitions.len() as f64;
        match self.mode {
            DovMode::Uniform => 1.0,
            DovMode::WeightedScaling => {
                let total: f64 = self.partitions.iter().map(|p| p.weight).sum();
                (self.partitions[idx].weight / total) * n
            }
            DovMode::StochasticScan => {
                let dwell = (time_s / self.dwell_period_s).floor() as i64 as u64;
                let mut rng = crate::rng::stream(scan_seed, &[crate::rng::purpose::SCAN, dwell]);
                let total: f64 = self.partitions.iter().map(|p| p.weight).sum();
                let mut pick = rng.random::<f64>() * total;
                let mut attended = self.partitions.len() - 1;
                for (i, p) in self.partitions.iter().enumerate() {
                    if pick < p.weight {
                        attended = i;
                        break;
                    }
                    pick -= p.weight;
                }
                if attended == idx { n } else { 0.0 }
            }
        }
    }
}

/// Full parameter set for one pilot's visual search.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AcquisitionParams {
    /// Search effectiveness β, acquisitions per steradian per second.
    pub beta: f64,
    /// Prevailing atmospheric visual range, ft.
    pub visibility_ft: f64,
    /// Minimum resolvable angular size, arc minutes.
    pub acuity_threshold_arcmin: f64,
    pub fov: FovLimits,
    pub dov: DovConfig,
    /// Optional alerted-search effectiveness. Present but disabled by
    /// default; when set, it replaces β while an alert is active.
    pub alerted_beta: Option<f64>,
}

impl AcquisitionParams {
    pub fn new(beta: f64, visibility_ft: f64) -> Self {
        AcquisitionParams {
            beta,
            visibility_ft,
            acuity_threshold_arcmin: 1.0,
            fov: FovLimits::default(),
            dov: DovConfig::default(),
            alerted_beta: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.beta <= 0.0 {
            return Err(Error::input(format!("beta {} must be positive", self.beta)));
        }
        if self.visibility_ft <= 0.0 {
            return Err(Error::input("visibility must be positive"));
        }
        if self.acuity_threshold_arcmin <= 0.0 {
            return Err(Error::input("acuity threshold must be positive"));
        }
        self.fov.validate()?;
        self.dov.validate(&self.fov)
    }

    pub fn effective_beta(&self, alerted: bool) -> f64 {
        match (alerted, self.alerted_beta) {
            (true, Some(b)) => b,
            _ => self.beta,
        }
    }

    /// Effective λ for one timestep, with acuity, FOV, and DOV gating
    /// applied. Exactly 0 when the target is below the acuity threshold
    /// or outside the FOV.
    #[allow(clippy::too_many_arguments)]
    pub fn effective_rate(
        &self,
        area_sq_ft: f64,
        range_ft: f64,
        rel_bearing_deg: f64,
        rel_elevation_deg: f64,
        time_s: f64,
        scan_seed: u64,
        alerted: bool,
    ) -> Result<f64> {
        if !self.fov.contains(rel_bearing_deg, rel_elevation_deg) {
            return Ok(0.0);
        }
        if angular_size_arcmin(area_sq_ft, range_ft) < self.acuity_threshold_arcmin {
            return Ok(0.0);
        }
        let beta = self.effective_beta(alerted) * self.dov.factor(rel_bearing_deg, time_s, scan_seed);
        acquisition_rate(beta, area_sq_ft, range_ft, self.visibility_ft)
    }
}

/// Per-pilot acquisition state over one encounter.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct AcquisitionState {
    /// Cumulative probability that first acquisition has occurred,
    /// accumulated since the last FOV-entry reset.
    pub cum_prob: f64,
    /// Inverse-CDF threshold draw; acquisition triggers when cum_prob
    /// first reaches it.
    pub draw_u: f64,
    pub acquired: bool,
    pub tracking: bool,
    pub t_acquired_s: Option<f64>,
    /// Time accumulated with the target in FOV and above the acuity
    /// threshold.
    pub time_in_range_s: f64,
}

impl AcquisitionState {
    pub fn new(rng: &mut impl RngExt) -> Self {
        AcquisitionState {
            cum_prob: 0.0,
            draw_u: open_unit(rng),
            acquired: false,
            tracking: false,
            t_acquired_s: None,
            time_in_range_s: 0.0,
        }
    }

    /// Advance one timestep with effective rate `lambda` over [t, t+dt].
    ///
    /// While un-acquired and in FOV, the cumulative probability composes
    /// exponentially: cum' = 1 - (1 - cum)·exp(-λ·dt); acquisition occurs
    /// when it reaches the threshold draw, with the acquisition time
    /// interpolated within the step. Leaving the FOV clears acquisition
    /// and tracking, resets the accumulated probability, and redraws the
    /// threshold, so re-acquisition starts fresh.
    pub fn step(
        &mut self,
        lambda: f64,
        dt_s: f64,
        in_fov: bool,
        above_acuity: bool,
        t_s: f64,
        rng: &mut impl RngExt,
    ) {
        debug_assert!(dt_s > 0.0 && lambda >= 0.0);
        if !in_fov {
            if self.acquired || self.cum_prob > 0.0 {
                self.cum_prob = 0.0;
                self.draw_u = open_unit(rng);
                self.acquired = false;
                self.tracking = false;
            }
            return;
        }
        if above_acuity {
            self.time_in_range_s += dt_s;
        }
        if self.acquired {
            self.tracking = true;
            return;
        }
        if lambda <= 0.0 {
            return;
        }
        let survival = 1.0 - self.cum_prob;
        let next = 1.0 - survival * (-lambda * dt_s).exp();
        if next >= self.draw_u {
            // invert cum(τ) = 1 - survival·exp(-λτ) at the threshold
            let tau = (survival / (1.0 - self.draw_u)).ln() / lambda;
            self.t_acquired_s = Some(t_s + tau.clamp(0.0, dt_s));
            self.acquired = true;
            self.tracking = true;
        }
        self.cum_prob = next.min(1.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use crate::units::nmi_to_ft;

    fn assert_rel(a: f64, b: f64, rel: f64) {
        assert!((a - b).abs() <= rel * b.abs().max(1e-300), "{a} vs {b}");
    }

    #[test]
    fn rate_matches_hand_evaluation() {
        // β=17000, A=110 ft², r=1 nmi, R=3 nmi
        let lambda = acquisition_rate(17000.0, 110.0, 6076.12, 18228.4).unwrap();
        assert_rel(lambda, 0.018657, 1e-4);
    }

    #[test]
    fn rate_edge_cases() {
        assert_eq!(acquisition_rate(17000.0, 0.0, 5000.0, 18228.4).unwrap(), 0.0);
        // clear-atmosphere limit: exponential term -> 1
        let lambda = acquisition_rate(1.0, 1.0, 1.0, f64::INFINITY).unwrap();
        assert_rel(lambda, 1.0, 1e-12);
        assert!(acquisition_rate(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(acquisition_rate(1.0, 1.0, -5.0, 1.0).is_err());
    }

    #[test]
    fn rate_monotone_in_range_and_visibility() {
        let mut prev = f64::INFINITY;
        for r in [1000.0, 2000.0, 5000.0, 10000.0, 50000.0] {
            let l = acquisition_rate(17000.0, 110.0, r, 18228.4).unwrap();
            assert!(l < prev);
            prev = l;
        }
        let mut prev = 0.0;
        for vis in [6076.0, 12152.0, 18228.0, 30380.0] {
            let l = acquisition_rate(17000.0, 110.0, 6076.0, vis).unwrap();
            assert!(l > prev);
            prev = l;
        }
    }

    #[test]
    fn angular_size_closed_form() {
        assert_rel(angular_size_arcmin(430.0, 6076.12), 13.24, 1e-3);
        assert_eq!(angular_size_arcmin(0.0, 6076.12), 0.0);
        // invert the closed form: the 1-arcmin threshold range for a
        // 110 ft² target is about 40,680 ft
        let radius = (110.0f64 / std::f64::consts::PI).sqrt();
        let threshold_range = radius / (0.5 / ARCMIN_PER_RAD).tan();
        assert_rel(threshold_range, 40_680.0, 2e-4);
        assert_rel(angular_size_arcmin(110.0, threshold_range), 1.0, 1e-12);
    }

    #[test]
    fn fov_window() {
        let fov = FovLimits::default();
        assert!(fov.contains(0.0, 0.0));
        assert!(!fov.contains(-130.0, 0.0));
        assert!(!fov.contains(0.0, 20.0));
        assert!(fov.contains(-120.0, -17.0)); // inclusive edges
        assert!(!fov.contains(81.0, 0.0));
    }

    #[test]
    fn dov_uniform_is_unity() {
        let dov = DovConfig::with_mode(DovMode::Uniform);
        for b in [-119.0, -30.0, 0.0, 45.0, 89.0] {
            assert_eq!(dov.factor(b, 0.0, 1), 1.0);
        }
    }

    #[test]
    fn dov_weighted_scaling_matches_normalization() {
        // weights 3.5/5.75/5.75/3.5 sum to 18.5
        let dov = DovConfig::with_mode(DovMode::WeightedScaling);
        assert_rel(dov.factor(-30.0, 0.0, 1), (5.75 / 18.5) / 0.25, 1e-12);
        assert_rel(dov.factor(-90.0, 0.0, 1), (3.5 / 18.5) / 0.25, 1e-12);
        assert_rel(dov.factor(-30.0, 0.0, 1), 1.2432, 1e-4);
        assert_rel(dov.factor(-90.0, 0.0, 1), 0.7568, 1e-4);
    }

    #[test]
    fn dov_weighted_average_is_unity() {
        let dov = DovConfig::with_mode(DovMode::WeightedScaling);
        let n = dov.partitions.len() as f64;
        let mean: f64 = dov
            .partitions
            .iter()
            .map(|p| dov.factor((p.lower_az_deg + p.upper_az_deg) / 2.0, 0.0, 1))
            .sum::<f64>()
            / n;
        assert_rel(mean, 1.0, 1e-12);
    }

    #[test]
    fn dov_equal_weights_match_uniform_mode() {
        let mut dov = DovConfig::with_mode(DovMode::WeightedScaling);
        for p in &mut dov.partitions {
            p.weight = 2.0;
        }
        for b in [-100.0, -30.0, 10.0, 75.0] {
            assert_rel(dov.factor(b, 0.0, 1), 1.0, 1e-12);
        }
    }

    #[test]
    fn dov_outside_partitions_is_zero() {
        let dov = DovConfig::default();
        assert_eq!(dov.factor(95.0, 0.0, 1), 0.0);
        assert_eq!(dov.factor(-125.0, 0.0, 1), 0.0);
    }

    #[test]
    fn dov_stochastic_scan_expectation() {
        let dov = DovConfig::with_mode(DovMode::StochasticScan);
        // long-run average factor at a bearing equals the weighted-scaling
        // factor there
        let expect = DovConfig::with_mode(DovMode::WeightedScaling).factor(-30.0, 0.0, 1);
        let n = 200_000;
        let mean: f64 = (0..n)
            .map(|i| dov.factor(-30.0, i as f64 * dov.dwell_period_s, 7))
            .sum::<f64>()
            / n as f64;
        assert_rel(mean, expect, 0.02);
    }

    #[test]
    fn dov_stochastic_scan_constant_within_dwell() {
        let dov = DovConfig::with_mode(DovMode::StochasticScan);
        for b in [-90.0, -30.0, 30.0, 70.0] {
            assert_eq!(dov.factor(b, 4.0, 3), dov.factor(b, 5.9, 3));
        }
    }

    #[test]
    fn dov_validation_catches_gaps_and_coverage() {
        let fov = FovLimits::default();
        let mut dov = DovConfig::default();
        assert!(dov.validate(&fov).is_ok());
        dov.partitions[1].lower_az_deg = -50.0;
        assert!(dov.validate(&fov).is_err());
        let short = DovConfig {
            partitions: vec![DovPartition { lower_az_deg: -60.0, upper_az_deg: 90.0, weight: 1.0 }],
            mode: DovMode::Uniform,
            dwell_period_s: 2.0,
        };
        assert!(short.validate(&fov).is_err()); // does not reach -120
    }

    #[test]
    fn step_accumulates_exponentially() {
        let mut rng = stream(1, &[1]);
        let mut st = AcquisitionState::new(&mut rng);
        st.draw_u = 0.999_999; // keep it un-acquired
        st.step(0.018657, 1.0, true, true, 0.0, &mut rng);
        assert_rel(st.cum_prob, 0.018484, 1e-4);
        // λ = 0 leaves it unchanged
        let before = st.cum_prob;
        st.step(0.0, 1.0, true, true, 1.0, &mut rng);
        assert_eq!(st.cum_prob, before);
    }

    #[test]
    fn step_composition_is_exact_exponential() {
        // constant λ for T seconds equals 1 - exp(-λT) regardless of dt
        let lambda = 0.0123;
        let mut rng = stream(1, &[2]);
        let mut st = AcquisitionState::new(&mut rng);
        st.draw_u = 1.0 - 1e-12;
        for i in 0..200 {
            st.step(lambda, 0.5, true, true, i as f64 * 0.5, &mut rng);
        }
        assert_rel(st.cum_prob, 1.0 - (-lambda * 100.0).exp(), 1e-9);
    }

    #[test]
    fn step_stays_bounded_and_monotone() {
        let mut rng = stream(1, &[3]);
        let mut st = AcquisitionState::new(&mut rng);
        st.draw_u = 1.0 - 1e-15;
        st.cum_prob = 0.999_999;
        st.step(50.0, 1.0, true, true, 0.0, &mut rng);
        assert!(st.cum_prob >= 0.999_999 && st.cum_prob <= 1.0);
    }

    #[test]
    fn acquisition_time_interpolated_within_step() {
        let mut rng = stream(1, &[4]);
        let mut st = AcquisitionState::new(&mut rng);
        st.draw_u = 0.5;
        // λ chosen so cum crosses 0.5 mid-step: 1-exp(-λτ)=0.5 at τ=0.5 s
        let lambda = std::f64::consts::LN_2 / 0.5;
        st.step(lambda, 1.0, true, true, 10.0, &mut rng);
        assert!(st.acquired && st.tracking);
        assert_rel(st.t_acquired_s.unwrap(), 10.5, 1e-9);
    }

    #[test]
    fn fov_exit_resets_and_redraws() {
        let mut rng = stream(1, &[5]);
        let mut st = AcquisitionState::new(&mut rng);
        st.draw_u = 0.9;
        st.step(0.5, 1.0, true, true, 0.0, &mut rng);
        assert!(st.cum_prob > 0.0);
        let old_u = st.draw_u;
        st.step(0.5, 1.0, false, false, 1.0, &mut rng);
        assert_eq!(st.cum_prob, 0.0);
        assert!(!st.acquired && !st.tracking);
        assert_ne!(st.draw_u, old_u);
        // further out-of-FOV steps do not keep redrawing
        let u2 = st.draw_u;
        st.step(0.5, 1.0, false, false, 2.0, &mut rng);
        assert_eq!(st.draw_u, u2);
    }

    #[test]
    fn integration_step_convergence() {
        // straight-line closing geometry: λ(t) from the closed-form range
        let lambda_at = |t: f64| {
            let r = 30_000.0 - 300.0 * t;
            acquisition_rate(17000.0, 110.0, r, nmi_to_ft(3.0)).unwrap()
        };
        let run = |dt: f64| {
            let mut rng = stream(1, &[6]);
            let mut st = AcquisitionState::new(&mut rng);
            st.draw_u = 1.0 - 1e-12;
            let mut t = 0.0;
            while t < 60.0 - 1e-9 {
                st.step(lambda_at(t + dt / 2.0), dt, true, true, t, &mut rng);
                t += dt;
            }
            st.cum_prob
        };
        let coarse = run(1.0);
        let fine = run(0.1);
        assert!((coarse - fine).abs() / fine < 0.01, "{coarse} vs {fine}");
    }

    #[test]
    fn monte_carlo_acquired_fraction_matches_cum_prob() {
        // identical geometry across seeds: acquired fraction estimates
        // cum_prob(T) with binomial error
        let lambda = 0.008;
        let t_total = 60.0;
        let n = 20_000;
        let mut acquired = 0u32;
        for i in 0..n {
            let mut rng = stream(99, &[i as u64]);
            let mut st = AcquisitionState::new(&mut rng);
            let mut t = 0.0;
            while t < t_total - 1e-9 {
                st.step(lambda, 1.0, true, true, t, &mut rng);
                t += 1.0;
            }
            acquired += st.acquired as u32;
        }
        let p = 1.0 - (-lambda * t_total).exp();
        let frac = acquired as f64 / n as f64;
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        assert!(
            (frac - p).abs() < 3.0 * sigma,
            "frac {frac} expected {p} ± {sigma}"
        );
    }

    #[test]
    fn effective_rate_gates_to_zero() {
        let params = AcquisitionParams::new(17000.0, nmi_to_ft(3.0));
        // out of FOV
        let r = params
            .effective_rate(110.0, 6076.0, -130.0, 0.0, 0.0, 1, false)
            .unwrap();
        assert_eq!(r, 0.0);
        // below acuity: 110 ft² at 50,000 ft is under 1 arc minute
        let r = params
            .effective_rate(110.0, 50_000.0, 0.0, 0.0, 0.0, 1, false)
            .unwrap();
        assert_eq!(r, 0.0);
        // in range and in view
        let r = params
            .effective_rate(110.0, 6076.0, 0.0, 0.0, 0.0, 1, false)
            .unwrap();
        assert!(r > 0.0);
    }

    #[test]
    fn alerted_beta_disabled_by_default() {
        let params = AcquisitionParams::new(17000.0, nmi_to_ft(3.0));
        assert_eq!(params.effective_beta(true), 17000.0);
        let mut with = params.clone();
        with.alerted_beta = Some(30000.0);
        assert_eq!(with.effective_beta(true), 30000.0);
        assert_eq!(with.effective_beta(false), 17000.0);
    }
}
