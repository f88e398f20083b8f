//! Run configuration: defaults, TOML loading, and validation.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::acquisition::{DovConfig, DovMode, DovPartition, FovLimits};
use crate::avoidance::{PilotResponseParams, WellClearParams};
use crate::encounters::{AirframeClass, ImportanceScheme};
use crate::error::{Error, Result};
use crate::silhouette::AreaTable;

/// Identifier that resolves to the compiled-in Cessna 172 area table.
pub const BUNDLED_CESSNA_TABLE: &str = "bundled:cessna172";

/// Full sweep/simulation configuration. Field defaults reproduce the
/// standard parameter study; any subset can be overridden from a TOML
/// file or command-line flags.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    /// Simulation timestep, s, in [0.1, 1.0]; must divide the duration.
    pub dt_s: f64,
    pub duration_s: f64,
    pub master_seed: u64,
    /// Search-effectiveness sweep values, per steradian per second.
    pub beta_set: Vec<f64>,
    /// Atmospheric visual range sweep values, nmi.
    pub visibility_set_nmi: Vec<f64>,
    pub dov_modes: Vec<DovMode>,
    pub airframe_classes: Vec<AirframeClass>,
    pub encounters_per_set: usize,
    /// Optional pre-generated encounter sets; generated when absent.
    pub encounter_set_fixed_wing: Option<PathBuf>,
    pub encounter_set_rotary_wing: Option<PathBuf>,
    /// Area table per class: a CSV path or the bundled identifier.
    pub area_table_fixed_wing: String,
    pub area_table_rotary_wing: String,
    pub scheme: ImportanceScheme,
    pub acuity_threshold_arcmin: f64,
    pub fov: FovLimits,
    pub dov_partitions: Vec<DovPartition>,
    pub dwell_period_s: f64,
    pub alerted_beta: Option<f64>,
    pub pilot: PilotResponseParams,
    pub well_clear: WellClearParams,
    /// When false, forces p_comply = 0 for nominal-equivalent runs.
    pub avoidance: bool,
    pub bootstrap_resamples: usize,
    pub output_dir: PathBuf,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            dt_s: 1.0,
            duration_s: 220.0,
            master_seed: 0,
            beta_set: vec![4250.0, 8500.0, 12500.0, 17000.0],
            visibility_set_nmi: vec![2.0, 3.0, 4.0, 5.0],
            dov_modes: vec![DovMode::Uniform, DovMode::WeightedScaling],
            airframe_classes: vec![AirframeClass::FixedWing, AirframeClass::RotaryWing],
            encounters_per_set: 10_000,
            encounter_set_fixed_wing: None,
            encounter_set_rotary_wing: None,
            area_table_fixed_wing: BUNDLED_CESSNA_TABLE.to_string(),
            area_table_rotary_wing: BUNDLED_CESSNA_TABLE.to_string(),
            scheme: ImportanceScheme::default(),
            acuity_threshold_arcmin: 1.0,
            fov: FovLimits::default(),
            dov_partitions: DovConfig::default().partitions,
            dwell_period_s: 2.0,
            alerted_beta: None,
            pilot: PilotResponseParams::default(),
            well_clear: WellClearParams::default(),
            avoidance: true,
            bootstrap_resamples: 1000,
            output_dir: PathBuf::from("lookout-out"),
        }
    }
}

impl SimConfig {
    pub fn from_toml_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let config: SimConfig = toml::from_str(&text)
            .map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.1..=1.0).contains(&self.dt_s) {
            return Err(Error::input(format!("dt {} s outside [0.1, 1.0]", self.dt_s)));
        }
        let steps = self.duration_s / self.dt_s;
        if (steps - steps.round()).abs() > 1e-9 {
            return Err(Error::input(format!(
                "dt {} does not divide duration {}",
                self.dt_s, self.duration_s
            )));
        }
        if self.duration_s <= 0.0 {
            return Err(Error::input("duration must be positive"));
        }
        for (name, empty) in [
            ("beta_set", self.beta_set.is_empty()),
            ("visibility_set_nmi", self.visibility_set_nmi.is_empty()),
            ("dov_modes", self.dov_modes.is_empty()),
            ("airframe_classes", self.airframe_classes.is_empty()),
        ] {
            if empty {
                return Err(Error::input(format!("{name} must not be empty")));
            }
        }
        if self.beta_set.iter().any(|&b| b < 0.0 || !b.is_finite()) {
            return Err(Error::input("beta values must be finite and non-negative"));
        }
        if self.visibility_set_nmi.iter().any(|&r| r <= 0.0) {
            return Err(Error::input("visibility values must be positive"));
        }
        if self.encounters_per_set == 0 {
            return Err(Error::input("encounters_per_set must be positive"));
        }
        if self.acuity_threshold_arcmin <= 0.0 {
            return Err(Error::input("acuity threshold must be positive"));
        }
        if self.bootstrap_resamples == 0 {
            return Err(Error::input("bootstrap_resamples must be positive"));
        }
        self.scheme.validate()?;
        self.fov.validate()?;
        self.dov_config(DovMode::Uniform).validate(&self.fov)?;
        Ok(())
    }

    pub fn dov_config(&self, mode: DovMode) -> DovConfig {
        DovConfig {
            partitions: self.dov_partitions.clone(),
            mode,
            dwell_period_s: self.dwell_period_s,
        }
    }

    pub fn encounter_set_path(&self, class: AirframeClass) -> Option<&PathBuf> {
        match class {
            AirframeClass::FixedWing => self.encounter_set_fixed_wing.as_ref(),
            AirframeClass::RotaryWing => self.encounter_set_rotary_wing.as_ref(),
        }
    }

    pub fn area_table_name(&self, class: AirframeClass) -> &str {
        match class {
            AirframeClass::FixedWing => &self.area_table_fixed_wing,
            AirframeClass::RotaryWing => &self.area_table_rotary_wing,
        }
    }

    pub fn resolve_area_table(&self, class: AirframeClass) -> Result<AreaTable> {
        resolve_area_table(self.area_table_name(class))
    }

    /// Stable hash of the canonical serialized configuration, for
    /// provenance blocks.
    pub fn content_hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        format!("{:016x}", fnv1a64(json.as_bytes()))
    }
}

/// Resolve an area-table name: the bundled identifier or a CSV path.
pub fn resolve_area_table(name: &str) -> Result<AreaTable> {
    if name == BUNDLED_CESSNA_TABLE {
        Ok(AreaTable::cessna172().clone())
    } else if let Some(rest) = name.strip_prefix("bundled:") {
        Err(Error::input(format!("unknown bundled table '{rest}'")))
    } else {
        AreaTable::read_csv(Path::new(name))
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}
