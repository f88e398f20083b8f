//! Full-factorial parameter sweeps over (β, visibility, DOV mode,
//! airframe class), with deterministic parallel execution, report
//! emission, and outcome-record files.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use crate::acquisition::{AcquisitionParams, DovMode};
use crate::config::SimConfig;
use crate::encounters::{AirframeClass, EncounterSet, generate_set, read_set};
use crate::error::{Error, Result};
use crate::metrics::{BootstrapConfig, EncounterOutcome, RiskRatioReport, risk_ratio};
use crate::rng::{mix, purpose};
use crate::sim::{RunMode, RunRecord, SimParams, simulate_encounter};
use crate::units::nmi_to_ft;

/// One cell of the sweep grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellKey {
    pub airframe_class: AirframeClass,
    pub dov_mode: DovMode,
    pub beta: f64,
    pub visibility_nmi: f64,
}

impl CellKey {
    /// Stable file-name fragment for this cell.
    pub fn slug(&self) -> String {
        format!(
            "{}_{}_b{}_r{}",
            self.airframe_class.to_string().replace('-', "_"),
            self.dov_mode,
            trim_float(self.beta),
            trim_float(self.visibility_nmi)
        )
    }
}

fn trim_float(v: f64) -> String {
    let s = format!("{v}");
    s.replace('.', "p")
}

/// Risk-ratio report for one cell, or the reason it is invalid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    #[serde(flatten)]
    pub key: CellKey,
    pub n_excluded: usize,
    /// Absent when the cell had zero weighted nominal NMACs.
    pub report: Option<RiskRatioReport>,
    pub invalid_reason: Option<String>,
}

/// Provenance block tying outputs to their inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub master_seed: u64,
    pub version: String,
    /// Absent when a report was recomputed from stored outcomes.
    pub dt_s: Option<f64>,
    pub encounters_per_set: Option<usize>,
}

/// Complete sweep result grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub provenance: Provenance,
    pub cells: Vec<CellReport>,
}

impl SweepResult {
    pub fn cell(&self, class: AirframeClass, dov: DovMode, beta: f64, vis_nmi: f64) -> Option<&CellReport> {
        self.cells.iter().find(|c| {
            c.key.airframe_class == class
                && c.key.dov_mode == dov
                && c.key.beta == beta
                && c.key.visibility_nmi == vis_nmi
        })
    }
}

/// Sweep output: the result grid plus per-cell outcome records.
#[derive(Clone, Debug)]
pub struct SweepOutput {
    pub result: SweepResult,
    pub outcomes: Vec<(CellKey, Vec<EncounterOutcome>)>,
}

/// Load or generate the encounter set for a class.
pub fn obtain_encounter_set(config: &SimConfig, class: AirframeClass) -> Result<EncounterSet> {
    match config.encounter_set_path(class) {
        Some(path) => read_set(path),
        None => generate_set(&config.scheme, class, config.encounters_per_set, config.master_seed),
    }
}

/// Nominal (unmitigated) runs for a whole set. These depend only on the
/// encounter set and dt, so they are computed once and shared by every
/// cell of that class.
pub fn nominal_prepass(config: &SimConfig, set: &EncounterSet) -> Result<Vec<RunRecord>> {
    let table = config.resolve_area_table(set.header.airframe_class)?;
    let params = SimParams {
        dt_s: config.dt_s,
        duration_s: config.duration_s,
        acquisition: acquisition_params(config, config.beta_set[0], config.visibility_set_nmi[0], DovMode::Uniform),
        pilot: config.pilot,
        well_clear: config.well_clear,
        own_table: &table,
        intruder_table: &table,
        avoidance: false,
    };
    set.encounters
        .par_iter()
        .map(|spec| simulate_encounter(spec, &params, RunMode::Nominal))
        .collect()
}

fn acquisition_params(config: &SimConfig, beta: f64, visibility_nmi: f64, dov: DovMode) -> AcquisitionParams {
    AcquisitionParams {
        beta,
        visibility_ft: nmi_to_ft(visibility_nmi),
        acuity_threshold_arcmin: config.acuity_threshold_arcmin,
        fov: config.fov,
        dov: config.dov_config(dov),
        alerted_beta: config.alerted_beta,
    }
}

/// Simulate one cell: mitigated runs paired against the nominal prepass.
pub fn simulate_cell(
    config: &SimConfig,
    set: &EncounterSet,
    nominal: &[RunRecord],
    key: CellKey,
) -> Result<Vec<EncounterOutcome>> {
    let table = config.resolve_area_table(key.airframe_class)?;
    let params = SimParams {
        dt_s: config.dt_s,
        duration_s: config.duration_s,
        acquisition: acquisition_params(config, key.beta, key.visibility_nmi, key.dov_mode),
        pilot: config.pilot,
        well_clear: config.well_clear,
        own_table: &table,
        intruder_table: &table,
        avoidance: config.avoidance,
    };
    set.encounters
        .par_iter()
        .zip(nominal.par_iter())
        .map(|(spec, nom)| {
            let mit = simulate_encounter(spec, &params, RunMode::Mitigated)?;
            let diagnostic = match (&nom.diagnostic, &mit.diagnostic) {
                (Some(d), _) => Some(format!("nominal: {d}")),
                (None, Some(d)) => Some(format!("mitigated: {d}")),
                (None, None) => None,
            };
            Ok(EncounterOutcome {
                id: spec.id,
                nominal_nmac: nom.nmac,
                mitigated_nmac: mit.nmac,
                weight: spec.weight,
                nominal_min_sep: nom.min_sep,
                mitigated_min_sep: mit.min_sep,
                acquisition_time_own_s: mit.acquisition_time_own_s,
                acquisition_time_intruder_s: mit.acquisition_time_intruder_s,
                diagnostic,
            })
        })
        .collect()
}

/// Grid of cells in deterministic configuration order.
pub fn cell_grid(config: &SimConfig) -> Vec<CellKey> {
    let mut cells = Vec::new();
    for &class in &config.airframe_classes {
        for &dov in &config.dov_modes {
            for &beta in &config.beta_set {
                for &vis in &config.visibility_set_nmi {
                    cells.push(CellKey {
                        airframe_class: class,
                        dov_mode: dov,
                        beta,
                        visibility_nmi: vis,
                    });
                }
            }
        }
    }
    cells
}

/// Run the full factorial sweep.
///
/// Deterministic for a given config and master seed regardless of worker
/// count: encounter generation, acquisition draws, and bootstrap streams
/// are all keyed, and reductions run in grid order. Cells with zero
/// weighted nominal NMACs are marked invalid and the sweep continues.
pub fn run_sweep(config: &SimConfig) -> Result<SweepOutput> {
    config.validate()?;
    let cells = cell_grid(config);

    let mut per_class: Vec<(AirframeClass, EncounterSet, Vec<RunRecord>)> = Vec::new();
    for &class in &config.airframe_classes {
        let set = obtain_encounter_set(config, class)?;
        let nominal = nominal_prepass(config, &set)?;
        per_class.push((class, set, nominal));
    }

    let mut reports = Vec::with_capacity(cells.len());
    let mut outcomes = Vec::with_capacity(cells.len());
    for (index, &key) in cells.iter().enumerate() {
        let (_, set, nominal) = per_class
            .iter()
            .find(|(c, _, _)| *c == key.airframe_class)
            .expect("class sets prepared above");
        let cell_outcomes = simulate_cell(config, set, nominal, key)?;
        let n_excluded = cell_outcomes.iter().filter(|o| o.diagnostic.is_some()).count();
        let bootstrap = BootstrapConfig {
            resamples: config.bootstrap_resamples,
            seed: mix(config.master_seed, &[purpose::BOOTSTRAP, index as u64]),
        };
        let (report, invalid_reason) = match risk_ratio(&cell_outcomes, &bootstrap) {
            Ok(r) => (Some(r), None),
            Err(Error::ZeroDenominator) => (None, Some(Error::ZeroDenominator.to_string())),
            Err(e) => return Err(e),
        };
        reports.push(CellReport {
            key,
            n_excluded,
            report,
            invalid_reason,
        });
        outcomes.push((key, cell_outcomes));
    }

    Ok(SweepOutput {
        result: SweepResult {
            provenance: Provenance {
                config_hash: config.content_hash(),
                master_seed: config.master_seed,
                version: env!("CARGO_PKG_VERSION").to_string(),
                dt_s: Some(config.dt_s),
                encounters_per_set: Some(config.encounters_per_set),
            },
            cells: reports,
        },
        outcomes,
    })
}

/// CSV rows mirroring the report grid, one per cell.
pub fn report_csv(result: &SweepResult) -> String {
    let mut out = String::from(
        "airframe_class,dov_mode,beta,visibility_nmi,valid,n_encounters,n_excluded,\
         weighted_nominal_nmacs,weighted_unresolved,weighted_induced,\
         unresolved,induced,total,\
         unresolved_ci_lower,unresolved_ci_upper,induced_ci_lower,induced_ci_upper,\
         total_ci_lower,total_ci_upper\n",
    );
    for cell in &result.cells {
        let k = &cell.key;
        out.push_str(&format!(
            "{},{},{},{},",
            k.airframe_class, k.dov_mode, k.beta, k.visibility_nmi
        ));
        match &cell.report {
            Some(r) => out.push_str(&format!(
                "true,{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                r.n_encounters,
                cell.n_excluded,
                r.weighted_nominal_nmacs,
                r.weighted_unresolved,
                r.weighted_induced,
                r.unresolved,
                r.induced,
                r.total,
                r.unresolved_ci95.lower,
                r.unresolved_ci95.upper,
                r.induced_ci95.lower,
                r.induced_ci95.upper,
                r.total_ci95.lower,
                r.total_ci95.upper
            )),
            None => out.push_str(&format!("false,0,{},0,0,0,,,,,,,,,\n", cell.n_excluded)),
        }
    }
    out
}

/// Persist reports (CSV + JSON) and per-cell outcome files under
/// `outdir`. Returns the written paths.
pub fn write_sweep_output(output: &SweepOutput, outdir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(outdir).map_err(|e| Error::io(outdir, e))?;
    let mut written = Vec::new();

    let csv_path = outdir.join("report.csv");
    std::fs::write(&csv_path, report_csv(&output.result)).map_err(|e| Error::io(&csv_path, e))?;
    written.push(csv_path);

    let json_path = outdir.join("report.json");
    let json = serde_json::to_string_pretty(&output.result)
        .map_err(|e| Error::Runtime(format!("report serialization: {e}")))?;
    std::fs::write(&json_path, json).map_err(|e| Error::io(&json_path, e))?;
    written.push(json_path);

    let outcome_dir = outdir.join("outcomes");
    std::fs::create_dir_all(&outcome_dir).map_err(|e| Error::io(&outcome_dir, e))?;
    for (key, outcomes) in &output.outcomes {
        let path = outcome_dir.join(format!("{}.jsonl", key.slug()));
        write_outcomes(&path, key, outcomes)?;
        written.push(path);
    }
    Ok(written)
}

#[derive(Serialize, Deserialize)]
struct OutcomeFileHeader {
    schema: String,
    version: u32,
    #[serde(flatten)]
    key: CellKey,
}

const OUTCOME_SCHEMA: &str = "lookout-outcomes";
const OUTCOME_VERSION: u32 = 1;

/// Write one cell's outcome records as line-delimited JSON.
pub fn write_outcomes(path: &Path, key: &CellKey, outcomes: &[EncounterOutcome]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    let header = OutcomeFileHeader {
        schema: OUTCOME_SCHEMA.to_string(),
        version: OUTCOME_VERSION,
        key: *key,
    };
    writeln!(w, "{}", serde_json::to_string(&header).expect("header serializes"))
        .map_err(|e| Error::io(path, e))?;
    for o in outcomes {
        writeln!(w, "{}", serde_json::to_string(o).expect("outcome serializes"))
            .map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Read one cell's outcome records.
pub fn read_outcomes(path: &Path) -> Result<(CellKey, Vec<EncounterOutcome>)> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = std::io::BufReader::new(file).lines();
    let header_line = lines
        .next()
        .ok_or_else(|| Error::input(format!("{}: empty outcome file", path.display())))?
        .map_err(|e| Error::io(path, e))?;
    let header: OutcomeFileHeader = serde_json::from_str(&header_line)
        .map_err(|e| Error::input(format!("{}: bad header: {e}", path.display())))?;
    if header.version != OUTCOME_VERSION {
        return Err(Error::VersionMismatch {
            found: header.version,
            expected: OUTCOME_VERSION,
        });
    }
    let mut outcomes = Vec::new();
    for (index, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let o: EncounterOutcome = serde_json::from_str(&line).map_err(|e| Error::MalformedRecord {
            index,
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        outcomes.push(o);
    }
    Ok((header.key, outcomes))
}

/// Recompute the report grid from stored outcome files (the `analyze`
/// path). Files are processed in sorted name order for determinism.
pub fn analyze_outcomes(outcome_dir: &Path, master_seed: u64, resamples: usize) -> Result<SweepResult> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(outcome_dir)
        .map_err(|e| Error::io(outcome_dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "jsonl"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::input(format!(
            "{}: no outcome files (*.jsonl) found",
            outcome_dir.display()
        )));
    }

    let mut cells = Vec::with_capacity(paths.len());
    for (index, path) in paths.iter().enumerate() {
        let (key, outcomes) = read_outcomes(path)?;
        let n_excluded = outcomes.iter().filter(|o| o.diagnostic.is_some()).count();
        let bootstrap = BootstrapConfig {
            resamples,
            seed: mix(master_seed, &[purpose::BOOTSTRAP, index as u64]),
        };
        let (report, invalid_reason) = match risk_ratio(&outcomes, &bootstrap) {
            Ok(r) => (Some(r), None),
            Err(Error::ZeroDenominator) => (None, Some(Error::ZeroDenominator.to_string())),
            Err(e) => return Err(e),
        };
        cells.push(CellReport {
            key,
            n_excluded,
            report,
            invalid_reason,
        });
    }

    Ok(SweepResult {
        provenance: Provenance {
            config_hash: "recomputed-from-outcomes".to_string(),
            master_seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            dt_s: None,
            encounters_per_set: None,
        },
        cells,
    })
}
