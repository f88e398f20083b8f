//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line. Tolerances are fixed here, not tuned at run time.
//!
//! The heavy statistical criteria run the full default parameter grid at
//! 10⁴ encounters per set; expect several minutes on a small multicore
//! machine.

use rand::RngExt;

use lookout_core::acquisition::{AcquisitionState, DovMode, acquisition_rate};
use lookout_core::config::SimConfig;
use lookout_core::dynamics::{AircraftState, propagate};
use lookout_core::encounters::AirframeClass;
use lookout_core::metrics::{BootstrapConfig, mac_probability, risk_ratio};
use lookout_core::rng::stream;
use lookout_core::silhouette::primitives::{icosphere, unit_cube};
use lookout_core::silhouette::{AreaTable, ViewAngles, project_silhouette_area};
use lookout_core::sweep::{SweepResult, run_sweep, write_sweep_output};
use lookout_core::units::{kts_to_fps, nmi_to_ft};

fn pass(criterion: &str, detail: &str) {
    println!("criterion {criterion}: PASS — {detail}");
}

struct Gate {
    criterion: &'static str,
    failures: Vec<String>,
}

impl Gate {
    fn new(criterion: &'static str) -> Self {
        Gate {
            criterion,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: String) {
        if !ok {
            self.failures.push(detail);
        }
    }

    fn finish(self, detail: &str) {
        if self.failures.is_empty() {
            pass(self.criterion, detail);
        } else {
            println!(
                "criterion {}: FAIL — {} violation(s)",
                self.criterion,
                self.failures.len()
            );
            for f in &self.failures {
                println!("    {f}");
            }
            panic!(
                "criterion {} failed: {} violation(s); first: {}",
                self.criterion,
                self.failures.len(),
                self.failures[0]
            );
        }
    }
}

#[test]
fn criterion_1_sighting_rate_oracle() {
    // independent route: evaluate the rate in log space
    let oracle = |beta: f64, area: f64, r: f64, vis: f64| {
        (beta.ln() + area.ln() - 2.0 * r.ln() - 2.996 * r / vis).exp()
    };
    let mut rng = stream(1001, &[1]);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let beta = rng.random_range(1.0..2e4);
        let area = rng.random_range(1.0..1e3);
        let r = rng.random_range(1e3..1e5);
        let vis = rng.random_range(1e4..1e5);
        let got = acquisition_rate(beta, area, r, vis).unwrap();
        let want = oracle(beta, area, r, vis);
        let rel = ((got - want) / want).abs();
        worst = worst.max(rel);
    }
    assert!(worst < 1e-12, "worst relative error {worst}");
    pass("1", &format!("1000-point rate oracle, worst relative error {worst:.2e}"));
}

#[test]
fn criterion_2_closed_form_hazard() {
    // straight head-on at constant closure: the Monte Carlo acquired-by-T
    // fraction must match the numerically integrated survival law
    let closure = 2.0 * kts_to_fps(100.0);
    let r0 = 30_000.0;
    let t_total = 70.0;
    let beta = 17000.0;
    let vis = nmi_to_ft(3.0);
    let area = 110.0;
    let rate_at = |t: f64| acquisition_rate(beta, area, r0 - closure * t, vis).unwrap();

    // fine-quadrature reference for 1 - exp(-∫λ dt)
    let fine = 1e-3;
    let mut hazard = 0.0;
    let mut t = 0.0;
    while t < t_total {
        hazard += rate_at(t + fine / 2.0) * fine;
        t += fine;
    }
    let p_expect = 1.0 - (-hazard).exp();

    let n = 10_000u32;
    let dt = 0.25;
    let steps = (t_total / dt) as usize;
    let mut acquired = 0u32;
    for seed in 0..n {
        let mut rng = stream(2002, &[seed as u64]);
        let mut state = AcquisitionState::new(&mut rng);
        for k in 0..steps {
            let t = k as f64 * dt;
            state.step(rate_at(t + dt / 2.0), dt, true, true, t, &mut rng);
        }
        acquired += state.acquired as u32;
    }
    let frac = f64::from(acquired) / f64::from(n);
    let sigma = (p_expect * (1.0 - p_expect) / f64::from(n)).sqrt();
    assert!(
        (frac - p_expect).abs() < 3.0 * sigma,
        "fraction {frac} expected {p_expect} ± {sigma}"
    );
    pass(
        "2",
        &format!("MC fraction {frac:.4} vs integrated {p_expect:.4} (σ {sigma:.4})"),
    );
}

#[test]
fn criterion_3_bundled_table_fidelity() {
    let table = AreaTable::cessna172();
    let samples = [
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
    for (az, el, want) in samples {
        let got = table.lookup(ViewAngles::new(az, el));
        assert_eq!(got, want, "({az}, {el})");
    }
    pass("3", "all ten reference areas exact at their grid nodes");
}

#[test]
fn criterion_4_geometry_oracles() {
    let cube = unit_cube();
    let diag = project_silhouette_area(&cube, ViewAngles::new(45.0, 0.0), 1024)
        .unwrap()
        .area;
    let want = std::f64::consts::SQRT_2;
    assert!((diag - want).abs() / want < 0.01, "cube at 45°: {diag}");

    let sphere = icosphere(1.0, 4);
    let circle = project_silhouette_area(&sphere, ViewAngles::new(20.0, 35.0), 1024)
        .unwrap()
        .area;
    let pi = std::f64::consts::PI;
    assert!((circle - pi).abs() / pi < 0.02, "sphere: {circle}");

    let s0 = AircraftState::level(0.0, 0.0, 1000.0, kts_to_fps(100.0), 0.0);
    let s1 = propagate(&s0, None, 10.0).unwrap();
    assert!(
        (s1.north_ft - 1687.81).abs() < 0.01,
        "displacement {}",
        s1.north_ft
    );
    pass(
        "4",
        &format!("cube {diag:.4} (√2), sphere {circle:.4} (π), 10 s at 100 kt {:.2} ft", s1.north_ft),
    );
}

fn small_sweep_config(avoidance: bool) -> SimConfig {
    SimConfig {
        beta_set: vec![8500.0, 17000.0],
        visibility_set_nmi: vec![2.0, 5.0],
        dov_modes: vec![DovMode::Uniform],
        airframe_classes: vec![AirframeClass::FixedWing],
        encounters_per_set: 400,
        master_seed: 505,
        avoidance,
        bootstrap_resamples: 300,
        ..Default::default()
    }
}

#[test]
fn criterion_5_risk_ratio_identities() {
    // avoidance disabled: mitigated outcomes equal nominal outcomes
    let off = run_sweep(&small_sweep_config(false)).unwrap();
    for cell in &off.result.cells {
        let r = cell.report.as_ref().expect("valid cell");
        assert_eq!(r.total, 1.0, "total with avoidance off");
        assert_eq!(r.induced, 0.0, "induced with avoidance off");
    }

    // total = unresolved + induced exactly, for every cell of a live sweep
    let on = run_sweep(&small_sweep_config(true)).unwrap();
    for cell in &on.result.cells {
        let r = cell.report.as_ref().expect("valid cell");
        assert_eq!(r.total, r.unresolved + r.induced);
    }

    // power-of-two weight rescaling leaves every ratio bit-identical
    let (_, outcomes) = &on.outcomes[0];
    let bootstrap = BootstrapConfig { resamples: 200, seed: 9 };
    let base = risk_ratio(outcomes, &bootstrap).unwrap();
    let scaled: Vec<_> = outcomes
        .iter()
        .map(|o| lookout_core::metrics::EncounterOutcome {
            weight: o.weight * 4.0,
            ..o.clone()
        })
        .collect();
    let rescaled = risk_ratio(&scaled, &bootstrap).unwrap();
    assert_eq!(base.total, rescaled.total);
    assert_eq!(base.unresolved, rescaled.unresolved);
    assert_eq!(base.induced, rescaled.induced);
    pass("5", "identity mitigation, exact decomposition, weight-rescaling invariance");
}

#[test]
fn criterion_6_mac_probability_arithmetic() {
    assert_eq!(mac_probability(0.30, 0.001), 0.0003);
    assert_eq!(mac_probability(0.30, 0.0006), 0.00018);
    assert_eq!(mac_probability(0.004, 0.025), 0.0001);
    assert_eq!(mac_probability(0.24, 0.025), 0.006);
    pass("6", "0.0003 / 0.00018 / 0.0001 / 0.006 reproduced exactly");
}

fn full_grid_config() -> SimConfig {
    SimConfig {
        master_seed: 2024,
        encounters_per_set: 10_000,
        bootstrap_resamples: 1000,
        ..Default::default()
    }
}

fn total_of(result: &SweepResult, class: AirframeClass, dov: DovMode, beta: f64, vis: f64) -> f64 {
    result
        .cell(class, dov, beta, vis)
        .and_then(|c| c.report.as_ref())
        .map(|r| r.total)
        .unwrap_or(f64::NAN)
}

#[test]
fn criterion_7_trend_reproduction() {
    let config = full_grid_config();
    let output = run_sweep(&config).unwrap();
    let result = &output.result;
    let betas = &config.beta_set;
    let vis = &config.visibility_set_nmi;
    let dovs = &config.dov_modes;
    let classes = &config.airframe_classes;

    let mut gate = Gate::new("7");

    // (a) total non-increasing in visual range at each fixed β, with the
    // 95% CIs separating R = 2 from R = 5
    for &class in classes {
        for &dov in dovs {
            for &beta in betas {
                for w in vis.windows(2) {
                    let lo = total_of(result, class, dov, beta, w[0]);
                    let hi = total_of(result, class, dov, beta, w[1]);
                    gate.check(
                        hi <= lo,
                        format!("(a) {class}/{dov}/β{beta}: R{} {hi:.4} > R{} {lo:.4}", w[1], w[0]),
                    );
                }
                let near = result.cell(class, dov, beta, vis[0]).unwrap().report.clone().unwrap();
                let far = result
                    .cell(class, dov, beta, *vis.last().unwrap())
                    .unwrap()
                    .report
                    .clone()
                    .unwrap();
                gate.check(
                    far.total_ci95.upper < near.total_ci95.lower,
                    format!(
                        "(a) {class}/{dov}/β{beta}: CI overlap R{} [{:.4},{:.4}] vs R{} [{:.4},{:.4}]",
                        *vis.last().unwrap(),
                        far.total_ci95.lower,
                        far.total_ci95.upper,
                        vis[0],
                        near.total_ci95.lower,
                        near.total_ci95.upper
                    ),
                );
            }
        }
    }

    // (b) total non-increasing in β at the lowest visual range
    for &class in classes {
        for &dov in dovs {
            for w in betas.windows(2) {
                let lo_beta = total_of(result, class, dov, w[0], vis[0]);
                let hi_beta = total_of(result, class, dov, w[1], vis[0]);
                gate.check(
                    hi_beta <= lo_beta,
                    format!(
                        "(b) {class}/{dov} at R{}: β{} {hi_beta:.4} > β{} {lo_beta:.4}",
                        vis[0], w[1], w[0]
                    ),
                );
            }
        }
    }

    // (c) weighted dwell at or above uniform dwell, per cell
    for &class in classes {
        for &beta in betas {
            for &v in vis {
                let uniform = total_of(result, class, DovMode::Uniform, beta, v);
                let weighted = total_of(result, class, DovMode::WeightedScaling, beta, v);
                gate.check(
                    weighted >= uniform,
                    format!("(c) {class}/β{beta}/R{v}: weighted {weighted:.4} < uniform {uniform:.4}"),
                );
            }
        }
    }

    // (d) fixed-wing at or above rotary-wing at matched parameters
    for &dov in dovs {
        for &beta in betas {
            for &v in vis {
                let fixed = total_of(result, AirframeClass::FixedWing, dov, beta, v);
                let rotary = total_of(result, AirframeClass::RotaryWing, dov, beta, v);
                gate.check(
                    fixed >= rotary,
                    format!("(d) {dov}/β{beta}/R{v}: fixed {fixed:.4} < rotary {rotary:.4}"),
                );
            }
        }
    }

    gate.finish("R-monotone with CI separation, β-monotone, dwell and class orderings");
}

#[test]
fn criterion_8_jobs_determinism() {
    let config = SimConfig {
        beta_set: vec![17000.0],
        visibility_set_nmi: vec![2.0, 5.0],
        dov_modes: vec![DovMode::Uniform, DovMode::WeightedScaling],
        airframe_classes: vec![AirframeClass::FixedWing],
        encounters_per_set: 500,
        master_seed: 808,
        bootstrap_resamples: 400,
        ..Default::default()
    };
    let mut csv_bytes = Vec::new();
    let mut outcome_bytes = Vec::new();
    for jobs in [1usize, 4] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().unwrap();
        let output = pool.install(|| run_sweep(&config)).unwrap();
        let dir = std::env::temp_dir().join(format!("lookout_acceptance_jobs_{jobs}"));
        let _ = std::fs::remove_dir_all(&dir);
        write_sweep_output(&output, &dir).unwrap();
        csv_bytes.push(std::fs::read(dir.join("report.csv")).unwrap());
        let mut cell_files: Vec<_> = std::fs::read_dir(dir.join("outcomes"))
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        cell_files.sort();
        outcome_bytes.push(
            cell_files
                .iter()
                .map(|p| std::fs::read(p).unwrap())
                .collect::<Vec<_>>(),
        );
    }
    assert_eq!(csv_bytes[0], csv_bytes[1], "report CSVs differ across --jobs");
    assert_eq!(outcome_bytes[0], outcome_bytes[1], "outcome files differ across --jobs");
    pass("8", "byte-identical reports and outcomes with 1 vs 4 worker threads");
}

#[test]
fn criterion_9_timestep_convergence() {
    // corner cells of the grid, same encounter sets at both timesteps
    let dir = std::env::temp_dir().join("lookout_acceptance_dt");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    let base = SimConfig {
        master_seed: 909,
        encounters_per_set: 10_000,
        beta_set: vec![4250.0, 17000.0],
        visibility_set_nmi: vec![2.0, 5.0],
        ..Default::default()
    };
    let mut set_paths = Vec::new();
    for class in [AirframeClass::FixedWing, AirframeClass::RotaryWing] {
        let set = lookout_core::encounters::generate_set(
            &base.scheme,
            class,
            base.encounters_per_set,
            base.master_seed,
        )
        .unwrap();
        let path = dir.join(format!("{class}.jsonl"));
        lookout_core::encounters::write_set(&path, &set).unwrap();
        set_paths.push(path);
    }

    let with_dt = |dt: f64| SimConfig {
        dt_s: dt,
        encounter_set_fixed_wing: Some(set_paths[0].clone()),
        encounter_set_rotary_wing: Some(set_paths[1].clone()),
        ..base.clone()
    };
    let coarse = run_sweep(&with_dt(1.0)).unwrap();
    let fine = run_sweep(&with_dt(0.1)).unwrap();

    let mut gate = Gate::new("9");
    let mut largest = 0.0f64;
    for cell in &coarse.result.cells {
        let k = cell.key;
        let c = cell.report.as_ref().expect("valid cell");
        let f = fine
            .result
            .cell(k.airframe_class, k.dov_mode, k.beta, k.visibility_nmi)
            .unwrap()
            .report
            .as_ref()
            .expect("valid cell");
        let delta = (f.total - c.total).abs();
        let half_width = (c.total_ci95.upper - c.total_ci95.lower) / 2.0;
        largest = largest.max(delta / half_width);
        gate.check(
            delta < half_width,
            format!(
                "{}/{}/β{}/R{}: Δ {delta:.4} ≥ CI half-width {half_width:.4}",
                k.airframe_class, k.dov_mode, k.beta, k.visibility_nmi
            ),
        );
    }
    gate.finish(&format!(
        "dt 1.0 vs 0.1 shifts every corner cell by < its CI half-width (max ratio {largest:.2})"
    ));
}
