//! Static SVG bar charts of sweep results: stacked unresolved/induced
//! risk-ratio bars grouped by visibility with one bar per search
//! effectiveness, plus difference charts between DOV configurations and
//! airframe classes. Output is plain hand-written SVG so identical
//! results produce identical bytes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::acquisition::DovMode;
use crate::encounters::AirframeClass;
use crate::error::{Error, Result};
use crate::sweep::{CellReport, SweepResult};

const WIDTH: f64 = 940.0;
const HEIGHT: f64 = 540.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 56.0;
const MARGIN_BOTTOM: f64 = 78.0;
const UNRESOLVED_FILL: &str = "#4878a8";
const INDUCED_FILL: &str = "#e08214";
const DELTA_FILL: &str = "#6a51a3";
const AXIS_STROKE: &str = "#333";
const GRID_STROKE: &str = "#ddd";
const LABEL_FILL: &str = "#444";
const HATCH_STROKE: &str = "#999";
const NA_FILL: &str = "#666";

/// Emit every chart the result grid supports; returns the written paths.
pub fn emit_charts(result: &SweepResult, outdir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(outdir).map_err(|e| Error::io(outdir, e))?;
    let mut written = Vec::new();

    let classes = unique_classes(result);
    let dovs = unique_dovs(result);

    for &class in &classes {
        for &dov in &dovs {
            if let Some(svg) = risk_ratio_chart(result, class, dov) {
                let path = outdir.join(format!(
                    "risk_ratio_{}_{}.svg",
                    class.to_string().replace('-', "_"),
                    dov
                ));
                std::fs::write(&path, svg).map_err(|e| Error::io(&path, e))?;
                written.push(path);
            }
        }
    }

    // weighted-minus-uniform dwell difference per class
    for &class in &classes {
        if let Some(svg) = delta_chart(
            result,
            &format!("Risk-ratio increase, weighted dwell vs uniform ({class})"),
            |r, beta, vis| {
                let w = total_of(r.cell(class, DovMode::WeightedScaling, beta, vis))?;
                let u = total_of(r.cell(class, DovMode::Uniform, beta, vis))?;
                Some(w - u)
            },
        ) {
            let path = outdir.join(format!(
                "delta_dov_{}.svg",
                class.to_string().replace('-', "_")
            ));
            std::fs::write(&path, svg).map_err(|e| Error::io(&path, e))?;
            written.push(path);
        }
    }

    // fixed-wing-minus-rotary difference per dwell mode
    for &dov in &dovs {
        if let Some(svg) = delta_chart(
            result,
            &format!("Risk-ratio increase, fixed wing vs rotary wing ({dov} dwell)"),
            |r, beta, vis| {
                let f = total_of(r.cell(AirframeClass::FixedWing, dov, beta, vis))?;
                let rot = total_of(r.cell(AirframeClass::RotaryWing, dov, beta, vis))?;
                Some(f - rot)
            },
        ) {
            let path = outdir.join(format!("delta_class_{dov}.svg"));
            std::fs::write(&path, svg).map_err(|e| Error::io(&path, e))?;
            written.push(path);
        }
    }

    Ok(written)
}

fn total_of(cell: Option<&CellReport>) -> Option<f64> {
    cell.and_then(|c| c.report.as_ref()).map(|r| r.total)
}

fn unique_classes(result: &SweepResult) -> Vec<AirframeClass> {
    let mut out = Vec::new();
    for c in &result.cells {
        if !out.contains(&c.key.airframe_class) {
            out.push(c.key.airframe_class);
        }
    }
    out
}

fn unique_dovs(result: &SweepResult) -> Vec<DovMode> {
    let mut out = Vec::new();
    for c in &result.cells {
        if !out.contains(&c.key.dov_mode) {
            out.push(c.key.dov_mode);
        }
    }
    out
}

fn axis_values(result: &SweepResult) -> (Vec<f64>, Vec<f64>) {
    let mut betas = Vec::new();
    let mut vis = Vec::new();
    for c in &result.cells {
        if !betas.contains(&c.key.beta) {
            betas.push(c.key.beta);
        }
        if !vis.contains(&c.key.visibility_nmi) {
            vis.push(c.key.visibility_nmi);
        }
    }
    (betas, vis)
}

/// Stacked unresolved/induced bars for one (class, dwell mode) panel:
/// groups along visibility, one bar per β, hatched markers for invalid
/// cells, and whiskers for the total's bootstrap CI.
fn risk_ratio_chart(result: &SweepResult, class: AirframeClass, dov: DovMode) -> Option<String> {
    let (betas, vis_set) = axis_values(result);
    let mut any = false;
    let mut y_max: f64 = 0.0;
    for &beta in &betas {
        for &vis in &vis_set {
            if let Some(cell) = result.cell(class, dov, beta, vis) {
                any = true;
                if let Some(r) = &cell.report {
                    y_max = y_max.max(r.total_ci95.upper).max(r.total);
                }
            }
        }
    }
    if !any {
        return None;
    }
    let y_max = if y_max > 0.0 { y_max * 1.12 } else { 1.0 };

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let y_of = |v: f64| MARGIN_TOP + plot_h * (1.0 - v / y_max);

    let mut svg = svg_open(&format!(
        "Risk ratio by visual range and search effectiveness — {class}, {dov} dwell"
    ));
    draw_axes(&mut svg, y_max, y_of, "total risk ratio");

    let group_w = plot_w / vis_set.len() as f64;
    let bar_w = group_w * 0.8 / betas.len() as f64;
    for (g, &vis) in vis_set.iter().enumerate() {
        let group_x = MARGIN_LEFT + g as f64 * group_w;
        for (b, &beta) in betas.iter().enumerate() {
            let x = group_x + group_w * 0.1 + b as f64 * bar_w;
            let Some(cell) = result.cell(class, dov, beta, vis) else {
                continue;
            };
            match &cell.report {
                Some(r) => {
                    let y_unres = y_of(r.unresolved);
                    let y_total = y_of(r.total);
                    let base = y_of(0.0);
                    let _ = write!(
                        svg,
                        r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{UNRESOLVED_FILL}"/>"#,
                        x,
                        y_unres,
                        bar_w * 0.9,
                        base - y_unres
                    );
                    let _ = write!(
                        svg,
                        r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{INDUCED_FILL}"/>"#,
                        x,
                        y_total,
                        bar_w * 0.9,
                        y_unres - y_total
                    );
                    // CI whisker on the total
                    let cx = x + bar_w * 0.45;
                    let (lo, hi) = (y_of(r.total_ci95.lower), y_of(r.total_ci95.upper));
                    let _ = write!(
                        svg,
                        r#"<line x1="{cx:.2}" y1="{lo:.2}" x2="{cx:.2}" y2="{hi:.2}" stroke="{AXIS_STROKE}" stroke-width="1"/>"#
                    );
                    let _ = write!(
                        svg,
                        r#"<line x1="{:.2}" y1="{hi:.2}" x2="{:.2}" y2="{hi:.2}" stroke="{AXIS_STROKE}" stroke-width="1"/>"#,
                        cx - 3.0,
                        cx + 3.0
                    );
                }
                None => {
                    // hatched placeholder for a statistically invalid cell
                    let base = y_of(0.0);
                    let _ = write!(
                        svg,
                        r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="24" fill="url(#hatch)" stroke="{HATCH_STROKE}"/>"#,
                        x,
                        base - 24.0,
                        bar_w * 0.9
                    );
                    let _ = write!(
                        svg,
                        r#"<text x="{:.2}" y="{:.2}" font-size="9" text-anchor="middle" fill="{NA_FILL}">n/a</text>"#,
                        x + bar_w * 0.45,
                        base - 30.0
                    );
                }
            }
            // β label under each bar, in thousands
            let _ = write!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" font-size="9" text-anchor="middle" fill="{LABEL_FILL}">{}</text>"#,
                x + bar_w * 0.45,
                y_of(0.0) + 14.0,
                trim_number(beta / 1000.0)
            );
        }
        let _ = write!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">R = {} nmi</text>"#,
            group_x + group_w / 2.0,
            y_of(0.0) + 34.0,
            trim_number(vis)
        );
    }

    let _ = write!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="middle" fill="{LABEL_FILL}">bar labels: search effectiveness β, thousands per sr·s</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    );
    legend(&mut svg, &[("unresolved", UNRESOLVED_FILL), ("induced", INDUCED_FILL)]);
    svg.push_str("</svg>\n");
    Some(svg)
}

/// Signed per-cell difference bars over the (β, visibility) grid.
fn delta_chart(
    result: &SweepResult,
    title: &str,
    value: impl Fn(&SweepResult, f64, f64) -> Option<f64>,
) -> Option<String> {
    let (betas, vis_set) = axis_values(result);
    let mut values = Vec::new();
    for &vis in &vis_set {
        for &beta in &betas {
            values.push((vis, beta, value(result, beta, vis)));
        }
    }
    if !values.iter().any(|(_, _, v)| v.is_some()) {
        return None;
    }
    let span = values
        .iter()
        .filter_map(|(_, _, v)| *v)
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let span = if span > 0.0 { span * 1.15 } else { 0.01 };

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let y_of = |v: f64| MARGIN_TOP + plot_h * (0.5 - v / (2.0 * span));

    let mut svg = svg_open(title);
    // centered zero axis
    let _ = write!(
        svg,
        r#"<line x1="{MARGIN_LEFT}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{AXIS_STROKE}"/>"#,
        y_of(0.0),
        WIDTH - MARGIN_RIGHT,
        y_of(0.0)
    );
    for frac in [-1.0, -0.5, 0.5, 1.0] {
        let v = frac * span / 1.15;
        let y = y_of(v);
        let _ = write!(
            svg,
            r#"<line x1="{MARGIN_LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{GRID_STROKE}"/>"#,
            WIDTH - MARGIN_RIGHT
        );
        let _ = write!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 6.0,
            y + 3.0,
            trim_number((v * 1000.0).round() / 1000.0)
        );
    }
    let _ = write!(
        svg,
        r#"<text x="16" y="{:.2}" font-size="12" transform="rotate(-90 16 {:.2})" text-anchor="middle">Δ total risk ratio</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );

    let group_w = plot_w / vis_set.len() as f64;
    let bar_w = group_w * 0.8 / betas.len() as f64;
    for (g, &vis) in vis_set.iter().enumerate() {
        let group_x = MARGIN_LEFT + g as f64 * group_w;
        for (b, &beta) in betas.iter().enumerate() {
            let x = group_x + group_w * 0.1 + b as f64 * bar_w;
            if let Some(v) = values[g * betas.len() + b].2 {
                let (top, h) = if v >= 0.0 {
                    (y_of(v), y_of(0.0) - y_of(v))
                } else {
                    (y_of(0.0), y_of(v) - y_of(0.0))
                };
                let _ = write!(
                    svg,
                    r#"<rect x="{x:.2}" y="{top:.2}" width="{:.2}" height="{h:.2}" fill="{DELTA_FILL}"/>"#,
                    bar_w * 0.9
                );
            }
            let _ = write!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" font-size="9" text-anchor="middle" fill="{LABEL_FILL}">{}</text>"#,
                x + bar_w * 0.45,
                HEIGHT - MARGIN_BOTTOM + 14.0,
                trim_number(beta / 1000.0)
            );
        }
        let _ = write!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">R = {} nmi</text>"#,
            group_x + group_w / 2.0,
            HEIGHT - MARGIN_BOTTOM + 34.0,
            trim_number(vis)
        );
    }
    svg.push_str("</svg>\n");
    Some(svg)
}

fn svg_open(title: &str) -> String {
    let mut svg = String::with_capacity(16 * 1024);
    let _ = write!(
        svg,
        concat!(
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" "#,
            r#"viewBox="0 0 {w} {h}" font-family="Helvetica, Arial, sans-serif">"#,
            r#"<defs><pattern id="hatch" width="5" height="5" patternUnits="userSpaceOnUse">"#,
            r#"<path d="M0 5 L5 0" stroke="{hatch}" stroke-width="1"/></pattern></defs>"#,
            r#"<rect width="{w}" height="{h}" fill="white"/>"#,
            r#"<text x="{cx}" y="26" font-size="15" text-anchor="middle">{title}</text>"#
        ),
        w = WIDTH,
        h = HEIGHT,
        cx = WIDTH / 2.0,
        hatch = HATCH_STROKE,
        title = xml_escape(title)
    );
    svg
}

fn draw_axes(svg: &mut String, y_max: f64, y_of: impl Fn(f64) -> f64, y_label: &str) {
    let step = nice_step(y_max / 5.0);
    let mut v = 0.0;
    while v <= y_max + 1e-12 {
        let y = y_of(v);
        let _ = write!(
            svg,
            r#"<line x1="{MARGIN_LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{GRID_STROKE}"/>"#,
            WIDTH - MARGIN_RIGHT
        );
        let _ = write!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 6.0,
            y + 3.0,
            trim_number(v)
        );
        v += step;
    }
    let _ = write!(
        svg,
        r#"<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP}" x2="{MARGIN_LEFT}" y2="{:.2}" stroke="{AXIS_STROKE}"/>"#,
        y_of(0.0)
    );
    let _ = write!(
        svg,
        r#"<line x1="{MARGIN_LEFT}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{AXIS_STROKE}"/>"#,
        y_of(0.0),
        WIDTH - MARGIN_RIGHT,
        y_of(0.0)
    );
    let mid = MARGIN_TOP + (y_of(0.0) - MARGIN_TOP) / 2.0;
    let _ = write!(
        svg,
        r#"<text x="16" y="{mid:.2}" font-size="12" transform="rotate(-90 16 {mid:.2})" text-anchor="middle">{}</text>"#,
        xml_escape(y_label)
    );
}

fn legend(svg: &mut String, entries: &[(&str, &str)]) {
    let mut x = WIDTH - MARGIN_RIGHT - 190.0;
    for (label, fill) in entries {
        let _ = write!(
            svg,
            r#"<rect x="{x:.2}" y="36" width="12" height="12" fill="{fill}"/>"#
        );
        let _ = write!(
            svg,
            r#"<text x="{:.2}" y="46" font-size="11">{label}</text>"#,
            x + 16.0
        );
        x += 95.0;
    }
}

fn nice_step(raw: f64) -> f64 {
    if raw <= 0.0 || !raw.is_finite() {
        return 0.2;
    }
    let mag = 10f64.powf(raw.log10().floor());
    let unit = raw / mag;
    let nice = if unit <= 1.0 {
        1.0
    } else if unit <= 2.0 {
        2.0
    } else if unit <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn trim_number(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
