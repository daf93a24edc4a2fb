//! Minimal static SVG line charts for the convergence traces — offline
//! artifacts only, log-scaled vertical axis with a floor for zeros.

use spdreg_core::solvers::SolverTrace;
use std::fmt::Write as _;
use std::path::Path;

const COLORS: &[&str] = &["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: f64 = 54.0;
const FLOOR: f64 = 1e-16;

pub struct Series<'a> {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub trace: Option<&'a SolverTrace>,
}

fn log_floor(v: f64) -> f64 {
    v.max(FLOOR).log10()
}

/// Write one chart with a log10 y axis.
pub fn write_log_chart(
    path: &Path,
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[(String, Vec<(f64, f64)>)],
) -> anyhow::Result<()> {
    let mut xs_max = f64::MIN;
    let mut xs_min = f64::MAX;
    let mut ys_max = f64::MIN;
    let mut ys_min = f64::MAX;
    for (_, pts) in series {
        for &(x, y) in pts {
            xs_max = xs_max.max(x);
            xs_min = xs_min.min(x);
            let ly = log_floor(y);
            ys_max = ys_max.max(ly);
            ys_min = ys_min.min(ly);
        }
    }
    if !xs_max.is_finite() || xs_max == xs_min {
        xs_max = xs_min + 1.0;
    }
    if !ys_max.is_finite() || ys_max == ys_min {
        ys_max = ys_min + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - xs_min) / (xs_max - xs_min) * (W - 2.0 * MARGIN);
    let sy = |y: f64| H - MARGIN - (log_floor(y) - ys_min) / (ys_max - ys_min) * (H - 2.0 * MARGIN);

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    )?;
    writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#)?;
    writeln!(
        svg,
        r#"<text x="{}" y="22" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
        W / 2.0,
        title
    )?;
    // axes
    writeln!(
        svg,
        r#"<line x1="{m}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/><line x1="{m}" y1="{t}" x2="{m}" y2="{b}" stroke="black"/>"#,
        m = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN,
        t = MARGIN
    )?;
    writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="11">{}</text>"#,
        W / 2.0,
        H - 14.0,
        x_label
    )?;
    writeln!(
        svg,
        r#"<text x="14" y="{}" text-anchor="middle" font-family="sans-serif" font-size="11" transform="rotate(-90 14 {})">{} (log10)</text>"#,
        H / 2.0,
        H / 2.0,
        y_label
    )?;
    // y tick labels at integer decades
    let lo = ys_min.floor() as i64;
    let hi = ys_max.ceil() as i64;
    let step = (((hi - lo) as f64 / 6.0).ceil() as i64).max(1);
    let mut tick = lo;
    while tick <= hi {
        let v = 10f64.powi(tick as i32);
        let y = sy(v);
        if (MARGIN..=H - MARGIN).contains(&y) {
            writeln!(
                svg,
                r##"<text x="{}" y="{}" text-anchor="end" font-family="sans-serif" font-size="10">1e{}</text><line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#dddddd"/>"##,
                MARGIN - 6.0,
                y + 3.0,
                tick,
                MARGIN,
                y,
                W - MARGIN,
                y
            )?;
        }
        tick += step;
    }
    for (i, (label, pts)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path_data: Vec<String> = pts
            .iter()
            .enumerate()
            .map(|(j, &(x, y))| {
                format!("{}{:.2},{:.2}", if j == 0 { "M" } else { "L" }, sx(x), sy(y))
            })
            .collect();
        writeln!(
            svg,
            r#"<path d="{}" fill="none" stroke="{color}" stroke-width="1.6"/>"#,
            path_data.join(" ")
        )?;
        writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" fill="{color}">{}</text>"#,
            W - MARGIN - 110.0,
            MARGIN + 16.0 * (i as f64 + 1.0),
            label
        )?;
    }
    writeln!(svg, "</svg>")?;
    std::fs::write(path, svg)?;
    Ok(())
}

/// The standard pair of charts for a set of solver traces: objective vs wall
/// time and distance-to-reference vs iteration.
pub fn write_convergence_plots(
    dir: &Path,
    experiment: &str,
    traces: &[(String, &SolverTrace)],
    objective_shift: f64,
) -> anyhow::Result<()> {
    let obj_series: Vec<(String, Vec<(f64, f64)>)> = traces
        .iter()
        .map(|(name, t)| {
            (
                name.clone(),
                t.records
                    .iter()
                    .map(|r| (r.wall_seconds, r.objective - objective_shift))
                    .collect(),
            )
        })
        .collect();
    write_log_chart(
        &dir.join(format!("{experiment}_objective_vs_time.svg")),
        &format!("{experiment}: objective vs wall time"),
        "wall seconds",
        "objective",
        &obj_series,
    )?;

    let dist_series: Vec<(String, Vec<(f64, f64)>)> = traces
        .iter()
        .map(|(name, t)| {
            (
                name.clone(),
                t.records
                    .iter()
                    .filter_map(|r| r.dist_to_ref.map(|d| (r.iter as f64, d)))
                    .collect(),
            )
        })
        .collect();
    if dist_series.iter().any(|(_, pts)| !pts.is_empty()) {
        write_log_chart(
            &dir.join(format!("{experiment}_dist_vs_iteration.svg")),
            &format!("{experiment}: distance to reference vs iteration"),
            "iteration",
            "Frobenius distance",
            &dist_series,
        )?;
    }
    Ok(())
}
