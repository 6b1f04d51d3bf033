//! Minimal SVG line charts of the per-point means: MSE in dB and BER on a
//! log scale, side by side.

use std::fmt::Write;

use crate::error::{HarnessError, Result};
use crate::sweep::{summarize, Row, Summary};

const PANEL_W: f64 = 420.0;
const PANEL_H: f64 = 300.0;
const MARGIN: f64 = 56.0;
const LEGEND_H: f64 = 18.0;
const COLORS: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

/// BER values of zero are drawn at this floor.
const BER_FLOOR: f64 = 1e-6;

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
    dashed: bool,
}

fn axis_title(axis: &str) -> &str {
    match axis {
        "snr" => "SNR [dB]",
        "pilots" => "number of pilots",
        "doppler" => "max Doppler [subcarrier spacings]",
        other => other,
    }
}

fn collect_series(summaries: &[Summary], value: impl Fn(&Summary) -> f64) -> Vec<Series> {
    let mut out: Vec<Series> = Vec::new();
    for s in summaries {
        let label = s.label();
        let p = (s.axis_value, value(s));
        match out.iter_mut().find(|x| x.label == label) {
            Some(x) => x.points.push(p),
            None => out.push(Series {
                label,
                points: vec![p],
                dashed: false,
            }),
        }
    }
    out
}

fn nice_range(lo: f64, hi: f64) -> (f64, f64) {
    if (hi - lo).abs() < 1e-12 {
        return (lo - 1.0, hi + 1.0);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn ticks(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
}

#[allow(clippy::too_many_arguments)]
fn panel(
    svg: &mut String,
    x0: f64,
    title: &str,
    x_title: &str,
    y_title: &str,
    series: &[Series],
    log_y: bool,
) -> std::fmt::Result {
    let tf = |v: f64| if log_y { v.max(BER_FLOOR).log10() } else { v };
    let all: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|&(x, y)| (x, tf(y))))
        .filter(|p| p.1.is_finite())
        .collect();
    let (xmin, xmax) = nice_range(
        all.iter().map(|p| p.0).fold(f64::INFINITY, f64::min),
        all.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max),
    );
    let (mut ymin, mut ymax) = nice_range(
        all.iter().map(|p| p.1).fold(f64::INFINITY, f64::min),
        all.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max),
    );
    if log_y {
        ymin = ymin.floor();
        ymax = ymax.ceil().max(ymin + 1.0);
    }
    let (left, top) = (x0 + MARGIN, MARGIN);
    let (w, h) = (PANEL_W - 1.5 * MARGIN, PANEL_H - 2.0 * MARGIN);
    let px = |x: f64| left + (x - xmin) / (xmax - xmin) * w;
    let py = |y: f64| top + h - (y - ymin) / (ymax - ymin) * h;

    writeln!(svg, r##"<rect x="{left:.1}" y="{top:.1}" width="{w:.1}" height="{h:.1}" fill="none" stroke="#333"/>"##)?;
    writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="14">{title}</text>"#,
        left + w / 2.0,
        top - 12.0
    )?;
    writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="12">{x_title}</text>"#,
        left + w / 2.0,
        top + h + 36.0
    )?;
    writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="12" transform="rotate(-90 {:.1} {:.1})">{y_title}</text>"#,
        x0 + 14.0,
        top + h / 2.0,
        x0 + 14.0,
        top + h / 2.0
    )?;
    for t in ticks(xmin, xmax, 4) {
        writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="10">{}</text>"#,
            px(t),
            top + h + 14.0,
            fmt_tick(t)
        )?;
    }
    let y_ticks = if log_y {
        (ymin as i64..=ymax as i64).map(|e| e as f64).collect()
    } else {
        ticks(ymin, ymax, 4)
    };
    for t in y_ticks {
        let label = if log_y { format!("1e{}", t as i64) } else { fmt_tick(t) };
        writeln!(
            svg,
            r##"<line x1="{left:.1}" x2="{:.1}" y1="{y:.1}" y2="{y:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" text-anchor="end" font-size="10">{label}</text>"##,
            left + w,
            left - 4.0,
            py(t) + 3.0,
            y = py(t)
        )?;
    }
    for (idx, s) in series.iter().enumerate() {
        let color = COLORS[idx % COLORS.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|p| tf(p.1).is_finite())
            .map(|&(x, y)| format!("{:.1},{:.1}", px(x), py(tf(y))))
            .collect();
        let dash = if s.dashed { r#" stroke-dasharray="5,4""# } else { "" };
        writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#,
            pts.join(" ")
        )?;
        for p in &pts {
            let (cx, cy) = p.split_once(',').expect("formatted pair");
            writeln!(svg, r#"<circle cx="{cx}" cy="{cy}" r="2.5" fill="{color}"/>"#)?;
        }
    }
    Ok(())
}

fn fmt_tick(v: f64) -> String {
    if v.abs() >= 100.0 || v == 0.0 {
        format!("{v:.0}")
    } else if v.abs() >= 1.0 {
        format!("{v:.1}")
    } else {
        format!("{v:.3}")
    }
}

/// Renders the rows of one sweep as an SVG document.
pub fn render_svg(rows: &[Row]) -> Result<String> {
    if rows.is_empty() {
        return Err(HarnessError::Csv("nothing to plot".into()));
    }
    let summaries = summarize(rows);
    let mse = collect_series(&summaries, |s| s.mse_db);
    let mut ber = collect_series(&summaries, |s| s.ber);
    // the reference is shared by all estimators; take it from the first curve
    let first = &summaries[0].label();
    ber.push(Series {
        label: "known channel, one-tap".into(),
        points: summaries.iter().filter(|s| &s.label() == first).map(|s| (s.axis_value, s.ref_ber)).collect(),
        dashed: true,
    });

    let x_title = axis_title(&rows[0].axis);
    let labels: Vec<&str> = ber.iter().map(|s| s.label.as_str()).collect();
    let legend_rows = labels.len().div_ceil(3);
    let width = 2.0 * PANEL_W;
    let height = PANEL_H + LEGEND_H * legend_rows as f64 + 10.0;
    let mut svg = String::new();
    let write = |svg: &mut String| -> std::fmt::Result {
        writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif">"#
        )?;
        writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#)?;
        panel(svg, 0.0, "MSE", x_title, "MSE [dB]", &mse, false)?;
        panel(svg, PANEL_W, "BER", x_title, "BER", &ber, true)?;
        for (idx, label) in labels.iter().enumerate() {
            let (col, row) = (idx % 3, idx / 3);
            let x = MARGIN + col as f64 * (width - MARGIN) / 3.0;
            let y = PANEL_H + LEGEND_H * row as f64;
            let color = COLORS[idx % COLORS.len()];
            writeln!(
                svg,
                r#"<line x1="{x:.1}" x2="{:.1}" y1="{y:.1}" y2="{y:.1}" stroke="{color}" stroke-width="2"/><text x="{:.1}" y="{:.1}" font-size="11">{label}</text>"#,
                x + 18.0,
                x + 24.0,
                y + 4.0
            )?;
        }
        writeln!(svg, "</svg>")
    };
    write(&mut svg).map_err(|e| HarnessError::Csv(e.to_string()))?;
    Ok(svg)
}
