//! File emission: atomic writes, SVG line plots and heatmaps, 16-bit PGM.
//! CSV is the contract; SVG is a dependency-light convenience rendering.

use crate::error::CliResult;
use std::fmt::Write as _;
use std::path::Path;

/// Writes via a sibling temp file + rename so readers never observe a
/// partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

const PLOT_W: f64 = 860.0;
const PLOT_H: f64 = 600.0;
const MARGIN_L: f64 = 80.0;
const MARGIN_R: f64 = 30.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 60.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

pub struct Series<'a> {
    pub label: String,
    pub points: &'a [(f64, f64)],
}

fn nice_label(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.abs() >= 1e-2 && v.abs() < 1e4 {
        format!("{v:.3}")
    } else {
        format!("{v:.2e}")
    }
}

/// Polyline plot with axes, ticks and a legend.
pub fn svg_line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for s in series {
        for &(x, y) in s.points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if !x_min.is_finite() {
        x_min = 0.0;
        x_max = 1.0;
        y_min = 0.0;
        y_max = 1.0;
    }
    if x_max == x_min {
        x_max = x_min + 1.0;
    }
    if y_max == y_min {
        y_max = y_min + 1.0;
    }
    let x_pad = 0.04 * (x_max - x_min);
    let y_pad = 0.06 * (y_max - y_min);
    let (x0, x1) = (x_min - x_pad, x_max + x_pad);
    let (y0, y1) = (y_min - y_pad, y_max + y_pad);
    let to_px = |x: f64, y: f64| {
        (
            MARGIN_L + (x - x0) / (x1 - x0) * (PLOT_W - MARGIN_L - MARGIN_R),
            PLOT_H - MARGIN_B - (y - y0) / (y1 - y0) * (PLOT_H - MARGIN_T - MARGIN_B),
        )
    };

    let mut svg = String::new();
    let _ = write!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{PLOT_W}" height="{PLOT_H}" viewBox="0 0 {PLOT_W} {PLOT_H}">
<rect width="100%" height="100%" fill="white"/>
<text x="{:.1}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{title}</text>
"#,
        PLOT_W / 2.0
    );

    // axes
    let (ax0, ay0) = (MARGIN_L, PLOT_H - MARGIN_B);
    let _ = writeln!(
        svg,
        "<line x1=\"{ax0}\" y1=\"{ay0}\" x2=\"{:.1}\" y2=\"{ay0}\" stroke=\"black\"/>\n<line x1=\"{ax0}\" y1=\"{ay0}\" x2=\"{ax0}\" y2=\"{MARGIN_T}\" stroke=\"black\"/>",
        PLOT_W - MARGIN_R
    );
    for k in 0..=5 {
        let t = k as f64 / 5.0;
        let xv = x0 + t * (x1 - x0);
        let yv = y0 + t * (y1 - y0);
        let (px, _) = to_px(xv, y0);
        let (_, py) = to_px(x0, yv);
        let _ = writeln!(
            svg,
            "<line x1=\"{px:.1}\" y1=\"{ay0}\" x2=\"{px:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n<text x=\"{px:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>",
            ay0 + 5.0,
            ay0 + 20.0,
            nice_label(xv)
        );
        let _ = writeln!(
            svg,
            "<line x1=\"{:.1}\" y1=\"{py:.1}\" x2=\"{ax0}\" y2=\"{py:.1}\" stroke=\"black\"/>\n<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{}</text>",
            ax0 - 5.0,
            ax0 - 8.0,
            py + 4.0,
            nice_label(yv)
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{x_label}</text>",
        (MARGIN_L + PLOT_W - MARGIN_R) / 2.0,
        PLOT_H - 14.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"18\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.1})\">{y_label}</text>",
        (MARGIN_T + PLOT_H - MARGIN_B) / 2.0,
        (MARGIN_T + PLOT_H - MARGIN_B) / 2.0
    );

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut d = String::new();
        for &(x, y) in s.points {
            let (px, py) = to_px(x, y);
            let _ = write!(d, "{px:.2},{py:.2} ");
        }
        let _ = writeln!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.6\"/>",
            d.trim_end()
        );
        for &(x, y) in s.points {
            let (px, py) = to_px(x, y);
            let _ = writeln!(
                svg,
                "<circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"2.4\" fill=\"{color}\"/>"
            );
        }
        let ly = MARGIN_T + 16.0 * i as f64 + 6.0;
        let _ = writeln!(
            svg,
            "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"12\" height=\"4\" fill=\"{color}\"/>\n<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            PLOT_W - MARGIN_R - 190.0,
            ly - 2.0,
            PLOT_W - MARGIN_R - 172.0,
            ly + 3.0,
            s.label
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Grayscale heatmap of a row-major raster with physical axis extents.
#[allow(clippy::too_many_arguments)]
pub fn svg_heatmap(
    title: &str,
    x_label: &str,
    y_label: &str,
    values: &[f64],
    nx: usize,
    ny: usize,
    x_extent: (f64, f64),
    y_extent: (f64, f64),
) -> String {
    assert_eq!(values.len(), nx * ny);
    // downsample to keep the file size sane
    let step_x = nx.div_ceil(200);
    let step_y = ny.div_ceil(200);
    let cols = nx.div_ceil(step_x);
    let rows = ny.div_ceil(step_y);
    let max = values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);

    let plot_w = PLOT_W - MARGIN_L - MARGIN_R;
    let plot_h = PLOT_H - MARGIN_T - MARGIN_B;
    let cell_w = plot_w / cols as f64;
    let cell_h = plot_h / rows as f64;

    let mut svg = String::new();
    let _ = write!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{PLOT_W}" height="{PLOT_H}" viewBox="0 0 {PLOT_W} {PLOT_H}">
<rect width="100%" height="100%" fill="white"/>
<text x="{:.1}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{title}</text>
"#,
        PLOT_W / 2.0
    );
    for r in 0..rows {
        for c in 0..cols {
            let v = values[(r * step_y).min(ny - 1) * nx + (c * step_x).min(nx - 1)];
            let g = (255.0 * (v / max).clamp(0.0, 1.0)).round() as u8;
            let _ = writeln!(
                svg,
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"rgb({g},{g},{g})\"/>",
                MARGIN_L + c as f64 * cell_w,
                MARGIN_T + (rows - 1 - r) as f64 * cell_h,
                cell_w + 0.5,
                cell_h + 0.5
            );
        }
    }
    let _ = writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{x_label} [{} .. {}]</text>",
        (MARGIN_L + PLOT_W - MARGIN_R) / 2.0,
        PLOT_H - 14.0,
        nice_label(x_extent.0),
        nice_label(x_extent.1)
    );
    let _ = writeln!(
        svg,
        "<text x=\"18\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.1})\">{y_label} [{} .. {}]</text>",
        (MARGIN_T + PLOT_H - MARGIN_B) / 2.0,
        (MARGIN_T + PLOT_H - MARGIN_B) / 2.0,
        nice_label(y_extent.0),
        nice_label(y_extent.1)
    );
    svg.push_str("</svg>\n");
    svg
}

/// Binary 16-bit PGM (P5, maxval 65535, big-endian), peak-normalized.
pub fn pgm16(values: &[f64], width: usize, height: usize) -> Vec<u8> {
    assert_eq!(values.len(), width * height);
    let max = values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut out = format!("P5\n{width} {height}\n65535\n").into_bytes();
    for v in values {
        let q = ((v / max).clamp(0.0, 1.0) * 65535.0).round() as u16;
        out.extend_from_slice(&q.to_be_bytes());
    }
    out
}
