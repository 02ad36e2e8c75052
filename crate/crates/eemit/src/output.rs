//! CSV tables and quick-look SVG plots.
//!
//! Floats are written in Rust's shortest round-trip form, so a table read back
//! reproduces the computed values exactly and repeated runs give identical bytes.

use std::fmt::Write as _;
use std::io;

use eemit_core::basin::BasinGrid;
use eemit_core::scan::{Grid, ScanRow};
use eemit_core::{EEStats, Histogram, PeakSeries, Trajectory};

fn f(v: f64) -> String {
    v.to_string()
}

fn opt(v: Option<f64>) -> String {
    v.map(f).unwrap_or_default()
}

type Csv<W> = csv::Writer<W>;

fn writer<W: io::Write>(w: W, header: &[&str]) -> csv::Result<Csv<W>> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header)?;
    Ok(out)
}

pub fn trajectory<W: io::Write>(w: W, traj: &Trajectory) -> csv::Result<()> {
    let mut out = writer(w, &["t", "x", "y"])?;
    for (t, x, y) in traj.rows() {
        out.write_record([f(t), f(x), f(y)])?;
    }
    out.flush()?;
    Ok(())
}

pub fn peaks<W: io::Write>(w: W, peaks: &PeakSeries) -> csv::Result<()> {
    let mut out = writer(w, &["t", "value"])?;
    for (t, v) in peaks.times.iter().zip(&peaks.values) {
        out.write_record([f(*t), f(*v)])?;
    }
    out.flush()?;
    Ok(())
}

pub fn stats<W: io::Write>(w: W, s: &EEStats) -> csv::Result<()> {
    let mut out = writer(
        w,
        &[
            "n",
            "mean",
            "sigma",
            "threshold",
            "peak_count",
            "ee_count",
            "probability",
            "d_max",
        ],
    )?;
    out.write_record([
        f(s.n),
        f(s.mean),
        f(s.sigma),
        f(s.threshold),
        s.peak_count.to_string(),
        s.ee_count.to_string(),
        f(s.probability),
        f(s.d_max),
    ])?;
    out.flush()?;
    Ok(())
}

pub fn histogram<W: io::Write>(w: W, h: &Histogram) -> csv::Result<()> {
    let mut out = writer(w, &["center", "count", "density"])?;
    for ((c, n), d) in h.centers.iter().zip(&h.counts).zip(&h.densities) {
        out.write_record([f(*c), n.to_string(), f(*d)])?;
    }
    out.flush()?;
    Ok(())
}

pub fn scan1d<W: io::Write>(w: W, rows: &[ScanRow]) -> csv::Result<()> {
    let mut out = writer(
        w,
        &[
            "param",
            "ic_index",
            "probability",
            "d_max",
            "mle",
            "diverged",
        ],
    )?;
    for row in rows {
        for r in &row.results {
            out.write_record([
                f(row.p1),
                r.ic_index.to_string(),
                opt(r.probability()),
                opt(r.d_max()),
                opt(r.mle),
                u8::from(r.diverged()).to_string(),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn scan2d<W: io::Write>(w: W, grid: &Grid) -> csv::Result<()> {
    let mut out = writer(w, &["p1", "p2", "probability", "diverged"])?;
    for row in &grid.rows {
        let r = &row.results[0];
        out.write_record([
            f(row.p1),
            opt(row.p2),
            opt(r.probability()),
            u8::from(r.diverged()).to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn bifurcation<W: io::Write>(w: W, rows: &[ScanRow]) -> csv::Result<()> {
    let mut out = writer(w, &["param", "ic_index", "maximum"])?;
    for row in rows {
        for r in &row.results {
            for m in &r.bif_maxima {
                out.write_record([f(row.p1), r.ic_index.to_string(), f(*m)])?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

pub fn basin<W: io::Write>(w: W, grid: &BasinGrid) -> csv::Result<()> {
    let mut out = writer(w, &["x0", "y0", "label"])?;
    let plan = &grid.plan;
    for j in 0..plan.ny {
        for i in 0..plan.nx {
            out.write_record([f(plan.x(i)), f(plan.y(j)), grid.at(i, j).label.to_string()])?;
        }
    }
    out.flush()?;
    Ok(())
}

pub struct MleRow {
    pub x0: f64,
    pub y0: f64,
    pub mle: Option<f64>,
    pub label: &'static str,
}

pub fn mle<W: io::Write>(w: W, rows: &[MleRow]) -> csv::Result<()> {
    let mut out = writer(w, &["x0", "y0", "mle", "label"])?;
    for r in rows {
        out.write_record([f(r.x0), f(r.y0), opt(r.mle), r.label.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 50.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn fit<'a>(points: impl Iterator<Item = &'a (f64, f64)>) -> Frame {
        let mut x = (f64::INFINITY, f64::NEG_INFINITY);
        let mut y = x;
        for &(a, b) in points.filter(|(a, b)| a.is_finite() && b.is_finite()) {
            x = (x.0.min(a), x.1.max(a));
            y = (y.0.min(b), y.1.max(b));
        }
        let widen = |(lo, hi): (f64, f64)| {
            if !lo.is_finite() {
                (0.0, 1.0)
            } else if lo == hi {
                (lo - 0.5, hi + 0.5)
            } else {
                (lo, hi)
            }
        };
        Frame {
            x: widen(x),
            y: widen(y),
        }
    }

    fn px(&self, v: f64) -> f64 {
        PAD + (v - self.x.0) / (self.x.1 - self.x.0) * (W - 2.0 * PAD)
    }

    fn py(&self, v: f64) -> f64 {
        H - PAD - (v - self.y.0) / (self.y.1 - self.y.0) * (H - 2.0 * PAD)
    }
}

fn open(svg: &mut String, frame: &Frame, xlabel: &str, ylabel: &str) {
    let _ = write!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">
<rect width="{W}" height="{H}" fill="white"/>
<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>
<text x="{}" y="{}" text-anchor="middle">{xlabel}</text>
<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{ylabel}</text>
<text x="{PAD}" y="{}" text-anchor="start">{}</text>
<text x="{}" y="{}" text-anchor="end">{}</text>
<text x="{}" y="{}" text-anchor="end">{}</text>
<text x="{}" y="{}" text-anchor="end">{}</text>
"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD,
        W / 2.0,
        H - 10.0,
        H / 2.0,
        H / 2.0,
        H - PAD + 15.0,
        short(frame.x.0),
        W - PAD,
        H - PAD + 15.0,
        short(frame.x.1),
        PAD - 4.0,
        H - PAD,
        short(frame.y.0),
        PAD - 4.0,
        PAD + 4.0,
        short(frame.y.1),
    );
}

fn short(v: f64) -> String {
    format!("{v:.4e}")
}

/// Polyline per series.
pub fn line_plot(series: &[Vec<(f64, f64)>], xlabel: &str, ylabel: &str) -> String {
    let frame = Frame::fit(series.iter().flatten());
    let mut svg = String::new();
    open(&mut svg, &frame, xlabel, ylabel);
    for (k, s) in series.iter().enumerate() {
        let pts: Vec<String> = s
            .iter()
            .filter(|(a, b)| a.is_finite() && b.is_finite())
            .map(|&(a, b)| format!("{:.2},{:.2}", frame.px(a), frame.py(b)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{}" stroke-width="1" points="{}"/>"#,
            COLORS[k % COLORS.len()],
            pts.join(" ")
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Dots, one colour per series (bifurcation diagrams, phase portraits).
pub fn scatter_plot(series: &[Vec<(f64, f64)>], xlabel: &str, ylabel: &str) -> String {
    let frame = Frame::fit(series.iter().flatten());
    let mut svg = String::new();
    open(&mut svg, &frame, xlabel, ylabel);
    for (k, s) in series.iter().enumerate() {
        let _ = writeln!(svg, r#"<g fill="{}">"#, COLORS[k % COLORS.len()]);
        for &(a, b) in s.iter().filter(|(a, b)| a.is_finite() && b.is_finite()) {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="0.8"/>"#,
                frame.px(a),
                frame.py(b)
            );
        }
        svg.push_str("</g>\n");
    }
    svg.push_str("</svg>\n");
    svg
}

/// Colour per cell of an `nx` by `ny` grid; `cells[j * nx + i]` sits at column `i`, row `j`
/// (row 0 at the bottom).
pub fn raster(
    nx: usize,
    ny: usize,
    x: (f64, f64),
    y: (f64, f64),
    cells: &[String],
    xlabel: &str,
    ylabel: &str,
) -> String {
    let frame = Frame { x, y };
    let mut svg = String::new();
    open(&mut svg, &frame, xlabel, ylabel);
    let cw = (W - 2.0 * PAD) / nx as f64;
    let ch = (H - 2.0 * PAD) / ny as f64;
    for j in 0..ny {
        for i in 0..nx {
            let _ = writeln!(
                svg,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                PAD + i as f64 * cw,
                H - PAD - (j + 1) as f64 * ch,
                cw + 0.05,
                ch + 0.05,
                cells[j * nx + i]
            );
        }
    }
    svg.push_str("</svg>\n");
    svg
}

/// Black for zero, grey ramp up to white at `top` and above; red for missing values.
pub fn probability_color(p: Option<f64>, top: f64) -> String {
    match p {
        None => "#ff0000".into(),
        Some(p) => {
            let level = if top > 0.0 {
                (p / top).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let v = (level * 255.0).round() as u8;
            format!("#{v:02x}{v:02x}{v:02x}")
        }
    }
}
