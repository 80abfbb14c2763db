//! Accuracy-curve charts from `t,acc` curve files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

pub fn read_curve(path: &Path) -> Result<Vec<(f64, f64)>> {
    let mut reader = csv::Reader::from_path(path).with_context(|| format!("cannot open {}", path.display()))?;
    if reader.headers()?.iter().ne(["t", "acc"]) {
        bail!("{}: expected header `t,acc`", path.display());
    }
    let mut points = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row?;
        let parse = |j: usize| -> Result<f64> {
            row.get(j)
                .and_then(|s| s.parse().ok())
                .with_context(|| format!("{} row {}: bad value", path.display(), i + 2))
        };
        points.push((parse(0)?, parse(1)?));
    }
    Ok(points)
}

/// Line chart of sliding accuracy (0 to 100) against instance index.
pub fn curve_svg(title: &str, points: &[(f64, f64)]) -> String {
    let (w, h, left, right, top, bottom) = (640.0, 320.0, 60.0, 620.0, 30.0, 280.0);
    let t_max = points.iter().map(|p| p.0).fold(1.0, f64::max);
    let x = |t: f64| left + t / t_max * (right - left);
    let y = |acc: f64| bottom - acc.clamp(0.0, 100.0) / 100.0 * (bottom - top);
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let title = title.replace('&', "&amp;").replace('<', "&lt;");
    let _ = writeln!(svg, r#"<text x="{left}" y="18">{title}</text>"#);
    let _ = writeln!(
        svg,
        r#"<path d="M{left},{top} L{left},{bottom} L{right},{bottom}" fill="none" stroke="black"/>"#
    );
    for acc in [0.0, 25.0, 50.0, 75.0, 100.0] {
        let yy = y(acc);
        let _ = writeln!(
            svg,
            r##"<line x1="{left}" y1="{yy}" x2="{right}" y2="{yy}" stroke="#ddd"/><text x="{}" y="{}" text-anchor="end">{acc}</text>"##,
            left - 6.0,
            yy + 4.0
        );
    }
    let _ = writeln!(svg, r#"<text x="{right}" y="{}" text-anchor="end">{t_max}</text>"#, bottom + 16.0);
    let pts: Vec<String> = points.iter().map(|&(t, a)| format!("{:.2},{:.2}", x(t), y(a))).collect();
    let _ = writeln!(svg, r#"<polyline class="curve" points="{}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#, pts.join(" "));
    svg.push_str("</svg>\n");
    svg
}

/// Render every `*.csv` of `curves` into `plots`; returns the written files.
pub fn plot_dir(curves: &Path, plots: &Path) -> Result<Vec<PathBuf>> {
    let mut inputs: Vec<PathBuf> = fs::read_dir(curves)
        .with_context(|| format!("cannot read {}", curves.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .collect();
    inputs.sort();
    fs::create_dir_all(plots)?;
    let mut written = Vec::new();
    for input in inputs {
        let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("curve").to_string();
        let target = plots.join(format!("{stem}.svg"));
        fs::write(&target, curve_svg(&stem, &read_curve(&input)?))?;
        written.push(target);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svg_has_one_point_per_sample() {
        let svg = curve_svg("x", &[(1000.0, 50.0), (2000.0, 75.0), (3000.0, 100.0)]);
        let line = svg.lines().find(|l| l.contains(r#"class="curve""#)).unwrap();
        assert_eq!(line.matches(',').count(), 3);
        assert!(svg.ends_with("</svg>\n"));
    }
}
