use std::fmt::Write as _;
use std::io;
use std::path::Path;

use super::{rank_order, RankSummary};

const WIDTH: f64 = 800.0;
const LEFT: f64 = 160.0;
const RIGHT: f64 = 640.0;
const AXIS_Y: f64 = 80.0;
const ROW: f64 = 22.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Render a critical-difference diagram. Rank 1 sits at the left end of the
/// axis. Each group of statistically indistinguishable methods is drawn as
/// a `<line class="group">` whose `data-members` lists the method names.
pub fn cd_diagram_svg(summary: &RankSummary) -> String {
    let k = summary.methods.len().max(2);
    let x = |rank: f64| LEFT + (rank - 1.0) / (k as f64 - 1.0) * (RIGHT - LEFT);
    let order = rank_order(&summary.avg_ranks);
    let half = order.len().div_ceil(2);
    let label_rows = half.max(order.len() - half);
    let group_top = AXIS_Y + 20.0;
    let labels_top = group_top + summary.groups.len() as f64 * 8.0 + 20.0;
    let height = labels_top + label_rows as f64 * ROW + 20.0;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="13">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);

    // CD bar
    let cd_end = x(1.0 + summary.cd).min(RIGHT);
    let _ = writeln!(
        svg,
        r#"<line class="cd" x1="{LEFT:.2}" y1="30" x2="{cd_end:.2}" y2="30" stroke="black" stroke-width="2"/>"#
    );
    let _ = writeln!(svg, r#"<text x="{LEFT:.2}" y="22">CD = {:.3}</text>"#, summary.cd);

    // axis and ticks
    let _ = writeln!(
        svg,
        r#"<line class="axis" x1="{LEFT:.2}" y1="{AXIS_Y}" x2="{RIGHT:.2}" y2="{AXIS_Y}" stroke="black"/>"#
    );
    for r in 1..=k {
        let tx = x(r as f64);
        let _ = writeln!(
            svg,
            r#"<line x1="{tx:.2}" y1="{}" x2="{tx:.2}" y2="{AXIS_Y}" stroke="black"/><text x="{tx:.2}" y="{}" text-anchor="middle">{r}</text>"#,
            AXIS_Y - 6.0,
            AXIS_Y - 10.0
        );
    }

    for (g, members) in summary.groups.iter().enumerate() {
        let lo = summary.avg_ranks[members[0]];
        let hi = summary.avg_ranks[*members.last().expect("groups are non-empty")];
        let y = group_top + g as f64 * 8.0;
        let names: Vec<String> = members.iter().map(|&i| escape(&summary.methods[i])).collect();
        let _ = writeln!(
            svg,
            r#"<line class="group" data-members="{}" x1="{:.2}" y1="{y}" x2="{:.2}" y2="{y}" stroke="black" stroke-width="4"/>"#,
            names.join(","),
            x(lo) - 3.0,
            x(hi) + 3.0
        );
    }

    // best half labelled on the left, the rest on the right
    for (pos, &i) in order.iter().enumerate() {
        let rank = summary.avg_ranks[i];
        let (row, anchor, end_x) = if pos < half {
            (pos, "end", LEFT - 20.0)
        } else {
            (order.len() - 1 - pos, "start", RIGHT + 20.0)
        };
        let y = labels_top + row as f64 * ROW;
        let mx = x(rank);
        let _ = writeln!(
            svg,
            r#"<polyline class="method" points="{mx:.2},{AXIS_Y} {mx:.2},{y} {end_x:.2},{y}" fill="none" stroke="black"/>"#
        );
        let tx = if anchor == "end" { end_x - 4.0 } else { end_x + 4.0 };
        let _ = writeln!(
            svg,
            r#"<text x="{tx:.2}" y="{:.2}" text-anchor="{anchor}">{} ({rank:.2})</text>"#,
            y + 4.0,
            escape(&summary.methods[i])
        );
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn cd_diagram(summary: &RankSummary, path: &Path) -> io::Result<()> {
    std::fs::write(path, cd_diagram_svg(summary))
}
